# -*- coding: utf-8 -*-

from .test_config import TestConfig
