# -*- coding: utf-8 -*-

from .test_cli import TestCli
