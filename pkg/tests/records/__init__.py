# -*- coding: utf-8 -*-

from .test_records import TestRecords
