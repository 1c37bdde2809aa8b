# -*- coding: utf-8 -*-

from .test_experiments import TestExperiments
