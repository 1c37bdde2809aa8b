# -*- coding: utf-8 -*-

from .test_figure import TestFigure
