from .test_analytic import TestAnalytic
