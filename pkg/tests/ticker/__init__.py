from .test_ticker import TestTicker
