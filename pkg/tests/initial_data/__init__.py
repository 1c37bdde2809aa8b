from .test_initial_data import TestInitialData
