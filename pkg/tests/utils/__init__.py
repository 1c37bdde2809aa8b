from .test_utils import TestUtils
