from .test_core import TestCore
