from .test_weights import TestWeights
