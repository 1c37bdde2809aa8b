from .test_solver import TestSolver
