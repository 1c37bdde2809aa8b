from .test_diagnostics import TestDiagnostics
