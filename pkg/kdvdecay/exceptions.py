# -*- coding: utf-8 -*-

"""
kdvdecay.exceptions
~~~~~~~~~~~~~~~~~~~

This module contains kdvdecay's exceptions. Every error raised on purpose by
the package derives from `KdvDecayError`, and most of them also derive from
the builtin a caller would naturally expect (`ValueError` for bad input).

"""

__all__ = ('KdvDecayError', 'GridError', 'FieldError', 'WeightError', 'SpecError',
           'FitError', 'ConfigError', 'BlowUpError', 'SaturationError')

from typing import Optional, Any

#-------------------------------------------------------------------------------

class KdvDecayError(Exception):
    pass

class GridError(KdvDecayError, ValueError):
    pass

class FieldError(KdvDecayError, ValueError):
    pass

class WeightError(KdvDecayError, ValueError):
    pass

class SpecError(KdvDecayError, ValueError):
    pass

class FitError(KdvDecayError, ValueError):
    pass

#-------------------------------------------------------------------------------

class ConfigError(KdvDecayError, ValueError):

    def __init__(self, message: str, path: str = '', line: Optional[int] = None):
        self.path = path
        self.line = line

        where = path
        if line is not None:
            where = f'{path} (line {line})' if path else f'line {line}'

        super().__init__(f'{where}: {message}' if where else message)

class BlowUpError(KdvDecayError, RuntimeError):

    def __init__(self, message: str, time: float, last_state: Any = None):
        self.time = time
        self.last_state = last_state
        super().__init__(message)

class SaturationError(KdvDecayError, ArithmeticError):
    pass

#-------------------------------------------------------------------------------
