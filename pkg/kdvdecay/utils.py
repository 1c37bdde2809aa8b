# -*- coding: utf-8 -*-

"""
kdvdecay.utils
~~~~~~~~~~~~~~

This module contains kdvdecay's utilities.

"""

__all__ = ('UNDERFLOW_FLOOR', 'LOG_OVERFLOW', 'is_power_of_two', 'next_fast_size',
           'periodic_trapezoid', 'trapezoid', 'local_maxima', 'canonical_json',
           'config_hash', 'jsonable', 'relative_drift', 'format_float')

from typing import Tuple, Any, Mapping
import numpy as np
import hashlib
import json
import math

#-------------------------------------------------------------------------------

UNDERFLOW_FLOOR: float = 1e-300 # |u| below this contributes nothing to weighted sums
LOG_OVERFLOW: float = 709.0 # log of the largest finite double, rounded down

#-------------------------------------------------------------------------------

def is_power_of_two(n: int) -> bool:
    """Check if n is a positive integral power of two."""
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0

def next_fast_size(m: int) -> int:
    """Smallest 2^a 3^b 5^c not below m."""
    best = 2 ** math.ceil(math.log2(max(m, 1)))
    p5 = 1
    while p5 < best:
        p35 = p5
        while p35 < best:
            p = p35
            while p < m:
                p *= 2
            best = min(best, p)
            p35 *= 3
        p5 *= 5
    return best

#-------------------------------------------------------------------------------

def periodic_trapezoid(values: np.ndarray, dx: float) -> float:
    """Trapezoid rule for a periodic integrand sampled on a uniform grid."""
    return float(dx * np.sum(values))

_trapezoid = getattr(np, 'trapezoid', None) or np.trapz # renamed in numpy 2.0

def trapezoid(y: np.ndarray, t: np.ndarray) -> float:
    """Trapezoid rule on (possibly non-uniform) nodes."""
    y, t = np.asarray(y, dtype=float), np.asarray(t, dtype=float)
    if y.size < 2:
        return 0.0
    return float(_trapezoid(y, t))

def relative_drift(series: np.ndarray) -> float:
    """Largest |q(t) - q(0)| relative to |q(0)|, absolute when q(0) is zero."""
    series = np.asarray(series, dtype=float)
    scale = abs(series[0]) if series[0] != 0 else 1.0
    return float(np.max(np.abs(series - series[0])) / scale)

#-------------------------------------------------------------------------------

def local_maxima(x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Interior local maxima of y with a parabolic refinement through the three
    samples around each maximum. Returns refined positions and values.

    """

    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if y.size < 3:
        return np.empty(0), np.empty(0)

    left, mid, right = y[:-2], y[1:-1], y[2:]
    idx = np.nonzero((mid > left) & (mid >= right))[0] + 1
    if idx.size == 0:
        return np.empty(0), np.empty(0)

    y0, y1, y2 = y[idx - 1], y[idx], y[idx + 1]
    curvature = y0 - 2.0 * y1 + y2
    safe = np.where(curvature < 0, curvature, -np.inf)
    offset = 0.5 * (y0 - y2) / safe
    h = x[idx + 1] - x[idx]

    positions = x[idx] + offset * h
    values = y1 - 0.25 * (y0 - y2) * offset
    return positions, values

#-------------------------------------------------------------------------------

def canonical_json(data: Any) -> str:
    """JSON dump with sorted keys and compact separators."""
    return json.dumps(data, sort_keys=True, separators=(',', ':'), default=jsonable)

def config_hash(data: Mapping[str, Any]) -> str:
    return hashlib.sha256(canonical_json(data).encode('utf-8')).hexdigest()

def jsonable(value: Any) -> Any:
    """Plain Python value for numpy scalars, arrays and sets."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f'object of type {type(value).__name__} is not JSON serializable')

def format_float(value: float) -> str:
    """Shortest round-tripping repr, stable across platforms."""
    return repr(float(value))

#-------------------------------------------------------------------------------
