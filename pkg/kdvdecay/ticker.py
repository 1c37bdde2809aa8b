# -*- coding: utf-8 -*-

"""
kdvdecay.ticker
~~~~~~~~~~~~~~~

This module contains the tick locators and formatters of `SeriesFigure`.
`AutoLocator` picks "nice" steps (1, 2, 2.5, 5 times a power of ten) the same
way matplotlib's MaxNLocator does, in a reduced form.

"""

__all__ = ('Locator', 'AutoLocator', 'Formatter', 'NullFormatter', 'ScalarFormatter',
           'scale_range', 'padded_limits')

from decimal import Context
from typing import Sequence, Tuple
import numpy as np
import math

_CONTEXT = Context(prec=10)

#-------------------------------------------------------------------------------

def _tidy(value: float) -> float:
    """Strip binary noise such as 0.30000000000000004 -> 0.3."""
    return float(_CONTEXT.create_decimal(repr(float(value))).normalize())

def scale_range(vmin: float, vmax: float, n: int = 1, threshold: int = 100) -> Tuple[float, float]:
    """
    Power-of-ten scale of (vmax - vmin) / n, and an offset that is non-zero
    only when the range sits far from zero compared to its width.

    """

    span = abs(vmax - vmin)
    middle = (vmax + vmin) / 2.0
    if middle == 0 or abs(middle) / span < threshold:
        offset = 0.0
    else:
        offset = math.copysign(10 ** math.floor(math.log10(abs(middle))), middle)
    return 10 ** math.floor(math.log10(span / n)), offset

def padded_limits(values: np.ndarray) -> Tuple[float, float]:
    """Finite limits of `values`, widened when they collapse to a point."""
    finite = np.asarray(values, dtype=float)
    finite = finite[np.isfinite(finite)]
    if finite.size == 0:
        return 0.0, 1.0
    vmin, vmax = float(np.min(finite)), float(np.max(finite))
    if vmin == vmax:
        pad = 0.5 * abs(vmin) if vmin != 0 else 0.5
        return vmin - pad, vmax + pad
    return vmin, vmax

#-------------------------------------------------------------------------------

class _Edge(object):
    """Floor/ceil on a step lattice that forgives round-off near lattice points."""

    def __init__(self, step: float, offset: float):
        if step <= 0:
            raise ValueError("'step' must be positive")
        self.step = step
        if offset:
            digits = math.log10(abs(offset) / step)
            self.tolerance = min(0.4999, max(1e-10, 10 ** (digits - 12)))
        else:
            self.tolerance = 1e-10

    def floor(self, x: float) -> float:
        d, m = divmod(x, self.step)
        return d + 1 if abs(m / self.step - 1) < self.tolerance else d

    def ceil(self, x: float) -> float:
        d, m = divmod(x, self.step)
        return d if abs(m / self.step) < self.tolerance else d + 1

#-------------------------------------------------------------------------------

class Formatter(object):
    rotation = 0

    def __call__(self, value: float) -> str:
        raise NotImplementedError('Derived must override')

class NullFormatter(Formatter):

    def __call__(self, value: float) -> str:
        return ''

class ScalarFormatter(Formatter):
    """Compact %g labels; values within 1e-12 of the span from zero print as 0."""

    def __init__(self, precision: int = 4, span: float = 1.0):
        self.precision = precision
        self.span = span

    def __call__(self, value: float) -> str:
        if abs(value) < 1e-12 * self.span:
            return '0'
        return f'{value:.{self.precision}g}'

#-------------------------------------------------------------------------------

class Locator(object):

    def tick_values(self, vmin: float, vmax: float) -> np.ndarray:
        raise NotImplementedError('Derived must override')

class AutoLocator(Locator):

    def __init__(self, nbins: int = 8, steps: Sequence[float] = (1, 2, 2.5, 5, 10),
                 min_n_ticks: int = 2):
        steps = np.asarray(steps, dtype=float)
        if steps.size == 0 or np.any(np.diff(steps) <= 0) or steps[0] < 1 or steps[-1] > 10:
            raise ValueError('steps must be an increasing sequence of numbers in [1, 10]')
        if steps[0] != 1:
            steps = np.concatenate([[1.0], steps])
        if steps[-1] != 10:
            steps = np.concatenate([steps, [10.0]])

        self.nbins = nbins
        self.min_n_ticks = min_n_ticks
        self._staircase = np.concatenate([0.1 * steps[:-1], steps, [10.0 * steps[1]]])

    def tick_values(self, vmin: float, vmax: float) -> np.ndarray:
        if vmax < vmin:
            vmin, vmax = vmax, vmin
        if vmin == vmax:
            return np.asarray([vmin])

        scale, offset = scale_range(vmin, vmax, self.nbins)
        lo, hi = vmin - offset, vmax - offset
        candidates = self._staircase * scale
        first = int(np.nonzero(candidates >= (hi - lo) / self.nbins)[0][0])

        for index in range(first, -1, -1):
            step = candidates[index]
            base = (lo // step) * step
            edge = _Edge(step, offset)
            ticks = np.arange(edge.floor(lo - base), edge.ceil(hi - base) + 1) * step + base
            ticks = np.asarray([_tidy(t) for t in ticks])
            if np.count_nonzero((ticks >= lo) & (ticks <= hi)) >= self.min_n_ticks:
                break
        return ticks + offset

#-------------------------------------------------------------------------------
