# -*- coding: utf-8 -*-

"""
kdvdecay.core
~~~~~~~~~~~~~

This module contains grids, sampled fields and the spectral calculus used by
every other module: transforms, derivatives, Fourier-multiplier (Sobolev)
norms and trapezoid quadrature on the periodic truncation [-L, L) of the line.

"""

__all__ = ('make_grid', 'sample', 'to_spectral', 'to_physical', 'derivative',
           'spectral_multiplier', 'bessel_potential', 'sobolev_norm', 'l2_norm',
           'integrate', 'reflect', 'with_values', 'is_under_resolved',
           'UNDER_RESOLVED')

from .base import Grid, Field, SpectralField
from .exceptions import GridError, FieldError
from .utils import is_power_of_two, periodic_trapezoid

from typing import Callable, Union
from numbers import Number
import numpy as np
import logging
import math

logger = logging.getLogger(__name__)

#-------------------------------------------------------------------------------

UNDER_RESOLVED: str = 'under_resolved'
RESOLUTION_TOLERANCE: float = 1e-8 # top third of the spectrum relative to its peak

#-------------------------------------------------------------------------------

def make_grid(L: float, n: int) -> Grid:
    """Build the periodic grid on [-L, L) with n points."""
    if not (isinstance(L, Number) and math.isfinite(L) and L > 0):
        raise GridError("'L' must be a positive number")
    if not is_power_of_two(n) or n < 16:
        raise GridError("'n' must be a power of two >= 16")

    return Grid(float(L), int(n))

def sample(f: Callable[[np.ndarray], Union[np.ndarray, float]], grid: Grid,
           t: float = 0.0) -> Field:
    """Sample a vectorized function of x on the grid nodes."""
    values = np.asarray(f(grid.x), dtype=float)
    values = np.broadcast_to(values, grid.x.shape).copy()

    if not np.all(np.isfinite(values)):
        bad = grid.x[~np.isfinite(values)][0]
        raise FieldError(f'non-finite sample at x = {bad:g}')

    return Field(grid, values, t)

def with_values(u: Field, values: np.ndarray, t: float = None, flags=()) -> Field:
    """New field on the same grid."""
    return Field(u.grid, values, u.t if t is None else t, flags)

#-------------------------------------------------------------------------------

def to_spectral(u: Field) -> SpectralField:
    return SpectralField(u.grid, np.fft.fft(u.values), u.t)

def to_physical(s: SpectralField) -> Field:
    return Field(s.grid, np.fft.ifft(s.coeffs).real, s.t)

def is_under_resolved(coeffs: np.ndarray, tolerance: float = RESOLUTION_TOLERANCE) -> bool:
    """True when the top third of the spectrum carries more than `tolerance` of the peak."""
    magnitude = np.abs(np.fft.fftshift(coeffs))
    peak = np.max(magnitude)
    if peak == 0:
        return False

    n = magnitude.size
    cut = n // 3
    top = np.concatenate([magnitude[:n // 2 - cut], magnitude[n // 2 + cut:]])
    return bool(top.size and np.max(top) > tolerance * peak)

#-------------------------------------------------------------------------------

def spectral_multiplier(u: Field, symbol: np.ndarray) -> Field:
    """Apply a multiplier given in FFT ordering and return the real part."""
    values = np.fft.ifft(np.fft.fft(u.values) * symbol).real
    return Field(u.grid, values, u.t, u.flags)

def derivative(u: Field, order: int = 1) -> Field:
    """
    Spectral derivative (i xi)^order of a field, order 1, 2 or 3. The Nyquist
    mode is dropped for odd orders so that the result stays real. Fields whose
    spectrum is not negligible in its top third come back flagged as
    under-resolved.

    """

    if order not in (1, 2, 3):
        raise FieldError("'order' must be 1, 2 or 3")

    grid = u.grid
    xi = grid.odd_wavenumbers if order % 2 else grid.fft_wavenumbers
    coeffs = np.fft.fft(u.values)

    flags = tuple(u.flags)
    if is_under_resolved(coeffs) and UNDER_RESOLVED not in flags:
        logger.warning('derivative of an under-resolved field at t=%g', u.t)
        flags += (UNDER_RESOLVED,)

    values = np.fft.ifft(coeffs * (1j * xi) ** order).real
    return Field(grid, values, u.t, flags)

def bessel_potential(u: Field, s: float) -> Field:
    """J^s u with J^s the multiplier (1 + xi^2)^{s/2}."""
    symbol = (1.0 + u.grid.fft_wavenumbers ** 2) ** (s / 2.0)
    return spectral_multiplier(u, symbol)

#-------------------------------------------------------------------------------

def integrate(u: Field) -> float:
    return periodic_trapezoid(u.values, u.grid.dx)

def l2_norm(u: Field) -> float:
    return math.sqrt(periodic_trapezoid(u.values ** 2, u.grid.dx))

def sobolev_norm(u: Field, s: float) -> float:
    """
    Discrete H^s norm |(1 + xi^2)^{s/2} u_hat|_2, scaled so that it agrees with
    the trapezoid L2 norm by Parseval. s = 0 goes through `l2_norm`.

    """

    if not (isinstance(s, Number) and math.isfinite(s)) or s < 0:
        raise FieldError("'s' must be non-negative")
    if s == 0:
        return l2_norm(u)

    grid = u.grid
    coeffs = np.fft.fft(u.values)
    weights = (1.0 + grid.fft_wavenumbers ** 2) ** s
    total = 2.0 * grid.half_width / grid.n_points ** 2 * np.sum(weights * np.abs(coeffs) ** 2)
    return math.sqrt(float(total))

#-------------------------------------------------------------------------------

def reflect(u: Field, t: float = None) -> Field:
    """u(x) -> u(-x) on the periodic grid."""
    values = np.roll(u.values[::-1], 1)
    return Field(u.grid, values, u.t if t is None else t, u.flags)

#-------------------------------------------------------------------------------
