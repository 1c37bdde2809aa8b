# -*- coding: utf-8 -*-

"""
kdvdecay.analytic
~~~~~~~~~~~~~~~~~

This module contains closed-form reference objects: the Airy function and the
linear group e^{-t d^3/dx^3}, traveling-wave solitons of the k-generalized KdV
equation, and the mollified-shifted initial data used to approximate rough
data by smooth data with no larger right-weighted norm.

"""

__all__ = ('AIRY_C1', 'AIRY_C2', 'airy', 'linear_propagate', 'airy_kernel_propagate',
           'soliton', 'soliton_derivative', 'soliton_ode_residual', 'bump',
           'mollify_shift')

from .base import Field, SolitonSpec
from .exceptions import FieldError, SpecError
from .utils import periodic_trapezoid

from typing import Callable, Union
from functools import lru_cache
import numpy as np
import logging
import math

logger = logging.getLogger(__name__)

ArrayOrFloat = Union[np.ndarray, float]

#-------------------------------------------------------------------------------

AIRY_C1: float = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0) # Ai(0)
AIRY_C2: float = 3.0 ** (-1.0 / 3.0) / math.gamma(1.0 / 3.0) # -Ai'(0)

AIRY_RANGE: float = 200.0
ASYMPTOTIC_FROM: float = 8.0
SERIES_UNTIL: float = 2.0
TAYLOR_NODE_STEP: float = 0.25
TAYLOR_TERMS: int = 60
ASYMPTOTIC_TERMS: int = 10
K_STEP: float = 0.05
K_EXTENT: float = 6.0

BUMP_MASS: float = 0.44399381616807943 # integral of exp(-1/(1-z^2)) over (-1, 1)

#-------------------------------------------------------------------------------

def _compensated_sum(terms) -> np.ndarray:
    """Neumaier summation over an iterable of equally shaped arrays."""
    total, correction = None, None
    for term in terms:
        if total is None:
            total, correction = term.copy(), np.zeros_like(term)
            continue
        running = total + term
        correction += np.where(np.abs(total) >= np.abs(term),
                               (total - running) + term,
                               (term - running) + total)
        total = running
    return total + correction

def _taylor_terms(y0: np.ndarray, dy0: np.ndarray, x0: np.ndarray, h: np.ndarray):
    """Terms a_n h^n of the Taylor expansion of a solution of y'' = x y about x0."""
    coeffs = [y0, dy0]
    yield y0
    yield dy0 * h
    power = h.copy()
    for n in range(2, TAYLOR_TERMS):
        lower = coeffs[-3] if n >= 3 else np.zeros_like(y0)
        a_n = (x0 * coeffs[-2] + lower) / (n * (n - 1))
        coeffs.append(a_n)
        power = power * h
        yield a_n * power

def _taylor_derivative_terms(y0, dy0, x0, h):
    coeffs = [y0, dy0]
    yield dy0
    power = h.copy()
    for n in range(2, TAYLOR_TERMS):
        lower = coeffs[-3] if n >= 3 else np.zeros_like(y0)
        a_n = (x0 * coeffs[-2] + lower) / (n * (n - 1))
        coeffs.append(a_n)
        yield n * a_n * power
        power = power * h

@lru_cache(maxsize=1)
def _airy_nodes():
    """Ai and Ai' at x = 0, -0.25, ..., -8, marched outward from the origin."""
    count = int(round(ASYMPTOTIC_FROM / TAYLOR_NODE_STEP)) + 1
    xs = -TAYLOR_NODE_STEP * np.arange(count)
    values, slopes = np.empty(count), np.empty(count)
    values[0], slopes[0] = AIRY_C1, -AIRY_C2

    h = np.asarray([-TAYLOR_NODE_STEP])
    for j in range(1, count):
        args = (np.asarray([values[j - 1]]), np.asarray([slopes[j - 1]]),
                np.asarray([xs[j - 1]]), h)
        values[j] = _compensated_sum(_taylor_terms(*args))[0]
        slopes[j] = _compensated_sum(_taylor_derivative_terms(*args))[0]
    return xs, values, slopes

def _airy_series(x: np.ndarray) -> np.ndarray:
    """Taylor expansion about the nearest node on [-8, 0]; Maclaurin for x > 0."""
    xs, values, slopes = _airy_nodes()
    index = np.clip(np.round(-x / TAYLOR_NODE_STEP), 0, xs.size - 1).astype(int)
    x0 = xs[index]
    return _compensated_sum(_taylor_terms(values[index], slopes[index], x0, x - x0))

def _airy_bessel(x: np.ndarray) -> np.ndarray:
    """(1/pi) sqrt(x/3) K_{1/3}(zeta) with K by the trapezoid rule in cosh form."""
    zeta = 2.0 / 3.0 * x ** 1.5
    s = np.arange(0.0, K_EXTENT + K_STEP / 2, K_STEP)
    weights = np.full(s.size, K_STEP)
    weights[0] *= 0.5
    integrand = np.exp(-np.outer(zeta, np.cosh(s) - 1.0)) * np.cosh(s / 3.0)
    k_third = np.exp(-zeta) * (integrand @ weights)
    return np.sqrt(x / 3.0) * k_third / math.pi

def _asymptotic_coefficients() -> np.ndarray:
    u = [1.0]
    for k in range(1, ASYMPTOTIC_TERMS):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k))
    return np.asarray(u)

def _airy_right(x: np.ndarray) -> np.ndarray:
    zeta = 2.0 / 3.0 * x ** 1.5
    u = _asymptotic_coefficients()
    orders = np.arange(u.size)[:, None]
    terms = (-1.0) ** orders * u[:, None] / zeta[None, :] ** orders
    magnitude = np.abs(terms)
    decreasing = np.vstack([np.ones((1, x.size), dtype=bool), magnitude[1:] < magnitude[:-1]])
    keep = np.cumprod(decreasing, axis=0).astype(bool)
    series = np.sum(np.where(keep, terms, 0.0), axis=0)
    return np.exp(-zeta) / (2.0 * math.sqrt(math.pi) * x ** 0.25) * series

def _airy_left(x: np.ndarray) -> np.ndarray:
    z = -x
    zeta = 2.0 / 3.0 * z ** 1.5
    u = _asymptotic_coefficients()
    even = sum((-1.0) ** m * u[2 * m] / zeta ** (2 * m) for m in range(u.size // 2))
    odd = sum((-1.0) ** m * u[2 * m + 1] / zeta ** (2 * m + 1) for m in range(u.size // 2))
    phase = zeta - math.pi / 4.0
    return (np.cos(phase) * even + np.sin(phase) * odd) / (math.sqrt(math.pi) * z ** 0.25)

def airy(x: ArrayOrFloat) -> ArrayOrFloat:
    """
    Airy function Ai normalized by Ai(0) = 3^{-2/3} / Gamma(2/3).

    Taylor series re-centered on a node grid over [-8, 2], the Bessel-K
    integral form on (2, 8] and asymptotic expansions beyond |x| = 8. Ten
    significant digits on [-20, 20].

    """

    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(xa) > AIRY_RANGE):
        logger.warning('Ai evaluated beyond |x| = %g; asymptotic values only', AIRY_RANGE)

    out = np.empty_like(xa)
    left = xa < -ASYMPTOTIC_FROM
    series = (xa >= -ASYMPTOTIC_FROM) & (xa <= SERIES_UNTIL)
    bessel = (xa > SERIES_UNTIL) & (xa <= ASYMPTOTIC_FROM)
    right = xa > ASYMPTOTIC_FROM

    if np.any(left):
        out[left] = _airy_left(xa[left])
    if np.any(series):
        out[series] = _airy_series(xa[series])
    if np.any(bessel):
        out[bessel] = _airy_bessel(xa[bessel])
    if np.any(right):
        with np.errstate(under='ignore'):
            out[right] = _airy_right(xa[right])

    return float(out[0]) if np.ndim(x) == 0 else out

#-------------------------------------------------------------------------------

def linear_propagate(u0: Field, t: float) -> Field:
    """Exact solution of v_t + v_xxx = 0 on the grid: multiply by e^{i xi^3 t}."""
    xi = u0.grid.odd_wavenumbers
    values = np.fft.ifft(np.fft.fft(u0.values) * np.exp(1j * xi ** 3 * t)).real
    return Field(u0.grid, values, u0.t + t, u0.flags)

def airy_kernel_propagate(u0: Field, t: float, x: ArrayOrFloat) -> ArrayOrFloat:
    """
    Direct quadrature of (3t)^{-1/3} int Ai((x - y)/(3t)^{1/3}) u0(y) dy over
    the grid. Meaningful only while the propagated field has not wrapped.

    """

    if t <= 0:
        raise FieldError("'t' must be positive for the kernel form")

    scale = (3.0 * t) ** (1.0 / 3.0)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    live = np.abs(u0.values) > 0
    y, v = u0.x[live], u0.values[live]

    out = np.asarray([periodic_trapezoid(airy((xp - y) / scale) * v, u0.grid.dx) for xp in xa])
    out /= scale
    return float(out[0]) if np.ndim(x) == 0 else out

#-------------------------------------------------------------------------------

def _sech_tanh(z: np.ndarray):
    decay = np.exp(-2.0 * np.abs(z))
    sech = 2.0 * np.exp(-np.abs(z)) / (1.0 + decay)
    tanh = np.sign(z) * (1.0 - decay) / (1.0 + decay)
    return sech, tanh

def _profile(spec: SolitonSpec, x: np.ndarray, t: float):
    z = spec.k * math.sqrt(spec.c) * (x - spec.c * t - spec.x0) / 2.0
    sech, tanh = _sech_tanh(z)
    phi = spec.amplitude * sech ** (2.0 / spec.k)
    return phi, sech, tanh

def soliton(spec: SolitonSpec) -> Callable[..., ArrayOrFloat]:
    """
    Traveling wave u(x, t) = phi(x - ct - x0), with
    phi(y) = (c_k c sech^2(k sqrt(c) y / 2))^{1/k} and c_k = (k+1)(k+2)/2.

    """

    if not isinstance(spec, SolitonSpec):
        raise SpecError('expected a SolitonSpec')

    def profile(x: ArrayOrFloat, t: float = 0.0) -> ArrayOrFloat:
        phi, _, _ = _profile(spec, np.asarray(x, dtype=float), t)
        return float(phi) if np.ndim(x) == 0 else phi

    return profile

def soliton_derivative(spec: SolitonSpec, x: ArrayOrFloat, t: float = 0.0,
                       order: int = 1) -> ArrayOrFloat:
    if order not in (1, 2, 3):
        raise SpecError("'order' must be 1, 2 or 3")

    phi, sech, tanh = _profile(spec, np.asarray(x, dtype=float), t)
    c = spec.c
    first = -math.sqrt(c) * tanh * phi

    if order == 1:
        out = first
    elif order == 2:
        out = c * phi * (tanh ** 2 - 0.5 * spec.k * sech ** 2)
    else:
        out = c * first * (1.0 - spec.c_k * sech ** 2)
    return float(out) if np.ndim(x) == 0 else out

def soliton_ode_residual(spec: SolitonSpec, x: ArrayOrFloat) -> ArrayOrFloat:
    """-c phi' + phi''' + phi^k phi' for the profile."""
    phi = soliton(spec)(x)
    first = soliton_derivative(spec, x, order=1)
    third = soliton_derivative(spec, x, order=3)
    return -spec.c * first + third + np.power(phi, spec.k) * first

#-------------------------------------------------------------------------------

def bump(x: ArrayOrFloat, center: float = 0.0, radius: float = 1.0) -> ArrayOrFloat:
    """Unit-mass smooth bump supported on [center - radius, center + radius]."""
    if radius <= 0:
        raise SpecError("'radius' must be positive")

    z = (np.asarray(x, dtype=float) - center) / radius
    inside = np.abs(z) < 1.0
    out = np.zeros_like(z)
    out[inside] = np.exp(-1.0 / (1.0 - z[inside] ** 2)) / (BUMP_MASS * radius)
    return float(out) if np.ndim(x) == 0 else out

def mollify_shift(u0: Field, eps: float) -> Field:
    """
    rho_eps * u0(. + eps): a smooth approximation of u0 whose support moves
    at most 2 eps to the left and not at all to the right. The sampled kernel
    is renormalized to unit discrete mass.

    """

    if not (0.0 < eps < 1.0):
        raise FieldError("'eps' must lie in (0, 1)")

    dx = u0.grid.dx
    offsets = np.arange(int(math.floor(2.0 * eps / dx)) + 1)
    kernel = bump(-offsets * dx + eps, 0.0, eps)
    if not np.any(kernel > 0):
        raise FieldError(f'eps = {eps:g} is not resolved by a grid step of {dx:g}')
    kernel /= np.sum(kernel)

    values = np.zeros_like(u0.values)
    for m, weight in zip(offsets, kernel):
        if weight > 0:
            values += weight * np.roll(u0.values, -m)
    return Field(u0.grid, values, u0.t, u0.flags)

#-------------------------------------------------------------------------------
