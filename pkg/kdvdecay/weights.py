# -*- coding: utf-8 -*-

"""
kdvdecay.weights
~~~~~~~~~~~~~~~~

This module contains every weight function the diagnostics track:

    * the decaying rate a(t) = a0 / (1 + 27 a0^2 t / 4)^{1/2}, which solves
      a' + (27/8) a^3 = 0;
    * the piecewise weight phi_N(x, t): e^{a/4} on x <= 0, e^{a theta(x)} on
      [0, 1], e^{a x^{3/2}} on [1, N] and the quadratic P2 beyond N;
    * the truncated polynomial weights (1 + x^4)^{alpha/2} - 1 that level off
      at (2N)^{2 alpha}, with odd and even extensions;
    * exponential, fractional-exponential, bracket and Airy-envelope weights;

plus the log-space weighted L2 norm that keeps e^{a x^{3/2}} from overflowing.

"""

__all__ = ('THETA', 'SMOOTHSTEP', 'decay_rate_a', 'decay_rate_derivative',
           'decay_limit_constant', 'theta', 'theta_derivative',
           'theta_curvature_form', 'p2', 'p2_derivative', 'p2_slope_ratio',
           'log_phi', 'phi_piecewise', 'phi_derivative', 'phi_time_derivative',
           'phi_bound_constant', 'truncated_weight', 'truncated_derivative',
           'bridge_end', 'log_weight', 'evaluate_weight', 'weight_derivative',
           'weight_time_derivative', 'log_weighted_l2', 'weighted_integral',
           'one_sided_jumps')

from .base import DecaySchedule, WeightSpec, Field, WeightedNorm
from .exceptions import WeightError
from .utils import UNDERFLOW_FLOOR, LOG_OVERFLOW

from numpy.polynomial import Polynomial
from typing import Callable, Optional, Tuple, Union
from functools import lru_cache
from math import comb
import numpy as np
import logging
import math

logger = logging.getLogger(__name__)

ArrayOrFloat = Union[np.ndarray, float]

#-------------------------------------------------------------------------------

THETA: Polynomial = Polynomial([1 / 4, 0.0, 0.0, 15 / 8, -12 / 8, 3 / 8])
SMOOTHSTEP: Polynomial = Polynomial([0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0])

TAIL_BAND: float = 0.05 # share of the domain at each end watched for tail dominance
TAIL_SHARE: float = 1e-3 # weighted mass allowed in that band before saturation
CUT_BAND: float = 0.01 # share of the domain watched just left of an x_max cut

#-------------------------------------------------------------------------------

def _scalar(value: np.ndarray, like) -> ArrayOrFloat:
    return float(value) if np.ndim(like) == 0 else value

def _elapsed(sched: DecaySchedule, t: ArrayOrFloat) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if sched.backward:
        return np.abs(t)
    if np.any(t < 0):
        raise WeightError('negative time for a forward decay schedule')
    return t

def decay_rate_a(sched: DecaySchedule, t: ArrayOrFloat) -> ArrayOrFloat:
    """a(t) = a0 / (1 + 27 a0^2 t / 4)^{1/2}; backward schedules use |t|."""
    tau = _elapsed(sched, t)
    a0 = sched.a0
    return _scalar(a0 / np.sqrt(1.0 + 27.0 * a0 ** 2 * tau / 4.0), t)

def decay_rate_derivative(sched: DecaySchedule, t: ArrayOrFloat) -> ArrayOrFloat:
    """
    Analytic a'(t) = -(27/8) a0^3 (1 + 27 a0^2 t / 4)^{-3/2}. For backward
    schedules the derivative is taken with respect to the elapsed time |t|.

    """

    tau = _elapsed(sched, t)
    a0 = sched.a0
    return _scalar(-27.0 / 8.0 * a0 ** 3 * (1.0 + 27.0 * a0 ** 2 * tau / 4.0) ** -1.5, t)

def decay_limit_constant() -> float:
    """Limit of a(t) sqrt(t) as t grows: 2 / (3 sqrt 3)."""
    return 2.0 / (3.0 * math.sqrt(3.0))

#-------------------------------------------------------------------------------

def _check_unit_interval(x: np.ndarray) -> None:
    if np.any((x < 0) | (x > 1)):
        raise WeightError('theta is defined on [0, 1] only')

def theta(x: ArrayOrFloat) -> ArrayOrFloat:
    return theta_derivative(x, 0)

def theta_derivative(x: ArrayOrFloat, order: int = 1) -> ArrayOrFloat:
    xa = np.asarray(x, dtype=float)
    _check_unit_interval(xa)
    if order not in (0, 1, 2, 3):
        raise WeightError("'order' must be 0, 1, 2 or 3")
    return _scalar(THETA.deriv(order)(xa) if order else THETA(xa), x)

def theta_curvature_form(x: ArrayOrFloat) -> ArrayOrFloat:
    """theta''(x) written as (3x/4)((sqrt(10) x - 12/sqrt(10))^2 + 3/5)."""
    xa = np.asarray(x, dtype=float)
    _check_unit_interval(xa)
    r = math.sqrt(10.0)
    return _scalar(0.75 * xa * ((r * xa - 12.0 / r) ** 2 + 0.6), x)

#-------------------------------------------------------------------------------

def _p2_coefficients(a: float, N: float) -> Tuple[float, float, float]:
    """log of the prefactor, slope and curvature coefficients of P2."""
    slope = 1.5 * a * math.sqrt(N)
    curvature = slope ** 2 + 0.75 * a / math.sqrt(N)
    return a * N ** 1.5, slope, curvature

def _check_beyond(x: np.ndarray, N: float) -> None:
    if np.any(x < N):
        raise WeightError('P2 is defined for x >= N only')

def p2(x: ArrayOrFloat, t: float, N: int, sched: DecaySchedule) -> ArrayOrFloat:
    xa = np.asarray(x, dtype=float)
    _check_beyond(xa, N)
    log_e, slope, curvature = _p2_coefficients(decay_rate_a(sched, t), N)
    y = xa - N
    return _scalar(np.exp(log_e) * (1.0 + slope * y + 0.5 * curvature * y ** 2), x)

def p2_derivative(x: ArrayOrFloat, t: float, N: int, sched: DecaySchedule) -> ArrayOrFloat:
    xa = np.asarray(x, dtype=float)
    _check_beyond(xa, N)
    log_e, slope, curvature = _p2_coefficients(decay_rate_a(sched, t), N)
    return _scalar(np.exp(log_e) * (slope + curvature * (xa - N)), x)

def p2_slope_ratio(x: ArrayOrFloat, t: float, N: int, sched: DecaySchedule) -> ArrayOrFloat:
    """d/dx P2 divided by (1 + 3 a0 x^{1/2}) phi_N; at most one on [N, 4N]."""
    xa = np.asarray(x, dtype=float)
    ratio = p2_derivative(xa, t, N, sched) / ((1.0 + 3.0 * sched.a0 * np.sqrt(xa))
                                             * phi_piecewise(xa, t, N, sched))
    return _scalar(ratio, x)

#-------------------------------------------------------------------------------

def _branches(x: np.ndarray, N: float):
    return x <= 0, (x > 0) & (x < 1), (x >= 1) & (x <= N), x > N

def _log_phi_rate(x: np.ndarray, a: float, N: float) -> np.ndarray:
    left, inner, middle, right = _branches(x, N)
    log_e, slope, curvature = _p2_coefficients(a, N)

    out = np.empty_like(x)
    out[left] = a / 4.0
    out[inner] = a * THETA(x[inner])
    out[middle] = a * x[middle] ** 1.5
    y = x[right] - N
    out[right] = log_e + np.log1p(slope * y + 0.5 * curvature * y ** 2)
    return out

def _log_phi_rate_sensitivity(x: np.ndarray, a: float, N: float) -> np.ndarray:
    """d(log phi_N)/da at fixed x."""
    left, inner, middle, right = _branches(x, N)
    _, slope, curvature = _p2_coefficients(a, N)

    out = np.empty_like(x)
    out[left] = 0.25
    out[inner] = THETA(x[inner])
    out[middle] = x[middle] ** 1.5
    y = x[right] - N
    q = 1.0 + slope * y + 0.5 * curvature * y ** 2
    dq = 1.5 * math.sqrt(N) * y + 0.5 * (4.5 * a * N + 0.75 / math.sqrt(N)) * y ** 2
    out[right] = N ** 1.5 + dq / q
    return out

def _phi_derivative_rate(x: np.ndarray, a: float, N: float, order: int) -> np.ndarray:
    left, inner, middle, right = _branches(x, N)
    log_e, slope, curvature = _p2_coefficients(a, N)
    phi = np.exp(_log_phi_rate(x, a, N))

    g = [np.zeros_like(x) for _ in range(3)]
    for m in range(3):
        g[m][inner] = a * THETA.deriv(m + 1)(x[inner])
    xm = x[middle]
    g[0][middle] = 1.5 * a * xm ** 0.5
    g[1][middle] = 0.75 * a * xm ** -0.5
    g[2][middle] = -0.375 * a * xm ** -1.5

    g1, g2, g3 = g
    factor = (g1, g2 + g1 ** 2, g3 + 3.0 * g1 * g2 + g1 ** 3)[order - 1]
    out = factor * phi

    y = x[right] - N
    if order == 1:
        out[right] = np.exp(log_e) * (slope + curvature * y)
    elif order == 2:
        out[right] = np.exp(log_e) * curvature
    else:
        out[right] = 0.0
    return out

def log_phi(x: ArrayOrFloat, t: float, N: int, sched: DecaySchedule) -> ArrayOrFloat:
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = _log_phi_rate(xa, decay_rate_a(sched, t), N)
    return _scalar(out[0], x) if np.ndim(x) == 0 else out

def phi_piecewise(x: ArrayOrFloat, t: float, N: int, sched: DecaySchedule) -> ArrayOrFloat:
    """The piecewise weight phi_N(x, t); C^2 in x, nondecreasing."""
    return _scalar(np.exp(log_phi(x, t, N, sched)), x)

def phi_derivative(x: ArrayOrFloat, t: float, N: int, sched: DecaySchedule,
                   order: int = 1) -> ArrayOrFloat:
    if order == 0:
        return phi_piecewise(x, t, N, sched)
    if order not in (1, 2, 3):
        raise WeightError("'order' must be 0, 1, 2 or 3")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = _phi_derivative_rate(xa, decay_rate_a(sched, t), N, order)
    return _scalar(out[0], x) if np.ndim(x) == 0 else out

def phi_time_derivative(x: ArrayOrFloat, t: float, N: int,
                        sched: DecaySchedule) -> ArrayOrFloat:
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    a = decay_rate_a(sched, t)
    out = (decay_rate_derivative(sched, t) * _log_phi_rate_sensitivity(xa, a, N)
           * np.exp(_log_phi_rate(xa, a, N)))
    return _scalar(out[0], x) if np.ndim(x) == 0 else out

def phi_bound_constant(a0: float) -> float:
    """C(a0) with phi_N(x, t) <= C(a0) e^{a(t) x_+^{3/2}} for every N."""
    return math.exp(a0 / 4.0)

#-------------------------------------------------------------------------------

def _check_truncated(N: float, alpha: float) -> None:
    if not (math.isfinite(alpha) and alpha > 0):
        raise WeightError("'alpha' must be positive")
    if not (math.isfinite(N) and N >= 1):
        raise WeightError("'N' must be >= 1")

def _inner(x: np.ndarray, alpha: float, order: int) -> np.ndarray:
    """(1 + x^4)^{alpha/2} - 1 and its derivatives for x >= 0."""
    q = 1.0 + x ** 4
    b = alpha / 2.0 - 1.0
    if order == 0:
        return q ** (alpha / 2.0) - 1.0
    if order == 1:
        return 2.0 * alpha * x ** 3 * q ** b
    if order == 2:
        return 6.0 * alpha * x ** 2 * q ** b + 8.0 * alpha * b * x ** 6 * q ** (b - 1.0)
    return (12.0 * alpha * x * q ** b + 72.0 * alpha * b * x ** 5 * q ** (b - 1.0)
            + 32.0 * alpha * b * (b - 1.0) * x ** 9 * q ** (b - 2.0))

@lru_cache(maxsize=256)
def bridge_end(N: float, alpha: float) -> float:
    """
    End of the blend between the inner branch and the constant (2N)^{2 alpha}:
    the point where the inner branch reaches the constant, capped at 10N.
    The blend is verified monotone once per (N, alpha).

    """

    _check_truncated(N, alpha)
    level = (2.0 * N) ** (2.0 * alpha)
    log_q = 2.0 / alpha * math.log1p(level)
    end = 10.0 * N if log_q > 700.0 else min(10.0 * N, math.expm1(log_q) ** 0.25)

    xs = np.linspace(N, end, 2001)
    slope = _truncated_positive(xs, N, alpha, 1, end)
    if np.any(slope < -1e-12 * max(1.0, level)):
        raise WeightError(f'bridge is not monotone for N={N:g}, alpha={alpha:g}')
    return end

def _truncated_positive(x: np.ndarray, N: float, alpha: float, order: int,
                        end: float) -> np.ndarray:
    level = (2.0 * N) ** (2.0 * alpha)
    inner = x <= N
    blend = (x > N) & (x < end)

    out = np.zeros_like(x)
    out[inner] = _inner(x[inner], alpha, order)
    if order == 0:
        out[x >= end] = level

    xb = x[blend]
    span = end - N
    s = (xb - N) / span
    for j in range(order + 1):
        rest = 1.0 - SMOOTHSTEP(s) if j == 0 else -SMOOTHSTEP.deriv(j)(s) / span ** j
        inner_part = _inner(xb, alpha, order - j)
        if order - j == 0:
            inner_part = inner_part - level
        out[blend] += comb(order, j) * rest * inner_part
    if order == 0:
        out[blend] += level
    return out

def truncated_weight(x: ArrayOrFloat, N: float, alpha: float,
                     parity: str = 'odd') -> ArrayOrFloat:
    """
    (1 + x^4)^{alpha/2} - 1 on [0, N], the constant (2N)^{2 alpha} from
    `bridge_end(N, alpha)` (at most 10N) on, a C^3 monotone blend in between,
    extended to x < 0 with the requested parity.

    """

    return truncated_derivative(x, N, alpha, parity, 0)

def truncated_derivative(x: ArrayOrFloat, N: float, alpha: float, parity: str = 'odd',
                         order: int = 1) -> ArrayOrFloat:
    if parity not in ('odd', 'even'):
        raise WeightError("'parity' must be 'odd' or 'even'")
    if order not in (0, 1, 2, 3):
        raise WeightError("'order' must be 0, 1, 2 or 3")

    end = bridge_end(float(N), float(alpha))
    xa = np.asarray(x, dtype=float)
    magnitude = _truncated_positive(np.atleast_1d(np.abs(xa)), float(N), float(alpha),
                                    order, end).reshape(xa.shape)

    power = order + 1 if parity == 'odd' else order
    sign = np.where(xa < 0, -1.0, 1.0) ** power
    return _scalar(sign * magnitude, x)

#-------------------------------------------------------------------------------

def _rate(spec: WeightSpec, t: float) -> Tuple[float, float]:
    if spec.scheduled:
        return decay_rate_a(spec.schedule, t), decay_rate_derivative(spec.schedule, t)
    return spec.a0, 0.0

def _oriented(spec: WeightSpec, x: np.ndarray) -> Tuple[np.ndarray, float]:
    """Backward schedules mirror the weight to x_-."""
    if spec.scheduled and spec.schedule.backward:
        return -x, -1.0
    return x, 1.0

def log_weight(spec: WeightSpec, x: ArrayOrFloat, t: float = 0.0) -> ArrayOrFloat:
    """log w(x, t) for the positive weight kinds."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    xo, _ = _oriented(spec, xa)
    kind = spec.kind

    if kind in ('frac_exp_plus', 'frac_exp_minus', 'phiN_piecewise'):
        a, _ = _rate(spec, t)
        if kind == 'phiN_piecewise':
            out = _log_phi_rate(xo, a, spec.N)
        else:
            side = np.maximum(xo, 0.0) if kind == 'frac_exp_plus' else np.maximum(-xo, 0.0)
            out = a * side ** 1.5
    elif kind == 'exp_linear':
        out = spec.beta * xo
    elif kind == 'poly_bracket':
        out = spec.alpha * np.log1p(xo ** 2)
    elif kind == 'airy_envelope':
        out = -spec.c * np.maximum(xo, 0.0) ** 1.5 - 0.25 * np.log1p(np.maximum(-xo, 0.0))
    elif kind == 'truncated_even':
        with np.errstate(divide='ignore'):
            out = np.log(truncated_weight(xo, spec.N, spec.alpha, 'even'))
    else:
        raise WeightError('the odd truncated weight is signed and has no logarithm')

    return _scalar(out[0], x) if np.ndim(x) == 0 else out

def evaluate_weight(spec: WeightSpec, x: ArrayOrFloat, t: float = 0.0) -> ArrayOrFloat:
    """
    Weight value at (x, t). Non-negative for every kind except truncated_odd,
    which is the odd extension and therefore negative for x < 0.

    """

    if spec.kind in ('truncated_odd', 'truncated_even'):
        parity = 'odd' if spec.kind == 'truncated_odd' else 'even'
        return truncated_weight(x, spec.N, spec.alpha, parity)
    return _scalar(np.exp(log_weight(spec, x, t)), x)

def weight_derivative(spec: WeightSpec, x: ArrayOrFloat, t: float = 0.0,
                      order: int = 1) -> ArrayOrFloat:
    """x-derivatives of the smooth weight kinds (phiN, truncated, exp_linear)."""
    xa = np.asarray(x, dtype=float)
    xo, sign = _oriented(spec, xa)

    if spec.kind == 'phiN_piecewise':
        a, _ = _rate(spec, t)
        out = _phi_derivative_rate(np.atleast_1d(xo), a, spec.N, order).reshape(xa.shape)
    elif spec.kind in ('truncated_odd', 'truncated_even'):
        parity = 'odd' if spec.kind == 'truncated_odd' else 'even'
        out = truncated_derivative(xo, spec.N, spec.alpha, parity, order)
    elif spec.kind == 'exp_linear':
        out = spec.beta ** order * np.exp(spec.beta * xo)
    else:
        raise WeightError(f"no analytic derivatives for weight kind '{spec.kind}'")

    return _scalar(sign ** order * np.asarray(out), x)

def weight_time_derivative(spec: WeightSpec, x: ArrayOrFloat, t: float = 0.0) -> ArrayOrFloat:
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if spec.kind != 'phiN_piecewise' or not spec.scheduled:
        out = np.zeros_like(xa)
    else:
        xo, _ = _oriented(spec, xa)
        a, a_dot = _rate(spec, t)
        out = a_dot * _log_phi_rate_sensitivity(xo, a, spec.N) * np.exp(_log_phi_rate(xo, a, spec.N))
    return _scalar(out[0], x) if np.ndim(x) == 0 else out

#-------------------------------------------------------------------------------

def log_weighted_l2(u: Field, spec: WeightSpec, t: Optional[float] = None,
                    x_max: Optional[float] = None) -> WeightedNorm:
    """
    sqrt(sum_i w(x_i, t) |u_i|^2 dx) accumulated in log space. Samples with
    |u_i| < 1e-300 contribute nothing and are reported as the floored
    fraction; samples right of `x_max` are left out. The result is saturated
    when it overflows or when the outermost band of the domain carries a
    visible share of the weighted mass (the integral has not converged on the
    truncated line).

    """

    t = u.t if t is None else t
    x, values = u.grid.x, np.abs(u.values)

    considered = np.ones_like(x, dtype=bool) if x_max is None else x <= x_max
    live = considered & (values >= UNDERFLOW_FLOOR)
    floored = float(np.count_nonzero(considered & ~live)) / max(np.count_nonzero(considered), 1)

    log_w = np.asarray(log_weight(spec, x, t))
    live &= np.isfinite(log_w)
    if not np.any(live):
        return WeightedNorm(0.0, -math.inf, floored, False)

    terms = log_w[live] + 2.0 * np.log(values[live])
    peak = float(np.max(terms))
    shares = np.exp(terms - peak)
    total = float(np.sum(shares))

    log_value = 0.5 * (peak + math.log(total) + math.log(u.grid.dx))

    band = max(2, int(TAIL_BAND * x.size))
    edge = np.zeros_like(x, dtype=bool)
    edge[:band] = True
    edge[-band:] = True
    if x_max is not None:
        inside = np.nonzero(considered)[0]
        if inside.size:
            edge[inside[-max(2, int(CUT_BAND * x.size)):]] = True
    tail_share = float(np.sum(shares[edge[live]])) / total

    growing = spec.kind not in ('airy_envelope',) and not (spec.kind == 'exp_linear' and spec.beta == 0)
    saturated = log_value > LOG_OVERFLOW or (growing and tail_share > TAIL_SHARE)
    if saturated:
        logger.warning('weighted norm %s saturated at t=%g (tail share %.2e)',
                       spec.label(), t, tail_share)

    value = math.exp(log_value) if log_value <= LOG_OVERFLOW else math.inf
    return WeightedNorm(value, log_value, floored, saturated)

def weighted_integral(u: Field, spec: WeightSpec, t: Optional[float] = None,
                      x_max: Optional[float] = None) -> float:
    """int w |u|^2 dx; signed for the odd truncated weight."""
    t = u.t if t is None else t
    if spec.kind in ('truncated_odd', 'truncated_even'):
        x = u.grid.x
        w = np.asarray(evaluate_weight(spec, x, t))
        if x_max is not None:
            w = np.where(x <= x_max, w, 0.0)
        return float(u.grid.dx * np.sum(w * u.values ** 2))
    return log_weighted_l2(u, spec, t, x_max).value ** 2

#-------------------------------------------------------------------------------

def one_sided_jumps(f: Callable[[np.ndarray], np.ndarray], x0: float, h: float) -> np.ndarray:
    """
    Mismatch between right- and left-sided estimates of f, f' and f'' at x0,
    each estimate built from samples on one side only.

    """

    fr = np.asarray(f(x0 + h * np.arange(3)), dtype=float)
    fl = np.asarray(f(x0 - h * np.arange(3)), dtype=float)

    value = abs((2.0 * fr[1] - fr[2]) - (2.0 * fl[1] - fl[2]))
    first = abs((-3.0 * fr[0] + 4.0 * fr[1] - fr[2]) - (3.0 * fl[0] - 4.0 * fl[1] + fl[2])) / (2.0 * h)
    second = abs((fr[0] - 2.0 * fr[1] + fr[2]) - (fl[0] - 2.0 * fl[1] + fl[2])) / h ** 2
    return np.asarray([value, first, second])

#-------------------------------------------------------------------------------
