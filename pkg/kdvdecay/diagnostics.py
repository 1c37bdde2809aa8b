# -*- coding: utf-8 -*-

"""
kdvdecay.diagnostics
~~~~~~~~~~~~~~~~~~~~

This module contains the measurements taken on trajectories: weighted norm
series, conserved-quantity audits, least-squares tail fits against the
x^{3/2} law on the right and the |x|^{-1/4} envelope on the left, the
exponentially weighted persistence and smoothing audit, the weighted energy
identity, and the interpolation inequality check.

"""

__all__ = ('weighted_series', 'resolved_extent', 'tail_window', 'fit_tail',
           'persistence_audit', 'interpolation_check', 'conserved_audit',
           'energy_identity_residual', 'flux_functional', 'smoothing_gain_check',
           'windowed_integral', 'diagnostic_rows', 'FIT_FLOOR', 'MIN_FIT_SAMPLES')

from .base import (Field, Trajectory, WeightSpec, WeightedSeries, Window, TailFit,
                   PersistenceAudit, ConservedAudit, InterpolationResult, DiagnosticRow)
from .exceptions import FitError, SaturationError, SpecError
from .core import derivative, with_values, l2_norm, sobolev_norm
from .weights import (log_weighted_l2, evaluate_weight, weight_derivative,
                      weight_time_derivative)
from .solver import conserved_quantities
from .utils import trapezoid, relative_drift, local_maxima, periodic_trapezoid

from typing import Iterable, List, Optional, Tuple, Union
import numpy as np
import logging
import math

logger = logging.getLogger(__name__)

#-------------------------------------------------------------------------------

FIT_FLOOR: float = 1e-12 # samples below this fraction of the peak are not fitted
MIN_FIT_SAMPLES: int = 20
WINDOW_DROP: float = 0.01 # the right window starts once |u| fell below this share of the peak
WINDOW_FLOOR: float = 1e-10 # and ends where |u| falls below this share
LEFT_WINDOW: Tuple[float, float] = (3.0, 30.0) # |x| range in units of (3t)^{1/3}
PERSISTENCE_TOLERANCE: float = math.log(1.02)
EDGE_SHARE: float = 1e-3

#-------------------------------------------------------------------------------

def resolved_extent(u: Field, floor: float = FIT_FLOOR) -> float:
    """
    Right end of the resolved right tail: the first x right of the peak where
    |u| drops below `floor` times the peak or stops decreasing, whichever
    comes first. The second case is where the tail meets the radiation or
    round-off floor.

    """

    values = np.abs(u.values)
    peak_index = int(np.argmax(values))
    right = values[peak_index:]

    below = np.nonzero(right < floor * values[peak_index])[0]
    rising = np.nonzero(right[1:] > right[:-1])[0] # first local minimum of |u|
    candidates = [int(c[0]) for c in (below, rising) if c.size]
    index = min(candidates) if candidates else right.size - 1
    return float(u.x[peak_index + index])

def weighted_series(traj: Trajectory, spec: WeightSpec, resolved: bool = False) -> WeightedSeries:
    """
    log_weighted_l2 of every snapshot. With `resolved`, each norm is cut at
    the snapshot's `resolved_extent` so that the noise floor of the right
    tail is not amplified by a growing weight.

    """

    norms = []
    for u in traj.snapshots:
        x_max = resolved_extent(u) if resolved and u.peak > 0 else None
        norms.append(log_weighted_l2(u, spec, u.t, x_max))
    return WeightedSeries(spec.label(), traj.times, norms)

def windowed_integral(u: Field, weight: np.ndarray, lo: float, hi: float) -> float:
    """int_{lo < x < hi} weight |u|^2 dx."""
    inside = (u.x > lo) & (u.x < hi)
    return periodic_trapezoid(np.where(inside, weight * u.values ** 2, 0.0), u.grid.dx)

#-------------------------------------------------------------------------------

def tail_window(u: Field, t: float, side: str = 'right',
                interior: Optional[float] = None, origin: float = 0.0) -> Window:
    """
    Window in which the dispersive asymptotics of a field at time t are
    fitted. On the right it starts past 2 (3t)^{1/3} and past the point where
    |u| first falls below 1% of its peak, and it ends where |u| first falls
    below 1e-10 of its peak or at the sponge. On the left it is
    |x - origin| in [3, 30] (3t)^{1/3}, where `origin` is the point the
    left-going radiation was emitted from. `interior` is the half width of
    the sponge-free region, L by default.

    """

    if t <= 0:
        raise FitError('no dispersive window at t <= 0')
    if side not in ('right', 'left'):
        raise FitError("'side' must be 'right' or 'left'")

    interior = u.grid.half_width if interior is None else interior
    scale = (3.0 * t) ** (1.0 / 3.0)

    if side == 'left':
        lo = max(origin - LEFT_WINDOW[1] * scale, -interior)
        hi = origin - LEFT_WINDOW[0] * scale
        if lo >= hi:
            raise FitError('left window lies outside the interior')
        return Window(lo, hi)

    x, values = u.x, np.abs(u.values)
    peak_index = int(np.argmax(values))
    peak = values[peak_index]
    if peak == 0:
        raise FitError('zero field has no tail')

    dropped = np.nonzero((x > x[peak_index]) & (values < WINDOW_DROP * peak))[0]
    if dropped.size == 0:
        raise FitError('right tail never drops below 1% of the peak')
    start = max(dropped[0], int(np.searchsorted(x, 2.0 * scale)))

    end = start
    while end + 1 < x.size and values[end + 1] > WINDOW_FLOOR * peak and x[end + 1] <= interior:
        end += 1

    if x[end] <= x[start]:
        raise FitError('empty right window')
    return Window(float(x[start]), float(x[end]))

def fit_tail(u: Field, model: str, window: Window, origin: float = 0.0) -> TailFit:
    """
    Linear least squares of log|u| against x^{3/2} ('frac_exp') or of the log
    of the local maxima of |u| against log|x - origin| ('power').

    """

    lo, hi = window
    if not lo < hi:
        raise FitError('window must satisfy x_lo < x_hi')

    x, values = u.x, np.abs(u.values)
    usable = (x >= lo) & (x <= hi) & (values > FIT_FLOOR * max(u.peak, np.finfo(float).tiny))

    if model == 'frac_exp':
        if lo < 0:
            raise FitError("the 'frac_exp' model needs a window on x > 0")
        xs, ys = x[usable] ** 1.5, np.log(values[usable])
    elif model == 'power':
        positions, peaks = local_maxima(x[usable], values[usable])
        keep = (peaks > 0) & (positions != origin)
        xs, ys = np.log(np.abs(positions[keep] - origin)), np.log(peaks[keep])
    else:
        raise FitError(f"unknown tail model '{model}'")

    if xs.size < MIN_FIT_SAMPLES:
        raise FitError(f'{xs.size} usable samples in [{lo:g}, {hi:g}], '
                       f'{MIN_FIT_SAMPLES} needed')
    if np.ptp(xs) == 0 or np.ptp(ys) == 0:
        raise FitError('degenerate tail data')

    slope, intercept = np.polyfit(xs, ys, 1)
    residual = ys - (slope * xs + intercept)
    rms = float(np.sqrt(np.mean(residual ** 2)))
    rate = float(-slope)

    logger.debug('%s fit on [%g, %g]: rate %.6f, rms %.3e, %d samples',
                 model, lo, hi, rate, rms, xs.size)
    return TailFit(Window(float(lo), float(hi)), model, rate, float(intercept), rms, int(xs.size))

#-------------------------------------------------------------------------------

def persistence_audit(traj: Trajectory, beta: float) -> PersistenceAudit:
    """
    Checks the exponential persistence bound |e^{beta x} u(t)| <= e^{Kt} |e^{beta x} u0|
    with K fitted by least squares through the initial log-norm, and the
    smoothing inequality
    int_0^T e^{-Kt} |e^{beta x} u_x(t)|^2 dt <= |e^{beta x} u0|^2 / (4 beta)
    with the same K.

    """

    if not beta > 0:
        raise SpecError("'beta' must be positive")

    spec = WeightSpec('exp_linear', beta=2.0 * beta)
    times = traj.times
    norms = [log_weighted_l2(u, spec, u.t) for u in traj.snapshots]
    slopes = [log_weighted_l2(derivative(u, 1), spec, u.t) for u in traj.snapshots]
    saturated = any(n.saturated for n in norms + slopes)

    values = np.asarray([n.value for n in norms])
    if values[0] == 0:
        zeros = np.zeros_like(values)
        return PersistenceAudit(beta, times, zeros, 0.0, 0.0, 0.0, 0.0, True, True, saturated)

    logs = np.asarray([n.log_value for n in norms])
    elapsed = np.abs(times - times[0])
    rise = logs - logs[0]

    if np.any(elapsed > 0):
        growth = float(np.linalg.lstsq(elapsed[:, None], rise, rcond=None)[0][0])
    else:
        growth = 0.0

    excess = rise - growth * elapsed
    max_excess = float(np.max(excess))
    below_line = bool(max_excess <= PERSISTENCE_TOLERANCE)

    slope_sq = np.asarray([n.value ** 2 for n in slopes])
    smoothing = trapezoid(np.exp(-growth * elapsed) * slope_sq, elapsed)
    bound = values[0] ** 2 / (4.0 * beta)

    passed = below_line and smoothing <= bound
    logger.info('persistence beta=%g: K=%.4f excess=%.3e S=%.4e B=%.4e',
                beta, growth, max_excess, smoothing, bound)
    return PersistenceAudit(beta, times, values, growth, smoothing, bound, max_excess,
                            below_line, passed, saturated)

#-------------------------------------------------------------------------------

def _bracket(x: np.ndarray, power: float) -> np.ndarray:
    return (1.0 + x ** 2) ** (power / 2.0)

def interpolation_check(f: Field, a: float, b: float, theta: float) -> InterpolationResult:
    """
    Both sides of the interpolation inequality
    |J^{theta a}(<x>^{(1-theta) b} f)| <= c |<x>^b f|^{1-theta} |J^a f|^theta,
    with J^s the multiplier (1 + xi^2)^{s/2}.

    """

    if not (a > 0 and b > 0):
        raise SpecError("'a' and 'b' must be positive")
    if not 0 < theta < 1:
        raise SpecError("'theta' must lie in (0, 1)")

    x = f.x
    weighted = f.values * _bracket(x, b)
    band = max(2, x.size // 64)
    total = float(np.sum(weighted ** 2))
    if total > 0 and (np.sum(weighted[:band] ** 2) + np.sum(weighted[-band:] ** 2)) > EDGE_SHARE * total:
        raise SaturationError('<x>^b f is not small at the domain edge')

    lhs = sobolev_norm(with_values(f, f.values * _bracket(x, (1.0 - theta) * b)), theta * a)
    rhs = l2_norm(with_values(f, weighted)) ** (1.0 - theta) * sobolev_norm(f, a) ** theta
    ratio = lhs / rhs if rhs > 0 else math.nan
    return InterpolationResult(lhs, rhs, ratio)

#-------------------------------------------------------------------------------

def conserved_audit(traj: Trajectory) -> ConservedAudit:
    """Drift of mass, L2 norm squared and Hamiltonian over the recorded states."""
    if traj.conservation:
        records = np.asarray(traj.conservation, dtype=float)
    else:
        k = traj.config.k
        records = np.asarray([(u.t, *conserved_quantities(u, k)) for u in traj.snapshots])

    times, mass, l2, energy = records.T
    nonincreasing = bool(np.all(np.diff(l2) <= 1e-12 * max(abs(l2[0]), 1.0)))
    return ConservedAudit(times, mass, l2, energy, relative_drift(mass),
                          relative_drift(l2), relative_drift(energy), nonincreasing)

#-------------------------------------------------------------------------------

def _identity_terms(u: Field, spec: WeightSpec, k: int) -> Tuple[float, float, float, float]:
    """int u^2 w, int u_x^2 w', int u^2 (w''' + w_t), int u^{k+2} w'."""
    x, dx, t = u.x, u.grid.dx, u.t
    ux = derivative(u, 1).values
    w = np.asarray(evaluate_weight(spec, x, t))
    w1 = np.asarray(weight_derivative(spec, x, t, 1))
    w3 = np.asarray(weight_derivative(spec, x, t, 3))
    wt = np.asarray(weight_time_derivative(spec, x, t))
    v = u.values
    return (periodic_trapezoid(v ** 2 * w, dx), periodic_trapezoid(ux ** 2 * w1, dx),
            periodic_trapezoid(v ** 2 * (w3 + wt), dx), periodic_trapezoid(v ** (k + 2) * w1, dx))

def energy_identity_residual(traj: Trajectory, spec: WeightSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Residual of the weighted energy identity
    d/dt int u^2 w + 3 int u_x^2 w' - int u^2 (w''' + w_t) - (2/(k+2)) int u^{k+2} w' = 0
    at the interior snapshots, with the time derivative taken by centered
    differences. Returns times, residuals and the sum of the absolute values
    of the four terms as a scale.

    """

    if len(traj.snapshots) < 3:
        raise SpecError('the energy identity needs at least three snapshots')

    k = traj.config.k
    terms = np.asarray([_identity_terms(u, spec, k) for u in traj.snapshots])
    times = traj.times

    energy = terms[:, 0]
    rate = (energy[2:] - energy[:-2]) / (times[2:] - times[:-2])
    inner = terms[1:-1]

    parts = np.stack([rate, 3.0 * inner[:, 1], -inner[:, 2], -2.0 / (k + 2) * inner[:, 3]])
    return times[1:-1], np.sum(parts, axis=0), np.sum(np.abs(parts), axis=0)

def flux_functional(traj: Trajectory, spec: WeightSpec) -> float:
    """int_0^T int u_x^2 w' dx dt with the trapezoid rule over snapshot times."""
    fluxes = []
    for u in traj.snapshots:
        ux = derivative(u, 1).values
        w1 = np.asarray(weight_derivative(spec, u.x, u.t, 1))
        fluxes.append(periodic_trapezoid(ux ** 2 * w1, u.grid.dx))
    return trapezoid(np.asarray(fluxes), np.abs(traj.times - traj.times[0]))

def smoothing_gain_check(u: Field, beta: float) -> Tuple[float, float]:
    """
    int e^{beta x} u_x^2 against beta^2 int e^{beta x} u^2 + |int e^{beta x} u u_xx|,
    which bounds it by integration by parts.

    """

    if beta < 0:
        raise SpecError("'beta' must be non-negative")

    dx = u.grid.dx
    w = np.exp(beta * u.x)
    ux = derivative(u, 1).values
    uxx = derivative(u, 2).values

    lhs = periodic_trapezoid(w * ux ** 2, dx)
    rhs = beta ** 2 * periodic_trapezoid(w * u.values ** 2, dx) + abs(periodic_trapezoid(w * u.values * uxx, dx))
    return lhs, rhs

#-------------------------------------------------------------------------------

def diagnostic_rows(run_id: str, t: Union[float, Iterable[float]], name: str,
                    value: Union[float, Iterable[float]], flags: str = '') -> List[DiagnosticRow]:
    """Flat CSV rows {run_id, t, name, value, flags} for a scalar or a series."""
    times = np.atleast_1d(np.asarray(t, dtype=float))
    values = np.atleast_1d(np.asarray(value, dtype=float))
    if times.size != values.size:
        raise SpecError('times and values differ in length')
    return [DiagnosticRow(run_id, float(ti), name, float(vi), flags) for ti, vi in zip(times, values)]

#-------------------------------------------------------------------------------
