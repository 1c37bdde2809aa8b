# -*- coding: utf-8 -*-

"""
kdvdecay.solver
~~~~~~~~~~~~~~~

This module contains the time integrator for u_t + u_xxx + u^k u_x = 0 on the
periodic grid: a fourth-order Runge-Kutta scheme in the integrating-factor
variables of the Airy group, with the nonlinear flux -(u^{k+1})_x / (k+1)
dealiased by zero padding and an optional absorbing sponge near the edges.

Backward runs use the symmetry u(x, t) -> u(-x, -t) of the equation: the
initial datum is mirrored, evolved forward and mirrored back.

"""

__all__ = ('IntegratingFactorRK4', 'step', 'evolve', 'sponge_profile',
           'default_sponge', 'conserved_quantities', 'default_time_step',
           'richardson_order', 'BLOW_UP', 'BOUNDARY_CONTAMINATION',
           'DEALIAS_WARNING')

from .base import Grid, Field, SpectralField, SolverConfig, SpongeSpec, Trajectory
from .exceptions import BlowUpError, SpecError
from .core import to_physical, reflect, spectral_multiplier, is_under_resolved
from .utils import next_fast_size, periodic_trapezoid

from dataclasses import replace
from typing import Optional, Sequence, Tuple
import numpy as np
import logging
import math

logger = logging.getLogger(__name__)

#-------------------------------------------------------------------------------

BLOW_UP: str = 'blow_up'
BOUNDARY_CONTAMINATION: str = 'boundary_contamination'
DEALIAS_WARNING: str = 'dealias_warning'

BLOW_UP_FACTOR: float = 1e6 # |u|_inf growth over |u0|_inf treated as blow-up
CONTAMINATION_TOLERANCE: float = 1e-8 # edge amplitude relative to the peak
CFL_FACTOR: float = 0.1
SPONGE_FRACTION: float = 1 / 8
SPONGE_STRENGTH: float = 5.0

#-------------------------------------------------------------------------------

def sponge_profile(grid: Grid, width: float, strength: float) -> np.ndarray:
    """
    Damping rate strength * s^3 (10 - 15 s + 6 s^2), with
    s = (|x| - (L - width)) / width on the edge layers and zero inside.

    """

    if not (0 < width < grid.half_width / 4.0):
        raise SpecError("sponge 'width' must lie in (0, L/4)")
    if strength < 0:
        raise SpecError("sponge 'strength' must be non-negative")

    s = np.clip((np.abs(grid.x) - (grid.half_width - width)) / width, 0.0, 1.0)
    return strength * s ** 3 * (10.0 - 15.0 * s + 6.0 * s ** 2)

def default_sponge(grid: Grid) -> SpongeSpec:
    return SpongeSpec(SPONGE_FRACTION * grid.half_width, SPONGE_STRENGTH)

def default_time_step(u0: Field, k: int) -> float:
    """0.1 dx / max(1, |u0|_inf)^k."""
    return CFL_FACTOR * u0.grid.dx / max(1.0, u0.peak) ** k

#-------------------------------------------------------------------------------

class IntegratingFactorRK4:
    """
    Fourth-order Runge-Kutta in the variables v = e^{-i xi^3 t} u_hat.

    The linear phase e^{i xi^3 dt} is applied exactly, so the step size is
    limited by the nonlinear term only. Odd-order operators use the
    wavenumbers with the Nyquist mode zeroed. With `dealias` on, the power
    u^{k+1} is formed on a grid padded to the smallest FFT-friendly size of
    at least n (k+2)/2 points, which removes every aliased product.

    """

    def __init__(self, grid: Grid, k: int, dt: float, dealias: bool = True,
                 sponge: Optional[SpongeSpec] = None):

        self.grid = grid
        self.k = int(k)
        self.dt = float(dt)

        n = grid.n_points
        self.pad_size = next_fast_size(math.ceil(n * (self.k + 2) / 2)) if dealias else n

        self._symbol = 1j * grid.odd_wavenumbers ** 3
        self._flux = -1j * grid.odd_wavenumbers / (self.k + 1)
        self.exp_full, self.exp_half = self._phases(self.dt)

        self._damping = None
        if sponge is not None and sponge.strength > 0:
            self._damping = sponge_profile(grid, sponge.width, sponge.strength)

    #---------------------------------------------------------------------------

    def _phases(self, dt: float) -> Tuple[np.ndarray, np.ndarray]:
        return np.exp(self._symbol * dt), np.exp(self._symbol * dt / 2.0)

    def _power_spectrum(self, v_hat: np.ndarray) -> np.ndarray:
        """Spectrum of u^{k+1}, truncated back to n modes without the Nyquist mode."""
        n, m, power = self.grid.n_points, self.pad_size, self.k + 1
        if m == n:
            return np.fft.fft(np.fft.ifft(v_hat).real ** power)

        half = n // 2
        padded = np.zeros(m, dtype=complex)
        padded[:half] = v_hat[:half]
        padded[m - half + 1:] = v_hat[half + 1:]

        u = np.fft.ifft(padded).real * (m / n)
        w_hat = np.fft.fft(u ** power) * (n / m)

        out = np.zeros(n, dtype=complex)
        out[:half] = w_hat[:half]
        out[half + 1:] = w_hat[m - half + 1:]
        return out

    def nonlinear(self, v_hat: np.ndarray) -> np.ndarray:
        return self._flux * self._power_spectrum(v_hat)

    def advance(self, v_hat: np.ndarray, dt: Optional[float] = None) -> np.ndarray:
        """One step of length `dt` (the configured step by default), sponge included."""
        if dt is None or dt == self.dt:
            dt, exp_full, exp_half = self.dt, self.exp_full, self.exp_half
        else:
            exp_full, exp_half = self._phases(dt)

        k1 = dt * self.nonlinear(v_hat)
        k2 = dt * self.nonlinear(exp_half * (v_hat + k1 / 2.0))
        k3 = dt * self.nonlinear(exp_half * v_hat + k2 / 2.0)
        k4 = dt * self.nonlinear(exp_full * v_hat + exp_half * k3)
        out = exp_full * v_hat + (exp_full * k1 + 2.0 * exp_half * (k2 + k3) + k4) / 6.0

        if self._damping is not None:
            u = np.fft.ifft(out).real * np.exp(-self._damping * dt)
            out = np.fft.fft(u)
        return out

#-------------------------------------------------------------------------------

def step(state: SpectralField, cfg: SolverConfig) -> SpectralField:
    """One integrating-factor RK4 step; non-finite output raises BlowUpError."""
    dt = cfg.dt if cfg.dt is not None else default_time_step(to_physical(state), cfg.k)
    stepper = IntegratingFactorRK4(state.grid, cfg.k, dt, cfg.dealias, cfg.sponge)

    coeffs = stepper.advance(np.asarray(state.coeffs))
    if not np.all(np.isfinite(coeffs)):
        raise BlowUpError('non-finite state', state.t + dt, to_physical(state))
    return SpectralField(state.grid, coeffs, state.t + dt)

#-------------------------------------------------------------------------------

def conserved_quantities(u: Field, k: int) -> Tuple[float, float, float]:
    """Mass, squared L2 norm and Hamiltonian int (u_x^2 / 2 - u^{k+2} / ((k+1)(k+2)))."""
    dx = u.grid.dx
    ux = spectral_multiplier(u, 1j * u.grid.odd_wavenumbers).values
    mass = periodic_trapezoid(u.values, dx)
    l2 = periodic_trapezoid(u.values ** 2, dx)
    energy = periodic_trapezoid(0.5 * ux ** 2 - u.values ** (k + 2) / ((k + 1) * (k + 2)), dx)
    return mass, l2, energy

def _edge_band(n: int) -> int:
    return max(2, n // 64)

def _audit_snapshot(u: Field, cfg: SolverConfig, flags: set) -> None:
    peak = u.peak
    if peak == 0:
        return

    band = _edge_band(u.grid.n_points)
    edge = max(np.max(np.abs(u.values[:band])), np.max(np.abs(u.values[-band:])))
    if cfg.sponge is None and edge > CONTAMINATION_TOLERANCE * peak:
        if BOUNDARY_CONTAMINATION not in flags:
            logger.warning('boundary contamination at t=%g: edge/peak = %.2e', u.t, edge / peak)
        flags.add(BOUNDARY_CONTAMINATION)

    if is_under_resolved(np.fft.fft(u.values)) and DEALIAS_WARNING not in flags:
        logger.warning('spectrum not resolved at t=%g', u.t)
        flags.add(DEALIAS_WARNING)

def evolve(u0: Field, cfg: SolverConfig) -> Trajectory:
    """
    Integrate from u0 and record a snapshot at every requested time.

    The initial state is always the first snapshot. Steps are taken on the
    uniform lattice t0 + i dt; a requested time between lattice points is
    reached by a shortened step from a copy of the state, so the snapshot
    set never perturbs the main integration. Blow-up truncates the
    trajectory at the last finite snapshot and sets the blow-up flag.

    """

    if not cfg.snapshot_times:
        raise SpecError('at least one snapshot time is required')
    if cfg.backward:
        return _evolve_backward(u0, cfg)

    targets = [t for t in cfg.snapshot_times if t != u0.t]
    if any(t < u0.t for t in targets):
        raise SpecError('snapshot times must not precede the initial time')

    dt = cfg.dt if cfg.dt is not None else default_time_step(u0, cfg.k)
    stepper = IntegratingFactorRK4(u0.grid, cfg.k, dt, cfg.dealias, cfg.sponge)
    traj = Trajectory(replace(cfg, dt=dt), snapshots=[u0])
    _audit_snapshot(u0, cfg, traj.flags)

    logger.info('evolve k=%d n=%d L=%g dt=%.3e to t=%g', cfg.k, u0.grid.n_points,
                u0.grid.half_width, dt, max(targets, default=u0.t))

    interval = cfg.conservation_check_interval
    if interval:
        traj.conservation.append((u0.t, *conserved_quantities(u0, cfg.k)))

    ceiling = BLOW_UP_FACTOR * u0.peak
    v_hat = np.fft.fft(u0.values)
    steps = 0

    try:
        for target in targets:
            count = int(math.floor((target - u0.t) / dt + 1e-9))
            while steps < count:
                v_hat = stepper.advance(v_hat)
                steps += 1
                _check_blow_up(v_hat, u0.t + steps * dt, ceiling)
                if interval and steps % interval == 0:
                    _record_conservation(traj, v_hat, u0, u0.t + steps * dt)

            remainder = target - (u0.t + steps * dt)
            snap_hat = v_hat
            if remainder > 1e-12 * dt:
                snap_hat = stepper.advance(v_hat, remainder)
                _check_blow_up(snap_hat, target, ceiling)

            snapshot = Field(u0.grid, np.fft.ifft(snap_hat).real, target)
            _audit_snapshot(snapshot, cfg, traj.flags)
            traj.snapshots.append(snapshot)
            logger.debug('snapshot t=%g after %d steps', target, steps)

    except BlowUpError as error:
        traj.flags.add(BLOW_UP)
        traj.blow_up_time = error.time
        logger.warning('blow-up at t=%g; trajectory truncated at t=%g',
                       error.time, traj.final.t)

    traj.steps = steps
    return traj

def _check_blow_up(v_hat: np.ndarray, t: float, ceiling: float) -> None:
    if not np.all(np.isfinite(v_hat)):
        raise BlowUpError('non-finite state', t)
    if ceiling > 0:
        peak = np.max(np.abs(np.fft.ifft(v_hat).real))
        if peak > ceiling:
            raise BlowUpError(f'|u|_inf = {peak:.3e} exceeds {ceiling:.3e}', t)

def _record_conservation(traj: Trajectory, v_hat: np.ndarray, u0: Field, t: float) -> None:
    u = Field(u0.grid, np.fft.ifft(v_hat).real, t)
    values = conserved_quantities(u, traj.config.k)
    traj.conservation.append((t, *values))
    logger.debug('t=%g mass=%.15e l2=%.15e energy=%.15e', t, *values)

def _evolve_backward(u0: Field, cfg: SolverConfig) -> Trajectory:
    mirrored = replace(cfg, snapshot_times=tuple(-t for t in cfg.snapshot_times))
    forward = evolve(reflect(u0, -u0.t), mirrored)

    traj = Trajectory(cfg if cfg.dt is not None else replace(cfg, dt=forward.config.dt),
                      snapshots=[reflect(v, -v.t) for v in forward.snapshots],
                      flags=set(forward.flags), steps=forward.steps)
    traj.conservation = [(-t, *rest) for t, *rest in forward.conservation]
    if forward.blow_up_time is not None:
        traj.blow_up_time = -forward.blow_up_time
    return traj

#-------------------------------------------------------------------------------

def richardson_order(u0: Field, cfg: SolverConfig, T: float,
                     dts: Sequence[float]) -> float:
    """
    Observed temporal order from three runs to time T with step sizes
    dt1 > dt2 > dt3 in a constant ratio: log(e12 / e23) / log(dt1 / dt2), with
    e the max-norm difference of consecutive final states.

    """

    if len(dts) != 3:
        raise SpecError('richardson_order needs exactly three step sizes')

    finals = []
    for dt in dts:
        run = evolve(u0, replace(cfg, dt=dt, snapshot_times=(T,)))
        if BLOW_UP in run.flags:
            raise BlowUpError('blow-up during a convergence run', run.blow_up_time)
        finals.append(run.final.values)

    coarse = np.max(np.abs(finals[0] - finals[1]))
    fine = np.max(np.abs(finals[1] - finals[2]))
    order = math.log(coarse / fine) / math.log(dts[0] / dts[1])
    logger.info('richardson errors %.3e, %.3e -> order %.3f', coarse, fine, order)
    return order

#-------------------------------------------------------------------------------
