# -*- coding: utf-8 -*-

"""
kdvdecay.base
~~~~~~~~~~~~~

This module contains all the dataclasses and named tuples shared by the rest
of the package: grids and fields, weight and soliton descriptions, solver
configuration and trajectories, diagnostic results and experiment reports,
plus the few plotting records used by `figure`.

"""

__all__ = ('Size', 'Point', 'Coords', 'Window', 'WeightedNorm', 'DiagnosticRow',
           'InterpolationResult', 'SpongeSpec', 'Grid', 'Field', 'SpectralField',
           'DecaySchedule', 'WeightSpec', 'SolitonSpec', 'SolverConfig',
           'Trajectory', 'TailFit', 'PersistenceAudit', 'ConservedAudit', 'WeightedSeries',
           'Verdict', 'ExperimentReport', 'Theme', 'Axes', 'WEIGHT_KINDS',
           'STATUSES')

from .exceptions import FieldError, WeightError, SpecError

from typing import Tuple, NamedTuple, Optional, List, Dict, Set, Any
from dataclasses import dataclass, field
from numbers import Number
import numpy as np
import math

#-------------------------------------------------------------------------------

WEIGHT_KINDS: Tuple[str, ...] = ('frac_exp_plus', 'frac_exp_minus', 'exp_linear',
                                 'poly_bracket', 'phiN_piecewise', 'truncated_odd',
                                 'truncated_even', 'airy_envelope')

STATUSES: Tuple[str, ...] = ('pass', 'fail', 'inconclusive')

#-------------------------------------------------------------------------------

class Size(NamedTuple):
    width: int
    height: int

class Point(NamedTuple):
    x: Number
    y: Number

class Coords(NamedTuple):
    x0: Number
    y0: Number
    x1: Number
    y1: Number

class Window(NamedTuple):
    x_lo: float
    x_hi: float

class WeightedNorm(NamedTuple):
    value: float
    log_value: float
    floored: float
    saturated: bool

class DiagnosticRow(NamedTuple):
    run_id: str
    t: float
    name: str
    value: float
    flags: str = ''

class InterpolationResult(NamedTuple):
    lhs: float
    rhs_product: float
    ratio: float

class SpongeSpec(NamedTuple):
    width: float
    strength: float

#-------------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """
    Uniform periodic grid on [-L, L) standing in for the real line. Use
    `core.make_grid` to build one; the constructor itself does not validate.

    `wavenumbers` are ordered j = -n/2 ... n/2 - 1, `fft_wavenumbers` follow
    numpy's FFT ordering and `odd_wavenumbers` is the latter with the Nyquist
    mode zeroed, which is what odd-order operators multiply by.

    """

    half_width: float
    n_points: int
    x: np.ndarray = field(init=False, repr=False, compare=False)
    fft_wavenumbers: np.ndarray = field(init=False, repr=False, compare=False)
    odd_wavenumbers: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n, L = self.n_points, self.half_width
        dx = 2.0 * L / n

        x = -L + dx * np.arange(n)
        xi = np.fft.fftfreq(n, d=dx) * 2.0 * np.pi
        xi_odd = xi.copy()
        xi_odd[n // 2] = 0.0

        for name, values in (('x', x), ('fft_wavenumbers', xi), ('odd_wavenumbers', xi_odd)):
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.fft.fftshift(self.fft_wavenumbers)

    @property
    def nyquist(self) -> float:
        return np.pi * self.n_points / (2.0 * self.half_width)

#-------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Field:
    grid: Grid
    values: np.ndarray
    t: float = 0.0
    flags: Tuple[str, ...] = ()

    def __post_init__(self):
        values = np.array(self.values, dtype=float)

        if values.shape != (self.grid.n_points,):
            raise FieldError(f'values of length {values.size} do not match a grid '
                             f'of {self.grid.n_points} points')
        if not np.all(np.isfinite(values)):
            raise FieldError('field values must be finite')

        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 't', float(self.t))
        object.__setattr__(self, 'flags', tuple(self.flags))

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def peak(self) -> float:
        return float(np.max(np.abs(self.values)))

#-------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpectralField:
    grid: Grid
    coeffs: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)

        if coeffs.shape != (self.grid.n_points,):
            raise FieldError('coefficient count does not match the grid')

        coeffs.setflags(write=False)
        object.__setattr__(self, 'coeffs', coeffs)
        object.__setattr__(self, 't', float(self.t))

    def hermitian_defect(self) -> float:
        """Largest |c_{-j} - conj(c_j)| relative to the largest coefficient."""
        c = self.coeffs
        mirrored = np.conj(np.roll(c[::-1], 1))
        scale = max(float(np.max(np.abs(c))), np.finfo(float).tiny)
        return float(np.max(np.abs(c - mirrored))) / scale

#-------------------------------------------------------------------------------

@dataclass(frozen=True)
class DecaySchedule:
    a0: float
    direction: str = 'forward'

    def __post_init__(self):
        if not (isinstance(self.a0, Number) and math.isfinite(self.a0) and self.a0 > 0):
            raise WeightError("'a0' must be a positive number")
        if self.direction not in ('forward', 'backward'):
            raise WeightError("'direction' must be 'forward' or 'backward'")

    @property
    def backward(self) -> bool:
        return self.direction == 'backward'

@dataclass(frozen=True)
class WeightSpec:
    """
    Tagged description of one weight family. Rate-carrying kinds
    (frac_exp_plus, frac_exp_minus, phiN_piecewise) use `schedule.a0` and the
    decaying rate a(t) when a schedule is attached, and the frozen `a0`
    otherwise.

    """

    kind: str
    a0: Optional[float] = None
    beta: Optional[float] = None
    alpha: Optional[float] = None
    N: Optional[int] = None
    schedule: Optional[DecaySchedule] = None
    c: float = 2.0 / 3.0

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise WeightError(f"unknown weight kind '{self.kind}'")

        if self.schedule is not None and self.a0 is None:
            object.__setattr__(self, 'a0', self.schedule.a0)

        if self.kind in ('frac_exp_plus', 'frac_exp_minus', 'phiN_piecewise'):
            _require_positive('a0', self.a0)
        if self.kind == 'exp_linear':
            if self.beta is None or not math.isfinite(self.beta) or self.beta < 0:
                raise WeightError("'beta' must be a non-negative number")
        if self.kind in ('poly_bracket', 'truncated_odd', 'truncated_even'):
            _require_positive('alpha', self.alpha)
        if self.kind in ('phiN_piecewise', 'truncated_odd', 'truncated_even'):
            if self.N is None or int(self.N) != self.N or self.N < 1:
                raise WeightError("'N' must be a positive integer")
            object.__setattr__(self, 'N', int(self.N))
        if self.kind == 'airy_envelope':
            _require_positive('c', self.c)

    @property
    def scheduled(self) -> bool:
        return self.schedule is not None

    @property
    def signed(self) -> bool:
        return self.kind == 'truncated_odd'

    def label(self) -> str:
        parts = [self.kind]
        for name in ('a0', 'beta', 'alpha', 'N'):
            value = getattr(self, name)
            if value is not None:
                parts.append(f'{name}={value:g}')
        if self.scheduled:
            parts.append(f'schedule={self.schedule.direction}')
        return ':'.join(parts)

    def to_dict(self) -> Dict[str, Any]:
        data = {'kind': self.kind}
        for name in ('a0', 'beta', 'alpha', 'N'):
            if getattr(self, name) is not None:
                data[name] = getattr(self, name)
        if self.kind == 'airy_envelope':
            data['c'] = self.c
        data['schedule'] = self.schedule.direction if self.scheduled else None
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'WeightSpec':
        data = dict(data)
        schedule = data.pop('schedule', None)
        if schedule is not None:
            if data.get('a0') is None:
                raise WeightError("a scheduled weight needs 'a0'")
            schedule = DecaySchedule(data['a0'], schedule)
        unknown = set(data) - {'kind', 'a0', 'beta', 'alpha', 'N', 'c'}
        if unknown:
            raise WeightError(f'unknown weight parameters: {sorted(unknown)}')
        return cls(schedule=schedule, **data)

def _require_positive(name: str, value: Optional[float]) -> None:
    if value is None or not math.isfinite(value) or value <= 0:
        raise WeightError(f"'{name}' must be positive")

#-------------------------------------------------------------------------------

@dataclass(frozen=True)
class SolitonSpec:
    k: int
    c: float
    x0: float = 0.0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise SpecError("'k' must be an integer >= 1")
        if not (math.isfinite(self.c) and self.c > 0):
            raise SpecError("'c' must be positive")
        object.__setattr__(self, 'k', int(self.k))

    @property
    def c_k(self) -> float:
        return (self.k + 1) * (self.k + 2) / 2.0

    @property
    def amplitude(self) -> float:
        return (self.c_k * self.c) ** (1.0 / self.k)

#-------------------------------------------------------------------------------

@dataclass(frozen=True)
class SolverConfig:
    """
    Time-integration settings. `dt=None` lets `solver.evolve` pick
    0.1 dx / max(1, |u0|_inf)^k. Non-positive snapshot times request a
    backward run.

    """

    k: int = 1
    dt: Optional[float] = None
    dealias: bool = True
    sponge: Optional[SpongeSpec] = None
    snapshot_times: Tuple[float, ...] = ()
    conservation_check_interval: int = 0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise SpecError("'k' must be an integer >= 1")
        if self.dt is not None and not (math.isfinite(self.dt) and self.dt > 0):
            raise SpecError("'dt' must be positive")

        times = tuple(float(t) for t in self.snapshot_times)
        elapsed = [abs(t) for t in times]
        if any(t > 0 for t in times) and any(t < 0 for t in times):
            raise SpecError('snapshot times must not mix forward and backward times')
        if any(b <= a for a, b in zip(elapsed, elapsed[1:])):
            raise SpecError('snapshot times must be strictly increasing in |t|')

        if self.sponge is not None:
            sponge = SpongeSpec(*self.sponge)
            if sponge.width <= 0 or sponge.strength < 0:
                raise SpecError('sponge width must be positive and strength non-negative')
            object.__setattr__(self, 'sponge', sponge)
        if self.conservation_check_interval < 0:
            raise SpecError("'conservation_check_interval' must be non-negative")

        object.__setattr__(self, 'k', int(self.k))
        object.__setattr__(self, 'snapshot_times', times)

    @property
    def backward(self) -> bool:
        return any(t < 0 for t in self.snapshot_times)

#-------------------------------------------------------------------------------

@dataclass
class Trajectory:
    config: SolverConfig
    snapshots: List[Field] = field(default_factory=list)
    rows: List[DiagnosticRow] = field(default_factory=list)
    flags: Set[str] = field(default_factory=set)
    conservation: List[Tuple[float, float, float, float]] = field(default_factory=list)
    blow_up_time: Optional[float] = None
    steps: int = 0

    @property
    def times(self) -> np.ndarray:
        return np.asarray([u.t for u in self.snapshots])

    @property
    def grid(self) -> Grid:
        return self.snapshots[0].grid

    @property
    def initial(self) -> Field:
        return self.snapshots[0]

    @property
    def final(self) -> Field:
        return self.snapshots[-1]

#-------------------------------------------------------------------------------

@dataclass(frozen=True)
class TailFit:
    window: Window
    model: str
    rate: float
    log_c: float
    residual_rms: float
    samples: int

@dataclass
class PersistenceAudit:
    beta: float
    times: np.ndarray
    norms: np.ndarray
    growth: float
    smoothing_integral: float
    bound: float
    max_excess: float
    below_line: bool
    passed: bool
    saturated: bool = False

@dataclass
class ConservedAudit:
    times: np.ndarray
    mass: np.ndarray
    l2: np.ndarray
    energy: np.ndarray
    drift_mass: float
    drift_l2: float
    drift_energy: float
    l2_nonincreasing: bool

@dataclass
class WeightedSeries:
    """Weighted L2 norms of every snapshot of a trajectory."""

    label: str
    times: np.ndarray
    norms: List[WeightedNorm]

    @property
    def values(self) -> np.ndarray:
        return np.asarray([n.value for n in self.norms])

    @property
    def log_values(self) -> np.ndarray:
        return np.asarray([n.log_value for n in self.norms])

    @property
    def saturated(self) -> bool:
        return any(n.saturated for n in self.norms)

    @property
    def floored(self) -> float:
        return max((n.floored for n in self.norms), default=0.0)

#-------------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    clause_id: str
    status: str
    measured: Any
    expected: Any
    tolerance: Any = None
    note: str = ''

    def __post_init__(self):
        if self.status not in STATUSES:
            raise SpecError(f"unknown verdict status '{self.status}'")

    def to_dict(self) -> Dict[str, Any]:
        return {'clause_id': self.clause_id, 'status': self.status,
                'measured': self.measured, 'expected': self.expected,
                'tolerance': self.tolerance, 'note': self.note}

@dataclass
class ExperimentReport:
    """
    Outcome of one experiment run. A report carrying any flag can only hold
    inconclusive verdicts; `add_verdict` enforces it. `trajectory` keeps the
    first evolved trajectory for the snapshot dump.

    """

    name: str
    run_id: str
    manifest: Dict[str, Any] = field(default_factory=dict)
    verdicts: List[Verdict] = field(default_factory=list)
    series: Dict[str, Tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    rows: List[DiagnosticRow] = field(default_factory=list)
    flags: Set[str] = field(default_factory=set)
    summary: str = ''
    trajectory: Optional[Trajectory] = field(default=None, repr=False, compare=False)

    def add_verdict(self, clause_id: str, status: str, measured: Any, expected: Any,
                    tolerance: Any = None, note: str = '') -> Verdict:
        if self.flags and status != 'inconclusive':
            note = '; '.join(filter(None, [note, 'flagged: ' + ','.join(sorted(self.flags))]))
            status = 'inconclusive'
        verdict = Verdict(str(clause_id), status, measured, expected, tolerance, note)
        self.verdicts.append(verdict)
        return verdict

    def add_row(self, t: float, name: str, value: float, flags: str = '') -> None:
        self.rows.append(DiagnosticRow(self.run_id, float(t), name, float(value), flags))

    @property
    def status(self) -> str:
        statuses = {v.status for v in self.verdicts}
        if 'fail' in statuses:
            return 'fail'
        if 'inconclusive' in statuses or not statuses:
            return 'inconclusive'
        return 'pass'

#-------------------------------------------------------------------------------

@dataclass
class Theme:
    figure_background_color: Tuple[int, ...]

    spine_box_width_perc: float
    spine_box_height_perc: float
    spine_color: Tuple[int, ...]
    spine_width: float

    grid_visibility: bool
    grid_line_color: Tuple[int, ...]
    grid_line_width: float

    tick_length_perc: float
    tick_line_color: Tuple[int, ...]
    tick_line_width: float
    tick_label_color: Tuple[int, ...]
    tick_label_size_perc: float

    title_color: Tuple[int, ...]
    title_size_perc: float
    legend_color: Tuple[int, ...]
    legend_size_perc: float
    line_colors: Tuple[Tuple[int, ...], ...]

@dataclass
class Axes():
    xvalues: np.ndarray
    yvalues: np.ndarray
    color: Tuple[int, ...]
    linewidth: int
    label: str
    points: np.ndarray = field(init=False)

    def __post_init__(self):
        values = np.asarray([self.xvalues, self.yvalues], dtype=float)
        self.points = np.dstack(values)[0]

#-------------------------------------------------------------------------------
