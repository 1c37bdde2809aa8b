# -*- coding: utf-8 -*-

"""
kdvdecay.config
~~~~~~~~~~~~~~~

This module contains the experiment configuration: the complete default
configuration of every experiment, JSON loading with line-precise error
messages, validation, and the resolved `ExperimentConfig` the runners use.

A configuration file is deep-merged over the defaults of the experiment it
names, so a file holding only {"experiment": "soliton_regression"} is valid.
The `grid` section is the exception: when a file provides it, it must be
complete.

"""

__all__ = ('EXPERIMENTS', 'INITIAL_KINDS', 'ExperimentConfig', 'default_config',
           'load_config', 'validate_config', 'merge_config')

from .base import Grid, SolverConfig, SpongeSpec, WeightSpec
from .exceptions import ConfigError, KdvDecayError
from .core import make_grid
from .utils import config_hash, is_power_of_two

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union
from numbers import Number
from pathlib import Path
import numpy as np
import logging
import copy
import json

logger = logging.getLogger(__name__)

#-------------------------------------------------------------------------------

EXPERIMENTS: Tuple[str, ...] = ('soliton_regression', 'linear_airy_decay', 'theorem1_decay',
                                'persistence_kato', 'corollary1_left_tail',
                                'soliton_perturbation', 'regularity_link',
                                'interpolation_probe')

INITIAL_KINDS: Dict[str, Tuple[str, ...]] = {
    'soliton': ('k', 'c', 'x0'),
    'gaussian': ('center', 'width', 'amp'),
    'smoothed_box': ('edges', 'smoothing', 'amp'),
    'soliton_plus_bump': ('k', 'c', 'x0', 'bump_center', 'bump_radius', 'bump_amp'),
    'frac_exp_profile': ('b',),
    'custom': ('path',),
}

TOP_LEVEL_KEYS: Tuple[str, ...] = ('experiment', 'run_id', 'grid', 'solver', 'initial_data',
                                   'weights', 'params', 'output_dir', 'seed')
SOLVER_KEYS: Tuple[str, ...] = ('k', 'dt', 'dealias', 'sponge', 'final_time_T',
                                'snapshot_times', 'conservation_check_interval')

#-------------------------------------------------------------------------------

def _times(start: float, stop: float, step: float) -> List[float]:
    count = int(round((stop - start) / step))
    return [round(start + i * step, 12) for i in range(count + 1)]

_BASE: Dict[str, Any] = {
    'experiment': None,
    'run_id': None,
    'grid': {'half_width_L': 60.0, 'n_points': 1024},
    'solver': {'k': 1, 'dt': None, 'dealias': True, 'sponge': None, 'final_time_T': 1.0,
               'snapshot_times': None, 'conservation_check_interval': 0},
    'initial_data': {'kind': 'gaussian', 'center': 0.0, 'width': 1.0, 'amp': 1.0},
    'weights': [],
    'params': {},
    'output_dir': 'runs',
    'seed': 0,
}

_DEFAULTS: Dict[str, Dict[str, Any]] = {
    'soliton_regression': {
        'grid': {'half_width_L': 60.0, 'n_points': 2048},
        'solver': {'dt': 1e-3, 'final_time_T': 20.0, 'snapshot_times': _times(0.0, 20.0, 5.0),
                   'conservation_check_interval': 500},
        'initial_data': {'kind': 'soliton', 'k': 1, 'c': 1.0, 'x0': 0.0},
        'params': {'max_error': 1e-5, 'conservation_T': 10.0, 'l2_drift': 1e-10,
                   'energy_drift': 1e-8, 'richardson_T': 1.0,
                   'richardson_dts': [8e-3, 4e-3, 2e-3], 'order': 4.0, 'order_tolerance': 0.2},
    },
    'linear_airy_decay': {
        'grid': {'half_width_L': 4096.0, 'n_points': 65536},
        'solver': {'final_time_T': 4.0, 'snapshot_times': [0.0, 0.5, 1.0, 2.0, 4.0]},
        'initial_data': {'kind': 'gaussian', 'center': 0.0, 'width': 0.5, 'amp': 1.0},
        'params': {'checked_times': [1.0, 2.0, 4.0], 'limit': 2.0 / (3.0 * 3.0 ** 0.5),
                   'tolerance': 0.1, 'max_rms': 0.5},
    },
    'theorem1_decay': {
        'grid': {'half_width_L': 50.0, 'n_points': 2048},
        'solver': {'final_time_T': 2.0, 'snapshot_times': _times(0.0, 2.0, 0.1),
                   'sponge': {'width': 12.0, 'strength': 200.0}},
        'initial_data': {'kind': 'frac_exp_profile', 'b': 1.0},
        'weights': [{'kind': 'frac_exp_plus', 'a0': 1.0, 'schedule': 'forward'},
                    {'kind': 'frac_exp_plus', 'a0': 1.0, 'schedule': None},
                    {'kind': 'phiN_piecewise', 'a0': 1.0, 'N': 8, 'schedule': 'forward'},
                    {'kind': 'phiN_piecewise', 'a0': 1.0, 'N': 16, 'schedule': 'forward'},
                    {'kind': 'phiN_piecewise', 'a0': 1.0, 'N': 32, 'schedule': 'forward'}],
        'params': {'bound_ratio': 10.0, 'exceed_ratio': 10.0, 'schedule_samples': 100,
                   'schedule_tolerance': 1e-12, 'jump_steps': [1e-3, 1e-4], 'mollify': 0.1},
    },
    'persistence_kato': {
        'grid': {'half_width_L': 60.0, 'n_points': 1024},
        'solver': {'final_time_T': 2.0, 'snapshot_times': _times(0.0, 2.0, 0.1),
                   'sponge': {'width': 12.0, 'strength': 200.0}},
        'initial_data': {'kind': 'gaussian', 'center': 0.0, 'width': 4.0, 'amp': 0.25},
        'params': {'beta': 0.1},
    },
    'corollary1_left_tail': {
        'grid': {'half_width_L': 100.0, 'n_points': 4096},
        'solver': {'final_time_T': 1.0, 'snapshot_times': [0.0, 0.5, 1.0],
                   'sponge': {'width': 24.0, 'strength': 200.0}},
        'initial_data': {'kind': 'smoothed_box', 'edges': [-0.125, 0.125], 'smoothing': 0.05,
                         'amp': 1.0},
        'params': {'power': 0.25, 'tolerance': 0.04, 'right_tolerance': 0.25,
                   'window_fractions': [0.25, 0.5, 0.75], 'exponent': 0.5},
    },
    'soliton_perturbation': {
        'grid': {'half_width_L': 160.0, 'n_points': 4096},
        'solver': {'final_time_T': 5.0, 'snapshot_times': _times(0.0, 5.0, 1.0),
                   'sponge': {'width': 36.0, 'strength': 200.0}},
        'initial_data': {'kind': 'soliton_plus_bump', 'k': 1, 'c': 1.0, 'x0': 0.0,
                         'bump_center': -10.0, 'bump_radius': 0.3, 'bump_amp': 0.1},
        'params': {'power': 0.25, 'tolerance': 0.05, 'epsilon': 0.5,
                   'window_fractions': [0.25, 0.5, 0.75], 'peak_ratio': 0.5},
    },
    'regularity_link': {
        'grid': {'half_width_L': 100.0, 'n_points': 4096},
        'solver': {'final_time_T': 1.0, 'snapshot_times': _times(0.0, 1.0, 0.125),
                   'sponge': {'width': 24.0, 'strength': 200.0}},
        'initial_data': {'kind': 'gaussian', 'center': 0.0, 'width': 2.0, 'amp': 1.0},
        'weights': [{'kind': 'truncated_odd', 'alpha': 0.5, 'N': 4},
                    {'kind': 'truncated_odd', 'alpha': 0.5, 'N': 8},
                    {'kind': 'truncated_odd', 'alpha': 0.5, 'N': 16}],
        'params': {'alpha': 0.5, 'window_fractions': [0.25, 0.5, 0.75], 'increment': 1e-3,
                   'rough': {'kind': 'smoothed_box', 'edges': [-2.0, 2.0], 'smoothing': 0.05,
                             'amp': 1.0}},
    },
    'interpolation_probe': {
        'grid': {'half_width_L': 40.0, 'n_points': 1024},
        'solver': {'final_time_T': 0.0, 'snapshot_times': [0.0]},
        'initial_data': {'kind': 'gaussian', 'center': 0.0, 'width': 1.0, 'amp': 1.0},
        'params': {'lambdas': [0.5, 1.0, 2.0, 4.0], 'a': 1.0, 'b': 1.0, 'theta': 0.5,
                   'max_spread': 3.0,
                   'soliton_case': {'k': 1, 'c': 1.0, 'a': 2.0, 'b': 1.0, 'theta': 0.25}},
    },
}

#-------------------------------------------------------------------------------

def merge_config(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive merge of `update` over `base`; lists and scalars are replaced."""
    merged = copy.deepcopy(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged

def default_config(name: str) -> Dict[str, Any]:
    """Complete default configuration of an experiment."""
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment '{name}'; choose from {', '.join(EXPERIMENTS)}",
                          'experiment')
    config = merge_config(_BASE, _DEFAULTS[name])
    if 'initial_data' in _DEFAULTS[name]:
        # initial data is replaced as a whole, never merged
        config['initial_data'] = copy.deepcopy(_DEFAULTS[name]['initial_data'])
    config['experiment'] = name
    return config

#-------------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """Validated configuration with the domain objects built from it."""

    experiment: str
    run_id: str
    grid: Grid
    solver: SolverConfig
    final_time: float
    initial_data: Dict[str, Any]
    weights: Tuple[WeightSpec, ...]
    params: Dict[str, Any]
    output_dir: Path
    seed: int
    raw: Dict[str, Any] = field(repr=False, compare=False)
    config_hash: str = ''

#-------------------------------------------------------------------------------

class _Locator:
    """Line numbers of dotted paths in the source text of a JSON file."""

    def __init__(self, text: Optional[str]):
        self.text = text

    def line(self, path: str) -> Optional[int]:
        if not self.text:
            return None
        position = 0
        for part in path.replace('[', '.[').split('.'):
            if not part or part.startswith('['):
                continue
            found = self.text.find(f'"{part}"', position)
            if found < 0:
                return None
            position = found
        return self.text.count('\n', 0, position) + 1

    def error(self, path: str, message: str) -> ConfigError:
        return ConfigError(message, path, self.line(path))

def _number(value: Any) -> bool:
    return isinstance(value, Number) and not isinstance(value, bool) and np.isfinite(value)

def _integer(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)

#-------------------------------------------------------------------------------

def validate_config(data: Dict[str, Any], text: Optional[str] = None) -> ExperimentConfig:
    """
    Merge a user mapping over its experiment's defaults, validate every field
    and build the domain objects. Errors name the dotted field path and, when
    `text` is given, the line of the offending key.

    """

    locate = _Locator(text)
    if not isinstance(data, dict):
        raise ConfigError('configuration must be a JSON object')

    unknown = sorted(set(data) - set(TOP_LEVEL_KEYS))
    if unknown:
        raise locate.error(unknown[0], f'unknown key (expected one of {", ".join(TOP_LEVEL_KEYS)})')

    name = data.get('experiment')
    if name is None:
        raise locate.error('experiment', 'missing required field')
    if name not in EXPERIMENTS:
        raise locate.error('experiment', f"unknown experiment '{name}'")

    if 'grid' in data:
        if not isinstance(data['grid'], dict):
            raise locate.error('grid', 'must be an object')
        for key in ('half_width_L', 'n_points'):
            if data['grid'].get(key) is None:
                raise locate.error(f'grid.{key}' if key in data['grid'] else 'grid',
                                   f"missing required field 'grid.{key}'")

    defaults = default_config(name)
    merged = merge_config(defaults, data)
    supplied = data.get('initial_data')
    if isinstance(supplied, dict) and supplied.get('kind', defaults['initial_data']['kind']) \
            != defaults['initial_data']['kind']:
        merged['initial_data'] = copy.deepcopy(supplied)

    grid = _validate_grid(merged['grid'], locate)
    solver, final_time = _validate_solver(merged['solver'], grid, locate)
    initial = _validate_initial(merged['initial_data'], locate)
    weights = _validate_weights(merged['weights'], locate)

    if not isinstance(merged['params'], dict):
        raise locate.error('params', 'must be an object')
    if not isinstance(merged['output_dir'], str):
        raise locate.error('output_dir', 'must be a string')
    if not _integer(merged['seed']):
        raise locate.error('seed', 'must be an integer')

    digest = config_hash({k: v for k, v in merged.items() if k not in ('run_id', 'output_dir')})
    run_id = merged['run_id'] or f'{name}-{digest[:8]}'
    if not isinstance(run_id, str) or any(c in run_id for c in '/\\'):
        raise locate.error('run_id', 'must be a string without path separators')

    return ExperimentConfig(name, run_id, grid, solver, final_time, initial, weights,
                            dict(merged['params']), Path(merged['output_dir']),
                            merged['seed'], merged, digest)

def _validate_grid(section: Dict[str, Any], locate: _Locator) -> Grid:
    L, n = section.get('half_width_L'), section.get('n_points')
    if not (_number(L) and L > 0):
        raise locate.error('grid.half_width_L', 'must be a positive number')
    if not (_integer(n) and is_power_of_two(n) and n >= 16):
        raise locate.error('grid.n_points', 'must be a power of two >= 16')

    unknown = sorted(set(section) - {'half_width_L', 'n_points'})
    if unknown:
        raise locate.error(f'grid.{unknown[0]}', 'unknown key')
    return make_grid(float(L), n)

def _validate_solver(section: Dict[str, Any], grid: Grid,
                     locate: _Locator) -> Tuple[SolverConfig, float]:
    if not isinstance(section, dict):
        raise locate.error('solver', 'must be an object')
    unknown = sorted(set(section) - set(SOLVER_KEYS))
    if unknown:
        raise locate.error(f'solver.{unknown[0]}', 'unknown key')

    k = section['k']
    if not (_integer(k) and k >= 1):
        raise locate.error('solver.k', 'must be an integer >= 1')
    dt = section['dt']
    if dt is not None and not (_number(dt) and dt > 0):
        raise locate.error('solver.dt', 'must be null or a positive number')
    if not isinstance(section['dealias'], bool):
        raise locate.error('solver.dealias', 'must be true or false')

    final = section['final_time_T']
    if not _number(final):
        raise locate.error('solver.final_time_T', 'must be a number')

    times = section['snapshot_times']
    if times is None:
        times = [0.0, float(final)] if final != 0 else [0.0]
    if not (isinstance(times, list) and times and all(_number(t) for t in times)):
        raise locate.error('solver.snapshot_times', 'must be a non-empty list of numbers')

    interval = section['conservation_check_interval']
    if not (_integer(interval) and interval >= 0):
        raise locate.error('solver.conservation_check_interval', 'must be a non-negative integer')

    sponge = section['sponge']
    if sponge is not None:
        if not isinstance(sponge, dict):
            raise locate.error('solver.sponge', 'must be null or an object')
        width = sponge.get('width', grid.half_width / 8.0)
        width = grid.half_width / 8.0 if width is None else width
        strength = sponge.get('strength', 5.0)
        if not (_number(width) and 0 < width < grid.half_width / 4.0):
            raise locate.error('solver.sponge.width', 'must lie in (0, L/4)')
        if not (_number(strength) and strength >= 0):
            raise locate.error('solver.sponge.strength', 'must be a non-negative number')
        sponge = SpongeSpec(float(width), float(strength))

    try:
        solver = SolverConfig(k, dt, section['dealias'], sponge, tuple(times), interval)
    except KdvDecayError as error:
        raise locate.error('solver.snapshot_times', str(error)) from error
    return solver, float(final)

def _validate_initial(section: Dict[str, Any], locate: _Locator,
                      path: str = 'initial_data') -> Dict[str, Any]:
    if not isinstance(section, dict):
        raise locate.error(path, 'must be an object')
    kind = section.get('kind')
    if kind not in INITIAL_KINDS:
        raise locate.error(f'{path}.kind', f"unknown initial data kind '{kind}'")

    allowed = set(INITIAL_KINDS[kind]) | {'kind', 'jitter'}
    for key in sorted(section):
        if key not in allowed:
            raise locate.error(f'{path}.{key}', f"not a field of '{kind}' data")
    for key in INITIAL_KINDS[kind]:
        if key not in section:
            raise locate.error(path, f"missing required field '{path}.{key}'")
    if not (_number(section.get('jitter', 0.0)) and section.get('jitter', 0.0) >= 0):
        raise locate.error(f'{path}.jitter', 'must be a non-negative number')

    if kind == 'smoothed_box':
        edges = section['edges']
        if not (isinstance(edges, list) and len(edges) == 2 and all(_number(e) for e in edges)
                and edges[0] < edges[1]):
            raise locate.error(f'{path}.edges', 'must be [left, right] with left < right')
    elif kind == 'custom':
        if not isinstance(section['path'], str):
            raise locate.error(f'{path}.path', 'must be a file path')
    else:
        for key in INITIAL_KINDS[kind]:
            if not _number(section[key]):
                raise locate.error(f'{path}.{key}', 'must be a number')
    return dict(section)

def _validate_weights(section: List[Any], locate: _Locator) -> Tuple[WeightSpec, ...]:
    if not isinstance(section, list):
        raise locate.error('weights', 'must be a list')

    specs = []
    for i, entry in enumerate(section):
        if not isinstance(entry, dict):
            raise locate.error(f'weights[{i}]', 'must be an object')
        try:
            specs.append(WeightSpec.from_dict(entry))
        except (KdvDecayError, TypeError) as error:
            raise ConfigError(str(error), f'weights[{i}]', locate.line('weights')) from error
    return tuple(specs)

#-------------------------------------------------------------------------------

def load_config(path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Read, merge and validate a JSON configuration file."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as error:
        raise ConfigError(f'cannot read configuration: {error.strerror}', str(path)) from error

    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise ConfigError(f'invalid JSON: {error.msg} (column {error.colno})',
                          str(path), error.lineno) from error

    if overrides and isinstance(data, dict):
        data = merge_config(data, overrides)
    config = validate_config(data, text)
    logger.info('loaded %s: experiment %s, hash %s', path, config.experiment, config.config_hash[:12])
    return config

#-------------------------------------------------------------------------------
