# -*- coding: utf-8 -*-

"""
kdvdecay.initial_data
~~~~~~~~~~~~~~~~~~~~~

This module contains the builders turning an `initial_data` configuration
section into a sampled field.

"""

__all__ = ('build_initial_data', 'gaussian', 'smoothed_box', 'frac_exp_profile',
           'bump_profile', 'read_samples')

from .base import Grid, Field, SolitonSpec
from .exceptions import ConfigError, FieldError
from .core import sample
from .analytic import soliton, bump, BUMP_MASS

from typing import Any, Dict, Tuple, Union
from pathlib import Path
import numpy as np
import logging
import math

logger = logging.getLogger(__name__)

#-------------------------------------------------------------------------------

def gaussian(x: np.ndarray, center: float = 0.0, width: float = 1.0, amp: float = 1.0) -> np.ndarray:
    """amp e^{-((x - center)/width)^2}."""
    if width <= 0:
        raise FieldError("'width' must be positive")
    return amp * np.exp(-((x - center) / width) ** 2)

def frac_exp_profile(x: np.ndarray, b: float = 1.0) -> np.ndarray:
    """e^{b (1 - (1 + x^2)^{3/4})}: smooth, equal to 1 at 0, decaying like e^{-b |x|^{3/2}}."""
    return np.exp(b * (1.0 - (1.0 + x ** 2) ** 0.75))

def bump_profile(x: np.ndarray, center: float, radius: float, amp: float) -> np.ndarray:
    """Smooth compact bump with peak value `amp`."""
    return amp * math.e * BUMP_MASS * radius * bump(x, center, radius)

def smoothed_box(grid: Grid, edges: Tuple[float, float], smoothing: float,
                 amp: float = 1.0) -> np.ndarray:
    """
    Indicator of [left, right] convolved on the grid with the unit-mass bump
    of radius `smoothing`. The support grows by `smoothing` on each side;
    a smoothing below the grid step leaves the box essentially sharp.

    """

    if smoothing <= 0:
        raise FieldError("'smoothing' must be positive")

    left, right = edges
    box = np.where((grid.x >= left) & (grid.x <= right), float(amp), 0.0)

    reach = int(math.floor(smoothing / grid.dx))
    offsets = np.arange(-reach, reach + 1)
    kernel = bump(offsets * grid.dx, 0.0, smoothing)
    if not np.any(kernel > 0):
        return box
    kernel /= np.sum(kernel)

    values = np.zeros_like(box)
    for shift, weight in zip(offsets, kernel):
        if weight > 0:
            values += weight * np.roll(box, shift)
    return values

def read_samples(path: Union[str, Path], grid: Grid) -> np.ndarray:
    """Two-column (x, value) text file, linearly interpolated onto the grid, zero outside."""
    try:
        data = np.loadtxt(path, ndmin=2)
    except (OSError, ValueError) as error:
        raise ConfigError(f'cannot read samples: {error}', 'initial_data.path') from error
    if data.shape[1] != 2:
        raise ConfigError('samples file must have two columns', 'initial_data.path')

    order = np.argsort(data[:, 0])
    return np.interp(grid.x, data[order, 0], data[order, 1], left=0.0, right=0.0)

#-------------------------------------------------------------------------------

def build_initial_data(spec: Dict[str, Any], grid: Grid, seed: int = 0) -> Field:
    """
    Sample the initial datum described by an `initial_data` section. A
    positive `jitter` moves the datum by a uniform random offset in
    [-jitter, jitter] drawn from `seed`.

    """

    kind = spec['kind']
    jitter = float(spec.get('jitter', 0.0))
    shift = np.random.default_rng(seed).uniform(-jitter, jitter) if jitter > 0 else 0.0

    if kind == 'soliton':
        profile = soliton(SolitonSpec(spec['k'], spec['c'], spec['x0'] + shift))
        u0 = sample(profile, grid)
    elif kind == 'gaussian':
        u0 = sample(lambda x: gaussian(x, spec['center'] + shift, spec['width'], spec['amp']), grid)
    elif kind == 'smoothed_box':
        left, right = spec['edges']
        u0 = Field(grid, smoothed_box(grid, (left + shift, right + shift),
                                      spec['smoothing'], spec['amp']))
    elif kind == 'soliton_plus_bump':
        profile = soliton(SolitonSpec(spec['k'], spec['c'], spec['x0'] + shift))
        u0 = sample(lambda x: profile(x) + bump_profile(x, spec['bump_center'] + shift,
                                                        spec['bump_radius'], spec['bump_amp']), grid)
    elif kind == 'frac_exp_profile':
        u0 = sample(lambda x: frac_exp_profile(x - shift, spec['b']), grid)
    elif kind == 'custom':
        u0 = Field(grid, read_samples(spec['path'], grid))
    else:
        raise ConfigError(f"unknown initial data kind '{kind}'", 'initial_data.kind')

    logger.debug('initial data %s: peak %.6g', kind, u0.peak)
    return u0

#-------------------------------------------------------------------------------
