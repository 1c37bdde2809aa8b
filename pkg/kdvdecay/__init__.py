# -*- coding: utf-8 -*-

"""
kdvdecay
~~~~~~~~

Pseudospectral simulator for the generalized Korteweg-de Vries equation
u_t + u_xxx + u^k u_x = 0, plus the weighted-norm diagnostics that measure
how fast fractional-exponential tails decay in time. Every experiment turns
its measurements into pass / fail / inconclusive verdicts, written next to a
CSV of diagnostic rows:

    from kdvdecay import default_config, validate_config, run_experiment

    cfg = validate_config(default_config('linear_airy_decay'))
    report = run_experiment(cfg)
    print(report.status)

"""

__all__ = ('Grid', 'Field', 'WeightSpec', 'DecaySchedule', 'SolitonSpec', 'SolverConfig',
           'ExperimentReport', 'make_grid', 'sample', 'evolve', 'log_weighted_l2',
           'default_config', 'load_config', 'validate_config', 'run_experiment',
           'write_run', 'read_run', 'SeriesFigure', 'KdvDecayError', '__version__')

from .__version__ import __version__
from .exceptions import KdvDecayError
from .base import Grid, Field, WeightSpec, DecaySchedule, SolitonSpec, SolverConfig, ExperimentReport
from .core import make_grid, sample
from .solver import evolve
from .weights import log_weighted_l2
from .config import default_config, load_config, validate_config
from .experiments import run_experiment
from .records import write_run, read_run
from .figure import SeriesFigure

#-------------------------------------------------------------------------------
