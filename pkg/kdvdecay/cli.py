# -*- coding: utf-8 -*-

"""
kdvdecay.cli
~~~~~~~~~~~~

This module contains the `kdvdecay` command:

    kdvdecay run CONFIG [CONFIG ...] [--jobs N] [--check-determinism] [--plots]
    kdvdecay list-experiments
    kdvdecay validate CONFIG
    kdvdecay report RUN_DIR [--plots]

CONFIG is a JSON file or the bare name of an experiment, which runs its
default configuration. Exit codes: 0 when every verdict passes, 2 when any
fails, 3 when none fails but some are inconclusive, 1 on usage and
configuration errors.

"""

__all__ = ('main', 'build_parser', 'exit_code', 'EXIT_PASS', 'EXIT_ERROR', 'EXIT_FAIL',
           'EXIT_INCONCLUSIVE', 'LOG_FORMAT')

from .__version__ import __version__
from .base import ExperimentReport
from .exceptions import ConfigError, KdvDecayError
from .config import EXPERIMENTS, ExperimentConfig, load_config, validate_config
from .experiments import REGISTRY, run_many, check_determinism
from .records import write_run, read_run, summarize
from .figure import plot_report
from .themes import THEMES

from typing import List, Optional, Sequence
from pathlib import Path
import argparse
import logging
import sys

logger = logging.getLogger(__name__)

#-------------------------------------------------------------------------------

EXIT_PASS: int = 0
EXIT_ERROR: int = 1
EXIT_FAIL: int = 2
EXIT_INCONCLUSIVE: int = 3

LOG_FORMAT: str = '%(asctime)s %(levelname)s %(name)s: %(message)s'

#-------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """Usage errors become ConfigError so that they exit with 1, not argparse's 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ConfigError(message)

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='kdvdecay', description='gKdV decay experiments.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--log-level', default='WARNING',
                        choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'))
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    run = commands.add_parser('run', help='run experiments and write their outputs')
    run.add_argument('configs', nargs='+', metavar='CONFIG',
                     help='JSON configuration file or experiment name')
    run.add_argument('--output-dir', default=None, help='overrides output_dir of every config')
    run.add_argument('--jobs', type=int, default=1, help='parallel runs (process pool)')
    run.add_argument('--check-determinism', action='store_true',
                     help='run twice and compare diagnostics.csv')
    run.add_argument('--plots', action='store_true', help='render every series as PNG')
    run.add_argument('--snapshots', action='store_true', help='dump the trajectory to snapshots.csv')
    run.add_argument('--theme', default='standard', choices=sorted(THEMES))

    commands.add_parser('list-experiments', help='list the experiments and their clauses')

    validate = commands.add_parser('validate', help='validate a configuration file')
    validate.add_argument('config', metavar='CONFIG')

    report = commands.add_parser('report', help='summarize a finished run directory')
    report.add_argument('run_dir', metavar='RUN_DIR')
    report.add_argument('--plots', action='store_true', help='render every series as PNG')
    report.add_argument('--theme', default='standard', choices=sorted(THEMES))
    return parser

#-------------------------------------------------------------------------------

def exit_code(reports: Sequence[ExperimentReport]) -> int:
    statuses = {report.status for report in reports}
    if 'fail' in statuses:
        return EXIT_FAIL
    if 'inconclusive' in statuses or not statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS

def _resolve(config: str, overrides: Optional[dict]) -> ExperimentConfig:
    path = Path(config)
    if not path.exists() and config in EXPERIMENTS:
        return validate_config({'experiment': config, **(overrides or {})})
    return load_config(path, overrides)

def _run(args: argparse.Namespace) -> int:
    if args.jobs < 1:
        raise ConfigError("'--jobs' must be at least 1")
    overrides = {'output_dir': args.output_dir} if args.output_dir else None
    cfgs = [_resolve(config, overrides) for config in args.configs]

    reports = run_many(cfgs, args.jobs)
    for cfg, report in zip(cfgs, reports):
        if args.check_determinism:
            check_determinism(cfg, report)
        directory = write_run(report, cfg.output_dir / cfg.run_id, snapshots=args.snapshots)
        if args.plots:
            plot_report(report, directory, THEMES[args.theme])
        print(summarize(report))
    return exit_code(reports)

def _list_experiments() -> int:
    for name in EXPERIMENTS:
        doc = (REGISTRY[name].__doc__ or '').strip().splitlines()
        print(f'{name:<22} {doc[0] if doc else ""}')
    return EXIT_PASS

def _validate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    print(f'{args.config}: ok (experiment {cfg.experiment}, run_id {cfg.run_id}, '
          f'hash {cfg.config_hash[:12]})')
    return EXIT_PASS

def _report(args: argparse.Namespace) -> int:
    report = read_run(args.run_dir)
    print(summarize(report))
    if args.plots:
        plot_report(report, args.run_dir, THEMES[args.theme])
    return exit_code([report])

#-------------------------------------------------------------------------------

def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as error:
        print(f'kdvdecay: error: {error}', file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as exit:
        return int(exit.code or 0)

    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)

    try:
        if args.command == 'run':
            return _run(args)
        if args.command == 'list-experiments':
            return _list_experiments()
        if args.command == 'validate':
            return _validate(args)
        return _report(args)
    except KdvDecayError as error:
        print(f'kdvdecay: error: {error}', file=sys.stderr)
        return EXIT_ERROR
    except OSError as error:
        print(f'kdvdecay: error: {error}', file=sys.stderr)
        return EXIT_ERROR

#-------------------------------------------------------------------------------
