# -*- coding: utf-8 -*-

"""
kdvdecay.records
~~~~~~~~~~~~~~~~

This module contains the run directory format: manifest.json,
diagnostics.csv ({run_id, t, name, value, flags}), verdicts.json
({clause_id, status, measured, expected, tolerance}) and one two-column .dat
file per series, plus snapshots.csv ({t, n, L, values...}) when asked for.
Everything written here is byte-stable for a given report.

"""

__all__ = ('MANIFEST', 'DIAGNOSTICS', 'VERDICTS', 'SNAPSHOTS', 'CSV_HEADER', 'diagnostics_csv',
           'write_snapshots', 'write_run', 'write_dat', 'read_dat', 'read_run', 'summarize',
           'series_filename')

from .base import ExperimentReport, Verdict, DiagnosticRow, Trajectory
from .exceptions import ConfigError
from .utils import format_float, jsonable

from typing import Any, Dict, Iterable, List, Tuple, Union
from pathlib import Path
import numpy as np
import logging
import math
import json
import csv
import io
import re

logger = logging.getLogger(__name__)

#-------------------------------------------------------------------------------

MANIFEST: str = 'manifest.json'
DIAGNOSTICS: str = 'diagnostics.csv'
VERDICTS: str = 'verdicts.json'
SNAPSHOTS: str = 'snapshots.csv'
CSV_HEADER: Tuple[str, ...] = ('run_id', 't', 'name', 'value', 'flags')

#-------------------------------------------------------------------------------

def _clean(value: Any) -> Any:
    """JSON-ready copy: numpy scalars unwrapped, non-finite floats as strings."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (np.generic, np.ndarray, set, frozenset)):
        return _clean(jsonable(value))
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value

def _dump(data: Any) -> str:
    return json.dumps(_clean(data), indent=2, sort_keys=True) + '\n'

def series_filename(name: str) -> str:
    return re.sub(r'[^A-Za-z0-9_.=-]+', '_', name) + '.dat'

#-------------------------------------------------------------------------------

def diagnostics_csv(rows: Iterable[DiagnosticRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([row.run_id, format_float(row.t), row.name, format_float(row.value), row.flags])
    return buffer.getvalue()

def write_dat(path: Union[str, Path], x: np.ndarray, y: np.ndarray) -> Path:
    """Two whitespace-separated columns."""
    path = Path(path)
    lines = [f'{format_float(a)} {format_float(b)}' for a, b in zip(np.ravel(x), np.ravel(y))]
    path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
    return path

def read_dat(path: Union[str, Path]) -> Tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, ndmin=2)
    return data[:, 0], data[:, 1]

def write_snapshots(traj: Trajectory, path: Union[str, Path]) -> Path:
    """One CSV row per snapshot: t, n, L and then the sampled values."""
    path = Path(path)
    with path.open('w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        for u in traj.snapshots:
            writer.writerow([format_float(u.t), u.grid.n_points, format_float(u.grid.half_width)]
                            + [format_float(v) for v in u.values])
    return path

def write_run(report: ExperimentReport, directory: Union[str, Path], snapshots: bool = False) -> Path:
    """
    Write every output of a report into `directory` (created if needed). With
    `snapshots`, the report's trajectory is dumped to snapshots.csv as well.

    """

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    manifest = dict(report.manifest)
    manifest.update({'status': report.status, 'flags': sorted(report.flags),
                     'summary': report.summary,
                     'series': {name: series_filename(name) for name in sorted(report.series)}})
    if snapshots and report.trajectory is not None:
        write_snapshots(report.trajectory, directory / SNAPSHOTS)
        manifest['snapshots'] = SNAPSHOTS
    elif snapshots:
        logger.warning('run %s kept no trajectory, snapshots.csv skipped', report.run_id)

    (directory / MANIFEST).write_text(_dump(manifest), encoding='utf-8')
    (directory / DIAGNOSTICS).write_text(diagnostics_csv(report.rows), encoding='utf-8')
    (directory / VERDICTS).write_text(_dump([v.to_dict() for v in report.verdicts]),
                                      encoding='utf-8')
    for name, (x, y) in sorted(report.series.items()):
        write_dat(directory / series_filename(name), x, y)

    logger.info('run %s written to %s (%s)', report.run_id, directory, report.status)
    return directory

#-------------------------------------------------------------------------------

def read_run(directory: Union[str, Path]) -> ExperimentReport:
    """Rebuild a report from a run directory without recomputing anything."""
    directory = Path(directory)
    try:
        manifest = json.loads((directory / MANIFEST).read_text(encoding='utf-8'))
        verdicts = json.loads((directory / VERDICTS).read_text(encoding='utf-8'))
    except (OSError, json.JSONDecodeError) as error:
        raise ConfigError(f'not a finished run directory: {error}', str(directory)) from error

    report = ExperimentReport(manifest.get('experiment', ''), manifest.get('run_id', ''),
                              manifest, flags=set(manifest.get('flags', ())),
                              summary=manifest.get('summary', ''))
    for entry in verdicts:
        report.verdicts.append(Verdict(entry['clause_id'], entry['status'], entry['measured'],
                                       entry['expected'], entry.get('tolerance'),
                                       entry.get('note', '')))

    for name, filename in manifest.get('series', {}).items():
        path = directory / filename
        if path.exists():
            report.series[name] = read_dat(path)

    diagnostics = directory / DIAGNOSTICS
    if diagnostics.exists():
        with diagnostics.open(newline='', encoding='utf-8') as handle:
            for row in csv.DictReader(handle):
                report.rows.append(DiagnosticRow(row['run_id'], float(row['t']), row['name'],
                                                 float(row['value']), row['flags']))
    return report

def summarize(report: ExperimentReport) -> str:
    """Human-readable verdict table."""
    lines = [f'{report.name} [{report.run_id}]: {report.status}']
    if report.flags:
        lines.append(f"  flags: {', '.join(sorted(report.flags))}")
    for v in report.verdicts:
        lines.append(f'  clause {v.clause_id:>3}  {v.status:<12} measured={_short(v.measured)} '
                     f'expected={_short(v.expected)}' + (f'  ({v.note})' if v.note else ''))
    if report.summary:
        lines.append(f'  {report.summary}')
    return '\n'.join(lines)

def _short(value: Any) -> str:
    if isinstance(value, float):
        return f'{value:.6g}'
    if isinstance(value, dict):
        return '{' + ', '.join(f'{k}: {_short(v)}' for k, v in value.items()) + '}'
    return str(value)

#-------------------------------------------------------------------------------
