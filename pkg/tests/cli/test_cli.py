# -*- coding: utf-8 -*-

from kdvdecay.base import ExperimentReport
from kdvdecay.cli import main, exit_code, EXIT_PASS, EXIT_ERROR, EXIT_FAIL, EXIT_INCONCLUSIVE
from kdvdecay.config import EXPERIMENTS
from kdvdecay.records import MANIFEST, SNAPSHOTS
from contextlib import redirect_stdout, redirect_stderr
from pathlib import Path
import tempfile
import unittest
import json
import io

#-----------------------------------------------------------------------------

def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()

def report_with(*statuses):
    report = ExperimentReport('interpolation_probe', 'r')
    for status in statuses:
        report.add_verdict('10', status, 1.0, 1.0)
    return report

class TestCli(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    #-------------------------------------------------------------------------

    def test_exit_code(self):
        cases = [((), EXIT_INCONCLUSIVE), (('pass',), EXIT_PASS),
                 (('pass', 'inconclusive'), EXIT_INCONCLUSIVE),
                 (('inconclusive', 'fail'), EXIT_FAIL)]
        for statuses, expected in cases:
            with self.subTest(statuses=statuses):
                self.assertEqual(exit_code([report_with(*statuses)]), expected)

    def test_list_experiments(self):
        code, out, _ = invoke('list-experiments')
        lines = out.splitlines()

        with self.subTest():
            self.assertEqual(code, EXIT_PASS)

        with self.subTest():
            self.assertListEqual([line.split()[0] for line in lines], list(EXPERIMENTS))

    def test_validate(self):
        path = self.root / 'interpolation.json'
        path.write_text('{"experiment": "interpolation_probe", "run_id": "probe"}', encoding='utf-8')
        code, out, _ = invoke('validate', str(path))

        with self.subTest():
            self.assertEqual(code, EXIT_PASS)

        with self.subTest():
            self.assertIn('ok (experiment interpolation_probe, run_id probe', out)

    def test_validate_bad_config(self):
        path = self.root / 'bad.json'
        path.write_text('{"experiment": "nope"}', encoding='utf-8')
        code, _, err = invoke('validate', str(path))

        with self.subTest():
            self.assertEqual(code, EXIT_ERROR)

        with self.subTest():
            self.assertTrue(err.startswith('kdvdecay: error: experiment'))

    def test_usage_errors(self):
        for argv in (['run'], ['frobnicate'], ['run', 'interpolation_probe', '--jobs', 'x'],
                     ['run', 'interpolation_probe', '--jobs', '0']):
            with self.subTest(argv=argv):
                self.assertEqual(invoke(*argv)[0], EXIT_ERROR)

    def test_version(self):
        self.assertEqual(invoke('--version')[0], EXIT_PASS)

    #-------------------------------------------------------------------------

    def test_run_and_report(self):
        code, out, _ = invoke('run', 'interpolation_probe', '--output-dir', str(self.root))
        runs = [p.parent for p in self.root.glob(f'*/{MANIFEST}')]

        with self.subTest('code'):
            self.assertEqual(code, EXIT_PASS)

        with self.subTest('directory'):
            self.assertEqual(len(runs), 1)
            self.assertTrue(runs[0].name.startswith('interpolation_probe-'))

        with self.subTest('summary'):
            self.assertIn(': pass', out.splitlines()[0])

        code, out, _ = invoke('report', str(runs[0]), '--plots')

        with self.subTest('report'):
            self.assertEqual(code, EXIT_PASS)

        with self.subTest('plots'):
            self.assertTrue((runs[0] / 'ratio.png').exists())

    def test_run_snapshots(self):
        config = {'experiment': 'soliton_regression', 'run_id': 'small',
                  'grid': {'half_width_L': 30.0, 'n_points': 256},
                  'solver': {'dt': 1e-2, 'final_time_T': 0.2, 'snapshot_times': [0.0, 0.1, 0.2],
                             'conservation_check_interval': 5},
                  'params': {'conservation_T': 0.2, 'richardson_T': 0.2}}
        path = self.root / 'small.json'
        path.write_text(json.dumps(config), encoding='utf-8')

        invoke('run', str(path), '--output-dir', str(self.root), '--snapshots')
        lines = (self.root / 'small' / SNAPSHOTS).read_text(encoding='utf-8').splitlines()

        with self.subTest('rows'):
            self.assertEqual(len(lines), 3)

        with self.subTest('final'):
            self.assertTrue(lines[2].startswith('0.2,256,30.0,'))

    def test_report_missing_directory(self):
        code, _, err = invoke('report', str(self.root / 'missing'))

        with self.subTest():
            self.assertEqual(code, EXIT_ERROR)

        with self.subTest():
            self.assertIn('not a finished run directory', err)

#-----------------------------------------------------------------------------
