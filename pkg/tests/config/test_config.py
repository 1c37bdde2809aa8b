# -*- coding: utf-8 -*-

from kdvdecay.base import SpongeSpec
from kdvdecay.exceptions import ConfigError
from kdvdecay.config import EXPERIMENTS, INITIAL_KINDS, default_config, validate_config, load_config
from pathlib import Path
import tempfile
import unittest
import json
import os

#-----------------------------------------------------------------------------

class TestConfig(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, text, name='config.json'):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(text)
        return path

    #-------------------------------------------------------------------------

    def test_default_config(self):
        for name in EXPERIMENTS:
            config = default_config(name)
            with self.subTest(experiment=name):
                self.assertEqual(config['experiment'], name)
                self.assertSetEqual(set(config['grid']), {'half_width_L', 'n_points'})

    def test_defaults_validate(self):
        for name in EXPERIMENTS:
            with self.subTest(experiment=name):
                data = default_config(name)['initial_data']
                allowed = set(INITIAL_KINDS[data['kind']]) | {'kind', 'jitter'}
                self.assertLessEqual(set(data), allowed)
                cfg = validate_config({'experiment': name})
                self.assertEqual(cfg.experiment, name)

    def test_default_initial_data_is_not_merged(self):
        self.assertDictEqual(default_config('theorem1_decay')['initial_data'],
                             {'kind': 'frac_exp_profile', 'b': 1.0})

    def test_default_config_is_a_copy(self):
        config = default_config('theorem1_decay')
        config['weights'].clear()
        self.assertEqual(len(default_config('theorem1_decay')['weights']), 5)

    def test_default_config_unknown(self):
        with self.assertRaises(ConfigError) as context:
            default_config('nope')
        self.assertEqual(context.exception.path, 'experiment')

    def test_minimal_config(self):
        cfg = validate_config({'experiment': 'soliton_regression'})

        with self.subTest('grid'):
            self.assertEqual(cfg.grid.n_points, 2048)
            self.assertEqual(cfg.grid.half_width, 60.0)

        with self.subTest('solver'):
            self.assertEqual(cfg.solver.k, 1)
            self.assertEqual(cfg.solver.dt, 1e-3)
            self.assertEqual(cfg.final_time, 20.0)

        with self.subTest('run_id'):
            self.assertEqual(cfg.run_id, f'soliton_regression-{cfg.config_hash[:8]}')

        with self.subTest('hash'):
            self.assertEqual(len(cfg.config_hash), 64)

        with self.subTest('output_dir'):
            self.assertEqual(cfg.output_dir, Path('runs'))

    def test_hash_ignores_run_id_and_output_dir(self):
        base = validate_config({'experiment': 'interpolation_probe'})
        named = validate_config({'experiment': 'interpolation_probe', 'run_id': 'named',
                                 'output_dir': 'elsewhere'})
        seeded = validate_config({'experiment': 'interpolation_probe', 'seed': 1})

        with self.subTest():
            self.assertEqual(base.config_hash, named.config_hash)

        with self.subTest():
            self.assertEqual(named.run_id, 'named')

        with self.subTest():
            self.assertNotEqual(base.config_hash, seeded.config_hash)

    def test_partial_initial_data_keeps_kind(self):
        cfg = validate_config({'experiment': 'soliton_regression', 'initial_data': {'c': 2.0}})
        self.assertDictEqual(cfg.initial_data, {'kind': 'soliton', 'k': 1, 'c': 2.0, 'x0': 0.0})

    def test_kind_change_replaces_initial_data(self):
        data = {'kind': 'gaussian', 'center': 0.0, 'width': 1.0, 'amp': 1.0}
        cfg = validate_config({'experiment': 'soliton_regression', 'initial_data': data})
        self.assertDictEqual(cfg.initial_data, data)

    def test_kind_change_needs_every_field(self):
        with self.assertRaises(ConfigError) as context:
            validate_config({'experiment': 'soliton_regression',
                             'initial_data': {'kind': 'gaussian', 'center': 0.0}})

        with self.subTest():
            self.assertEqual(context.exception.path, 'initial_data')

        with self.subTest():
            self.assertIn('initial_data.width', str(context.exception))

    def test_sponge_defaults(self):
        cfg = validate_config({'experiment': 'soliton_regression', 'solver': {'sponge': {}}})
        self.assertEqual(cfg.solver.sponge, SpongeSpec(7.5, 5.0))

    def test_weights(self):
        cfg = validate_config({'experiment': 'theorem1_decay'})

        with self.subTest():
            self.assertListEqual([w.kind for w in cfg.weights], ['frac_exp_plus'] * 2
                                 + ['phiN_piecewise'] * 3)

        with self.subTest():
            self.assertTrue(cfg.weights[0].scheduled)
            self.assertFalse(cfg.weights[1].scheduled)

    #-------------------------------------------------------------------------

    def test_field_errors(self):
        cases = [
            ({'run_id': 'x'}, 'experiment'),
            ({'experiment': 'nope'}, 'experiment'),
            ({'experiment': 'soliton_regression', 'colour': 1}, 'colour'),
            ({'experiment': 'soliton_regression', 'grid': {'n_points': 512}}, 'grid'),
            ({'experiment': 'soliton_regression',
              'grid': {'half_width_L': 30.0, 'n_points': 1000}}, 'grid.n_points'),
            ({'experiment': 'soliton_regression',
              'grid': {'half_width_L': 30.0, 'n_points': True}}, 'grid.n_points'),
            ({'experiment': 'soliton_regression',
              'grid': {'half_width_L': -1.0, 'n_points': 256}}, 'grid.half_width_L'),
            ({'experiment': 'soliton_regression', 'solver': {'k': 0}}, 'solver.k'),
            ({'experiment': 'soliton_regression', 'solver': {'dt': -1.0}}, 'solver.dt'),
            ({'experiment': 'soliton_regression', 'solver': {'sponge': {'width': 20.0}}},
             'solver.sponge.width'),
            ({'experiment': 'soliton_regression', 'solver': {'snapshot_times': [0.0, 2.0, 1.0]}},
             'solver.snapshot_times'),
            ({'experiment': 'soliton_regression', 'initial_data': {'kind': 'wave'}},
             'initial_data.kind'),
            ({'experiment': 'soliton_regression', 'initial_data': {'colour': 1}},
             'initial_data.colour'),
            ({'experiment': 'theorem1_decay',
              'weights': [{'kind': 'frac_exp_plus', 'schedule': 'forward'}]}, 'weights[0]'),
            ({'experiment': 'soliton_regression', 'seed': 1.5}, 'seed'),
            ({'experiment': 'soliton_regression', 'run_id': 'a/b'}, 'run_id'),
        ]
        for data, path in cases:
            with self.subTest(path=path):
                with self.assertRaises(ConfigError) as context:
                    validate_config(data)
                self.assertEqual(context.exception.path, path)

    def test_error_line(self):
        text = ('{\n'
                '  "experiment": "soliton_regression",\n'
                '  "grid": {\n'
                '    "half_width_L": 30.0,\n'
                '    "n_points": 100\n'
                '  }\n'
                '}\n')
        with self.assertRaises(ConfigError) as context:
            validate_config(json.loads(text), text)

        with self.subTest():
            self.assertEqual(context.exception.line, 5)

        with self.subTest():
            self.assertIn('grid.n_points (line 5)', str(context.exception))

    #-------------------------------------------------------------------------

    def test_load_config(self):
        path = self.write('{"experiment": "interpolation_probe", "seed": 3}')
        cfg = load_config(path)

        with self.subTest():
            self.assertEqual(cfg.experiment, 'interpolation_probe')

        with self.subTest():
            self.assertEqual(cfg.seed, 3)

    def test_load_config_overrides(self):
        path = self.write('{"experiment": "interpolation_probe"}')
        cfg = load_config(path, {'output_dir': self.tmp.name})
        self.assertEqual(cfg.output_dir, Path(self.tmp.name))

    def test_load_config_json_syntax(self):
        path = self.write('{\n  "experiment": \n}\n')
        with self.assertRaises(ConfigError) as context:
            load_config(path)

        with self.subTest():
            self.assertEqual(context.exception.line, 3)

        with self.subTest():
            self.assertIn('invalid JSON', str(context.exception))

    def test_load_config_missing_file(self):
        with self.assertRaises(ConfigError):
            load_config(os.path.join(self.tmp.name, 'missing.json'))

    def test_load_config_not_an_object(self):
        path = self.write('[1, 2]')
        with self.assertRaises(ConfigError):
            load_config(path, {'output_dir': 'x'})

#-----------------------------------------------------------------------------
