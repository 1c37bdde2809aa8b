# -*- coding: utf-8 -*-

from kdvdecay.base import SolverConfig, SolitonSpec, SpongeSpec, SpectralField
from kdvdecay.core import make_grid, sample
from kdvdecay.exceptions import SpecError
from kdvdecay.analytic import soliton
from kdvdecay.utils import relative_drift
from kdvdecay.solver import (IntegratingFactorRK4, step, evolve, sponge_profile, default_sponge,
                             conserved_quantities, default_time_step, richardson_order,
                             BLOW_UP, BOUNDARY_CONTAMINATION)
import unittest
import numpy as np

#-----------------------------------------------------------------------------

class TestSolver(unittest.TestCase):
    grid = make_grid(30.0, 256)
    spec = SolitonSpec(1, 1.0)
    u0 = sample(soliton(spec), grid)

    def test_soliton_travels_exactly(self):
        cfg = SolverConfig(k=1, dt=1e-3, snapshot_times=(0.0, 0.5, 1.0))
        traj = evolve(self.u0, cfg)
        profile = soliton(self.spec)

        with self.subTest('times'):
            self.assertListEqual(traj.times.tolist(), [0.0, 0.5, 1.0])

        for u in traj.snapshots:
            with self.subTest(t=u.t):
                self.assertLessEqual(np.max(np.abs(u.values - profile(self.grid.x, u.t))), 1e-6)

        with self.subTest('flags'):
            self.assertSetEqual(traj.flags, set())

    def test_conservation(self):
        cfg = SolverConfig(k=1, dt=1e-3, snapshot_times=(0.0, 1.0), conservation_check_interval=100)
        traj = evolve(self.u0, cfg)
        table = np.asarray(traj.conservation)

        with self.subTest('records'):
            self.assertEqual(table.shape, (11, 4))

        with self.subTest('l2'):
            self.assertLessEqual(relative_drift(table[:, 2]), 1e-9)

        with self.subTest('energy'):
            self.assertLessEqual(relative_drift(table[:, 3]), 1e-7)

    def test_conserved_quantities_of_soliton(self):
        mass, l2, _ = conserved_quantities(self.u0, 1)
        with self.subTest():
            self.assertAlmostEqual(mass, 12.0, places=8)

        with self.subTest():
            self.assertAlmostEqual(l2, 24.0, places=8)

    def test_snapshot_between_steps(self):
        cfg = SolverConfig(k=1, dt=1e-3, snapshot_times=(0.0, 0.0105))
        traj = evolve(self.u0, cfg)

        with self.subTest():
            self.assertEqual(traj.final.t, 0.0105)

        with self.subTest():
            self.assertEqual(traj.steps, 10)

    def test_backward_run(self):
        cfg = SolverConfig(k=1, dt=1e-3, snapshot_times=(0.0, -1.0))
        traj = evolve(self.u0, cfg)
        exact = soliton(self.spec)(self.grid.x, -1.0)

        with self.subTest():
            self.assertListEqual(traj.times.tolist(), [0.0, -1.0])

        with self.subTest():
            self.assertLessEqual(np.max(np.abs(traj.final.values - exact)), 1e-6)

    def test_richardson_order(self):
        cfg = SolverConfig(k=1)
        order = richardson_order(self.u0, cfg, 0.5, (8e-3, 4e-3, 2e-3))
        self.assertAlmostEqual(order, 4.0, delta=0.3)

    def test_richardson_needs_three_steps(self):
        with self.assertRaises(SpecError):
            richardson_order(self.u0, SolverConfig(k=1), 0.5, (1e-2, 5e-3))

    #-------------------------------------------------------------------------

    def test_blow_up_truncates(self):
        big = sample(lambda x: 10.0 * np.exp(-x ** 2), self.grid)
        traj = evolve(big, SolverConfig(k=1, dt=1.0, snapshot_times=(0.0, 50.0)))

        with self.subTest():
            self.assertIn(BLOW_UP, traj.flags)

        with self.subTest():
            self.assertIsNotNone(traj.blow_up_time)

        with self.subTest():
            self.assertListEqual(traj.times.tolist(), [0.0])

    def test_boundary_contamination_without_sponge(self):
        grid = make_grid(20.0, 256)
        u0 = sample(lambda x: np.exp(-x ** 2), grid)
        bare = evolve(u0, SolverConfig(k=1, dt=2e-3, snapshot_times=(0.0, 2.0)))
        damped = evolve(u0, SolverConfig(k=1, dt=2e-3, snapshot_times=(0.0, 2.0),
                                         sponge=default_sponge(grid)))

        with self.subTest():
            self.assertIn(BOUNDARY_CONTAMINATION, bare.flags)

        with self.subTest():
            self.assertNotIn(BOUNDARY_CONTAMINATION, damped.flags)

    def test_sponge_profile(self):
        grid = make_grid(20.0, 256)
        damping = sponge_profile(grid, 4.0, 5.0)

        with self.subTest('inside'):
            self.assertTrue(np.all(damping[np.abs(grid.x) <= 16.0] == 0.0))

        with self.subTest('edge'):
            self.assertAlmostEqual(damping[0], 5.0)

        with self.subTest('width'):
            with self.assertRaises(SpecError):
                sponge_profile(grid, 5.0, 5.0)

    def test_default_sponge(self):
        self.assertEqual(default_sponge(self.grid), SpongeSpec(30.0 / 8, 5.0))

    #-------------------------------------------------------------------------

    def test_default_time_step(self):
        with self.subTest():
            self.assertAlmostEqual(default_time_step(self.u0, 1), 0.1 * self.grid.dx / 3.0)

        with self.subTest():
            self.assertAlmostEqual(default_time_step(self.u0, 2), 0.1 * self.grid.dx / 9.0)

    def test_padding_size(self):
        to_test = [IntegratingFactorRK4(self.grid, k, 1e-3).pad_size for k in (1, 2, 3)]
        expected = [384, 512, 640]
        self.assertListEqual(to_test, expected)

    def test_step(self):
        state = SpectralField(self.grid, np.fft.fft(self.u0.values))
        advanced = step(state, SolverConfig(k=1, dt=1e-3))
        self.assertAlmostEqual(advanced.t, 1e-3)
        self.assertLess(advanced.hermitian_defect(), 1e-12)

    def test_config_validation(self):
        for kwargs in ({'snapshot_times': (0.0, 1.0, -1.0)}, {'snapshot_times': (0.0, 1.0, 0.5)},
                       {'dt': 0.0}, {'k': 0}, {'sponge': (0.0, 1.0)}):
            with self.subTest(kwargs=kwargs):
                with self.assertRaises(SpecError):
                    SolverConfig(**kwargs)

#-----------------------------------------------------------------------------
