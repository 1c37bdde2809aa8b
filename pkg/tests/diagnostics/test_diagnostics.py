# -*- coding: utf-8 -*-

from kdvdecay.base import SolverConfig, SolitonSpec, Trajectory, WeightSpec, Window
from kdvdecay.core import make_grid, sample
from kdvdecay.analytic import soliton
from kdvdecay.exceptions import FitError, SaturationError, SpecError
from kdvdecay.initial_data import frac_exp_profile
from kdvdecay.diagnostics import (weighted_series, resolved_extent, tail_window, fit_tail,
                                  persistence_audit, interpolation_check, conserved_audit,
                                  energy_identity_residual, flux_functional,
                                  smoothing_gain_check, windowed_integral, diagnostic_rows)
import unittest
import numpy as np
import math

#-----------------------------------------------------------------------------

def moving_gaussians(grid, times):
    snapshots = [sample(lambda x, t=t: np.exp(-(x - t) ** 2), grid, t) for t in times]
    return Trajectory(SolverConfig(k=1), snapshots=snapshots)

#-----------------------------------------------------------------------------

class TestDiagnostics(unittest.TestCase):
    grid = make_grid(40.0, 1024)
    gauss = sample(lambda x: np.exp(-x ** 2), grid)

    def test_resolved_extent(self):
        extent = resolved_extent(self.gauss)
        self.assertTrue(math.sqrt(12 * math.log(10)) < extent <= math.sqrt(12 * math.log(10)) + self.grid.dx)

    def test_resolved_extent_stops_at_noise_shelf(self):
        shelf = sample(lambda x: np.exp(-x ** 2) + 1e-8 * np.exp(-(x - 15.0) ** 2 / 50.0), self.grid)
        self.assertTrue(4.5 < resolved_extent(shelf) < 5.2)

    def test_weighted_series(self):
        traj = moving_gaussians(self.grid, [0.0, 0.5, 1.0])
        series = weighted_series(traj, WeightSpec('exp_linear', beta=0.5))

        with self.subTest():
            self.assertListEqual(series.times.tolist(), [0.0, 0.5, 1.0])

        with self.subTest():
            self.assertTrue(np.all(np.diff(series.values) > 0))

        with self.subTest():
            self.assertFalse(series.saturated)

    def test_weighted_series_resolved(self):
        u = sample(lambda x: frac_exp_profile(x, 1.0), self.grid)
        traj = Trajectory(SolverConfig(k=1), snapshots=[u])
        spec = WeightSpec('frac_exp_plus', a0=1.0)
        full = weighted_series(traj, spec)
        cut = weighted_series(traj, spec, resolved=True)

        with self.subTest():
            self.assertFalse(cut.saturated)

        with self.subTest():
            self.assertLessEqual(cut.values[0], full.values[0])
            self.assertAlmostEqual(cut.values[0], full.values[0], places=4)

    def test_windowed_integral(self):
        ones = sample(np.ones_like, self.grid)
        inside = np.count_nonzero((self.grid.x > -1.0) & (self.grid.x < 1.0))
        self.assertAlmostEqual(windowed_integral(ones, np.ones(self.grid.n_points), -1.0, 1.0),
                               inside * self.grid.dx)

    #-------------------------------------------------------------------------

    def test_right_window_and_frac_exp_fit(self):
        u = sample(lambda x: frac_exp_profile(x, 0.7), self.grid)
        window = tail_window(u, 1.0)
        fit = fit_tail(u, 'frac_exp', window)

        with self.subTest('window'):
            self.assertTrue(3.0 < window.x_lo < 5.0 < 9.0 < window.x_hi < 12.0)

        with self.subTest('rate'):
            self.assertAlmostEqual(fit.rate, 0.7, delta=0.01)

        with self.subTest('samples'):
            self.assertGreaterEqual(fit.samples, 20)

    def test_left_window(self):
        scale = 3.0 ** (1.0 / 3.0)
        with self.subTest('clipped'):
            window = tail_window(self.gauss, 1.0, 'left', interior=30.0)
            self.assertEqual(window.x_lo, -30.0)
            self.assertAlmostEqual(window.x_hi, -3.0 * scale)

        with self.subTest('origin'):
            window = tail_window(self.gauss, 1.0, 'left', interior=40.0, origin=-5.0)
            self.assertAlmostEqual(window.x_lo, -40.0)
            self.assertAlmostEqual(window.x_hi, -5.0 - 3.0 * scale)

    def test_window_errors(self):
        zero = sample(np.zeros_like, self.grid)
        cases = {
            'time': lambda: tail_window(self.gauss, 0.0),
            'side': lambda: tail_window(self.gauss, 1.0, 'up'),
            'zero': lambda: tail_window(zero, 1.0),
            'interior': lambda: tail_window(self.gauss, 1.0, 'left', interior=3.0),
        }
        for name, call in cases.items():
            with self.subTest(name):
                with self.assertRaises(FitError):
                    call()

    def test_power_fit_of_oscillating_tail(self):
        grid = make_grid(40.0, 4096)
        envelope = lambda x: np.where(x < -1.0, np.maximum(np.abs(x), 1.0) ** -0.25
                                      * np.cos(2.0 / 3.0 * np.abs(x) ** 1.5), 0.0)
        u = sample(envelope, grid)
        fit = fit_tail(u, 'power', Window(-30.0, -4.0))

        with self.subTest():
            self.assertAlmostEqual(fit.rate, 0.25, delta=0.01)

        with self.subTest():
            self.assertLess(fit.residual_rms, 0.01)

    def test_fit_errors(self):
        cases = {
            'model': lambda: fit_tail(self.gauss, 'cubic', Window(1.0, 3.0)),
            'order': lambda: fit_tail(self.gauss, 'frac_exp', Window(3.0, 1.0)),
            'negative': lambda: fit_tail(self.gauss, 'frac_exp', Window(-3.0, 1.0)),
            'samples': lambda: fit_tail(self.gauss, 'frac_exp', Window(1.0, 1.2)),
        }
        for name, call in cases.items():
            with self.subTest(name):
                with self.assertRaises(FitError):
                    call()

    #-------------------------------------------------------------------------

    def test_persistence_of_moving_gaussian(self):
        traj = moving_gaussians(make_grid(20.0, 512), np.linspace(0.0, 1.0, 11))
        audit = persistence_audit(traj, 0.1)

        with self.subTest('growth'):
            self.assertAlmostEqual(audit.growth, 0.1, places=6)

        with self.subTest('line'):
            self.assertTrue(audit.below_line)

        with self.subTest('passed'):
            self.assertTrue(audit.passed)
            self.assertLessEqual(audit.smoothing_integral, audit.bound)

    def test_persistence_needs_positive_beta(self):
        with self.assertRaises(SpecError):
            persistence_audit(moving_gaussians(self.grid, [0.0, 1.0]), 0.0)

    #-------------------------------------------------------------------------

    def test_interpolation_ratio_is_stable(self):
        ratios = []
        for lam in (0.5, 1.0, 2.0, 4.0):
            f = sample(lambda x: np.exp(-(lam * x) ** 2), self.grid)
            result = interpolation_check(f, 1.0, 1.0, 0.5)
            ratios.append(result.ratio)
            with self.subTest(lam=lam):
                self.assertGreater(result.lhs, 0.0)
                self.assertGreater(result.rhs_product, 0.0)

        self.assertLessEqual(max(ratios) / min(ratios), 3.0)

    def test_interpolation_errors(self):
        with self.subTest('edge'):
            with self.assertRaises(SaturationError):
                interpolation_check(sample(np.ones_like, self.grid), 1.0, 1.0, 0.5)

        with self.subTest('theta'):
            with self.assertRaises(SpecError):
                interpolation_check(self.gauss, 1.0, 1.0, 1.0)

    #-------------------------------------------------------------------------

    def test_conserved_audit_of_translation(self):
        grid = make_grid(30.0, 512)
        profile = soliton(SolitonSpec(1, 1.0))
        snapshots = [sample(lambda x, t=t: profile(x, t), grid, t) for t in (0.0, 0.5, 1.0)]
        audit = conserved_audit(Trajectory(SolverConfig(k=1), snapshots=snapshots))

        with self.subTest():
            self.assertLess(audit.drift_l2, 1e-12)

        with self.subTest():
            self.assertLess(audit.drift_energy, 1e-10)

        with self.subTest():
            self.assertTrue(audit.l2_nonincreasing)

    def test_energy_identity_of_soliton(self):
        grid = make_grid(30.0, 512)
        profile = soliton(SolitonSpec(1, 1.0))
        times = (0.49, 0.5, 0.51)
        snapshots = [sample(lambda x, t=t: profile(x, t), grid, t) for t in times]
        traj = Trajectory(SolverConfig(k=1), snapshots=snapshots)

        t, residual, scale = energy_identity_residual(traj, WeightSpec('exp_linear', beta=0.5))
        with self.subTest():
            self.assertListEqual(t.tolist(), [0.5])

        with self.subTest():
            self.assertLess(abs(residual[0]) / scale[0], 1e-4)

    def test_energy_identity_needs_three_snapshots(self):
        with self.assertRaises(SpecError):
            energy_identity_residual(moving_gaussians(self.grid, [0.0, 1.0]),
                                     WeightSpec('exp_linear', beta=0.5))

    def test_flux_functional_of_static_field(self):
        snapshots = [sample(lambda x: np.exp(-x ** 2), self.grid, t) for t in (0.0, 1.0, 2.0)]
        traj = Trajectory(SolverConfig(k=1), snapshots=snapshots)
        x = self.grid.x
        flux = self.grid.dx * np.sum(4.0 * x ** 2 * np.exp(-2.0 * x ** 2) * 0.5 * np.exp(0.5 * x))
        self.assertAlmostEqual(flux_functional(traj, WeightSpec('exp_linear', beta=0.5)),
                               2.0 * flux, places=8)

    def test_smoothing_gain(self):
        lhs, rhs = smoothing_gain_check(self.gauss, 0.3)
        self.assertLessEqual(lhs, rhs)

    #-------------------------------------------------------------------------

    def test_diagnostic_rows(self):
        with self.subTest('scalar'):
            rows = diagnostic_rows('run', 0.5, 'rate', 0.38)
            self.assertListEqual([tuple(r) for r in rows], [('run', 0.5, 'rate', 0.38, '')])

        with self.subTest('series'):
            rows = diagnostic_rows('run', [0.0, 1.0], 'norm', [2.0, 3.0], 'saturated')
            self.assertListEqual([r.value for r in rows], [2.0, 3.0])
            self.assertListEqual([r.flags for r in rows], ['saturated', 'saturated'])

        with self.subTest('lengths'):
            with self.assertRaises(SpecError):
                diagnostic_rows('run', [0.0, 1.0], 'norm', [2.0])

#-----------------------------------------------------------------------------
