# -*- coding: utf-8 -*-

from kdvdecay.base import DecaySchedule, WeightSpec
from kdvdecay.core import make_grid, sample, l2_norm
from kdvdecay.exceptions import WeightError
from kdvdecay.weights import (decay_rate_a, decay_rate_derivative, decay_limit_constant,
                              theta, theta_derivative, theta_curvature_form, p2_slope_ratio,
                              phi_piecewise, phi_derivative, phi_time_derivative,
                              phi_bound_constant, truncated_weight, truncated_derivative,
                              bridge_end, log_weight, evaluate_weight, weight_derivative,
                              log_weighted_l2, weighted_integral, one_sided_jumps)
import unittest
import numpy as np
import math

#-----------------------------------------------------------------------------

class TestWeights(unittest.TestCase):
    forward = DecaySchedule(1.0)
    backward = DecaySchedule(1.0, 'backward')
    grid = make_grid(20.0, 512)
    gauss = sample(lambda x: np.exp(-x ** 2), grid)

    def test_decay_rate_initial_value(self):
        self.assertEqual(decay_rate_a(DecaySchedule(0.7), 0.0), 0.7)

    def test_decay_rate_solves_ode(self):
        for a0 in (0.5, 1.0, 2.0):
            sched = DecaySchedule(a0)
            t = np.linspace(0.0, 2.0, 100)
            residual = decay_rate_derivative(sched, t) + 27.0 / 8.0 * decay_rate_a(sched, t) ** 3
            with self.subTest(a0=a0):
                self.assertLessEqual(np.max(np.abs(residual)), 1e-12)

    def test_decay_rate_limit(self):
        t = 1e10
        self.assertAlmostEqual(decay_rate_a(self.forward, t) * math.sqrt(t),
                               decay_limit_constant(), places=6)
        self.assertAlmostEqual(decay_limit_constant(), 0.3849001794597505)

    def test_decay_rate_backward_uses_elapsed_time(self):
        with self.subTest():
            self.assertEqual(decay_rate_a(self.backward, -1.5), decay_rate_a(self.forward, 1.5))

        with self.subTest():
            with self.assertRaises(WeightError):
                decay_rate_a(self.forward, -1.0)

    def test_schedule_validation(self):
        for args in ((0.0,), (-1.0,), (1.0, 'sideways')):
            with self.subTest(args=args):
                with self.assertRaises(WeightError):
                    DecaySchedule(*args)

    #-------------------------------------------------------------------------

    def test_theta_end_values(self):
        to_test = [theta(0.0), theta(1.0), theta_derivative(0.0, 1), theta_derivative(1.0, 1),
                   theta_derivative(0.0, 2), theta_derivative(1.0, 2)]
        expected = [0.25, 1.0, 0.0, 1.5, 0.0, 0.75]
        for value, target in zip(to_test, expected):
            with self.subTest(target=target):
                self.assertAlmostEqual(value, target, places=14)

    def test_theta_curvature_form(self):
        x = np.linspace(0.0, 1.0, 201)
        with self.subTest():
            self.assertLess(np.max(np.abs(theta_curvature_form(x) - theta_derivative(x, 2))), 1e-13)

        with self.subTest():
            self.assertGreaterEqual(np.min(theta_derivative(x, 2)), -1e-14)

    def test_theta_domain(self):
        with self.assertRaises(WeightError):
            theta(1.5)

    #-------------------------------------------------------------------------

    def test_phi_is_nondecreasing(self):
        for N in (8, 16):
            x = np.linspace(-3.0, 4.0 * N, 4001)
            with self.subTest(N=N):
                self.assertTrue(np.all(np.diff(phi_piecewise(x, 0.5, N, self.forward)) >= 0))

    def test_phi_branches(self):
        with self.subTest():
            self.assertAlmostEqual(phi_piecewise(-2.0, 0.0, 8, self.forward), math.exp(0.25))

        with self.subTest():
            self.assertAlmostEqual(phi_piecewise(4.0, 0.0, 8, self.forward), math.exp(8.0), places=8)

    def test_phi_joins_smoothly(self):
        N = 8
        f = lambda x: phi_piecewise(x, 0.3, N, self.forward)
        for x0 in (0.0, 1.0, float(N)):
            scale = max(phi_derivative(x0, 0.3, N, self.forward, 2), f(x0))
            coarse = one_sided_jumps(f, x0, 1e-3) / scale
            fine = one_sided_jumps(f, x0, 1e-4) / scale
            with self.subTest(x0=x0):
                self.assertLess(np.max(fine), 1e-2)
                self.assertTrue(np.all(fine <= 0.2 * coarse + 1e-7))

    def test_phi_derivatives_match_differences(self):
        N, t, h = 8, 0.4, 1e-5
        x = np.asarray([0.5, 3.0, 12.0])
        for order in (1, 2, 3):
            lower = phi_derivative(x - h, t, N, self.forward, order - 1)
            upper = phi_derivative(x + h, t, N, self.forward, order - 1)
            exact = phi_derivative(x, t, N, self.forward, order)
            with self.subTest(order=order):
                np.testing.assert_allclose((upper - lower) / (2 * h), exact, rtol=1e-5, atol=1e-6)

    def test_phi_time_derivative(self):
        N, t, h = 8, 0.4, 1e-6
        x = np.asarray([-1.0, 0.5, 3.0, 12.0])
        numeric = (phi_piecewise(x, t + h, N, self.forward)
                   - phi_piecewise(x, t - h, N, self.forward)) / (2 * h)
        np.testing.assert_allclose(phi_time_derivative(x, t, N, self.forward), numeric, rtol=1e-5)

    def test_phi_bound_constant(self):
        x = np.linspace(-5.0, 40.0, 2001)
        for N, t in ((8, 0.0), (16, 1.0), (32, 2.0)):
            bound = phi_bound_constant(1.0) * np.exp(decay_rate_a(self.forward, t)
                                                     * np.maximum(x, 0.0) ** 1.5)
            with self.subTest(N=N, t=t):
                self.assertTrue(np.all(phi_piecewise(x, t, N, self.forward) <= bound * (1 + 1e-12)))

    def test_p2_slope_ratio(self):
        for N in (8, 16, 32):
            x = np.linspace(N, 4 * N, 500)
            for t in (0.0, 1.0, 2.0):
                with self.subTest(N=N, t=t):
                    self.assertLessEqual(np.max(p2_slope_ratio(x, t, N, self.forward)), 1.0)

    #-------------------------------------------------------------------------

    def test_truncated_weight_shape(self):
        N, alpha = 4, 0.5
        end = bridge_end(N, alpha)
        x = np.asarray([0.0, 1.0, 2.0, float(N)])

        with self.subTest('inner branch'):
            np.testing.assert_allclose(truncated_weight(x, N, alpha), (1 + x ** 4) ** 0.25 - 1.0)

        with self.subTest('level'):
            self.assertTrue(N < end <= 10 * N)
            np.testing.assert_allclose(truncated_weight([end, 2 * end, 50.0 * N], N, alpha),
                                       (2.0 * N) ** (2 * alpha))

        with self.subTest('monotone'):
            xs = np.linspace(0.0, 12 * N, 5001)
            self.assertTrue(np.all(np.diff(truncated_weight(xs, N, alpha)) >= -1e-12))

    def test_truncated_weight_parity(self):
        x = np.linspace(0.1, 60.0, 300)
        with self.subTest('odd'):
            np.testing.assert_allclose(truncated_weight(-x, 8, 0.5, 'odd'),
                                       -truncated_weight(x, 8, 0.5, 'odd'))

        with self.subTest('even'):
            np.testing.assert_allclose(truncated_weight(-x, 8, 0.5, 'even'),
                                       truncated_weight(x, 8, 0.5, 'even'))

    def test_truncated_derivatives(self):
        N, alpha, h = 4, 0.5, 1e-5
        x = np.asarray([-6.0, 2.0, 5.0, 8.5])
        for order in (1, 2, 3):
            lower = truncated_derivative(x - h, N, alpha, 'odd', order - 1)
            upper = truncated_derivative(x + h, N, alpha, 'odd', order - 1)
            exact = truncated_derivative(x, N, alpha, 'odd', order)
            with self.subTest(order=order):
                np.testing.assert_allclose((upper - lower) / (2 * h), exact, rtol=1e-4, atol=1e-6)

    def test_truncated_derivative_bounded_by_lower_weight(self):
        ratios = {}
        for alpha in (0.75, 1.0):
            for N in (4, 8, 16, 32):
                x = np.linspace(1.0, 12.0 * N, 4001)
                slope = np.abs(truncated_derivative(x, N, alpha, 'even', 1))
                lower = truncated_weight(x, N, alpha - 0.5, 'even')
                ratios[alpha, N] = float(np.max(slope / lower ** 2))

        for alpha in (0.75, 1.0):
            with self.subTest(alpha=alpha):
                self.assertTrue(math.isfinite(ratios[alpha, 32]))
                self.assertLessEqual(ratios[alpha, 32], 1.05 * ratios[alpha, 4])

    #-------------------------------------------------------------------------

    def test_weight_spec_validation(self):
        for data in ({'kind': 'nope'}, {'kind': 'frac_exp_plus'}, {'kind': 'exp_linear', 'beta': -1.0},
                     {'kind': 'phiN_piecewise', 'a0': 1.0, 'N': 2.5},
                     {'kind': 'poly_bracket', 'alpha': 1.0, 'gamma': 2.0}):
            with self.subTest(data=data):
                with self.assertRaises(WeightError):
                    WeightSpec.from_dict(data)

    def test_weight_spec_round_trip_of_schedule(self):
        spec = WeightSpec.from_dict({'kind': 'frac_exp_plus', 'a0': 1.0, 'schedule': 'backward'})
        self.assertTrue(spec.schedule.backward)
        self.assertEqual(spec.to_dict()['schedule'], 'backward')

    def test_log_weight_kinds(self):
        to_test = [
            log_weight(WeightSpec('frac_exp_plus', a0=2.0), 4.0),
            log_weight(WeightSpec('frac_exp_minus', a0=2.0), -4.0),
            log_weight(WeightSpec('exp_linear', beta=0.1), 3.0),
            log_weight(WeightSpec('poly_bracket', alpha=1.0), 2.0),
            log_weight(WeightSpec('airy_envelope'), -15.0),
        ]
        expected = [16.0, 16.0, 0.3, math.log(5.0), -0.25 * math.log(16.0)]
        for value, target in zip(to_test, expected):
            with self.subTest(target=target):
                self.assertAlmostEqual(value, target, places=12)

    def test_backward_weight_is_mirrored(self):
        spec = WeightSpec('frac_exp_plus', schedule=self.backward)
        expected = decay_rate_a(self.backward, -1.0) * 2.0 ** 1.5
        self.assertAlmostEqual(log_weight(spec, -2.0, -1.0), expected)

    def test_odd_truncated_has_no_logarithm(self):
        with self.assertRaises(WeightError):
            log_weight(WeightSpec('truncated_odd', alpha=0.5, N=4), 1.0)

    def test_exp_linear_derivative(self):
        spec = WeightSpec('exp_linear', beta=0.3)
        self.assertAlmostEqual(weight_derivative(spec, 2.0, order=2), 0.09 * math.exp(0.6))

    def test_evaluate_weight_signed(self):
        self.assertLess(evaluate_weight(WeightSpec('truncated_odd', alpha=0.5, N=4), -2.0), 0.0)

    #-------------------------------------------------------------------------

    def test_unit_weight_gives_l2(self):
        norm = log_weighted_l2(self.gauss, WeightSpec('exp_linear', beta=0.0))
        self.assertAlmostEqual(norm.value, l2_norm(self.gauss), places=12)
        self.assertFalse(norm.saturated)

    def test_log_weighted_l2_matches_direct_sum(self):
        spec = WeightSpec('frac_exp_plus', a0=1.0)
        x = self.grid.x
        direct = math.sqrt(self.grid.dx * np.sum(np.exp(np.maximum(x, 0) ** 1.5)
                                                 * self.gauss.values ** 2))
        self.assertAlmostEqual(log_weighted_l2(self.gauss, spec).value, direct, places=10)

    def test_log_weighted_l2_saturates_on_flat_tail(self):
        flat = sample(lambda x: np.ones_like(x), self.grid)
        self.assertTrue(log_weighted_l2(flat, WeightSpec('frac_exp_plus', a0=1.0)).saturated)

    def test_log_weighted_l2_floored_fraction(self):
        u = sample(lambda x: np.where(x < 0, np.exp(-x ** 2), 0.0), self.grid)
        norm = log_weighted_l2(u, WeightSpec('poly_bracket', alpha=1.0))
        self.assertAlmostEqual(norm.floored, 0.5, places=2)

    def test_odd_weighted_integral_of_even_datum(self):
        spec = WeightSpec('truncated_odd', alpha=0.5, N=4)
        self.assertAlmostEqual(weighted_integral(self.gauss, spec), 0.0, places=10)

#-----------------------------------------------------------------------------
