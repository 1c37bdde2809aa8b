# -*- coding: utf-8 -*-

from kdvdecay.core import (make_grid, sample, to_spectral, to_physical, derivative,
                           bessel_potential, sobolev_norm, l2_norm, integrate, reflect,
                           is_under_resolved, UNDER_RESOLVED)
from kdvdecay.exceptions import GridError, FieldError
import unittest
import numpy as np
import math

#-----------------------------------------------------------------------------

class TestCore(unittest.TestCase):
    grid = make_grid(20.0, 256)
    gauss = sample(lambda x: np.exp(-x ** 2), grid)

    def test_make_grid_rejects_bad_sizes(self):
        for L, n in ((20.0, 100), (20.0, 8), (0.0, 256), (-1.0, 256), (float('inf'), 256)):
            with self.subTest(L=L, n=n):
                with self.assertRaises(GridError):
                    make_grid(L, n)

    def test_grid_nodes(self):
        with self.subTest():
            self.assertEqual(self.grid.x[0], -20.0)

        with self.subTest():
            self.assertAlmostEqual(self.grid.dx, 40.0 / 256)

        with self.subTest():
            self.assertAlmostEqual(self.grid.x[-1], 20.0 - 40.0 / 256)

        with self.subTest():
            self.assertAlmostEqual(self.grid.nyquist, math.pi / self.grid.dx)

    def test_grid_arrays_are_read_only(self):
        with self.assertRaises(ValueError):
            self.grid.x[0] = 1.0

    def test_sample_rejects_non_finite(self):
        with self.assertRaises(FieldError):
            sample(lambda x: 1.0 / x, make_grid(1.0, 16))

    def test_transform_pair(self):
        back = to_physical(to_spectral(self.gauss))
        self.assertLess(np.max(np.abs(back.values - self.gauss.values)), 1e-14)

    def test_derivatives_of_gaussian(self):
        x = self.grid.x
        exact = {
            1: -2.0 * x * np.exp(-x ** 2),
            2: (4.0 * x ** 2 - 2.0) * np.exp(-x ** 2),
            3: (12.0 * x - 8.0 * x ** 3) * np.exp(-x ** 2),
        }
        for order, values in exact.items():
            with self.subTest(order=order):
                error = np.max(np.abs(derivative(self.gauss, order).values - values))
                self.assertLess(error, 1e-10)

    def test_derivative_rejects_order(self):
        with self.assertRaises(FieldError):
            derivative(self.gauss, 4)

    def test_under_resolved_flag(self):
        rng = np.random.default_rng(7)
        noise = sample(lambda x: rng.standard_normal(x.size), self.grid)

        with self.subTest():
            self.assertFalse(is_under_resolved(np.fft.fft(self.gauss.values)))

        with self.subTest():
            self.assertIn(UNDER_RESOLVED, derivative(noise).flags)

    def test_integrate_and_l2(self):
        with self.subTest():
            self.assertAlmostEqual(integrate(self.gauss), math.sqrt(math.pi), places=12)

        with self.subTest():
            self.assertAlmostEqual(l2_norm(self.gauss) ** 2, math.sqrt(math.pi / 2.0), places=12)

    def test_sobolev_norm(self):
        u, ux = self.gauss, derivative(self.gauss)
        with self.subTest():
            self.assertAlmostEqual(sobolev_norm(u, 0), l2_norm(u))

        with self.subTest():
            expected = l2_norm(u) ** 2 + l2_norm(ux) ** 2
            self.assertAlmostEqual(sobolev_norm(u, 1) ** 2, expected, places=10)

        with self.subTest():
            with self.assertRaises(FieldError):
                sobolev_norm(u, -0.5)

    def test_bessel_potential_identity(self):
        shifted = bessel_potential(bessel_potential(self.gauss, 1.5), -1.5)
        self.assertLess(np.max(np.abs(shifted.values - self.gauss.values)), 1e-12)

    def test_reflect(self):
        u = sample(lambda x: np.exp(-(x - 3.0) ** 2), self.grid)
        mirrored = sample(lambda x: np.exp(-(x + 3.0) ** 2), self.grid)

        with self.subTest():
            self.assertLess(np.max(np.abs(reflect(u).values - mirrored.values)), 1e-14)

        with self.subTest():
            self.assertEqual(reflect(u, t=-1.0).t, -1.0)

#-----------------------------------------------------------------------------
