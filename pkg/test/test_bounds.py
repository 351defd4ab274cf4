# test_bounds.py - Unittest for rate bounds and conversions
#
# Copyright (c) [2026] PyFockCodes contributors. All rights reserved.
# This file is part of PyFockCodes.
# PyFockCodes is free software: you can redistribute it and/or modify
# it under the terms of the MIT License. You should have received a copy of
# the MIT License along with PyFockCodes.
# If not, see <https://opensource.org/licenses/MIT>.
#

import io
import math
from unittest import TestCase

import numpy as np
from fockcodes.bounds import *
from fockcodes.errors import ConvergenceError


class TestEntropy(TestCase):
    def test_h2(self):
        self.assertEqual(h2(0.0), 0.0)
        self.assertEqual(h2(1.0), 0.0)
        self.assertAlmostEqual(h2(0.5), 1.0, places=14)
        self.assertAlmostEqual(h2(0.25), h2(0.75), places=14)
        self.assertTrue(np.allclose(h2(np.array([0.0, 0.5])), [0.0, 1.0]))
        with self.assertRaises(ValueError):
            h2(1.5)
        with self.assertRaises(ValueError):
            h2(-0.1)

    def test_entropy_binom_estimate(self):
        self.assertAlmostEqual(entropy_binom_estimate(10, 5), 10.0)
        self.assertGreaterEqual(entropy_binom_estimate(20, 7), math.log2(math.comb(20, 7)))
        with self.assertRaises(ValueError):
            entropy_binom_estimate(4, 5)


class TestLossProbability(TestCase):
    def test_values(self):
        self.assertAlmostEqual(loss_probability(2, 1, 0.5), 0.75, places=14)
        self.assertEqual(loss_probability(5, 5, 0.9), 1.0)
        self.assertEqual(loss_probability(5, 7, 0.9), 1.0)
        self.assertEqual(loss_probability(5, 2, 0.0), 1.0)
        self.assertEqual(loss_probability(5, 2, 1.0), 0.0)
        expected = sum(math.comb(6, j) * 0.2 ** j * 0.8 ** (6 - j) for j in range(3))
        self.assertAlmostEqual(loss_probability(6, 2, 0.2), expected, places=14)

    def test_validation(self):
        with self.assertRaises(ValueError):
            ChannelParams(1.2, 3, 1)
        with self.assertRaises(ValueError):
            ChannelParams(0.2, -3, 1)
        with self.assertRaises(ValueError):
            ChannelParams(0.2, 3, -1)
        self.assertEqual(p_loss(ChannelParams(0.3, 4, 4)), 1.0)


class TestRates(TestCase):
    def test_endpoints(self):
        self.assertAlmostEqual(rate_gv(0.0, 1.0), 2.0, delta=1e-12)
        self.assertAlmostEqual(rate_u(0.0, 1.0), 1.0, delta=1e-12)

    def test_gv_above_uniform(self):
        for delta in np.linspace(0.0, 0.2, 41):
            self.assertGreaterEqual(rate_gv(delta, 1.0), rate_u(delta, 1.0))

    def test_domain(self):
        with self.assertRaises(ValueError):
            rate_gv(1.0, 1.0)
        with self.assertRaises(ValueError):
            rate_u(0.1, 0.0)
        with self.assertRaises(ValueError):
            rate_m(-0.1, 1.0)

    def test_delta_alpha(self):
        for alpha in [0.5, 1.0, 2.0, 5.0, 10.0]:
            self.assertAlmostEqual(delta_alpha(alpha), delta_alpha_bessel(alpha), delta=1e-8)
        self.assertAlmostEqual(delta_alpha(1e6), 1.0, delta=1e-5)
        self.assertAlmostEqual(delta_alpha_bessel(1e6), 1.0, delta=1e-5)
        self.assertAlmostEqual(delta_alpha_bessel(1.0), 0.5238, delta=1e-3)
        with self.assertRaises(ConvergenceError):
            delta_alpha(1.0, tol=1e-300)

    def test_skellam(self):
        # E|X - Z| for X, Z ~ Poisson(mu) by direct summation
        alpha = 2.0
        mu = 1.0 / alpha
        k = np.arange(60)
        pmf = np.exp(-mu + k * math.log(mu) - np.array([math.lgamma(x + 1) for x in k]))
        expected = float(np.sum(np.abs(k[:, None] - k[None, :]) * pmf[:, None] * pmf[None, :]))
        self.assertAlmostEqual(skellam_mean_abs(alpha), expected, places=10)

    def test_rate_m_sign(self):
        root = delta_alpha_bessel(1.0)
        self.assertGreater(rate_m(root - 0.1, 1.0), 0.0)
        self.assertLess(rate_m(root + 0.1, 1.0), 0.0)
        self.assertAlmostEqual(rate_m(0.0, 1.0), root ** 2 / (8 * math.log(2)))

    def test_kraus_exponent(self):
        self.assertEqual(kraus_exponent(0.0, 2.0, 'binary'), 0.0)
        self.assertEqual(kraus_exponent(0.0, 2.0, 'modes'), 0.0)
        self.assertAlmostEqual(kraus_exponent(1.0, 2.0, 'binary'), 2.0)
        self.assertAlmostEqual(kraus_exponent(1.0, 1.0, 'modes'), 2.0)
        with self.assertRaises(ValueError):
            kraus_exponent(0.1, 1.0, 'other')

    def test_quantum_rate_bound(self):
        self.assertAlmostEqual(quantum_rate_bound(0.0, 1.0, 'uniform'), 1.0 / 3)
        self.assertLess(quantum_rate_bound(0.2, 5.0, 'uniform', 'modes'),
                        quantum_rate_bound(0.2, 5.0, 'uniform', 'binary'))
        with self.assertRaises(ValueError):
            quantum_rate_bound(0.1, 1.0, 'greedy')

    def test_exact_quantum_rate(self):
        self.assertAlmostEqual(exact_quantum_rate(0.0, 1.0), 2.0, delta=1e-12)
        self.assertAlmostEqual(exact_quantum_rate(0.0, 2.0), 3 * h2(1 / 3), delta=1e-12)
        self.assertGreater(exact_quantum_rate(0.01, 1.0), 0.0)

    def test_counts(self):
        self.assertEqual(kraus_count(3, 2), 10)
        self.assertEqual(kraus_count(1, 4), 5)
        self.assertEqual(kraus_count(4, 0), 1)
        self.assertEqual(tverberg_dimension(1, 3, 2), 1)
        self.assertEqual(tverberg_dimension(4, 3, 1), 4)
        self.assertEqual(tverberg_dimension(8, 3, 2), 2)
        self.assertEqual(tverberg_dimension(9, 3, 2), 3)
        self.assertEqual(tverberg_dimension(10, 3, 2), 3)
        with self.assertRaises(ValueError):
            tverberg_dimension(0, 3, 2)


class TestConversions(TestCase):
    def test_eps_to_ad(self):
        self.assertEqual(eps_to_ad(0.0, 1.0), 0.0)
        for p in [0.1, 0.5, 0.9]:
            self.assertAlmostEqual(eps_to_ad(0.0, p), math.sqrt(1 - p), delta=1e-14)
        self.assertAlmostEqual(eps_to_ad(1.0, 0.3), 1.0)
        with self.assertRaises(ValueError):
            eps_to_ad(1.5, 0.5)
        with self.assertRaises(ValueError):
            eps_to_ad(0.5, 0.0)

    def test_eps_from_ad(self):
        self.assertEqual(eps_from_ad(0.3, 1.0), 0.3)
        self.assertAlmostEqual(eps_from_ad(0.3, 0.25), 0.6)

    def test_monotone(self):
        grid = np.linspace(0.0, 1.0, 51)
        for p in [0.2, 0.7, 1.0]:
            to_ad = [eps_to_ad(e, p) for e in grid]
            from_ad = [eps_from_ad(e, p) for e in grid]
            self.assertTrue(np.all(np.diff(to_ad) >= 0))
            self.assertTrue(np.all(np.diff(from_ad) >= 0))
        values = [eps_to_ad(0.2, p) for p in np.linspace(0.1, 1.0, 10)]
        self.assertTrue(np.all(np.diff(values) <= 0))


class TestFeasibility(TestCase):
    def test_clear_cases(self):
        self.assertTrue(feasibility_check(10 ** 6, 2, 3, 0.1))
        self.assertFalse(feasibility_check(100, 10, 10, 0.1))

    def test_exact_ties(self):
        # K^3 M^2 = 64 = L^(1/2)
        self.assertTrue(feasibility_check(4096, 4, 1, 0.5))
        self.assertFalse(feasibility_check(4095, 4, 1, 0.5))
        # K^3 M^2 = 8 = L
        self.assertTrue(feasibility_check(8, 2, 1, 0.0))
        self.assertFalse(feasibility_check(7, 2, 1, 0.0))

    def test_validation(self):
        with self.assertRaises(ValueError):
            feasibility_check(0, 1, 1, 0.1)
        with self.assertRaises(ValueError):
            feasibility_check(10, 1, 1, 1.0)
        with self.assertRaises(ValueError):
            feasibility_check(10, 1.5, 1, 0.1)

    def test_threshold(self):
        self.assertAlmostEqual(inf_norm_threshold(1024, 1.0, 1.0), 20.0)
        self.assertAlmostEqual(inf_norm_threshold(100, 1.0, 0.0, 'multinomial'),
                               math.log(100) / math.log(math.log(100)))
        with self.assertRaises(ValueError):
            inf_norm_threshold(1, 1.0, 0.1)
        with self.assertRaises(ValueError):
            inf_norm_threshold(100, 1.0, 0.1, 'other')


class TestPlan(TestCase):
    def test_random_code_plan(self):
        plan = random_code_plan(20, 1.0, 0.1, 2, 10 ** 6, 0.05)
        self.assertEqual(plan.q, 20)
        self.assertEqual(plan.t, 2)
        self.assertEqual(plan.M, math.comb(22, 20))
        self.assertTrue(plan.truncation_meaningful)
        self.assertAlmostEqual(plan.p_loss, loss_probability(20, 2, 0.05))
        self.assertEqual(plan.as_dict()['ensemble'], 'uniform')
        with self.assertRaises(ValueError):
            random_code_plan(20, 1.0, 0.1, 2, 100, 0.05, ensemble='greedy')


class TestCurves(TestCase):
    def test_curve_spec(self):
        curve = CurveSpec('rate_u', 1.0)
        self.assertEqual(curve(0.0), rate_u(0.0, 1.0))
        self.assertEqual(curve.label, 'rate_u')
        self.assertEqual(CurveSpec('quantum_rate_bound', 5.0, 'multinomial', 'modes').label,
                         'quantum_rate_bound_multinomial_modes')
        with self.assertRaises(ValueError):
            CurveSpec('rate_x', 1.0)

    def test_uniform_crossing(self):
        roots = quantum_crossings(5.0, 'uniform')
        self.assertGreater(roots['binary'], 0.1)
        self.assertLess(roots['binary'], 0.15)
        self.assertLess(roots['modes'], roots['binary'])
        self.assertAlmostEqual(quantum_rate_bound(roots['binary'], 5.0, 'uniform'), 0.0, delta=1e-9)

    def test_multinomial_crossing(self):
        roots = quantum_crossings(5.0, 'multinomial')
        self.assertGreater(roots['binary'], 0.0)
        self.assertLess(roots['binary'], 0.05)

    def test_zero_crossing(self):
        self.assertAlmostEqual(zero_crossing(lambda x: x - 0.25, 0.0, 1.0), 0.25, delta=1e-10)
        with self.assertRaises(ValueError):
            zero_crossing(lambda x: x + 1.0, 0.0, 1.0)

    def test_emit_curve(self):
        sink = io.StringIO()
        emit_curve(CurveSpec('rate_gv', 1.0), [0.0, 0.1], sink)
        lines = sink.getvalue().splitlines()
        self.assertEqual(lines[0], 'delta,value')
        self.assertEqual(lines[1], '0,2')
        self.assertEqual(len(lines), 3)
        with self.assertRaises(ValueError):
            emit_curve(CurveSpec('rate_gv', 1.0), [], io.StringIO())
