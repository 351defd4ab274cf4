# test_kl_certifier.py - Unittest for the approximate Knill-Laflamme certifier
#
# Copyright (c) [2026] PyFockCodes contributors. All rights reserved.
# This file is part of PyFockCodes.
# PyFockCodes is free software: you can redistribute it and/or modify
# it under the terms of the MIT License. You should have received a copy of
# the MIT License along with PyFockCodes.
# If not, see <https://opensource.org/licenses/MIT>.
#

import io
import json
import math
from unittest import TestCase

import numpy as np
from hypothesis import given, settings, strategies as st
from fockcodes.bounds import loss_probability, eps_to_ad
from fockcodes.classical_codes import ClassicalCode, sample_uniform, sample_multinomial
from fockcodes.errors import CapExceededError, InconclusiveError, OrthogonalityError
from fockcodes.fock_codes import Partition, build_fock_code, make_partition
from fockcodes.kl_certifier import *
from fockcodes.simplex import SimplexShape


def separated_code():
    """ q=3, N=6 code of distance 4 split into two blocks of two words """
    code = ClassicalCode(SimplexShape(3, 6), [[6, 0, 0], [0, 6, 0], [0, 0, 6], [2, 2, 2]])
    return build_fock_code(code, Partition([0, 0, 1, 1], 2, 2), t_target=2)


class TestPatterns(TestCase):
    def test_enumeration_order(self):
        table = enumerate_patterns(3, 2)
        self.assertEqual(len(table), 10)
        self.assertEqual(table.dense().tolist(),
                         [[0, 0, 0],
                          [0, 0, 1], [0, 1, 0], [1, 0, 0],
                          [0, 0, 2], [0, 1, 1], [1, 0, 1], [0, 2, 0], [1, 1, 0], [2, 0, 0]])
        self.assertEqual(table.weights.tolist(), [0, 1, 1, 1, 2, 2, 2, 2, 2, 2])
        self.assertEqual(table.pattern(5), LossPattern((0, 1, 1)))
        self.assertEqual(len(enumerate_patterns(4, 0)), 1)

    def test_cap(self):
        with self.assertRaises(CapExceededError):
            enumerate_patterns(10, 5, cap=100)

    def test_from_dense(self):
        rows = [[0, 2, 1], [0, 0, 0], [3, 0, 0], [1, 1, 1]]
        table = PatternTable.from_dense(rows)
        self.assertEqual(table.dense().tolist(), rows)
        self.assertEqual(table.width, 3)
        with self.assertRaises(ValueError):
            PatternTable.from_dense([[1, -1]])

    def test_loss_pattern(self):
        r = LossPattern([2, 0, 1])
        self.assertEqual(r.weight, 3)
        self.assertEqual(r.q, 3)
        with self.assertRaises(ValueError):
            LossPattern([1, -1])


class TestClosedForm(TestCase):
    @given(st.integers(1, 4), st.integers(0, 6), st.integers(0, 2 ** 32), st.floats(0.01, 0.99))
    @settings(max_examples=40, deadline=None, derandomize=True)
    def test_log_y(self, q, N, seed, gamma):
        rng = np.random.default_rng(seed)
        words = sample_uniform(SimplexShape(q, N), 4, seed).words
        rows = np.array([rng.integers(0, 3, size=q) for _ in range(5)])
        p = 0.5
        got = np.exp(log_y(words, PatternTable.from_dense(rows), N, gamma, p))
        for a, n in enumerate(words):
            for b, r in enumerate(rows):
                w = int(r.sum())
                prod = np.prod([math.comb(int(x), int(y)) for x, y in zip(n, r)])
                expected = (1 - gamma) ** (N - w) * gamma ** w * prod / p if w <= N else 0.0
                self.assertAlmostEqual(got[a, b], expected, delta=1e-12 * max(1.0, expected))

    @given(st.integers(2, 5), st.integers(1, 8), st.integers(0, 2 ** 32))
    @settings(max_examples=30, deadline=None, derandomize=True)
    def test_permutation_covariance(self, q, N, seed):
        rng = np.random.default_rng(seed)
        words = sample_uniform(SimplexShape(q, N), 6, seed).words
        rows = np.array([rng.integers(0, 3, size=q) for _ in range(6)])
        perm = rng.permutation(q)
        a = log_y(words, PatternTable.from_dense(rows), N, 0.3, 0.9)
        b = log_y(words[:, perm], PatternTable.from_dense(rows[:, perm]), N, 0.3, 0.9)
        self.assertTrue(np.array_equal(a, b))

    def test_diag_expectation(self):
        code = ClassicalCode(SimplexShape(2, 2), [[2, 0], [0, 2]])
        fc = build_fock_code(code, make_partition(code, 2))
        p = loss_probability(2, 1, 0.5)
        self.assertAlmostEqual(diag_expectation(fc, 0, (1, 0), 0.5, p), 0.5 * 0.5 * 2 / p)
        self.assertAlmostEqual(diag_expectation(fc, 1, LossPattern((1, 0)), 0.5, p), 0.0)
        with self.assertRaises(ValueError):
            diag_expectation(fc, 2, (1, 0), 0.5, p)
        with self.assertRaises(ValueError):
            diag_expectation(fc, 0, (1, 0), 0.5, 0.0)

    def test_lambda_analytic(self):
        shape = SimplexShape(2, 2)
        gamma, p = 0.3, 0.8
        self.assertAlmostEqual(lambda_analytic((1, 1), shape, gamma, p, 'multinomial'), gamma ** 2 / (2 * p))
        self.assertAlmostEqual(lambda_analytic((1, 1), shape, gamma, p, 'uniform'), gamma ** 2 / (3 * p))
        self.assertAlmostEqual(lambda_analytic((0, 0), shape, gamma, p, 'uniform'), (1 - gamma) ** 2 / p)
        with self.assertRaises(ValueError):
            lambda_analytic((1, 1), shape, gamma, p, 'greedy_gv')

    def test_lambda_empirical(self):
        code = ClassicalCode(SimplexShape(2, 2), [[2, 0], [0, 2], [1, 1]])
        fc = build_fock_code(code, make_partition(code, 3))
        # (C(2,1) + C(0,1) + C(1,1)) / 3 with the prefactor (1-g) g / p
        self.assertAlmostEqual(lambda_empirical(fc, (1, 0), 0.5, 1.0), 0.25 * 3 / 3)


class TestLambdaNormalization(TestCase):
    def test_sum_to_one(self):
        for seed in range(10):
            q, N = 2 + seed % 3, 2 + seed % 4
            sampler = sample_uniform if seed % 2 == 0 else sample_multinomial
            code = sampler(SimplexShape(q, N), 6, seed)
            fc = build_fock_code(code, make_partition(code, 2), check_duplicates=False)
            for mode in LAMBDA_MODES:
                self.assertAlmostEqual(lambda_sum(fc, N, 0.2 + 0.05 * seed, mode), 1.0, delta=1e-9)


class TestNondeformation(TestCase):
    def test_validation(self):
        fc = separated_code()
        with self.assertRaises(ValueError):
            nondeformation_eps(fc, 7, 0.2)
        with self.assertRaises(ValueError):
            nondeformation_eps(fc, 2, 0.2, 'analytic_other')
        with self.assertRaises(ValueError):
            nondeformation_eps(fc, 2, 1.0)

    def test_worst_location(self):
        fc = separated_code()
        res = nondeformation_eps(fc, 2, 0.2)
        self.assertEqual(res.lambda_mode, 'empirical_code_mean')
        self.assertEqual(res.M, 10)
        table = enumerate_patterns(3, 2)
        p = loss_probability(6, 2, 0.2)
        devs = []
        for j in range(len(table)):
            r = table.dense_row(j)
            lam = lambda_empirical(fc, r, 0.2, p)
            devs.append(max(abs(diag_expectation(fc, i, r, 0.2, p) - lam) for i in range(fc.K)))
        self.assertAlmostEqual(res.eps_max, max(devs), delta=1e-12)
        # ties between patterns may resolve either way
        worst = [tuple(table.dense_row(j)) for j in range(len(table))].index(res.worst_pattern)
        self.assertAlmostEqual(devs[worst], res.eps_max, delta=1e-12)
        self.assertIn(res.worst_block, (0, 1))

    def test_concentration(self):
        # certified eps of raw uniform codes shrinks as the code grows
        shape = SimplexShape(12, 12)
        medians = []
        for L in [64, 256, 1024, 4096]:
            values = []
            for seed in range(20):
                code = sample_uniform(shape, L, seed)
                fc = build_fock_code(code, make_partition(code, 2), check_duplicates=False)
                res = nondeformation_eps(fc, 2, 0.1, 'analytic_uniform')
                values.append(certified_eps(2, res.M, res.eps_max))
            medians.append(float(np.median(values)))
        self.assertTrue(all(b <= a for a, b in zip(medians, medians[1:])))
        self.assertLess(medians[-1], medians[0] / 2)


class TestOrthogonality(TestCase):
    def test_proved_by_distance(self):
        verdict = orthogonality_check(separated_code(), 2)
        self.assertEqual(verdict.status, 'proved_by_distance')
        self.assertEqual(verdict.min_distance, 4)
        self.assertTrue(verdict.ok)

    def test_failed(self):
        code = ClassicalCode(SimplexShape(2, 2), [[2, 0], [1, 1]])
        fc = build_fock_code(code, make_partition(code, 2))
        verdict = orthogonality_check(fc, 1)
        self.assertEqual(verdict.status, 'failed')
        w = verdict.witness
        self.assertEqual((w.r, w.r_prime), ((1, 0), (0, 1)))
        self.assertEqual(np.subtract(w.n, w.r).tolist(), np.subtract(w.n_prime, w.r_prime).tolist())
        with self.assertRaises(OrthogonalityError) as ctx:
            certify(fc, 1, 0.1)
        self.assertEqual(ctx.exception.witness, w)

    def test_discarded_neighbour(self):
        code = ClassicalCode(SimplexShape(2, 2), [[2, 0], [0, 2], [1, 1]])
        fc = build_fock_code(code, make_partition(code, 2))
        self.assertEqual(orthogonality_check(fc, 1).status, 'brute_force_verified')
        with self.assertRaises(InconclusiveError):
            orthogonality_check(fc, 1, pattern_cap=1)


class TestCertify(TestCase):
    def test_report(self):
        fc = separated_code()
        report = certify(fc, 2, 0.2)
        self.assertEqual(report.orthogonality, 'proved_by_distance')
        self.assertEqual((report.K, report.T, report.q, report.N, report.M), (2, 2, 3, 6, 10))
        self.assertEqual(report.kraus_normalization, 'A_r/sqrt(p)')
        self.assertAlmostEqual(report.eps_certified, math.sqrt(2 * 10 * report.eps_max))
        self.assertAlmostEqual(report.p_loss, loss_probability(6, 2, 0.2))
        self.assertEqual(report.vacuous, report.eps_certified >= 1.0)
        self.assertAlmostEqual(report.eps_ad, eps_to_ad(min(report.eps_certified, 1.0), report.p_loss))
        self.assertNotIn('wallclock', report.as_dict())
        self.assertIn('wallclock', report.as_dict(timing=True))

        sink = io.StringIO()
        save_report(report, sink, extra={"tool_version": "x"})
        payload = json.loads(sink.getvalue())
        self.assertEqual(list(payload)[0], "tool_version")
        self.assertEqual(payload["worst_pattern"], list(report.worst_pattern))

    def test_rejects(self):
        code = ClassicalCode(SimplexShape(2, 4), [[4, 0], [4, 0], [0, 4], [2, 2]])
        fc = build_fock_code(code, make_partition(code, 2), check_duplicates=False)
        with self.assertRaises(ValueError):
            certify(fc, 1, 0.1)
        with self.assertRaises(CapExceededError):
            certify(separated_code(), 2, 0.2, pattern_cap=5)

    def test_certified_eps(self):
        self.assertAlmostEqual(certified_eps(2, 10, 0.02), math.sqrt(0.4))
        with self.assertRaises(ValueError):
            certified_eps(2, 10, -0.1)

    def test_estimate(self):
        fc = separated_code()
        full = nondeformation_eps(fc, 2, 0.2)
        est = estimate_eps(fc, 2, 0.2, sample_count=50, seed=3)
        self.assertLessEqual(est.eps_max_lower_bound, full.eps_max + 1e-12)
        self.assertFalse(est.certifying)
        self.assertEqual(est.patterns_sampled, 50)
        self.assertLessEqual(est.distinct_patterns, 10)
        again = estimate_eps(fc, 2, 0.2, sample_count=50, seed=3)
        self.assertEqual(est, again)

    def test_estimate_covering_all_patterns(self):
        fc = separated_code()
        full = certify(fc, 2, 0.2)
        est = estimate_eps(fc, 2, 0.2, sample_count=2000, seed=3)
        self.assertEqual(est.distinct_patterns, 10)
        self.assertAlmostEqual(est.eps_max_lower_bound, full.eps_max, delta=1e-14)
        self.assertEqual(est.lambda_mode, full.lambda_mode)

    def test_single_block_is_exact(self):
        code = ClassicalCode(SimplexShape(3, 6), [[6, 0, 0], [0, 6, 0], [0, 0, 6]])
        fc = build_fock_code(code, make_partition(code, 1))
        report = certify(fc, 2, 0.2, lambda_mode='empirical_code_mean')
        self.assertEqual(report.K, 1)
        self.assertEqual(report.eps_max, 0.0)
        self.assertEqual(report.eps_certified, 0.0)
        self.assertFalse(report.vacuous)

    def test_permuted_blocks(self):
        # two single-word blocks: lambda is their midpoint
        code = ClassicalCode(SimplexShape(3, 6), [[4, 2, 0], [0, 4, 2]])
        fc = build_fock_code(code, make_partition(code, 2))
        gamma = 0.2
        p = loss_probability(6, 2, gamma)
        table = enumerate_patterns(3, 2)
        gaps = [abs(diag_expectation(fc, 0, table.dense_row(j), gamma, p)
                    - diag_expectation(fc, 1, table.dense_row(j), gamma, p)) for j in range(len(table))]
        report = certify(fc, 2, gamma, lambda_mode='empirical_code_mean')
        self.assertEqual(report.orthogonality, 'proved_by_distance')
        self.assertGreater(max(gaps), 0.0)
        self.assertAlmostEqual(report.eps_max, 0.5 * max(gaps), delta=1e-12)
        self.assertAlmostEqual(lambda_empirical(fc, (1, 0, 0), gamma, p),
                               0.5 * (diag_expectation(fc, 0, (1, 0, 0), gamma, p)
                                      + diag_expectation(fc, 1, (1, 0, 0), gamma, p)), delta=1e-14)

    def test_feasibility_export(self):
        self.assertTrue(feasibility_check(10 ** 6, 2, 3, 0.1))
