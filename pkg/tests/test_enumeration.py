import logging
import os
import unittest

import numpy as np
from hypothesis import given, settings
import hypothesis.strategies as st

from slopegaps import enumeration
from slopegaps.distribution import expected_gap_count_ratio
from slopegaps.errors import DomainError
from slopegaps.geometry import W1, W2
from slopegaps.section import lambda_vectors

FAST = os.environ.get("SLOPEGAPS_FAST") == "1"


class TestOrbitEnumeration(unittest.TestCase):
    def setUp(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def test_window(self):
        result = enumeration.orbit_enumerate(5, 8.0)
        self.assertTrue(result.stable)
        self.assertFalse(result.warnings)
        x, y = result.vectors[:, 0], result.vectors[:, 1]
        self.assertTrue(np.all(x > 0))
        self.assertTrue(np.all(x <= 8.0 + 1e-9))
        self.assertTrue(np.all(y >= -1e-12))
        self.assertTrue(np.all(y <= 1.05 * x + 1e-9))
        self.assertIn(W1, result.points())
        self.assertTrue(result.contains(W2))

    def test_winners_are_saddle_connections(self):
        for n in (4, 7):
            result = enumeration.orbit_enumerate(n, 12.0, slope_max=2.0)
            for vector in lambda_vectors(n):
                self.assertTrue(result.contains(vector), (n, vector))

    def test_depth_limit(self):
        result = enumeration.orbit_enumerate(6, 20.0, max_depth=2)
        self.assertEqual(result.depth_reached, 2)
        self.assertFalse(result.stable)
        self.assertTrue(result.warnings)
        for element in result.frontier:
            self.assertEqual(element.depth, 2)
            self.assertAlmostEqual(np.linalg.det(element.matrix), 1.0, places=9)
            np.testing.assert_allclose(element.vector, element.matrix[:, element.seed])

    def test_bad_arguments(self):
        with self.assertRaises(DomainError):
            enumeration.orbit_enumerate(5, -1.0)
        with self.assertRaises(DomainError):
            enumeration.orbit_enumerate(5, 4.0, max_depth=0)
        with self.assertRaises(DomainError):
            enumeration.slope_gaps(5, 0.5)
        with self.assertRaises(DomainError):
            enumeration.orbit_enumerate(2, 4.0)

    def test_candidates(self):
        candidates = enumeration.orbit_candidates(6, 8.0)
        self.assertTrue(np.all(candidates[:, 1] > 0))
        self.assertTrue(np.all(candidates[:, 0] >= -1e-12))
        sloped = candidates[candidates[:, 0] > 1e-12]
        self.assertTrue(np.all(sloped[:, 1] <= 2.0 * sloped[:, 0] + 1e-9))
        self.assertTrue(np.all(sloped[:, 0] <= 8.0 * (1 + 1e-12)))
        vertical = candidates[candidates[:, 0] <= 1e-12]
        self.assertTrue(np.any(np.all(np.abs(vertical - np.array([0.0, 1.0])) < 1e-12, axis=1)))
        for vector in lambda_vectors(6):
            self.assertTrue(np.any(np.all(np.abs(candidates - np.array(vector)) < 1e-9, axis=1)), vector)


class TestSlopeGaps(unittest.TestCase):
    def setUp(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def test_gaps_fill_one_period(self):
        sample = enumeration.slope_gaps(5, 20.0)
        self.assertTrue(np.all(sample.gaps > 0))
        self.assertAlmostEqual(sample.gaps.sum(), 20.0 ** 2, places=6)
        self.assertEqual(len(sample.gaps), sample.count)
        self.assertTrue(np.all(np.diff(sample.slopes) > 0))
        self.assertTrue(np.all((sample.slopes >= 0) & (sample.slopes < 1)))

    def test_periodicity(self):
        for n in (3, 5, 8):
            self.assertTrue(enumeration.periodicity_check(enumeration.slope_gaps(n, 20.0)), n)

    def test_generator_order(self):
        first = enumeration.slope_gaps(5, 15.0)
        second = enumeration.slope_gaps(5, 15.0, generator_order=(3, 2, 1, 0))
        np.testing.assert_allclose(first.slopes, second.slopes, atol=1e-10)

    def test_count_ratio(self):
        sample = enumeration.slope_gaps(4, 40.0)
        ratio = sample.count / 40.0 ** 2
        self.assertLess(abs(ratio - expected_gap_count_ratio(4)) / expected_gap_count_ratio(4), 0.08)

    @settings(max_examples=20, deadline=None)
    @given(slopes=st.lists(st.floats(min_value=0.0, max_value=3.0), min_size=1, max_size=40))
    def test_reduce_slopes(self, slopes):
        reduced = enumeration.reduce_slopes(np.array(slopes))
        self.assertTrue(np.all(reduced >= 0))
        self.assertTrue(np.all(reduced < 1))
        self.assertTrue(np.all(np.diff(reduced) > 1e-11))


class TestConvergence(unittest.TestCase):
    def setUp(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def test_ks_decreases(self):
        rows = enumeration.convergence_study(3, (10.0, 40.0))
        self.assertEqual([row.k for row in rows], [10.0, 40.0])
        self.assertTrue(all(row.stable for row in rows))
        self.assertLess(rows[1].ks, rows[0].ks)

    def test_short_strip(self):
        with self.assertRaises(DomainError):
            enumeration.empirical_vs_analytic(5, 2.0)


@unittest.skipIf(FAST, "slow")
class TestEmpiricalAgreement(unittest.TestCase):
    def setUp(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def test_large_strip(self):
        for n in (3, 5, 7):
            ks_small = enumeration.empirical_vs_analytic(n, 10.0)
            ks_mid = enumeration.empirical_vs_analytic(n, 40.0)
            ks_large = enumeration.empirical_vs_analytic(n, 60.0)
            self.logger.info("n=%d KS: %.4f %.4f %.4f", n, ks_small, ks_mid, ks_large)
            self.assertLess(ks_mid, ks_small)
            self.assertLess(ks_large, 0.1)

    def test_convergence_table(self):
        rows = enumeration.convergence_study(5, (10, 20, 40, 60))
        for row in rows:
            self.logger.info("k=%g N=%d N/k^2=%.6f KS=%.6f", row.k, row.count, row.ratio, row.ks)
        self.assertTrue(all(row.stable for row in rows))
        statistics = [row.ks for row in rows]
        for coarse, fine in zip(statistics, statistics[1:]):
            self.assertLess(fine, coarse + 0.01, statistics)
        self.assertLess(statistics[-1], statistics[0])
        self.assertLess(statistics[-1], 0.1)
        expected = expected_gap_count_ratio(5)
        self.assertLess(abs(rows[-1].ratio - expected) / expected, 0.08)
