import logging
import math
import os
import unittest

import numpy as np
from hypothesis import given, settings
import hypothesis.strategies as st

from slopegaps import section
from slopegaps.enumeration import orbit_candidates
from slopegaps.errors import DomainError, OracleError, SectionError
from slopegaps.geometry import PlaneVector, edge_h

FAST = os.environ.get("SLOPEGAPS_FAST") == "1"

OMEGA1 = section.SectionComponent.OMEGA1
OMEGA2 = section.SectionComponent.OMEGA2


class PartitionMixin:
    n = None
    samples = 200

    def setUp(self):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.section = section.poincare_section(self.n)

    def test_region_count(self):
        self.assertEqual(len(section.build_partition(self.n)), self.n)
        self.assertEqual([r.index for r in self.section.regions], list(range(1, self.n + 1)))

    def test_areas_tile_omega1(self):
        total = sum(region.area for region in self.section.regions)
        self.assertAlmostEqual(total, 1 + math.cos(math.pi / self.n), places=12)
        self.assertAlmostEqual(self.section.omega2.area, 0.5, places=14)
        self.assertAlmostEqual(self.section.area, 1.5 + math.cos(math.pi / self.n), places=14)

    def test_winners(self):
        vectors = section.lambda_vectors(self.n)
        self.assertEqual(vectors[0], PlaneVector(0.0, 1.0))
        self.assertEqual(vectors[-1], PlaneVector(edge_h(self.n, 1), 1.0))
        for region, vector in zip(self.section.regions, vectors):
            self.assertEqual(region.winner, vector)

    def test_offsets_increase(self):
        vectors = section.lambda_vectors(self.n)
        offsets = [(v.x - 1) / v.y for v in vectors]
        for lower, upper in zip(offsets, offsets[1:]):
            self.assertLess(lower, upper)
        for v in vectors[1:]:
            self.assertAlmostEqual(section.intercept(v), -(v.x - 1) / v.y)
        self.assertTrue(all(section.satisfies_ratio_bound(self.n, v) for v in vectors))

    def test_classify_samples(self):
        rng = np.random.default_rng(self.n)
        for region in self.section.regions:
            if region.area < 1e-12:
                continue
            for on_line in (False, True):
                for x, y in region.sample(rng, 25, on_line=on_line):
                    found = section.classify(self.n, section.SectionPoint(OMEGA1, x, y))
                    self.assertEqual(found.index, region.index, (x, y))

    def test_random_points_tile(self):
        rng = np.random.default_rng(1000 + self.n)
        for component, cells in ((OMEGA1, self.section.regions), (OMEGA2, (self.section.omega2,))):
            corners = section.component_triangle(self.n, component)
            xs = rng.uniform(0.0, 1.0, 50_000)
            ys = rng.uniform(min(p.y for p in corners), max(p.y for p in corners), 50_000)
            inside = np.ones_like(xs, dtype=bool)
            for constraint in section.component_constraints(self.n, component):
                inside &= constraint.holds(xs, ys)
            xs, ys = xs[inside], ys[inside]
            hits = sum(cell.contains(xs, ys).astype(int) for cell in cells)
            self.logger.info("n=%d %s: %d points", self.n, component.value, len(xs))
            self.assertTrue(np.all(hits == 1), (component, int(np.sum(hits != 1))))

    def test_winner_oracle(self):
        n = self.n
        x_max = 1 + edge_h(n, 1) + edge_h(n, math.ceil(n / 2))
        candidates = [PlaneVector(*row) for row in orbit_candidates(n, x_max)]
        rng = np.random.default_rng(20240601)
        for region in self.section.cells:
            if region.area < 1e-12:
                continue
            for on_line in (False, True):
                for x, y in region.sample(rng, self.samples // 2, on_line=on_line):
                    point = section.SectionPoint(region.component, float(x), float(y))
                    winner = section.winner_oracle(n, point, candidates)
                    np.testing.assert_allclose(winner, region.winner, rtol=1e-9, atol=1e-12)


class TestPartition3(PartitionMixin, unittest.TestCase):
    n = 3


class TestPartition4(PartitionMixin, unittest.TestCase):
    n = 4


class TestPartition5(PartitionMixin, unittest.TestCase):
    n = 5


class TestPartition6(PartitionMixin, unittest.TestCase):
    n = 6


@unittest.skipIf(FAST, "slow")
class TestPartition7(PartitionMixin, unittest.TestCase):
    n = 7


@unittest.skipIf(FAST, "slow")
class TestPartition8(PartitionMixin, unittest.TestCase):
    n = 8
    samples = 80


@unittest.skipIf(FAST, "slow")
class TestPartition9(PartitionMixin, unittest.TestCase):
    n = 9


@unittest.skipIf(FAST, "slow")
class TestPartition10(PartitionMixin, unittest.TestCase):
    n = 10
    samples = 60


@unittest.skipIf(FAST, "slow")
class TestPartition11(PartitionMixin, unittest.TestCase):
    n = 11
    samples = 60


@unittest.skipIf(FAST, "slow")
class TestPartition12(PartitionMixin, unittest.TestCase):
    n = 12


class TestWinnerSlopes(unittest.TestCase):
    def setUp(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def test_slopes_decrease(self):
        for n in range(3, 201):
            slopes = [v.slope for v in section.lambda_vectors(n)]
            self.assertEqual(slopes[0], math.inf)
            for i, (steeper, flatter) in enumerate(zip(slopes[1:], slopes[2:]), start=2):
                self.assertGreater(steeper, flatter, (n, i))


class TestReturnTime(unittest.TestCase):
    def setUp(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def test_omega2_value(self):
        self.assertEqual(section.return_time(5, section.SectionPoint(OMEGA2, 0.5, 0.8)), 2.5)

    def test_corner_value(self):
        # (1, 1) lies in P1 with winner (0, 1)
        self.assertEqual(section.return_time(7, section.SectionPoint(OMEGA1, 1.0, 1.0)), 1.0)

    def test_outside_points(self):
        for point in (
            section.SectionPoint(OMEGA1, 0.0, 0.5),
            section.SectionPoint(OMEGA1, 1.5, 0.5),
            section.SectionPoint(OMEGA1, 0.5, 1.5),
            section.SectionPoint(OMEGA2, 0.2, 0.2),
        ):
            self.assertFalse(section.section_contains(5, point))
            with self.assertRaises(SectionError):
                section.classify(5, point)

    def test_oracle_without_candidates(self):
        with self.assertRaises(OracleError):
            section.winner_oracle(5, section.SectionPoint(OMEGA2, 0.9, 0.9), [PlaneVector(3.0, 3.0)])

    def test_bad_n(self):
        with self.assertRaises(DomainError):
            section.build_partition(2)

    @settings(max_examples=200, deadline=None)
    @given(
        n=st.integers(min_value=3, max_value=12),
        x=st.floats(min_value=1e-3, max_value=1.0),
        y=st.floats(min_value=-4.0, max_value=1.0),
        omega2=st.booleans(),
    )
    def test_return_time_at_least_one(self, n, x, y, omega2):
        point = section.SectionPoint(OMEGA2 if omega2 else OMEGA1, x, y)
        if not section.section_contains(n, point):
            return
        self.assertGreaterEqual(section.return_time(n, point), 1 - 1e-12)

    def test_region_slices(self):
        region = section.region_of(7, 3)
        low, high = region.x_range
        for x in np.linspace(low, high, 7)[1:-1]:
            y_bot, y_top = region.y_range(x)
            self.assertLessEqual(y_bot, y_top + 1e-12)
        self.assertIs(section.region_of(7, None), section.poincare_section(7).omega2)
