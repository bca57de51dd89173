"""Invariant checks behind ``slopegaps verify``.

Each check is built lazily and cached, in the same way a template renders
once and is drawn many times. A check never raises: a library error becomes
a failed result with the error text as its detail.
"""
import logging
import math
from typing import List, NamedTuple, Tuple

import numpy as np

from . import distribution, enumeration, geometry, nondiff, section
from .errors import SlopeGapError

KNOWN_COUNTS = {4: 7, 5: 8, 6: 13, 7: 14, 8: 17, 9: 20, 10: 22, 11: 24}


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


class Check:
    name = ""
    defaults = {}

    def __init__(self, n: int, **kwargs) -> None:
        self.logger = logging.getLogger(self.__class__.__name__)
        self.n = n
        self.kwargs = kwargs
        self._result = None

    def __call__(self, **kwargs):
        return self.__class__(self.n, **{**self.kwargs, **kwargs})

    def get(self, key, *args):
        return {**self.defaults, **self.kwargs}.get(key, *args)

    def run(self) -> Tuple[bool, str]:
        raise NotImplementedError

    def build(self) -> CheckResult:
        try:
            passed, detail = self.run()
        except SlopeGapError as exc:
            passed, detail = False, f"{exc.__class__.__name__}: {exc}"
        self.logger.info("n=%d %s: %s (%s)", self.n, self.name, "pass" if passed else "FAIL", detail)
        return CheckResult(self.name, bool(passed), detail)

    @property
    def result(self) -> CheckResult:
        if self._result is None:
            self._result = self.build()
        return self._result

    def draw(self) -> str:
        result = self.result
        return f"{result.name}: {'PASS' if result.passed else 'FAIL'} ({result.detail})"

    def __repr__(self) -> str:
        kwargs = "".join(f", {k}={v!r}" for k, v in self.kwargs.items())
        return f"{self.__class__.__qualname__}({self.n}{kwargs})"


class GeometryCheck(Check):
    name = "geometry"
    defaults = {"tol": 1e-12}

    def run(self):
        n, tol = self.n, self.get("tol")
        staircase = geometry.build_staircase(n)
        worst = max(
            [abs(d) for d in staircase.square_defects()]
            + [abs(r - staircase.aspect) for r in staircase.cylinder_ratios()]
            + [abs(geometry.edge_h(n, n - i) - geometry.edge_h(n, i - 1)) for i in range(-2, n + 3)]
            + [abs(geometry.edge_v(n, n - i) - geometry.edge_v(n, i - 2)) for i in range(-2, n + 3)]
        )
        m = geometry.normalizing_matrix(n)
        s_prime, r_prime, s_two = geometry.veech_generators(n)
        conjugate = m @ geometry.veech_parabolic(n) @ np.linalg.inv(m)
        scale = max(1.0, float(np.abs(s_prime).max()))
        worst_matrix = max(
            float(np.abs(conjugate - s_prime).max()) / scale,
            float(np.abs(s_two - np.array([[1.0, 0.0], [1.0, 1.0]])).max()),
            abs(np.trace(r_prime) - 2 * math.cos(math.pi / n)),
            abs(np.linalg.det(r_prime) - 1),
        )
        return max(worst, worst_matrix) < tol, f"edge {worst:.2e}, matrix {worst_matrix:.2e}"


class PartitionCheck(Check):
    name = "partition"
    defaults = {"tol": 1e-12}

    def run(self):
        poincare = section.poincare_section(self.n)
        total = sum(region.area for region in poincare.regions)
        expected = 1 + math.cos(math.pi / self.n)
        vectors = section.lambda_vectors(self.n)
        offsets = [(v.x - 1) / v.y for v in vectors]
        increasing = all(b > a for a, b in zip(offsets, offsets[1:]))
        bounded = all(section.satisfies_ratio_bound(self.n, v) for v in vectors)
        passed = abs(total - expected) < self.get("tol") and increasing and bounded
        return passed, f"area {total:.15g} vs {expected:.15g}, offsets increasing {increasing}"


class OracleCheck(Check):
    name = "oracle"
    defaults = {"samples": 20, "seed": 20240601}

    def run(self):
        n = self.n
        x_max = 1 + geometry.edge_h(n, 1) + geometry.edge_h(n, math.ceil(n / 2))
        candidates = [geometry.PlaneVector(*row) for row in enumeration.orbit_candidates(n, x_max)]
        rng = np.random.default_rng(self.get("seed"))
        poincare = section.poincare_section(n)
        tried = mismatched = 0
        for region in poincare.cells:
            if region.area < 1e-12:
                continue
            for on_line in (False, True):
                for x, y in region.sample(rng, self.get("samples"), on_line=on_line):
                    point = section.SectionPoint(region.component, float(x), float(y))
                    tried += 1
                    winner = section.winner_oracle(n, point, candidates)
                    if not np.allclose(winner, region.winner, rtol=1e-9, atol=1e-12):
                        mismatched += 1
        return mismatched == 0, f"{tried - mismatched}/{tried} samples agree over {len(candidates)} candidates"


class NormalizationCheck(Check):
    name = "normalization"
    defaults = {"t_far": 1e6, "tol": 1e-6}

    def run(self):
        dist = distribution.slope_gap_distribution(self.n)
        far = dist.cdf(self.get("t_far"))
        support = dist.pdf(1.0) == 0.0 and dist.cdf(1.0) == 0.0 and dist.pdf(0.5) == 0.0
        return abs(far - 1) < self.get("tol") and support, f"F({self.get('t_far'):g}) = {far:.12g}"


class DensityCheck(Check):
    """The density matches a central difference of the CDF away from kinks."""

    name = "density"
    defaults = {"points": (1.37, 2.9, 6.1, 13.3), "h": 1e-5, "tol": 1e-5}

    def run(self):
        dist = distribution.slope_gap_distribution(self.n)
        h = self.get("h")
        worst = 0.0
        for t in self.get("points"):
            difference = (dist.cdf(t + h) - dist.cdf(t - h)) / (2 * h)
            worst = max(worst, abs(difference - dist.pdf(t)) / max(dist.pdf(t), 1e-12))
        return worst < self.get("tol"), f"worst relative gap {worst:.2e}"


class CovolumeCheck(Check):
    name = "covolume"
    defaults = {"tol": 1e-5}

    def run(self):
        computed = distribution.covolume(self.n)
        reference = distribution.reference_covolume(self.n)
        error = abs(computed - reference) / reference
        return error < self.get("tol"), f"{computed:.10f} vs {reference:.10f}, rel {error:.2e}"


class KinkCheck(Check):
    name = "kinks"

    def run(self):
        count = nondiff.count_nondiff(self.n)
        lower, upper = nondiff.bounds(self.n)
        expected = KNOWN_COUNTS.get(self.n)
        passed = lower <= count <= upper and (expected is None or count == expected)
        detail = f"{count} kinks, bounds [{lower:g}, {upper}]"
        if expected is not None:
            detail += f", expected {expected}"
        return passed, detail


class BlindScanCheck(Check):
    name = "blind-scan"
    defaults = {"step": 1e-2, "tol": 1e-6}

    def run(self):
        stamps = nondiff.dedupe_stamps(nondiff.crossing_stamps(self.n))
        found = nondiff.scan_kinks(self.n, step=self.get("step"))
        stray = [t for t in found if min(abs(t - s) for s in stamps) > self.get("tol") * max(1.0, t)]
        return not stray, f"{len(found)} scanned kinks, {len(stray)} away from stamps"


class GapCountCheck(Check):
    name = "gap-count"
    defaults = {"k": 30.0, "rel": 0.05, "ks_max": 0.2}

    def run(self):
        k = self.get("k")
        sample = enumeration.slope_gaps(self.n, k)
        ratio = sample.count / k ** 2
        expected = distribution.expected_gap_count_ratio(self.n)
        statistic = enumeration.ks_distance(sample)
        periodic = enumeration.periodicity_check(sample)
        passed = (
            sample.stable
            and periodic
            and abs(ratio - expected) < self.get("rel") * expected
            and statistic < self.get("ks_max")
        )
        return passed, f"N/k^2 {ratio:.5f} vs {expected:.5f}, KS {statistic:.4f}, periodic {periodic}"


def default_suite(n: int, seed: int = 20240601) -> List[Check]:
    checks: List[Check] = [
        GeometryCheck(n),
        PartitionCheck(n),
        OracleCheck(n, seed=seed),
        NormalizationCheck(n),
        DensityCheck(n),
        CovolumeCheck(n),
    ]
    if n >= 4:
        checks += [KinkCheck(n), BlindScanCheck(n)]
    checks.append(GapCountCheck(n))
    return checks


def run_suite(checks: List[Check]) -> List[CheckResult]:
    return [check.result for check in checks]
