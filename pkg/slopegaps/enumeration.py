"""Saddle connections by brute force, via orbits of the Veech group.

Every holonomy vector of S₂ₙ lies in Γ·w₁ or Γ·w₂, with w₁ = (1, 0) and
w₂ = (0, 1). Both orbits are explored breadth-first under S′^{±1} and
R′^{±1}. Pruning uses the length Q(v) = |M⁻¹v| measured back on the
2n-gon. Q is preserved by rotations, and every orbit vector reduces to its
seed direction through steps that never increase it. So the closure of the
seeds under Q ≤ P contains every orbit vector with Q ≤ P.
"""
import logging
from typing import Iterable, List, NamedTuple, Optional, Sequence, Set

import numpy as np
from scipy import stats

from .decorators import checked_n, positive
from .distribution import slope_gap_distribution
from .errors import DomainError
from .geometry import PlaneVector, generator_set, inverse_normalizing_matrix, veech_generators

logger = logging.getLogger(__name__)

KEY_SCALE = 1e9
SLOPE_MARGIN = 0.05


class OrbitFrontierElement(NamedTuple):
    matrix: np.ndarray
    seed: int
    depth: int

    @property
    def vector(self) -> PlaneVector:
        x, y = self.matrix[:, self.seed]
        return PlaneVector(float(x), float(y))


def vector_keys(vectors: np.ndarray, scale: float = KEY_SCALE) -> np.ndarray:
    return np.round(np.asarray(vectors) * scale).astype(np.int64)


class OrbitEnumeration:
    """Result of one breadth-first closure.

    ``vectors`` holds the window 0 < x ≤ x_max, 0 ≤ y ≤ slope_max·x; ``raw``
    every vector visited under the pruning bound. ``stable_depth`` is the
    last depth that added a window vector.
    """

    def __init__(
        self,
        n: int,
        x_max: float,
        slope_max: float,
        prune_norm: float,
        raw: np.ndarray,
        frontier: List[OrbitFrontierElement],
        depth_reached: int,
        stable_depth: int,
    ) -> None:
        self.logger = logging.getLogger(self.__class__.__name__)
        self.n = n
        self.x_max = x_max
        self.slope_max = slope_max
        self.prune_norm = prune_norm
        self.raw = raw
        self.frontier = frontier
        self.depth_reached = depth_reached
        self.stable_depth = stable_depth
        order = np.lexsort((raw[:, 1], raw[:, 0]))
        window = raw[order]
        self.vectors = window[in_window(window, x_max, slope_max)]
        self.warnings: List[str] = []
        if not self.stable:
            message = (
                f"enumeration for n={n}, x_max={x_max} still changing at depth {depth_reached} "
                f"(last change at {stable_depth})"
            )
            self.warnings.append(message)
            self.logger.warning(message)

    @property
    def stable(self) -> bool:
        return not self.frontier or self.depth_reached - self.stable_depth >= 2

    def points(self) -> Set[PlaneVector]:
        return {PlaneVector(float(x), float(y)) for x, y in self.vectors}

    def contains(self, vector: Sequence[float], tol: float = 1e-9) -> bool:
        pool = self.raw if len(self.raw) else np.empty((0, 2))
        return bool(np.any(np.all(np.abs(pool - np.asarray(vector, dtype=float)) <= tol * max(1.0, max(map(abs, vector))), axis=1)))

    def __len__(self) -> int:
        return len(self.vectors)

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__qualname__}(n={self.n}, x_max={self.x_max}, "
            f"vectors={len(self.vectors)}, depth={self.depth_reached}, stable={self.stable})"
        )


def in_window(vectors: np.ndarray, x_max: float, slope_max: float) -> np.ndarray:
    x, y = vectors[:, 0], vectors[:, 1]
    return (x > 1e-12) & (x <= x_max * (1 + 1e-12)) & (y >= -1e-12) & (y <= slope_max * x + 1e-9)


@checked_n
def default_prune_norm(n: int, x_max: float, slope_max: float = 1 + SLOPE_MARGIN) -> float:
    """Largest Q over the corners of the window triangle; Q is convex."""
    corners = np.array([[x_max, 0.0], [x_max, slope_max * x_max]])
    return float(np.linalg.norm(corners @ inverse_normalizing_matrix(n).T, axis=1).max()) * (1 + 1e-9)


@checked_n
@positive("x_max", "max_depth")
def orbit_enumerate(
    n: int,
    x_max: float,
    max_depth: int = 10_000,
    prune_norm: Optional[float] = None,
    slope_max: float = 1 + SLOPE_MARGIN,
    generator_order: Optional[Sequence[int]] = None,
) -> OrbitEnumeration:
    prune_norm = prune_norm if prune_norm is not None else default_prune_norm(n, x_max, slope_max)
    generators = generator_set(n)
    if generator_order is not None:
        generators = [generators[i] for i in generator_order]
    to_polygon = inverse_normalizing_matrix(n).T

    matrices = np.stack([np.eye(2), np.eye(2)])
    seeds = np.array([0, 1])
    vectors = np.eye(2)
    seen = {tuple(key) for key in vector_keys(vectors)}
    visited = [vectors]
    depth = stable_depth = 0
    while len(vectors) and depth < max_depth:
        depth += 1
        candidates = np.concatenate([np.matmul(g, matrices) for g in generators])
        candidate_seeds = np.tile(seeds, len(generators))
        images = candidates[np.arange(len(candidates)), :, candidate_seeds]
        norms = np.linalg.norm(images @ to_polygon, axis=1)
        keys = vector_keys(images)
        fresh = []
        for index in np.flatnonzero(norms <= prune_norm):
            key = (keys[index, 0], keys[index, 1])
            if key not in seen:
                seen.add(key)
                fresh.append(index)
        matrices, seeds, vectors = candidates[fresh], candidate_seeds[fresh], images[fresh]
        if len(vectors) and in_window(vectors, x_max, slope_max).any():
            stable_depth = depth
        visited.append(vectors)
        logger.debug("n=%d depth %d: %d new vectors", n, depth, len(vectors))

    frontier = [OrbitFrontierElement(m, int(s), depth) for m, s in zip(matrices, seeds)]
    result = OrbitEnumeration(
        n, x_max, slope_max, prune_norm, np.concatenate(visited), frontier, depth, stable_depth
    )
    logger.info("n=%d x_max=%g: %d window vectors, %d visited", n, x_max, len(result), len(result.raw))
    return result


@checked_n
def orbit_candidates(n: int, x_max: float, max_depth: int = 10_000) -> np.ndarray:
    """Winner-oracle candidate pool: orbit vectors (a, b) with 0 ≤ a ≤ x_max and slope 0 < b/a ≤ 2.

    The vertical vector (0, b) is kept as well, since (0, 1) wins on P_1.
    """
    enumeration = orbit_enumerate(n, x_max, max_depth, slope_max=2.0)
    raw = enumeration.raw
    a, b = raw[:, 0], raw[:, 1]
    sloped = (a >= -1e-12) & (a <= x_max * (1 + 1e-12)) & (b > 1e-12) & (b <= 2.0 * a + 1e-9)
    vertical = (np.abs(a) <= 1e-12) & (b > 0)
    return raw[sloped | vertical]


class GapSample:
    """Renormalized slope gaps of the saddle connections in a strip of width k."""

    def __init__(self, n: int, k: float, enumeration: OrbitEnumeration, slopes: np.ndarray) -> None:
        self.logger = logging.getLogger(self.__class__.__name__)
        self.n = n
        self.k = k
        self.enumeration = enumeration
        self.vectors = enumeration.vectors
        self.slopes = slopes
        self.gaps = np.diff(np.append(slopes, slopes[0] + 1.0)) * k * k

    @property
    def count(self) -> int:
        """N(k), the number of distinct slopes in one period."""
        return len(self.slopes)

    @property
    def stable(self) -> bool:
        return self.enumeration.stable

    @property
    def warnings(self) -> List[str]:
        return self.enumeration.warnings

    def __repr__(self) -> str:
        return f"{self.__class__.__qualname__}(n={self.n}, k={self.k}, N={self.count}, stable={self.stable})"


def reduce_slopes(slopes: np.ndarray, tol: float = 1e-11) -> np.ndarray:
    """Slopes mod 1, sorted, with near-equal values merged."""
    reduced = slopes - np.floor(slopes + tol)
    reduced = np.sort(np.clip(reduced, 0.0, None))
    if len(reduced) == 0:
        return reduced
    keep = np.concatenate([[True], np.diff(reduced) > tol])
    reduced = reduced[keep]
    if len(reduced) > 1 and reduced[-1] > 1 - tol:
        reduced = reduced[:-1]
    return reduced


@checked_n
def slope_gaps(n: int, k: float, max_depth: int = 10_000, generator_order: Optional[Sequence[int]] = None) -> GapSample:
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k!r}")
    enumeration = orbit_enumerate(n, k, max_depth, generator_order=generator_order)
    vectors = enumeration.vectors
    slopes = reduce_slopes(vectors[:, 1] / vectors[:, 0])
    sample = GapSample(n, k, enumeration, slopes)
    logger.info("n=%d k=%g: N(k)=%d, N/k^2=%.6f", n, k, sample.count, sample.count / k ** 2)
    return sample


def periodicity_check(sample: GapSample, margin: float = SLOPE_MARGIN) -> bool:
    """Vectors with slope in [1, 1 + margin) are the S₂-images of those with slope in [0, margin)."""
    _, _, s_two = veech_generators(sample.n)
    vectors = sample.vectors
    slopes = vectors[:, 1] / vectors[:, 0]
    inner = 1e-7
    low = vectors[(slopes >= -inner) & (slopes < margin - inner)]
    high = vectors[(slopes >= 1 - inner) & (slopes < 1 + margin - inner)]
    images = low @ s_two.T
    return {tuple(key) for key in vector_keys(images, 1e6)} == {tuple(key) for key in vector_keys(high, 1e6)}


def ks_distance(sample: GapSample) -> float:
    """Kolmogorov–Smirnov distance of the sample gaps from the analytic CDF."""
    distribution = slope_gap_distribution(sample.n)
    return float(stats.kstest(sample.gaps, distribution.cdf_array).statistic)


@checked_n
def empirical_vs_analytic(n: int, k: float, max_depth: int = 10_000) -> float:
    """Kolmogorov–Smirnov distance between the renormalized gaps and the analytic CDF."""
    if k < 4:
        raise DomainError(f"k must be at least 4, got {k!r}")
    sample = slope_gaps(n, k, max_depth)
    statistic = ks_distance(sample)
    logger.info("n=%d k=%g: KS=%.6f over %d gaps", n, k, statistic, sample.count)
    return statistic


class ConvergenceRow(NamedTuple):
    k: float
    count: int
    ratio: float
    ks: float
    stable: bool


@checked_n
def convergence_study(n: int, ks: Iterable[float] = (10, 20, 40, 60), max_depth: int = 10_000) -> List[ConvergenceRow]:
    rows = []
    for k in ks:
        sample = slope_gaps(n, k, max_depth)
        statistic = ks_distance(sample)
        row = ConvergenceRow(k, sample.count, sample.count / k ** 2, statistic, sample.stable)
        logger.info("convergence n=%d k=%g N=%d N/k^2=%.6f KS=%.6f", n, k, row.count, row.ratio, row.ks)
        rows.append(row)
    return rows
