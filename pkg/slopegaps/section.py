"""Poincaré section Ω₁ ⊔ Ω₂ and its partition into winner regions.

A section point (x, y) stands for the surface M_{x,y}·S₂ₙ. Its return time
is the smallest positive slope b/(x(ax+by)) over saddle connections (a, b)
with 0 < ax+by ≤ 1. On Ω₂ the winner is always (0, 1). Ω₁ splits into n
convex regions P_1…P_n, each with a single winning vector λ_i.
"""
import enum
import logging
import math
from functools import cached_property, lru_cache
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .decorators import checked_n
from .errors import OracleError, SectionError
from .geometry import PlaneVector, build_staircase, edge_h, edge_v

logger = logging.getLogger(__name__)

CLIP_EPS = 1e-13


class SectionComponent(enum.Enum):
    OMEGA1 = "omega1"
    OMEGA2 = "omega2"


class SectionPoint(NamedTuple):
    component: SectionComponent
    x: float
    y: float


class Constraint(NamedTuple):
    """Half-plane ax + by > 1 when ``above``, otherwise ax + by ≤ 1."""

    a: float
    b: float
    above: bool

    @property
    def relation(self) -> str:
        return ">" if self.above else "<="

    def value(self, x, y):
        return self.a * x + self.b * y

    def holds(self, x, y):
        value = self.a * x + self.b * y
        return value > 1 if self.above else value <= 1

    def line_y(self, x):
        """Ordinate of the boundary line at abscissa x (b > 0 for every line used here)."""
        return (1 - self.a * x) / self.b

    def distance(self, x, y):
        return np.abs(self.a * x + self.b * y - 1) / math.hypot(self.a, self.b)


def _clip(polygon: List[PlaneVector], constraint: Constraint) -> List[PlaneVector]:
    # keep sign * (ax + by - 1) <= 0
    sign = -1.0 if constraint.above else 1.0
    out: List[PlaneVector] = []
    for p, q in zip(polygon, polygon[1:] + polygon[:1]):
        fp = sign * (constraint.value(p.x, p.y) - 1)
        fq = sign * (constraint.value(q.x, q.y) - 1)
        if fp <= CLIP_EPS:
            out.append(p)
        if (fp < -CLIP_EPS and fq > CLIP_EPS) or (fp > CLIP_EPS and fq < -CLIP_EPS):
            s = fp / (fp - fq)
            out.append(PlaneVector(p.x + s * (q.x - p.x), p.y + s * (q.y - p.y)))
    deduped: List[PlaneVector] = []
    for point in out:
        if not deduped or math.dist(point, deduped[-1]) > 1e-12:
            deduped.append(point)
    if len(deduped) > 1 and math.dist(deduped[0], deduped[-1]) <= 1e-12:
        deduped.pop()
    return deduped


def shoelace(polygon: Sequence[PlaneVector]) -> float:
    total = 0.0
    for p, q in zip(polygon, list(polygon[1:]) + list(polygon[:1])):
        total += p.x * q.y - q.x * p.y
    return abs(total) / 2


class Region:
    """One cell of the section with its winning vector.

    ``constraints`` are the cell's own half-planes; ``bounds`` adds the
    defining inequalities of its component, so every horizontal slice of the
    cell lies between the lowest ``upper_lines`` and the highest
    ``lower_lines``.
    """

    def __init__(
        self,
        n: int,
        index: int,
        constraints: Sequence[Constraint],
        winner: PlaneVector,
        component: SectionComponent = SectionComponent.OMEGA1,
    ) -> None:
        self.logger = logging.getLogger(self.__class__.__name__)
        self.n = n
        self.index = index
        self.constraints = tuple(constraints)
        self.winner = winner
        self.component = component
        self.domain = component_constraints(n, component)
        bounds: List[Constraint] = []
        for constraint in self.domain + self.constraints:
            if constraint not in bounds:
                bounds.append(constraint)
        self.bounds: Tuple[Constraint, ...] = tuple(bounds)
        self.upper_lines = tuple(c for c in self.bounds if not c.above)
        self.lower_lines = tuple(c for c in self.bounds if c.above)

    @property
    def label(self) -> str:
        if self.component is SectionComponent.OMEGA2:
            return "omega2"
        return f"P{self.index}"

    @property
    def ratio(self) -> float:
        """a/b of the winner; the level curve is y = 1/(tx) − ratio·x."""
        return self.winner.x / self.winner.y

    @cached_property
    def polygon(self) -> Tuple[PlaneVector, ...]:
        polygon = list(component_triangle(self.n, self.component))
        for constraint in self.constraints:
            polygon = _clip(polygon, constraint)
            if not polygon:
                break
        return tuple(polygon)

    @property
    def area(self) -> float:
        return shoelace(self.polygon)

    @property
    def x_range(self) -> Tuple[float, float]:
        xs = [p.x for p in self.polygon]
        return min(xs), max(xs)

    def holds(self, x, y):
        """Own constraints only, as used by classify."""
        result = True
        for constraint in self.constraints:
            result = result & constraint.holds(x, y)
        return result

    def contains(self, x, y):
        result = (x > 0) & (x <= 1)
        for constraint in self.bounds:
            result = result & constraint.holds(x, y)
        return result

    def slice(self, x: float) -> Tuple[float, int, float, int]:
        """(y_bot, index of bottom line, y_top, index of top line) at abscissa x."""
        tops = [line.line_y(x) for line in self.upper_lines]
        bots = [line.line_y(x) for line in self.lower_lines]
        top = min(range(len(tops)), key=tops.__getitem__)
        bot = max(range(len(bots)), key=bots.__getitem__)
        return bots[bot], bot, tops[top], top

    def y_range(self, x: float) -> Tuple[float, float]:
        y_bot, _, y_top, _ = self.slice(x)
        return y_bot, y_top

    def return_time(self, x, y):
        a, b = self.winner
        return b / (x * (a * x + b * y))

    def sample(self, rng: np.random.Generator, size: int, on_line: bool = False, margin: float = 1e-9) -> np.ndarray:
        """Points of the cell at least ``margin`` from every boundary line."""
        if on_line:
            y_bot, y_top = self.y_range(1.0)
            ys = rng.uniform(y_bot + margin, y_top - margin, size)
            return np.column_stack([np.ones(size), ys])
        if self.area < 1e-14:
            raise SectionError(f"{self.label} is degenerate for n={self.n}")
        xs_poly = [p.x for p in self.polygon]
        ys_poly = [p.y for p in self.polygon]
        found: List[np.ndarray] = []
        count = 0
        while count < size:
            xs = rng.uniform(min(xs_poly), max(xs_poly), 4 * size)
            ys = rng.uniform(min(ys_poly), max(ys_poly), 4 * size)
            keep = self.contains(xs, ys) & (xs < 1 - margin)
            for line in self.bounds:
                keep &= line.distance(xs, ys) > margin
            points = np.column_stack([xs[keep], ys[keep]])
            found.append(points)
            count += len(points)
        return np.concatenate(found)[:size]

    def __repr__(self) -> str:
        return f"{self.__class__.__qualname__}(n={self.n}, {self.label}, winner={tuple(self.winner)})"


@checked_n
def component_constraints(n: int, component: SectionComponent) -> Tuple[Constraint, ...]:
    if component is SectionComponent.OMEGA2:
        return (Constraint(0.0, 1.0, False), Constraint(1.0, 1.0, True))
    return (Constraint(0.0, 1.0, False), Constraint(2 * (1 + math.cos(math.pi / n)), 1.0, True))


@checked_n
def component_triangle(n: int, component: SectionComponent) -> Tuple[PlaneVector, ...]:
    if component is SectionComponent.OMEGA2:
        return PlaneVector(0.0, 1.0), PlaneVector(1.0, 1.0), PlaneVector(1.0, 0.0)
    return (
        PlaneVector(0.0, 1.0),
        PlaneVector(1.0, 1.0),
        PlaneVector(1.0, 1 - 2 * (1 + math.cos(math.pi / n))),
    )


@checked_n
def lambda_vectors(n: int) -> List[PlaneVector]:
    """Winners λ_1…λ_n: (0,1), the diagonals (h_{i−2}, v_{i−2}), then (h_1, v_0)."""
    vectors = [PlaneVector(0.0, 1.0)]
    vectors += [PlaneVector(edge_h(n, i - 2), edge_v(n, i - 2)) for i in range(2, n)]
    vectors.append(PlaneVector(edge_h(n, 1), edge_v(n, 0)))
    return vectors


def intercept(vector: PlaneVector) -> float:
    """f(a, b) = (1 − a)/b, the ordinate on x = 1 where ax + by = 1."""
    return (1 - vector.x) / vector.y


@checked_n
def satisfies_ratio_bound(n: int, vector: PlaneVector) -> bool:
    """a/b < 2 + 2cos(π/n), the steepest admissible direction on Ω₁."""
    return vector.x / vector.y < 2 + 2 * math.cos(math.pi / n)


class PoincareSection:
    """Both section components and the winner regions of Ω₁."""

    def __init__(self, n: int) -> None:
        self.logger = logging.getLogger(self.__class__.__name__)
        self.n = n
        self.geometry = build_staircase(n)
        self.lambdas = lambda_vectors(n)
        self.regions: Tuple[Region, ...] = tuple(self._regions())
        self.omega2 = Region(n, 0, (Constraint(1.0, 1.0, True),), PlaneVector(0.0, 1.0), SectionComponent.OMEGA2)
        self.logger.debug("built %d regions for n=%d", len(self.regions), n)

    def _regions(self) -> Iterable[Region]:
        n, h1 = self.n, edge_h(self.n, 1)
        yield Region(n, 1, (Constraint(1.0, 1.0, True),), self.lambdas[0])
        for i in range(2, n):
            yield Region(
                n,
                i,
                (
                    Constraint(edge_h(n, i - 2), edge_v(n, i - 2), False),
                    Constraint(edge_h(n, i - 1), edge_v(n, i - 1), True),
                    Constraint(h1, 1.0, True),
                ),
                self.lambdas[i - 1],
            )
        yield Region(n, n, (Constraint(h1, 1.0, False),), self.lambdas[n - 1])

    @property
    def cells(self) -> Tuple[Region, ...]:
        """Ω₂ followed by P_1…P_n; every cell of the measure space."""
        return (self.omega2,) + self.regions

    @property
    def area(self) -> float:
        """Z = area(Ω₂) + area(Ω₁) = 3/2 + cos(π/n)."""
        return 1.5 + math.cos(math.pi / self.n)

    def region(self, index: int) -> Region:
        if index == 0:
            return self.omega2
        return self.regions[index - 1]

    def contains(self, point: SectionPoint) -> bool:
        if not 0 < point.x <= 1:
            return False
        return all(c.holds(point.x, point.y) for c in component_constraints(self.n, point.component))

    def classify(self, point: SectionPoint) -> Region:
        if not self.contains(point):
            raise SectionError(f"{point} is outside the section for n={self.n}")
        if point.component is SectionComponent.OMEGA2:
            return self.omega2
        for region in reversed(self.regions):
            if region.holds(point.x, point.y):
                return region
        raise SectionError(f"no region accepts {point} for n={self.n}")

    def __repr__(self) -> str:
        return f"{self.__class__.__qualname__}(n={self.n})"


@checked_n
@lru_cache(maxsize=None)
def poincare_section(n: int) -> PoincareSection:
    return PoincareSection(n)


@checked_n
def build_partition(n: int) -> List[Region]:
    return list(poincare_section(n).regions)


@checked_n
def section_contains(n: int, point: SectionPoint) -> bool:
    return poincare_section(n).contains(point)


@checked_n
def classify(n: int, point: SectionPoint) -> Region:
    return poincare_section(n).classify(point)


@checked_n
def return_time(n: int, point: SectionPoint) -> float:
    region = poincare_section(n).classify(point)
    return float(region.return_time(point.x, point.y))


@checked_n
def winner_oracle(n: int, point: SectionPoint, candidates: Sequence[PlaneVector]) -> PlaneVector:
    """Brute-force winner: the admissible candidate whose M_{x,y}-image has the least slope.

    Parallel candidates tie on slope; the one with the smallest vertical
    component is returned.
    """
    if not poincare_section(n).contains(point):
        raise SectionError(f"{point} is outside the section for n={n}")
    vectors = np.asarray(candidates, dtype=float).reshape(-1, 2)
    x, y = point.x, point.y
    a, b = vectors[:, 0], vectors[:, 1]
    horizontal = a * x + b * y
    admissible = (horizontal > 0) & (horizontal <= 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        slopes = np.where(admissible, b / (x * horizontal), np.inf)
    admissible &= slopes > 0
    if not admissible.any():
        raise OracleError(f"no admissible candidate among {len(vectors)} at {point}")
    best = slopes[admissible].min()
    tied = admissible & (slopes <= best * (1 + 1e-12))
    choice = np.flatnonzero(tied)[np.argmin(b[tied])]
    return PlaneVector(float(a[choice]), float(b[choice]))


def region_of(n: int, index: Optional[int]) -> Region:
    """Region by index, with 0 (or None) meaning the Ω₂ cell."""
    return poincare_section(n).region(index or 0)
