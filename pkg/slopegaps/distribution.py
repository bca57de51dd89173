"""Slope gap distribution as the law of the return time R on the section.

For a threshold t and a cell with winner (a, b), R < t exactly above the
level curve y*(x) = 1/(tx) − (a/b)x. Sweeping each convex cell in x, with
breakpoints at its vertices and at the curve's intersections with its
boundary lines, reduces every area to a trapezoid or to a line minus the
curve. The curve term integrates to ln(x)/t − (a/2b)x². Differentiating in
t leaves only the curve pieces, each contributing ln(x_hi/x_lo)/t².
"""
import json
import logging
import math
from functools import lru_cache
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate, optimize

from .decorators import checked_n
from .errors import DomainError, QuadratureError
from .funcs import csv_lines, to_jsonable
from .section import Constraint, PoincareSection, Region, poincare_section

logger = logging.getLogger(__name__)

DISCRIMINANT_TOL = 1e-12
SLIVER_TOL = 1e-9
EMPTY, FULL, CURVE = "empty", "full", "curve"


class Piece(NamedTuple):
    x0: float
    x1: float
    kind: str
    top: int
    bot: int


class LevelIntervals(NamedTuple):
    t: float
    region: int
    intervals: Tuple[Tuple[float, float], ...]


class Extremum(NamedTuple):
    t: float
    value: float
    kind: str


def curve_roots(ratio: float, line: Constraint, t: float) -> List[float]:
    """Abscissae where y = 1/(tx) − ratio·x meets the line ax + by = 1.

    Multiplying through by x gives (ratio − a/b)x² + x/b − 1/t = 0. A
    discriminant in (−1e−12, 0) is a tangency and is treated as zero.
    """
    qa = ratio - line.a / line.b
    qb = 1.0 / line.b
    qc = -1.0 / t
    if abs(qa) < 1e-14:
        return [-qc / qb]
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        if disc <= -DISCRIMINANT_TOL:
            return []
        disc = 0.0
    q = -0.5 * (qb + math.sqrt(disc))
    return [q / qa, qc / q]


def tangency_time(ratio: float, line: Constraint) -> Optional[Tuple[float, float]]:
    """(t, x) at which the level curve first touches the line, if it ever does."""
    qa = ratio - line.a / line.b
    qb = 1.0 / line.b
    if qa >= 0:
        return None
    return -4 * qa / (qb * qb), -qb / (2 * qa)


def _line_integral(line: Constraint, x0: float, x1: float) -> float:
    return ((x1 - x0) - line.a * (x1 * x1 - x0 * x0) / 2) / line.b


def _curve_integral(ratio: float, t: float, x0: float, x1: float) -> float:
    return math.log1p((x1 - x0) / x0) / t - ratio * (x1 * x1 - x0 * x0) / 2


def _line_keys(lines: Sequence[Constraint]) -> List[int]:
    """Index of the first line with the same coefficients, for each line."""
    keys = []
    for line in lines:
        for j, other in enumerate(lines):
            if math.isclose(line.a, other.a, rel_tol=SLIVER_TOL, abs_tol=SLIVER_TOL) and math.isclose(
                line.b, other.b, rel_tol=SLIVER_TOL, abs_tol=SLIVER_TOL
            ):
                keys.append(j)
                break
    return keys


class CellSweep:
    """Level-set geometry of one section cell at a fixed threshold."""

    def __init__(self, region: Region, t: float) -> None:
        self.region = region
        self.t = t
        self.pieces: Tuple[Piece, ...] = tuple(self._pieces())

    def _breakpoints(self) -> List[float]:
        lo, hi = self.region.x_range
        points = {lo, hi}
        points.update(p.x for p in self.region.polygon)
        for line in self.region.bounds:
            for root in curve_roots(self.region.ratio, line, self.t):
                if lo < root < hi:
                    points.add(root)
        return sorted(points)

    def _pieces(self) -> Iterable[Piece]:
        region, t, ratio = self.region, self.t, self.region.ratio
        points = self._breakpoints()
        for x0, x1 in zip(points, points[1:]):
            if x1 - x0 <= 1e-15:
                continue
            xm = (x0 + x1) / 2
            y_bot, bot, y_top, top = region.slice(xm)
            if y_top <= y_bot:
                continue
            y_star = 1 / (t * xm) - ratio * xm
            if y_star >= y_top:
                yield Piece(x0, x1, EMPTY, -1, -1)
            elif y_star <= y_bot:
                yield Piece(x0, x1, FULL, top, bot)
            else:
                yield Piece(x0, x1, CURVE, top, -1)

    @property
    def area(self) -> float:
        """Lebesgue area of {R < t} inside the cell."""
        total = 0.0
        ratio = self.region.ratio
        for piece in self.pieces:
            if piece.kind == EMPTY:
                continue
            top = self.region.upper_lines[piece.top]
            if piece.kind == FULL:
                bot = self.region.lower_lines[piece.bot]
                total += _line_integral(top, piece.x0, piece.x1) - _line_integral(bot, piece.x0, piece.x1)
            else:
                total += _line_integral(top, piece.x0, piece.x1) - _curve_integral(ratio, self.t, piece.x0, piece.x1)
        return total

    @property
    def rate(self) -> float:
        """d/dt of ``area``; the curve drops at speed 1/(t²x)."""
        total = 0.0
        for piece in self.pieces:
            if piece.kind == CURVE:
                total += math.log1p((piece.x1 - piece.x0) / piece.x0)
        return total / (self.t * self.t)

    @property
    def intervals(self) -> Tuple[Tuple[float, float], ...]:
        merged: List[List[float]] = []
        for piece in self.pieces:
            if piece.kind != CURVE:
                continue
            if merged and piece.x0 <= merged[-1][1]:
                merged[-1][1] = piece.x1
            else:
                merged.append([piece.x0, piece.x1])
        return tuple((lo, hi) for lo, hi in merged)

    @property
    def signature(self) -> Tuple[Tuple[str, int, int], ...]:
        """Pieces with their active lines, adjacent equal entries merged.

        Pieces narrower than SLIVER_TOL are dropped and coincident boundary
        lines share one index, so rounding at a shared vertex cannot flip the
        signature back and forth.
        """
        upper = _line_keys(self.region.upper_lines)
        lower = _line_keys(self.region.lower_lines)
        merged: List[Tuple[str, int, int]] = []
        for piece in self.pieces:
            if piece.x1 - piece.x0 < SLIVER_TOL * max(1.0, abs(piece.x1)):
                continue
            top = upper[piece.top] if piece.top >= 0 else -1
            bot = lower[piece.bot] if piece.bot >= 0 else -1
            entry = (piece.kind, top, bot)
            if not merged or merged[-1] != entry:
                merged.append(entry)
        return tuple(merged)


class DistributionTable:
    """Sampled (t, pdf, cdf) rows of one distribution."""

    header = ("t", "pdf", "cdf")

    def __init__(self, n: int, t: Sequence[float], pdf: Sequence[float], cdf: Sequence[float], normalization: float) -> None:
        self.logger = logging.getLogger(self.__class__.__name__)
        self.n = n
        self.t = np.asarray(t, dtype=float)
        self.pdf = np.asarray(pdf, dtype=float)
        self.cdf = np.asarray(cdf, dtype=float)
        self.normalization = normalization

    def __len__(self) -> int:
        return len(self.t)

    @property
    def rows(self) -> np.ndarray:
        return np.column_stack([self.t, self.pdf, self.cdf])

    def integrated_pdf(self) -> float:
        return float(integrate.trapezoid(self.pdf, self.t))

    def to_csv(self) -> str:
        return csv_lines(self.header, self.rows)

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "normalization": self.normalization,
            "rows": [dict(zip(self.header, row)) for row in self.rows.tolist()],
        }
        return json.dumps(to_jsonable(payload), indent=2) + "\n"

    def __repr__(self) -> str:
        return f"{self.__class__.__qualname__}(n={self.n}, rows={len(self)})"


class SlopeGapDistribution:
    """CDF, density and derived quantities for the regular 2n-gon."""

    defaults = {
        "covolume_tol": 1e-8,
        "extrema_grid": 2000,
        "tail_points": 65,
    }

    def __init__(self, n: int, **kwargs) -> None:
        self.logger = logging.getLogger(self.__class__.__name__)
        self.n = n
        self.kwargs = kwargs
        self.section: PoincareSection = poincare_section(n)
        self.cells: Tuple[Region, ...] = self.section.cells
        self.normalization = self.section.area

    def get(self, key, *args):
        return {**self.defaults, **self.kwargs}.get(key, *args)

    def sweep(self, cell: Region, t: float) -> CellSweep:
        return CellSweep(cell, t)

    def _sweeps(self, t: float) -> List[CellSweep]:
        # Ω₂ and P₁ are one set in the plane with one winner; the P₁ sweep counts twice
        sweeps = [CellSweep(region, t) for region in self.section.regions]
        return [sweeps[0]] + sweeps

    def contributions(self, t: float) -> dict:
        """Unnormalized area of {R < t} per cell label."""
        if t <= 1:
            return {cell.label: 0.0 for cell in self.cells}
        return {cell.label: sweep.area for cell, sweep in zip(self.cells, self._sweeps(t))}

    def cdf(self, t: float) -> float:
        if t <= 1:
            return 0.0
        total = sum(sweep.area for sweep in self._sweeps(t))
        return min(max(total / self.normalization, 0.0), 1.0)

    def pdf(self, t: float) -> float:
        if t <= 1:
            return 0.0
        return sum(sweep.rate for sweep in self._sweeps(t)) / self.normalization

    def cdf_array(self, ts) -> np.ndarray:
        return np.array([self.cdf(float(t)) for t in np.atleast_1d(ts)])

    def pdf_array(self, ts) -> np.ndarray:
        return np.array([self.pdf(float(t)) for t in np.atleast_1d(ts)])

    def pdf_derivative(self, t: float, side: str = "right", h: Optional[float] = None) -> float:
        """One-sided second-order difference of the analytic density."""
        h = h if h is not None else 1e-6 * t
        if side == "right":
            return (-3 * self.pdf(t) + 4 * self.pdf(t + h) - self.pdf(t + 2 * h)) / (2 * h)
        if side == "left":
            return (3 * self.pdf(t) - 4 * self.pdf(t - h) + self.pdf(t - 2 * h)) / (2 * h)
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")

    def level_set(self, cell: Union[Region, int], t: float) -> LevelIntervals:
        if not t > 0:
            raise DomainError(f"t must be positive, got {t!r}")
        if not isinstance(cell, Region):
            cell = self.section.region(cell)
        return LevelIntervals(t, cell.index, CellSweep(cell, t).intervals)

    def signature(self, t: float) -> tuple:
        return tuple(CellSweep(region, t).signature for region in self.section.regions)

    def covolume(self, tol: Optional[float] = None) -> float:
        """∫ R over both components, by quadrature between vertex abscissae.

        Along a vertical slice ∫ b/(x(ax+by)) dy = ln((ax + b·y_top)/(ax + b·y_bot))/x,
        which is log-singular where ax + b·y_bot vanishes at a corner.
        """
        tol = tol if tol is not None else self.get("covolume_tol")
        total = sum(self.cell_covolume(cell, tol / len(self.cells)) for cell in self.cells)
        self.logger.info("covolume n=%d: %.12g", self.n, total)
        return total

    def cell_covolume(self, cell: Region, tol: float) -> float:
        xs = sorted({p.x for p in cell.polygon})
        pieces = [(x0, x1) for x0, x1 in zip(xs, xs[1:]) if x1 - x0 > 1e-15]
        total = 0.0
        for x0, x1 in pieces:
            _, bot, _, top = cell.slice((x0 + x1) / 2)
            value, error = self._integrate_piece(
                cell, cell.upper_lines[top], cell.lower_lines[bot], x0, x1, tol / len(pieces)
            )
            self.logger.debug("%s [%.6g, %.6g] -> %.12g (err %.2g)", cell.label, x0, x1, value, error)
            total += value
        return total

    def _integrate_piece(self, cell: Region, top: Constraint, bot: Constraint, x0: float, x1: float, tol: float):
        a, b = cell.winner

        def integrand(x):
            y_top, y_bot = top.line_y(x), bot.line_y(x)
            return math.log1p(b * (y_top - y_bot) / (a * x + b * y_bot)) / x

        result = integrate.quad(integrand, x0, x1, epsabs=tol, epsrel=1e-12, limit=400, full_output=1)
        value, error = result[0], result[1]
        if len(result) > 3 and error > tol:
            raise QuadratureError(f"quadrature failed on {cell.label} [{x0:.6g}, {x1:.6g}]: {result[3]}", error, tol)
        return value, error

    def find_local_extrema(self, t_lo: float, t_hi: float, grid_size: Optional[int] = None) -> List[Extremum]:
        from .nondiff import dedupe_stamps, crossing_stamps

        if not 1 <= t_lo < t_hi:
            raise DomainError(f"need 1 <= t_lo < t_hi, got {t_lo!r}, {t_hi!r}")
        grid_size = grid_size or self.get("extrema_grid")
        stamps = [t for t in dedupe_stamps(crossing_stamps(self.n)) if t_lo < t < t_hi]
        grid = np.unique(np.concatenate([np.linspace(t_lo, t_hi, grid_size), stamps]))
        values = self.pdf_array(grid)
        slopes = np.diff(values)
        extrema: List[Extremum] = []
        for j in range(1, len(grid) - 1):
            if slopes[j - 1] > 0 and slopes[j] < 0:
                kind, sign = "max", -1.0
            elif slopes[j - 1] < 0 and slopes[j] > 0:
                kind, sign = "min", 1.0
            else:
                continue
            found = optimize.minimize_scalar(
                lambda t: sign * self.pdf(t),
                bounds=(grid[j - 1], grid[j + 1]),
                method="bounded",
                options={"xatol": 1e-9},
            )
            t_star = float(found.x)
            extrema.append(Extremum(t_star, self.pdf(t_star), kind))
        self.logger.info("n=%d: %d local extrema on [%g, %g]", self.n, len(extrema), t_lo, t_hi)
        return extrema

    def tail_estimate(self, T: float) -> float:
        """Mean of t³·f(t) over [T, 2T]; f decays like t⁻³ so 1 − F decays like t⁻²."""
        if T < 100:
            raise DomainError(f"tail estimates need T >= 100, got {T!r}")
        ts = np.linspace(T, 2 * T, self.get("tail_points"))
        return float(np.mean(ts ** 3 * self.pdf_array(ts)))

    def sample(self, t_grid: Sequence[float], refine_stamps: bool = False) -> DistributionTable:
        grid = np.asarray(t_grid, dtype=float)
        if grid.size == 0 or np.any(grid <= 0) or np.any(np.diff(grid) < 0):
            raise DomainError("t grid must be nonempty, positive and sorted")
        if refine_stamps:
            from .nondiff import dedupe_stamps, crossing_stamps

            stamps = [t for t in dedupe_stamps(crossing_stamps(self.n)) if grid[0] < t < grid[-1]]
            grid = np.unique(np.concatenate([grid, stamps]))
        return DistributionTable(self.n, grid, self.pdf_array(grid), self.cdf_array(grid), self.normalization)

    def __repr__(self) -> str:
        return f"{self.__class__.__qualname__}(n={self.n})"


@checked_n
@lru_cache(maxsize=None)
def slope_gap_distribution(n: int) -> SlopeGapDistribution:
    return SlopeGapDistribution(n)


@checked_n
def level_set_intervals(n: int, region: Union[Region, int], t: float) -> LevelIntervals:
    return slope_gap_distribution(n).level_set(region, t)


@checked_n
def cdf(n: int, t: float) -> float:
    return slope_gap_distribution(n).cdf(t)


@checked_n
def pdf(n: int, t: float) -> float:
    return slope_gap_distribution(n).pdf(t)


@checked_n
def pdf_derivative(n: int, t: float, side: str = "right", h: Optional[float] = None) -> float:
    return slope_gap_distribution(n).pdf_derivative(t, side, h)


@checked_n
def level_signature(n: int, t: float) -> tuple:
    return slope_gap_distribution(n).signature(t)


@checked_n
@lru_cache(maxsize=None)
def covolume(n: int, tol: float = 1e-8) -> float:
    return slope_gap_distribution(n).covolume(tol)


@checked_n
def reference_covolume(n: int) -> float:
    """(n−1)π²/n, the hyperbolic covolume of the Veech group."""
    return (n - 1) * math.pi ** 2 / n


@checked_n
def expected_gap_count_ratio(n: int) -> float:
    """Limit of N(k)/k²: section area over covolume."""
    return slope_gap_distribution(n).normalization / covolume(n)


@checked_n
def find_local_extrema(n: int, t_lo: float, t_hi: float, grid_size: int = 2000) -> List[Extremum]:
    return slope_gap_distribution(n).find_local_extrema(t_lo, t_hi, grid_size)


@checked_n
def tail_estimate(n: int, T: float) -> float:
    return slope_gap_distribution(n).tail_estimate(T)


@checked_n
def sample_distribution(n: int, t_grid: Sequence[float], refine_stamps: bool = False) -> DistributionTable:
    return slope_gap_distribution(n).sample(t_grid, refine_stamps)
