"""Points where the slope gap density fails to be differentiable.

The density can only lose smoothness at a time t where the level set
{R = t} crosses a boundary feature of some region P_i: passing a corner,
or first touching an edge. Closed-form times for these crossings are
provided per region as "stamps". Each stamp is validated against the
region's actual polygon, and a kink is confirmed by comparing one-sided
derivatives of the analytic density.
"""
import enum
import logging
import math
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .decorators import checked_n
from .distribution import SlopeGapDistribution, slope_gap_distribution, tangency_time
from .errors import DomainError
from .geometry import PlaneVector, edge_h, edge_v
from .section import Constraint, Region, poincare_section

logger = logging.getLogger(__name__)

MATCH_TOL = 1e-9


class StampKind(enum.Enum):
    ENTRY_B = "entry-B"
    LINES_AD_CD = "lines-AD-CD"
    CORNERS_A_C = "corners-A-C"
    CORNER_D = "corner-D"
    LINE_AC = "line-AC"
    SPECIAL = "special"

    @property
    def increasing(self) -> Optional[bool]:
        """Whether crossing speeds up area accumulation; None when mixed."""
        return {
            StampKind.ENTRY_B: True,
            StampKind.CORNER_D: True,
            StampKind.LINES_AD_CD: False,
            StampKind.CORNERS_A_C: False,
            StampKind.LINE_AC: False,
        }.get(self)


class CrossingStamp(NamedTuple):
    region: int
    time: float
    kind: StampKind
    valid: bool
    duplicate: bool = False


class RegionEvent(NamedTuple):
    region: int
    time: float
    feature: str


def stamp_k(i: int, n: int) -> float:
    return math.sin(math.pi * (i - 1) / n) / math.sin(math.pi / n)


def stamp_l(i: int, n: int) -> float:
    return 4 * math.sin(i * math.pi / n) / math.sin(math.pi * (i - 1) / n)


def stamp_m(i: int, n: int) -> float:
    cot = lambda angle: math.cos(angle) / math.sin(angle)  # noqa: E731
    return (math.sin((i - 1) * math.pi / n) / math.sin(math.pi / n) ** 2) / (
        cot(math.pi / n) - cot(i * math.pi / (2 * n))
    )


def stamp_r(i: int, n: int) -> float:
    return (
        math.sin(math.pi * (i - 1) / n)
        * math.sin(math.pi * (i + 1) / n) ** 2
        / math.sin(math.pi / n)
        / (math.sin(i * math.pi / n) - math.sin(math.pi / n)) ** 2
    )


def _formula_rows(n: int) -> Iterable[Tuple[int, float, StampKind]]:
    c = math.cos(math.pi / n)
    yield 1, 1.0, StampKind.ENTRY_B
    yield 1, 4.0, StampKind.SPECIAL
    yield 2, 1.0, StampKind.ENTRY_B
    yield 2, 8 * c, StampKind.LINES_AD_CD
    yield 2, (1 + 2 * c) ** 2, StampKind.CORNER_D
    for i in range(3, n - 1):
        yield i, stamp_k(i, n), StampKind.ENTRY_B
        yield i, stamp_l(i, n), StampKind.LINES_AD_CD
        yield i, stamp_m(i, n), StampKind.CORNERS_A_C
        yield i, stamp_r(i, n), StampKind.CORNER_D
    if n - 1 > 2:
        yield n - 1, math.sin(2 * math.pi / n) / math.sin(math.pi / n), StampKind.ENTRY_B
        yield n - 1, stamp_m(n - 1, n), StampKind.CORNERS_A_C
        yield n - 1, 2 / c, StampKind.LINE_AC
    yield n, 1.0, StampKind.ENTRY_B
    yield n, 4.0, StampKind.SPECIAL


def _matches(time: float, other: float, tol: float = MATCH_TOL) -> bool:
    return abs(time - other) <= tol * max(1.0, abs(time))


def region_events(region: Region) -> List[RegionEvent]:
    """Times at which the level curve passes a corner of, or first touches an edge of, the region."""
    a, b = region.winner
    polygon = region.polygon
    events = []
    for p in polygon:
        horizontal = a * p.x + b * p.y
        if p.x > 1e-14 and horizontal > 1e-14:
            events.append(RegionEvent(region.index, b / (p.x * horizontal), "vertex"))
    for line in region.bounds:
        on_line = [p.x for p in polygon if abs(line.value(p.x, p.y) - 1) < 1e-12]
        if len(on_line) < 2:
            continue
        touch = tangency_time(region.ratio, line)
        if touch is None:
            continue
        t, x = touch
        if min(on_line) - 1e-12 <= x <= max(on_line) + 1e-12:
            events.append(RegionEvent(region.index, t, "tangent"))
    return sorted(events, key=lambda e: e.time)


def intersect(first: Constraint, second: Constraint) -> Optional[PlaneVector]:
    det = first.a * second.b - first.b * second.a
    if abs(det) < 1e-15:
        return None
    return PlaneVector((second.b - first.b) / det, (first.a - second.a) / det)


@checked_n
def labelled_corners(n: int, i: int) -> Dict[str, PlaneVector]:
    """Corners A, B, C, D of a four-sided middle region P_i, 2 < i < n − 1.

    A and D lie on xh_1 + y = 1, B and C on x = 1; A and B on the upper line,
    C and D on the lower one.
    """
    if not 2 < i < n - 1:
        raise DomainError(f"labelled corners exist for 2 < i < n-1, got i={i}, n={n}")
    upper = Constraint(edge_h(n, i - 2), edge_v(n, i - 2), False)
    lower = Constraint(edge_h(n, i - 1), edge_v(n, i - 1), True)
    steep = Constraint(edge_h(n, 1), 1.0, True)
    return {
        "A": intersect(upper, steep),
        "B": PlaneVector(1.0, upper.line_y(1.0)),
        "C": PlaneVector(1.0, lower.line_y(1.0)),
        "D": intersect(lower, steep),
    }


@checked_n
def crossing_stamps(n: int) -> List[CrossingStamp]:
    section = poincare_section(n)
    events: Dict[int, List[float]] = {
        region.index: [event.time for event in region_events(region)] for region in section.regions
    }
    stamps = []
    for index, time, kind in _formula_rows(n):
        valid = any(_matches(time, event) for event in events[index])
        duplicate = kind is StampKind.ENTRY_B and 2 < index < n - 1 and index > n // 2 + 1
        if not valid:
            logger.debug("n=%d P%d %s stamp t=%.12g has no matching crossing", n, index, kind.value, time)
        stamps.append(CrossingStamp(index, time, kind, valid, duplicate))
    return stamps


def dedupe_stamps(stamps: Iterable[Union[CrossingStamp, float]], tol: float = MATCH_TOL) -> List[float]:
    """Ascending unique times of the valid stamps."""
    times = sorted(
        stamp.time if isinstance(stamp, CrossingStamp) else float(stamp)
        for stamp in stamps
        if not isinstance(stamp, CrossingStamp) or stamp.valid
    )
    unique: List[float] = []
    for time in times:
        if not unique or not _matches(time, unique[-1], tol):
            unique.append(time)
    return unique


@checked_n
def candidate_times(n: int) -> List[float]:
    """Valid stamps together with every geometric crossing of every region."""
    events = [event.time for region in poincare_section(n).regions for event in region_events(region)]
    return dedupe_stamps(list(crossing_stamps(n)) + events)


def derivative_jump(distribution: SlopeGapDistribution, t: float, h: float) -> Tuple[float, float]:
    """(|f′₊ − f′₋|, local scale) from one-sided differences of step h."""
    left = distribution.pdf_derivative(t, "left", h)
    right = distribution.pdf_derivative(t, "right", h)
    return abs(right - left), max(abs(left), abs(right), distribution.pdf(t) / t)


def is_kink(distribution: SlopeGapDistribution, t: float, h: float, deriv_tol: float) -> bool:
    """One-sided derivatives differ beyond deriv_tol on the local scale.

    The scale is max(|f′₋|, |f′₊|, f(t)/t), which shrinks with the density
    in the tail where an absolute floor would hide real kinks. The jump must
    also survive halving h: next to a square-root kink the truncation error
    of a smooth point falls like h², while a true jump stays or grows.
    """
    jump, scale = derivative_jump(distribution, t, h)
    if jump <= deriv_tol * scale:
        return False
    half, _ = derivative_jump(distribution, t, h / 2)
    return half >= 0.5 * jump


def _kink_times(distribution: SlopeGapDistribution, times: Sequence[float], deriv_tol: float) -> List[float]:
    kinks = []
    for j, t in enumerate(times):
        neighbours = times[max(j - 1, 0):j] + times[j + 1:j + 2]
        h = min([1e-6 * t] + [abs(t - other) / 4 for other in neighbours])
        if is_kink(distribution, t, h, deriv_tol):
            kinks.append(t)
    return kinks


@checked_n
def kink_times(n: int, deriv_tol: float = 1e-4) -> List[float]:
    kinks = _kink_times(slope_gap_distribution(n), candidate_times(n), deriv_tol)
    logger.info("n=%d: %d non-differentiable points", n, len(kinks))
    return kinks


@checked_n
def count_nondiff(n: int, deriv_tol: float = 1e-4) -> int:
    return len(kink_times(n, deriv_tol))


@checked_n
def bounds(n: int) -> Tuple[float, int]:
    """Linear lower and upper bounds on the number of non-differentiable points."""
    if n < 4:
        raise DomainError(f"bounds hold for n >= 4, got {n}")
    return n / 5 - 11, 2 * n + n // 2 + 1


@checked_n
def blind_scan(
    n: int,
    t_lo: float = 1.0,
    t_hi: Optional[float] = None,
    step: float = 1e-3,
    refine_tol: float = 1e-8,
) -> List[float]:
    """Times where the combinatorics of the level set change, found without stamp formulas.

    A grid of ``step`` is scanned for changes of the level signature and each
    change is bisected down to ``refine_tol``.
    """
    distribution = slope_gap_distribution(n)
    if t_hi is None:
        t_hi = 1.5 * max(candidate_times(n))
    grid = np.arange(t_lo, t_hi + step / 2, step)
    signatures = [distribution.signature(float(t)) for t in grid]
    changes: List[float] = []
    for j in range(len(grid) - 1):
        if signatures[j] != signatures[j + 1]:
            changes += _locate(distribution, float(grid[j]), float(grid[j + 1]), signatures[j], signatures[j + 1], refine_tol)
    logger.debug("n=%d: blind scan found %d signature changes", n, len(changes))
    return changes


def _locate(distribution: SlopeGapDistribution, lo: float, hi: float, sig_lo, sig_hi, tol: float) -> List[float]:
    found = []
    while sig_lo != sig_hi:
        a, b = lo, hi
        while b - a > tol:
            mid = (a + b) / 2
            if distribution.signature(mid) == sig_lo:
                a = mid
            else:
                b = mid
        found.append((a + b) / 2)
        lo, sig_lo = b, distribution.signature(b)
    return found


@checked_n
def scan_kinks(n: int, t_hi: Optional[float] = None, step: float = 1e-3, deriv_tol: float = 1e-4) -> List[float]:
    """Blind-scan changes that are also genuine derivative jumps."""
    changes = blind_scan(n, t_hi=t_hi, step=step)
    return _kink_times(slope_gap_distribution(n), changes, deriv_tol)
