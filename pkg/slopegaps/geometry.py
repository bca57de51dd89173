"""Closed-form geometry of the staircase surface S₂ₙ.

The regular 2n-gon is sheared by the normalizing matrix ``M`` into a
right-angled staircase of rectangles. Horizontal pieces have widths ``h_i``
and vertical pieces have heights ``v_j``. Every quantity here comes from a
trig closed form, so indices outside the staircase are meaningful too.
"""
import logging
import math
from functools import lru_cache
from typing import List, NamedTuple, Tuple

import numpy as np

from .decorators import checked_n

logger = logging.getLogger(__name__)

Mat2x2 = np.ndarray


class PlaneVector(NamedTuple):
    x: float
    y: float

    @property
    def slope(self) -> float:
        if self.x == 0:
            return math.copysign(math.inf, self.y) if self.y else math.nan
        return self.y / self.x

    def __repr__(self) -> str:
        return f"PlaneVector(x={self.x!r}, y={self.y!r})"


W1 = PlaneVector(1.0, 0.0)
W2 = PlaneVector(0.0, 1.0)


@checked_n
@lru_cache(maxsize=None)
def edge_h(n: int, i: int) -> float:
    """Width h_i = csc(π/2n)·sin(π(1+2i)/2n); h_0 = 1 exactly."""
    if i == 0:
        return 1.0
    return math.sin(math.pi * (1 + 2 * i) / (2 * n)) / math.sin(math.pi / (2 * n))


@checked_n
@lru_cache(maxsize=None)
def edge_v(n: int, j: int) -> float:
    """Height v_j = csc(π/n)·sin(π(1+j)/n); v_0 = 1 exactly."""
    if j == 0:
        return 1.0
    return math.sin(math.pi * (1 + j) / n) / math.sin(math.pi / n)


class StaircaseGeometry:
    """Edge lengths and vertex layout of S₂ₙ.

    ``left_vertices[k]`` is L_k, where the vertical side v_k meets the
    horizontal side h_{k-1}. ``right_vertices[k]`` is R_k, the lower right
    corner of the horizontal rectangle H_k. L_0 sits at the origin.
    """

    def __init__(self, n: int) -> None:
        self.logger = logging.getLogger(self.__class__.__name__)
        self.n = n
        self.h: Tuple[float, ...] = tuple(edge_h(n, i) for i in range(math.ceil(n / 2)))
        self.v: Tuple[float, ...] = tuple(edge_v(n, j) for j in range(n // 2))
        self.left_vertices: Tuple[PlaneVector, ...] = self._left()
        self.right_vertices: Tuple[PlaneVector, ...] = tuple(
            PlaneVector(self.left_vertices[k].x + self.h[k], self.left_vertices[k].y)
            for k in range(len(self.h))
        )
        self.logger.debug("built staircase n=%d h=%s v=%s", n, self.h, self.v)

    def _left(self) -> Tuple[PlaneVector, ...]:
        x = y = 0.0
        points = [PlaneVector(0.0, 0.0)]
        for k in range(len(self.v)):
            x += self.h[k]
            y += self.v[k]
            points.append(PlaneVector(x, y))
        return tuple(points)

    @property
    def aspect(self) -> float:
        """Common ratio (h_i + h_{i+1}) / v_i shared by every cylinder."""
        return 2 + 2 * math.cos(math.pi / self.n)

    def nu_vectors(self) -> List[PlaneVector]:
        """Diagonals ν_i = (h_i, v_i) joining L_i to L_{i+1}."""
        return [PlaneVector(self.h[i], self.v[i]) for i in range(len(self.v))]

    def sigma_vectors(self) -> List[PlaneVector]:
        """Diagonals σ_i = (h_i, v_{i-1}) joining R_{i-1} to R_i."""
        return [PlaneVector(self.h[i], self.v[i - 1]) for i in range(1, len(self.h)) if i - 1 < len(self.v)]

    def cylinder_ratios(self) -> List[float]:
        """(h_i + h_{i+1}) / v_i for every vertical height; all equal ``aspect``."""
        return [(self.h[i] + edge_h(self.n, i + 1)) / self.v[i] for i in range(len(self.v))]

    def square_defects(self) -> List[float]:
        """v_{i-1} + v_i − h_i; zero because V_i ∪ H_i is a square."""
        return [edge_v(self.n, i - 1) + edge_v(self.n, i) - self.h[i] for i in range(1, len(self.h))]

    def __repr__(self) -> str:
        return f"{self.__class__.__qualname__}(n={self.n})"


@checked_n
@lru_cache(maxsize=None)
def build_staircase(n: int) -> StaircaseGeometry:
    return StaircaseGeometry(n)


@checked_n
def normalizing_matrix(n: int) -> Mat2x2:
    """M = [[1, −cot(π/2n)], [0, sec((n−2)π/2n)]], taking the 2n-gon to the staircase."""
    return np.array(
        [
            [1.0, -1.0 / math.tan(math.pi / (2 * n))],
            [0.0, 1.0 / math.cos((n - 2) * math.pi / (2 * n))],
        ]
    )


@checked_n
def inverse_normalizing_matrix(n: int) -> Mat2x2:
    p = 1.0 / math.tan(math.pi / (2 * n))
    q = 1.0 / math.cos((n - 2) * math.pi / (2 * n))
    return np.array([[1.0, p / q], [0.0, 1.0 / q]])


@checked_n
def veech_parabolic(n: int) -> Mat2x2:
    """Horizontal parabolic S of the 2n-gon's Veech group."""
    return np.array([[1.0, -2.0 / math.tan(math.pi / (2 * n))], [0.0, 1.0]])


@checked_n
def rotation(n: int, k: int = 1) -> Mat2x2:
    """R^k: rotation by kπ/n (clockwise, matching the staircase orientation of R′)."""
    theta = k * math.pi / n
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


@checked_n
def r_prime_power(n: int, k: int) -> Mat2x2:
    """(R′)^k = M R^k M⁻¹ in closed form.

    With C, S = cos, sin(kπ/n), p = cot(π/2n), q = sec((n−2)π/2n) the
    conjugate is [[C + pS, S(1+p²)/q], [−qS, C − pS]]; evaluating it
    directly avoids the growth of rounding error in repeated products.
    """
    theta = k * math.pi / n
    c, s = math.cos(theta), math.sin(theta)
    p = 1.0 / math.tan(math.pi / (2 * n))
    q = 1.0 / math.cos((n - 2) * math.pi / (2 * n))
    return np.array([[c + p * s, s * (1 + p * p) / q], [-q * s, c - p * s]])


@checked_n
def veech_generators(n: int) -> Tuple[Mat2x2, Mat2x2, Mat2x2]:
    """Generators S′, R′ of the staircase Veech group and S₂ = ((R′)^{n−1}S′)⁻¹."""
    c = math.cos(math.pi / n)
    s_prime = np.array([[1.0, -2.0 * (1 + c)], [0.0, 1.0]])
    r_prime = np.array([[1.0 + 2.0 * c, 2.0 * (1 + c)], [-1.0, -1.0]])
    s_two = np.linalg.inv(r_prime_power(n, n - 1) @ s_prime)
    return s_prime, r_prime, s_two


@checked_n
def generator_set(n: int) -> List[Mat2x2]:
    """S′, S′⁻¹, R′, R′⁻¹ in that order."""
    s_prime, r_prime, _ = veech_generators(n)
    return [s_prime, inverse(s_prime), r_prime, inverse(r_prime)]


def inverse(matrix: Mat2x2) -> Mat2x2:
    """Adjugate inverse of a determinant-one matrix."""
    (a, b), (c, d) = matrix
    return np.array([[d, -b], [-c, a]])


def horocycle(s: float) -> Mat2x2:
    """h_s = [[1, 0], [−s, 1]]; subtracts s from every slope."""
    return np.array([[1.0, 0.0], [-float(s), 1.0]])


def diagonal(k: float) -> Mat2x2:
    """g_k = diag(1/k, k)."""
    return np.array([[1.0 / k, 0.0], [0.0, float(k)]])


def section_matrix(x: float, y: float) -> Mat2x2:
    """M_{x,y} = [[x, y], [0, 1/x]], the section parametrization."""
    return np.array([[float(x), float(y)], [0.0, 1.0 / x]])


def apply(matrix: Mat2x2, vector: PlaneVector) -> PlaneVector:
    x, y = matrix @ np.asarray(vector, dtype=float)
    return PlaneVector(float(x), float(y))
