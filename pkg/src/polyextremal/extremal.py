"""Extremal-function evaluation: simplex formula, strips, balls, the max rule.

For a simplex S with apexes p_0..p_d, the value at z in C^d is
log h(|lambda_0(z)| + ... + |lambda_d(z)|) where the lambda are barycentric
coordinates of z (complexified by solving the same linear system) and
h(t) = t + sqrt(t^2 - 1) inverts the Joukowski map.  A strip evaluates its
cross-section simplex at the projected point Qz.  The polytope value is the
maximum over all certified supports, attained first in their deterministic
order.

Numerical contract worth spelling out: barycentric magnitude sums are >= 1
in exact arithmetic, equal to 1 exactly on the real simplex.  Floating-point
noise lands on either side of 1, and arccosh has a square-root cliff there
(arccosh(1 + 1e-16) ~ 1e-8), so a band around 1 must collapse to 0 or real
interior points would evaluate to visible garbage.  Sums up to 1 + 1e-12 map
to exactly 0.0; genuine exterior points clear that band by orders of
magnitude.  Below 1 - 1e-9 is reported as a bug (DomainError), since no
legitimate code path can produce it.  The arccosh itself runs on u = s - 1
(exact for s in [1, 2]) as log1p(u + sqrt(u(u+2))) to dodge the s^2 - 1
cancellation.

Batch evaluators loop over the few support dimensions and vectorize across
points with elementwise numpy only - no BLAS kernels - so values computed for
a point never depend on which chunk of a grid it sits in.
"""

from __future__ import annotations

import cmath
import math
import weakref
from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, LUFactors, lu_factor
from .supports import SimplexSupport, StripSupport, SupportSet

__all__ = [
    "DomainError",
    "EvalResult",
    "BarycentricFrame",
    "inv_joukowski_log",
    "barycentric",
    "eval_simplex",
    "eval_strip",
    "eval_extremal",
    "eval_simplex_many",
    "eval_strip_many",
    "eval_extremal_many",
    "lundin_ball",
    "eval_interval",
]

_ZERO_BAND = 1e-12   # sums within this of 1 (above) collapse to value 0
_DOMAIN_BAND = 1e-9  # sums below 1 by more than this signal an internal bug


class DomainError(Exception):
    """Argument below the inverse-Joukowski domain: barycentric sums are >= 1."""


def inv_joukowski_log(s: float) -> float:
    """log(s + sqrt(s^2 - 1)) = arccosh(s) for s >= 1, with the band around 1
    clamped to exactly 0."""
    s = float(s)
    if s < 1.0 - _DOMAIN_BAND:
        raise DomainError(f"inverse Joukowski argument {s!r} below 1")
    if s <= 1.0 + _ZERO_BAND:
        return 0.0
    u = s - 1.0
    return math.log1p(u + math.sqrt(u * (u + 2.0)))


def _inv_joukowski_log_many(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if np.any(s < 1.0 - _DOMAIN_BAND):
        worst = float(np.min(s))
        raise DomainError(f"inverse Joukowski argument {worst!r} below 1")
    u = np.maximum(s - 1.0, 0.0)
    out = np.log1p(u + np.sqrt(u * (u + 2.0)))
    out[s <= 1.0 + _ZERO_BAND] = 0.0
    return out


@dataclass(frozen=True, eq=False)
class BarycentricFrame:
    """Prefactored barycentric solver for one simplex.

    The defining equations - sum(lambda_k p_k) = z and sum(lambda_k) = 1 -
    form a constant (j+1)-square system whose matrix has the apexes as
    columns over a row of ones.  The LU factors are computed once and reused
    for every right-hand side, which is what grid sweeps hammer on.
    """

    apexes: np.ndarray
    lu: LUFactors

    @classmethod
    def from_apexes(cls, apexes: np.ndarray) -> "BarycentricFrame":
        apexes = np.asarray(apexes, dtype=float)
        count, dim = apexes.shape
        if count != dim + 1:
            raise ValueError("a simplex in R^j has j+1 apexes")
        matrix = np.ones((count, count))
        matrix[:dim, :] = apexes.T
        return cls(apexes=apexes, lu=lu_factor(matrix, DEFAULT_TOL))

    @property
    def dim(self) -> int:
        return self.apexes.shape[1]

    def solve(self, z: np.ndarray) -> np.ndarray:
        return self.solve_many(np.asarray(z, dtype=complex)[None, :])[0]

    def solve_many(self, points: np.ndarray) -> np.ndarray:
        """Barycentric coordinates for each row of ``points`` (m, j) -> (m, j+1)."""
        points = np.asarray(points, dtype=complex)
        m, dim = points.shape
        rhs = np.empty((m, dim + 1), dtype=complex)
        rhs[:, :dim] = points
        rhs[:, dim] = 1.0
        return self.lu.solve_many(rhs)


_FRAMES: "weakref.WeakKeyDictionary[SimplexSupport, BarycentricFrame]" = (
    weakref.WeakKeyDictionary())


def frame_for(simplex: SimplexSupport) -> BarycentricFrame:
    """The cached barycentric frame of a certified simplex."""
    frame = _FRAMES.get(simplex)
    if frame is None:
        frame = BarycentricFrame.from_apexes(simplex.apexes)
        _FRAMES[simplex] = frame
    return frame


def barycentric(frame: BarycentricFrame, z: np.ndarray) -> np.ndarray:
    """Complex barycentric coordinates of z; components sum to 1."""
    z = np.asarray(z, dtype=complex)
    if z.shape != (frame.dim,):
        raise ValueError(f"point must have dimension {frame.dim}")
    return frame.solve(z)


def _as_points(z: np.ndarray, dim: int) -> np.ndarray:
    points = np.asarray(z, dtype=complex)
    if points.ndim == 1:
        points = points[None, :]
    if points.ndim != 2 or points.shape[1] != dim:
        raise ValueError(f"points must have dimension {dim}")
    return points


def eval_simplex_many(simplex: SimplexSupport, points: np.ndarray) -> np.ndarray:
    """Simplex values for each row of ``points``; magnitude sums run in fixed
    index order so batching cannot reorder the arithmetic."""
    points = _as_points(points, simplex.dim)
    coords = frame_for(simplex).solve_many(points)
    total = np.abs(coords[:, 0])
    for k in range(1, coords.shape[1]):
        total = total + np.abs(coords[:, k])
    return _inv_joukowski_log_many(total)


def eval_simplex(simplex: SimplexSupport, z: np.ndarray) -> float:
    """V of one simplex at one point of C^dim."""
    return float(eval_simplex_many(simplex, _as_points(z, simplex.dim))[0])


def _project_many(basis: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Apply the real row basis Q to complex points, row by row of Q."""
    m = points.shape[0]
    j, d = basis.shape
    out = np.zeros((m, j), dtype=complex)
    for r in range(j):
        for c in range(d):
            out[:, r] += basis[r, c] * points[:, c]
    return out


def eval_strip_many(strip: StripSupport, points: np.ndarray) -> np.ndarray:
    points = _as_points(points, strip.basis.shape[1])
    return eval_simplex_many(strip.cross_simplex, _project_many(strip.basis, points))


def eval_strip(strip: StripSupport, z: np.ndarray) -> float:
    """V of a strip at one point: evaluate the cross-section at Qz."""
    return float(eval_strip_many(strip, _as_points(z, strip.basis.shape[1]))[0])


def eval_support_many(support, points: np.ndarray) -> np.ndarray:
    if isinstance(support, StripSupport):
        return eval_strip_many(support, points)
    return eval_simplex_many(support, points)


@dataclass(frozen=True)
class EvalResult:
    """Value of V_K at a point, which support attains it, optional diagnostics."""

    value: float
    argmax: int
    per_support: tuple[float, ...] | None = None


def eval_extremal_many(support_set: SupportSet,
                       points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Max over supports plus first attaining index, vectorized over points."""
    if len(support_set) == 0:
        raise ValueError("support set is empty")
    points = _as_points(points, support_set.polytope.dim)
    best = eval_support_many(support_set[0], points)
    argmax = np.zeros(points.shape[0], dtype=np.int64)
    for i in range(1, len(support_set)):
        values = eval_support_many(support_set[i], points)
        better = values > best
        best = np.where(better, values, best)
        argmax = np.where(better, i, argmax)
    return best, argmax


def eval_extremal(support_set: SupportSet, z: np.ndarray,
                  diagnostics: bool = False) -> EvalResult:
    """V_K(z) = max over certified supports; ties go to the first in the
    sorted support order so the reported argmax is reproducible."""
    if len(support_set) == 0:
        raise ValueError("support set is empty")
    points = _as_points(z, support_set.polytope.dim)
    per_support = tuple(
        float(eval_support_many(s, points)[0]) for s in support_set)
    argmax = 0
    for i in range(1, len(per_support)):
        if per_support[i] > per_support[argmax]:
            argmax = i
    return EvalResult(value=per_support[argmax], argmax=argmax,
                      per_support=per_support if diagnostics else None)


def lundin_ball(z: np.ndarray, radius: float) -> float:
    """V of the real ball of given radius in R^d at z in C^d:
    half of log h(|z/R|^2 + |(z/R)^2 - 1|) with z^2 = sum z_i^2."""
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    z = np.asarray(z, dtype=complex) / radius
    square = complex(0.0)
    magnitude = 0.0
    for component in z:
        square += complex(component) * complex(component)
        magnitude += abs(complex(component)) ** 2
    return 0.5 * inv_joukowski_log(magnitude + abs(square - 1.0))


def eval_interval(a: float, b: float, t: complex) -> float:
    """Interval value at a complex point, by explicit branch selection.

    Maps [a, b] to [-1, 1], then evaluates log|s + sqrt(s^2 - 1)| picking the
    square-root branch of modulus >= 1.  Kept deliberately independent of the
    barycentric route (cmath arithmetic, product form (s-1)(s+1), branch by
    comparing moduli) so the two can serve as oracles for each other.
    """
    if not b > a:
        raise ValueError("need a < b")
    s = (2.0 * complex(t) - a - b) / (b - a)
    root = cmath.sqrt((s - 1.0) * (s + 1.0))
    grown = max(abs(s + root), abs(s - root))
    return max(0.0, math.log(grown))
