"""Dense linear algebra and a minimal linear-program facility.

Everything operates on plain numpy arrays at desk scale: dimensions stay in
single digits and constraint counts below a hundred.  The solvers are
deliberately textbook ones - partial-pivot elimination with an explicit
relative pivot threshold, modified Gram-Schmidt for ranks and orthonormal
bases, and a dense two-phase simplex method with Bland's rule.  Rank and
positivity decisions made here drive geometric certification downstream, so
the thresholds are part of the contract: they live in one ``Tolerances``
record that callers thread through explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "LinalgError",
    "Singular",
    "ZeroSpan",
    "Infeasible",
    "LUFactors",
    "lu_factor",
    "solve_real",
    "solve_complex",
    "rank",
    "orthonormal_basis",
    "interior_point",
    "recession_direction",
]


class LinalgError(Exception):
    """Base class for numerical failures in this module."""


class Singular(LinalgError):
    """A pivot fell below the rank threshold; the system is treated as rank-deficient."""


class ZeroSpan(LinalgError):
    """All input vectors are numerically zero; no basis exists."""


class Infeasible(LinalgError):
    """The halfspace system has no interior ball of positive radius."""

    def __init__(self, message: str, radius: float = float("nan")):
        super().__init__(message)
        self.radius = radius


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds threaded through every geometric decision.

    rank_rel: relative pivot / rank cutoff (scaled by the data's magnitude).
    pos_abs:  strict-positivity margin for open conditions.
    geom_abs: slack allowed in containment tests.
    """

    rank_rel: float = 1e-9
    pos_abs: float = 1e-9
    geom_abs: float = 1e-9

    def __post_init__(self) -> None:
        if not (0.0 < self.rank_rel < 1.0):
            raise ValueError("rank_rel must lie in (0, 1)")
        if self.pos_abs <= 0.0 or self.geom_abs <= 0.0:
            raise ValueError("pos_abs and geom_abs must be strictly positive")

    @classmethod
    def uniform(cls, eps: float) -> "Tolerances":
        return cls(rank_rel=eps, pos_abs=eps, geom_abs=eps)


DEFAULT_TOL = Tolerances()


# ---------------------------------------------------------------------------
# LU factorization and linear solves
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LUFactors:
    """Packed LU factors with partial pivoting, reusable across right-hand sides.

    ``packed`` holds U on and above the diagonal and the unit-lower-triangular
    multipliers strictly below it; ``perm`` is the row permutation applied to
    right-hand sides.  Factors may be real while right-hand sides are complex.
    """

    packed: np.ndarray
    perm: np.ndarray

    @property
    def size(self) -> int:
        return self.packed.shape[0]

    def solve(self, b: np.ndarray) -> np.ndarray:
        return self.solve_many(np.asarray(b)[None, :])[0]

    def solve_many(self, rhs: np.ndarray) -> np.ndarray:
        """Solve A x = b for every row b of ``rhs``; returns solutions as rows.

        Substitution runs as explicit loops over the (tiny) system dimension
        with numpy elementwise work across right-hand sides, so results do not
        depend on how callers batch their points.
        """
        lu = self.packed
        n = self.size
        rhs = np.asarray(rhs)
        if rhs.ndim != 2 or rhs.shape[1] != n:
            raise ValueError(f"right-hand sides must have shape (m, {n})")
        dtype = np.promote_types(lu.dtype, rhs.dtype)
        x = rhs[:, self.perm].astype(dtype, copy=True)
        for i in range(1, n):
            for j in range(i):
                x[:, i] -= lu[i, j] * x[:, j]
        for i in range(n - 1, -1, -1):
            for j in range(i + 1, n):
                x[:, i] -= lu[i, j] * x[:, j]
            x[:, i] /= lu[i, i]
        return x


def lu_factor(a: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> LUFactors:
    """Factor a square matrix with partial pivoting.

    Raises Singular when the best available pivot is at or below
    ``rank_rel`` times the largest entry of the input matrix.
    """
    a = np.array(a, dtype=complex if np.iscomplexobj(a) else float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    threshold = tol.rank_rel * scale
    perm = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= threshold:
            raise Singular(f"pivot {abs(a[p, k]):.3e} at column {k} below threshold {threshold:.3e}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        a[k + 1:, k] /= a[k, k]
        if k + 1 < n:
            a[k + 1:, k + 1:] -= a[k + 1:, k, None] * a[k, k + 1:]
    return LUFactors(packed=a, perm=perm)


def solve_real(a: np.ndarray, b: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solve the real square system A x = b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if b.shape != (a.shape[0],):
        raise ValueError("right-hand side length must match the matrix")
    return lu_factor(a, tol).solve(b)


def solve_complex(a: np.ndarray, b: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solve the complex square system A x = b."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if b.shape != (a.shape[0],):
        raise ValueError("right-hand side length must match the matrix")
    return lu_factor(a, tol).solve(b)


# ---------------------------------------------------------------------------
# Rank and orthonormal bases
# ---------------------------------------------------------------------------

def _orthogonalize(vectors: np.ndarray, tol: Tolerances) -> list[np.ndarray]:
    """Modified Gram-Schmidt over input order with one re-orthogonalization pass.

    Returns the accepted orthonormal vectors; a candidate is dependent (and
    skipped) when its residual drops to ``rank_rel`` times the largest input
    norm.  The second pass keeps the basis orthonormal to ~1e-15 even for
    nearly dependent inputs.
    """
    vectors = np.asarray(vectors, dtype=float)
    if vectors.ndim != 2:
        raise ValueError("expected a list of equal-length vectors")
    norms = np.sqrt((vectors * vectors).sum(axis=1))
    scale = float(norms.max()) if norms.size else 0.0
    threshold = tol.rank_rel * scale
    basis: list[np.ndarray] = []
    if scale == 0.0:
        return basis
    for v in vectors:
        w = v.astype(float, copy=True)
        for _ in range(2):
            for q in basis:
                w -= np.dot(q, w) * q
        norm = float(np.sqrt(np.dot(w, w)))
        if norm > threshold:
            basis.append(w / norm)
    return basis


def rank(vectors: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> int:
    """Numerical rank of a list of real vectors.

    Threshold: ``rank_rel`` times the largest vector norm, so the answer is
    invariant under a common rescaling of the whole collection.
    """
    vectors = np.asarray(vectors, dtype=float)
    if vectors.size == 0:
        raise ValueError("rank of an empty collection is undefined")
    return len(_orthogonalize(vectors, tol))


def orthonormal_basis(vectors: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal rows spanning the input vectors, Gram-Schmidt over input order.

    Raises ZeroSpan when every input is numerically zero.
    """
    basis = _orthogonalize(np.asarray(vectors, dtype=float), tol)
    if not basis:
        raise ZeroSpan("input vectors span the zero subspace")
    return np.vstack(basis)


# ---------------------------------------------------------------------------
# Dense two-phase simplex with Bland's rule
# ---------------------------------------------------------------------------

_LP_EPS = 1e-11  # absolute pivot/improvement cutoff inside the tableau


class _UnboundedLP(LinalgError):
    """Internal: the LP objective is unbounded above (callers box their variables)."""


def _pivot(tableau: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    for r in range(tableau.shape[0]):
        if r != row and tableau[r, col] != 0.0:
            tableau[r] -= tableau[r, col] * tableau[row]
    basis[row] = col


def _run_simplex(tableau: np.ndarray, basis: np.ndarray, cost: np.ndarray,
                 allowed: np.ndarray) -> None:
    """Maximize ``cost`` over the tableau in place.  Bland's rule throughout:
    entering = lowest-index improving column, leaving = lowest basic index
    among the minimum-ratio rows.  Anti-cycling, so termination is guaranteed.
    """
    m = tableau.shape[0]
    while True:
        reduced = cost - cost[basis] @ tableau[:, :-1]
        entering = -1
        for j in range(tableau.shape[1] - 1):
            if allowed[j] and reduced[j] > _LP_EPS:
                entering = j
                break
        if entering < 0:
            return
        ratios = np.full(m, np.inf)
        for i in range(m):
            if tableau[i, entering] > _LP_EPS:
                ratios[i] = tableau[i, -1] / tableau[i, entering]
        best = float(ratios.min())
        if not np.isfinite(best):
            raise _UnboundedLP("improving direction with no blocking constraint")
        leaving = -1
        for i in range(m):
            if ratios[i] <= best + _LP_EPS and (leaving < 0 or basis[i] < basis[leaving]):
                leaving = i
        _pivot(tableau, basis, leaving, entering)


def _simplex_standard(c: np.ndarray, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    """Maximize c.x subject to A x <= b, x >= 0 (b of any sign)."""
    m, n = a.shape
    flip = b < 0.0
    rows = np.where(flip[:, None], -a, a)
    rhs = np.abs(b)
    slack = np.where(flip[:, None], -np.eye(m), np.eye(m))
    n_art = int(flip.sum())
    art = np.zeros((m, n_art))
    art[np.where(flip)[0], np.arange(n_art)] = 1.0
    tableau = np.hstack([rows, slack, art, rhs[:, None]])
    total = n + m + n_art

    basis = np.empty(m, dtype=int)
    art_col = n + m
    for i in range(m):
        if flip[i]:
            basis[i] = art_col
            art_col += 1
        else:
            basis[i] = n + i

    allowed = np.ones(total, dtype=bool)
    if n_art:
        phase1 = np.zeros(total)
        phase1[n + m:] = -1.0
        _run_simplex(tableau, basis, phase1, allowed)
        if -float(phase1[basis] @ tableau[:, -1]) > 1e-9 * max(1.0, float(np.max(rhs, initial=0.0))):
            raise Infeasible("phase-1 optimum positive: no feasible point")
        # Drive surviving artificials out of the basis, dropping redundant rows.
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= n + m:
                pivot_col = -1
                for j in range(n + m):
                    if abs(tableau[i, j]) > _LP_EPS:
                        pivot_col = j
                        break
                if pivot_col >= 0:
                    _pivot(tableau, basis, i, pivot_col)
                else:
                    keep[i] = False
        if not keep.all():
            tableau = tableau[keep]
            basis = basis[keep]
        allowed[n + m:] = False

    cost = np.zeros(total)
    cost[:n] = c
    _run_simplex(tableau, basis, cost, allowed)
    x = np.zeros(total)
    x[basis] = tableau[:, -1]
    return x[:n], float(c @ x[:n])


def linprog_max(c: np.ndarray, a_ub: np.ndarray, b_ub: np.ndarray) -> tuple[np.ndarray, float]:
    """Maximize c.x subject to A x <= b with x free in sign.

    Free variables are split as differences of nonnegative pairs before the
    standard-form simplex runs.  Raises Infeasible when no point satisfies the
    constraints; callers keep the feasible region bounded (box constraints),
    so an unbounded objective signals a caller bug.
    """
    c = np.asarray(c, dtype=float)
    a_ub = np.asarray(a_ub, dtype=float)
    b_ub = np.asarray(b_ub, dtype=float)
    split_c = np.concatenate([c, -c])
    split_a = np.hstack([a_ub, -a_ub])
    solution, value = _simplex_standard(split_c, split_a, b_ub)
    n = c.shape[0]
    return solution[:n] - solution[n:], value


# ---------------------------------------------------------------------------
# Chebyshev center and recession directions
# ---------------------------------------------------------------------------

def interior_point(normals: np.ndarray, offsets: np.ndarray,
                   tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Chebyshev center of {x : n_k.x + b_k >= 0}: maximize r subject to
    n_k.x + b_k >= r ||n_k||.

    Returns (center, radius).  Raises Infeasible when the optimal radius is
    not strictly positive, i.e. the set is empty or lower-dimensional; the
    exception carries the signed optimal radius so callers can tell the two
    apart.  The center search is boxed at 1e6 x the data scale, so genuinely
    unbounded inputs come back with a huge (capped) radius rather than an
    unbounded program; reject those by checking recession_direction first.
    """
    normals = np.asarray(normals, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    if normals.ndim != 2 or normals.shape[0] != offsets.shape[0]:
        raise ValueError("normals must be (m, d) with matching offsets")
    m, d = normals.shape
    lengths = np.sqrt((normals * normals).sum(axis=1))
    box = 1e6 * (1.0 + float(np.max(np.abs(offsets), initial=0.0)))
    # variables (x, r): rows  -n_k.x + ||n_k|| r <= b_k  and  +-x_i <= box
    a = np.zeros((m + 2 * d, d + 1))
    a[:m, :d] = -normals
    a[:m, d] = lengths
    rhs = np.concatenate([offsets, np.full(2 * d, box)])
    for i in range(d):
        a[m + 2 * i, i] = 1.0
        a[m + 2 * i + 1, i] = -1.0
    c = np.zeros(d + 1)
    c[d] = 1.0
    solution, value = linprog_max(c, a, rhs)
    if value <= tol.pos_abs:
        raise Infeasible(
            f"no interior ball: optimal radius {value:.3e}", radius=value)
    return solution[:d], value


def recession_direction(normals: np.ndarray,
                        tol: Tolerances = DEFAULT_TOL) -> np.ndarray | None:
    """A direction v != 0 with n_k.v >= 0 for all k, or None when only v = 0 works.

    First maximizes min_k n_k.v over the unit box (finds interior directions of
    the recession cone); when that tops out at zero, 2d per-coordinate sweeps
    max +-v_i over the cone catch flat cones such as {(1,0),(-1,0)} -> (0,1).
    """
    normals = np.asarray(normals, dtype=float)
    if normals.ndim != 2 or normals.shape[0] == 0:
        raise ValueError("normals must be a nonempty (m, d) array")
    m, d = normals.shape
    box_rows = np.zeros((2 * d, d))
    for i in range(d):
        box_rows[2 * i, i] = 1.0
        box_rows[2 * i + 1, i] = -1.0
    box_rhs = np.ones(2 * d)

    # variables (v, t): rows  t - n_k.v <= 0, |v_i| <= 1; maximize t
    a = np.zeros((m + 2 * d, d + 1))
    a[:m, :d] = -normals
    a[:m, d] = 1.0
    a[m:, :d] = box_rows
    rhs = np.concatenate([np.zeros(m), box_rhs])
    c = np.zeros(d + 1)
    c[d] = 1.0
    solution, value = linprog_max(c, a, rhs)
    if value > tol.pos_abs:
        return solution[:d]

    cone = np.vstack([-normals, box_rows])
    cone_rhs = np.concatenate([np.zeros(m), box_rhs])
    for i in range(d):
        for sign in (1.0, -1.0):
            c = np.zeros(d)
            c[i] = sign
            solution, value = linprog_max(c, cone, cone_rhs)
            if value > tol.pos_abs:
                return solution
    return None
