"""Halfspace-form polytopes: ingestion, validation, vertex enumeration.

A polytope arrives as a list of affine conditions l_k(x) = n_k.x + b_k >= 0.
Before anything downstream trusts it, ``validate`` certifies the standing
hypotheses of the whole artifact: the set is nonempty, bounded, genuinely
d-dimensional, and every listed halfspace actually supports a facet.  The
checks are geometric and explicit - vertices come from solving the d-by-d
systems of every facet subset, boundedness from a recession-cone program,
full dimension from a Chebyshev ball - so each failure mode maps to its own
exception and, in the CLI, its own exit code.

Scale guards: vertex enumeration visits C(N, d) subsets, acceptable at desk
scale only.  ``validate`` refuses inputs beyond ``max_facets``/``max_dim``
unless the caller raises those limits explicitly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Infeasible,
    Singular,
    Tolerances,
    interior_point,
    rank,
    recession_direction,
    solve_real,
)

__all__ = [
    "Halfspace",
    "VertexIncidence",
    "PolytopeH",
    "PolytopeError",
    "ParseError",
    "ZeroNormal",
    "Unbounded",
    "NotFullDimensional",
    "RedundantHalfspace",
    "Empty",
    "Degenerate",
    "GuardExceeded",
    "canonicalize",
    "enumerate_vertices",
    "validate",
    "contains",
    "from_vertices_2d",
    "from_json",
]

VERTEX_DEDUP_ABS = 1e-7  # merge radius for numerically identical corners


class PolytopeError(Exception):
    """Base class for rejected polytope inputs."""


class ParseError(PolytopeError):
    """The JSON document does not follow the polytope schema."""


class ZeroNormal(PolytopeError):
    """A halfspace normal is (numerically) the zero vector."""


class Unbounded(PolytopeError):
    """The halfspace intersection admits a recession direction."""


class NotFullDimensional(PolytopeError):
    """The set has empty interior: no ball of positive radius fits."""


class Empty(PolytopeError):
    """The halfspace intersection contains no point."""


class Degenerate(PolytopeError):
    """Vertex input does not span a 2-dimensional hull."""


class GuardExceeded(PolytopeError):
    """Input size beyond the combinatorial guards; raise the limits to proceed."""


class RedundantHalfspace(PolytopeError):
    """A listed halfspace supports no facet of the intersection."""

    def __init__(self, index: int):
        super().__init__(f"halfspace {index} supports no facet")
        self.index = index


@dataclass(frozen=True, eq=False)
class Halfspace:
    """Affine condition l(x) = normal.x + offset >= 0, normal of unit length."""

    normal: np.ndarray
    offset: float

    def value(self, x: np.ndarray) -> float | np.ndarray:
        """l(x) for a single point (d,) or a batch (m, d)."""
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            return float(np.dot(self.normal, x) + self.offset)
        return x @ self.normal + self.offset

    def flipped(self) -> "Halfspace":
        return Halfspace(normal=-self.normal, offset=-self.offset)


@dataclass(frozen=True)
class VertexIncidence:
    """For each vertex, the sorted indices of the halfspaces active there."""

    active: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.active)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.active[i]


@dataclass(frozen=True, eq=False)
class PolytopeH:
    """A validated bounded full-dimensional polytope in halfspace form."""

    dim: int
    halfspaces: tuple[Halfspace, ...]
    vertices: np.ndarray
    incidence: VertexIncidence
    interior: np.ndarray
    radius: float
    tol: Tolerances = field(default=DEFAULT_TOL)

    @property
    def normals(self) -> np.ndarray:
        return np.vstack([h.normal for h in self.halfspaces])

    @property
    def offsets(self) -> np.ndarray:
        return np.array([h.offset for h in self.halfspaces])

    def values(self, x: np.ndarray) -> np.ndarray:
        """All l_k(x) at once; x may be a point (d,) or batch (m, d)."""
        x = np.asarray(x, dtype=float)
        return x @ self.normals.T + self.offsets


def _as_halfspace_data(raw) -> tuple[np.ndarray, float]:
    if isinstance(raw, Halfspace):
        return np.asarray(raw.normal, dtype=float), float(raw.offset)
    normal, offset = raw
    return np.asarray(normal, dtype=float), float(offset)


def canonicalize(halfspaces, tol: Tolerances = DEFAULT_TOL) -> list[Halfspace]:
    """Scale every normal to unit length and collapse duplicate conditions.

    Accepts Halfspace records or (normal, offset) pairs.  Duplicates are
    detected after normalization (same direction and offset within geom_abs),
    keeping the first occurrence; near-parallel but distinct facets survive.
    """
    out: list[Halfspace] = []
    for raw in halfspaces:
        normal, offset = _as_halfspace_data(raw)
        if normal.ndim != 1:
            raise ValueError("normals must be vectors")
        if not np.all(np.isfinite(normal)) or not math.isfinite(offset):
            raise ValueError("halfspace entries must be finite")
        length = float(np.sqrt(np.dot(normal, normal)))
        if length <= 1e-15:
            raise ZeroNormal("halfspace normal has zero length")
        candidate = Halfspace(normal=normal / length, offset=offset / length)
        duplicate = any(
            np.max(np.abs(candidate.normal - h.normal)) <= tol.geom_abs
            and abs(candidate.offset - h.offset) <= tol.geom_abs
            for h in out)
        if not duplicate:
            out.append(candidate)
    return out


def _solve_subsets(halfspaces: list[Halfspace], dim: int,
                   tol: Tolerances) -> list[np.ndarray]:
    """Intersection points of every nonsingular d-subset of the hyperplanes."""
    points = []
    for subset in itertools.combinations(range(len(halfspaces)), dim):
        rows = np.vstack([halfspaces[k].normal for k in subset])
        rhs = -np.array([halfspaces[k].offset for k in subset])
        try:
            points.append(solve_real(rows, rhs, tol))
        except Singular:
            continue
    return points


def _dedup_points(points: list[np.ndarray], radius: float) -> list[np.ndarray]:
    kept: list[np.ndarray] = []
    for p in points:
        if not any(np.max(np.abs(p - q)) <= radius for q in kept):
            kept.append(p)
    return kept


def enumerate_vertices(halfspaces: list[Halfspace], dim: int,
                       tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, VertexIncidence]:
    """Vertices of the intersection plus the active halfspaces at each.

    Every d-subset of hyperplanes with independent normals contributes its
    intersection point; points violating any halfspace by more than geom_abs
    are dropped, the rest deduplicated within an absolute merge radius.  The
    returned order follows subset enumeration order (deterministic); as a
    point set the result does not depend on halfspace order.
    """
    feasible = []
    for p in _solve_subsets(halfspaces, dim, tol):
        values = [h.value(p) for h in halfspaces]
        if min(values) >= -tol.geom_abs:
            feasible.append(p)
    vertices = _dedup_points(feasible, VERTEX_DEDUP_ABS)
    active = tuple(
        tuple(k for k, h in enumerate(halfspaces) if abs(h.value(v)) <= tol.geom_abs)
        for v in vertices)
    array = np.vstack(vertices) if vertices else np.empty((0, dim))
    return array, VertexIncidence(active=active)


def _repair_orientation(halfspaces: list[Halfspace], dim: int,
                        tol: Tolerances) -> list[Halfspace] | None:
    """Flip halfspaces that are nonpositive at every hyperplane-arrangement point.

    Only called when no feasible vertex exists at all.  A halfspace evaluating
    <= 0 at every candidate corner is certainly mis-oriented (the intersection,
    if any, lives among those corners); mixed strict signs mean flipping could
    not be justified, so the caller reports the inconsistency instead.
    """
    points = _solve_subsets(halfspaces, dim, tol)
    if not points:
        return None
    repaired = list(halfspaces)
    flipped_any = False
    for k, h in enumerate(halfspaces):
        values = np.array([h.value(p) for p in points])
        if values.max() <= tol.geom_abs and values.min() < -tol.geom_abs:
            repaired[k] = h.flipped()
            flipped_any = True
    return repaired if flipped_any else None


def _facet_has_witness(halfspaces: list[Halfspace], k: int, vertices: np.ndarray,
                       dim: int, tol: Tolerances) -> bool:
    """True when halfspace k is active on at least d vertices spanning a facet."""
    active = [v for v in vertices if abs(halfspaces[k].value(v)) <= tol.geom_abs]
    if len(active) < dim:
        return False
    if dim == 1:
        return True
    base = active[0]
    return rank(np.vstack([v - base for v in active[1:]]), tol) >= dim - 1


def validate(halfspaces, dim: int, tol: Tolerances = DEFAULT_TOL, *,
             max_facets: int = 24, max_dim: int = 5) -> PolytopeH:
    """Certify and assemble a PolytopeH, or raise the specific failure.

    Order of checks: canonicalize; enumerate vertices (with one orientation
    repair attempt when none are feasible); Chebyshev ball (Empty when the
    optimal radius is negative); recession cone (Unbounded); positive ball
    radius (NotFullDimensional); facet witnesses (RedundantHalfspace).
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    if dim > max_dim:
        raise GuardExceeded(f"dim {dim} above guard {max_dim}")
    canonical = canonicalize(halfspaces, tol)
    if not canonical:
        raise Unbounded("no halfspaces: the whole space")
    if len(canonical) > max_facets:
        raise GuardExceeded(f"{len(canonical)} halfspaces above guard {max_facets}")

    vertices, incidence = enumerate_vertices(canonical, dim, tol)
    if vertices.shape[0] == 0:
        repaired = _repair_orientation(canonical, dim, tol)
        if repaired is not None:
            canonical = repaired
            vertices, incidence = enumerate_vertices(canonical, dim, tol)

    normals = np.vstack([h.normal for h in canonical])
    offsets = np.array([h.offset for h in canonical])
    try:
        center, radius = interior_point(normals, offsets, tol)
    except Infeasible as exc:
        if math.isfinite(exc.radius) and exc.radius < -tol.pos_abs:
            raise Empty("halfspace intersection is empty") from exc
        if recession_direction(normals, tol) is not None:
            raise Unbounded("halfspace intersection admits a recession direction") from exc
        raise NotFullDimensional("no interior ball of positive radius") from exc

    if recession_direction(normals, tol) is not None:
        raise Unbounded("halfspace intersection admits a recession direction")
    if vertices.shape[0] == 0:
        raise Empty("no feasible vertex; halfspace orientations are inconsistent")

    for k in range(len(canonical)):
        if not _facet_has_witness(canonical, k, vertices, dim, tol):
            raise RedundantHalfspace(k)

    return PolytopeH(dim=dim, halfspaces=tuple(canonical), vertices=vertices,
                     incidence=incidence, interior=center, radius=radius, tol=tol)


def contains(polytope: PolytopeH, x: np.ndarray) -> bool:
    """Membership by halfspace signs: min_k l_k(x) >= -geom_abs."""
    x = np.asarray(x, dtype=float)
    if x.shape != (polytope.dim,):
        raise ValueError(f"point must have dimension {polytope.dim}")
    return bool(np.min(polytope.values(x)) >= -polytope.tol.geom_abs)


def _convex_hull_2d(points: np.ndarray, eps: float) -> list[np.ndarray]:
    """Andrew's monotone chain; strictly convex output (collinear points dropped)."""
    order = sorted(range(points.shape[0]), key=lambda i: (points[i, 0], points[i, 1]))
    unique: list[np.ndarray] = []
    for i in order:
        if not unique or np.max(np.abs(points[i] - unique[-1])) > 0.0:
            unique.append(points[i])
    if len(unique) < 3:
        return unique

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def build(seq):
        chain: list[np.ndarray] = []
        for p in seq:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], p) <= eps:
                chain.pop()
            chain.append(p)
        return chain

    lower = build(unique)
    upper = build(reversed(unique))
    return lower[:-1] + upper[:-1]


def from_vertices_2d(points, tol: Tolerances = DEFAULT_TOL) -> PolytopeH:
    """Polytope from a 2-D point cloud: hull, inward edge halfspaces, validate.

    The hull edges run counterclockwise, so the inward normal of edge p -> q
    is the left normal (-(q-p)_y, (q-p)_x).  Raises Degenerate when the cloud
    does not span a genuine polygon.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError("expected an (m, 2) array of points")
    if points.shape[0] < 3:
        raise Degenerate("need at least 3 points")
    scale = float(np.max(np.abs(points), initial=1.0))
    hull = _convex_hull_2d(points, eps=1e-9 * scale * scale)
    if len(hull) < 3:
        raise Degenerate("points are collinear")
    halfspaces = []
    for i, p in enumerate(hull):
        q = hull[(i + 1) % len(hull)]
        edge = q - p
        normal = np.array([-edge[1], edge[0]])
        halfspaces.append((normal, -float(np.dot(normal, p))))
    return validate(halfspaces, 2, tol)


def from_json(document: dict, tol: Tolerances = DEFAULT_TOL, *,
              max_facets: int = 24, max_dim: int = 5) -> PolytopeH:
    """Build and validate a polytope from the documented JSON schema.

    Either {"dim": d, "halfspaces": [{"normal": [...], "offset": b}, ...]}
    with the convention normal.x + offset >= 0, or {"dim": 2, "vertices":
    [[x, y], ...]}.  Exactly one of halfspaces/vertices must be present.
    """
    if not isinstance(document, dict):
        raise ParseError("top-level JSON value must be an object")
    if "dim" not in document:
        raise ParseError("missing 'dim'")
    dim = document["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError("'dim' must be a positive integer")
    has_h = "halfspaces" in document
    has_v = "vertices" in document
    if has_h == has_v:
        raise ParseError("exactly one of 'halfspaces' or 'vertices' must be present")

    if has_v:
        if dim != 2:
            raise ParseError("vertex input is only supported for dim 2")
        vertices = document["vertices"]
        if not isinstance(vertices, list) or not vertices:
            raise ParseError("'vertices' must be a nonempty list")
        try:
            cloud = np.array(vertices, dtype=float)
        except (TypeError, ValueError) as exc:
            raise ParseError("vertices must be lists of numbers") from exc
        if cloud.ndim != 2 or cloud.shape[1] != 2 or not np.all(np.isfinite(cloud)):
            raise ParseError("vertices must be finite pairs [x, y]")
        return from_vertices_2d(cloud, tol)

    entries = document["halfspaces"]
    if not isinstance(entries, list) or not entries:
        raise ParseError("'halfspaces' must be a nonempty list")
    raw = []
    for entry in entries:
        if not isinstance(entry, dict) or "normal" not in entry or "offset" not in entry:
            raise ParseError("each halfspace needs 'normal' and 'offset'")
        try:
            normal = np.array(entry["normal"], dtype=float)
            offset = float(entry["offset"])
        except (TypeError, ValueError) as exc:
            raise ParseError("halfspace entries must be numeric") from exc
        if normal.shape != (dim,) or not np.all(np.isfinite(normal)) or not math.isfinite(offset):
            raise ParseError(f"normals must be finite vectors of length {dim}")
        raw.append((normal, offset))
    return validate(raw, dim, tol, max_facets=max_facets, max_dim=max_dim)
