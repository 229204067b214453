"""Tests for halfspace canonicalization, vertex enumeration, and validation."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyextremal.linalg import Tolerances, rank
from polyextremal.polytope import (
    Degenerate,
    Empty,
    GuardExceeded,
    NotFullDimensional,
    ParseError,
    RedundantHalfspace,
    Unbounded,
    ZeroNormal,
    canonicalize,
    contains,
    enumerate_vertices,
    from_json,
    from_vertices_2d,
    validate,
)

from conftest import load_fixture, match_point_sets

QUAD_RAW = [
    ([1.0, 0.0], 0.0),
    ([0.0, 1.0], 0.0),
    ([-1.0, -3.0], 3.0),
    ([-3.0, -1.0], 3.0),
]
QUAD_VERTICES = [(0.0, 0.0), (1.0, 0.0), (0.75, 0.75), (0.0, 1.0)]
SQUARE_RAW = [
    ([1.0, 0.0], 1.0),
    ([-1.0, 0.0], 1.0),
    ([0.0, 1.0], 1.0),
    ([0.0, -1.0], 1.0),
]
TRIANGLE_RAW = [([1.0, 0.0], 0.0), ([0.0, 1.0], 0.0), ([-1.0, -1.0], 1.0)]


def test_canonicalize_scales_to_unit_normal():
    result = canonicalize([([3.0, 0.0], 9.0)])
    assert len(result) == 1
    assert np.allclose(result[0].normal, [1.0, 0.0], atol=1e-14)
    assert result[0].offset == pytest.approx(3.0, abs=1e-14)


def test_canonicalize_collapses_duplicates():
    result = canonicalize([([1.0, 0.0], 1.0), ([2.0, 0.0], 2.0)])
    assert len(result) == 1
    assert np.allclose(result[0].normal, [1.0, 0.0], atol=1e-14)
    assert result[0].offset == pytest.approx(1.0, abs=1e-14)


def test_canonicalize_rejects_zero_normal():
    with pytest.raises(ZeroNormal):
        canonicalize([([0.0, 0.0], 1.0)])


def test_canonicalize_keeps_antiparallel_pairs():
    result = canonicalize([([1.0, 0.0], 1.0), ([-1.0, 0.0], 1.0)])
    assert len(result) == 2


def test_enumerate_vertices_quad():
    vertices, incidence = enumerate_vertices(canonicalize(QUAD_RAW), 2)
    assert match_point_sets(vertices, QUAD_VERTICES)
    assert len(incidence) == 4


def test_enumerate_vertices_square():
    vertices, _ = enumerate_vertices(canonicalize(SQUARE_RAW), 2)
    expected = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
    assert match_point_sets(vertices, expected)


def test_enumerate_vertices_triangle():
    vertices, _ = enumerate_vertices(canonicalize(TRIANGLE_RAW), 2)
    assert match_point_sets(vertices, [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])


def test_enumerate_vertices_incidence_rank():
    halfspaces = canonicalize(QUAD_RAW)
    vertices, incidence = enumerate_vertices(halfspaces, 2)
    for k in range(len(vertices)):
        active = incidence[k]
        assert len(active) >= 2
        normals = np.array([halfspaces[i].normal for i in active])
        assert rank(normals) == 2


def test_enumerate_vertices_invariant_under_permutation():
    base, _ = enumerate_vertices(canonicalize(QUAD_RAW), 2)
    rng = np.random.default_rng(321)
    for _ in range(6):
        order = rng.permutation(4)
        permuted = [QUAD_RAW[i] for i in order]
        got, _ = enumerate_vertices(canonicalize(permuted), 2)
        assert match_point_sets(got, base)


def test_validate_quad():
    polytope = validate(QUAD_RAW, 2)
    assert polytope.dim == 2
    assert len(polytope.halfspaces) == 4
    assert match_point_sets(polytope.vertices, QUAD_VERTICES)
    assert polytope.radius > 0.0
    values = polytope.values(polytope.interior)
    assert np.all(values > 1e-9)


def test_validate_accepts_halfspace_objects():
    polytope = validate(canonicalize(QUAD_RAW), 2)
    assert len(polytope.halfspaces) == 4


def test_validate_redundant_halfspace():
    with pytest.raises(RedundantHalfspace) as exc:
        validate(QUAD_RAW + [([1.0, 0.0], 10.0)], 2)
    assert exc.value.index == 4


def test_validate_unbounded_quadrant():
    with pytest.raises(Unbounded):
        validate([([1.0, 0.0], 0.0), ([0.0, 1.0], 0.0)], 2)


def test_validate_not_full_dimensional():
    degenerate = [
        ([1.0, 0.0], 0.0),
        ([-1.0, 0.0], 0.0),
        ([0.0, 1.0], 0.0),
        ([0.0, -1.0], 0.0),
    ]
    with pytest.raises(NotFullDimensional):
        validate(degenerate, 2)


def test_validate_empty():
    with pytest.raises(Empty):
        validate([([1.0, 0.0], -1.0), ([-1.0, 0.0], -1.0)], 2)


def test_validate_no_halfspaces_is_unbounded():
    with pytest.raises(Unbounded):
        validate([], 2)


def test_validate_facet_guard():
    halfspaces = [([1.0, 0.0], float(k)) for k in range(30)]
    with pytest.raises(GuardExceeded):
        validate(halfspaces, 2, max_facets=24)


def test_validate_dimension_guard():
    with pytest.raises(GuardExceeded):
        validate([([1.0] + [0.0] * 6, 1.0)], 7, max_dim=5)


def test_validate_repairs_outward_oriented_square():
    """A fully outward-oriented description is flipped back automatically."""
    flipped = [(list(-np.asarray(n)), -b) for n, b in SQUARE_RAW]
    polytope = validate(flipped, 2)
    expected = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
    assert match_point_sets(polytope.vertices, expected)
    assert all(h.offset == pytest.approx(1.0, abs=1e-12) for h in polytope.halfspaces)


def test_validate_repairs_outward_oriented_triangle():
    flipped = [(list(-np.asarray(n)), -b) for n, b in TRIANGLE_RAW]
    polytope = validate(flipped, 2)
    assert match_point_sets(polytope.vertices, [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])


def test_contains_quad_inside_and_outside():
    polytope = validate(QUAD_RAW, 2)
    assert contains(polytope, np.array([0.375, 0.375]))
    assert not contains(polytope, np.array([1.0, 1.0]))
    assert contains(polytope, polytope.interior)


def test_contains_all_vertices():
    for name in ("quad", "square", "triangle", "cube", "prism"):
        polytope = load_fixture(name)
        for v in polytope.vertices:
            assert contains(polytope, v)


def test_facet_witness_spans_edge():
    polytope = validate(QUAD_RAW, 2)
    for k, h in enumerate(polytope.halfspaces):
        active = [v for v in polytope.vertices if abs(h.value(v)) <= 1e-9]
        assert len(active) >= 2
        diffs = np.array(active[1:]) - np.array(active[0])
        assert rank(diffs) == 1


def test_from_vertices_2d_quad():
    polytope = from_vertices_2d(QUAD_VERTICES)
    assert len(polytope.halfspaces) == 4
    expected = {
        (1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (-1 / np.sqrt(10), -3 / np.sqrt(10), 3 / np.sqrt(10)),
        (-3 / np.sqrt(10), -1 / np.sqrt(10), 3 / np.sqrt(10)),
    }
    got = {(h.normal[0], h.normal[1], h.offset) for h in polytope.halfspaces}
    for item in got:
        assert any(np.allclose(item, exp, atol=1e-9) for exp in expected)
    assert match_point_sets(polytope.vertices, QUAD_VERTICES)


def test_from_vertices_2d_triangle():
    polytope = from_vertices_2d([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
    assert len(polytope.halfspaces) == 3
    assert match_point_sets(polytope.vertices, [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])


def test_from_vertices_2d_interior_points_dropped():
    polytope = from_vertices_2d([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.1, 0.1)])
    assert len(polytope.halfspaces) == 3


def test_from_vertices_2d_collinear():
    with pytest.raises(Degenerate):
        from_vertices_2d([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)])


def test_from_vertices_2d_too_few_points():
    with pytest.raises(Degenerate):
        from_vertices_2d([(0.0, 0.0), (1.0, 0.0)])


def _hull_oracle(points: np.ndarray) -> np.ndarray:
    from scipy.spatial import ConvexHull

    hull = ConvexHull(points)
    return points[hull.vertices]


@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5, 6, 7, 8])
def test_from_vertices_round_trip_against_hull_oracle(seed):
    rng = np.random.default_rng(seed)
    points = rng.uniform(-2.0, 2.0, size=(int(rng.integers(4, 13)), 2))
    expected = _hull_oracle(points)
    if len(expected) < 3:
        pytest.skip("degenerate cloud")
    polytope = from_vertices_2d(points)
    assert match_point_sets(polytope.vertices, expected, tol=1e-9)


@given(
    st.lists(
        st.tuples(
            st.integers(min_value=-8, max_value=8),
            st.integers(min_value=-8, max_value=8),
        ),
        min_size=3,
        max_size=10,
        unique=True,
    )
)
@settings(max_examples=80)
def test_from_vertices_output_contains_every_input_point(cloud):
    points = np.asarray(cloud, dtype=float)
    try:
        polytope = from_vertices_2d(points)
    except Degenerate:
        return
    for p in points:
        assert contains(polytope, p)


def test_from_json_halfspace_form():
    doc = {
        "dim": 2,
        "halfspaces": [{"normal": [1.0, 0.0], "offset": 1.0},
                       {"normal": [-1.0, 0.0], "offset": 1.0},
                       {"normal": [0.0, 1.0], "offset": 1.0},
                       {"normal": [0.0, -1.0], "offset": 1.0}],
    }
    polytope = from_json(doc)
    assert polytope.dim == 2
    assert len(polytope.halfspaces) == 4


def test_from_json_vertex_form():
    doc = {"dim": 2, "vertices": [[0.0, 0.0], [1.0, 0.0], [0.75, 0.75], [0.0, 1.0]]}
    polytope = from_json(doc)
    assert match_point_sets(polytope.vertices, QUAD_VERTICES)


def test_from_json_fixture_file_round_trip():
    polytope = load_fixture("quad_vertices")
    assert match_point_sets(polytope.vertices, QUAD_VERTICES)


@pytest.mark.parametrize(
    "doc",
    [
        {"dim": 2},
        {"halfspaces": []},
        {"dim": 2, "halfspaces": [], "vertices": []},
        {"dim": "two", "halfspaces": [{"normal": [1, 0], "offset": 0}]},
        {"dim": 2, "halfspaces": [{"normal": [1.0], "offset": 0.0}]},
        {"dim": 2, "halfspaces": [{"normal": [1.0, 0.0]}]},
        {"dim": 2, "halfspaces": [{"normal": [np.inf, 0.0], "offset": 0.0}]},
        {"dim": 3, "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]},
        {"dim": 2, "vertices": [[0, 0], [1, 0], [0, "x"]]},
    ],
)
def test_from_json_schema_errors(doc):
    with pytest.raises(ParseError):
        from_json(doc)


def test_loose_tolerance_rejects_thin_polytope():
    thin = [
        ([1.0, 0.0], 0.0),
        ([-1.0, 0.0], 1e-6),
        ([0.0, 1.0], 0.0),
        ([0.0, -1.0], 1.0),
    ]
    assert validate(thin, 2).radius > 0
    with pytest.raises(NotFullDimensional):
        validate(thin, 2, Tolerances.uniform(1e-3))
