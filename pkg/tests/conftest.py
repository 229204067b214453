"""Shared fixtures: canonical polytopes, their support sets, and reference formulas."""

import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from polyextremal import PolytopeH, SupportSet, enumerate_supports, from_json

settings.register_profile("repeatable", derandomize=True, deadline=None)
settings.load_profile("repeatable")

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / f"{name}.json")


def load_fixture(name: str) -> PolytopeH:
    with open(FIXTURES / f"{name}.json", encoding="utf-8") as fh:
        return from_json(json.load(fh))


def quad_reference(z1: complex, z2: complex) -> float:
    """Closed-form extremal value for the quadrilateral hull of
    (0,0), (1,0), (3/4,3/4), (0,1): the larger of the two triangle values."""
    s_a = abs(1.0 - z1 - z2 / 3.0) + abs(z1) + abs(z2 / 3.0)
    s_b = abs(1.0 - z1 / 3.0 - z2) + abs(z1 / 3.0) + abs(z2)
    return max(math.acosh(max(s_a, 1.0)), math.acosh(max(s_b, 1.0)))


def quad_reference_grid(z1: np.ndarray, z2: np.ndarray) -> np.ndarray:
    """Vectorized quad_reference over equally shaped complex arrays."""
    s_a = np.abs(1.0 - z1 - z2 / 3.0) + np.abs(z1) + np.abs(z2 / 3.0)
    s_b = np.abs(1.0 - z1 / 3.0 - z2) + np.abs(z1 / 3.0) + np.abs(z2)
    v_a = np.arccosh(np.maximum(s_a, 1.0))
    v_b = np.arccosh(np.maximum(s_b, 1.0))
    return np.maximum(v_a, v_b)


@pytest.fixture(scope="session")
def quad() -> PolytopeH:
    return load_fixture("quad")


@pytest.fixture(scope="session")
def square() -> PolytopeH:
    return load_fixture("square")


@pytest.fixture(scope="session")
def triangle() -> PolytopeH:
    return load_fixture("triangle")


@pytest.fixture(scope="session")
def cube() -> PolytopeH:
    return load_fixture("cube")


@pytest.fixture(scope="session")
def prism() -> PolytopeH:
    return load_fixture("prism")


@pytest.fixture(scope="session")
def quad_supports(quad) -> SupportSet:
    return enumerate_supports(quad)


@pytest.fixture(scope="session")
def square_supports(square) -> SupportSet:
    return enumerate_supports(square)


@pytest.fixture(scope="session")
def triangle_supports(triangle) -> SupportSet:
    return enumerate_supports(triangle)


@pytest.fixture(scope="session")
def cube_supports(cube) -> SupportSet:
    return enumerate_supports(cube)


@pytest.fixture(scope="session")
def prism_supports(prism) -> SupportSet:
    return enumerate_supports(prism)


def match_point_sets(got: np.ndarray, expected, tol: float = 1e-9) -> bool:
    """True iff the two point collections coincide as sets within tol."""
    got = np.asarray(got, dtype=float)
    expected = np.asarray(expected, dtype=float)
    if got.shape != expected.shape:
        return False
    remaining = list(range(len(expected)))
    for p in got:
        hit = next(
            (i for i in remaining if np.max(np.abs(expected[i] - p)) <= tol), None
        )
        if hit is None:
            return False
        remaining.remove(hit)
    return not remaining
