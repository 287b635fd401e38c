import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from switchreg import ValidationError, nearest_vertex, project_simplex
from switchreg.oracle import simplex_grid
from switchreg.simplex import project_rows


def grid_projection(v, step=1e-3):
    pts = simplex_grid(len(v), step)
    d = np.linalg.norm(pts - v, axis=1)
    return pts[np.argmin(d)], d.min()


def test_projection_examples():
    np.testing.assert_allclose(project_simplex([0.3, 0.7]), [0.3, 0.7], atol=1e-15)
    np.testing.assert_array_equal(project_simplex([2.0, 0.0]), [1.0, 0.0])
    np.testing.assert_allclose(project_simplex([0.8, 0.6]), [0.6, 0.4], atol=1e-15)
    best, _ = grid_projection(np.array([0.8, 0.6]))
    np.testing.assert_allclose(best, [0.6, 0.4], atol=1e-3)


def test_projection_rejects_nonfinite():
    with pytest.raises(ValidationError):
        project_simplex([np.nan, 1.0])


vectors = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.floats(-50, 50, allow_nan=False), min_size=n, max_size=n)
)


@given(vectors)
def test_projection_feasible_idempotent_ordered(v):
    v = np.array(v)
    u = project_simplex(v)
    assert np.all(u >= 0)
    assert abs(u.sum() - 1) <= 1e-12
    uu = project_simplex(u / u.sum())
    np.testing.assert_allclose(uu, u, atol=1e-15)
    order = np.argsort(v)
    assert np.all(np.diff(u[order]) >= -1e-15)


@settings(max_examples=50)
@given(st.lists(st.lists(st.floats(-5, 5, allow_nan=False), min_size=3, max_size=3), min_size=1, max_size=6))
def test_row_projection_matches_vector_projection(rows):
    V = np.array(rows)
    np.testing.assert_allclose(project_rows(V), np.array([project_simplex(r) for r in V]), atol=1e-15)


def test_projection_matches_grid_search():
    rng = np.random.default_rng(0)
    for _ in range(100):
        N = rng.integers(2, 4)
        v = rng.normal(scale=1.0, size=N)
        u = project_simplex(v)
        _, d_grid = grid_projection(v)
        assert np.linalg.norm(u - v) <= d_grid + 1e-12
        assert np.linalg.norm(u - v) >= d_grid - 2e-3


def test_nearest_vertex_examples():
    assert nearest_vertex([1, 0, 0]) == (1, 0.0)
    assert nearest_vertex([0.5, 0.5]) == (1, 1.0)
    idx, res = nearest_vertex([0.1, 0.7, 0.2])
    assert idx == 2 and res == pytest.approx(0.6)
    with pytest.raises(ValidationError):
        nearest_vertex([0.5, 0.6])
