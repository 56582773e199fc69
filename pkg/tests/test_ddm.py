import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.spatial import ConvexHull, HalfspaceIntersection

from sympcap.ddm import vertex_enumerate_rows
from sympcap.errors import SizeError


def _sorted(V):
    return V[np.lexsort(np.round(V, 8).T[::-1])]


def test_square():
    V = vertex_enumerate_rows(np.vstack([np.eye(2), -np.eye(2)]))
    assert len(V) == 4
    assert np.allclose(np.abs(V), 1)


def test_cross_polytope_h_form():
    rows = np.array(list(itertools.product([-1.0, 1.0], repeat=4)))
    V = vertex_enumerate_rows(rows)
    expected = np.vstack([np.eye(4), -np.eye(4)])
    np.testing.assert_allclose(_sorted(V), _sorted(expected), atol=1e-12)


def test_duplicated_rows():
    rows = np.vstack([np.eye(3), -np.eye(3)])
    V1 = vertex_enumerate_rows(rows)
    V2 = vertex_enumerate_rows(np.vstack([rows, rows[:2]]))
    np.testing.assert_array_equal(V1, V2)
    assert len(V1) == 8


def test_size_limit():
    with pytest.raises(SizeError):
        vertex_enumerate_rows(np.vstack([np.eye(13), -np.eye(13)]))


def _qhull_rows(d, seed):
    r = np.random.default_rng(seed)
    P = r.standard_normal((d + 4, d))
    P = np.vstack([P, -P])
    hull = ConvexHull(P)
    # facets a.x <= 1 from qhull equations a.x + b <= 0 with b < 0
    return P[hull.vertices], hull.equations[:, :d] / -hull.equations[:, d:]


@given(st.integers(2, 4), st.integers(0, 2**31))
def test_matches_qhull(d, seed):
    expected, rows = _qhull_rows(d, seed)
    V = vertex_enumerate_rows(rows)
    assert len(V) == len(expected)
    np.testing.assert_allclose(_sorted(V), _sorted(expected), atol=1e-7)
    slack = 1 - V @ rows.T
    assert (slack >= -1e-9).all()
    assert ((np.abs(slack) <= 1e-9).sum(axis=1) >= d).all()


@given(st.integers(3, 4), st.integers(0, 2**31))
def test_rounded_degenerate_rows(d, seed):
    # rounding splits degenerate vertices into tiny clusters; compare support
    # functions with qhull's halfspace intersection of the same rows
    _, rows = _qhull_rows(d, seed)
    rows = np.round(rows, 10)
    V = vertex_enumerate_rows(rows)
    expected = HalfspaceIntersection(np.hstack([rows, -np.ones((len(rows), 1))]),
                                     np.zeros(d)).intersections
    U = np.random.default_rng(seed).standard_normal((50, d))
    np.testing.assert_allclose((U @ V.T).max(axis=1), (U @ expected.T).max(axis=1), atol=1e-6)
