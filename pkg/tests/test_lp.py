import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from sympcap.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, linprog_max, solve_lp


def test_small_standard_form():
    # min -x0 - x1  s.t.  x0 + 2 x1 + s = 4, 3 x0 + x1 + t = 6
    A = [[1, 2, 1, 0], [3, 1, 0, 1]]
    res = solve_lp([-1, -1, 0, 0], A, [4, 6])
    assert res.status == OPTIMAL
    np.testing.assert_allclose(res.x[:2], [1.6, 1.2], atol=1e-12)
    assert res.fun == pytest.approx(-2.8, abs=1e-12)


def test_infeasible_and_unbounded():
    assert solve_lp([1.0], [[1.0], [1.0]], [1.0, 2.0]).status == INFEASIBLE
    assert solve_lp([-1.0, 0.0], [[1.0, -1.0]], [0.0]).status == UNBOUNDED


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook rule; Bland's rule terminates
    c = [-0.75, 150, -0.02, 6, 0, 0, 0]
    A = [[0.25, -60, -0.04, 9, 1, 0, 0],
         [0.5, -90, -0.02, 3, 0, 1, 0],
         [0, 0, 1, 0, 0, 0, 1]]
    res = solve_lp(c, A, [0, 0, 1])
    assert res.status == OPTIMAL
    assert res.fun == pytest.approx(-0.05, abs=1e-12)


@given(st.integers(2, 6), st.integers(1, 4), st.integers(0, 2**31))
def test_matches_highs_on_random_bounded_problems(d, extra, seed):
    r = np.random.default_rng(seed)
    # random polytope around the origin, random objective, optional equality
    A = r.standard_normal((2 * d + extra, d))
    b = r.uniform(0.5, 2.0, len(A))
    A = np.vstack([A, np.eye(d), -np.eye(d)])
    b = np.concatenate([b, 5 * np.ones(2 * d)])
    c = r.standard_normal(d)
    A_eq = r.standard_normal((1, d)) if seed % 2 else None
    b_eq = [0.0] if seed % 2 else None
    ours = linprog_max(c, A, b, A_eq, b_eq)
    ref = linprog(-c, A_ub=A, b_ub=b, A_eq=A_eq, b_eq=b_eq, bounds=(None, None), method="highs")
    assert ref.status == 0 and ours.status == OPTIMAL
    assert ours.fun == pytest.approx(-ref.fun, abs=1e-8 * max(1, abs(ref.fun)))
    assert (A @ ours.x <= b + 1e-8).all()


def test_duals_certify_optimum(rng):
    A = np.abs(rng.standard_normal((3, 6))) + 0.1
    b = np.ones(3)
    c = rng.uniform(0.1, 1.0, 6)
    res = solve_lp(c, A, b)
    assert res.status == OPTIMAL
    assert (A.T @ res.duals <= c + 1e-9).all()
    assert res.duals @ b == pytest.approx(res.fun, abs=1e-9)
