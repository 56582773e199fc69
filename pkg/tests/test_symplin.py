import numpy as np
import pytest
from hypothesis import given, strategies as st

from sympcap.errors import DomainError, NormalizationError, RankError
from sympcap.symplin import (J_matrix, SymplecticMap, apply_J, basis_vector, cayley_symplectic,
                             complete_to_symplectic, is_symplectic, omega, random_symplectic,
                             symplectic_residual)


def test_apply_J_examples():
    np.testing.assert_array_equal(apply_J(basis_vector(1, "q1")), basis_vector(1, "p1"))
    np.testing.assert_array_equal(apply_J(basis_vector(1, "p1")), -basis_vector(1, "q1"))
    np.testing.assert_array_equal(apply_J(np.ones(4)), [-1, -1, 1, 1])


def test_apply_J_matches_matrix(rng):
    for n in (1, 2, 3):
        x = rng.standard_normal((5, 2 * n))
        np.testing.assert_allclose(apply_J(x), x @ J_matrix(n).T, atol=0)


def test_odd_length_rejected():
    with pytest.raises(ValueError):
        apply_J(np.ones(3))


@given(st.integers(1, 4), st.integers(0, 2**31))
def test_J_squared_is_minus_identity(n, seed):
    x = np.random.default_rng(seed).standard_normal(2 * n)
    assert np.max(np.abs(apply_J(apply_J(x)) + x)) <= 1e-15


def test_omega_examples():
    n = 2
    assert omega(basis_vector(n, "p1"), basis_vector(n, "q1")) == 1.0
    assert omega(basis_vector(n, "q1"), basis_vector(n, "q2")) == 0.0
    v = np.array([0.3, -1.2, 2.0, 0.7])
    assert omega(v, v) == 0.0


def test_omega_dimension_mismatch():
    with pytest.raises(ValueError):
        omega(np.ones(2), np.ones(4))


@given(st.integers(1, 3), st.integers(0, 2**31))
def test_omega_bilinear_antisymmetric(n, seed):
    r = np.random.default_rng(seed)
    a, b, c = r.standard_normal((3, 2 * n))
    s = r.standard_normal()
    assert abs(omega(a, b) + omega(b, a)) <= 1e-12
    assert abs(omega(a + s * c, b) - omega(a, b) - s * omega(c, b)) <= 1e-10


def test_is_symplectic_examples():
    assert is_symplectic(SymplecticMap.identity(2))
    assert is_symplectic(J_matrix(2))
    assert not is_symplectic(2 * np.eye(2))
    with pytest.raises(ValueError):
        is_symplectic(np.eye(2), tol=0)


def test_symplectic_map_rejects_non_symplectic():
    with pytest.raises(DomainError):
        SymplecticMap(2 * np.eye(2))


def test_cayley_zero_is_identity():
    np.testing.assert_array_equal(cayley_symplectic(np.zeros((4, 4))).linear, np.eye(4))


def test_cayley_random_symmetric(rng):
    G = rng.standard_normal((4, 4))
    S = cayley_symplectic(G + G.T)
    assert symplectic_residual(S.linear) <= 1e-10
    # omega on basis pairs
    E = np.eye(4)
    for i in range(4):
        for j in range(4):
            assert abs(omega(S(E[i]), S(E[j])) - omega(E[i], E[j])) <= 1e-10


def test_cayley_singular_chart():
    # M = diag(2, -2) gives JM/2 = [[0, 1], [1, 0]], which has eigenvalue 1
    M = np.diag([2.0, -2.0])
    assert abs(np.linalg.det(np.eye(2) - 0.5 * J_matrix(1) @ M)) < 1e-12
    with pytest.raises(DomainError):
        cayley_symplectic(M)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_omega_preserved_by_random_maps(n):
    r = np.random.default_rng(100 + n)
    for _ in range(100):
        S = random_symplectic(n, r)
        x, y = r.standard_normal((2, 2 * n))
        assert abs(omega(S(x), S(y)) - omega(x, y)) <= 1e-9 * max(1, np.linalg.norm(S.linear) ** 2)
        assert S.residual() <= 1e-9


def test_complete_identity_pair():
    e = basis_vector(2, "q1")
    S, sign = complete_to_symplectic(e, apply_J(e))
    # omega(e, Je) = -1 so the pair is used as given
    assert sign == 1
    np.testing.assert_allclose(S.linear.T @ e, e, atol=1e-12)
    np.testing.assert_allclose(S.linear.T @ apply_J(e), apply_J(e), atol=1e-12)
    assert is_symplectic(S)


def test_complete_rotated_pair_n1():
    v, w = np.array([0.0, 1.0]), np.array([-1.0, 0.0])
    S, sign = complete_to_symplectic(v, w)
    e = basis_vector(1, "q1")
    assert abs(abs(np.linalg.det(S.linear)) - 1) <= 1e-10
    assert np.max(np.abs(S.linear.T @ e - v)) <= 1e-10
    assert np.max(np.abs(S.linear.T @ apply_J(e) - sign * w)) <= 1e-10


def test_complete_errors():
    e = basis_vector(1, "q1")
    with pytest.raises(NormalizationError):
        complete_to_symplectic(e, 2 * apply_J(e))
    with pytest.raises(RankError):
        complete_to_symplectic(e, 3 * e)


@given(st.integers(1, 4), st.integers(0, 2**31), st.booleans())
def test_complete_round_trip(n, seed, flip):
    r = np.random.default_rng(seed)
    v = r.standard_normal(2 * n)
    w = r.standard_normal(2 * n)
    om = omega(v, w)
    if abs(om) < 1e-3:
        return
    w = w / om * (1 if flip else -1)
    S, sign = complete_to_symplectic(v, w)
    e = basis_vector(n, "q1")
    scale = max(1.0, np.abs(v).max(), np.abs(w).max())
    assert np.max(np.abs(S.linear.T @ e - v)) <= 1e-9 * scale
    assert np.max(np.abs(S.linear.T @ apply_J(e) - sign * w)) <= 1e-9 * scale
    assert S.residual() <= 1e-9 * scale ** 2
