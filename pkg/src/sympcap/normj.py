"""
The operator norm ``||J||_{K° -> K} = sup_{v, u in K°} <J v, u>`` and the
capacity bounds derived from it.

For polytopes the supremum of the bilinear form over ``K° x K°`` is attained
at a pair of vertices, so it is computed exactly by enumeration. For
ellipsoids ``{x^T Q x <= 1}`` it is the spectral norm of ``C^T J C`` with
``Q = C C^T``. Any other body falls back to alternating maximization
from seeded starts, which yields a certified lower witness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import (Body, VPolytope, difference_body, ellipsoid_matrix, polytope_rows,
                     polytope_vertices)
from .errors import DomainError, RepresentationError, SymmetryError
from .symplin import J_matrix, apply_J

ASCENT_STARTS = 32
ASCENT_RTOL = 1e-10


@dataclass
class NormJResult:
    value: float
    witness_v: np.ndarray
    witness_u: np.ndarray
    method: str  # "exact-vertex" | "closed-form" | "multistart-ascent"
    certified_lower: float


def _bilinear_max(W):
    """Max of ``<J a, b>`` over rows ``a, b`` of ``W`` (the vertices of ``K°``)."""
    G = apply_J(W) @ W.T  # G[i, j] = <J w_i, w_j>
    i, j = np.unravel_index(np.argmax(G), G.shape)
    return float(G[i, j]), W[i].copy(), W[j].copy()


def _exact_vertex(K: Body) -> NormJResult:
    W = polytope_rows(K)  # vertices of K°
    val, v, u = _bilinear_max(W)
    return NormJResult(val, v, u, "exact-vertex", float(apply_J(v) @ u))


def _closed_form(Q) -> NormJResult:
    C = np.linalg.cholesky(Q)  # Q = C C^T, so K° = {y^T Q^{-1} y <= 1} = C B
    M = C.T @ J_matrix(Q.shape[0] // 2) @ C
    U, s, Vt = np.linalg.svd(M)
    # v = C a, u = C b with <J v, u> = b^T M a
    a, b = Vt[0], U[:, 0]
    v, u = C @ a, C @ b
    return NormJResult(float(s[0]), v, u, "closed-form", float(apply_J(v) @ u))


def multistart_ascent(K: Body, starts: int = ASCENT_STARTS, seed: int = 0, rtol: float = ASCENT_RTOL,
            max_iter: int = 10_000) -> NormJResult:
    rng = np.random.default_rng(seed)
    best = None
    for s in range(starts):
        x = rng.standard_normal(K.dim)
        v = K.gauge_gradient(x)  # a point of ∂K°
        v = v / K.support(v)
        val = -np.inf
        for _ in range(max_iter):
            u = K.gauge_gradient(apply_J(v))       # argmax over K° of <J v, .>
            v = K.gauge_gradient(-apply_J(u))      # argmax over K° of <., -J u>
            new = float(K.gauge(apply_J(v)))
            if new - val <= rtol * abs(new):
                val = max(val, new)
                break
            val = new
        u = K.gauge_gradient(apply_J(v))
        v = v / max(1.0, float(K.support(v)))
        u = u / max(1.0, float(K.support(u)))
        cert = float(apply_J(v) @ u)
        if best is None or cert > best.certified_lower:
            best = NormJResult(cert, v, u, "multistart-ascent", cert)
    return best


def norm_J(K: Body, seed: int = 0) -> NormJResult:
    """Compute ``||J||_{K° -> K}`` with a witness pair in ``K°``."""
    if not K.symmetric:
        raise SymmetryError("norm_J needs a centrally symmetric body; use nonsym_bounds")
    return bilinear_sup(K, seed=seed)


def bilinear_sup(K: Body, seed: int = 0) -> NormJResult:
    """``sup_{v, u in K°} <J v, u>`` without a symmetry requirement."""
    Q = ellipsoid_matrix(K)
    if Q is not None:
        return _closed_form(Q)
    if K.is_polytope:
        return _exact_vertex(K)
    return multistart_ascent(K, seed=seed)


def ehz_lower_bound(K: Body) -> float:
    """``1 / ||J||``, a lower bound for the EHZ capacity."""
    return 1.0 / norm_J(K).value


def cyl_upper_bound(K: Body) -> float:
    """``4 / ||J||``, an upper bound for the cylindrical capacity of symmetric K."""
    return 4.0 / norm_J(K).value


def _translate(K: Body, t) -> Body:
    """``K - t`` as a V-polytope; ``t`` must be interior to ``K``."""
    V = polytope_vertices(K) - t
    try:
        return VPolytope(V)
    except RepresentationError as exc:
        raise DomainError("translation point is not interior to K") from exc


def default_translations(K: Body) -> list:
    """Vertex centroid of ``K`` plus one small step along each axis."""
    c = polytope_vertices(K).mean(axis=0)
    A = polytope_rows(_translate(K, c))
    depth = np.min(1.0 / np.linalg.norm(A, axis=1))
    step = 0.1 * depth
    return [c] + [c + step * e for e in np.eye(K.dim)]


def nonsym_bounds(K: Body, translations=None):
    """Bounds for possibly non-symmetric polytopes.

    Returns ``(lower, upper)`` where ``lower`` is the best
    ``1 / sup_{a, b in (K - t)°} <J a, b>`` over the candidate translations
    (a lower bound for the EHZ capacity) and ``upper`` is
    ``1 / ||J||_{(K-K)° -> (K-K)}`` (an upper bound for the linearized
    cylindrical capacity).
    """
    if not K.is_polytope:
        raise TypeError("nonsym_bounds is implemented for polytopes")
    if translations is None:
        translations = default_translations(K)
    translations = [np.asarray(t, dtype=float) for t in translations]
    if not translations:
        raise ValueError("need at least one translation")
    lower = max(1.0 / bilinear_sup(_translate(K, t)).value for t in translations)
    upper = 1.0 / norm_J(difference_body(K)).value
    return lower, upper
