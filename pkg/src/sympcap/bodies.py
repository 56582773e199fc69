"""
Convex bodies with the origin in their interior.

Every body answers four oracle queries on points of R^d:

``gauge(x)``
    Minkowski functional ``g_K(x) = inf{r : x in rK}``.
``support(u)``
    ``h_K(u) = sup{<x, u> : x in K}``; equals the gauge of the polar body.
``support_point(u)``
    a maximizer of ``<x, u>`` over ``K``.
``gauge_gradient(x)``
    a subgradient of ``g_K`` at ``x``, i.e. a support point of ``K°`` in
    direction ``x``.

Representations: :class:`HPolytope` (rows normalized so that
``K = {x : A x <= 1}``), :class:`VPolytope`, :class:`Ellipsoid`,
:class:`LinearImage`, :class:`Product`, :class:`SmoothedPolytope` and the
generic dual :class:`PolarBody`.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize
from scipy.spatial import ConvexHull

from . import planar
from .ddm import MAX_DIM, MAX_ROWS, vertex_enumerate_rows
from .errors import LPError, RepresentationError, SizeError, SmoothnessError
from .lp import OPTIMAL, linprog_max, solve_lp

SHADOW_SAMPLES = 4096


def _rows_of(x, d):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != d:
        raise ValueError(f"expected vectors of dimension {d}, got shape {x.shape}")
    return x


def _rowwise(f, x):
    """Apply a per-vector function to an array of shape (d,) or (k, d)."""
    if x.ndim == 1:
        return f(x)
    return np.array([f(xi) for xi in x])


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class Body:
    """Abstract convex body in R^d with the origin in its interior."""

    dim: int
    symmetric: bool = False
    is_polytope: bool = False
    is_smooth: bool = False

    def gauge(self, x):
        raise NotImplementedError

    def support(self, u):
        raise NotImplementedError

    def support_point(self, u):
        raise NotImplementedError

    def gauge_gradient(self, x):
        raise NotImplementedError

    def gauge_hessian(self, x):
        raise SmoothnessError(f"{type(self).__name__} has no Hessian; smooth it first")

    def polar(self) -> "Body":
        return PolarBody(self)

    def scaled(self, lam: float) -> "Body":
        return LinearImage(self, lam * np.eye(self.dim))

    def contains(self, x, tol=1e-9):
        return self.gauge(x) <= 1.0 + tol

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class HPolytope(Body):
    """``{x : <a_i, x> <= 1 for all rows a_i}``."""

    is_polytope = True

    def __init__(self, rows):
        A = np.atleast_2d(np.asarray(rows, dtype=float))
        if A.ndim != 2 or A.shape[0] < A.shape[1] + 1:
            raise RepresentationError("an H-polytope in R^d needs at least d + 1 rows")
        if not np.isfinite(A).all():
            raise RepresentationError("rows must be finite")
        self.rows = _readonly(A)
        self.dim = A.shape[1]

    @classmethod
    def from_inequalities(cls, A, b):
        """Build from ``A x <= b``; requires ``b > 0`` (origin interior)."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.asarray(b, dtype=float).ravel()
        if (b <= 0).any():
            raise RepresentationError("origin is not interior: some offset b_i <= 0")
        return cls(A / b[:, None])

    @cached_property
    def symmetric(self):
        R = np.round(self.rows, 9)
        S = {tuple(r) for r in R}
        return all(tuple(-r + 0.0) in S for r in R)

    @cached_property
    def vertices(self):
        return vertex_enumerate_rows(self.rows)

    def _enumerable(self):
        return self.dim <= MAX_DIM and len(self.rows) <= MAX_ROWS

    def gauge(self, x):
        x = _rows_of(x, self.dim)
        return np.maximum(x @ self.rows.T, 0.0).max(axis=-1)

    def gauge_gradient(self, x):
        x = _rows_of(x, self.dim)
        return self.rows[np.argmax(x @ self.rows.T, axis=-1)]

    def support(self, u):
        u = _rows_of(u, self.dim)
        if self._enumerable():
            return (u @ self.vertices.T).max(axis=-1)
        return _rowwise(lambda v: self._support_lp(v)[0], u)

    def support_point(self, u):
        u = _rows_of(u, self.dim)
        if self._enumerable():
            return self.vertices[np.argmax(u @ self.vertices.T, axis=-1)]
        return _rowwise(lambda v: self._support_lp(v)[1], u)

    def _support_lp(self, u):
        # min 1.lam  s.t.  A^T lam = u, lam >= 0 ; duals give the maximizer
        res = solve_lp(np.ones(len(self.rows)), self.rows.T, u)
        if res.status != OPTIMAL:
            raise LPError(f"support LP {res.status}: polytope unbounded?")
        return res.fun, res.duals

    def polar(self):
        return VPolytope(self.rows)

    def scaled(self, lam):
        return HPolytope(self.rows / lam)

    def __repr__(self):
        return f"HPolytope(dim={self.dim}, rows={len(self.rows)})"


class VPolytope(Body):
    """Convex hull of a finite point set containing 0 in its interior."""

    is_polytope = True

    def __init__(self, vertices, check=True):
        V = np.atleast_2d(np.asarray(vertices, dtype=float))
        self.points = _readonly(V)
        self.dim = V.shape[1]
        if check and not origin_interior(V):
            raise RepresentationError("origin is not interior to the convex hull of the vertices")

    @property
    def vertices(self):
        return self.points

    @cached_property
    def rows(self):
        """Facet rows, obtained by enumerating the vertices of the polar."""
        return vertex_enumerate_rows(self.points)

    @cached_property
    def symmetric(self):
        P = np.round(self.points, 9)
        S = {tuple(p) for p in P}
        if all(tuple(-p + 0.0) in S for p in P):
            return True
        return bool((self.gauge(-self.points) <= 1 + 1e-9).all())

    def support(self, u):
        u = _rows_of(u, self.dim)
        return (u @ self.points.T).max(axis=-1)

    def support_point(self, u):
        u = _rows_of(u, self.dim)
        return self.points[np.argmax(u @ self.points.T, axis=-1)]

    def _gauge_lp(self, x):
        res = solve_lp(np.ones(len(self.points)), self.points.T, x)
        if res.status != OPTIMAL:
            raise LPError(f"gauge LP {res.status}")
        return res.fun, res.duals

    def gauge(self, x):
        x = _rows_of(x, self.dim)
        return _rowwise(lambda v: self._gauge_lp(v)[0], x)

    def gauge_gradient(self, x):
        x = _rows_of(x, self.dim)
        return _rowwise(lambda v: self._gauge_lp(v)[1], x)

    def polar(self):
        return HPolytope(self.points)

    def scaled(self, lam):
        return VPolytope(lam * self.points, check=False)

    def __repr__(self):
        return f"VPolytope(dim={self.dim}, points={len(self.points)})"


class Ellipsoid(Body):
    """``{x : x^T Q x <= 1}`` with ``Q`` symmetric positive definite."""

    symmetric = True
    is_smooth = True

    def __init__(self, Q):
        Q = np.asarray(Q, dtype=float)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise RepresentationError("Q must be square")
        if not np.allclose(Q, Q.T, atol=1e-12 * np.abs(Q).max()):
            raise RepresentationError("Q must be symmetric")
        Q = 0.5 * (Q + Q.T)
        if np.linalg.eigvalsh(Q).min() <= 0:
            raise RepresentationError("Q must be positive definite")
        self.Q = _readonly(Q)
        self.Qinv = _readonly(np.linalg.inv(Q))
        self.dim = Q.shape[0]

    def gauge(self, x):
        x = _rows_of(x, self.dim)
        return np.sqrt(np.einsum("...i,ij,...j->...", x, self.Q, x))

    def gauge_gradient(self, x):
        x = _rows_of(x, self.dim)
        g = self.gauge(x)
        return (x @ self.Q) / np.asarray(g)[..., None]

    def gauge_hessian(self, x):
        x = _rows_of(x, self.dim)
        g = np.asarray(self.gauge(x))[..., None, None]
        Qx = (x @ self.Q)[..., :, None]
        return self.Q / g - Qx * np.swapaxes(Qx, -1, -2) / g ** 3

    def support(self, u):
        u = _rows_of(u, self.dim)
        return np.sqrt(np.einsum("...i,ij,...j->...", u, self.Qinv, u))

    def support_point(self, u):
        u = _rows_of(u, self.dim)
        return (u @ self.Qinv) / np.asarray(self.support(u))[..., None]

    def polar(self):
        return Ellipsoid(self.Qinv)

    def scaled(self, lam):
        return Ellipsoid(self.Q / lam ** 2)

    def __repr__(self):
        return f"Ellipsoid(dim={self.dim})"


class LinearImage(Body):
    """``A K`` for an invertible matrix ``A``."""

    def __init__(self, base: Body, A):
        A = np.asarray(A, dtype=float)
        if A.shape != (base.dim, base.dim):
            raise RepresentationError("A must be square of the base dimension")
        if abs(np.linalg.det(A)) < 1e-14 or np.linalg.cond(A) > 1e12:
            raise RepresentationError("A must be invertible")
        self.base = base
        self.A = _readonly(A)
        self.Ainv = _readonly(np.linalg.inv(A))
        self.dim = base.dim
        self.symmetric = base.symmetric
        self.is_polytope = base.is_polytope
        self.is_smooth = base.is_smooth

    def gauge(self, x):
        x = _rows_of(x, self.dim)
        return self.base.gauge(x @ self.Ainv.T)

    def gauge_gradient(self, x):
        x = _rows_of(x, self.dim)
        return self.base.gauge_gradient(x @ self.Ainv.T) @ self.Ainv

    def gauge_hessian(self, x):
        x = _rows_of(x, self.dim)
        H = self.base.gauge_hessian(x @ self.Ainv.T)
        return self.Ainv.T @ H @ self.Ainv

    def support(self, u):
        u = _rows_of(u, self.dim)
        return self.base.support(u @ self.A)

    def support_point(self, u):
        u = _rows_of(u, self.dim)
        return self.base.support_point(u @ self.A) @ self.A.T

    def polar(self):
        return LinearImage(self.base.polar(), self.Ainv.T)

    def scaled(self, lam):
        return LinearImage(self.base, lam * self.A)

    def __repr__(self):
        return f"LinearImage({self.base!r})"


class Product(Body):
    """Cartesian product ``left x right`` with coordinates concatenated.

    With ``left`` in R^n_q and ``right`` in R^n_p this is a Lagrangian
    product such as ``B_inf^n x B_1^n``.
    """

    def __init__(self, left: Body, right: Body):
        if (left.dim + right.dim) % 2:
            raise RepresentationError("product dimension must be even")
        self.left, self.right = left, right
        self.dim = left.dim + right.dim
        self.symmetric = left.symmetric and right.symmetric
        self.is_polytope = left.is_polytope and right.is_polytope

    def _split(self, x):
        x = _rows_of(x, self.dim)
        return x[..., :self.left.dim], x[..., self.left.dim:]

    def gauge(self, x):
        a, b = self._split(x)
        return np.maximum(self.left.gauge(a), self.right.gauge(b))

    def gauge_gradient(self, x):
        a, b = self._split(x)
        ga, gb = self.left.gauge(a), self.right.gauge(b)
        with np.errstate(invalid="ignore", divide="ignore"):  # the unused factor may sit at 0
            da = self.left.gauge_gradient(a)
            db = self.right.gauge_gradient(b)
        use_left = np.asarray(ga >= gb)[..., None]
        return np.concatenate([np.where(use_left, da, 0.0), np.where(use_left, 0.0, db)], axis=-1)

    def support(self, u):
        a, b = self._split(u)
        return self.left.support(a) + self.right.support(b)

    def support_point(self, u):
        a, b = self._split(u)
        return np.concatenate([self.left.support_point(a), self.right.support_point(b)], axis=-1)

    def polar(self):
        if self.is_polytope:
            # polar of a product is the free sum of the polars
            Vl = polytope_vertices(self.left.polar())
            Vr = polytope_vertices(self.right.polar())
            return VPolytope(np.vstack([np.hstack([Vl, np.zeros((len(Vl), self.right.dim))]),
                                        np.hstack([np.zeros((len(Vr), self.left.dim)), Vr])]))
        return PolarBody(self)

    def scaled(self, lam):
        return Product(self.left.scaled(lam), self.right.scaled(lam))

    def __repr__(self):
        return f"Product({self.left!r}, {self.right!r})"


class PolarBody(Body):
    """Generic polar ``K°`` of a body given through its oracles."""

    def __init__(self, base: Body):
        self.base = base
        self.dim = base.dim
        self.symmetric = base.symmetric
        self.is_polytope = base.is_polytope

    def gauge(self, x):
        return self.base.support(x)

    def support(self, u):
        return self.base.gauge(u)

    def support_point(self, u):
        return self.base.gauge_gradient(u)

    def gauge_gradient(self, x):
        return self.base.support_point(x)

    def polar(self):
        return self.base


def _numeric_support(gauge, grad, u, basis=None):
    """``max <u, x>`` over ``{g(x) <= 1}`` (optionally inside ``span(basis)``).

    Maximizes the degree-0 homogeneous ratio ``<u, x> / g(x)`` with BFGS.
    """
    u = np.asarray(u, dtype=float)
    N = np.eye(len(u)) if basis is None else basis
    c = N.T @ u
    if np.linalg.norm(c) < 1e-15:
        return 0.0, np.zeros_like(u)

    def f(y):
        x = N @ y
        g = gauge(x)
        val = c @ y
        return -val / g, -(c / g - val * (N.T @ grad(x)) / g ** 2)

    y0 = c / np.linalg.norm(c)
    res = minimize(f, y0, jac=True, method="BFGS", options={"gtol": 1e-12, "maxiter": 500})
    x = N @ res.x
    x = x / gauge(x)
    return float(u @ x), x


class SmoothedPolytope(Body):
    """Smooth inner approximation of a symmetric polytope.

    ``g(x) = (sum_i |<a_i, x>|^p)^(1/p)`` over one row of each antipodal
    pair, ``p = 2m`` (default ``m = 8``). Since ``g >= max_i |<a_i, x>|``
    the smoothed body lies inside the polytope and converges to it as
    ``m`` grows.
    """

    symmetric = True
    is_smooth = True

    def __init__(self, rows, m: int = 8):
        A = np.atleast_2d(np.asarray(rows, dtype=float))
        keep = []
        for r in A:
            if not any(np.allclose(r, -k, atol=1e-9) or np.allclose(r, k, atol=1e-9) for k in keep):
                keep.append(r)
        self.rows = _readonly(np.array(keep))
        self.power = 2 * int(m)
        self.m = int(m)
        self.dim = A.shape[1]

    @classmethod
    def from_body(cls, K: Body, m: int = 8):
        if not K.symmetric:
            raise RepresentationError("smoothing is defined for symmetric polytopes")
        return cls(polytope_rows(K), m)

    def _parts(self, x):
        s = x @ self.rows.T
        smax = np.abs(s).max(axis=-1, keepdims=True)
        smax = np.where(smax == 0, 1.0, smax)
        t = s / smax  # scaled to avoid overflow
        S = (t ** self.power).sum(axis=-1)
        return s, smax[..., 0], t, S

    def gauge(self, x):
        x = _rows_of(x, self.dim)
        _, smax, _, S = self._parts(x)
        return smax * S ** (1.0 / self.power)

    def gauge_gradient(self, x):
        x = _rows_of(x, self.dim)
        _, _, t, S = self._parts(x)
        p = self.power
        u = (t ** (p - 1)) @ self.rows
        return u * (S ** (1.0 / p - 1.0))[..., None]

    def gauge_hessian(self, x):
        x = _rows_of(x, self.dim)
        _, smax, t, S = self._parts(x)
        p = self.power
        u = (t ** (p - 1)) @ self.rows
        W = t ** (p - 2)
        M = np.einsum("...k,ki,kj->...ij", W, self.rows, self.rows)
        a = ((1 - p) * S ** (1.0 / p - 2.0) / smax)[..., None, None]
        b = ((p - 1) * S ** (1.0 / p - 1.0) / smax)[..., None, None]
        return a * u[..., :, None] * u[..., None, :] + b * M

    def support(self, u):
        u = _rows_of(u, self.dim)
        return _rowwise(lambda v: _numeric_support(self.gauge, self.gauge_gradient, v)[0], u)

    def support_point(self, u):
        u = _rows_of(u, self.dim)
        return _rowwise(lambda v: _numeric_support(self.gauge, self.gauge_gradient, v)[1], u)

    def scaled(self, lam):
        return SmoothedPolytope(self.rows / lam, self.m)

    def __repr__(self):
        return f"SmoothedPolytope(dim={self.dim}, rows={len(self.rows)}, m={self.m})"


class SectionBody:
    """``K_v = K ∩ v^perp`` exposed through its (semi-norm) support function."""

    def __init__(self, parent: Body, normal):
        normal = np.asarray(normal, dtype=float)
        if np.linalg.norm(normal) == 0:
            raise ValueError("section normal must be nonzero")
        self.parent = parent
        self.normal = normal

    def support(self, w):
        return section_support(self.parent, self.normal, w)


# ---------------------------------------------------------------- constructors

def hypercube(dim: int, radius: float = 1.0) -> HPolytope:
    """``[-radius, radius]^dim``."""
    I = np.eye(dim) / radius
    return HPolytope(np.vstack([I, -I]))


def cube(n: int, radius: float = 1.0) -> HPolytope:
    """The cube ``Q = [-radius, radius]^{2n}``."""
    return hypercube(2 * n, radius)


def cross_polytope(dim: int, radius: float = 1.0) -> VPolytope:
    """``B_1^dim(radius) = conv{±radius e_i}``."""
    I = radius * np.eye(dim)
    return VPolytope(np.vstack([I, -I]))


def ball(n: int, radius: float = 1.0) -> Ellipsoid:
    return Ellipsoid(np.eye(2 * n) / radius ** 2)


def ellipsoid_radii(radii) -> Ellipsoid:
    """``{sum_i (q_i^2 + p_i^2) / r_i^2 <= 1}``."""
    r = np.asarray(radii, dtype=float)
    if (r <= 0).any():
        raise RepresentationError("radii must be positive")
    d = np.concatenate([1 / r ** 2, 1 / r ** 2])
    return Ellipsoid(np.diag(d))


def random_symmetric_polytope(dim: int, k: int, rng) -> VPolytope:
    """``conv{±x_1, ..., ±x_k}`` for Gaussian ``x_i`` (needs ``k >= dim``)."""
    while True:
        P = rng.standard_normal((k, dim))
        if np.linalg.matrix_rank(P) == dim:
            return VPolytope(np.vstack([P, -P]))


# ---------------------------------------------------------------- helpers

def origin_interior(V, tol=1e-12) -> bool:
    """Whether 0 lies in the interior of ``conv(V)`` (LP certificate)."""
    V = np.atleast_2d(np.asarray(V, dtype=float))
    k, d = V.shape
    if k < d + 1 or np.linalg.matrix_rank(V) < d:
        return False
    # max t  s.t.  sum (t + mu_i) v_i = 0, k t + sum mu_i = 1, t, mu >= 0
    A = np.vstack([np.hstack([V.sum(axis=0)[:, None], V.T]),
                   np.hstack([[k], np.ones(k)])])
    b = np.concatenate([np.zeros(d), [1.0]])
    c = np.zeros(k + 1)
    c[0] = -1.0
    res = solve_lp(c, A, b)
    return res.status == OPTIMAL and -res.fun > tol


def polytope_vertices(K: Body) -> np.ndarray:
    """Vertex (or generating point) array of a polytopal body."""
    if isinstance(K, HPolytope):
        return K.vertices
    if isinstance(K, VPolytope):
        return K.points
    if isinstance(K, LinearImage) and K.is_polytope:
        return polytope_vertices(K.base) @ K.A.T
    if isinstance(K, Product) and K.is_polytope:
        L, R = polytope_vertices(K.left), polytope_vertices(K.right)
        return np.array([np.concatenate([a, b]) for a, b in itertools.product(L, R)])
    if isinstance(K, PolarBody) and K.is_polytope:
        return polytope_rows(K.base)
    raise TypeError(f"{K!r} is not a polytope")


def polytope_rows(K: Body) -> np.ndarray:
    """Normalized H-rows (``K = {x : A x <= 1}``) of a polytopal body."""
    if isinstance(K, (HPolytope, VPolytope)):
        return K.rows
    if isinstance(K, LinearImage) and K.is_polytope:
        return polytope_rows(K.base) @ K.Ainv
    if isinstance(K, Product) and K.is_polytope:
        L, R = polytope_rows(K.left), polytope_rows(K.right)
        return np.vstack([np.hstack([L, np.zeros((len(L), K.right.dim))]),
                          np.hstack([np.zeros((len(R), K.left.dim)), R])])
    if isinstance(K, PolarBody) and K.is_polytope:
        return polytope_vertices(K.base)
    raise TypeError(f"{K!r} is not a polytope")


def ellipsoid_matrix(K: Body):
    """``Q`` with ``K = {x^T Q x <= 1}`` if ``K`` is an ellipsoid, else None."""
    if isinstance(K, Ellipsoid):
        return np.array(K.Q)
    if isinstance(K, LinearImage):
        Q = ellipsoid_matrix(K.base)
        if Q is not None:
            return K.Ainv.T @ Q @ K.Ainv
    if isinstance(K, PolarBody):
        Q = ellipsoid_matrix(K.base)
        if Q is not None:
            return np.linalg.inv(Q)
    return None


def to_hpolytope(K: Body) -> HPolytope:
    return K if isinstance(K, HPolytope) else HPolytope(polytope_rows(K))


def to_vpolytope(K: Body) -> VPolytope:
    return K if isinstance(K, VPolytope) else VPolytope(polytope_vertices(K), check=False)


# ---------------------------------------------------------------- operations

def gauge(K: Body, x):
    return K.gauge(x)


def support(K: Body, u):
    return K.support(u)


def polar(K: Body) -> Body:
    return K.polar()


def vertex_enumerate(K: HPolytope) -> VPolytope:
    """V-representation of an H-polytope (double description)."""
    return VPolytope(vertex_enumerate_rows(K.rows), check=False)


def section_support(K: Body, v, w) -> float:
    """Support function of the section ``K ∩ v^perp`` evaluated at ``w``."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if np.linalg.norm(v) == 0:
        raise ValueError("section normal must be nonzero")
    Q = ellipsoid_matrix(K)
    if Q is not None:
        N = null_space(v[None, :])
        c = N.T @ w
        return float(np.sqrt(c @ np.linalg.solve(N.T @ Q @ N, c)))
    if isinstance(K, LinearImage):
        return section_support(K.base, K.A.T @ v, K.A.T @ w)
    if isinstance(K, VPolytope):
        V = K.points
        k = len(V)
        # x = sum lam_i v_i with sum lam_i <= 1 (0 in K), <v, x> = 0
        A = np.vstack([np.concatenate([V @ v, [0.0]]), np.ones(k + 1)])
        res = solve_lp(-np.concatenate([V @ w, [0.0]]), A, [0.0, 1.0])
        if res.status != OPTIMAL:
            raise LPError(f"section LP {res.status}")
        return max(0.0, -res.fun)
    if K.is_polytope:
        A = polytope_rows(K)
        res = linprog_max(w, A_ub=A, b_ub=np.ones(len(A)), A_eq=v[None, :], b_eq=[0.0])
        if res.status != OPTIMAL:
            raise LPError(f"section LP {res.status}")
        return max(0.0, res.fun)
    if K.is_smooth:
        N = null_space(v[None, :])
        return _numeric_support(K.gauge, K.gauge_gradient, w, basis=N)[0]
    raise TypeError(f"no section support for {K!r}")


def _plane_rows(L, n):
    return np.asarray(L)[[0, n], :]


def shadow_area(K: Body, S, samples: int = SHADOW_SAMPLES) -> float:
    """Area of the projection of ``S(K)`` onto the (q1, p1) plane.

    ``S`` is a :class:`~sympcap.symplin.SymplecticMap` or a bare matrix; the
    translation part does not affect the area.
    """
    L = getattr(S, "linear", S)
    L = np.asarray(L, dtype=float)
    n = K.dim // 2
    P = _plane_rows(L, n)
    Q = ellipsoid_matrix(K)
    if Q is not None:
        Sigma = P @ np.linalg.solve(Q, P.T)
        return float(np.pi * np.sqrt(np.linalg.det(Sigma)))
    if K.is_polytope:
        return planar.hull_area(polytope_vertices(K) @ P.T)
    # support points of K in the 2D directions give exact boundary points of the shadow
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    U = np.column_stack([np.cos(theta), np.sin(theta)]) @ P
    X = K.support_point(U)
    return planar.hull_area(X @ P.T)


def difference_body(K: Body) -> Body:
    """Minkowski difference body ``K - K = K + (-K)``."""
    Q = ellipsoid_matrix(K)
    if Q is not None:
        return Ellipsoid(Q / 4.0)
    if isinstance(K, LinearImage):
        return LinearImage(difference_body(K.base), K.A)
    if K.is_polytope:
        V = polytope_vertices(K)
        D = (V[:, None, :] - V[None, :, :]).reshape(-1, K.dim)
        D = np.unique(np.round(D, 12), axis=0)
        D = D[np.linalg.norm(D, axis=1) > 0]
        if K.dim == 2:
            D = planar.hull(D)
        elif K.dim <= 8:
            D = D[ConvexHull(D).vertices]
        else:
            raise SizeError("difference body limited to dim <= 8")
        return VPolytope(D)
    raise TypeError(f"difference body not available for {K!r}")


rs_planar_check = planar.rs_planar_check
