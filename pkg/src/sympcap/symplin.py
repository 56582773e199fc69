"""
Fixed symplectic linear algebra on R^{2n}.

Coordinates are ordered ``(q_1, ..., q_n, p_1, ..., p_n)`` and the complex
structure acts as ``J(q, p) = (-p, q)``, so that

    J = [[0, -I],
         [I,  0]],        omega(v, u) = <v, J u>.

With this convention ``omega(e_p1, e_q1) = +1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NormalizationError, RankError

EPS_SP = 1e-9
CAYLEY_COND_CAP = 1e12


def _as_vector2n(v, name="v"):
    v = np.asarray(v, dtype=float)
    if v.ndim < 1 or v.shape[-1] < 2 or v.shape[-1] % 2:
        raise ValueError(f"{name} must have even length >= 2, got shape {v.shape}")
    return v


def half_dim(v) -> int:
    """Return n for a vector (or matrix) living on R^{2n}."""
    d = np.shape(v)[-1]
    if d % 2:
        raise ValueError(f"dimension {d} is odd")
    return d // 2


def J_matrix(n: int) -> np.ndarray:
    """The 2n x 2n matrix of the standard complex structure."""
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, -I], [I, Z]])


def apply_J(v):
    """Return ``J v``; works row-wise on arrays of shape (..., 2n)."""
    v = _as_vector2n(v)
    n = v.shape[-1] // 2
    return np.concatenate([-v[..., n:], v[..., :n]], axis=-1)


def omega(v, u) -> float:
    """Symplectic form ``omega(v, u) = <v, J u>``."""
    v = _as_vector2n(v, "v")
    u = _as_vector2n(u, "u")
    if v.shape[-1] != u.shape[-1]:
        raise ValueError(f"dimension mismatch: {v.shape[-1]} vs {u.shape[-1]}")
    return np.sum(v * apply_J(u), axis=-1)


def basis_vector(n: int, name: str) -> np.ndarray:
    """Unit vector of R^{2n} named like ``"q1"`` or ``"p3"`` (1-based)."""
    kind, idx = name[0], int(name[1:])
    if kind not in "qp" or not 1 <= idx <= n:
        raise ValueError(f"bad basis name {name!r} for n={n}")
    e = np.zeros(2 * n)
    e[idx - 1 + (n if kind == "p" else 0)] = 1.0
    return e


def symplectic_residual(L) -> float:
    """Max-norm of ``L^T J L - J``."""
    L = np.asarray(L, dtype=float)
    Jm = J_matrix(half_dim(L))
    return float(np.max(np.abs(L.T @ Jm @ L - Jm)))


@dataclass(frozen=True, eq=False)
class SymplecticMap:
    """Affine symplectic map ``x -> L x + t``.

    The linear part is validated against ``L^T J L = J`` at construction;
    pass ``tol=None`` to skip validation (used by search code that filters
    candidates itself).
    """

    linear: np.ndarray
    translation: np.ndarray = None
    tol: float | None = field(default=EPS_SP, repr=False)

    def __post_init__(self):
        L = np.array(self.linear, dtype=float)
        if L.ndim != 2 or L.shape[0] != L.shape[1] or L.shape[0] % 2:
            raise ValueError(f"linear part must be 2n x 2n, got {L.shape}")
        t = np.zeros(L.shape[0]) if self.translation is None else np.array(self.translation, dtype=float)
        if t.shape != (L.shape[0],):
            raise ValueError("translation has wrong shape")
        L.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "linear", L)
        object.__setattr__(self, "translation", t)
        if self.tol is not None:
            res = symplectic_residual(L)
            if res > self.tol:
                raise DomainError(f"linear part is not symplectic (residual {res:.3e})")

    @classmethod
    def identity(cls, n: int) -> "SymplecticMap":
        return cls(np.eye(2 * n))

    @property
    def n(self) -> int:
        return self.linear.shape[0] // 2

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.linear.T + self.translation

    def compose(self, other: "SymplecticMap") -> "SymplecticMap":
        """``self o other``."""
        return SymplecticMap(self.linear @ other.linear,
                             self.linear @ other.translation + self.translation,
                             tol=self.tol)

    def residual(self) -> float:
        return symplectic_residual(self.linear)


def is_symplectic(S, tol: float = EPS_SP) -> bool:
    """True iff the linear part of ``S`` satisfies ``||L^T J L - J||_max <= tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    L = S.linear if isinstance(S, SymplecticMap) else np.asarray(S, dtype=float)
    return symplectic_residual(L) <= tol


def cayley_symplectic(M, cond_cap: float = CAYLEY_COND_CAP) -> SymplecticMap:
    """Cayley chart ``M -> (I - JM/2)^{-1} (I + JM/2)`` for symmetric ``M``.

    ``JM`` is Hamiltonian for symmetric ``M``, hence the image is symplectic.
    Raises :class:`DomainError` when ``I - JM/2`` is near singular.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("M must be square")
    if not np.allclose(M, M.T, atol=1e-12 * max(1.0, np.abs(M).max())):
        raise ValueError("M must be symmetric")
    A = 0.5 * J_matrix(half_dim(M)) @ M
    I = np.eye(M.shape[0])
    lhs = I - A
    if np.linalg.cond(lhs) > cond_cap:
        raise DomainError("I - JM/2 is singular: outside the Cayley chart")
    return SymplecticMap(np.linalg.solve(lhs, I + A))


def random_symmetric(dim: int, rng, scale: float = 1.0) -> np.ndarray:
    G = rng.standard_normal((dim, dim))
    return scale * 0.5 * (G + G.T)


def random_symplectic(n: int, rng, scale: float = 1.0) -> SymplecticMap:
    """Seeded random element of Sp(2n) via the Cayley chart."""
    while True:
        try:
            return cayley_symplectic(random_symmetric(2 * n, rng, scale))
        except DomainError:  # pragma: no cover - measure zero
            continue


def complete_to_symplectic(v, w, tol: float = 1e-9):
    """Find ``S`` in Sp(2n) with ``S^T e = v`` and ``S^T J e = sign * w``.

    ``e`` is the unit vector of the q1 axis. Since ``omega(S^T e, S^T J e)``
    equals ``-1`` for every symplectic ``S``, the pair is used as given when
    ``omega(v, w) = -1`` and ``w`` is negated when ``omega(v, w) = +1``.

    Returns
    -------
    S : SymplecticMap
    sign : int
        +1 or -1, the factor applied to ``w``.
    """
    v = _as_vector2n(v, "v")
    w = _as_vector2n(w, "w")
    if v.shape != w.shape or v.ndim != 1:
        raise ValueError("v and w must be vectors of equal length")
    if np.linalg.matrix_rank(np.vstack([v, w]), tol=1e-12 * max(1.0, np.abs(v).max(), np.abs(w).max())) < 2:
        raise RankError("v and w are linearly dependent")
    om = float(omega(v, w))
    if abs(abs(om) - 1.0) > tol:
        raise NormalizationError(f"|omega(w, v)| = {abs(om):.6g}, expected 1")
    sign = 1 if om < 0 else -1
    w = sign * w
    n = v.shape[0] // 2

    # rescaling w absorbs the tolerated deviation of |omega| from 1
    es, fs = [v.copy()], [w / abs(om)]

    def project(x):
        for e, f in zip(es, fs):
            x = x + omega(x, f) * e - omega(x, e) * f
        return x

    candidates = list(np.eye(2 * n))
    for _ in range(n - 1):
        proj = [project(c) for c in candidates]
        k = int(np.argmax([np.linalg.norm(p) for p in proj]))
        e = proj.pop(k)
        candidates.pop(k)
        e = project(e)  # second pass for stability
        e /= np.linalg.norm(e)
        proj = [project(c) for c in candidates]
        weights = [abs(omega(e, p)) for p in proj]
        j = int(np.argmax(weights))
        if weights[j] < 1e-12:
            raise RankError("symplectic completion broke down")
        y = proj.pop(j)
        candidates.pop(j)
        f = -y / omega(e, y)
        es.append(e)
        fs.append(f)
    S = np.vstack(es + fs)
    return SymplecticMap(S), sign
