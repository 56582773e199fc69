"""
Linearized capacities.

``c̄_lin(K) = inf_S Area(π(S K))`` over linear symplectic ``S`` (``π`` is the
projection to the (q1, p1) plane) and ``c_lin(K) = sup_S {π r² : S B(r) ⊆ K}``.
Both are searched over the Cayley chart of Sp(2n); the search only ever
returns values attained by an explicit map, so ``minimize_shadow`` gives an
upper estimate of ``c̄_lin`` and ``lin_gromov_estimate`` a lower estimate of
``c_lin``.

Also here: the product bound ``Area ≤ 4 ||S^T e||_{K°} ||S^T J e||_{K_v°}``,
the explicit cylinder witness achieving ``Area ≤ 4 / ||J||``, and the
rotated cube whose linearized Gromov width stays at ``π``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag
from scipy.optimize import minimize

from .bodies import (Body, LinearImage, cube, ellipsoid_matrix, hypercube, polytope_rows,
                     section_support, shadow_area)
from .errors import DomainError, LemmaViolation, SymmetryError
from .normj import norm_J
from .symplin import SymplecticMap, cayley_symplectic, complete_to_symplectic, random_symmetric

RESTARTS = 16
EVALS_PER_RESTART = 2000
SIMPLEX_STEP = 0.2


@dataclass
class Witness:
    """A symplectic map together with its exact shadow and product bound."""

    map: SymplecticMap
    shadow: float
    product_bound: float
    v_used: np.ndarray
    w_used: np.ndarray


@dataclass
class BallWitness:
    """A symplectic map ``S`` with ``S B(radius) ⊆ K``."""

    map: SymplecticMap
    radius: float

    @property
    def value(self) -> float:
        return float(np.pi * self.radius ** 2)


@dataclass
class SearchResult:
    best: Witness | BallWitness
    history: list = field(default_factory=list)  # (evaluation index, best value)
    seed: int = 0
    budget_used: int = 0
    exhausted: bool = False

    @property
    def value(self) -> float:
        b = self.best
        return b.shadow if isinstance(b, Witness) else b.value


@dataclass
class SearchConfig:
    restarts: int = RESTARTS
    evals: int = EVALS_PER_RESTART  # per restart
    seed: int = 0
    tol_chain: float = 1e-6


def _require_symmetric(K):
    if not K.symmetric:
        raise SymmetryError("this operation needs a centrally symmetric body")


def _linear(S):
    return np.asarray(getattr(S, "linear", S), dtype=float)


def rs_product_bound(K: Body, S) -> float:
    """``4 ||S^T e||_{K°} ||S^T J e||_{K_v°}`` with ``v = S^T e``.

    ``e`` is the q1 unit vector, so ``S^T e`` and ``S^T J e`` are the q1 and
    p1 rows of ``S``.
    """
    _require_symmetric(K)
    L = _linear(S)
    n = K.dim // 2
    v, w = L[0], L[n]
    return float(4.0 * K.support(v) * section_support(K, v, w))


def _witness(K, S):
    L = _linear(S)
    n = K.dim // 2
    return Witness(S, shadow_area(K, S), rs_product_bound(K, S), L[0].copy(), L[n].copy())


def cylinder_witness(K: Body) -> Witness:
    """The explicit map behind ``c̄_lin(K) <= 4 / ||J||``.

    With ``v, u`` the maximizing pair of ``<J v, u>`` over ``K°`` (so that
    ``g_K(J v) = ||J||`` and ``u`` is a supporting functional at ``J v``),
    take ``S^T e = v / ||J||`` and ``S^T J e = ±u``. Then ``|omega| = 1`` and the
    product bound is at most ``4 / ||J||``.
    """
    _require_symmetric(K)
    nj = norm_J(K)
    v = nj.witness_v / nj.value
    w = nj.witness_u
    S, _ = complete_to_symplectic(v, w, tol=1e-6)
    return _witness(K, S)


def _objective_pool(K, warm, fn, cfg, maximize=False):
    """Nelder-Mead over ``M -> cayley(M) @ L_best`` with restarts.

    ``fn(L)`` evaluates a linear map; the chart is re-centred on the best
    map at every restart. Returns ``(best_L, best_value, history, evals, exhausted)``.
    """
    rng = np.random.default_rng(cfg.seed)
    dim = K.dim
    iu = np.triu_indices(dim)
    sign = -1.0 if maximize else 1.0
    best_L, best_val = None, np.inf
    history = []
    count = 0
    exhausted = False

    def consider(L, val):
        nonlocal best_L, best_val
        if best_L is None or val < best_val - 1e-15 * max(1.0, abs(best_val)):
            best_L, best_val = L, val
            history.append((count, sign * val))

    for L in warm:
        count += 1
        consider(L, sign * fn(L))

    for r in range(cfg.restarts):
        center = best_L
        # restart 0 explores around the warm start, later ones from a random offset
        x0 = np.zeros(len(iu[0])) if r == 0 else random_symmetric(dim, rng, 0.1 / (1 + r % 4))[iu]

        def f(x, center=center):
            nonlocal count
            count += 1
            M = np.zeros((dim, dim))
            M[iu] = x
            M = M + np.triu(M, 1).T
            try:
                L = cayley_symplectic(M).linear @ center
            except DomainError:
                return np.inf
            val = sign * fn(L)
            if np.isfinite(val):
                consider(L, val)
            return val

        simplex = np.vstack([x0] + [x0 + SIMPLEX_STEP * e for e in np.eye(len(x0))])
        res = minimize(f, x0, method="Nelder-Mead",
                       options={"maxfev": cfg.evals, "initial_simplex": simplex,
                                "xatol": 1e-10, "fatol": 1e-12})
        if res.nfev >= cfg.evals and not res.success:
            exhausted = True
    return best_L, sign * best_val, history, count, exhausted


def minimize_shadow(K: Body, cfg: SearchConfig | None = None) -> SearchResult:
    """Smallest shadow area found over Sp(2n); an upper estimate of ``c̄_lin(K)``.

    Warm starts are the identity and the cylinder witness, so the result
    never exceeds the witness value.
    """
    cfg = cfg or SearchConfig()
    _require_symmetric(K)
    I = np.eye(K.dim)
    warm = [I, _linear(cylinder_witness(K).map)]
    L, val, hist, count, exhausted = _objective_pool(K, warm, lambda L: shadow_area(K, L), cfg)
    best = _witness(K, SymplecticMap(L, tol=1e-6))
    return SearchResult(best, hist, cfg.seed, count, exhausted)


def inscribed_ball_radius(K: Body, S, t=None) -> float:
    """Largest ``r`` with ``S B(r) + t ⊆ K`` (exact).

    Polytopes: ``r = min_i (1 - <a_i, t>) / |L^T a_i|``; ellipsoids
    ``{x^T Q x <= 1}`` (only ``t = 0``): ``r = 1 / sqrt(λ_max(L^T Q L))``.
    A translation outside ``K`` gives 0.
    """
    L = _linear(S)
    t = np.zeros(K.dim) if t is None else np.asarray(t, dtype=float)
    Q = ellipsoid_matrix(K)
    if Q is not None:
        if np.any(t != 0):
            raise ValueError("translated balls in ellipsoids are not supported")
        return float(1.0 / np.sqrt(np.linalg.eigvalsh(L.T @ Q @ L).max()))
    A = polytope_rows(K)
    slack = 1.0 - A @ t
    if np.any(slack < 0):
        return 0.0
    return float(np.min(slack / np.linalg.norm(A @ L, axis=1)))


def lin_gromov_estimate(K: Body, cfg: SearchConfig | None = None) -> SearchResult:
    """Largest ``π r²`` found with ``S B(r) ⊆ K``; a lower estimate of the linearized Gromov width."""
    cfg = cfg or SearchConfig()
    if ellipsoid_matrix(K) is None:
        polytope_rows(K)  # raises for unsupported bodies
    warm = [np.eye(K.dim)]
    fn = lambda L: np.pi * inscribed_ball_radius(K, L) ** 2  # noqa: E731
    L, val, hist, count, exhausted = _objective_pool(K, warm, fn, cfg, maximize=True)
    S = SymplecticMap(L, tol=1e-6)
    return SearchResult(BallWitness(S, inscribed_ball_radius(K, S)), hist, cfg.seed, count, exhausted)


# ------------------------------------------------------------ rotated cube

def rotated_cube_matrix(n: int) -> np.ndarray:
    """The orthogonal ``n x n`` matrix ``O'`` with ``|O'_{kj}| <= sqrt(2/n)``.

    Rows (1-based ``k``) are scaled Fourier modes: ``sqrt(2) sin(2πkj/n)``
    for ``k < n/2``, ``(-1)^j`` for ``k = n/2``, ``sqrt(2) cos(2πkj/n)`` for
    ``n/2 < k < n`` and ``1`` for ``k = n``, all divided by ``sqrt(n)``.
    """
    if n < 2 or n % 2:
        raise DomainError(f"rotated_cube_matrix needs an even n >= 2, got {n}")
    k = np.arange(1, n + 1)[:, None]
    j = np.arange(1, n + 1)[None, :]
    ang = 2 * np.pi * k * j / n
    O = np.empty((n, n))
    h = n // 2
    O[:h - 1] = np.sqrt(2) * np.sin(ang[:h - 1])
    O[h - 1] = (-1.0) ** np.arange(1, n + 1)
    O[h:n - 1] = np.sqrt(2) * np.cos(ang[h:n - 1])
    O[n - 1] = 1.0
    return O / np.sqrt(n)


def check_linf_columns(Oprime) -> float:
    """``max_i ||O' e_i||_inf``; raises if it exceeds ``sqrt(2/n)``."""
    O = np.asarray(Oprime, dtype=float)
    n = O.shape[0]
    val = float(np.abs(O).max())
    if val > np.sqrt(2) / np.sqrt(n) + 1e-12:
        raise LemmaViolation(f"column sup-norm {val} exceeds sqrt(2/n) = {np.sqrt(2 / n)}")
    return val


def check_cross_polytope_inclusion(n: int) -> bool:
    """Whether ``O'(B_1^n(sqrt n)) ⊆ [-sqrt 2, sqrt 2]^n`` (checked on the vertices)."""
    O = rotated_cube_matrix(n)
    images = np.sqrt(n) * O  # columns are O'(sqrt(n) e_i); -e_i is symmetric
    return bool(np.abs(images).max() <= np.sqrt(2) + 1e-12)


def build_rotated_cube(n: int) -> Body:
    """The cube ``[-1, 1]^{2n}`` rotated by ``diag(I_n, O')`` (p-coordinates only)."""
    O = rotated_cube_matrix(n)
    return LinearImage(cube(n), block_diag(np.eye(n), O))


@dataclass
class WidthReport:
    samples: int
    max_value: float
    violations: list  # (sample index, value)
    bound: float = float(np.pi)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_cube_lin_width(O, samples: int = 500, seed: int = 0) -> WidthReport:
    """Sample ``π r(OQ, S)²`` over seeded symplectic ``S``; each must stay ``<= π``.

    ``Q`` is the cube ``[-1, 1]^{2n}``. Any ellipsoid inside ``Q`` has at most
    the volume of the unit ball, and symplectic maps preserve volume, so
    ``r <= 1`` for every ``S``.
    """
    O = np.asarray(O, dtype=float)
    if O.ndim != 2 or O.shape[0] != O.shape[1] or O.shape[0] % 2:
        raise ValueError("O must be a square matrix of even size")
    if np.abs(O.T @ O - np.eye(len(O))).max() > 1e-9:
        raise ValueError("O must be orthogonal")
    K = LinearImage(hypercube(len(O)), O)
    rng = np.random.default_rng(seed)
    scales = np.geomspace(0.01, 3.0, 8)
    best, bad = -np.inf, []
    i = 0
    while i < samples:
        M = random_symmetric(len(O), rng, scales[i % len(scales)])
        try:
            S = cayley_symplectic(M)
        except DomainError:
            continue
        val = np.pi * inscribed_ball_radius(K, S) ** 2
        best = max(best, val)
        if val > np.pi + 1e-9:
            bad.append((i, val))
        i += 1
    return WidthReport(samples, float(best), bad)
