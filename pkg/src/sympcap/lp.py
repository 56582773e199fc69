"""
Dense two-phase simplex method with Bland's anti-cycling rule.

Solves problems in standard form::

    minimize    c @ x
    subject to  A @ x == b,  x >= 0

Sizes in this package stay below ~100 rows/columns, so a dense revised
simplex that refactors the basis at every step is cheap, accurate on
degenerate problems and fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LPError

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None = None
    fun: float | None = None
    duals: np.ndarray | None = None  # y with A^T y <= c at optimum, y @ b == fun
    iterations: int = 0


def _run(A, b, cost, basis, n_allowed, tol, piv_tol, max_iter):
    """Revised simplex with Bland's rule; ``basis`` is updated in place.

    The basic solution is recomputed from the original data at every
    iteration, so rounding does not accumulate over degenerate pivots.
    """
    m = A.shape[0]
    it = 0
    while it < max_iter:
        Bm = A[:, basis]
        xb = np.linalg.solve(Bm, b)
        y = np.linalg.solve(Bm.T, cost[basis])
        reduced = cost[:n_allowed] - y @ A[:, :n_allowed]
        reduced[basis[basis < n_allowed]] = 0.0
        entering = np.flatnonzero(reduced < -tol)
        if entering.size == 0:
            return OPTIMAL, it
        c = entering[0]
        w = np.linalg.solve(Bm, A[:, c])
        pos = w > max(piv_tol, 1e-7 * np.abs(w).max())
        if not pos.any():
            return UNBOUNDED, it
        ratios = np.full(m, np.inf)
        ratios[pos] = np.maximum(xb[pos], 0.0) / w[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + tol * max(1.0, abs(best)))
        r = ties[np.argmin(basis[ties])]
        basis[r] = c
        it += 1
    raise LPError("simplex iteration limit reached")


def solve_lp(c, A, b, tol: float = 1e-10, max_iter: int = 5000) -> LPResult:
    """Minimize ``c @ x`` subject to ``A @ x == b`` and ``x >= 0``.

    Returns an :class:`LPResult`; ``duals`` are expressed for the rows of the
    original ``A`` (redundant rows get a zero multiplier).
    """
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    m, nvar = A.shape
    if c.shape != (nvar,) or b.shape != (m,):
        raise ValueError("inconsistent LP dimensions")

    flip = np.where(b < 0, -1.0, 1.0)
    As = A * flip[:, None]
    bs = b * flip
    scale = max(1.0, np.abs(As).max(initial=0.0), np.abs(bs).max(initial=0.0))
    ptol = tol * scale
    piv_tol = max(ptol, 1e-9 * scale)

    # phase 1 on [A | I] with the artificials as starting basis
    A1 = np.hstack([As, np.eye(m)])
    cost1 = np.concatenate([np.zeros(nvar), np.ones(m)])
    basis = np.arange(nvar, nvar + m)
    _, it1 = _run(A1, bs, cost1, basis, nvar + m, ptol, piv_tol, max_iter)
    xb = np.linalg.solve(A1[:, basis], bs)
    if xb[basis >= nvar].sum() > 1e3 * ptol * max(1, m):
        return LPResult(INFEASIBLE, iterations=it1)

    # drive zero-level artificials out where possible; the rest mark
    # redundant rows and stay basic at zero (they can never re-enter)
    for r in np.flatnonzero(basis >= nvar):
        w = np.linalg.solve(A1[:, basis].T, np.eye(m)[r]) @ As
        w[np.isin(np.arange(nvar), basis)] = 0.0
        j = int(np.argmax(np.abs(w)))
        if abs(w[j]) > 1e-7 * scale:
            basis[r] = j

    cost2 = np.concatenate([c, np.zeros(m)])
    status, it2 = _run(A1, bs, cost2, basis, nvar, ptol, piv_tol, max_iter)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, iterations=it1 + it2)
    Bm = A1[:, basis]
    xb = np.linalg.solve(Bm, bs)
    x = np.zeros(nvar + m)
    x[basis] = np.maximum(xb, 0.0)
    x = x[:nvar]
    duals = np.linalg.solve(Bm.T, cost2[basis]) * flip
    return LPResult(OPTIMAL, x, float(c @ x), duals, it1 + it2)


def linprog_max(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, free=True, tol=1e-10) -> LPResult:
    """Maximize ``c @ x`` subject to ``A_ub x <= b_ub`` and ``A_eq x == b_eq``.

    Variables are free when ``free`` is true (split into positive and
    negative parts), otherwise nonnegative. Convenience wrapper for callers
    that think in inequality form; the returned ``x`` and ``fun`` refer to the
    maximization problem.
    """
    c = np.asarray(c, dtype=float)
    d = c.shape[0]
    blocks, rhs = [], []
    n_ub = 0
    if A_ub is not None:
        A_ub = np.atleast_2d(np.asarray(A_ub, dtype=float))
        n_ub = A_ub.shape[0]
        blocks.append(A_ub)
        rhs.append(np.asarray(b_ub, dtype=float).ravel())
    if A_eq is not None:
        A_eq = np.atleast_2d(np.asarray(A_eq, dtype=float))
        blocks.append(A_eq)
        rhs.append(np.asarray(b_eq, dtype=float).ravel())
    A = np.vstack(blocks)
    b = np.concatenate(rhs)
    m = A.shape[0]
    X = np.hstack([A, -A]) if free else A
    slack = np.zeros((m, n_ub))
    slack[:n_ub, :n_ub] = np.eye(n_ub)
    full = np.hstack([X, slack])
    cost = np.concatenate([-c, c] if free else [-c])
    cost = np.concatenate([cost, np.zeros(n_ub)])
    res = solve_lp(cost, full, b, tol=tol)
    if res.status != OPTIMAL:
        return res
    x = res.x[:d] - res.x[d:2 * d] if free else res.x[:d]
    return LPResult(OPTIMAL, x, float(c @ x), -res.duals, res.iterations)
