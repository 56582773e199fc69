"""
Ekeland-Hofer-Zehnder capacity.

Closed characteristics of a smooth convex boundary ``∂K`` are the periodic
solutions of ``x' = J grad g_K(x)`` on ``∂K``. Because ``g_K`` is positively
homogeneous of degree one, every such orbit satisfies ``A = T / 2`` (action
equals half the period), which the checkers below use as a self-test.

The estimator combines closed forms (planar area, ellipsoids) with a
shooting method:

1. integrate seeded boundary points with an embedded Runge-Kutta pair and
   record returns to the hyperplane through the start point;
2. refine each return by Gauss-Newton on ``(y, T)`` using the variational
   equations ``Phi' = J Hess g_K(x) Phi``;
3. resample the closed orbit uniformly and compute its action spectrally.

Polytopes are replaced by the smooth inner approximation
:class:`~sympcap.bodies.SmoothedPolytope` before shooting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.stats import norm as _normal
from scipy.stats import qmc

from . import planar
from .bodies import Body, SmoothedPolytope, ellipsoid_matrix, polytope_vertices
from .errors import (ClosureError, EstimationError, LemmaViolation, NonClosureError,
                     RefinementError, SizeError, SmoothnessError, SymmetryError)
from .normj import norm_J
from .symplin import J_matrix, apply_J

MAX_SHOOTING_DIM = 6

# Dormand-Prince 5(4) tableau
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


@dataclass
class ShootConfig:
    """Knobs of the shooting estimator."""

    ode_tol: float = 1e-10
    max_time: float | None = None  # default: 40 / ||J||
    n_starts: int = 64
    seed: int = 0
    tol_chain: float = 1e-6
    closure_tol: float = 1e-6
    newton_iter: int = 30
    newton_tol: float = 1e-10
    samples: int = 1024
    smoothing_m: int = 8
    close_return: float = 1e-4  # relative distance that ends a shot early
    cross_validate: bool = True


@dataclass
class Orbit:
    """A closed loop sampled at uniform flow times.

    ``samples`` has ``m + 1`` rows with ``samples[m] ≈ samples[0]``; the
    action is stored as its absolute value.
    """

    samples: np.ndarray
    period: float
    action: float = float("nan")
    closure_residual: float = float("nan")
    body: Body | None = field(default=None, repr=False, compare=False)
    start: int = -1

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 2 or len(self.samples) < 4:
            raise ValueError("samples must be an (m + 1, 2n) array with m >= 3")
        self.period = float(self.period)
        if np.isnan(self.closure_residual):
            self.closure_residual = float(np.linalg.norm(self.samples[-1] - self.samples[0]))
        if np.isnan(self.action) and self.closure_residual <= _closure_scale(self.samples) * 1e-6:
            self.action = abs(signed_action(self))

    @property
    def times(self) -> np.ndarray:
        m = len(self.samples) - 1
        return self.period * np.arange(m + 1) / m


@dataclass
class EhzEstimate:
    value: float
    method: str  # "closed-form" | "shooting" | "planar-area"
    orbits: list
    lower_certificate: float
    smoothing: int | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def method_tag(self) -> str:
        return self.method if self.smoothing is None else f"{self.method}-smoothed-m{self.smoothing}"


# ------------------------------------------------------------------ basics

def gradient_gauge(K: Body, x) -> np.ndarray:
    """``grad g_K(x)`` for a smooth body.

    For ``x`` on ``∂K`` the result lies on ``∂K°`` and satisfies Euler's
    identity ``<x, grad g_K(x)> = g_K(x)``.
    """
    if not K.is_smooth:
        raise SmoothnessError(f"{K!r} is not smooth; use SmoothedPolytope.from_body")
    x = np.asarray(x, dtype=float)
    if np.any(np.linalg.norm(np.atleast_2d(x), axis=-1) == 0):
        raise ValueError("the gauge is not differentiable at the origin")
    return K.gauge_gradient(x)


def _closure_scale(samples):
    return max(1.0, float(np.abs(samples).max()))


def _spectral_derivative(Y):
    """d/dθ of periodic samples ``Y[j] = y(j / m)`` on ``θ in [0, 1)``."""
    m = len(Y)
    F = np.fft.rfft(Y, axis=0)
    k = np.arange(F.shape[0])
    if m % 2 == 0:
        k[-1] = 0  # drop the Nyquist mode
    return np.fft.irfft(F * (2j * np.pi * k)[:, None], n=m, axis=0)


def _check_closed(orbit: Orbit, tol=1e-6):
    scale = _closure_scale(orbit.samples)
    gap = float(np.linalg.norm(orbit.samples[-1] - orbit.samples[0]))
    if gap > tol * scale:
        raise ClosureError(f"loop is open: |γ(T) - γ(0)| = {gap:.3e}")


def signed_action(orbit: Orbit) -> float:
    """``½ ∫ <Jγ, γ'> dt`` by the periodic trapezoid rule with a spectral derivative."""
    _check_closed(orbit)
    Y = orbit.samples[:-1]
    dY = _spectral_derivative(Y)  # per unit of the loop parameter
    return 0.5 * float(np.mean(np.einsum("ij,ij->i", apply_J(Y), dY)))


def action(orbit: Orbit) -> float:
    """Orientation-normalized action ``|A(γ)|`` of a closed loop."""
    return abs(signed_action(orbit))


def tangency_residual(K: Body, orbit: Orbit) -> float:
    """``max_t |γ'(t) - J grad g_K(γ(t))|`` with a spectral derivative."""
    _check_closed(orbit)
    Y = orbit.samples[:-1]
    dY = _spectral_derivative(Y) / orbit.period
    return float(np.linalg.norm(dY - apply_J(K.gauge_gradient(Y)), axis=1).max())


# ------------------------------------------------------------- integrator

def _dopri_step(F, y, h):
    k = [F(y)]
    hh = h[:, None]
    for s in range(1, 7):
        inc = sum(a * ki for a, ki in zip(_A[s], k) if a != 0)
        k.append(F(y + hh * inc))
    y5 = y + hh * sum(b * ki for b, ki in zip(_B5, k) if b != 0)
    err = hh * sum(e * ki for e, ki in zip(_E, k) if e != 0)
    return y5, err


def _integrate(F, y0, t_end, tol, err_dims=None, project=None, observer=None, stops=None,
               h0=None, max_steps=500_000):
    """Batched adaptive Dormand-Prince integration of the autonomous ``y' = F(y)``.

    Each row runs until its own ``t_end``.
    ``observer(rows, y_old, y_new, t_old, t_new)`` sees every accepted step
    and returns a boolean mask of rows to stop.
    ``stops`` (k, s) forces steps to land on the given times and returns the
    states there.
    """
    y = np.array(y0, dtype=float)
    k = len(y)
    tol = np.broadcast_to(np.asarray(tol, dtype=float), (k,))
    t_end = np.broadcast_to(np.asarray(t_end, dtype=float), (k,)).copy()
    t = np.zeros(k)
    h = np.full(k, 1e-2 if h0 is None else h0) * np.where(t_end > 0, 1.0, 0.0)
    h = np.minimum(h, t_end)
    err_dims = slice(None) if err_dims is None else err_dims
    done = t_end <= 0
    recorded = None
    if stops is not None:
        stops = np.asarray(stops, dtype=float)
        recorded = np.zeros((k, stops.shape[1], y.shape[1]))
        nxt = np.zeros(k, dtype=int)
    steps = 0
    while not done.all():
        steps += 1
        if steps > max_steps:
            raise NonClosureError("integrator step limit reached")
        idx = np.flatnonzero(~done)
        target = t_end[idx]
        if stops is not None:
            target = np.minimum(target, stops[idx, np.minimum(nxt[idx], stops.shape[1] - 1)])
        hh = np.minimum(h[idx], target - t[idx])
        y_old = y[idx]
        y_new, err = _dopri_step(F, y_old, hh)
        a = np.abs(y_old[:, err_dims])
        b = np.abs(y_new[:, err_dims])
        sc = tol[idx, None] * (1.0 + np.maximum(a, b))
        en = np.sqrt(np.mean((err[:, err_dims] / sc) ** 2, axis=1))
        en = np.where(np.isfinite(en), en, 1e10)
        ok = en <= 1.0
        fac = np.clip(0.9 * np.maximum(en, 1e-10) ** -0.2, 0.2, 5.0)
        # a step shortened to hit a target must not shrink the next one
        h[idx] = np.where(ok & (hh < h[idx]), h[idx], hh * fac)
        if not ok.any():
            if (hh < 1e-14 * np.maximum(1.0, t[idx])).any():
                raise NonClosureError("integrator step size underflow")
            continue
        acc = idx[ok]
        yn = y_new[ok]
        if project is not None:
            yn = project(yn)
        t_new = t[acc] + hh[ok]
        stop = np.zeros(len(acc), dtype=bool)
        if observer is not None:
            stop = observer(acc, y_old[ok], yn, t[acc], t_new)
        y[acc] = yn
        t[acc] = t_new
        if stops is not None:
            j = nxt[acc]
            hit = np.abs(t_new - stops[acc, np.minimum(j, stops.shape[1] - 1)]) <= 1e-14 * np.maximum(1, t_new)
            hit &= j < stops.shape[1]
            recorded[acc[hit], j[hit]] = yn[hit]
            nxt[acc[hit]] += 1
        done[acc] = stop | (t_new >= t_end[acc] * (1 - 1e-15))
    return (y, t) if stops is None else (y, t, recorded)


def _flow(K):
    return lambda x: apply_J(K.gauge_gradient(x))


def _variational(K, d):
    def F(Y):
        x = Y[:, :d]
        P = Y[:, d:].reshape(-1, d, d)
        M = K.gauge_hessian(x) @ P
        n = d // 2
        JM = np.concatenate([-M[:, n:], M[:, :n]], axis=1)
        return np.hstack([apply_J(K.gauge_gradient(x)), JM.reshape(len(Y), -1)])
    return F


def _project(K):
    return lambda x: x / np.asarray(K.gauge(x))[:, None]


# ------------------------------------------------------------ shooting core

def _hermite_crossing(flow, y0, y1, t0, t1, x0, nrm):
    """Point and time where the cubic Hermite step crosses ``<nrm, x - x0> = 0``."""
    h = t1 - t0
    m0, m1 = flow(y0[None])[0] * h, flow(y1[None])[0] * h

    def point(s):
        h00, h10 = 2 * s ** 3 - 3 * s ** 2 + 1, s ** 3 - 2 * s ** 2 + s
        h01, h11 = -2 * s ** 3 + 3 * s ** 2, s ** 3 - s ** 2
        return h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1

    f = lambda s: float(nrm @ (point(s) - x0))  # noqa: E731
    s = brentq(f, 0.0, 1.0, xtol=1e-15) if f(0.0) < 0 <= f(1.0) else 1.0
    return point(s), t0 + s * h


def _find_returns(K, X0, cfg, max_time):
    """Step 1: integrate and collect candidate returns for each start.

    Returns, per start, a list of ``(y, T)`` seeds (first return and the
    closest return).
    """
    k, d = X0.shape
    Nrm = apply_J(K.gauge_gradient(X0))
    Nrm /= np.linalg.norm(Nrm, axis=1, keepdims=True)
    scale = np.linalg.norm(X0, axis=1)
    first = [None] * k
    best = [None] * k
    best_d = np.full(k, np.inf)

    flow = _flow(K)

    def observer(rows, y_old, y_new, t_old, t_new):
        s_old = np.einsum("ij,ij->i", y_old - X0[rows], Nrm[rows])
        s_new = np.einsum("ij,ij->i", y_new - X0[rows], Nrm[rows])
        cross = (s_old < 0) & (s_new >= 0)
        stop = np.zeros(len(rows), dtype=bool)
        for i in np.flatnonzero(cross):
            r = rows[i]
            yc, tc = _hermite_crossing(flow, y_old[i], y_new[i], t_old[i], t_new[i], X0[r], Nrm[r])
            dist = np.linalg.norm(yc - X0[r]) / scale[r]
            if first[r] is None:
                first[r] = (yc, tc, dist)
            if dist < best_d[r]:
                best_d[r] = dist
                best[r] = (yc, tc)
            if dist < cfg.close_return:
                stop[i] = True
        return stop

    _integrate(_flow(K), X0, np.full(k, max_time), max(cfg.ode_tol, 1e-12) * 10,
               project=_project(K), observer=observer)
    seeds = []
    for r in range(k):
        cand = []
        if first[r] is not None:
            cand.append(first[r][:2])
            # a much closer later return is worth a second attempt
            if best_d[r] < 0.25 * first[r][2]:
                cand.append(best[r])
        seeds.append(cand)
    return seeds, best_d


def _newton(K, Y, T, X0, cfg, min_period):
    """Step 2: batched Gauss-Newton on ``(y, T)``.

    Equations: ``phi_T(y) - y = 0``, ``<n, y - x0> = 0``, ``g(y) = 1``.
    Returns ``(Y, T, residual, converged)``.
    """
    k, d = Y.shape
    Y = Y / np.asarray(K.gauge(Y))[:, None]
    T = np.array(T, dtype=float)
    Nrm = apply_J(K.gauge_gradient(X0))
    Nrm /= np.linalg.norm(Nrm, axis=1, keepdims=True)
    res = np.full(k, np.inf)
    conv = np.zeros(k, dtype=bool)
    alive = T > 0
    F = _variational(K, d)
    flow = _flow(K)
    eye = np.eye(d).ravel()
    for it in range(cfg.newton_iter):
        act = np.flatnonzero(alive & ~conv)
        if act.size == 0:
            break
        if it >= 10:
            # rows still far from closure after many steps are abandoned
            slow = act[res[act] > 1e-3 * np.maximum(1.0, np.linalg.norm(Y[act], axis=1))]
            alive[slow] = False
            act = np.setdiff1d(act, slow)
            if act.size == 0:
                break
        Z0 = np.hstack([Y[act], np.tile(eye, (act.size, 1))])
        # cheap integrations while far from closure, full accuracy near it
        tol = np.clip(1e-4 * res[act], cfg.ode_tol, 1e-6)
        try:
            Z, _ = _integrate(F, Z0, T[act], tol, err_dims=slice(0, d))
        except NonClosureError:
            alive[act] = False
            break
        for j, r in enumerate(act):
            x1 = Z[j, :d]
            Phi = Z[j, d:].reshape(d, d)
            y = Y[r]
            rvec = np.concatenate([x1 - y, [Nrm[r] @ (y - X0[r]), float(K.gauge(y)) - 1.0]])
            res[r] = np.linalg.norm(rvec)
            ysc = max(1.0, np.linalg.norm(y))
            # Degenerate orbits (flat transverse directions) only converge
            # linearly, so a residual well inside the closure tolerance is
            # accepted as well.
            if res[r] <= cfg.newton_tol * ysc or res[r] <= 0.1 * cfg.closure_tol * ysc:
                conv[r] = True
                continue
            Jac = np.zeros((d + 2, d + 1))
            Jac[:d, :d] = Phi - np.eye(d)
            Jac[:d, d] = flow(x1[None])[0]
            Jac[d, :d] = Nrm[r]
            Jac[d + 1, :d] = K.gauge_gradient(y)
            step = np.linalg.lstsq(Jac, -rvec, rcond=1e-12)[0]
            dy, dT = step[:d], step[d]
            lim = 0.5 * np.linalg.norm(y)
            if np.linalg.norm(dy) > lim:
                step *= lim / np.linalg.norm(dy)
                dy, dT = step[:d], step[d]
            dT = float(np.clip(dT, -0.5 * T[r], 0.5 * T[r]))
            ynew = y + dy
            Y[r] = ynew / float(K.gauge(ynew))
            T[r] += dT
            if not np.isfinite(T[r]) or T[r] < 0.5 * min_period:
                alive[r] = False
    # a final residual evaluation for rows whose last step was never checked
    act = np.flatnonzero(alive & ~conv)
    if act.size:
        try:
            X1, _ = _integrate(flow, Y[act], T[act], cfg.ode_tol)
            res[act] = np.linalg.norm(X1 - Y[act], axis=1)
        except NonClosureError:
            alive[act] = False
    ok = alive & (res <= cfg.closure_tol * np.maximum(1.0, np.linalg.norm(Y, axis=1)))
    ok &= T >= min_period
    return Y, T, res, ok


def _sample_orbits(K, Y, T, cfg):
    """Step 3: uniform samples ``γ(T j / m)``, ``j = 0..m``."""
    m = cfg.samples
    grid = np.arange(1, m + 1) / m
    stops = T[:, None] * grid[None, :]
    _, _, rec = _integrate(_flow(K), Y, T, cfg.ode_tol, stops=stops)
    return np.concatenate([Y[:, None, :], rec], axis=1)


def _make_orbits(K, Y, T, starts, cfg):
    out = []
    if len(Y) == 0:
        return out
    S = _sample_orbits(K, Y, T, cfg)
    m = S.shape[1] - 1
    ramp = (np.arange(m + 1) / m)[:, None]
    for i in range(len(Y)):
        samples = S[i]
        jump = samples[-1] - samples[0]
        gap = float(np.linalg.norm(jump))
        # spread the (tiny) closure gap over the loop so the spectral
        # derivative sees a periodic signal; the raw gap is kept
        samples = samples - ramp * jump
        o = Orbit(samples, T[i], closure_residual=gap, body=K, start=int(starts[i]))
        if np.isnan(o.action):
            continue
        out.append(o)
    return out


def _default_max_time(K, cfg, nj=None):
    if cfg.max_time is not None:
        return float(cfg.max_time)
    nj = norm_J(K, seed=cfg.seed).value if nj is None else nj
    return 40.0 / nj


def _check_smooth_start(K, x0):
    if not K.is_smooth:
        raise SmoothnessError(f"{K!r} is not smooth; use SmoothedPolytope.from_body")
    if abs(float(K.gauge(x0)) - 1.0) > 1e-8:
        raise ValueError("start point must lie on the boundary (|g_K(x0) - 1| <= 1e-8)")


def shoot_characteristic(K: Body, x0, cfg: ShootConfig | None = None) -> Orbit:
    """Closed characteristic through (or near) the boundary point ``x0``.

    Integrates ``x' = J grad g_K(x)`` until the trajectory returns to the
    hyperplane through ``x0`` transversal to the flow, then refines the
    return by Gauss-Newton on the return map.
    """
    cfg = cfg or ShootConfig()
    x0 = np.asarray(x0, dtype=float)
    _check_smooth_start(K, x0)
    nj = norm_J(K, seed=cfg.seed).value
    seeds, _ = _find_returns(K, x0[None], cfg, _default_max_time(K, cfg, nj))
    if not seeds[0]:
        raise NonClosureError("trajectory never returned to its section")
    # prefer the closest return, fall back to the first one
    for y, T in reversed(seeds[0]):
        Y, Tn, res, ok = _newton(K, y[None].copy(), np.array([T]), x0[None], cfg, 1.0 / nj)
        if ok[0]:
            return _make_orbits(K, Y, Tn, [0], cfg)[0]
    raise RefinementError(f"Newton refinement failed (residual {res[0]:.3e})")


def boundary_starts(K: Body, count: int, seed: int = 0) -> np.ndarray:
    """Seeded low-discrepancy points of ``∂K`` (Halton directions, gauge-normalized)."""
    u = qmc.Halton(d=K.dim, scramble=True, seed=seed).random(count)
    z = _normal.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    return z / np.asarray(K.gauge(z))[:, None]


def shoot_all(K: Body, cfg: ShootConfig | None = None, nj=None):
    """Closed characteristics found from ``cfg.n_starts`` seeded boundary points."""
    cfg = cfg or ShootConfig()
    if not K.is_smooth:
        raise SmoothnessError(f"{K!r} is not smooth")
    nj = norm_J(K, seed=cfg.seed).value if nj is None else nj
    X0 = boundary_starts(K, cfg.n_starts, cfg.seed)
    seeds, best_d = _find_returns(K, X0, cfg, _default_max_time(K, cfg, nj))
    Ys, Ts, Xs, idx = [], [], [], []
    for r, cand in enumerate(seeds):
        for y, T in cand:
            Ys.append(y)
            Ts.append(T)
            Xs.append(X0[r])
            idx.append(r)
    diagnostics = {"starts": cfg.n_starts, "candidates": len(Ys)}
    if not Ys:
        return [], diagnostics
    Y, T, res, ok = _newton(K, np.array(Ys), np.array(Ts), np.array(Xs), cfg, 1.0 / nj)
    diagnostics["converged"] = int(ok.sum())
    orbits = _make_orbits(K, Y[ok], T[ok], np.array(idx)[ok], cfg)
    return orbits, diagnostics


# --------------------------------------------------------------- estimator

def _planar_area(K: Body):
    Q = ellipsoid_matrix(K)
    if Q is not None:
        return float(np.pi / np.sqrt(np.linalg.det(Q)))
    if K.is_polytope:
        return planar.hull_area(polytope_vertices(K))
    th = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    return planar.hull_area(K.support_point(np.column_stack([np.cos(th), np.sin(th)])))


def _pick_min(orbits):
    """Minimal action; ties (relative 1e-9) go to the smallest start index."""
    best = None
    for o in sorted(orbits, key=lambda o: o.start):
        if best is None or o.action < best.action * (1 - 1e-9):
            best = o
    return best


def ehz_estimate(K: Body, cfg: ShootConfig | None = None) -> EhzEstimate:
    """Estimate ``c_EHZ(K)``, the minimal action of closed characteristics on ``∂K``.

    Planar bodies use their area; ellipsoids the closed form
    ``π / max |eig(J Q)|`` (cross-checked by shooting when ``2n <= 6``);
    other bodies the minimal action found by shooting, after smoothing
    polytopes. Shooting values are upper estimates of the minimal action of
    the shot body and come with the certificate ``1 / ||J||``.
    """
    cfg = cfg or ShootConfig()
    d = K.dim
    if d == 2:
        lower = 1.0 / norm_J(K).value if K.symmetric else float("nan")
        return EhzEstimate(_planar_area(K), "planar-area", [], lower)
    if not K.symmetric:
        raise SymmetryError("ehz_estimate needs a centrally symmetric body")
    nj = norm_J(K, seed=cfg.seed)
    lower = 1.0 / nj.value
    Q = ellipsoid_matrix(K)
    if Q is not None:
        ev = np.abs(np.linalg.eigvals(J_matrix(d // 2) @ Q))
        value = float(np.pi / ev.max())
        est = EhzEstimate(value, "closed-form", [], lower)
        if cfg.cross_validate and d <= MAX_SHOOTING_DIM:
            from .bodies import Ellipsoid
            orbits, diag = shoot_all(Ellipsoid(Q), cfg, nj=nj.value)
            est.orbits = orbits
            est.diagnostics = diag
            diag["shot_normj"] = nj.value
            if orbits:
                est.diagnostics["shooting_min"] = _pick_min(orbits).action
        return est
    if d > MAX_SHOOTING_DIM:
        raise SizeError(f"shooting is limited to dimension <= {MAX_SHOOTING_DIM}")
    smoothing = None
    body = K
    if not K.is_smooth:
        if not K.is_polytope:
            raise SmoothnessError(f"{K!r} is neither smooth nor a polytope")
        body = SmoothedPolytope.from_body(K, cfg.smoothing_m)
        smoothing = cfg.smoothing_m
    shot_nj = nj.value if body is K else norm_J(body, seed=cfg.seed).value
    orbits, diag = shoot_all(body, cfg, nj=shot_nj)
    if not orbits:
        raise EstimationError("no shot converged to a closed characteristic", [diag])
    best = _pick_min(orbits)
    diag["best_start"] = best.start
    diag["shot_normj"] = shot_nj
    return EhzEstimate(best.action, "shooting", orbits, lower, smoothing, diag)


# ---------------------------------------------------------------- checkers

def _chord_gauge(K, orbit, t):
    """``g_K(γ(t) - γ(0))`` with γ interpolated by cubic Hermite on the flow."""
    S = orbit.samples
    m = len(S) - 1
    h = orbit.period / m
    j = min(int(t / h), m - 1)
    s = t / h - j
    p0, p1 = S[j], S[j + 1]
    f = _flow(K)
    m0, m1 = f(p0[None])[0] * h, f(p1[None])[0] * h
    h00, h10 = 2 * s ** 3 - 3 * s ** 2 + 1, s ** 3 - 2 * s ** 2 + s
    h01, h11 = -2 * s ** 3 + 3 * s ** 2, s ** 3 - s ** 2
    x = h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1
    return float(K.gauge(x - S[0]))


def verify_return_lemma(K: Body, orbit: Orbit, tol_chain: float = 1e-6, nj: float | None = None):
    """First time ``t0`` with ``g_K(γ(t0) - γ(0)) >= 1`` and the chord gauge there.

    Also checks ``min(t0, T - t0) >= 1/||J|| - tol_chain``. Raises
    :class:`LemmaViolation` if either part fails.
    """
    S = orbit.samples
    chord = np.asarray(K.gauge(S - S[0]))
    hit = np.flatnonzero(chord >= 1 - 1e-6)
    if hit.size == 0:
        raise LemmaViolation(f"chord gauge never reaches 1 (max {chord.max():.6f})")
    j = int(hit[0])
    t = orbit.times
    if j == 0:
        t0, c0 = 0.0, float(chord[0])
    elif K.is_smooth:
        lo, hi = t[j - 1], t[j]
        g = lambda s: _chord_gauge(K, orbit, s) - 1.0  # noqa: E731
        if g(lo) < 0 < g(hi):
            t0 = brentq(g, lo, hi, xtol=1e-14, rtol=1e-14)
        else:
            t0 = hi
        c0 = _chord_gauge(K, orbit, t0)
    else:
        # linear interpolation of the chord gauge between samples
        lam = (1 - chord[j - 1]) / (chord[j] - chord[j - 1])
        t0 = t[j - 1] + lam * (t[j] - t[j - 1])
        c0 = 1.0
    c0 = max(c0, float(chord[j]) if t0 == t[j] else c0)
    nj = norm_J(K).value if nj is None else nj
    T = orbit.period
    if min(t0, T - t0) < 1.0 / nj - tol_chain:
        raise LemmaViolation(f"min(t0, T - t0) = {min(t0, T - t0):.6g} < 1/||J|| = {1 / nj:.6g}")
    return float(t0), float(c0)


def verify_action_period(K: Body, orbit: Orbit) -> float:
    """``|A(γ) - T/2|`` for an orbit of the degree-one flow."""
    return abs(action(orbit) - 0.5 * orbit.period)
