"""
Suites that check the capacity inequalities on concrete bodies, and the
body-spec / report plumbing used by the command line.

Every check is recorded as ``(name, passed, residual)``; a residual is the
amount by which the inequality holds (negative means violated) or, for
accuracy checks, the error that was compared against a tolerance.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import block_diag

from . import ehz as ehz_mod
from . import lincap, normj
from .bodies import (Body, Ellipsoid, HPolytope, LinearImage, Product, VPolytope, ball,
                     cross_polytope, cube, ellipsoid_matrix, ellipsoid_radii, hypercube,
                     random_symmetric_polytope, shadow_area)
from .errors import BodySpecError, DomainError, RepresentationError, SympcapError
from .symplin import random_symplectic

CSV_COLUMNS = ["body_id", "n", "normj", "lower", "ehz", "ehz_method", "witness_shadow",
               "cyl_lin", "upper", "chain_ok", "seed", "runtime_ms"]
SEED_ENV = "SYMPCAP_SEED"


@dataclass
class SuiteConfig:
    """Tolerances, seeds and budgets of a suite run."""

    tol_chain: float = 1e-4     # relative
    eps_sp: float = 1e-9
    ode_tol: float = 1e-10
    seed: int = 0
    n_starts: int = 16          # shooting starts per body
    restarts: int = 4           # shadow search restarts
    evals: int = 400            # shadow search evaluations per restart
    axiom_instances: int = 50
    width_samples: int = 500
    bodies: list | None = None  # (body_id, Body) pairs; None -> default suite
    timings: bool = False
    out: str | None = None

    def __post_init__(self):
        for name in ("tol_chain", "eps_sp", "ode_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_env(cls, **kw):
        """Config whose seed is taken from ``SYMPCAP_SEED`` when set."""
        cfg = cls(**kw)
        if os.environ.get(SEED_ENV):
            cfg.seed = int(os.environ[SEED_ENV])
        return cfg

    def shoot_config(self):
        return ehz_mod.ShootConfig(ode_tol=self.ode_tol, n_starts=self.n_starts, seed=self.seed)

    def search_config(self):
        return lincap.SearchConfig(restarts=self.restarts, evals=self.evals, seed=self.seed)


@dataclass
class BoundsReport:
    body_id: str
    n: int
    normj: float = float("nan")
    lower: float = float("nan")
    ehz: float = float("nan")
    ehz_method: str = ""
    cyl_lin: float = float("nan")
    cyl_budget: int = 0
    upper: float = float("nan")
    witness_shadow: float = float("nan")
    checks: list = field(default_factory=list)  # (name, passed, residual)
    seed: int = 0
    runtime_ms: dict = field(default_factory=dict)
    error: str = ""

    @property
    def chain_ok(self) -> bool:
        return not self.error and bool(self.checks) and all(c[1] for c in self.checks)

    @property
    def bracket(self):
        """Certified bracket for the cylindrical capacity."""
        return (self.lower, min(self.witness_shadow, self.cyl_lin))


# ----------------------------------------------------------------- bodies

def _need(spec, key):
    if key not in spec:
        raise BodySpecError(f"body spec of type {spec.get('type')!r} needs field {key!r}")
    return spec[key]


def _array(spec, key, ndim):
    try:
        a = np.asarray(_need(spec, key), dtype=float)
    except (TypeError, ValueError) as exc:
        raise BodySpecError(f"field {key!r} must be numeric") from exc
    if a.ndim != ndim or not np.isfinite(a).all():
        raise BodySpecError(f"field {key!r} must be a finite {ndim}-d array")
    return a


def _int(spec, key):
    v = _need(spec, key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise BodySpecError(f"field {key!r} must be a positive integer")
    return v


def body_from_spec(spec: dict) -> Body:
    """Build a body from a parsed body-spec document.

    Types: ``hpolytope`` (``rows``, or ``A`` and ``b``), ``vpolytope``
    (``vertices``), ``ellipsoid`` (``Q``), ``cube`` (``n``, ``radius``),
    ``crosspolytope`` (``n`` for R^{2n}, or ``dim``; ``radius``),
    ``ellipsoid_radii`` (``radii``), ``ball`` (``n``, ``radius``),
    ``linear_image`` (``base``, ``matrix``), ``lagrangian_product``
    (``left``, ``right``) and ``rotated_cube`` (``n``). An optional
    ``"symmetric": true`` is verified.
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise BodySpecError("body spec must be an object with a 'type' field")
    kind = spec["type"]
    try:
        if kind == "hpolytope":
            if "rows" in spec:
                K = HPolytope(_array(spec, "rows", 2))
            else:
                K = HPolytope.from_inequalities(_array(spec, "A", 2), _array(spec, "b", 1))
        elif kind == "vpolytope":
            K = VPolytope(_array(spec, "vertices", 2))
        elif kind == "ellipsoid":
            K = Ellipsoid(_array(spec, "Q", 2))
        elif kind == "cube":
            K = cube(_int(spec, "n"), float(spec.get("radius", 1.0)))
        elif kind == "crosspolytope":
            dim = _int(spec, "dim") if "dim" in spec else 2 * _int(spec, "n")
            K = cross_polytope(dim, float(spec.get("radius", 1.0)))
        elif kind == "ellipsoid_radii":
            K = ellipsoid_radii(_array(spec, "radii", 1))
        elif kind == "ball":
            K = ball(_int(spec, "n"), float(spec.get("radius", 1.0)))
        elif kind == "linear_image":
            K = LinearImage(body_from_spec(_need(spec, "base")), _array(spec, "matrix", 2))
        elif kind == "lagrangian_product":
            K = Product(body_from_spec(_need(spec, "left")), body_from_spec(_need(spec, "right")))
        elif kind == "rotated_cube":
            K = lincap.build_rotated_cube(_int(spec, "n"))
        else:
            raise BodySpecError(f"unknown body type {kind!r}")
    except RepresentationError as exc:
        if "origin" in str(exc):
            raise BodySpecError(str(exc), code="origin_exterior") from exc
        raise BodySpecError(str(exc)) from exc
    except DomainError as exc:
        raise BodySpecError(str(exc)) from exc
    if K.dim % 2:
        raise BodySpecError(f"bodies must live in an even dimension, got {K.dim}")
    if spec.get("symmetric") is True and not K.symmetric:
        raise BodySpecError("body is claimed symmetric but is not", code="asymmetric")
    return K


def load_body_spec(path) -> Body:
    """Read a JSON body spec from ``path``."""
    try:
        spec = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise BodySpecError(f"invalid JSON: {exc}") from exc
    return body_from_spec(spec)


def _truncated_cylinder(R: float, n: int = 2) -> Body:
    """``B^2(1) x [-R, R]^{2n-2}`` with the disc in the (q1, p1) plane."""
    K = Product(ball(1), hypercube(2 * n - 2, R))
    # product coordinates (q1, p1, q2, p2, ...) -> (q1..qn, p1..pn)
    order = [0] + [2 + 2 * i for i in range(n - 1)] + [1] + [3 + 2 * i for i in range(n - 1)]
    P = np.eye(2 * n)[order]
    return LinearImage(K, P)


def presets() -> dict:
    """Named bodies accepted by ``--body``."""
    rng1 = np.random.default_rng(11)
    rng2 = np.random.default_rng(12)
    return {
        "disc": lambda: ball(1),
        "square": lambda: hypercube(2),
        "random-n1": lambda: random_symmetric_polytope(2, 4, rng1),
        "ball": lambda: ball(2),
        "cube": lambda: cube(2),
        "cube-cross": lambda: Product(hypercube(2), cross_polytope(2)),
        "ellipsoid-1-2": lambda: ellipsoid_radii([1, 2]),
        "ellipsoid-1-3": lambda: ellipsoid_radii([1, 3]),
        "ellipsoid-2-2": lambda: ellipsoid_radii([2, 2]),
        "random-n2": lambda: random_symmetric_polytope(4, 5, rng2),
        "rotated-cube-2": lambda: lincap.build_rotated_cube(2),
        "cross": lambda: cross_polytope(4),
        "ball6": lambda: ball(3),
        "rotated-cube-4": lambda: lincap.build_rotated_cube(4),
    }


DEFAULT_SUITE = ["disc", "square", "random-n1", "ball", "cube", "cube-cross", "ellipsoid-1-2",
                 "ellipsoid-1-3", "ellipsoid-2-2", "random-n2", "rotated-cube-2"]


def resolve_body(name_or_path: str) -> Body:
    table = presets()
    if name_or_path in table:
        return table[name_or_path]()
    if Path(name_or_path).exists():
        return load_body_spec(name_or_path)
    raise BodySpecError(f"{name_or_path!r} is neither a preset nor a file")


def default_bodies():
    table = presets()
    return [(name, table[name]()) for name in DEFAULT_SUITE]


# --------------------------------------------------------------- sandwich

def _leq(a, b, tol):
    """One-sided relative check ``a <= b (1 + tol)``; returns (ok, margin)."""
    margin = b - a
    return bool(margin >= -tol * max(abs(a), abs(b), 1e-300)), float(margin)


def _orbit_checks(est, K, tol_chain):
    checks = []
    if not est.orbits:
        return checks
    body = est.orbits[0].body
    nj = est.diagnostics.get("shot_normj") or normj.norm_J(body).value
    ap = max(ehz_mod.verify_action_period(body, o) / o.period for o in est.orbits)
    checks.append(("action_period", bool(ap <= 1e-5), ap))
    worst = math.inf
    ok = True
    for o in est.orbits:
        try:
            t0, _ = ehz_mod.verify_return_lemma(body, o, tol_chain=1e-6, nj=nj)
            worst = min(worst, min(t0, o.period - t0) - 1.0 / nj)
        except SympcapError:
            ok = False
    checks.append(("return_lemma", ok, worst))
    tang = max(ehz_mod.tangency_residual(body, o) for o in est.orbits)
    checks.append(("tangency", bool(tang <= 1e-5), tang))
    if "shooting_min" in est.diagnostics:
        err = abs(est.diagnostics["shooting_min"] - est.value) / est.value
        checks.append(("ehz_cross_validation", bool(err <= 1e-4), err))
    return checks


def bounds_for_body(body_id: str, K: Body, cfg: SuiteConfig) -> BoundsReport:
    """All functionals and sandwich checks for one symmetric body."""
    rep = BoundsReport(body_id, K.dim // 2, seed=cfg.seed)
    tol = cfg.tol_chain
    clock = time.perf_counter
    try:
        if not K.symmetric:
            raise DomainError("the sandwich suite needs a centrally symmetric body")
        t = clock()
        nj = normj.norm_J(K, seed=cfg.seed)
        rep.normj = nj.value
        rep.lower = 1.0 / nj.value
        rep.upper = 4.0 / nj.value
        rep.runtime_ms["normj"] = (clock() - t) * 1e3

        t = clock()
        est = ehz_mod.ehz_estimate(K, cfg.shoot_config())
        rep.ehz = est.value
        rep.ehz_method = est.method_tag
        rep.runtime_ms["ehz"] = (clock() - t) * 1e3

        t = clock()
        wit = lincap.cylinder_witness(K)
        rep.witness_shadow = wit.shadow
        rep.runtime_ms["witness"] = (clock() - t) * 1e3

        t = clock()
        search = lincap.minimize_shadow(K, cfg.search_config())
        rep.cyl_lin = search.value
        rep.cyl_budget = search.budget_used
        rep.runtime_ms["shadow_search"] = (clock() - t) * 1e3

        checks = [
            ("lower<=ehz",) + _leq(rep.lower, rep.ehz, tol),
            ("ehz<=cyl_lin",) + _leq(rep.ehz, rep.cyl_lin, tol),
            ("cyl_lin<=upper",) + _leq(rep.cyl_lin, rep.upper, tol),
            ("witness<=upper",) + _leq(rep.witness_shadow, rep.upper, tol),
            ("witness<=product_bound",) + _leq(wit.shadow, wit.product_bound, 1e-8),
            ("witness<=4ehz",) + _leq(rep.witness_shadow, 4 * rep.ehz, tol),
        ]
        checks += _orbit_checks(est, K, tol)
        rep.checks = checks
    except SympcapError as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
    return rep


def run_sandwich_suite(bodies=None, config: SuiteConfig | None = None) -> list:
    """Bounds reports for ``(body_id, Body)`` pairs, in input order."""
    cfg = config or SuiteConfig()
    bodies = bodies if bodies is not None else (cfg.bodies or default_bodies())
    return [bounds_for_body(bid, K, cfg) for bid, K in bodies]


# ----------------------------------------------------------------- axioms

@dataclass
class PropertyResult:
    name: str
    instances: int
    violations: list  # descriptions of failing instances

    @property
    def passed(self) -> bool:
        return not self.violations


def _nested_pair(rng, dim):
    K = random_symmetric_polytope(dim, dim + 2, rng)
    extra = rng.standard_normal((2, dim))
    L = VPolytope(np.vstack([K.points, extra, -extra]))
    return K, L


def _functionals(K, S):
    """Monotone, 2-homogeneous functionals evaluated at a fixed map ``S``."""
    vals = {
        "inv_normj": 1.0 / normj.norm_J(K).value,
        "shadow": shadow_area(K, S),
        "inscribed": np.pi * lincap.inscribed_ball_radius(K, S) ** 2,
    }
    if K.dim == 2:
        vals["ehz_planar"] = ehz_mod.ehz_estimate(K).value
    return vals


def run_axiom_suite(config: SuiteConfig | None = None) -> dict:
    """Monotonicity, conformality and normalization checks of the computed functionals."""
    cfg = config or SuiteConfig()
    rng = np.random.default_rng(cfg.seed)
    N = cfg.axiom_instances
    results = []

    mono = PropertyResult("monotonicity", N, [])
    for i in range(N):
        dim = 2 if i % 2 == 0 else 4
        K, L = _nested_pair(rng, dim)
        S = random_symplectic(dim // 2, rng, 0.5)
        fk, fl = _functionals(K, S), _functionals(L, S)
        for key in fk:
            if fk[key] > fl[key] * (1 + 1e-9) + 1e-12:
                mono.violations.append(f"instance {i}: {key} {fk[key]:.12g} > {fl[key]:.12g}")
    results.append(mono)

    dil = PropertyResult("dilation", N, [])
    for i in range(N):
        dim = 2 if i % 2 == 0 else 4
        K = random_symmetric_polytope(dim, dim + 2, rng)
        lam = 2.0 if i % 4 < 2 else 0.5
        S = random_symplectic(dim // 2, rng, 0.5)
        f1, f2 = _functionals(K, S), _functionals(K.scaled(lam), S)
        for key in f1:
            want = lam ** 2 * f1[key]
            if abs(f2[key] - want) > 1e-9 * abs(want):
                dil.violations.append(f"instance {i}: {key} scaled {f2[key]:.12g} != {want:.12g}")
    results.append(dil)

    norm = PropertyResult("ball_bracket", 1, [])
    rep = bounds_for_body("ball", ball(2), cfg)
    lo, hi = rep.bracket
    if not (lo <= np.pi * (1 + cfg.tol_chain) and np.pi <= hi * (1 + cfg.tol_chain)):
        norm.violations.append(f"bracket [{lo}, {hi}] misses pi")
    results.append(norm)

    cyl = PropertyResult("truncated_cylinder", 3, [])
    brackets = []
    for R in (0.5, 1.0, 2.0):
        Z = _truncated_cylinder(R)
        lo = 1.0 / normj.norm_J(Z, seed=cfg.seed).value
        hi = shadow_area(Z, np.eye(4))
        brackets.append((R, lo, hi))
        if hi > np.pi * (1 + cfg.tol_chain) or lo > hi * (1 + cfg.tol_chain):
            cyl.violations.append(f"R={R}: bracket [{lo}, {hi}]")
    for (_, a, _), (R, b, _) in zip(brackets, brackets[1:]):
        if b < a * (1 - cfg.tol_chain):
            cyl.violations.append(f"lower end decreased at R={R}")
    results.append(cyl)

    tri = PropertyResult("nonsymmetric_bounds", 1, [])
    T = VPolytope([[0, 0], [2, 0], [0, 2]], check=False)
    lo, hi = normj.nonsym_bounds(T)
    if not lo <= 2.0 <= hi:
        tri.violations.append(f"triangle area 2 outside [{lo}, {hi}]")
    results.append(tri)

    return {
        "seed": cfg.seed,
        "passed": all(r.passed for r in results),
        "properties": [{"name": r.name, "instances": r.instances, "passed": r.passed,
                        "violations": r.violations} for r in results],
        "cylinder_brackets": [{"R": R, "lower": lo, "upper": hi} for R, lo, hi in brackets],
    }


# ----------------------------------------------------------- rotated cube

def run_rotated_cube_suite(n_list=(2, 4, 8, 16, 64), config: SuiteConfig | None = None) -> dict:
    """Certified linear ingredients of the rotated-cube example for each even ``n``."""
    cfg = config or SuiteConfig()
    bad = [n for n in n_list if n < 2 or n % 2]
    if bad:
        raise DomainError(f"rotated cube needs even n >= 2, got {bad}")
    rows = []
    for n in n_list:
        O = lincap.rotated_cube_matrix(n)
        orth = float(np.abs(O.T @ O - np.eye(n)).max())
        try:
            linf = lincap.check_linf_columns(O)
            linf_ok = True
        except SympcapError:
            linf, linf_ok = float(np.abs(O).max()), False
        incl = lincap.check_cross_polytope_inclusion(n)
        samples = cfg.width_samples if n <= 8 else max(1, cfg.width_samples // 10)
        width = lincap.check_cube_lin_width(block_diag(np.eye(n), O), samples, cfg.seed)
        paper_bound = math.sqrt(n / 2)
        rows.append({
            "n": n,
            "orthogonality_residual": orth,
            "orthogonality_ok": orth <= 1e-12,
            "linf_columns": linf,
            "linf_bound": math.sqrt(2 / n),
            "linf_ok": linf_ok,
            "cross_polytope_inclusion": incl,
            "width_samples": samples,
            "lin_width_max": width.max_value,
            "lin_width_ok": width.ok,
            "nonlinear_lower_bound": paper_bound,
            "gap_ratio": paper_bound / math.pi,
            "nonlinear_claim": "reported, not verified",
        })
    ok = all(r["orthogonality_ok"] and r["linf_ok"] and r["cross_polytope_inclusion"]
             and r["lin_width_ok"] for r in rows)
    return {"seed": cfg.seed, "passed": ok, "rows": rows}


# ---------------------------------------------------------------- reports

def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return "" if math.isnan(x) else format(x, ".12g")
    return str(x)


def _report_dict(r: BoundsReport, timings: bool) -> dict:
    d = asdict(r)
    d["checks"] = [{"name": c[0], "passed": bool(c[1]), "residual": float(c[2])} for c in r.checks]
    d["chain_ok"] = r.chain_ok
    if not timings:
        d["runtime_ms"] = {}
    return d


def report_to_json(reports, timings=False) -> str:
    return json.dumps([_report_dict(r, timings) for r in reports], indent=2, sort_keys=True) + "\n"


def report_from_json(text: str) -> list:
    out = []
    for d in json.loads(text):
        d = dict(d)
        d.pop("chain_ok", None)
        d["checks"] = [(c["name"], c["passed"], c["residual"]) for c in d["checks"]]
        out.append(BoundsReport(**d))
    return out


def report_to_csv(reports, timings=False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        runtime = _fmt(float(sum(r.runtime_ms.values()))) if timings and r.runtime_ms else ""
        w.writerow([r.body_id, r.n, _fmt(r.normj), _fmt(r.lower), _fmt(r.ehz), r.ehz_method,
                    _fmt(r.witness_shadow), _fmt(r.cyl_lin), _fmt(r.upper), _fmt(r.chain_ok),
                    r.seed, runtime])
    return buf.getvalue()


def emit_report(reports, format: str = "csv", path=None, timings: bool = False) -> str:
    """Serialize reports as CSV or JSON; write to ``path`` when given."""
    if format == "csv":
        text = report_to_csv(reports, timings)
    elif format == "json":
        text = report_to_json(reports, timings)
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
    if path is not None:
        Path(path).write_text(text)
    return text
