"""Command line entry point: ``sympcap <verb> [options]``.

Verbs
-----
bounds        sandwich report for one body or the default suite
axioms        monotonicity / conformality / normalization checks
rotated-cube  certified checks of the rotated-cube construction
witness       explicit cylinder witness for a body
shadow-search minimal shadow found over Sp(2n)
ehz           EHZ capacity estimate

The exit code is 0 iff every certified check passed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import ehz as ehz_mod
from . import harness, lincap, normj
from .errors import SympcapError


def _parser():
    p = argparse.ArgumentParser(prog="sympcap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, body_default=None):
        sp.add_argument("--body", default=body_default,
                        help="preset name or path to a body-spec JSON file")
        sp.add_argument("--seed", type=int, default=None,
                        help="seed (default: $SYMPCAP_SEED or 0)")
        sp.add_argument("--budget", type=int, default=None,
                        help="search evaluations per restart")
        sp.add_argument("--tol", type=float, default=None, help="relative chain tolerance")
        sp.add_argument("--out", default=None, help="output file (default: stdout)")
        sp.add_argument("--format", choices=["csv", "json"], default=None)

    common(sub.add_parser("bounds", help="sandwich report"), body_default="suite")
    for verb in ("witness", "shadow-search", "ehz"):
        common(sub.add_parser(verb), body_default="ball")
    common(sub.add_parser("axioms"))
    rc = sub.add_parser("rotated-cube")
    common(rc)
    rc.add_argument("--n", type=int, nargs="+", default=[2, 4, 8, 16, 64])
    for sp in sub.choices.values():
        sp.add_argument("--timings", action="store_true",
                        help="fill runtime_ms (makes output non-deterministic)")
        sp.add_argument("--restarts", type=int, default=None, help="search restarts")
        sp.add_argument("--starts", type=int, default=None, help="shooting starts")
    return p


def _config(args):
    kw = {}
    if args.tol is not None:
        kw["tol_chain"] = args.tol
    if args.budget is not None:
        kw["evals"] = args.budget
    if args.restarts is not None:
        kw["restarts"] = args.restarts
    if args.starts is not None:
        kw["n_starts"] = args.starts
    cfg = harness.SuiteConfig.from_env(timings=args.timings, out=args.out, **kw)
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _write(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj):
    def default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (np.floating, np.integer)):
            return o.item()
        raise TypeError(type(o).__name__)
    return json.dumps(obj, indent=2, sort_keys=True, default=default) + "\n"


def _bodies(args):
    if args.body in (None, "suite"):
        return harness.default_bodies()
    return [(os.path.splitext(os.path.basename(args.body))[0], harness.resolve_body(args.body))]


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _config(args)
        if args.verb == "bounds":
            reports = harness.run_sandwich_suite(_bodies(args), cfg)
            text = harness.emit_report(reports, args.format or "csv", None, cfg.timings)
            _write(text, args.out)
            return 0 if all(r.chain_ok for r in reports) else 1
        if args.verb == "axioms":
            res = harness.run_axiom_suite(cfg)
            _write(_dump(res), args.out)
            return 0 if res["passed"] else 1
        if args.verb == "rotated-cube":
            res = harness.run_rotated_cube_suite(args.n, cfg)
            _write(_dump(res), args.out)
            return 0 if res["passed"] else 1
        K = harness.resolve_body(args.body)
        if args.verb == "witness":
            w = lincap.cylinder_witness(K)
            upper = 4.0 / normj.norm_J(K).value
            ok = w.shadow <= upper * (1 + cfg.tol_chain) and w.shadow <= w.product_bound + 1e-8
            _write(_dump({"map": w.map.linear, "shadow": w.shadow, "product_bound": w.product_bound,
                          "upper": upper, "v": w.v_used, "w": w.w_used, "passed": bool(ok)}), args.out)
            return 0 if ok else 1
        if args.verb == "shadow-search":
            r = lincap.minimize_shadow(K, cfg.search_config())
            _write(_dump({"value": r.value, "map": r.best.map.linear, "history": r.history,
                          "seed": r.seed, "budget_used": r.budget_used,
                          "exhausted": r.exhausted}), args.out)
            return 0
        if args.verb == "ehz":
            sc = cfg.shoot_config()
            est = ehz_mod.ehz_estimate(K, sc)
            ok = est.value >= est.lower_certificate * (1 - cfg.tol_chain) if K.symmetric else True
            _write(_dump({"value": est.value, "method": est.method_tag,
                          "lower_certificate": est.lower_certificate,
                          "orbits": [{"period": o.period, "action": o.action, "start": o.start}
                                     for o in est.orbits],
                          "passed": bool(ok)}), args.out)
            return 0 if ok else 1
    except SympcapError as exc:
        code = getattr(exc, "code", None)
        print(f"error: {exc}" + (f" [{code}]" if code else ""), file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
