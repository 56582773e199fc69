import csv
import io
import json

import numpy as np
import pytest

from sympcap import cli, harness
from sympcap.bodies import Ellipsoid, HPolytope, gauge
from sympcap.errors import BodySpecError, DomainError
from sympcap.harness import (
    CSV_COLUMNS, BoundsReport, SuiteConfig, body_from_spec, emit_report, load_body_spec,
    report_from_json, run_rotated_cube_suite, run_sandwich_suite,
)

QUICK = dict(n_starts=4, restarts=1, evals=60)


def _write_spec(tmp_path, spec, name="body.json"):
    p = tmp_path / name
    p.write_text(json.dumps(spec))
    return p


# ------------------------------------------------------------ body specs

def test_load_cube(tmp_path):
    K = load_body_spec(_write_spec(tmp_path, {"type": "cube", "n": 2}))
    assert isinstance(K, HPolytope) and K.dim == 4
    assert gauge(K, [1.0, -1.0, 0.5, 0.0]) == pytest.approx(1.0)


def test_load_ellipsoid_radii(tmp_path):
    K = load_body_spec(_write_spec(tmp_path, {"type": "ellipsoid_radii", "radii": [1, 2]}))
    assert isinstance(K, Ellipsoid) and K.dim == 4
    assert gauge(K, [0, 2.0, 0, 0]) == pytest.approx(1.0)


@pytest.mark.parametrize("spec", [
    {"type": "hpolytope", "rows": [[1, 0], [-1, 0], [0, 1], [0, -1]]},
    {"type": "hpolytope", "A": [[1, 0], [-1, 0], [0, 1], [0, -1]], "b": [2, 2, 1, 1]},
    {"type": "vpolytope", "vertices": [[1, 0], [0, 1], [-1, 0], [0, -1]]},
    {"type": "ellipsoid", "Q": [[1, 0], [0, 4]]},
    {"type": "crosspolytope", "n": 2, "radius": 2.0},
    {"type": "ball", "n": 3},
    {"type": "linear_image", "base": {"type": "cube", "n": 1}, "matrix": [[2, 0], [0, 0.5]]},
    {"type": "lagrangian_product", "left": {"type": "cube", "n": 1},
     "right": {"type": "crosspolytope", "dim": 2}},
    {"type": "rotated_cube", "n": 2},
    {"type": "cube", "n": 1, "symmetric": True},
])
def test_spec_types(spec):
    K = body_from_spec(spec)
    assert K.dim % 2 == 0
    assert K.symmetric


@pytest.mark.parametrize("spec", [
    [],
    {"n": 2},
    {"type": "banana"},
    {"type": "cube"},
    {"type": "cube", "n": "2"},
    {"type": "cube", "n": True},
    {"type": "vpolytope", "vertices": [1, 2]},
    {"type": "vpolytope", "vertices": [["a", 1]]},
    {"type": "ellipsoid", "Q": [[1, 0], [0, float("nan")]]},
    {"type": "crosspolytope", "dim": 3},
    {"type": "rotated_cube", "n": 3},
])
def test_schema_errors(spec):
    with pytest.raises(BodySpecError) as exc:
        body_from_spec(spec)
    assert exc.value.code == "schema"


def test_origin_exterior():
    with pytest.raises(BodySpecError) as exc:
        body_from_spec({"type": "vpolytope", "vertices": [[1, 0], [0, 1]]})
    assert exc.value.code == "origin_exterior"


def test_asymmetric_claim():
    spec = {"type": "vpolytope", "vertices": [[2, 0], [-1, 1], [-1, -1]], "symmetric": True}
    with pytest.raises(BodySpecError) as exc:
        body_from_spec(spec)
    assert exc.value.code == "asymmetric"
    spec.pop("symmetric")
    assert not body_from_spec(spec).symmetric


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(BodySpecError):
        load_body_spec(p)


def test_resolve_body(tmp_path):
    assert harness.resolve_body("ball").dim == 4
    assert harness.resolve_body(str(_write_spec(tmp_path, {"type": "ball", "n": 1}))).dim == 2
    with pytest.raises(BodySpecError):
        harness.resolve_body("no-such-body")


def test_default_suite_shape():
    bodies = harness.default_bodies()
    assert len(bodies) >= 10
    assert all(K.symmetric and K.dim <= 6 for _, K in bodies)


# ------------------------------------------------------------ config

def test_config_rejects_nonpositive_tolerances():
    for name in ("tol_chain", "eps_sp", "ode_tol"):
        with pytest.raises(ValueError):
            SuiteConfig(**{name: 0.0})


def test_seed_from_env(monkeypatch):
    monkeypatch.setenv("SYMPCAP_SEED", "17")
    assert SuiteConfig.from_env().seed == 17
    monkeypatch.delenv("SYMPCAP_SEED")
    assert SuiteConfig.from_env().seed == 0


# ------------------------------------------------------------ suites

@pytest.fixture(scope="module")
def ball_reports():
    cfg = SuiteConfig(**QUICK)
    return run_sandwich_suite([("ball", harness.resolve_body("ball")),
                               ("ellipsoid-1-2", harness.resolve_body("ellipsoid-1-2"))], cfg)


def test_ball_bounds(ball_reports):
    r = ball_reports[0]
    assert r.chain_ok, r.checks
    assert (r.lower, r.ehz, r.cyl_lin, r.upper) == pytest.approx((1, np.pi, np.pi, 4), abs=1e-4)
    lo, hi = r.bracket
    assert lo <= np.pi <= hi + 1e-9


def test_ellipsoid_bounds(ball_reports):
    r = ball_reports[1]
    assert r.chain_ok, r.checks
    assert (r.lower, r.ehz, r.cyl_lin, r.upper) == pytest.approx((1, np.pi, np.pi, 4), abs=1e-4)


def test_asymmetric_body_recorded_not_raised():
    T = body_from_spec({"type": "vpolytope", "vertices": [[2, 0], [-1, 1], [-1, -1]]})
    (r,) = run_sandwich_suite([("tri", T)], SuiteConfig(**QUICK))
    assert not r.chain_ok
    assert "DomainError" in r.error


def test_rotated_cube_suite():
    res = run_rotated_cube_suite([2, 64], SuiteConfig(width_samples=50))
    assert res["passed"]
    r2, r64 = res["rows"]
    assert r2["gap_ratio"] == pytest.approx(1 / np.pi)
    assert r64["nonlinear_lower_bound"] == pytest.approx(np.sqrt(32))
    assert r64["nonlinear_claim"] == "reported, not verified"
    with pytest.raises(DomainError):
        run_rotated_cube_suite([3])


# ------------------------------------------------------------ reports

def test_csv_columns(ball_reports):
    text = emit_report(ball_reports, "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == 3
    assert rows[1][0] == "ball" and rows[1][9] == "true"
    assert rows[1][11] == ""  # runtime_ms stays blank without timings


def test_csv_timings(ball_reports):
    rows = list(csv.reader(io.StringIO(emit_report(ball_reports, "csv", timings=True))))
    assert float(rows[1][11]) > 0


def test_json_round_trip(ball_reports):
    text = emit_report(ball_reports, "json", timings=True)
    back = report_from_json(text)
    assert back == ball_reports
    assert emit_report(back, "json", timings=True) == text


def test_emit_to_path(tmp_path, ball_reports):
    p = tmp_path / "r.csv"
    text = emit_report(ball_reports, "csv", path=p)
    assert p.read_text() == text
    with pytest.raises(ValueError):
        emit_report(ball_reports, "xml")


def test_chain_violation_row():
    r = BoundsReport("x", 1, checks=[("lower<=ehz", False, -1.0)])
    assert "false" in emit_report([r], "csv").splitlines()[1]


# ------------------------------------------------------------ CLI

def _run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def test_cli_bounds_single(capsys):
    code, out = _run(["bounds", "--body", "disc", "--starts", "4", "--restarts", "1",
                      "--budget", "40"], capsys)
    assert code == 0
    lines = out.out.strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1].startswith("disc,1,")


def test_cli_exit_one_on_failed_chain(tmp_path, capsys):
    # an impossible tolerance cannot fail a one-sided check, so use an
    # asymmetric body: the suite records the failure and exits 1
    p = _write_spec(tmp_path, {"type": "vpolytope", "vertices": [[2, 0], [-1, 1], [-1, -1]]})
    code, out = _run(["bounds", "--body", str(p), "--format", "json"], capsys)
    assert code == 1
    assert json.loads(out.out)[0]["chain_ok"] is False


def test_cli_exit_two_on_bad_input(tmp_path, capsys):
    p = _write_spec(tmp_path, {"type": "vpolytope", "vertices": [[1, 0], [0, 1]]})
    code, out = _run(["witness", "--body", str(p)], capsys)
    assert code == 2
    assert "origin_exterior" in out.err
    code, out = _run(["witness", "--body", "nothing-here"], capsys)
    assert code == 2


def test_cli_witness(capsys):
    code, out = _run(["witness", "--body", "cube"], capsys)
    assert code == 0
    d = json.loads(out.out)
    assert d["passed"] and d["shadow"] == pytest.approx(4.0, abs=1e-6)


def test_cli_shadow_search_and_ehz(capsys):
    code, out = _run(["shadow-search", "--body", "ellipsoid-1-3", "--restarts", "1",
                      "--budget", "50"], capsys)
    assert code == 0
    assert json.loads(out.out)["value"] == pytest.approx(np.pi, abs=1e-4)
    code, out = _run(["ehz", "--body", "disc"], capsys)
    assert code == 0
    assert json.loads(out.out)["value"] == pytest.approx(np.pi, abs=1e-9)


def test_cli_rotated_cube(tmp_path, capsys):
    out_path = tmp_path / "rc.json"
    code, _ = _run(["rotated-cube", "--n", "2", "4", "--out", str(out_path)], capsys)
    assert code == 0
    assert json.loads(out_path.read_text())["passed"]
    code, _ = _run(["rotated-cube", "--n", "3"], capsys)
    assert code == 2


def test_cli_seed_precedence(monkeypatch, capsys):
    monkeypatch.setenv("SYMPCAP_SEED", "5")
    args = ["shadow-search", "--body", "disc", "--restarts", "1", "--budget", "20"]
    _, out = _run(args, capsys)
    assert json.loads(out.out)["seed"] == 5
    _, out = _run(args + ["--seed", "9"], capsys)
    assert json.loads(out.out)["seed"] == 9


def test_cli_deterministic(capsys):
    args = ["bounds", "--body", "square", "--seed", "3", "--starts", "4", "--restarts", "1",
            "--budget", "40"]
    _, a = _run(args, capsys)
    _, b = _run(args, capsys)
    assert a.out == b.out
