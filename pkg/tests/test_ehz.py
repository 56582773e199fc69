import numpy as np
import pytest
from shapely.geometry import MultiPoint

from sympcap import bodies as B
from sympcap.ehz import (Orbit, ShootConfig, action, boundary_starts, ehz_estimate,
                         gradient_gauge, shoot_all, shoot_characteristic, signed_action,
                         tangency_residual, verify_action_period, verify_return_lemma)
from sympcap.errors import (ClosureError, LemmaViolation, NonClosureError, SizeError,
                            SmoothnessError, SymmetryError)
from sympcap.normj import norm_J

FAST = ShootConfig(n_starts=8)


def _circle(m=1000, r=1.0, a=1.0, b=1.0, reverse=False):
    t = np.linspace(0, 2 * np.pi, m + 1)
    if reverse:
        t = t[::-1]
    return Orbit(np.column_stack([a * r * np.cos(t), b * r * np.sin(t)]), 2 * np.pi)


@pytest.fixture(scope="module")
def ball_orbit():
    K = B.ball(2)
    return K, shoot_characteristic(K, np.eye(4)[0])


# ---------------------------------------------------------------- gradients

@pytest.mark.parametrize("body", [B.ellipsoid_radii([1, 2]),
                                  B.SmoothedPolytope.from_body(B.cube(2)),
                                  B.LinearImage(B.ball(2), np.diag([1, 2, 1, 0.5]))])
def test_gradient_euler_and_finite_differences(body, rng):
    X = rng.standard_normal((20, 4))
    X = X / body.gauge(X)[:, None]
    G = gradient_gauge(body, X)
    np.testing.assert_allclose((G * X).sum(axis=1), 1.0, atol=1e-12)
    h = 1e-6
    for i in range(4):
        e = np.eye(4)[i]
        fd = (body.gauge(X + h * e) - body.gauge(X - h * e)) / (2 * h)
        np.testing.assert_allclose(G[:, i], fd, atol=1e-6)
    # gradients lie on the boundary of the polar body
    np.testing.assert_allclose(body.polar().gauge(G), 1.0, atol=1e-6)


def test_gradient_errors():
    with pytest.raises(SmoothnessError):
        gradient_gauge(B.cube(2), np.ones(4))
    with pytest.raises(ValueError):
        gradient_gauge(B.ball(2), np.zeros(4))


# ---------------------------------------------------------------- action

def test_action_of_circles():
    assert abs(action(_circle()) - np.pi) <= 1e-5
    assert signed_action(_circle()) == pytest.approx(np.pi, abs=1e-5)
    assert signed_action(_circle(reverse=True)) == pytest.approx(-np.pi, abs=1e-5)
    assert action(_circle(a=1, b=2)) == pytest.approx(2 * np.pi, abs=1e-5)
    assert action(_circle(r=3)) == pytest.approx(9 * np.pi, abs=1e-4)


def test_action_in_higher_dimension_is_sum_of_areas():
    t = np.linspace(0, 2 * np.pi, 513)
    # (q1, q2, p1, p2) = (cos t, 2 cos t, sin t, 2 sin t): areas 1·π + 4·π
    Y = np.column_stack([np.cos(t), 2 * np.cos(t), np.sin(t), 2 * np.sin(t)])
    assert action(Orbit(Y, 2 * np.pi)) == pytest.approx(5 * np.pi, abs=1e-9)


def test_open_loop_rejected():
    t = np.linspace(0, np.pi, 100)
    o = Orbit(np.column_stack([np.cos(t), np.sin(t)]), np.pi)
    assert np.isnan(o.action)
    with pytest.raises(ClosureError):
        action(o)


# ---------------------------------------------------------------- shooting

def test_ball_orbit(ball_orbit):
    K, o = ball_orbit
    assert o.period == pytest.approx(2 * np.pi, abs=1e-8)
    assert o.action == pytest.approx(np.pi, abs=1e-8)
    assert verify_action_period(K, o) / o.period <= 1e-5
    assert tangency_residual(K, o) <= 1e-5


def test_ball_return_lemma(ball_orbit):
    K, o = ball_orbit
    t0, chord = verify_return_lemma(K, o)
    assert t0 == pytest.approx(np.pi / 3, abs=1e-4)
    assert chord >= 1 - 1e-6
    assert min(t0, o.period - t0) >= 1 / norm_J(K).value - 1e-6


def test_return_lemma_violation_on_short_arc():
    K = B.ball(1)
    t = np.linspace(0, 0.5, 50)
    arc = Orbit(np.column_stack([np.cos(t), np.sin(t)]), 0.5)
    with pytest.raises(LemmaViolation):
        verify_return_lemma(K, arc)


def test_action_period_negative_control():
    # a circle of radius 2 is not a characteristic of the unit disc
    K = B.ball(1)
    fake = _circle(r=2.0)
    assert verify_action_period(K, fake) / fake.period > 1e-2


@pytest.mark.parametrize("plane, expected", [(0, np.pi), (1, 4 * np.pi)])
def test_ellipsoid_planar_orbits(plane, expected):
    K = B.ellipsoid_radii([1, 2])
    x0 = np.eye(4)[plane] * (1 if plane == 0 else 2)
    o = shoot_characteristic(K, x0)
    assert o.action == pytest.approx(expected, abs=1e-7)
    assert o.period == pytest.approx(2 * expected, abs=1e-6)


def test_shoot_input_checks():
    with pytest.raises(ValueError):
        shoot_characteristic(B.ball(2), 0.5 * np.eye(4)[0])
    with pytest.raises(SmoothnessError):
        shoot_characteristic(B.cube(2), np.ones(4))
    with pytest.raises(NonClosureError):
        shoot_characteristic(B.ball(2), np.eye(4)[0], ShootConfig(max_time=0.5))


def test_boundary_starts_on_boundary_and_seeded():
    K = B.ellipsoid_radii([1, 2])
    X = boundary_starts(K, 16, seed=3)
    np.testing.assert_allclose(K.gauge(X), 1.0, atol=1e-12)
    np.testing.assert_array_equal(X, boundary_starts(K, 16, seed=3))
    assert not np.allclose(X, boundary_starts(K, 16, seed=4))


def test_shoot_all_orbits_are_characteristics():
    K = B.ellipsoid_radii([1, 2])
    orbits, diag = shoot_all(K, FAST)
    assert orbits and diag["starts"] == 8
    for o in orbits:
        assert verify_action_period(K, o) / o.period <= 1e-5
        assert tangency_residual(K, o) <= 1e-5


# ---------------------------------------------------------------- estimator

def test_planar_closed_forms(rng):
    assert ehz_estimate(B.ball(1, 2.0)).value == pytest.approx(4 * np.pi, abs=1e-9)
    assert ehz_estimate(B.hypercube(2)).value == pytest.approx(4.0, abs=1e-12)
    for _ in range(5):
        P = rng.standard_normal((6, 2))
        K = B.VPolytope(np.vstack([P, -P]))
        ref = MultiPoint([tuple(p) for p in K.points]).convex_hull.area
        est = ehz_estimate(K)
        assert est.method == "planar-area"
        assert abs(est.value - ref) <= 1e-9
    T = B.VPolytope([[-1, -1], [2, -1], [-1, 2]])
    assert ehz_estimate(T).value == pytest.approx(4.5)


def test_ellipsoid_closed_form_and_cross_validation():
    est = ehz_estimate(B.ellipsoid_radii([1, 2]), FAST)
    assert est.method == "closed-form"
    assert est.value == pytest.approx(np.pi, abs=1e-12)
    assert est.diagnostics["shooting_min"] == pytest.approx(np.pi, abs=1e-4)
    assert est.lower_certificate <= est.value


def test_dilation_scales_by_lambda_squared():
    for lam in (0.5, 2.0):
        E = B.ellipsoid_radii([1, 3])
        assert ehz_estimate(E.scaled(lam), ShootConfig(cross_validate=False)).value == \
            pytest.approx(lam ** 2 * np.pi, rel=1e-12)


def test_smoothed_cube_estimate():
    est = ehz_estimate(B.cube(2), FAST)
    assert est.method_tag == "shooting-smoothed-m8"
    # the smoothed body lies inside the cube, whose capacity is 4
    assert est.lower_certificate <= est.value <= 4.0 + 1e-9
    assert est.value > 3.8
    for o in est.orbits:
        assert verify_action_period(o.body or B.cube(2), o) / o.period <= 1e-5


def test_estimator_errors():
    with pytest.raises(SymmetryError):
        ehz_estimate(B.VPolytope(np.vstack([np.eye(4), -np.ones((1, 4))])))
    with pytest.raises(SizeError):
        ehz_estimate(B.cube(4))
    with pytest.raises(SmoothnessError):
        ehz_estimate(B.PolarBody(B.SmoothedPolytope.from_body(B.cube(2))))
    big = ehz_estimate(B.ball(4), ShootConfig(cross_validate=False))
    assert big.value == pytest.approx(np.pi)
