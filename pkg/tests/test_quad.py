import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from betapoly.quad import (
    DivergenceError,
    QuadratureError,
    QuadResult,
    integrate_finite,
    integrate_half_line,
    integrate_real_line,
)


def beta_fn(a, b):
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def ball_weight(beta):
    # (1 - h^2)^beta on [-1, 1]
    return beta_fn(0.5, beta + 1)


def ball_weight_distance_form(beta):
    # the same integral with u = 1 - |h|: 2 * int_0^1 (u (2 - u))^beta du
    return lambda u: 2.0 * (u * (2.0 - u)) ** beta


def line_weight(q):
    # (1 + h^2)^-q on R
    return beta_fn(0.5, q - 0.5)


FINITE = [
    ("constant", lambda x: np.ones_like(x), 0.0, 1.0, 1.0),
    ("polynomial", lambda x: (1 - x * x) ** 3, 0.0, 1.0, 16 / 35),
    # endpoint singularities sit at the origin, where floats resolve them
    ("arcsine, distance form", ball_weight_distance_form(-0.5), 0.0, 1.0, math.pi),
    ("ball beta=-0.25, distance form", ball_weight_distance_form(-0.25), 0.0, 1.0, ball_weight(-0.25)),
    ("ball beta=-0.6, distance form", ball_weight_distance_form(-0.6), 0.0, 1.0, ball_weight(-0.6)),
    ("ball beta=2.5", lambda x: (1 - x * x) ** 2.5, -1.0, 1.0, ball_weight(2.5)),
    ("ball beta=-0.75, distance form", ball_weight_distance_form(-0.75), 0.0, 1.0, ball_weight(-0.75)),
    ("ball beta=-0.9, distance form", ball_weight_distance_form(-0.9), 0.0, 1.0, ball_weight(-0.9)),
    ("ball beta=-0.99, distance form", ball_weight_distance_form(-0.99), 0.0, 1.0, ball_weight(-0.99)),
    ("inverse sqrt", lambda x: x ** -0.5, 0.0, 1.0, 2.0),
    ("logarithm", lambda x: np.log(x), 0.0, 1.0, -1.0),
    ("exponential", np.exp, -2.0, 3.0, math.exp(3) - math.exp(-2)),
    ("beta kernel", lambda x: x ** -0.3 * (1 - x) ** 1.5, 0.0, 1.0, beta_fn(0.7, 2.5)),
    ("log over sqrt", lambda x: np.log(x) / np.sqrt(x), 0.0, 1.0, -4.0),
]

LINE = [
    ("cauchy", lambda h: 1 / (1 + h * h), math.pi),
    ("gaussian", lambda h: np.exp(-h * h), math.sqrt(math.pi)),
    ("tail q=0.55", lambda h: (1 + h * h) ** -0.55, line_weight(0.55)),
    ("tail q=0.75", lambda h: (1 + h * h) ** -0.75, line_weight(0.75)),
    ("tail q=1.5", lambda h: (1 + h * h) ** -1.5, 2.0),
    ("tail q=7", lambda h: (1 + h * h) ** -7.0, line_weight(7.0)),
]

HALF = [
    ("q=2", lambda h: (1 + h * h) ** -2.0, math.pi / 4),
    ("second moment", lambda h: h * h / (1 + h * h) ** 3, math.pi / 16),
]


def _bound_holds(res: QuadResult, exact: float) -> bool:
    # the estimate must cover the true error, allowing for final rounding of the sum
    return abs(res.value - exact) <= res.abs_error_estimate + 8e-16 * abs(exact)


@pytest.mark.parametrize("name,f,a,b,exact", FINITE, ids=[c[0] for c in FINITE])
def test_finite_battery(name, f, a, b, exact):
    res = integrate_finite(f, a, b)
    assert res.value == pytest.approx(exact, rel=1e-12, abs=1e-12)
    assert _bound_holds(res, exact)
    assert res.abs_error_estimate >= 0 and res.evaluations > 0


@pytest.mark.parametrize("name,f,exact", LINE, ids=[c[0] for c in LINE])
def test_real_line_battery(name, f, exact):
    res = integrate_real_line(f)
    assert res.value == pytest.approx(exact, rel=1e-12, abs=1e-12)
    assert _bound_holds(res, exact)


@pytest.mark.parametrize("name,f,exact", HALF, ids=[c[0] for c in HALF])
def test_half_line_battery(name, f, exact):
    res = integrate_half_line(f)
    assert res.value == pytest.approx(exact, rel=1e-12, abs=1e-12)
    assert _bound_holds(res, exact)


def test_battery_has_twenty_integrals():
    assert len(FINITE) + len(LINE) + len(HALF) >= 20


def test_kink_at_origin_with_breakpoint():
    f = lambda h: np.abs(h) ** 0.5 * (1 + h * h) ** -2  # noqa: E731
    # int_R |h|^{1/2} (1+h^2)^{-2} = B(3/4, 5/4)
    exact = beta_fn(0.75, 1.25)
    res = integrate_real_line(f, points=[0.0, 1.0])
    assert res.value == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize(
    "f,a,b",
    [(lambda x: np.exp(x), 0.0, 1.0), (lambda x: x ** -0.5, 0.0, 1.0), (lambda x: np.log(x), 0.0, 1.0),
     (lambda x: np.sin(20 * x), 0.0, 3.0), (lambda x: 1 / (1e-3 + (x - 0.3) ** 2), 0.0, 1.0)],
)
def test_evaluation_count_matches_quadpack(f, a, b):
    # the adaptive logic is a port of QAGS, so agreement should be exact
    tol = 1e-12
    ref = integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=10_000, full_output=1)
    res = integrate_finite(f, a, b, tol)
    assert res.evaluations == ref[2]["neval"]
    assert res.value == pytest.approx(ref[0], rel=1e-13, abs=1e-15)


@pytest.mark.parametrize(
    "f,a,b,pts",
    [(lambda x: np.abs(x - 0.3) ** -0.5, 0.0, 1.0, [0.3]), (lambda x: np.abs(x) ** 0.5 * np.exp(x), -1.0, 2.0, [0.0])],
)
def test_breakpoint_evaluation_count_matches_quadpack(f, a, b, pts):
    tol = 1e-12
    ref = integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=10_000, points=pts, full_output=1)
    res = integrate_finite(f, a, b, tol, points=pts)
    assert res.evaluations == ref[2]["neval"]
    assert res.value == pytest.approx(ref[0], rel=1e-13, abs=1e-15)


def test_deterministic():
    f = lambda x: (1 - x * x) ** -0.3  # noqa: E731
    assert integrate_finite(f, -1.0, 1.0) == integrate_finite(f, -1.0, 1.0)


def test_divergent_tail_is_reported():
    with pytest.raises(DivergenceError):
        integrate_real_line(lambda h: (1 + h * h) ** -0.5)
    with pytest.raises(DivergenceError):
        integrate_half_line(lambda h: 1 / (1 + h))


def test_panel_budget_exhaustion():
    with pytest.raises(QuadratureError) as info:
        integrate_finite(lambda x: np.sin(1 / x), 1e-6, 1.0, 1e-14, limit=5)
    assert isinstance(info.value.result, QuadResult)


def test_argument_validation():
    f = lambda x: x  # noqa: E731
    with pytest.raises(ValueError):
        integrate_finite(f, 1.0, 0.0)
    with pytest.raises(ValueError):
        integrate_finite(f, 0.0, math.inf)
    with pytest.raises(ValueError):
        integrate_finite(f, 0.0, 1.0, tol=0.0)


@given(st.floats(-0.95, 4.0))
def test_distance_form_weight_property(beta):
    res = integrate_finite(ball_weight_distance_form(beta), 0.0, 1.0)
    assert res.value == pytest.approx(ball_weight(beta), rel=1e-11)


@given(st.floats(0.55, 30.0))
def test_line_weight_property(q):
    f = lambda h: (1 + h * h) ** -q  # noqa: E731
    res = integrate_real_line(f)
    assert res.value == pytest.approx(line_weight(q), rel=1e-11)
