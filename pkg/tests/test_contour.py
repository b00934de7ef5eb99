import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptspec.contour import (
    AngleWindow,
    StraightLine,
    UShaped,
    angle_window,
    derivatives,
    evaluate,
    pt_residual,
)
from ptspec.errors import DomainError

PT_TOL = 1e-12


def test_evaluate_arc_bottom():
    # middle branch at s = 0: eps * exp(-i*pi/2)
    assert evaluate(UShaped(1.0), 0.0) == pytest.approx(-1j, abs=1e-15)


def test_evaluate_junction_value_continuous():
    # junction s = pi/2 for eps = 1: arc and straight branch agree on 1+0i
    c = UShaped(1.0)
    j = c.junction
    assert evaluate(c, j) == pytest.approx(1.0 + 0.0j, abs=1e-15)
    below = evaluate(c, np.nextafter(j, 0.0))
    above = evaluate(c, np.nextafter(j, np.inf))
    assert abs(below - above) < 1e-14


def test_evaluate_straightline_real_axis():
    assert evaluate(StraightLine(0.0), 2.5) == 2.5 + 0.0j


def test_junction_first_derivative_continuous():
    c = UShaped(0.7)
    for j in (c.junction, -c.junction):
        lo, _ = derivatives(c, np.nextafter(j, -np.inf))
        hi, _ = derivatives(c, np.nextafter(j, np.inf))
        assert abs(lo - hi) < 1e-14


def test_derivatives_upper_branch():
    xp, xpp = derivatives(UShaped(1.0), 10.0)
    assert xp == 1j
    assert xpp == 0


def test_derivatives_arc_magnitudes():
    xp, xpp = derivatives(UShaped(1.0), 0.0)
    assert abs(xp) == pytest.approx(1.0, rel=1e-15)
    assert abs(xpp) == pytest.approx(1.0, rel=1e-15)


def test_derivatives_straightline_lower_branch():
    xp, xpp = derivatives(StraightLine(math.pi / 2), -3.0)
    assert xp == pytest.approx(-1j, abs=1e-15)
    assert xpp == 0


@pytest.mark.parametrize("eps", [0.25, 1.0, 3.0])
def test_unit_speed_everywhere(eps):
    s = np.linspace(-4 * eps - 5, 4 * eps + 5, 2001)
    xp, _ = derivatives(UShaped(eps), s)
    np.testing.assert_allclose(np.abs(xp), 1.0, rtol=1e-14)


@pytest.mark.parametrize(
    "contour,s",
    [
        (UShaped(1.0), 5.0),
        (StraightLine(0.3), 1.2),
        (UShaped(0.25), 0.1),
    ],
)
def test_pt_residual_spot_values(contour, s):
    assert pt_residual(contour, s) <= PT_TOL


@given(
    s=st.floats(min_value=-50, max_value=50),
    eps=st.floats(min_value=0.0, max_value=5.0),
)
@settings(max_examples=300, deadline=None)
def test_pt_residual_property_ushaped(s, eps):
    assert pt_residual(UShaped(eps), s) <= PT_TOL


@given(
    s=st.floats(min_value=-50, max_value=50),
    phi=st.floats(min_value=-1.5, max_value=1.5),
)
@settings(max_examples=300, deadline=None)
def test_pt_residual_property_line(s, phi):
    assert pt_residual(StraightLine(phi), s) <= PT_TOL


def test_central_difference_matches_analytic_derivative():
    c = UShaped(1.0)
    rng = np.random.default_rng(7)
    s = rng.uniform(-8, 8, 200)
    s = s[np.abs(np.abs(s) - c.junction) > 0.05]  # stay away from the kink
    for h in (1e-3, 5e-4):
        num = (evaluate(c, s + h) - evaluate(c, s - h)) / (2 * h)
        xp, _ = derivatives(c, s)
        assert np.max(np.abs(num - xp)) < 2.0 * h * h


def test_closest_approach_is_epsilon():
    for eps in (0.3, 1.0, 2.5):
        s = np.linspace(-15, 15, 40001)
        dist = np.abs(evaluate(UShaped(eps), s))
        assert abs(dist.min() - eps) < 1e-6


def test_epsilon_zero_degenerate_contour():
    c = UShaped(0.0)
    s = np.array([-2.0, -0.5, 0.5, 2.0])
    np.testing.assert_allclose(evaluate(c, s), 1j * np.abs(s))


def test_pointwise_limit_to_degenerate_contour():
    s_values = (-2.0, 0.7, 3.0)
    for s in s_values:
        prev = np.inf
        for eps in (0.1, 0.01, 0.001):
            gap = abs(evaluate(UShaped(eps), s) - evaluate(UShaped(0.0), s))
            assert gap < prev
            prev = gap
        assert prev < 5e-3


def test_angle_window_delta_zero():
    w = angle_window(0.0, 0)
    assert w.optimal == pytest.approx(0.0, abs=1e-15)
    assert w.lower == pytest.approx(-math.pi / 4)
    assert w.upper == pytest.approx(math.pi / 4)


def test_angle_window_coulomb_case():
    # 2*delta = -1: slope window (0, pi) with optimal pi/2
    w = angle_window(-0.5, 0)
    assert w.optimal == pytest.approx(math.pi / 2, rel=1e-15)
    assert w.lower == pytest.approx(0.0, abs=1e-15)
    assert w.upper == pytest.approx(math.pi, rel=1e-15)


def test_angle_window_delta_one():
    assert angle_window(1.0, 0).optimal == pytest.approx(math.pi / 4 - math.pi / 2)


def test_angle_window_second_branch_adjacent():
    w0 = angle_window(0.5, 0)
    w1 = angle_window(0.5, 1)
    assert w1.lower == pytest.approx(w0.upper)
    assert w1.upper > w1.lower


@given(delta=st.floats(min_value=-0.99, max_value=4.0), branch=st.integers(0, 3))
@settings(max_examples=200, deadline=None)
def test_angle_window_midpoint_property(delta, branch):
    w = angle_window(delta, branch)
    assert w.lower < w.optimal < w.upper
    assert w.optimal == 0.5 * (w.lower + w.upper)  # exact by construction


def test_angle_window_contains_default_slopes():
    # the contours this package discretizes use phi = 0 (delta = 0 family)
    # and phi = pi/2 (2*delta = -1 family); both sit at their window centers
    assert angle_window(0.0, 0).contains(0.0)
    assert angle_window(-0.5, 0).contains(math.pi / 2)


def test_angle_window_domain_error():
    with pytest.raises(DomainError):
        angle_window(-1.0, 0)
    with pytest.raises(DomainError):
        angle_window(-1.5, 0)


def test_negative_epsilon_rejected():
    with pytest.raises(DomainError):
        UShaped(-0.5)


def test_angle_window_is_frozen_record():
    w = AngleWindow(lower=0.0, upper=1.0, optimal=0.5)
    with pytest.raises(AttributeError):
        w.lower = 2.0
