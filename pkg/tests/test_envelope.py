import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from cycloenv.curves import FunctionCurve, HermiteCurve, RationalPolyCurve
from cycloenv.envelope import envelope_eval, envelope_point, find_envelope_cusps
from cycloenv.errors import TimeLikeTangent

from fixtures import _stack, circular_worm, cubic_worm, parabola_worm, straight_worm

vs = st.floats(0.0, 1.0)


def unit_circle_worm(r0, span=math.pi / 2):
    return FunctionCurve(lambda v: _stack(np.cos(span * v), np.sin(span * v), r0 + 0 * v),
                         lambda v: _stack(-span * np.sin(span * v), span * np.cos(span * v), 0 * v),
                         lambda v: _stack(-span**2 * np.cos(span * v), -span**2 * np.sin(span * v), 0 * v))


def test_straight_spine():
    c = straight_worm(0.5)
    for v in (0.0, 0.3, 1.0):
        assert np.allclose(envelope_point(c, v, "+").point, (v, 0.5), atol=1e-15)
        assert np.allclose(envelope_point(c, v, "-").point, (v, -0.5), atol=1e-15)


def test_circular_spine():
    R, r0 = 2.0, 0.5
    c = circular_worm(R, r0)
    v = np.linspace(0, 1, 17)
    ang = np.pi / 2 * v
    u = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    assert np.allclose(envelope_eval(c, v, 1)[0], (R - r0) * u, atol=1e-14)
    assert np.allclose(envelope_eval(c, v, -1)[0], (R + r0) * u, atol=1e-14)


def test_light_like_branches_coincide():
    c = FunctionCurve(lambda v: _stack(v, 0 * v, v), lambda v: _stack(1 + 0 * v, 0 * v, 1 + 0 * v),
                      lambda v: _stack(0 * v, 0 * v, 0 * v))
    for v in (0.1, 0.5, 0.9):
        assert np.allclose(envelope_point(c, v, 1).point, envelope_point(c, v, -1).point, atol=1e-14)


def test_time_like_tangent_rejected():
    c = FunctionCurve(lambda v: _stack(0.1 * v, 0 * v, v), lambda v: _stack(0.1 + 0 * v, 0 * v, 1 + 0 * v),
                      lambda v: _stack(0 * v, 0 * v, 0 * v))
    with pytest.raises(TimeLikeTangent):
        envelope_point(c, 0.5, 1)


def test_bad_branch():
    with pytest.raises(ValueError):
        envelope_point(straight_worm(), 0.5, 0)


def test_cusps_everywhere_when_radius_matches_curvature():
    c = unit_circle_worm(1.0)
    cusps = find_envelope_cusps(c, "+", samples=257)
    assert len(cusps) == 257
    assert find_envelope_cusps(c, "-") == []


def test_no_cusps_for_thin_circle_worm():
    c = unit_circle_worm(0.5)
    assert find_envelope_cusps(c, 1) == [] and find_envelope_cusps(c, -1) == []


@pytest.mark.parametrize("r", [0.3, 0.8])
def test_parabola_cusps_match_curvature_roots(r):
    c = parabola_worm(r)
    kappa = lambda v: 2.0 / (1 + 4 * v * v) ** 1.5  # noqa: E731
    g = np.linspace(0, 1, 2001)
    f = kappa(g) - 1 / r
    roots = [brentq(lambda v: kappa(v) - 1 / r, g[i], g[i + 1]) for i in range(len(g) - 1) if f[i] * f[i + 1] < 0]
    got = find_envelope_cusps(c, "+")
    assert len(got) == len(roots)
    assert np.allclose(got, roots, atol=1e-9)
    assert find_envelope_cusps(c, "-") == []


def test_polynomial_curve_matches_function_curve():
    coef = [[0.0, 0.0, 0.3], [3.0, 1.0, 0.2], [0.0, -2.0, -0.1], [0.0, 1.5, 0.0]]
    p = RationalPolyCurve((0.0, 1.0), [coef])
    f = cubic_worm()
    v = np.linspace(0, 1, 33)
    for a, b in zip(p.derivatives(v), f.derivatives(v)):
        assert np.allclose(a, b, atol=1e-13)


def test_piecewise_polynomial_breaks():
    c = RationalPolyCurve.polynomial([[[0, 0, 1], [1, 0, 0]], [[1, 0, 1], [0, 1, 0]]], breaks=(0, 0.5, 1))
    assert np.allclose(c(0.25), (0.25, 0, 1)) and np.allclose(c(0.75), (1, 0.25, 1))


def test_hermite_curve_interpolates():
    t = np.linspace(0, 2, 5)
    P = np.stack([t, t**2, 0.1 * t], axis=1)
    D = np.stack([1 + 0 * t, 2 * t, 0.1 + 0 * t], axis=1)
    h = HermiteCurve(t, P, D)
    assert np.allclose(h(t / 2), P, atol=1e-14)
    assert np.allclose(h.derivative(t / 2), 2 * D, atol=1e-13)


@given(vs)
def test_derivatives_consistent_with_finite_differences(v):
    v = min(max(v, 1e-5), 1 - 1e-5)
    for c in (cubic_worm(), circular_worm(), RationalPolyCurve.rational_bezier(
            [([[2, 0, 0.5], [2, 2, 0.5], [0, 2, 0.5]], [1, math.sqrt(0.5), 1])])):
        h = 1e-6
        fd = (c(v + h) - c(v - h)) / (2 * h)
        assert np.allclose(c.derivative(v), fd, atol=1e-6 * (1 + np.abs(fd).max()))


@given(vs, st.sampled_from([1, -1]))
def test_point_on_circle_and_tangent_perpendicular(v, b):
    c = cubic_worm()
    e = envelope_point(c, v, b)
    assert abs(np.hypot(*(e.point - e.center)) - abs(e.radius)) <= 1e-10
    assert abs(np.dot(e.point - e.center, e.tangent)) <= 1e-10


@given(st.floats(0.01, 0.99), st.sampled_from([1, -1]))
def test_tangent_matches_numeric_derivative(v, b):
    c = cubic_worm()
    h = 1e-6
    p0 = envelope_eval(c, np.array([v - h]), b)[0][0]
    p1 = envelope_eval(c, np.array([v + h]), b)[0][0]
    d = (p1 - p0) / (2 * h)
    e = envelope_point(c, v, b)
    assert np.allclose(e.tangent, d / np.hypot(*d), atol=1e-5)


@given(vs)
def test_branch_swap_flips_square_root_term(v):
    c = cubic_worm()
    C, dC, _ = c.derivatives(np.array([v]))
    pp = envelope_eval(c, np.array([v]), 1)[0][0]
    pm = envelope_eval(c, np.array([v]), -1)[0][0]
    mid = C[0, :2] - C[0, 2] * dC[0, 2] * dC[0, :2] / np.dot(dC[0, :2], dC[0, :2])
    assert np.allclose(0.5 * (pp + pm), mid, atol=1e-13)
