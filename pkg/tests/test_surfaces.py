import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cycloenv.curves import FunctionCurve
from cycloenv.mink import CausalClass
from cycloenv.surfaces import (PolySurface, TracedCurve, boundary_curves, curve_causal_pieces, det_condition,
                               det_condition_expanded, det_gradient, lift_to_mink_curve, segment_by_causality,
                               trace_singular_curves)

from fixtures import _stack, _surf, dome_surface, parabolic_surface

S, L, T = CausalClass.SPACE_LIKE, CausalClass.LIGHT_LIKE, CausalClass.TIME_LIKE


def flat_surface(r=0.2):
    return PolySurface.bezier([[[[(0, 0, r), (0, 1, r)], [(1, 0, r), (1, 1, r)]]]])


def sheared_surface():
    """B(u, t) = (u, 0, t): the tangent plane contains the time axis."""
    z = lambda u, t: 0 * u + 0 * t
    return _surf(lambda u, t: (u + z(u, t), z(u, t), t + z(u, t)),
                 lambda u, t: (1 + z(u, t), z(u, t), z(u, t)),
                 lambda u, t: (z(u, t), z(u, t), 1 + z(u, t)),
                 lambda u, t: (z(u, t),) * 3, lambda u, t: (z(u, t),) * 3, lambda u, t: (z(u, t),) * 3)


def folded_surface():
    """B(u, t) = F(u + t) with F(s) = (s, 0, s^2): rank one everywhere, so D = 0."""
    z = lambda u, t: 0 * u + 0 * t
    d = lambda u, t: (1 + z(u, t), z(u, t), 2 * (u + t))
    dd = lambda u, t: (z(u, t), z(u, t), 2 + z(u, t))
    return _surf(lambda u, t: (u + t, z(u, t), (u + t) ** 2), d, d, dd, dd, dd)


def random_poly(rng, deg=(2, 2)):
    c = rng.normal(size=(deg[0] + 1, deg[1] + 1, 3))
    c[..., 2] *= 0.5
    return PolySurface([[c]])


def test_det_examples():
    g = np.linspace(0, 1, 7)
    U, Tt = np.meshgrid(g, g)
    assert np.allclose(det_condition(flat_surface(), U, Tt), 1.0, atol=1e-14)
    assert np.allclose(det_condition(parabolic_surface(), U, Tt), 1 - 4 * Tt**2, atol=1e-14)
    assert np.allclose(det_condition(sheared_surface(), U, Tt), -1.0, atol=1e-14)


def test_parabolic_singular_line():
    curves = trace_singular_curves(parabolic_surface())
    assert len(curves) == 1
    c = curves[0]
    assert not c.closed
    assert np.max(np.abs(c.t - 0.5)) <= 1e-6
    assert c.u.min() == pytest.approx(0.0, abs=1e-9) and c.u.max() == pytest.approx(1.0, abs=1e-9)
    assert all(k is S for k in c.causal)
    lifted = lift_to_mink_curve(c)
    P = lifted(np.linspace(0, 1, 11))
    assert np.allclose(P[:, 1:], (0.5, 0.25), atol=1e-6)


def test_flat_surface_has_no_singular_curves():
    assert trace_singular_curves(flat_surface()) == []


def test_dome_residuals_and_closed_loop():
    s = dome_surface()
    curves = trace_singular_curves(s)
    assert len(curves) == 1 and curves[0].closed
    c = curves[0]
    assert np.all(np.abs(c.residuals) <= c.eps)
    rho = np.hypot(c.u - 0.5, c.t - 0.5)
    assert np.allclose(rho, 1 / 3, atol=1e-6)
    lifted = lift_to_mink_curve(c)
    assert np.allclose(lifted(0.0), lifted(1.0), atol=1e-12)


def test_degenerate_component_lifts_to_none():
    s = parabolic_surface()
    c = TracedCurve(s, np.array([0.3]), np.array([0.5]), np.array([1.0]), np.array([0.0]))
    assert lift_to_mink_curve(c) is None


def test_segment_all_spacelike_unchanged():
    c = trace_singular_curves(parabolic_surface())[0]
    assert segment_by_causality(c) == [c]


def test_segment_all_timelike_dropped():
    s = folded_surface()
    u = np.linspace(0.6, 0.9, 5)
    c = TracedCurve(s, u, 0 * u, 1 + 0 * u, 0 * u)
    assert all(k is T for k in c.causal)
    assert segment_by_causality(c) == []
    assert segment_by_causality(c, keep_timelike=True) == [c]


def test_segment_mixed_split_at_lightlike_crossing():
    # lifted tangent F'(u) = (1, 0, 2u) turns time-like past u = 1/2
    s = folded_surface()
    u = np.linspace(0.0, 0.95, 12)
    c = TracedCurve(s, u, 0 * u, 1 + 0 * u, 0 * u)
    pieces = segment_by_causality(c)
    assert len(pieces) == 1
    p = pieces[0]
    assert p.u[-1] == pytest.approx(0.5, abs=1e-12)
    assert p.causal[-1] is L and all(k is S for k in p.causal[:-1])
    both = segment_by_causality(c, keep_timelike=True)
    assert len(both) == 2 and both[1].u[0] == pytest.approx(0.5, abs=1e-12)


def test_boundary_curves_of_parabolic_surface():
    b = boundary_curves(parabolic_surface())
    v = np.linspace(0, 1, 9)
    z = 0 * v
    assert np.allclose(b[0](v), _stack(v, z, z))
    assert np.allclose(b[1](v), _stack(v, 1 + z, 1 + z))
    # corners are shared
    assert np.allclose(b[0](0.0), b[2](0.0)) and np.allclose(b[0](1.0), b[3](0.0))
    assert np.allclose(b[1](0.0), b[2](1.0)) and np.allclose(b[1](1.0), b[3](1.0))


def test_curve_causal_pieces():
    # tangent (1, 0, 2v) is light-like at v = 1/2
    c = FunctionCurve(lambda v: _stack(v, 0 * v, v * v), lambda v: _stack(1 + 0 * v, 0 * v, 2 * v),
                      lambda v: _stack(0 * v, 0 * v, 2 + 0 * v))
    pieces = curve_causal_pieces(c)
    assert [k for _, _, k in pieces] == [S, T]
    assert pieces[0][1] == pytest.approx(0.5, abs=1e-12)
    assert curve_causal_pieces(boundary_curves(parabolic_surface())[0]) == [(0.0, 1.0, S)]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1), st.floats(0, 1))
def test_det_matches_expanded_form(seed, u, t):
    s = random_poly(np.random.default_rng(seed))
    D = float(det_condition(s, u, t))
    E = float(det_condition_expanded(s, u, t))
    _, Bu, Bt, *_ = s.partials(u, t)
    scale = 1 + float(np.sum(Bu * Bu) * np.sum(Bt * Bt))
    assert abs(D - E) <= 1e-10 * scale


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_poly_partials_match_finite_differences(seed, u, t):
    s = random_poly(np.random.default_rng(seed), (3, 2))
    B, Bu, Bt, Buu, But, Btt = s.partials(u, t)
    h = 1e-5
    fd = lambda f, du, dt: (f(u + du, t + dt) - f(u - du, t - dt)) / (2 * max(du, dt))  # noqa: E731
    val = lambda a, b: s.partials(a, b)[0]  # noqa: E731
    assert np.allclose(Bu, fd(val, h, 0), atol=1e-7)
    assert np.allclose(Bt, fd(val, 0, h), atol=1e-7)
    assert np.allclose(Buu, fd(lambda a, b: s.partials(a, b)[1], h, 0), atol=1e-6)
    assert np.allclose(But, fd(lambda a, b: s.partials(a, b)[1], 0, h), atol=1e-6)
    assert np.allclose(Btt, fd(lambda a, b: s.partials(a, b)[2], 0, h), atol=1e-6)
    D, Du, Dt = det_gradient(s, u, t)
    assert Du == pytest.approx(fd(lambda a, b: det_condition(s, a, b), h, 0), abs=1e-5 * (1 + abs(Du)))
    assert Dt == pytest.approx(fd(lambda a, b: det_condition(s, a, b), 0, h), abs=1e-5 * (1 + abs(Dt)))


@pytest.mark.filterwarnings("ignore:traced component ends inside")
@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_traced_tangent_orthogonal_to_gradient(seed):
    s = random_poly(np.random.default_rng(seed))
    for c in trace_singular_curves(s, seed_grid=16):
        assert np.all(np.abs(c.residuals) <= c.eps)
        for u, t, a, b in zip(c.u, c.t, c.vu, c.vt):
            _, Du, Dt = det_gradient(s, u, t)
            g = math.hypot(Du, Dt)
            if g > 1e-6:
                assert abs(Du * a + Dt * b) <= 1e-8 * g
