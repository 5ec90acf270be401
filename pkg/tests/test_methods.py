import math

import numpy as np
import pytest

from cycloenv.conics import mink_arc_through_3
from cycloenv.curves import FunctionCurve
from cycloenv.envelope import envelope_eval
from cycloenv.errors import CuspInRange, LightLikeInterior, TimeLikeTangent
from cycloenv.methods import (ArcSoup, MethodConfig, approximate, arc_deviation, convergence_orders, dai, dbi,
                              handle_lightlike_endpoints, hausdorff_error, iai, iai_adaptive, ibi)
from cycloenv.mink import OrientedCircle, oriented_contact

from fixtures import _stack, circular_worm, cubic_worm, lightlike_end_worm, parabola_worm, straight_worm

COUNTS = {"dai": lambda N: 2 * N, "dbi": lambda N: 4 * N + 2, "iai": lambda N: N + 2, "ibi": lambda N: 4 * N + 2}


def branch_chain(soup, sign):
    """Envelope arcs of one branch ordered by parameter, in soup order within a span."""
    idx = [i for i, s in enumerate(soup.spans) if s[0] == sign]
    idx.sort(key=lambda i: (soup.spans[i][1], i))
    return [soup.arcs[i] for i in idx]


@pytest.mark.parametrize("method", ["dai", "dbi", "iai", "ibi"])
@pytest.mark.parametrize("N", [4, 8])
def test_counts(method, N):
    for curve in (cubic_worm(), circular_worm()):
        soup = approximate(curve, MethodConfig(method, N))
        assert soup.arcCount == len(soup.arcs) == COUNTS[method](N)
        assert soup.stats == {"arcCount": soup.arcCount, "methodUsed": method, "samplesUsed": soup.samples}


def test_config_validation():
    with pytest.raises(ValueError):
        MethodConfig("dai", 3)
    with pytest.raises(ValueError):
        MethodConfig("iai", 5)
    with pytest.raises(ValueError):
        MethodConfig("xyz", 4)
    with pytest.raises(ValueError):
        MethodConfig("ibi", 4, cusp_policy="ignore")
    assert MethodConfig("ibi", 3).N == 3 and not MethodConfig("ibi", 3).adaptive
    assert MethodConfig("iai", 2, delta=1e-3).adaptive


def test_dai_exact_on_single_minkowski_arc():
    A = mink_arc_through_3((1.0, 0.0, 0.2), (1.0, 1.0, 0.3), (0.2, 1.4, 0.35))
    soup = dai(A, 2)
    assert hausdorff_error(A, soup) <= 1e-12


@pytest.mark.parametrize("method", ["dai", "dbi", "iai"])
def test_circular_spine_reproduced_exactly(method):
    # a constant-radius circular spine is itself a Minkowski circle, so every
    # method returns the true envelope circles
    c = circular_worm(2.0, 0.5)
    for N in (4, 8):
        soup = approximate(c, MethodConfig(method, N))
        assert hausdorff_error(c, soup) <= 1e-12
        radii = sorted({round(a.radius, 12) for a, s in zip(soup.arcs, soup.spans) if s[0] != 0})
        assert radii == [1.5, 2.5]


def test_ibi_on_circular_spine_exact():
    c = circular_worm(2.0, 0.5)
    assert hausdorff_error(c, ibi(c, 4)) <= 1e-12


@pytest.mark.parametrize("method", ["dbi", "ibi"])
def test_biarc_methods_are_g1(method):
    soup = approximate(cubic_worm(), MethodConfig(method, 8))
    for sign in (1, -1):
        chain = branch_chain(soup, sign)
        for a, b in zip(chain, chain[1:]):
            assert np.allclose(a.end, b.start, atol=1e-9)
            assert np.allclose(a.end_tangent, b.start_tangent, atol=1e-9)


def test_iai_is_c0():
    soup = approximate(cubic_worm(), MethodConfig("iai", 8))
    for sign in (1, -1):
        chain = branch_chain(soup, sign)
        for a, b in zip(chain, chain[1:]):
            assert np.allclose(a.end, b.start, atol=1e-9)


def test_pre_boundary_is_closed_chain():
    # every arc endpoint is shared with another arc of the soup
    for method in ("dai", "dbi", "iai", "ibi"):
        soup = approximate(cubic_worm(), MethodConfig(method, 8))
        ends = np.array([p for a in soup.arcs for p in (a.start, a.end)])
        for p in ends:
            d = np.hypot(*(ends - p).T)
            assert np.sum(d <= 1e-9) >= 2


@pytest.mark.parametrize("method", ["dai", "dbi"])
def test_exact_methods_in_oriented_contact(method):
    c = cubic_worm()
    soup = approximate(c, MethodConfig(method, 8))
    for arc, (sign, v0, v1) in zip(soup.arcs, soup.spans):
        if sign == 0 or arc.is_line:
            continue
        # each arc touches the family circle at one end of its parameter span
        ok = any(oriented_contact(OrientedCircle(tuple(arc.center), s * arc.radius),
                                  OrientedCircle((C[0], C[1]), C[2]), 1e-8)
                 for s in (1, -1) for C in (c(v0), c(v1)))
        assert ok


@pytest.mark.parametrize("method", ["iai", "ibi"])
def test_interpolating_methods_hit_samples(method):
    c = cubic_worm()
    N = 8
    soup = approximate(c, MethodConfig(method, N))
    v = np.linspace(0, 1, N + 1)
    for sign in (1, -1):
        pts = envelope_eval(c, v, sign)[0]
        arcs = branch_chain(soup, sign)
        for p in pts:
            assert min(float(a.distance(p[None])[0]) for a in arcs) <= 1e-12


def test_iai_adaptive_single_level():
    soup = iai_adaptive(cubic_worm(), 10.0)
    assert soup.arcCount == 4


def test_iai_adaptive_deviation_bound():
    c = cubic_worm()
    delta = 1e-4
    soup = iai_adaptive(c, delta)
    for arc, (sign, v0, v1) in zip(soup.arcs, soup.spans):
        if sign:
            assert arc_deviation(c, arc, sign, v0, v1, samples=5120) <= delta


def test_iai_adaptive_invalid_delta():
    with pytest.raises(ValueError):
        iai_adaptive(cubic_worm(), 0.0)


def test_adaptive_needs_iai():
    with pytest.raises(ValueError):
        approximate(cubic_worm(), MethodConfig("ibi", 4, delta=1e-3))


def test_lightlike_everywhere_rejected():
    c = FunctionCurve(lambda v: _stack(v, 0 * v, 1 - v), lambda v: _stack(1 + 0 * v, 0 * v, -1 + 0 * v),
                      lambda v: _stack(0 * v, 0 * v, 0 * v))
    with pytest.raises(LightLikeInterior):
        handle_lightlike_endpoints(c, MethodConfig("dbi", 4))


def test_timelike_rejected():
    c = FunctionCurve(lambda v: _stack(0.2 * v, 0 * v, v), lambda v: _stack(0.2 + 0 * v, 0 * v, 1 + 0 * v),
                      lambda v: _stack(0 * v, 0 * v, 0 * v))
    with pytest.raises(TimeLikeTangent):
        iai(c, 4)


def test_lightlike_end_plan():
    c = lightlike_end_worm()
    plan = handle_lightlike_endpoints(c, MethodConfig("dbi", 8))
    assert plan.end and not plan.start and plan.replace_last and not plan.replace_first
    soup = dbi(c, 8)
    # the last segment is one Minkowski arc (two envelope arcs) instead of a biarc (four)
    last = [s for s in soup.spans if s[0] != 0 and s[1] == pytest.approx(7 / 8)]
    assert len(last) == 2
    assert soup.samples == 10


def test_lightlike_end_graded_sampling():
    c = lightlike_end_worm()
    for N in (8, 16, 32):
        plan = handle_lightlike_endpoints(c, MethodConfig("iai", N))
        phi = plan.grading[0]
        v = phi(np.linspace(0, 1, N + 1))
        assert np.sum(v >= 0.9) >= math.ceil(N / 4)
        # the envelope has a genuine cusp at v = sqrt(2/3), and the zero-radius
        # start circle contributes no cap
        soup = iai(c, N, "split")
        assert soup.arcCount >= N + 1
        assert sum(s[0] == 0 for s in soup.spans) == 1


def test_dai_lightlike_end_unchanged():
    # the start circle has radius 0, so its cap degenerates to a point and is dropped
    soup = dai(lightlike_end_worm(), 8)
    assert soup.arcCount == 15
    assert sum(s[0] == 0 for s in soup.spans) == 7


def test_cusp_policy():
    c = parabola_worm(0.8)
    with pytest.raises(CuspInRange):
        iai(c, 8)
    soup = iai(c, 8, "split")
    assert soup.arcCount >= 10
    assert hausdorff_error(c, soup) < 1e-2


def test_collinear_iai_gives_segments():
    soup = iai(straight_worm(), 4)
    env = [a for a, s in zip(soup.arcs, soup.spans) if s[0] != 0]
    assert all(a.is_line for a in env)
    assert hausdorff_error(straight_worm(), soup) <= 1e-15


def test_soup_add_drops_degenerate():
    from cycloenv.arcs import PlanarArc
    s = ArcSoup()
    s.add(PlanarArc(0, 0, 0, 0, 0.0))
    s.add(PlanarArc(0, 0, 0, 0, math.nan))
    assert len(s) == 0


def test_convergence_rows():
    rows = convergence_orders(cubic_worm(), "iai", [8, 16, 32])
    assert [r[0] for r in rows] == [8, 16, 32]
    assert [r[1] for r in rows] == [10, 18, 34]
    assert rows[0][2] > rows[1][2] > rows[2][2] > 0
    assert math.isnan(rows[-1][3])
    assert 2.7 <= rows[1][3] <= 3.3


def test_error_metric_sees_a_wrong_radius():
    c = straight_worm(0.5)
    other = straight_worm(0.6)
    assert hausdorff_error(c, iai(other, 4)) == pytest.approx(0.1, abs=1e-12)
