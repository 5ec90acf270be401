import math

import numpy as np
import pytest

from cycloenv.arcs import PlanarArc, loop_area
from cycloenv.coverage import CurveCoverage, DiskUnion, SurfaceCoverage, coverage_oracle_from_surfaces
from cycloenv.io import read_scene
from cycloenv.methods import MethodConfig, approximate, hausdorff_error
from cycloenv.pipeline import surfaces_envelope, worm_envelope
from cycloenv.sweep import sweep_intersections
from cycloenv.trim import extract_outer_envelope

from fixtures import _surf, circular_worm, cubic_worm, parabolic_surface

SCENES = __import__("pathlib").Path(__file__).resolve().parent.parent / "scenes"


def full(c, r, tag=""):
    return PlanarArc.circular(c, r, 0.0, 2 * math.pi, tag)


def half_parabolic_surface():
    """(u, t, t^2) restricted to t in [0, 1/2], reparameterised over [0, 1]."""
    z = lambda u, t: 0 * u + 0 * t
    return _surf(lambda u, t: (u + z(u, t), t / 2 + z(u, t), t * t / 4 + z(u, t)),
                 lambda u, t: (1 + z(u, t), z(u, t), z(u, t)),
                 lambda u, t: (z(u, t), 0.5 + z(u, t), t / 2 + z(u, t)),
                 lambda u, t: (z(u, t),) * 3, lambda u, t: (z(u, t),) * 3,
                 lambda u, t: (z(u, t), z(u, t), 0.5 + z(u, t)))


def stadium_distance(P):
    """Distance to the boundary of the union of unit disks centred on [(0,1), (1,1)]."""
    x = np.clip(P[:, 0], 0, 1)
    return np.abs(np.hypot(P[:, 0] - x, P[:, 1] - 1) - 1)


def assert_valid(env, coverage, band, tol=1e-9):
    """Closed, non-crossing loops whose arc midpoints lie within ``band`` of the region boundary."""
    for loop in env.loops:
        for a, b in zip(loop, loop[1:] + loop[:1]):
            assert np.hypot(*(a.end - b.start)) < tol
    arcs = env.arcs()
    ends = np.array([p for a in arcs for p in (a.start, a.end)])
    # loops only meet at their vertices
    for p, _ in sweep_intersections(arcs):
        assert np.min(np.hypot(*(ends - p).T)) <= 1e-7
    mids = np.array([a.midpoint() for a in arcs])
    assert np.all(np.abs(coverage.clearance(mids)) <= band + coverage.margin)


# -- coverage oracles ---------------------------------------------------------

def test_curve_coverage_examples():
    cov = CurveCoverage(cubic_worm())
    c = cubic_worm()(0.5)
    assert cov.strictly_inside(c[None, :2])[0]
    assert not cov.covered(np.array([[50.0, 50.0]]))[0]


def test_surface_coverage_examples():
    cov = SurfaceCoverage(parabolic_surface())
    assert cov.strictly_inside(np.array([[0.5, 1.0]]))[0]
    assert not cov.covered(np.array([[10.0, 10.0]]))[0]
    # (1/2, 3/4) lies on the envelope line y = 3/4 of the half patch; the full
    # patch continues past t = 1/2 and swallows it
    assert cov.strictly_inside(np.array([[0.5, 0.75]]))[0]
    half = coverage_oracle_from_surfaces([half_parabolic_surface()])
    p = np.array([[0.5, 0.75]])
    assert half.covered(p)[0] and not half.strictly_inside(p)[0]
    assert abs(half.clearance(p)[0]) <= 1e-12


# -- extraction ----------------------------------------------------------------

def test_two_disks():
    soup = [full((0, 0), 1, "a"), full((1, 0), 1, "b")]
    cov = DiskUnion([(0, 0), (1, 0)], [1, 1])
    env = extract_outer_envelope(soup, cov)
    assert len(env.loops) == 1 and len(env.loops[0]) == 2
    verts = sorted(tuple(np.round(a.start, 12)) for a in env.loops[0])
    h = round(math.sqrt(3) / 2, 12)
    assert verts == [(0.5, -h), (0.5, h)]
    area = 2 * math.pi - (2 * math.acos(0.5) - 0.5 * math.sqrt(3))
    assert loop_area(env.loops[0]) == pytest.approx(area, rel=1e-12)
    assert sorted(env.tags()) == ["a", "b"]
    assert_valid(env, cov, 1e-12)


def test_single_worm_is_only_reordered():
    c = cubic_worm()
    soup = approximate(c, MethodConfig("ibi", 8))
    env = extract_outer_envelope(soup, CurveCoverage(c))
    assert len(env.loops) == 1
    out = env.loops[0]
    assert len(out) == len(soup.arcs)
    # orientation may flip so that the loop runs counter-clockwise
    key = lambda a: sorted(tuple(np.round(p, 9)) for p in (a.start, a.end))  # noqa: E731
    assert sorted(map(key, out)) == sorted(map(key, soup.arcs))
    assert loop_area(out) > 0
    assert_valid(env, CurveCoverage(c), hausdorff_error(c, soup))


def test_idempotent():
    c = cubic_worm()
    cov = CurveCoverage(c)
    first = extract_outer_envelope(approximate(c, MethodConfig("iai", 8)), cov)
    again = extract_outer_envelope(first.arcs(), cov)
    assert len(again.loops) == len(first.loops)
    assert sum(map(loop_area, again.loops)) == pytest.approx(sum(map(loop_area, first.loops)), rel=1e-12)
    assert sum(a.length for a in again.arcs()) == pytest.approx(sum(a.length for a in first.arcs()), rel=1e-12)


def test_ring_keeps_hole_unless_outer_only():
    c = circular_worm(2.0, 0.5, 2 * math.pi)
    res = worm_envelope(c, MethodConfig("dai", 8), trim=True)
    areas = sorted(loop_area(l) for l in res.envelope.loops)
    assert len(areas) == 2
    # the end caps touch the envelope circles tangentially, and tangency
    # points carry about sqrt(machine epsilon) relative error
    assert areas[0] == pytest.approx(-math.pi * 1.5**2, rel=1e-7)
    assert areas[1] == pytest.approx(math.pi * 2.5**2, rel=1e-7)
    assert_valid(res.envelope, CurveCoverage(c), 1e-9)
    outer = worm_envelope(c, MethodConfig("dai", 8), trim=True, outer_only=True)
    assert len(outer.envelope.loops) == 1


# -- the surface pipeline ------------------------------------------------------

def test_parabolic_patch_gives_stadium():
    res = surfaces_envelope([parabolic_surface()], MethodConfig("ibi", 16))
    env = res.envelope
    assert len(env.loops) == 1
    assert loop_area(env.loops[0]) == pytest.approx(2 + math.pi, rel=1e-6)
    P = np.concatenate([a.sample(64) for a in env.arcs()])
    assert stadium_distance(P).max() <= 1e-3
    assert_valid(env, coverage_oracle_from_surfaces([parabolic_surface()]), 1e-3)


def test_timelike_ramp_is_boundary_only():
    scene = read_scene(SCENES / "timelike_ramp.json")
    res = surfaces_envelope(scene.all_surfaces(), MethodConfig("iai", 8))
    assert res.traced == []
    assert res.singular_fraction == 0.0
    assert all(t.startswith("boundary") for t in res.envelope.tags())
    assert len(res.envelope.loops) == 1


def test_two_domes_keep_singular_arcs():
    scene = read_scene(SCENES / "two_domes.json")
    surfaces = scene.all_surfaces()
    res = surfaces_envelope(surfaces, MethodConfig("ibi", 8))
    assert len(res.envelope.loops) >= 2
    assert res.singular_fraction > 0
    assert any(t.startswith("singular/left") for t in res.envelope.tags())
    assert any(t.startswith("singular/right") for t in res.envelope.tags())
    assert_valid(res.envelope, coverage_oracle_from_surfaces(surfaces), 1e-3)
