"""Analytic curves and surfaces shared by the test suite."""

import numpy as np

from cycloenv.curves import FunctionCurve


def _stack(*cols):
    return np.stack(np.broadcast_arrays(*cols), axis=-1)


def circular_worm(R=2.0, r0=0.5, span=np.pi / 2):
    return FunctionCurve(
        lambda v: _stack(R * np.cos(span * v), R * np.sin(span * v), r0 + 0 * v),
        lambda v: _stack(-R * span * np.sin(span * v), R * span * np.cos(span * v), 0 * v),
        lambda v: _stack(-R * span**2 * np.cos(span * v), -R * span**2 * np.sin(span * v), 0 * v),
        name="circle")


def straight_worm(r=0.5):
    return FunctionCurve(lambda v: _stack(v, 0 * v, r + 0 * v),
                         lambda v: _stack(1 + 0 * v, 0 * v, 0 * v),
                         lambda v: _stack(0 * v, 0 * v, 0 * v), name="line")


def cubic_worm():
    """Cubic spine with varying radius, cusp-free."""
    return FunctionCurve(
        lambda v: _stack(3 * v, v - 2 * v**2 + 1.5 * v**3, 0.3 + 0.2 * v - 0.1 * v**2),
        lambda v: _stack(3 + 0 * v, 1 - 4 * v + 4.5 * v**2, 0.2 - 0.2 * v),
        lambda v: _stack(0 * v, -4 + 9 * v, -0.2 + 0 * v), name="cubic")


def parabola_worm(r=0.8):
    return FunctionCurve(lambda v: _stack(v, v * v, r + 0 * v),
                         lambda v: _stack(1 + 0 * v, 2 * v, 0 * v),
                         lambda v: _stack(0 * v, 2 + 0 * v, 0 * v), name="parabola")


def lightlike_end_worm():
    """Tangent (1, 0, v) is light-like only at v = 1."""
    return FunctionCurve(lambda v: _stack(v, 0 * v, v * v / 2),
                         lambda v: _stack(1 + 0 * v, 0 * v, v),
                         lambda v: _stack(0 * v, 0 * v, 1 + 0 * v), name="lightlike")


def _surf(f, fu, ft, fuu, fut, ftt, name=""):
    from cycloenv.surfaces import FunctionSurface
    w = lambda g: (lambda u, t: _stack(*g(np.asarray(u, float), np.asarray(t, float))))
    return FunctionSurface(w(f), w(fu), w(ft), w(fuu), w(fut), w(ftt), name=name)


def parabolic_surface():
    """B(u, t) = (u, t, t^2); singular line t = 1/2."""
    z = lambda u, t: 0 * u + 0 * t
    o = lambda u, t: 1 + z(u, t)
    return _surf(lambda u, t: (u, t, t * t + z(u, t)),
                 lambda u, t: (o(u, t), z(u, t), z(u, t)),
                 lambda u, t: (z(u, t), o(u, t), 2 * t + z(u, t)),
                 lambda u, t: (z(u, t),) * 3,
                 lambda u, t: (z(u, t),) * 3,
                 lambda u, t: (z(u, t), z(u, t), 2 * o(u, t)), name="parabolic")


def dome_surface(cx=0.0, cy=0.0, k=1.5, r0=1.0):
    """B(u, t) = (cx + u, cy + t, r0 - k((u - 1/2)^2 + (t - 1/2)^2)).

    D = 1 - |grad r|^2 vanishes on the circle of radius 1/(2k) about the
    domain centre, where the radius is r0 - 1/(4k).
    """
    z = lambda u, t: 0 * u + 0 * t
    o = lambda u, t: 1 + z(u, t)
    return _surf(lambda u, t: (cx + u + z(u, t), cy + t + z(u, t),
                               r0 - k * ((u - 0.5) ** 2 + (t - 0.5) ** 2)),
                 lambda u, t: (o(u, t), z(u, t), -2 * k * (u - 0.5) + z(u, t)),
                 lambda u, t: (z(u, t), o(u, t), -2 * k * (t - 0.5) + z(u, t)),
                 lambda u, t: (z(u, t), z(u, t), -2 * k * o(u, t)),
                 lambda u, t: (z(u, t),) * 3,
                 lambda u, t: (z(u, t), z(u, t), -2 * k * o(u, t)), name="dome")


def random_hermite(rng, count, noise=0.6):
    """Random space-like Hermite data (P1, t1, P2, t2) accepted by mink_biarc."""
    from cycloenv.conics import mink_biarc
    from cycloenv.errors import GeometryError
    from cycloenv.mink import mink_norm, unit_spacelike

    out = []
    while len(out) < count:
        p1 = rng.uniform(-1, 1, 3)
        d = rng.uniform(-1, 1, 3)
        if mink_norm(d) < 0.05 * np.dot(d, d) or np.dot(d, d) < 1e-2:
            continue
        p2 = p1 + d
        try:
            t1 = unit_spacelike(d + noise * rng.normal(size=3) * np.linalg.norm(d))
            t2 = unit_spacelike(d + noise * rng.normal(size=3) * np.linalg.norm(d))
            b = mink_biarc(p1, t1, p2, t2)
        except (GeometryError, ValueError):
            continue
        out.append((p1, t1, p2, t2, b))
    return out


def random_arcs(rng, n, box=10.0, size=1.5, lines=0.15):
    """Random circular arcs and segments in ``[0, box]^2`` for sweep tests."""
    from cycloenv.arcs import PlanarArc

    out = []
    for _ in range(n):
        c = rng.uniform(0, box, 2)
        if rng.random() < lines:
            d = rng.normal(size=2)
            d *= size * rng.uniform(0.2, 1.0) / np.hypot(*d)
            out.append(PlanarArc.segment(c - d, c + d))
        else:
            r = size * rng.uniform(0.1, 1.0)
            sweep = rng.choice([-1, 1]) * rng.uniform(0.3, 2 * np.pi)
            out.append(PlanarArc.circular(c, r, rng.uniform(0, 2 * np.pi), float(sweep)))
    return out


def point_sets_match(A, B, tol):
    """Bijective match of two point lists within ``tol``."""
    A = [np.asarray(p, float) for p in A]
    B = [np.asarray(p, float) for p in B]
    if len(A) != len(B):
        return False
    used = [False] * len(B)
    for p in A:
        for k, q in enumerate(B):
            if not used[k] and np.hypot(*(p - q)) <= tol:
                used[k] = True
                break
        else:
            return False
    return True


def bump_worm():
    """Straight spine with a narrow Gaussian bump near v = 0.4."""
    s, a = 0.08, 0.15
    g = lambda v: a * np.exp(-((v - 0.4) / s) ** 2)
    return FunctionCurve(lambda v: _stack(2 * v, g(v), 0.05 + 0 * v),
                         lambda v: _stack(2 + 0 * v, -2 * (v - 0.4) / s**2 * g(v), 0 * v),
                         lambda v: _stack(0 * v, ((2 * (v - 0.4) / s**2) ** 2 - 2 / s**2) * g(v), 0 * v),
                         name="bump")


def hook_worm(a=0.1, r=0.05):
    """Spine (x, sqrt(x^2 + a^2)) on x in [-1, 1]; curvature peaks at 1/a at the vertex."""
    x = lambda v: 2 * v - 1
    q = lambda v: np.sqrt(x(v) ** 2 + a * a)
    return FunctionCurve(lambda v: _stack(x(v), q(v), r + 0 * v),
                         lambda v: _stack(2 + 0 * v, 2 * x(v) / q(v), 0 * v),
                         lambda v: _stack(0 * v, 4 * a * a / q(v) ** 3, 0 * v), name="hook")


def swell_worm(w=0.1, amp=0.06):
    """Straight spine whose radius steps up around v = 0.7."""
    th = lambda v: np.tanh((v - 0.7) / w)
    return FunctionCurve(lambda v: _stack(2 * v, 0 * v, 0.2 + amp * th(v)),
                         lambda v: _stack(2 + 0 * v, 0 * v, amp / w * (1 - th(v) ** 2)),
                         lambda v: _stack(0 * v, 0 * v, -2 * amp / w**2 * th(v) * (1 - th(v) ** 2)),
                         name="swell")


def random_smooth_surface(rng, grid=41):
    """Random biquadratic patch with positive radius and a dominant space-like frame."""
    from cycloenv.surfaces import PolySurface

    g = np.linspace(0, 1, grid)
    U, T = np.meshgrid(g, g)
    while True:
        c = np.zeros((3, 3, 3))
        c[1, 0, 0] = 2.0
        c[0, 1, 1] = 2.0
        c[0, 0, 2] = 0.4
        c[..., :2] += 0.25 * rng.normal(size=(3, 3, 2))
        c[..., 2] += 0.3 * rng.normal(size=(3, 3))
        s = PolySurface([[c]])
        if s(U, T)[..., 2].min() > 0.05:
            return s
