"""Rational quadratic Minkowski arcs, Minkowski biarcs and their envelopes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .arcs import PlanarArc, equal_chord_lambdas, rot_ccw
from .curves import RationalPolyCurve
from .envelope import envelope_normals
from .errors import (AsymmetricPolygon, LightLikeChord, LightLikeTangent, NonSpaceLikeChord,
                     PoleInRange, TimeLikeTangent)
from .mink import EPS_LIGHT, as_vec, mink_inner, mink_norm

# Lagrange basis polynomials for nodes 0, 1/2, 1 (power coefficients)
_L = np.array([[0.5, -1.5, 1.0], [0.0, -1.0, 1.0], [0.0, -0.5, 1.0]])
# quadratic Bernstein basis
_B = np.array([[1.0, -2.0, 1.0], [0.0, 2.0, -2.0], [0.0, 0.0, 1.0]])
POLE_SLACK = 1e-12


class MinkArc(RationalPolyCurve):
    """Rational quadratic curve in R^{2,1} over ``u in [0, 1]``.

    ``form`` is ``"lagrange"`` (``data = (C1, C2, C3, w1, w2, w3)``) or
    ``"bezier"`` (``data = (P1, P2, P3, w)``).
    """

    def __init__(self, numer, denom, form: str, data: tuple):
        super().__init__((0.0, 1.0), [numer], [denom])
        self.form = form
        self.data = data
        self._check_poles()

    def _check_poles(self):
        d = np.trim_zeros(self.denom[0], "b")
        if d.size == 0:
            raise PoleInRange("denominator vanishes identically")
        for root in np.roots(d[::-1]) if d.size > 1 else []:
            if abs(root.imag) <= 1e-12 * max(1.0, abs(root)) and \
                    -POLE_SLACK <= root.real <= 1.0 + POLE_SLACK:
                raise PoleInRange(f"denominator vanishes at u = {root.real:.6g}")

    @property
    def start(self) -> np.ndarray:
        return self(0.0)

    @property
    def end(self) -> np.ndarray:
        return self(1.0)

    def tangent_norm_poly(self) -> np.ndarray:
        """Power coefficients of ``<N'D - N D', N'D - N D'>`` (sign of ``<A', A'>``)."""
        N = self.numer[0]
        D = self.denom[0]
        dD = P.polyder(D) if D.size > 1 else np.zeros(1)
        comps = []
        for k in range(3):
            Nk = N[:, k]
            comps.append(P.polysub(P.polymul(P.polyder(Nk), D), P.polymul(Nk, dD)))
        sq = [P.polymul(c, c) for c in comps]
        return P.polysub(P.polyadd(sq[0], sq[1]), sq[2])

    def is_space_like(self, samples: int = 256) -> bool:
        """True if the tangent is space-like on the open interval (0, 1).

        Dense sampling plus a sign check of the tangent-norm polynomial
        between its real roots; isolated light-like tangents are allowed.
        """
        u = np.linspace(0.0, 1.0, samples + 1)[1:-1]
        dA = self.derivative(u)
        if np.any(mink_norm(dA) < -EPS_LIGHT * np.sum(dA * dA, axis=-1)):
            return False
        poly = np.trim_zeros(self.tangent_norm_poly(), "b")
        if poly.size <= 1:
            return poly.size == 0 or poly[0] >= 0
        roots = [r.real for r in np.roots(poly[::-1]) if abs(r.imag) < 1e-9 and 0 < r.real < 1]
        knots = np.unique(np.concatenate([[0.0, 1.0], roots]))
        mids = 0.5 * (knots[1:] + knots[:-1])
        return bool(np.all(P.polyval(mids, poly) >= -1e-12 * np.max(np.abs(poly))))


def mink_arc_through_3(C1, C2, C3) -> MinkArc:
    """Minkowski arc with ``A(0) = C1``, ``A(1/2) = C2``, ``A(1) = C3``."""
    C = [as_vec(C1), as_vec(C2), as_vec(C3)]
    scale2 = max(1e-300, max(float(np.dot(c, c)) for c in C), max(
        float(np.dot(C[i] - C[j], C[i] - C[j])) for i, j in ((0, 1), (0, 2), (1, 2))))
    n12 = float(mink_norm(C[0] - C[1]))
    n13 = float(mink_norm(C[0] - C[2]))
    n23 = float(mink_norm(C[1] - C[2]))
    for val, name in ((n12, "C1-C2"), (n13, "C1-C3"), (n23, "C2-C3")):
        if abs(val) <= EPS_LIGHT * scale2:
            raise LightLikeChord(f"chord {name} is light-like")
    w = np.array([2.0 * n23, -n13, 2.0 * n12])
    denom = w @ _L
    numer = (_L.T * w) @ np.vstack(C)
    return MinkArc(numer, denom, "lagrange", (C[0], C[1], C[2], *w.tolist()))


def mink_arc_hermite(P1, P2, P3, rtol: float = 1e-9) -> MinkArc:
    """Rational quadratic Bezier Minkowski arc with control points ``P1, P2, P3``."""
    p = [as_vec(P1), as_vec(P2), as_vec(P3)]
    n13 = float(mink_norm(p[0] - p[2]))
    n12 = float(mink_norm(p[1] - p[0]))
    n23 = float(mink_norm(p[2] - p[1]))
    if n13 <= 0 or n12 <= 0:
        raise NonSpaceLikeChord("control chords must be space-like")
    if abs(n12 - n23) > rtol * max(abs(n12), abs(n23)):
        raise AsymmetricPolygon("control polygon is not isosceles in the Minkowski metric")
    w = math.sqrt(n13) / (2.0 * math.sqrt(n12))
    wts = np.array([1.0, w, 1.0])
    denom = wts @ _B
    numer = (_B.T * wts) @ np.vstack(p)
    return MinkArc(numer, denom, "bezier", (p[0], p[1], p[2], w))


@dataclass(frozen=True)
class MinkBiarc:
    arc1: MinkArc
    arc2: MinkArc
    joint: np.ndarray
    lambda1: float
    lambda2: float
    controlPolygon: tuple

    def arcs(self):
        return (self.arc1, self.arc2)


def _unit_tangent(t, name: str) -> np.ndarray:
    t = as_vec(t)
    q = float(mink_norm(t))
    if q <= EPS_LIGHT * float(np.dot(t, t)):
        raise LightLikeTangent(f"tangent {name} is not space-like")
    return t / math.sqrt(q)


def mink_biarc(P1, t1, P2, t2) -> MinkBiarc:
    """Equal-chord Minkowski biarc interpolating two points and tangents."""
    p1 = as_vec(P1)
    p2 = as_vec(P2)
    t1 = _unit_tangent(t1, "t1")
    t2 = _unit_tangent(t2, "t2")
    d = p2 - p1
    chord = float(np.linalg.norm(d))
    if chord == 0.0:
        raise ValueError("coincident biarc endpoints")
    l1, l2 = equal_chord_lambdas(d, t1, t2, mink_inner, 4.0 * chord)
    b1 = p1 + l1 * t1
    b2 = p2 - l2 * t2
    joint = (l2 * b1 + l1 * b2) / (l1 + l2)
    arc1 = mink_arc_hermite(p1, b1, joint)
    arc2 = mink_arc_hermite(joint, b2, p2)
    return MinkBiarc(arc1, arc2, joint, l1, l2, (p1, b1, joint, b2, p2))


def _point_arc(p, heading: float, tag: str) -> PlanarArc:
    return PlanarArc(float(p[0]), float(p[1]), heading, 0.0, 0.0, tag)


def _envelope_arc(p0, t0, p1, pm, tol: float, tag: str) -> PlanarArc:
    if np.hypot(*(p1 - p0)) <= tol:
        return _point_arc(p0, math.atan2(t0[1], t0[0]), tag)
    best = None
    for t in (t0, -t0):
        try:
            a = PlanarArc.from_point_tangent(p0, t, p1, tag)
        except ValueError:
            continue
        dist = float(a.distance(np.asarray(pm)[None, :])[0])
        if best is None or dist < best[0]:
            best = (dist, a)
    if best is None:
        raise ValueError("could not fit envelope arc")
    return best[1]


def _cap(center, r: float, p_from, p_to, pm, tol: float, tag: str) -> PlanarArc:
    """Arc of the circle ``(center, |r|)`` from ``p_from`` to ``p_to`` through ``pm``."""
    if abs(r) <= tol:
        return _point_arc(center, 0.0, tag)
    if np.hypot(*(p_to - p_from)) <= tol:
        if np.hypot(*(pm - p_from)) <= tol:
            return _point_arc(p_from, 0.0, tag)
        ang = math.atan2(p_from[1] - center[1], p_from[0] - center[0])
        return PlanarArc.circular(center, abs(r), ang, math.copysign(2 * math.pi, r), tag)
    return PlanarArc.through_three(p_from, pm, p_to, tag)


def mink_arc_envelope(arc: MinkArc) -> list[PlanarArc]:
    """Exact circular-arc pre-boundary of the circle family of ``arc``.

    The four arcs form a closed loop: branch ``-1`` in increasing ``u``,
    the end cap, branch ``+1`` in decreasing ``u``, the start cap.  Tags are
    ``env-``, ``cap1``, ``env+``, ``cap0``.
    """
    u = np.array([0.0, 0.5, 1.0])
    C, dC, _ = arc.derivatives(u)
    if not arc.is_space_like():
        raise TimeLikeTangent("Minkowski arc has time-like interior tangents")
    n_plus, n_minus = envelope_normals(dC)
    R = np.abs(C[:, 2])
    scale = max(1.0, float(np.max(np.abs(C[:, :2]))), float(np.max(R)))
    tol = 1e-12 * scale
    env = {}
    for sign, n in ((1, n_plus), (-1, n_minus)):
        p = C[:, :2] + C[:, 2:3] * n
        t = np.array([rot_ccw(n[0]), rot_ccw(n[2])])
        env[sign] = _envelope_arc(p[0], t[0], p[2], p[1], tol, "env+" if sign > 0 else "env-")
        env[(sign, "pts")] = p
    pp = env[(1, "pts")]
    pm_ = env[(-1, "pts")]
    dh = []
    for i in (0, 2):
        d = dC[i, :2]
        nd = float(np.hypot(*d))
        dh.append(d / nd if nd > 0 else np.array([1.0, 0.0]))
    c0, c1 = C[0, :2], C[2, :2]
    cap0 = _cap(c0, C[0, 2], pp[0], pm_[0], c0 - R[0] * dh[0], tol, "cap0")
    cap1 = _cap(c1, C[2, 2], pm_[2], pp[2], c1 + R[2] * dh[1], tol, "cap1")
    return [env[-1], cap1, env[1].reversed(), cap0]
