"""Planar circular arcs and line segments, and planar arc interpolation.

An arc is stored by its start point, start heading, signed curvature and
length.  Points are evaluated with the chord form

    p(s) = p0 + l sinc(phi) T + l sin(phi/2) sinc(phi/2) N,   l = L s, phi = k l

which stays exact as the curvature goes to zero, so line segments are just
arcs with ``curvature == 0`` and near-straight arcs keep full precision.
Circle-style fields (centre, radius, start/end angle, orientation) are
derived properties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import NoPositiveSolution

TWO_PI = 2.0 * math.pi
LINE_TURN = 1e-13


def _sinc(x):
    # sin(x)/x
    return np.sinc(np.asarray(x) / math.pi)


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _unit(v):
    v = np.asarray(v, dtype=float)
    n = float(np.hypot(v[0], v[1]))
    if n == 0.0:
        raise ValueError("zero direction")
    return v / n


def _wrap(h: float) -> float:
    return math.remainder(h, TWO_PI)


def rot_ccw(v):
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def rot_cw(v):
    v = np.asarray(v, dtype=float)
    return np.stack([v[..., 1], -v[..., 0]], axis=-1)


@dataclass(frozen=True)
class PlanarArc:
    """Oriented circular arc (or segment when ``curvature == 0``)."""

    x0: float
    y0: float
    heading: float
    curvature: float
    length: float
    tag: str = ""

    # -- constructors -------------------------------------------------

    @classmethod
    def segment(cls, p0, p1, tag: str = "") -> PlanarArc:
        d = np.asarray(p1, float) - np.asarray(p0, float)
        return cls(float(p0[0]), float(p0[1]), math.atan2(d[1], d[0]), 0.0,
                   float(np.hypot(d[0], d[1])), tag)

    @classmethod
    def from_point_tangent(cls, p0, t0, p1, tag: str = "") -> PlanarArc:
        """Arc leaving ``p0`` in direction ``t0`` and ending at ``p1``."""
        p0 = np.asarray(p0, float)
        t0 = _unit(t0)
        d = np.asarray(p1, float) - p0
        chord = float(np.hypot(d[0], d[1]))
        if chord == 0.0:
            raise ValueError("coincident endpoints")
        half = math.atan2(float(_cross(t0, d)), float(np.dot(t0, d)))
        if abs(half) > math.pi - 1e-12:
            raise ValueError("end point lies straight behind the start tangent")
        length = chord / float(_sinc(half))
        turn = 2.0 * half
        k = turn / length
        if abs(turn) <= LINE_TURN:
            k = 0.0
        return cls(float(p0[0]), float(p0[1]), math.atan2(t0[1], t0[0]), k, length, tag)

    @classmethod
    def through_three(cls, p0, pm, p1, tag: str = "") -> PlanarArc:
        """Arc from ``p0`` through ``pm`` to ``p1``; collinear input gives a segment."""
        p0 = np.asarray(p0, float)
        pm = np.asarray(pm, float)
        p1 = np.asarray(p1, float)
        a = p0 - pm
        b = p1 - pm
        cr = float(_cross(a, b))
        # half turn = pi - (inscribed angle at pm)
        half = math.atan2(abs(cr), -float(np.dot(a, b)))
        if cr > 0:
            half = -half
        d = p1 - p0
        if not np.any(d):
            raise ValueError("coincident endpoints")
        dir_chord = math.atan2(d[1], d[0])
        h0 = dir_chord - half
        return cls.from_point_tangent(p0, (math.cos(h0), math.sin(h0)), p1, tag)

    @classmethod
    def circular(cls, center, radius: float, start_angle: float, sweep: float,
                 tag: str = "") -> PlanarArc:
        """Arc of the circle (``center``, ``|radius|``) from ``start_angle``
        sweeping ``sweep`` radians (positive = counter-clockwise)."""
        R = abs(float(radius))
        if R == 0.0 or sweep == 0.0:
            raise ValueError("degenerate circular arc")
        sgn = 1.0 if sweep > 0 else -1.0
        x0 = center[0] + R * math.cos(start_angle)
        y0 = center[1] + R * math.sin(start_angle)
        return cls(float(x0), float(y0), _wrap(start_angle + sgn * math.pi / 2), sgn / R,
                   R * abs(sweep), tag)

    # -- derived circle data ------------------------------------------

    @property
    def turn(self) -> float:
        """Signed swept angle (positive = counter-clockwise)."""
        return self.curvature * self.length

    @property
    def is_line(self) -> bool:
        return abs(self.turn) <= LINE_TURN

    @property
    def kind(self) -> str:
        return "segment" if self.is_line else "circle"

    @property
    def orientation(self) -> str:
        return "cw" if self.curvature < 0 else "ccw"

    @property
    def start(self) -> np.ndarray:
        return np.array([self.x0, self.y0])

    @property
    def end(self) -> np.ndarray:
        return self.point_at(1.0)

    @property
    def normal0(self) -> np.ndarray:
        return np.array([-math.sin(self.heading), math.cos(self.heading)])

    @property
    def center(self) -> np.ndarray | None:
        if self.is_line:
            return None
        return self.start + self.normal0 / self.curvature

    @property
    def radius(self) -> float:
        return math.inf if self.is_line else 1.0 / abs(self.curvature)

    @property
    def start_angle(self) -> float:
        """Polar angle of the start point about the centre."""
        sgn = 1.0 if self.curvature > 0 else -1.0
        return self.heading - sgn * math.pi / 2

    @property
    def end_angle(self) -> float:
        return self.start_angle + self.turn

    @property
    def support_circle(self):
        """``(center, signed radius)`` or ``None`` for a segment."""
        if self.is_line:
            return None
        return self.center, 1.0 / self.curvature

    # -- evaluation ---------------------------------------------------

    def point_at(self, s):
        s = np.asarray(s, dtype=float)
        ell = self.length * s
        phi = self.curvature * ell
        a = ell * _sinc(phi)
        b = ell * np.sin(phi / 2) * _sinc(phi / 2)
        ch, sh = math.cos(self.heading), math.sin(self.heading)
        x = self.x0 + a * ch - b * sh
        y = self.y0 + a * sh + b * ch
        return np.stack([x, y], axis=-1)

    def heading_at(self, s):
        return self.heading + self.turn * np.asarray(s, dtype=float)

    def tangent_at(self, s):
        h = self.heading_at(s)
        return np.stack([np.cos(h), np.sin(h)], axis=-1)

    @property
    def start_tangent(self) -> np.ndarray:
        return self.tangent_at(0.0)

    @property
    def end_tangent(self) -> np.ndarray:
        return self.tangent_at(1.0)

    def midpoint(self) -> np.ndarray:
        return self.point_at(0.5)

    def sample(self, n: int) -> np.ndarray:
        return self.point_at(np.linspace(0.0, 1.0, n))

    def reversed(self) -> PlanarArc:
        e = self.end
        return PlanarArc(float(e[0]), float(e[1]), _wrap(self.heading + self.turn + math.pi),
                         -self.curvature, self.length, self.tag)

    def sub(self, s0: float, s1: float) -> PlanarArc:
        """Piece between parameters ``s0 < s1`` (same orientation)."""
        p = self.point_at(s0)
        return PlanarArc(float(p[0]), float(p[1]), _wrap(self.heading + self.turn * s0),
                         self.curvature, self.length * (s1 - s0), self.tag)

    def with_tag(self, tag: str) -> PlanarArc:
        return replace(self, tag=tag)

    # -- queries ------------------------------------------------------

    def _local(self, pts):
        pts = np.asarray(pts, dtype=float)
        w = pts - self.start
        T = np.array([math.cos(self.heading), math.sin(self.heading)])
        N = self.normal0
        wt = w @ T
        wn = w @ N
        return w, wt, wn

    def param_of(self, pts):
        """Parameter of the projection onto the support.

        Values outside ``[0, 1]`` mean the point projects beyond an end; for
        circles the gap is split between the two ends.
        """
        w, wt, wn = self._local(pts)
        if self.is_line:
            return wt / self.length
        k = self.curvature
        # angle about the centre from p0 to the point, stable as k -> 0
        alpha = np.arctan2(k * wt, 1.0 - k * wn)
        beta = np.mod(alpha if k > 0 else -alpha, TWO_PI)
        aturn = abs(self.turn)
        s = beta / aturn
        gap_side = (beta - aturn) > (TWO_PI - beta)
        return np.where((s > 1.0) & gap_side, (beta - TWO_PI) / aturn, s)

    def distance(self, pts):
        """Euclidean distance from each point to the arc."""
        pts = np.asarray(pts, dtype=float)
        w, wt, wn = self._local(pts)
        s = self.param_of(pts)
        inside = (s >= 0.0) & (s <= 1.0)
        if self.is_line:
            d_support = np.abs(wn)
        else:
            k = self.curvature
            kw2 = k * (wt * wt + wn * wn)
            ax = k * wt
            ay = k * wn - 1.0
            d_support = np.abs(kw2 - 2.0 * wn) / (np.hypot(ax, ay) + 1.0)
        e = self.end
        d0 = np.hypot(pts[..., 0] - self.x0, pts[..., 1] - self.y0)
        d1 = np.hypot(pts[..., 0] - e[0], pts[..., 1] - e[1])
        return np.where(inside, d_support, np.minimum(d0, d1))

    def contains(self, pts, tol: float = 1e-9):
        """Points within ``tol`` of the arc itself."""
        return self.distance(pts) <= tol

    def extreme_params(self, axis_angles) -> list[float]:
        """Parameters in (0, 1) where the heading equals one of ``axis_angles`` mod pi."""
        if self.is_line:
            return []
        out = []
        t = self.turn
        for base in axis_angles:
            # heading(s) = h0 + t s = base + m pi
            lo, hi = sorted((self.heading, self.heading + t))
            m0 = math.ceil((lo - base) / math.pi)
            m1 = math.floor((hi - base) / math.pi)
            for m in range(m0, m1 + 1):
                s = (base + m * math.pi - self.heading) / t
                if 1e-12 < s < 1.0 - 1e-12:
                    out.append(s)
        return sorted(out)

    def bbox(self) -> tuple[float, float, float, float]:
        ss = [0.0, 1.0] + self.extreme_params([0.0, math.pi / 2])
        p = self.point_at(np.array(ss))
        return (float(p[:, 0].min()), float(p[:, 1].min()),
                float(p[:, 0].max()), float(p[:, 1].max()))

    def signed_area_term(self) -> float:
        """Contribution to the shoelace area of a closed loop of arcs."""
        p0 = self.start
        p1 = self.end
        tri = 0.5 * float(p0[0] * p1[1] - p0[1] * p1[0])
        phi = self.turn
        if abs(phi) < 1e-4:
            seg = self.length**2 * (phi / 12.0 - phi**3 / 240.0)
        else:
            seg = self.length**2 * (phi - math.sin(phi)) / (2.0 * phi * phi)
        return tri + seg

    def is_degenerate(self, tol: float = 1e-12) -> bool:
        return not (self.length > tol) or not math.isfinite(self.length)


def loop_area(arcs) -> float:
    return sum(a.signed_area_term() for a in arcs)


# -- biarcs ---------------------------------------------------------------


def equal_chord_lambdas(d, t1, t2, inner, span: float):
    """Solve the biarc design parameters under the equal-chord rule.

    ``inner`` is the bilinear form (Euclidean or Minkowski) under which
    ``t1`` and ``t2`` are unit vectors.  The isosceles condition on the
    control polygon is linear in the second parameter once the first is
    fixed, so lambda2 is eliminated in closed form and the chord-equality
    residual is bracketed by scanning lambda1 over ``(0, span]`` and
    polished with Brent's method.

    Returns ``(lam1, lam2)``.
    """
    d = np.asarray(d, float)
    t1 = np.asarray(t1, float)
    t2 = np.asarray(t2, float)
    dd = float(inner(d, d))
    dt1 = float(inner(d, t1))
    dt2 = float(inner(d, t2))
    c12 = float(inner(t1, t2)) - 1.0

    def lam2_of(l1):
        den = 2.0 * dt2 - 2.0 * l1 * c12
        if den == 0.0:
            return math.nan
        return (dd - 2.0 * l1 * dt1) / den

    def resid(l1):
        l2 = lam2_of(l1)
        s = l1 + l2
        a = l1 * (l2 * t1 + d - l2 * t2) / s  # J - P1
        b = l2 * (-d + l1 * t1 - l1 * t2) / s  # J - P2
        return float(inner(a, a)) - float(inner(b, b))

    grid = np.concatenate([span * np.geomspace(1e-6, 1e-2, 24, endpoint=False),
                           np.linspace(span * 1e-2, span, 200)])
    prev = None
    for l1 in grid:
        l2 = lam2_of(l1)
        if not (l2 > 0 and math.isfinite(l2)):
            prev = None
            continue
        f = resid(l1)
        if prev is not None:
            pl1, pf = prev
            if f == 0.0:
                return float(l1), float(l2)
            if pf * f < 0:
                root = brentq(resid, pl1, l1, xtol=1e-15 * span, rtol=1e-15, maxiter=200)
                r2 = lam2_of(root)
                if r2 > 0:
                    return float(root), float(r2)
        prev = (l1, f)
    raise NoPositiveSolution("no equal-chord biarc with positive design parameters")


def _euclid(a, b):
    return np.dot(a, b)


def planar_biarc(p0, t0, p1, t1, tag: str = ""):
    """Equal-chord planar biarc through two point/tangent pairs.

    Returns the two arcs; they share the joint point and tangent.
    """
    p0 = np.asarray(p0, float)
    p1 = np.asarray(p1, float)
    t0 = _unit(t0)
    t1 = _unit(t1)
    d = p1 - p0
    chord = float(np.hypot(d[0], d[1]))
    if chord == 0.0:
        raise ValueError("coincident biarc endpoints")
    # straight data: split the segment in the middle
    if abs(_cross(t0, d)) <= 1e-14 * chord and abs(_cross(t1, d)) <= 1e-14 * chord \
            and np.dot(t0, d) > 0 and np.dot(t1, d) > 0:
        jm = p0 + 0.5 * d
        return PlanarArc.segment(p0, jm, tag), PlanarArc.segment(jm, p1, tag)
    l1, l2 = equal_chord_lambdas(d, t0, t1, _euclid, 4.0 * chord)
    b1 = p0 + l1 * t0
    b2 = p1 - l2 * t1
    joint = (l2 * b1 + l1 * b2) / (l1 + l2)
    tj = b2 - b1
    a1 = PlanarArc.from_point_tangent(p0, t0, joint, tag)
    a2 = PlanarArc.from_point_tangent(joint, tj, p1, tag)
    return a1, a2
