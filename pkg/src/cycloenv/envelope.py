"""Exact envelope of the circle family of a curve in R^{2,1}.

Branch ``+1`` lies to the left of the spine for positive radii.  Both
branches are written ``e = c + r * n`` with ``n`` a unit normal; the
oriented-contact tangent at ``e`` is ``rot_ccw(n)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import TimeLikeTangent
from .mink import EPS_LIGHT


def _branch_sign(branch) -> int:
    if branch in (1, "+", "plus"):
        return 1
    if branch in (-1, "-", "minus"):
        return -1
    raise ValueError(f"branch must be +1 or -1, got {branch!r}")


def envelope_normals(dC, eps: float = EPS_LIGHT):
    """Unit normals ``(n_plus, n_minus)`` for tangent vectors ``dC``.

    Near-light-like tangents (within ``eps`` relative to ``|dC|^2``) merge
    the branches.  Raises :class:`TimeLikeTangent` otherwise.
    """
    dC = np.asarray(dC, dtype=float)
    dx, dy, dr = dC[..., 0], dC[..., 1], dC[..., 2]
    q = dx * dx + dy * dy
    m = q - dr * dr
    tol = eps * (q + dr * dr)
    if np.any(m < -tol) or np.any(q == 0.0):
        raise TimeLikeTangent("curve tangent is time-like; the circle family has no real envelope")
    s = np.sqrt(np.maximum(m, 0.0))
    s = np.where(np.abs(m) <= tol, 0.0, s)
    a = dr / q
    b = s / q
    # J d = (dy, -dx)
    base = np.stack([-a * dx, -a * dy], axis=-1)
    rot = np.stack([-b * dy, b * dx], axis=-1)
    return base + rot, base - rot


def _normal_and_derivative(dC, ddC, sign: int, eps: float = EPS_LIGHT):
    dC = np.asarray(dC, dtype=float)
    ddC = np.asarray(ddC, dtype=float)
    dx, dy, dr = dC[..., 0], dC[..., 1], dC[..., 2]
    ex, ey, er = ddC[..., 0], ddC[..., 1], ddC[..., 2]
    n_plus, n_minus = envelope_normals(dC, eps)
    n = n_plus if sign > 0 else n_minus
    q = dx * dx + dy * dy
    m = q - dr * dr
    s = np.sqrt(np.maximum(m, 0.0))
    light = np.abs(m) <= eps * (q + dr * dr)
    dq = 2.0 * (dx * ex + dy * ey)
    with np.errstate(divide="ignore", invalid="ignore"):
        ds = np.where(light, 0.0, (0.5 * dq - dr * er) / np.where(s > 0, s, 1.0))
    ss = sign * s
    dss = sign * ds
    num = np.stack([dr * dx + ss * dy, dr * dy - ss * dx], axis=-1)
    dnum = np.stack([er * dx + dr * ex + dss * dy + ss * ey,
                     er * dy + dr * ey - dss * dx - ss * ex], axis=-1)
    dn = -dnum / q[..., None] + num * (dq / (q * q))[..., None]
    return n, dn, light


@dataclass(frozen=True)
class EnvelopePoint:
    branch: int
    point: np.ndarray
    tangent: np.ndarray
    paramV: float
    center: np.ndarray
    radius: float


def envelope_eval(curve, v, branch, eps: float = EPS_LIGHT):
    """Vectorised envelope evaluation.

    Returns ``(points, normals, speed)`` where ``speed`` is the signed
    parametric speed of the branch along ``rot_ccw(normal)``.
    """
    sign = _branch_sign(branch)
    v = np.asarray(v, dtype=float)
    C, dC, ddC = curve.derivatives(v)
    n, dn, light = _normal_and_derivative(dC, ddC, sign, eps)
    r = C[..., 2:3]
    pts = C[..., :2] + r * n
    t = np.stack([-n[..., 1], n[..., 0]], axis=-1)
    de = dC[..., :2] + dC[..., 2:3] * n + r * dn
    speed = np.sum(de * t, axis=-1)
    if np.any(light):
        # the square-root term is not differentiable at light-like tangents
        h = 1e-6
        vl = np.atleast_1d(v)[np.atleast_1d(light)]
        lo = np.clip(vl - h, 0.0, 1.0)
        hi = np.clip(vl + h, 0.0, 1.0)
        Cl = curve(lo)
        Ch = curve(hi)
        nl = envelope_normals(curve.derivative(lo), eps)[0 if sign > 0 else 1]
        nh = envelope_normals(curve.derivative(hi), eps)[0 if sign > 0 else 1]
        el = Cl[..., :2] + Cl[..., 2:3] * nl
        eh = Ch[..., :2] + Ch[..., 2:3] * nh
        tl = np.atleast_2d(t)[np.atleast_1d(light)]
        fd = np.sum((eh - el) * tl, axis=-1) / (hi - lo)
        sp = np.atleast_1d(speed).copy()
        sp[np.atleast_1d(light)] = fd
        speed = sp.reshape(np.shape(speed))
    return pts, n, speed


def envelope_point(curve, v: float, branch, eps: float = EPS_LIGHT) -> EnvelopePoint:
    """Point and unit tangent of one envelope branch at parameter ``v``."""
    sign = _branch_sign(branch)
    pts, n, speed = envelope_eval(curve, np.array([float(v)]), sign, eps)
    C = curve(float(v))
    t = np.array([-n[0, 1], n[0, 0]])
    if speed[0] < 0:
        t = -t
    return EnvelopePoint(sign, pts[0], t, float(v), C[:2].copy(), float(C[2]))


def find_envelope_cusps(curve, branch, samples: int = 2049, tol: float | None = None) -> list[float]:
    """Parameters where the chosen branch has vanishing speed.

    Sign changes of the signed speed are refined with Brent's method;
    samples whose speed is already below ``tol`` (default ``1e-8`` times
    the scene diagonal) are reported as well.
    """
    sign = _branch_sign(branch)
    if tol is None:
        tol = 1e-8 * curve.spatial_scale()
    v = np.linspace(0.0, 1.0, samples)
    _, _, sp = envelope_eval(curve, v, sign)

    def f(x):
        return float(envelope_eval(curve, np.array([x]), sign)[2][0])

    out: list[float] = []
    small = np.abs(sp) <= tol
    out.extend(v[small].tolist())
    for i in range(samples - 1):
        if small[i] or small[i + 1]:
            continue
        if sp[i] * sp[i + 1] < 0:
            out.append(brentq(f, v[i], v[i + 1], xtol=1e-14))
    return sorted(out)
