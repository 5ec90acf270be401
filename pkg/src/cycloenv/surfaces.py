"""Surfaces ``B(u, t)`` in R^{2,1} and their singular curves.

A point ``(u, t)`` is singular when the tangent plane spanned by ``B_u``
and ``B_t`` is not space-like; the boundary of that set is the zero set of
``D = det(Gram(B_u, B_t))``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.optimize import brentq

from .curves import HermiteCurve, MinkCurve
from .errors import SeedGridTooCoarse
from .mink import CausalClass, mink_inner

SEED_GRID = 32
TRACE_STEP = 1.0 / 64.0
TRACE_EPS = 1e-10


class MinkSurface:
    """Base class; subclasses implement :meth:`partials`.

    ``partials(u, t)`` returns ``(B, B_u, B_t, B_uu, B_ut, B_tt)``, each with
    a trailing axis of length 3.
    """

    def partials(self, u, t):
        raise NotImplementedError

    def __call__(self, u, t):
        return self.partials(u, t)[0]

    def boundary_curves(self) -> list["IsoCurve"]:
        return boundary_curves(self)

    def spatial_scale(self, n: int = 33) -> float:
        g = np.linspace(0.0, 1.0, n)
        U, T = np.meshgrid(g, g, indexing="ij")
        B = self(U, T).reshape(-1, 3)
        R = np.abs(B[:, 2])
        lo = np.min(B[:, :2] - R[:, None], axis=0)
        hi = np.max(B[:, :2] + R[:, None], axis=0)
        return float(np.hypot(*(hi - lo))) or 1.0


class FunctionSurface(MinkSurface):
    """Surface from callables ``f(u, t)`` and its first and second partials."""

    def __init__(self, f, fu, ft, fuu, fut, ftt, name: str = ""):
        self._fns = (f, fu, ft, fuu, fut, ftt)
        self.name = name

    def partials(self, u, t):
        u = np.asarray(u, dtype=float)
        t = np.asarray(t, dtype=float)
        shape = np.broadcast(u, t).shape + (3,)
        return tuple(np.broadcast_to(np.asarray(g(u, t), dtype=float), shape) for g in self._fns)


def _bernstein_to_power(n: int) -> np.ndarray:
    M = np.zeros((n + 1, n + 1))
    for i in range(n + 1):
        for j in range(i, n + 1):
            M[j, i] = comb(n, j) * comb(j, i) * (-1) ** (j - i)
    return M


def _basis(s, deg: int):
    """Monomials and their first two derivatives at ``s`` (shape ``s.shape + (deg+1,)``)."""
    k = np.arange(deg + 1)
    s = s[..., None]
    p0 = s ** k
    p1 = np.where(k >= 1, k * s ** np.maximum(k - 1, 0), 0.0)
    p2 = np.where(k >= 2, k * (k - 1) * s ** np.maximum(k - 2, 0), 0.0)
    return p0, p1, p2


class PolySurface(MinkSurface):
    """Tensor-product piecewise polynomial surface.

    ``patches[i][j]`` holds power coefficients of shape ``(du+1, dt+1, 3)``
    in the local variables of the cell ``[ubreaks[i], ubreaks[i+1]] x
    [tbreaks[j], tbreaks[j+1]]`` mapped onto the unit square.
    """

    def __init__(self, patches, ubreaks=(0.0, 1.0), tbreaks=(0.0, 1.0)):
        self.ubreaks = np.asarray(ubreaks, dtype=float)
        self.tbreaks = np.asarray(tbreaks, dtype=float)
        self.patches = [[np.asarray(p, dtype=float) for p in row] for row in patches]
        if len(self.patches) != len(self.ubreaks) - 1 or any(
                len(row) != len(self.tbreaks) - 1 for row in self.patches):
            raise ValueError("patch grid does not match the breakpoints")

    @classmethod
    def bezier(cls, nets, ubreaks=None, tbreaks=None):
        """From Bezier control nets ``nets[i][j]`` of shape ``(m+1, n+1, 3)``."""
        patches = []
        for row in nets:
            prow = []
            for net in row:
                net = np.asarray(net, dtype=float)
                Mu = _bernstein_to_power(net.shape[0] - 1)
                Mt = _bernstein_to_power(net.shape[1] - 1)
                prow.append(np.einsum("ai,bj,ijk->abk", Mu, Mt, net))
            patches.append(prow)
        nu, nt = len(patches), len(patches[0])
        ub = np.linspace(0, 1, nu + 1) if ubreaks is None else ubreaks
        tb = np.linspace(0, 1, nt + 1) if tbreaks is None else tbreaks
        return cls(patches, ub, tb)

    def partials(self, u, t):
        u = np.asarray(u, dtype=float)
        t = np.asarray(t, dtype=float)
        u, t = np.broadcast_arrays(u, t)
        shape = u.shape
        uf = u.reshape(-1)
        tf = t.reshape(-1)
        iu = np.clip(np.searchsorted(self.ubreaks, uf, side="right") - 1, 0, len(self.ubreaks) - 2)
        it = np.clip(np.searchsorted(self.tbreaks, tf, side="right") - 1, 0, len(self.tbreaks) - 2)
        out = [np.empty((uf.size, 3)) for _ in range(6)]
        for i in np.unique(iu):
            for j in np.unique(it[iu == i]):
                m = (iu == i) & (it == j)
                hu = self.ubreaks[i + 1] - self.ubreaks[i]
                ht = self.tbreaks[j + 1] - self.tbreaks[j]
                s = (uf[m] - self.ubreaks[i]) / hu
                w = (tf[m] - self.tbreaks[j]) / ht
                c = self.patches[i][j]
                su = _basis(s, c.shape[0] - 1)
                sw = _basis(w, c.shape[1] - 1)
                for slot, (a, b, scale) in enumerate(((0, 0, 1.0), (1, 0, hu), (0, 1, ht),
                                                      (2, 0, hu * hu), (1, 1, hu * ht), (0, 2, ht * ht))):
                    out[slot][m] = np.einsum("na,nb,abk->nk", su[a], sw[b], c) / scale
        return tuple(o.reshape(shape + (3,)) for o in out)


class IsoCurve(MinkCurve):
    """``B(v, value)`` (``axis="u"``) or ``B(value, v)`` (``axis="t"``)."""

    def __init__(self, surface: MinkSurface, axis: str, value: float):
        if axis not in ("u", "t"):
            raise ValueError("axis must be 'u' or 't'")
        self.surface = surface
        self.axis = axis
        self.value = float(value)

    def derivatives(self, v):
        v = np.asarray(v, dtype=float)
        c = np.full(v.shape, self.value)
        B, Bu, Bt, Buu, But, Btt = self.surface.partials(*((v, c) if self.axis == "u" else (c, v)))
        if self.axis == "u":
            return B, Bu, Buu
        return B, Bt, Btt

    @property
    def label(self) -> str:
        return f"B(v,{self.value:g})" if self.axis == "u" else f"B({self.value:g},v)"


def boundary_curves(surface: MinkSurface) -> list[IsoCurve]:
    """``B(., 0)``, ``B(., 1)``, ``B(0, .)``, ``B(1, .)``."""
    return [IsoCurve(surface, "u", 0.0), IsoCurve(surface, "u", 1.0),
            IsoCurve(surface, "t", 0.0), IsoCurve(surface, "t", 1.0)]


def curve_length(curve: MinkCurve, n: int = 257) -> float:
    """Euclidean arc length in R^3 (used to detect point-valued curves)."""
    P = curve(np.linspace(0.0, 1.0, n))
    return float(np.sum(np.linalg.norm(np.diff(P, axis=0), axis=1)))


def is_degenerate_curve(curve: MinkCurve, tol: float = 1e-9) -> bool:
    return curve_length(curve) < tol


# -- the singular condition ---------------------------------------------------

def det_condition(surface: MinkSurface, u, t):
    """``D = <Bu,Bu><Bt,Bt> - <Bu,Bt>^2`` (Gram determinant of the tangent plane)."""
    _, Bu, Bt, _, _, _ = surface.partials(u, t)
    return mink_inner(Bu, Bu) * mink_inner(Bt, Bt) - mink_inner(Bu, Bt) ** 2


def det_condition_expanded(surface: MinkSurface, u, t):
    """The same determinant as a difference of squared 2x2 minors."""
    _, Bu, Bt, _, _, _ = surface.partials(u, t)
    xu, yu, ru = Bu[..., 0], Bu[..., 1], Bu[..., 2]
    xt, yt, rt = Bt[..., 0], Bt[..., 1], Bt[..., 2]
    return (xu * yt - xt * yu) ** 2 - (xu * rt - xt * ru) ** 2 - (yu * rt - yt * ru) ** 2


def det_gradient(surface: MinkSurface, u, t):
    """``(D, D_u, D_t)`` from the analytic second partials."""
    _, Bu, Bt, Buu, But, Btt = surface.partials(u, t)
    a = mink_inner(Bu, Bu)
    b = mink_inner(Bu, Bt)
    c = mink_inner(Bt, Bt)
    a_u = 2 * mink_inner(Buu, Bu)
    a_t = 2 * mink_inner(But, Bu)
    b_u = mink_inner(Buu, Bt) + mink_inner(Bu, But)
    b_t = mink_inner(But, Bt) + mink_inner(Bu, Btt)
    c_u = 2 * mink_inner(But, Bt)
    c_t = 2 * mink_inner(Btt, Bt)
    D = a * c - b * b
    return D, a_u * c + a * c_u - 2 * b * b_u, a_t * c + a * c_t - 2 * b * b_t


# -- tracing --------------------------------------------------------------------

@dataclass
class TracedCurve:
    """Polyline on ``{D = 0}`` with lifted points and tangents."""

    surface: MinkSurface
    u: np.ndarray
    t: np.ndarray
    vu: np.ndarray
    vt: np.ndarray
    closed: bool = False
    eps: float = 0.0
    points: np.ndarray = field(init=False)
    tangents: np.ndarray = field(init=False)

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.t = np.asarray(self.t, dtype=float)
        self.vu = np.asarray(self.vu, dtype=float)
        self.vt = np.asarray(self.vt, dtype=float)
        B, Bu, Bt, _, _, _ = self.surface.partials(self.u, self.t)
        self.points = B
        self.tangents = self.vu[:, None] * Bu + self.vt[:, None] * Bt

    def __len__(self):
        return len(self.u)

    @property
    def param_length(self) -> float:
        return float(np.sum(np.hypot(np.diff(self.u), np.diff(self.t))))

    @property
    def degenerate(self) -> bool:
        return len(self.u) < 2 or self.param_length < 1e-9

    @property
    def causal(self) -> list[CausalClass]:
        return [_classify_tangent(tau) for tau in self.tangents]

    @property
    def residuals(self) -> np.ndarray:
        return det_condition(self.surface, self.u, self.t)

    @property
    def samples(self) -> list[dict]:
        cls = self.causal
        return [{"u": float(self.u[i]), "t": float(self.t[i]),
                 "paramTangent": (float(self.vu[i]), float(self.vt[i])),
                 "liftedPoint": tuple(self.points[i].tolist()),
                 "liftedTangent": tuple(self.tangents[i].tolist()),
                 "causal": cls[i]} for i in range(len(self.u))]

    def sub(self, idx) -> "TracedCurve":
        return TracedCurve(self.surface, self.u[idx], self.t[idx], self.vu[idx], self.vt[idx],
                           False, self.eps)


def _rel_norm(tau):
    tau = np.asarray(tau, dtype=float)
    e2 = np.sum(tau * tau, axis=-1)
    return mink_inner(tau, tau) / np.where(e2 > 0, e2, 1.0)


def _classify_tangent(tau, eps: float = 1e-9) -> CausalClass:
    q = float(_rel_norm(tau))
    if abs(q) <= eps:
        return CausalClass.LIGHT_LIKE
    return CausalClass.SPACE_LIKE if q > 0 else CausalClass.TIME_LIKE


def _project(surface, u, t, eps, iters: int = 30):
    """Newton projection onto ``D = 0`` along the gradient."""
    for _ in range(iters):
        D, Du, Dt = det_gradient(surface, u, t)
        g2 = Du * Du + Dt * Dt
        if g2 == 0.0:
            return u, t, False
        u, t = u - D * Du / g2, t - D * Dt / g2
        if abs(D) <= eps and D * D / g2 < 1e-28:
            return float(u), float(t), True
    D = det_condition(surface, u, t)
    return float(u), float(t), bool(abs(D) <= eps)


def _tangent(surface, u, t):
    _, Du, Dt = det_gradient(surface, u, t)
    n = math.hypot(Du, Dt)
    if n == 0.0:
        return None
    return -Dt / n, Du / n


def _inside(u, t, slack=0.0):
    return -slack <= u <= 1 + slack and -slack <= t <= 1 + slack


def _exit_point(surface, p, q, eps):
    """Clip the step ``p -> q`` at the domain boundary and project there."""
    (u0, t0), (u1, t1) = p, q
    lam = 1.0
    for val0, val1 in ((u0, u1), (t0, t1)):
        if val1 < 0:
            lam = min(lam, val0 / (val0 - val1))
        elif val1 > 1:
            lam = min(lam, (1 - val0) / (val1 - val0))
    u, t = u0 + lam * (u1 - u0), t0 + lam * (t1 - t0)
    # slide along the edge to the zero of D
    on_u = abs(u) < 1e-12 or abs(u - 1) < 1e-12
    if on_u:
        u = round(u)
        f = lambda s: float(det_condition(surface, u, s))
        lo, hi = max(0.0, t - 0.1), min(1.0, t + 0.1)
    else:
        t = round(t)
        f = lambda s: float(det_condition(surface, s, t))
        lo, hi = max(0.0, u - 0.1), min(1.0, u + 0.1)
    x0 = t if on_u else u
    a, b = _bracket(f, x0, lo, hi)
    if a is not None:
        x = brentq(f, a, b, xtol=1e-15)
        return (u, x) if on_u else (x, t)
    return (u, t)


def _bracket(f, x0, lo, hi, n: int = 40):
    xs = np.linspace(lo, hi, n)
    fs = np.array([f(x) for x in xs])
    best = None
    for i in range(n - 1):
        if fs[i] == 0:
            return xs[i], xs[i]
        if fs[i] * fs[i + 1] < 0:
            mid = 0.5 * (xs[i] + xs[i + 1])
            if best is None or abs(mid - x0) < abs(0.5 * sum(best) - x0):
                best = (xs[i], xs[i + 1])
    return best if best else (None, None)


def _march(surface, start, direction, eps, h_max, start_pt, max_steps: int = 100000):
    """Trace from ``start`` in ``direction``; returns (points, closed)."""
    pts = [start]
    u, t = start
    tan = _tangent(surface, u, t)
    if tan is None:
        return pts, False
    sgn = direction
    h = h_max
    travelled = 0.0
    for _ in range(max_steps):
        du, dt = tan[0] * sgn, tan[1] * sgn
        pu, pt = u + h * du, t + h * dt
        nu, nt, ok = _project(surface, pu, pt, eps)
        new_tan = _tangent(surface, nu, nt) if ok else None
        step = math.hypot(nu - u, nt - t)
        # the implicit tangent is continuous along a branch, so a reversal means a hop
        turn_ok = new_tan is not None and sgn * (new_tan[0] * du + new_tan[1] * dt) >= math.cos(0.3)
        # the corrector must not carry the point backwards onto another branch
        ahead = (nu - u) * du + (nt - t) * dt >= 0.5 * step
        if not ok or not turn_ok or not ahead or step > 1.5 * h:
            h *= 0.5
            if h < 1e-9:
                return pts, False
            continue
        if not _inside(nu, nt):
            pts.append(_exit_point(surface, (u, t), (nu, nt), eps))
            return pts, False
        travelled += step
        if travelled > 3 * h_max and math.hypot(nu - start_pt[0], nt - start_pt[1]) < 0.75 * h_max:
            return pts, True
        u, t, tan = nu, nt, new_tan
        pts.append((u, t))
        h = min(h_max, 1.5 * h)
    return pts, False


def _seeds(surface, k: int):
    g = np.linspace(0.0, 1.0, k + 1)
    U, T = np.meshgrid(g, g, indexing="ij")
    D = det_condition(surface, U, T)
    scale = float(np.max(np.abs(D))) or 1.0
    seeds = []
    for axis in (0, 1):
        for i in range(k + 1):
            for j in range(k):
                if axis == 0:
                    a, b = D[i, j], D[i, j + 1]
                    f = lambda s, i=i: float(det_condition(surface, g[i], s))
                    lo, hi = g[j], g[j + 1]
                else:
                    a, b = D[j, i], D[j + 1, i]
                    f = lambda s, i=i: float(det_condition(surface, s, g[i]))
                    lo, hi = g[j], g[j + 1]
                if a == 0.0:
                    x = lo
                elif a * b < 0:
                    x = brentq(f, lo, hi, xtol=1e-15)
                else:
                    continue
                seeds.append((g[i], x) if axis == 0 else (x, g[i]))
    return seeds, scale


def _near_polyline(p, poly, r):
    P = np.asarray(poly)
    if len(P) == 1:
        return math.hypot(p[0] - P[0, 0], p[1] - P[0, 1]) < r
    a = P[:-1]
    d = P[1:] - a
    L2 = np.maximum(np.sum(d * d, axis=1), 1e-300)
    s = np.clip(((p[0] - a[:, 0]) * d[:, 0] + (p[1] - a[:, 1]) * d[:, 1]) / L2, 0, 1)
    q = a + s[:, None] * d
    return bool(np.min(np.hypot(q[:, 0] - p[0], q[:, 1] - p[1])) < r)


def trace_singular_curves(surface: MinkSurface, seed_grid: int = SEED_GRID,
                          step: float = TRACE_STEP, eps_rel: float = TRACE_EPS) -> list[TracedCurve]:
    """All components of ``{D = 0}`` in the unit square, deterministically ordered."""
    seeds, scale = _seeds(surface, seed_grid)
    eps = eps_rel * scale
    curves: list[TracedCurve] = []
    polys: list[list] = []
    for s in seeds:
        if any(_near_polyline(s, p, 0.5 * step) for p in polys):
            continue
        u, t, ok = _project(surface, s[0], s[1], eps)
        if not ok or not _inside(u, t, 1e-12):
            continue
        u, t = min(max(u, 0.0), 1.0), min(max(t, 0.0), 1.0)
        fwd, closed = _march(surface, (u, t), 1, eps, step, (u, t))
        if closed:
            pts = fwd + [fwd[0]]
        else:
            bwd, _ = _march(surface, (u, t), -1, eps, step, (u, t))
            pts = bwd[::-1] + fwd[1:]
        P = np.array(pts)
        keep = np.concatenate([[True], np.hypot(*np.diff(P, axis=0).T) > 1e-12])
        if closed:
            keep[-1] = True
        P = P[keep]
        tans =[_tangent(surface, a, b) or (0.0, 0.0) for a, b in P]
        V = np.array(tans)
        # orient the implicit tangents along the traversal
        for i in range(len(P)):
            j = min(i + 1, len(P) - 1)
            k = max(i - 1, 0)
            dirv = P[j] - P[k]
            if V[i] @ dirv < 0:
                V[i] = -V[i]
        polys.append(pts)
        curves.append(TracedCurve(surface, P[:, 0], P[:, 1], V[:, 0], V[:, 1], closed, eps))
    for c in curves:
        if not c.closed:
            ends = [(c.u[0], c.t[0]), (c.u[-1], c.t[-1])]
            for e in ends:
                if 1e-9 < e[0] < 1 - 1e-9 and 1e-9 < e[1] < 1 - 1e-9 and len(c) > 1:
                    warnings.warn(SeedGridTooCoarse(
                        f"traced component ends inside the domain at {e}; refine the seed grid"))
    return curves


# -- causal segmentation ----------------------------------------------------

def _tangent_at(surface, u, t, ref):
    tan = _tangent(surface, u, t)
    if tan is None:
        return None
    if tan[0] * ref[0] + tan[1] * ref[1] < 0:
        tan = (-tan[0], -tan[1])
    _, Bu, Bt, _, _, _ = surface.partials(u, t)
    return tan, tan[0] * Bu + tan[1] * Bt


def _crossing(curve: TracedCurve, i: int):
    """Light-like crossing between samples ``i`` and ``i+1`` by bisection."""
    s_ = curve.surface
    a = np.array([curve.u[i], curve.t[i]])
    b = np.array([curve.u[i + 1], curve.t[i + 1]])
    ref = (curve.vu[i], curve.vt[i])

    def q(lam):
        p = a + lam * (b - a)
        u, t, _ = _project(s_, p[0], p[1], curve.eps)
        res = _tangent_at(s_, u, t, ref)
        if res is None:
            # rank drop: the implicit tangent is undefined, interpolate the traced one
            v = (1 - lam) * np.array([curve.vu[i], curve.vt[i]]) + lam * np.array([curve.vu[i + 1], curve.vt[i + 1]])
            _, Bu, Bt, _, _, _ = s_.partials(u, t)
            return u, t, (float(v[0]), float(v[1])), float(_rel_norm(v[0] * Bu + v[1] * Bt))
        return u, t, res[0], float(_rel_norm(res[1]))

    qa = float(_rel_norm(curve.tangents[i]))
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        _, _, _, qm = q(mid)
        if (qm > 0) == (qa > 0):
            lo = mid
        else:
            hi = mid
    u, t, tan, _ = q(0.5 * (lo + hi))
    return u, t, tan[0], tan[1]


def segment_by_causality(curve: TracedCurve, keep_timelike: bool = False) -> list[TracedCurve]:
    """Split at light-like crossings and keep the space-like pieces."""
    if len(curve) < 2:
        return []
    q = _rel_norm(curve.tangents)
    tol = 1e-9
    cls = np.where(q > tol, 1, np.where(q < -tol, -1, 0))
    if np.all(cls >= 0) and np.any(cls > 0):
        return [curve]
    if np.all(cls <= 0):
        return [curve] if keep_timelike else []
    # insert crossing samples
    U, T, VU, VT, C = [], [], [], [], []
    n = len(curve)
    for i in range(n):
        U.append(curve.u[i]); T.append(curve.t[i]); VU.append(curve.vu[i]); VT.append(curve.vt[i])
        C.append(cls[i])
        if i + 1 < n and cls[i] * cls[i + 1] < 0:
            u, t, a, b = _crossing(curve, i)
            U.append(u); T.append(t); VU.append(a); VT.append(b); C.append(0)
    C = np.array(C)
    pieces = []
    want = (1, -1) if keep_timelike else (1,)
    i = 0
    m = len(C)
    while i < m:
        if C[i] == 0:
            i += 1
            continue
        sign = C[i]
        j = i
        while j + 1 < m and C[j + 1] == sign:
            j += 1
        lo = i - 1 if i > 0 and C[i - 1] == 0 else i
        hi = j + 1 if j + 1 < m and C[j + 1] == 0 else j
        if sign in want and hi > lo:
            idx = slice(lo, hi + 1)
            pieces.append(TracedCurve(curve.surface, np.array(U[idx]), np.array(T[idx]),
                                      np.array(VU[idx]), np.array(VT[idx]), False, curve.eps))
        i = j + 1
    if curve.closed and len(pieces) > 1 and C[0] != 0 and C[0] == C[-1] and C[0] in want:
        # the first and last pieces are one piece across the seam
        first, last = pieces[0], pieces[-1]
        if first.u[0] == curve.u[0] and last.u[-1] == curve.u[-1]:
            merged = TracedCurve(curve.surface, np.concatenate([last.u, first.u[1:]]),
                                 np.concatenate([last.t, first.t[1:]]),
                                 np.concatenate([last.vu, first.vu[1:]]),
                                 np.concatenate([last.vt, first.vt[1:]]), False, curve.eps)
            pieces = [merged] + pieces[1:-1]
    return pieces


def lift_to_mink_curve(curve: TracedCurve) -> HermiteCurve | None:
    """Cubic Hermite curve through the lifted samples, or ``None`` if degenerate.

    The traced samples are parameterised by parameter-space arc length, so
    the lifted tangent is the derivative with respect to that length.
    """
    if curve.degenerate:
        return None
    s = np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(curve.u), np.diff(curve.t)))])
    keep = np.concatenate([[True], np.diff(s) > 1e-14])
    return HermiteCurve(s[keep], curve.points[keep], curve.tangents[keep], closed=curve.closed)


def curve_causal_pieces(curve: MinkCurve, samples: int = 513, eps: float = 1e-9):
    """Split ``[0, 1]`` into maximal space-like / time-like intervals of a MinkCurve.

    Returns ``[(a, b, CausalClass)]`` with light-like transitions located by
    Brent's method.
    """
    v = np.linspace(0.0, 1.0, samples)
    q = _rel_norm(curve.derivative(v))
    cls = np.where(q > eps, 1, np.where(q < -eps, -1, 0))
    f = lambda x: float(_rel_norm(curve.derivative(np.array([x])))[0])
    cuts = [0.0]
    kinds = []
    last = 0
    for i in range(samples):
        if cls[i] == 0:
            continue
        if last != 0 and cls[i] != last:
            j = i - 1
            while j > 0 and cls[j] == 0:
                j -= 1
            x = brentq(f, v[j], v[i], xtol=1e-14) if f(v[j]) * f(v[i]) < 0 else 0.5 * (v[j] + v[i])
            cuts.append(x)
            kinds.append(last)
        last = cls[i]
    cuts.append(1.0)
    kinds.append(last if last != 0 else 0)
    out = []
    names = {1: CausalClass.SPACE_LIKE, -1: CausalClass.TIME_LIKE, 0: CausalClass.LIGHT_LIKE}
    for a, b, k in zip(cuts[:-1], cuts[1:], kinds):
        if b - a > 1e-12:
            out.append((a, b, names[k]))
    return out
