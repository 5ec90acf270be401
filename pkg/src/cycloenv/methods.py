"""Arc-spline approximation of worm boundaries: DAI, DBI, IAI, IBI.

Each method maps a curve in R^{2,1} to an :class:`ArcSoup`, a superset of
the boundary of the swept region.  Envelope arcs carry a span
``(branch, v0, v1)`` in the curve parameter; caps carry branch ``0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .arcs import PlanarArc, planar_biarc
from .conics import _cap, mink_arc_envelope, mink_arc_through_3, mink_biarc
from .curves import graded_map
from .envelope import envelope_eval, envelope_normals, find_envelope_cusps
from .errors import CuspInRange, LightLikeInterior, MaxDepthExceeded, TimeLikeTangent

METHODS = ("dai", "dbi", "iai", "ibi")
LIGHT_TOL = 1e-9
MAX_DEPTH = 32


@dataclass
class ArcSoup:
    arcs: list = field(default_factory=list)
    spans: list = field(default_factory=list)
    method: str = ""
    samples: int = 0

    def add(self, arc: PlanarArc, span=(0, math.nan, math.nan), tol: float = 0.0) -> None:
        if arc.length <= tol or not np.all(np.isfinite([arc.x0, arc.y0, arc.heading, arc.length])):
            return
        self.arcs.append(arc)
        self.spans.append(tuple(span))

    def extend(self, other: "ArcSoup") -> None:
        self.arcs.extend(other.arcs)
        self.spans.extend(other.spans)
        self.samples += other.samples

    @property
    def arcCount(self) -> int:
        return len(self.arcs)

    @property
    def stats(self) -> dict:
        return {"arcCount": self.arcCount, "methodUsed": self.method, "samplesUsed": self.samples}

    def __len__(self):
        return len(self.arcs)

    def __iter__(self):
        return iter(self.arcs)


@dataclass(frozen=True)
class MethodConfig:
    method: str = "iai"
    N: int = 16
    delta: float | None = None
    cusp_policy: str = "error"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.N < 1 or (self.method in ("dai", "iai") and self.N % 2):
            raise ValueError(f"{self.method} needs an even N >= 2, got {self.N}")
        if self.delta is not None and not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.cusp_policy not in ("error", "split"):
            raise ValueError("cusp_policy must be 'error' or 'split'")

    @property
    def adaptive(self) -> bool:
        return self.delta is not None


@dataclass(frozen=True)
class LightLikePlan:
    """Which endpoint tangents are light-like, and the resulting sampling map."""

    start: bool
    end: bool
    method: str

    @property
    def grading(self):
        if self.method in ("iai", "ibi"):
            return graded_map(self.start, self.end)
        return graded_map(False, False)

    @property
    def replace_first(self) -> bool:
        return self.method == "dbi" and self.start

    @property
    def replace_last(self) -> bool:
        return self.method == "dbi" and self.end


def _light_residual(dC):
    dx, dy, dr = dC[..., 0], dC[..., 1], dC[..., 2]
    e2 = dx * dx + dy * dy + dr * dr
    return (dx * dx + dy * dy - dr * dr) / np.where(e2 > 0, e2, 1.0)


def handle_lightlike_endpoints(curve, config: MethodConfig, samples: int = 257) -> LightLikePlan:
    """Detect light-like endpoint tangents and reject light-like or time-like interiors."""
    v = np.linspace(0.0, 1.0, samples)
    rel = _light_residual(curve.derivative(v))
    inner = rel[1:-1]
    if np.any(inner < -LIGHT_TOL):
        raise TimeLikeTangent("curve has time-like tangents")
    if np.any(inner <= LIGHT_TOL):
        raise LightLikeInterior("curve has light-like tangents in the interior")
    if rel[0] < -LIGHT_TOL or rel[-1] < -LIGHT_TOL:
        raise TimeLikeTangent("curve has a time-like endpoint tangent")
    return LightLikePlan(bool(rel[0] <= LIGHT_TOL), bool(rel[-1] <= LIGHT_TOL), config.method)


def _scale_tol(curve) -> float:
    return 1e-12 * curve.spatial_scale()


def _end_caps(curve, soup: ArcSoup, tol: float, start: bool = True, end: bool = True) -> None:
    C, dC, _ = curve.derivatives(np.array([0.0, 1.0]))
    n_plus, n_minus = envelope_normals(dC)
    for i, want, tag in ((0, start, "cap0"), (1, end, "cap1")):
        if not want:
            continue
        c = C[i, :2]
        r = float(C[i, 2])
        d = dC[i, :2] / max(np.hypot(*dC[i, :2]), 1e-300)
        pp = c + r * n_plus[i]
        pm = c + r * n_minus[i]
        if i == 0:
            arc = _cap(c, r, pp, pm, c - abs(r) * d, tol, tag)
        else:
            arc = _cap(c, r, pm, pp, c + abs(r) * d, tol, tag)
        soup.add(arc, (0, float(i), float(i)), tol)


def _add_mink_envelope(soup: ArcSoup, arc, v0: float, v1: float, tol: float,
                       caps=(True, True)) -> None:
    env_m, cap1, env_p, cap0 = mink_arc_envelope(arc)
    soup.add(env_m, (-1, v0, v1), tol)
    soup.add(env_p.reversed(), (1, v0, v1), tol)
    if caps[0]:
        soup.add(cap0, (0, v0, v0), tol)
    if caps[1]:
        soup.add(cap1, (0, v1, v1), tol)


def dai(curve, N: int) -> ArcSoup:
    """Direct arc interpolation: Minkowski arcs through sample triples."""
    cfg = MethodConfig("dai", N)
    handle_lightlike_endpoints(curve, cfg)
    tol = _scale_tol(curve)
    v = np.linspace(0.0, 1.0, N + 1)
    C = curve(v)
    soup = ArcSoup(method="dai", samples=N + 1)
    for k in range(0, N, 2):
        arc = mink_arc_through_3(C[k], C[k + 1], C[k + 2])
        _add_mink_envelope(soup, arc, v[k], v[k + 2], tol)
    return soup


def _mink_unit(dC):
    return dC / math.sqrt(float(dC[0] ** 2 + dC[1] ** 2 - dC[2] ** 2))


def dbi(curve, N: int) -> ArcSoup:
    """Direct biarc interpolation: Minkowski biarcs through Hermite samples."""
    cfg = MethodConfig("dbi", N)
    plan = handle_lightlike_endpoints(curve, cfg)
    tol = _scale_tol(curve)
    v = np.linspace(0.0, 1.0, N + 1)
    C, dC, _ = curve.derivatives(v)
    soup = ArcSoup(method="dbi", samples=N + 1)
    for j in range(N):
        first, last = j == 0, j == N - 1
        if (first and plan.replace_first) or (last and plan.replace_last):
            vm = 0.5 * (v[j] + v[j + 1])
            arc = mink_arc_through_3(C[j], curve(vm), C[j + 1])
            soup.samples += 1
            _add_mink_envelope(soup, arc, v[j], v[j + 1], tol, caps=(first, last))
            continue
        bi = mink_biarc(C[j], _mink_unit(dC[j]), C[j + 1], _mink_unit(dC[j + 1]))
        _add_mink_envelope(soup, bi.arc1, v[j], v[j + 1], tol, caps=(first, False))
        _add_mink_envelope(soup, bi.arc2, v[j], v[j + 1], tol, caps=(False, last))
    return soup


def _sample_params(plan: LightLikePlan, n: int, pieces) -> list[np.ndarray]:
    """Graded sample parameters per cusp-free piece; ``n`` samples overall per unit."""
    phi, _, _ = plan.grading
    out = []
    for a, b, m in pieces:
        out.append(phi(np.linspace(a, b, m + 1)))
    return out


def _cusp_pieces(curve, plan: LightLikePlan, N: int, policy: str, even: bool):
    cusps = sorted(set(find_envelope_cusps(curve, 1)) | set(find_envelope_cusps(curve, -1)))
    cusps = [c for c in cusps if 1e-9 < c < 1 - 1e-9]
    if cusps and policy == "error":
        raise CuspInRange(f"envelope has singular points at v = {cusps[:5]}")
    phi, _, _ = plan.grading
    cuts = [0.0]
    for c in cusps:
        s = brentq(lambda x: phi(x) - c, 0.0, 1.0, xtol=1e-15)
        if s - cuts[-1] > 1e-9:
            cuts.append(s)
    cuts.append(1.0)
    pieces = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        m = max(2 if even else 1, int(round(N * (b - a))))
        if even and m % 2:
            m += 1
        pieces.append((a, b, m))
    return pieces


def _branch_data(curve, v, sign: int):
    pts, n, speed = envelope_eval(curve, v, sign)
    t = np.stack([-n[:, 1], n[:, 0]], axis=-1)
    sg = np.sign(speed)
    # light-like or cusp samples: take the direction of a neighbour
    sg[np.abs(speed) <= 1e-7 * np.max(np.abs(speed))] = 0.0
    for i in np.flatnonzero(sg == 0):
        j = i - 1 if i > 0 else i + 1
        sg[i] = sg[j] if sg[j] != 0 else 1.0
    return pts, t * sg[:, None]


def _interp_method(curve, N: int, kind: str, cusp_policy: str) -> ArcSoup:
    cfg = MethodConfig(kind, N, cusp_policy=cusp_policy)
    plan = handle_lightlike_endpoints(curve, cfg)
    tol = _scale_tol(curve)
    pieces = _cusp_pieces(curve, plan, N, cusp_policy, kind == "iai")
    soup = ArcSoup(method=kind)
    for v in _sample_params(plan, N, pieces):
        soup.samples += len(v)
        for sign in (-1, 1):
            pts, tan = _branch_data(curve, v, sign)
            if kind == "iai":
                for k in range(0, len(v) - 2, 2):
                    arc = PlanarArc.through_three(pts[k], pts[k + 1], pts[k + 2], f"env{'+' if sign > 0 else '-'}")
                    soup.add(arc, (sign, v[k], v[k + 2]), tol)
            else:
                for j in range(len(v) - 1):
                    for arc in planar_biarc(pts[j], tan[j], pts[j + 1], tan[j + 1],
                                            f"env{'+' if sign > 0 else '-'}"):
                        soup.add(arc, (sign, v[j], v[j + 1]), tol)
    _end_caps(curve, soup, tol)
    return soup


def iai(curve, N: int, cusp_policy: str = "error") -> ArcSoup:
    """Indirect arc interpolation: planar arcs through envelope point triples."""
    return _interp_method(curve, N, "iai", cusp_policy)


def ibi(curve, N: int, cusp_policy: str = "error") -> ArcSoup:
    """Indirect biarc interpolation: planar biarcs through envelope Hermite samples."""
    return _interp_method(curve, N, "ibi", cusp_policy)


def arc_deviation(curve, arc: PlanarArc, sign: int, v0: float, v1: float, samples: int = 512) -> float:
    """Max distance from the true envelope branch over ``[v0, v1]`` to ``arc``."""
    v = np.linspace(v0, v1, samples)
    pts = envelope_eval(curve, v, sign)[0]
    return float(np.max(arc.distance(pts)))


def iai_adaptive(curve, delta: float, cusp_policy: str = "error", samples: int = 512) -> ArcSoup:
    """IAI with per-branch recursive bisection until each arc deviates by at most ``delta``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    cfg = MethodConfig("iai", 2, delta=delta, cusp_policy=cusp_policy)
    plan = handle_lightlike_endpoints(curve, cfg)
    tol = _scale_tol(curve)
    phi, _, _ = plan.grading
    pieces = _cusp_pieces(curve, plan, 1, cusp_policy, True)
    soup = ArcSoup(method="iai-adaptive")
    for sign in (-1, 1):
        tag = f"env{'+' if sign > 0 else '-'}"
        # depth-first, left to right for a deterministic order
        stack = [(a, b, 0) for a, b, _ in reversed(pieces)]
        while stack:
            a, b, depth = stack.pop()
            if depth > MAX_DEPTH:
                raise MaxDepthExceeded(f"adaptive subdivision exceeded depth {MAX_DEPTH}")
            v = phi(np.array([a, 0.5 * (a + b), b]))
            pts = envelope_eval(curve, v, sign)[0]
            soup.samples += 3
            arc = PlanarArc.through_three(pts[0], pts[1], pts[2], tag)
            dev = arc_deviation(curve, arc, sign, v[0], v[2], samples)
            if dev > delta:
                m = 0.5 * (a + b)
                stack.append((m, b, depth + 1))
                stack.append((a, m, depth + 1))
                continue
            soup.add(arc, (sign, float(v[0]), float(v[2])), tol)
    _end_caps(curve, soup, tol)
    return soup


def approximate(curve, config: MethodConfig) -> ArcSoup:
    if config.adaptive:
        if config.method != "iai":
            raise ValueError("adaptive sampling is implemented for iai only")
        return iai_adaptive(curve, config.delta, config.cusp_policy)
    if config.method == "dai":
        return dai(curve, config.N)
    if config.method == "dbi":
        return dbi(curve, config.N)
    if config.method == "iai":
        return iai(curve, config.N, config.cusp_policy)
    return ibi(curve, config.N, config.cusp_policy)


def family_clearance(curve, pts, grid: int = 257, iters: int = 40):
    """``min_v |p - c(v)| - |r(v)|`` for each point (negative means strictly covered)."""
    pts = np.asarray(pts, dtype=float)
    vg = np.linspace(0.0, 1.0, grid)
    Cg = curve(vg)

    def f(p, C):
        return np.hypot(p[..., 0] - C[..., 0], p[..., 1] - C[..., 1]) - np.abs(C[..., 2])

    out = np.empty(len(pts))
    g = 0.5 * (math.sqrt(5.0) - 1.0)
    for k in range(0, len(pts), 512):
        p = pts[k:k + 512]
        F = f(p[:, None, :], Cg[None, :, :])
        i = np.argmin(F, axis=1)
        best = F[np.arange(len(p)), i]
        lo = vg[np.maximum(i - 1, 0)]
        hi = vg[np.minimum(i + 1, grid - 1)]
        # vectorised golden-section refinement around the coarse minimum
        x1 = hi - g * (hi - lo)
        x2 = lo + g * (hi - lo)
        f1 = f(p, curve(x1))
        f2 = f(p, curve(x2))
        for _ in range(iters):
            left = f1 < f2
            hi = np.where(left, x2, hi)
            lo = np.where(left, lo, x1)
            x2n = np.where(left, x1, lo + g * (hi - lo))
            x1n = np.where(left, hi - g * (hi - lo), x2)
            fn = f(p, curve(np.where(left, x1n, x2n)))
            f1, f2 = np.where(left, fn, f2), np.where(left, f1, fn)
            x1, x2 = x1n, x2n
        out[k:k + 512] = np.minimum(best, np.minimum(f1, f2))
    return out


def hausdorff_error(curve, soup: ArcSoup, samples: int = 512, boundary_only: bool = True) -> float:
    """One-sided dense-sampling Hausdorff distance from the true boundary to the soup.

    Each envelope arc's parameter span is sampled ``samples`` times and
    measured against the caps and all arcs of the same branch whose spans
    touch it.  With ``boundary_only`` the envelope samples swallowed by
    another circle of the family (beyond a cusp, say) are skipped since
    they are not on the boundary of the worm.
    """
    err = 0.0
    spans = soup.spans
    caps = [a for a, s in zip(soup.arcs, spans) if s[0] == 0]
    tol = 1e-9 * curve.spatial_scale()
    for key in dict.fromkeys(s for s in spans if s[0] != 0):
        b, v0, v1 = key
        v = np.linspace(v0, v1, samples)
        pts = envelope_eval(curve, v, b)[0]
        if boundary_only:
            pts = pts[family_clearance(curve, pts) >= -tol]
            if len(pts) == 0:
                continue
        best = np.full(len(pts), np.inf)
        for cap in caps:
            best = np.minimum(best, cap.distance(pts))
        for j, (bj, w0, w1) in enumerate(spans):
            if bj == b and w0 <= v1 + 1e-12 and w1 >= v0 - 1e-12:
                best = np.minimum(best, soup.arcs[j].distance(pts))
        err = max(err, float(np.max(best)))
    return err


def convergence_orders(curve, method: str, Ns, samples: int = 512, cusp_policy: str = "error"):
    """Rows ``(N, arcs, error, order)`` with ``order = log2(e_N / e_2N)``."""
    rows = []
    for N in Ns:
        soup = approximate(curve, MethodConfig(method, N, cusp_policy=cusp_policy))
        rows.append([N, soup.arcCount, hausdorff_error(curve, soup, samples)])
    for i, row in enumerate(rows):
        nxt = rows[i + 1] if i + 1 < len(rows) else None
        if nxt and nxt[0] == 2 * row[0] and row[2] > 0 and nxt[2] > 0:
            row.append(math.log2(row[2] / nxt[2]))
        else:
            row.append(math.nan)
    return [tuple(r) for r in rows]
