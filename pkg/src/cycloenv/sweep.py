"""Intersections of planar arc soups: a pairwise predicate and a sweep.

The sweep is Bentley-Ottmann over x-monotone arc pieces.  It only decides
which pairs of arcs meet; the reported points always come from
:func:`arc_arc_intersections` on the original arcs, so the sweep and the
brute-force oracle agree on coordinates bit for bit.
"""

from __future__ import annotations

import heapq
import math
from bisect import bisect_left, bisect_right
from collections import defaultdict

import numpy as np

from .arcs import PlanarArc
from .errors import OverlappingSupports

SNAP_REL = 1e-9
# the scene is rotated by this angle before sweeping so that vertical
# segments and shared extreme abscissae are not the common case
SWEEP_ANGLE = 0.2718281828459045


def _scene_scale(arcs) -> float:
    if not arcs:
        return 1.0
    bb = np.array([a.bbox() for a in arcs])
    return max(1.0, float(np.hypot(bb[:, 2].max() - bb[:, 0].min(), bb[:, 3].max() - bb[:, 1].min())))


def _implicit(arc: PlanarArc, x: float, y: float):
    """``f = k|w|^2 - 2 w.N`` (zero on the support) and its gradient."""
    wx, wy = x - arc.x0, y - arc.y0
    nx, ny = -math.sin(arc.heading), math.cos(arc.heading)
    k = arc.curvature if not arc.is_line else 0.0
    return k * (wx * wx + wy * wy) - 2.0 * (wx * nx + wy * ny), 2.0 * (k * wx - nx), 2.0 * (k * wy - ny)


def _polish(a: PlanarArc, b: PlanarArc, p, iters: int = 3):
    x, y = float(p[0]), float(p[1])
    for _ in range(iters):
        fa, ax, ay = _implicit(a, x, y)
        fb, bx, by = _implicit(b, x, y)
        det = ax * by - ay * bx
        if abs(det) < 1e-14 * (math.hypot(ax, ay) * math.hypot(bx, by) + 1e-300):
            break
        # Newton step for the 2x2 system by Cramer's rule
        dx = (fa * by - ay * fb) / det
        dy = (ax * fb - fa * bx) / det
        x, y = x - dx, y - dy
        if math.hypot(dx, dy) < 1e-16 * (1 + math.hypot(x, y)):
            break
    return np.array([x, y])


def _same_support(a: PlanarArc, b: PlanarArc, tol: float) -> bool:
    if a.is_line != b.is_line:
        return False
    if a.is_line:
        cr = math.sin(b.heading - a.heading)
        if abs(cr) > tol:
            return False
        w = b.start - a.start
        return abs(float(w @ a.normal0)) <= tol
    return bool(np.hypot(*(a.center - b.center)) <= tol and abs(a.radius - b.radius) <= tol)


def _quadratic_roots(A, B, C, tol_disc):
    """Real roots of ``A s^2 + 2 B s + C``; near-double roots are merged."""
    if A == 0.0:
        return [] if B == 0.0 else [-C / (2.0 * B)]
    disc = B * B - A * C
    if disc < 0:
        return [-B / A] if disc > -tol_disc else []
    sq = math.sqrt(disc)
    q = -(B + math.copysign(sq, B))
    r1 = q / A
    r2 = C / q if q != 0.0 else r1
    return [r1] if abs(r1 - r2) * abs(A) <= 1e-15 else [r1, r2]


def _support_points(a: PlanarArc, b: PlanarArc, tol: float):
    if a.is_line and b.is_line:
        ta, tb = a.start_tangent, b.start_tangent
        den = ta[0] * tb[1] - ta[1] * tb[0]
        if den == 0.0:
            return []
        w = b.start - a.start
        s = (w[0] * tb[1] - w[1] * tb[0]) / den
        return [a.start + s * ta]
    if a.is_line or b.is_line:
        line, circ = (a, b) if a.is_line else (b, a)
        T = line.start_tangent
        w = line.start - circ.start
        N = circ.normal0
        k = circ.curvature
        A = k
        B = k * float(w @ T) - float(T @ N)
        C = k * float(w @ w) - 2.0 * float(w @ N)
        return [line.start + s * T for s in _quadratic_roots(A, B, C, tol * abs(k) * 4.0)]
    c1, c2 = a.center, b.center
    R1, R2 = a.radius, b.radius
    e = c2 - c1
    d = float(np.hypot(*e))
    if d == 0.0:
        return []
    e = e / d
    x = (d * d + R1 * R1 - R2 * R2) / (2.0 * d)
    h2 = R1 * R1 - x * x
    if h2 < 0:
        if h2 < -2.0 * tol * R1:
            return []
        return [c1 + x * e]
    h = math.sqrt(h2)
    perp = np.array([-e[1], e[0]])
    if h <= 1e-12 * R1:
        return [c1 + x * e]
    return [c1 + x * e + h * perp, c1 + x * e - h * perp]


def _dedupe(points, tol):
    out = []
    for p in points:
        if all(np.hypot(*(p - q)) > tol for q in out):
            out.append(p)
    return out


def _overlap(a: PlanarArc, b: PlanarArc, tol: float):
    """Co-support pair: return shared endpoints, raising if they share a piece."""
    cand = [p for p in (a.start, a.end) if b.distance(p[None, :])[0] <= tol]
    cand += [p for p in (b.start, b.end) if a.distance(p[None, :])[0] <= tol]
    cand = _dedupe(cand, tol)
    # does a common sub-arc of positive length exist?
    s = sorted(set([0.0, 1.0] + [float(np.clip(a.param_of(p[None, :])[0], 0.0, 1.0)) for p in cand]))
    for s0, s1 in zip(s[:-1], s[1:]):
        if (s1 - s0) * a.length <= tol:
            continue
        m = a.point_at(0.5 * (s0 + s1))
        if b.distance(m[None, :])[0] <= tol:
            raise OverlappingSupports("arcs share a common piece of their support",
                                      points=[tuple(map(float, p)) for p in cand])
    return cand


def arc_arc_intersections(a: PlanarArc, b: PlanarArc, tol: float | None = None) -> list[np.ndarray]:
    """Points where the two arcs meet (tangencies once).

    Raises :class:`OverlappingSupports` when the arcs share a piece of a
    common support; the exception carries the overlap end points.
    """
    if tol is None:
        tol = SNAP_REL * _scene_scale([a, b])
    if _same_support(a, b, tol):
        return _overlap(a, b, tol)
    cand = [_polish(a, b, p) for p in _support_points(a, b, tol)]
    if not cand:
        return []
    P = np.array(cand)
    keep = (a.distance(P) <= tol) & (b.distance(P) <= tol)
    return _dedupe([p for p, k in zip(cand, keep) if k], tol)


def _bbox_overlap(b1, b2, tol):
    return b1[0] <= b2[2] + tol and b2[0] <= b1[2] + tol and b1[1] <= b2[3] + tol and b2[1] <= b1[3] + tol


def _pair_points(arcs, i, j, tol):
    try:
        return arc_arc_intersections(arcs[i], arcs[j], tol)
    except OverlappingSupports as exc:
        return [np.asarray(p) for p in exc.points]


def brute_force_intersections(arcs, tol: float | None = None):
    """All-pairs oracle with a bounding-box prefilter."""
    arcs = list(arcs)
    if tol is None:
        tol = SNAP_REL * _scene_scale(arcs)
    boxes = [a.bbox() for a in arcs]
    out = []
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            if not _bbox_overlap(boxes[i], boxes[j], tol):
                continue
            for p in _pair_points(arcs, i, j, tol):
                out.append((p, (i, j)))
    return out


# -- sweep ------------------------------------------------------------------

class _Piece:
    __slots__ = ("pid", "parent", "arc", "xl", "yl", "xr", "yr", "cx", "cy", "R", "sgn", "line",
                 "support")

    def __init__(self, pid, parent, arc: PlanarArc, support):
        self.pid = pid
        self.parent = parent
        p0, p1 = arc.start, arc.end
        if (p1[0], p1[1]) < (p0[0], p0[1]):
            arc = arc.reversed()
            p0, p1 = p1, p0
        self.arc = arc
        self.xl, self.yl = float(p0[0]), float(p0[1])
        self.xr, self.yr = float(p1[0]), float(p1[1])
        self.line = arc.is_line
        self.support = support
        if not self.line:
            c = arc.center
            self.cx, self.cy, self.R = float(c[0]), float(c[1]), arc.radius
            # a left-to-right counter-clockwise arc runs along the lower half
            self.sgn = -1.0 if arc.curvature > 0 else 1.0

    def y_at(self, x: float) -> float:
        x = min(max(x, self.xl), self.xr)
        if self.line:
            if self.xr == self.xl:
                return self.yl
            return self.yl + (self.yr - self.yl) * (x - self.xl) / (self.xr - self.xl)
        dx = abs(x - self.cx)
        return self.cy + self.sgn * math.sqrt(max((self.R - dx) * (self.R + dx), 0.0))

    def order_right(self, x: float, y: float):
        """Sort key for pieces through ``(x, y)`` just to the right of it."""
        if self.line:
            ang = math.atan2(self.yr - self.yl, self.xr - self.xl)
            curv = 0.0
        else:
            rx, ry = x - self.cx, y - self.cy
            # tangent of the left-to-right traversal
            tx, ty = (-ry, rx) if self.sgn < 0 else (ry, -rx)
            ang = math.atan2(ty, tx)
            curv = -self.sgn / self.R
        return (ang, curv, self.pid)


def _rotate(arc: PlanarArc, ang: float) -> PlanarArc:
    c, s = math.cos(ang), math.sin(ang)
    return PlanarArc(c * arc.x0 - s * arc.y0, s * arc.x0 + c * arc.y0, arc.heading + ang,
                     arc.curvature, arc.length, arc.tag)


def _support_key(arc: PlanarArc, q: float):
    if arc.is_line:
        h = math.remainder(arc.heading, math.pi)
        off = float(arc.start @ arc.normal0) * (1 if math.cos(arc.heading - h) > 0 else -1)
        return ("L", round(h / q * 1e-3), round(off / q))
    c = arc.center
    return ("C", round(c[0] / q), round(c[1] / q), round(arc.radius / q))


def _coincident_support_pairs(arcs, tol):
    """Pairs of arcs on a common support (checked exhaustively within buckets)."""
    boxes = [a.bbox() for a in arcs]
    buckets = defaultdict(list)
    q = max(tol * 10.0, 1e-300)
    for i, a in enumerate(arcs):
        buckets[_support_key(a, q)].append(i)
    pairs = set()
    keys = list(buckets)
    for key in keys:
        # neighbouring buckets catch keys split by rounding
        cand = set(buckets[key])
        for dk in ((-1, 0, 0), (1, 0, 0), (0, -1, 0), (0, 1, 0), (0, 0, -1), (0, 0, 1)):
            if key[0] == "C":
                k2 = ("C", key[1] + dk[0], key[2] + dk[1], key[3] + dk[2])
            else:
                k2 = ("L", key[1] + dk[0], key[2] + dk[1])
            cand |= set(buckets.get(k2, []))
        idx = sorted(cand)
        for ii, i in enumerate(idx):
            for j in idx[ii + 1:]:
                if not _bbox_overlap(boxes[i], boxes[j], tol):
                    continue
                if _same_support(arcs[i], arcs[j], tol):
                    pairs.add((min(i, j), max(i, j)))
    return pairs


def sweep_intersections(arcs, tol: float | None = None):
    """Intersection points of an arc soup as ``[(point, (i, j)), ...]`` with ``i < j``."""
    if hasattr(arcs, "arcs"):
        arcs = arcs.arcs
    arcs = list(arcs)
    if tol is None:
        tol = SNAP_REL * _scene_scale(arcs)
    snap = tol
    pairs = _coincident_support_pairs(arcs, tol)
    cosup = set(pairs)

    pieces: list[_Piece] = []
    flat: list[_Piece] = []
    rotated = {}
    for i, a in enumerate(arcs):
        if a.is_degenerate():
            continue
        ra = rotated[i] = _rotate(a, SWEEP_ANGLE)
        cuts = [0.0] + ra.extreme_params([math.pi / 2]) + [1.0]
        for s0, s1 in zip(cuts[:-1], cuts[1:]):
            if (s1 - s0) * ra.length <= 0.0:
                continue
            pc = _Piece(len(pieces) + len(flat), i, ra.sub(s0, s1), None)
            if pc.xr - pc.xl <= snap:
                flat.append(pc)
            else:
                pieces.append(pc)

    def key(x, y):
        return (round(x / snap), round(y / snap))

    events: dict = {}
    heap: list = []

    def push(x, y):
        k = key(x, y)
        if k not in events:
            events[k] = ([], [], (x, y))
            heapq.heappush(heap, k)
        return events[k]

    for pc in pieces:
        push(pc.xl, pc.yl)[0].append(pc)
        push(pc.xr, pc.yr)[1].append(pc)

    def add_pair(p, q):
        if p.parent != q.parent:
            i, j = sorted((p.parent, q.parent))
            if (i, j) not in cosup:
                pairs.add((i, j))

    memo: dict = {}

    def on_piece(pc, pt):
        # generous: a false positive only costs an extra event
        if not pc.xl - 10 * snap <= pt[0] <= pc.xr + 10 * snap:
            return False
        return pc.line or (pt[1] - pc.cy) * pc.sgn >= -1e-6 * pc.R

    def check(p, q, cur):
        if p.parent == q.parent:
            return
        ij = (min(p.parent, q.parent), max(p.parent, q.parent))
        if ij in cosup:
            return
        # intersect the parents once; each piece keeps the points on its own span
        if ij not in memo:
            try:
                memo[ij] = arc_arc_intersections(rotated[ij[0]], rotated[ij[1]], tol)
            except OverlappingSupports:
                memo[ij] = []
        for pt in memo[ij]:
            if not (on_piece(p, pt) and on_piece(q, pt)):
                continue
            k = key(pt[0], pt[1])
            if k > cur:
                push(float(pt[0]), float(pt[1]))
            elif k[0] == cur[0]:
                add_pair(p, q)
                # a crossing lower on the current sweep line still reorders the status
                if k != cur and k not in done:
                    push(float(pt[0]), float(pt[1]))

    status: list[_Piece] = []
    done = set()
    while heap:
        cur = heapq.heappop(heap)
        done.add(cur)
        U, L, (x, y) = events.pop(cur)
        ykey = lambda pc: pc.y_at(x)
        lo = bisect_left(status, y - 2 * snap, key=ykey)
        hi = bisect_right(status, y + 2 * snap, key=ykey)
        if L:
            # ending pieces are located by identity, not by ordinate
            idx = [status.index(p) for p in L]
            lo = min(lo, *idx)
            hi = max(hi, max(idx) + 1)
        through = status[lo:hi]
        lset = set(id(p) for p in L)
        C = [p for p in through if id(p) not in lset]
        involved = U + C + [p for p in through if id(p) in lset]
        for ii in range(len(involved)):
            for jj in range(ii + 1, len(involved)):
                add_pair(involved[ii], involved[jj])
        block = sorted(U + C, key=lambda pc: pc.order_right(x, y))
        status[lo:hi] = block
        below = status[lo - 1] if lo > 0 else None
        above = status[lo + len(block)] if lo + len(block) < len(status) else None
        if block:
            if below is not None:
                check(below, block[0], cur)
            if above is not None:
                check(block[-1], above, cur)
            for p, q in zip(block[:-1], block[1:]):
                check(p, q, cur)
        elif below is not None and above is not None:
            check(below, above, cur)

    # nearly vertical pieces are few; test them against everything they span
    if flat:
        allp = pieces + flat
        for f in flat:
            fb = f.arc.bbox()
            for pc in allp:
                if pc is f or pc.parent == f.parent:
                    continue
                if _bbox_overlap(fb, pc.arc.bbox(), snap):
                    i, j = sorted((f.parent, pc.parent))
                    if (i, j) in cosup:
                        continue
                    try:
                        if arc_arc_intersections(f.arc, pc.arc, tol):
                            pairs.add((i, j))
                    except OverlappingSupports:
                        pass

    out = []
    for i, j in sorted(pairs):
        for p in _pair_points(arcs, i, j, tol):
            out.append((p, (i, j)))
    return out
