"""Union-boundary extraction from an untrimmed arc soup."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arcs import PlanarArc, loop_area
from .errors import OpenChain
from .sweep import SNAP_REL, _scene_scale, sweep_intersections

PROBE_REL = 1e-3
JOIN_REL = 1e-7
SPUR_REL = 5e-2


@dataclass
class EnvelopeResult:
    loops: list = field(default_factory=list)
    provenance: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def arcs(self):
        return [a for loop in self.loops for a in loop]

    def tags(self):
        return [t for p in self.provenance for t in p]


def split_at_points(arcs, hits, tol: float):
    """Cut every arc at the intersection points that lie on it."""
    params = [[] for _ in arcs]
    for p, (i, j) in hits:
        for k in (i, j):
            s = float(arcs[k].param_of(np.asarray(p)[None, :])[0])
            params[k].append(s)
    pieces = []
    for k, a in enumerate(arcs):
        L = a.length
        cuts = sorted(s for s in params[k] if tol < s * L < L - tol)
        knots = [0.0]
        for s in cuts:
            if (s - knots[-1]) * L > tol:
                knots.append(s)
        if (1.0 - knots[-1]) * L <= tol and len(knots) > 1:
            knots.pop()
        knots.append(1.0)
        for s0, s1 in zip(knots[:-1], knots[1:]):
            pieces.append((k, a.sub(s0, s1)))
    return pieces


def _dedupe(pieces, tol):
    seen = {}
    out = []
    q = max(tol * 100.0, 1e-300)
    for k, a in pieces:
        m = a.midpoint()
        key = (round(m[0] / q), round(m[1] / q), round(a.length / q))
        if key in seen:
            b = seen[key]
            ends = {tuple(np.round(b.start / q)), tuple(np.round(b.end / q))}
            if {tuple(np.round(a.start / q)), tuple(np.round(a.end / q))} == ends:
                continue
        seen[key] = a
        out.append((k, a))
    return out


def _left_normal(a: PlanarArc, s=0.5):
    h = float(a.heading_at(s))
    return np.array([-math.sin(h), math.cos(h)])


def _arc_arrays(arcs):
    a = np.array([[x.x0, x.y0, x.heading, 0.0 if x.is_line else x.curvature, x.length] for x in arcs])
    return a[:, 0], a[:, 1], a[:, 2], a[:, 3], a[:, 4]


def normal_clearance(mids, normals, arcs, eps: float, chunk: int = 256):
    """Distance along ``+n`` and ``-n`` from each midpoint to the nearest arc.

    Hits closer than ``eps`` (the piece itself and its neighbours) are
    ignored.
    """
    x0, y0, h0, k, L = _arc_arrays(arcs)
    T = np.stack([np.cos(h0), np.sin(h0)], axis=-1)
    N = np.stack([-np.sin(h0), np.cos(h0)], axis=-1)
    fwd = np.full(len(mids), np.inf)
    bwd = np.full(len(mids), np.inf)
    for lo in range(0, len(mids), chunk):
        m = mids[lo:lo + chunk, None, :]
        n = normals[lo:lo + chunk, None, :]
        w0 = m - np.stack([x0, y0], axis=-1)[None]
        # k s^2 + 2 b s + c = 0 along the ray m + s n
        b = k * np.sum(w0 * n, axis=-1) - np.sum(n * N[None], axis=-1)
        c = k * np.sum(w0 * w0, axis=-1) - 2.0 * np.sum(w0 * N[None], axis=-1)
        A = np.broadcast_to(k, b.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            disc = b * b - A * c
            sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
            q = -(b + np.copysign(sq, b))
            lin = np.abs(A) < 1e-300
            r1 = np.where(lin, -c / (2.0 * b), q / np.where(lin, 1.0, A))
            r2 = np.where(lin, np.nan, c / q)
        for s in (r1, r2):
            p = m + s[..., None] * n
            w = p - np.stack([x0, y0], axis=-1)[None]
            wt = np.sum(w * T[None], axis=-1)
            wn = np.sum(w * N[None], axis=-1)
            with np.errstate(divide="ignore", invalid="ignore"):
                alpha = np.arctan2(k * wt, 1.0 - k * wn)
                beta = np.mod(np.where(k > 0, alpha, -alpha), 2 * math.pi)
                t = np.where(np.abs(k) * L > 0, beta / (np.abs(k) * L), wt / L)
                t = np.where(np.abs(k) * L < 1e-13, wt / L, t)
            on = (t >= 0.0) & (t <= 1.0) & np.isfinite(s)
            f = np.where(on & (s > eps), s, np.inf).min(axis=1)
            g = np.where(on & (s < -eps), -s, np.inf).min(axis=1)
            fwd[lo:lo + chunk] = np.minimum(fwd[lo:lo + chunk], f)
            bwd[lo:lo + chunk] = np.minimum(bwd[lo:lo + chunk], g)
    return fwd, bwd


def classify_pieces(pieces, coverage, delta: float, eps: float = 0.0, adaptive: bool = True):
    """Indices of boundary pieces and whether each must be reversed.

    A piece is on the boundary when exactly one of the probes
    ``m +- d * n`` at its midpoint is covered; it is oriented so that the
    covered side is on its left.  ``d`` is ``delta`` or less than half the
    distance to the nearest other arc along the normal, so thin parts of
    the region are still resolved.
    """
    if not pieces:
        return []
    arcs = [a for _, a in pieces]
    mids = np.array([a.midpoint() for a in arcs])
    nrm = np.array([_left_normal(a) for a in arcs])
    if adaptive:
        fwd, bwd = normal_clearance(mids, nrm, arcs, eps)
        d = np.minimum(delta, 0.45 * np.minimum(fwd, bwd))[:, None]
    else:
        d = np.full((len(arcs), 1), delta)
    probes = np.concatenate([mids + d * nrm, mids - d * nrm])
    cov = coverage.covered(probes)
    left, right = cov[:len(pieces)], cov[len(pieces):]
    return [(idx, bool(right[idx])) for idx in range(len(pieces)) if left[idx] != right[idx]]


class _Vertices:
    """Endpoint clustering on a hash grid."""

    def __init__(self, tol):
        self.tol = tol
        self.cells = {}
        self.pts = []

    def id(self, p):
        c = (math.floor(p[0] / self.tol), math.floor(p[1] / self.tol))
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for v in self.cells.get((c[0] + dx, c[1] + dy), ()):
                    if math.hypot(*(self.pts[v] - p)) <= self.tol:
                        return v
        self.pts.append(np.asarray(p, dtype=float))
        self.cells.setdefault(c, []).append(len(self.pts) - 1)
        return len(self.pts) - 1


def prune_spurs(arcs, join_tol: float, max_len: float, sources=None):
    """Drop short dangling pieces iteratively.

    Arcs approximating neighbouring circles overshoot each other by a
    little at common joints, and pieces of an approximate soup that lie
    within the probe distance of the true boundary are ambiguous; neither
    can lie on a closed loop.  Longer dangling pieces are left in place so
    chaining reports them.  Returns ``(kept, sources, pruned_length)``.
    """
    verts = _Vertices(join_tol)
    ends = [(verts.id(a.start), verts.id(a.end)) for a in arcs]
    alive = [a.length > join_tol for a in arcs]
    # length of the pruned chain hanging off each vertex
    carry = {}
    while True:
        indeg, outdeg = {}, {}
        for e, (v0, v1) in enumerate(ends):
            if alive[e]:
                outdeg[v0] = outdeg.get(v0, 0) + 1
                indeg[v1] = indeg.get(v1, 0) + 1
        drop = []
        for e, (v0, v1) in enumerate(ends):
            if not alive[e]:
                continue
            if indeg.get(v0, 0) == 0:
                tot = arcs[e].length + carry.get(v0, 0.0)
                if tot <= max_len:
                    drop.append((e, v1, tot))
            elif outdeg.get(v1, 0) == 0:
                tot = arcs[e].length + carry.get(v1, 0.0)
                if tot <= max_len:
                    drop.append((e, v0, tot))
        if not drop:
            break
        for e, v, tot in drop:
            alive[e] = False
            carry[v] = max(carry.get(v, 0.0), tot)
    if sources is None:
        sources = list(range(len(arcs)))
    pruned = sum(a.length for a, ok in zip(arcs, alive) if not ok)
    return ([a for a, ok in zip(arcs, alive) if ok], [k for k, ok in zip(sources, alive) if ok], pruned)


def merge_continuations(loop, sources, tol: float):
    """Rejoin consecutive pieces of a loop that were cut from the same arc."""
    out = list(zip(loop, sources))
    changed = True
    while changed and len(out) > 1:
        changed = False
        for k in range(len(out)):
            (a, sa), (b, sb) = out[k], out[(k + 1) % len(out)]
            if sa != sb:
                continue
            if abs(a.curvature - b.curvature) > tol * (1 + abs(a.curvature)):
                continue
            dh = math.remainder(a.heading + a.turn - b.heading, 2 * math.pi)
            if abs(dh) > 1e-9 or np.hypot(*(a.end - b.start)) > tol:
                continue
            if abs(a.turn + b.turn) > 2 * math.pi - 1e-9 and len(out) > 2:
                continue
            m = (PlanarArc(a.x0, a.y0, a.heading, a.curvature, a.length + b.length, a.tag), sa)
            if (k + 1) % len(out) == 0:
                out = [m] + out[1:-1]
            else:
                out[k:k + 2] = [m]
            changed = True
            break
    return [a for a, _ in out]


def close_gaps(loop, tol: float):
    """Move each arc start onto the previous end when they differ by at most ``tol``.

    Tangential intersection points are only accurate to about the square root
    of the working precision, so chained pieces can miss each other slightly.
    The arc keeps its end point and midpoint.
    """
    loop = list(loop)
    n = len(loop)
    if n < 2:
        return loop
    for k in range(n):
        a, b = loop[k], loop[(k + 1) % n]
        g = float(np.hypot(*(a.end - b.start)))
        if 0.0 < g <= tol and b.length > 10.0 * tol:
            loop[(k + 1) % n] = PlanarArc.through_three(a.end, b.midpoint(), b.end, b.tag)
    return loop


def _heading_cw_from(ref: float, h: float) -> float:
    a = (ref - h) % (2 * math.pi)
    return a if a > 1e-12 else 2 * math.pi


def chain_loops(arcs, tol: float, max_open: float = 0.0):
    """Chain oriented arcs into closed loops.

    At vertices of degree above two the walk takes the outgoing arc met
    first when turning clockwise from the reversed incoming direction,
    which keeps loops that touch at a point apart.  A walk that returns to
    one of its own vertices splits off the cycle.  Open leftovers no longer
    than ``max_open`` are dropped; longer ones raise :class:`OpenChain`.
    Returns ``(loops, dropped_length)``.
    """
    verts = _Vertices(tol)
    ends = [(verts.id(a.start), verts.id(a.end)) for a in arcs]
    out_edges = {}
    for e, (v0, _) in enumerate(ends):
        out_edges.setdefault(v0, []).append(e)
    used = [False] * len(arcs)
    loops = []
    dropped = 0.0
    gaps = []
    for e0 in range(len(arcs)):
        if used[e0]:
            continue
        path = [e0]
        used[e0] = True
        seen = {ends[e0][0]: 0}
        while path:
            cur = path[-1]
            v = ends[cur][1]
            if v in seen:
                k = seen[v]
                loops.append(path[k:])
                for e in path[k:]:
                    seen.pop(ends[e][0], None)
                path = path[:k]
                if not path:
                    break
                seen[ends[path[-1]][1]] = len(path)
                continue
            seen[v] = len(path)
            cand = [e for e in out_edges.get(v, []) if not used[e]]
            if not cand:
                length = sum(arcs[e].length for e in path)
                if length > max_open:
                    gaps.append((tuple(verts.pts[ends[path[0]][0]]), tuple(verts.pts[v])))
                dropped += length
                break
            if len(cand) > 1:
                back = float(arcs[cur].heading_at(1.0)) + math.pi
                cand.sort(key=lambda e: _heading_cw_from(back, arcs[e].heading))
            nxt = cand[0]
            used[nxt] = True
            path.append(nxt)
    if gaps:
        raise OpenChain("kept boundary arcs do not close into loops", gaps=gaps)
    return loops, dropped


def extract_outer_envelope(soup, coverage, delta: float | None = None, outer_only: bool = False,
                           tol: float | None = None, spur: float | None = None) -> EnvelopeResult:
    """Closed boundary loops of the region covered by ``coverage``.

    ``soup`` must contain the region boundary.  Arcs are cut at all mutual
    intersections, the boundary pieces are kept and chained.  Outer loops
    run counter-clockwise and holes clockwise; ``outer_only`` drops holes.
    """
    arcs = list(soup.arcs if hasattr(soup, "arcs") else soup)
    arcs = [a for a in arcs if not a.is_degenerate()]
    scale = _scene_scale(arcs)
    if tol is None:
        tol = SNAP_REL * scale
    if delta is None:
        delta = PROBE_REL * scale
    hits = sweep_intersections(arcs, tol)
    pieces = _dedupe(split_at_points(arcs, hits, tol), tol)
    if spur is None:
        spur = SPUR_REL * scale
    join = JOIN_REL * scale
    err = None
    # thin regions need probes closer than delta; crowded ambiguous spots
    # near cusps are better served by the plain probe distance
    for adaptive in (True, False):
        kept, src = [], []
        for idx, rev in classify_pieces(pieces, coverage, delta, 10.0 * tol, adaptive):
            k, a = pieces[idx]
            kept.append(a.reversed() if rev else a)
            src.append(k)
        kept, src, pruned = prune_spurs(kept, join, spur, src)
        try:
            loop_idx, dropped = chain_loops(kept, join, spur)
            break
        except OpenChain as exc:
            err = err or exc
    else:
        raise err
    pruned += dropped
    loops, prov = [], []
    gap = 0.0
    for li in loop_idx:
        loop = [kept[e] for e in li]
        # pockets between overshooting neighbours close on themselves
        perim = sum(a.length for a in loop)
        if perim <= 4.0 * delta or abs(loop_area(loop)) <= 0.05 * delta * perim:
            continue
        if outer_only and loop_area(loop) < 0:
            continue
        loop = close_gaps(merge_continuations(loop, [src[e] for e in li], join), join)
        for a, b in zip(loop, loop[1:] + loop[:1]):
            gap = max(gap, float(np.hypot(*(a.end - b.start))))
        loops.append(loop)
        prov.append([a.tag for a in loop])
    stats = {"inputArcs": len(arcs), "intersectionsFound": len(hits),
             "outputArcs": sum(len(l) for l in loops), "maxGap": gap, "prunedLength": pruned}
    return EnvelopeResult(loops, prov, stats)
