"""Point-in-swept-region oracles.

Every oracle exposes ``clearance(pts)``, the minimum over the circle family
of ``|p - c| - |r|``; it is negative for points inside some disk.  A point
is *covered* when its clearance is at most ``margin`` and *strictly inside*
when it is below ``-margin``.
"""

from __future__ import annotations

import numpy as np

from .methods import family_clearance

MARGIN_REL = 1e-7


class CoverageOracle:
    margin: float = 0.0

    def clearance(self, pts) -> np.ndarray:
        raise NotImplementedError

    def covered(self, pts) -> np.ndarray:
        return self.clearance(pts) <= self.margin

    def strictly_inside(self, pts) -> np.ndarray:
        return self.clearance(pts) < -self.margin

    def on_boundary(self, pts) -> np.ndarray:
        return np.abs(self.clearance(pts)) <= self.margin


class DiskUnion(CoverageOracle):
    """Finite union of closed disks."""

    def __init__(self, centers, radii, margin: float = 1e-9):
        self.centers = np.asarray(centers, dtype=float).reshape(-1, 2)
        self.radii = np.abs(np.asarray(radii, dtype=float).reshape(-1))
        self.margin = margin

    def clearance(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        d = np.hypot(pts[:, None, 0] - self.centers[None, :, 0], pts[:, None, 1] - self.centers[None, :, 1])
        return np.min(d - self.radii[None, :], axis=1)


class CurveCoverage(CoverageOracle):
    """Union of the disks of a one-parameter circle family."""

    def __init__(self, curve, margin: float = 0.0, grid: int = 257):
        self.curve = curve
        self.grid = grid
        self.margin = margin or MARGIN_REL * curve.spatial_scale()

    def clearance(self, pts):
        return family_clearance(self.curve, np.atleast_2d(np.asarray(pts, dtype=float)), self.grid)


class SurfaceCoverage(CoverageOracle):
    """Union of the disks of a two-parameter family ``B(u, t)``.

    A coarse ``(u, t)`` grid picks the best few starting parameters, which
    are then refined by a damped projected Newton iteration on
    ``|p - c(u, t)| - |r(u, t)|``.
    """

    def __init__(self, surface, margin: float = 0.0, grid: int = 33, candidates: int = 3,
                 iters: int = 30):
        self.surface = surface
        self.margin = margin or MARGIN_REL * surface.spatial_scale()
        self.candidates = candidates
        self.iters = iters
        g = np.linspace(0.0, 1.0, grid)
        U, T = np.meshgrid(g, g, indexing="ij")
        self._u = U.ravel()
        self._t = T.ravel()
        self._B = surface(self._u, self._t)

    def _value(self, p, u, t):
        B = self.surface(u, t)
        return np.hypot(p[:, 0] - B[:, 0], p[:, 1] - B[:, 1]) - np.abs(B[:, 2])

    def _refine(self, p, u, t):
        f = self._value(p, u, t)
        for _ in range(self.iters):
            B, Bu, Bt, Buu, But, Btt = self.surface.partials(u, t)
            w = p - B[:, :2]
            rho = np.maximum(np.hypot(w[:, 0], w[:, 1]), 1e-12)
            s = np.where(B[:, 2] < 0, -1.0, 1.0)
            wu = np.sum(w * Bu[:, :2], axis=1)
            wt = np.sum(w * Bt[:, :2], axis=1)
            gu = -wu / rho - s * Bu[:, 2]
            gt = -wt / rho - s * Bt[:, 2]
            huu = (np.sum(Bu[:, :2] ** 2, axis=1) - np.sum(w * Buu[:, :2], axis=1)) / rho \
                - wu * wu / rho ** 3 - s * Buu[:, 2]
            hut = (np.sum(Bu[:, :2] * Bt[:, :2], axis=1) - np.sum(w * But[:, :2], axis=1)) / rho \
                - wu * wt / rho ** 3 - s * But[:, 2]
            htt = (np.sum(Bt[:, :2] ** 2, axis=1) - np.sum(w * Btt[:, :2], axis=1)) / rho \
                - wt * wt / rho ** 3 - s * Btt[:, 2]
            det = huu * htt - hut * hut
            pd = (huu > 0) & (det > 1e-14 * (huu * huu + htt * htt + 1e-300))
            safe = np.where(pd, det, 1.0)
            du = np.where(pd, -(htt * gu - hut * gt) / safe, -gu)
            dt = np.where(pd, -(huu * gt - hut * gu) / safe, -gt)
            # active bounds: freeze the variable, Newton in the other one
            fu = ((u <= 0.0) & (gu > 0)) | ((u >= 1.0) & (gu < 0))
            ft = ((t <= 0.0) & (gt > 0)) | ((t >= 1.0) & (gt < 0))
            du = np.where(ft, np.where(huu > 0, -gu / np.where(huu > 0, huu, 1.0), -gu), du)
            dt = np.where(fu, np.where(htt > 0, -gt / np.where(htt > 0, htt, 1.0), -gt), dt)
            du = np.where(fu, 0.0, du)
            dt = np.where(ft, 0.0, dt)
            # gradient steps are capped to the coarse grid spacing
            nrm = np.hypot(du, dt)
            cap = np.where(pd, 0.5, 0.05)
            scale = np.where(nrm > cap, cap / np.maximum(nrm, 1e-300), 1.0)
            du, dt = du * scale, dt * scale
            step = np.ones_like(f)
            improved = np.zeros(f.shape, dtype=bool)
            nu, nt, nf = u, t, f
            for _ in range(8):
                cu = np.clip(u + step * du, 0.0, 1.0)
                ct = np.clip(t + step * dt, 0.0, 1.0)
                cf = self._value(p, cu, ct)
                ok = (cf < nf) & ~improved
                nu = np.where(ok, cu, nu)
                nt = np.where(ok, ct, nt)
                nf = np.where(ok, cf, nf)
                improved |= ok
                step = np.where(improved, step, 0.5 * step)
                if improved.all():
                    break
            if not improved.any():
                break
            u, t, f = nu, nt, nf
        return f

    def clearance(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.empty(len(pts))
        Bg = self._B
        k = min(self.candidates, len(self._u))
        for lo in range(0, len(pts), 256):
            p = pts[lo:lo + 256]
            F = np.hypot(p[:, None, 0] - Bg[None, :, 0], p[:, None, 1] - Bg[None, :, 1]) \
                - np.abs(Bg[None, :, 2])
            idx = np.argpartition(F, k - 1, axis=1)[:, :k]
            best = np.full(len(p), np.inf)
            for j in range(k):
                i = idx[:, j]
                best = np.minimum(best, self._refine(p, self._u[i], self._t[i]))
            out[lo:lo + 256] = np.minimum(best, F.min(axis=1))
        return out


class UnionCoverage(CoverageOracle):
    def __init__(self, oracles, margin: float | None = None):
        self.oracles = list(oracles)
        self.margin = max((o.margin for o in self.oracles), default=0.0) if margin is None else margin

    def clearance(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if not self.oracles:
            return np.full(len(pts), np.inf)
        return np.min([o.clearance(pts) for o in self.oracles], axis=0)


def coverage_oracle_from_surfaces(surfaces, margin_rel: float = MARGIN_REL) -> CoverageOracle:
    """Coverage of the union of the swept regions of ``surfaces``."""
    surfaces = list(surfaces)
    scale = max((s.spatial_scale() for s in surfaces), default=1.0)
    margin = margin_rel * scale
    return UnionCoverage([SurfaceCoverage(s, margin) for s in surfaces], margin)
