"""Curves ``C(v) = (x, y, r)`` in R^{2,1} over ``v in [0, 1]``.

Every curve exposes ``derivatives(v) -> (C, C', C'')``; ``v`` may be a
scalar or an array and results carry a trailing axis of length 3.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline


class MinkCurve:
    """Base class; subclasses implement :meth:`derivatives`."""

    def derivatives(self, v):
        raise NotImplementedError

    def __call__(self, v):
        return self.derivatives(v)[0]

    def derivative(self, v):
        return self.derivatives(v)[1]

    def sub(self, a: float, b: float) -> "MinkCurve":
        """The piece over ``[a, b]``, reparameterised onto ``[0, 1]``."""
        return AffineSubCurve(self, a, b)

    def spatial_scale(self, n: int = 65) -> float:
        """Diagonal of the bounding box of the circle family (for tolerances)."""
        C = self(np.linspace(0.0, 1.0, n))
        R = np.abs(C[:, 2])
        lo = np.min(C[:, :2] - R[:, None], axis=0)
        hi = np.max(C[:, :2] + R[:, None], axis=0)
        return float(np.hypot(*(hi - lo))) or 1.0


class FunctionCurve(MinkCurve):
    """Curve from Python callables (analytic test fixtures)."""

    def __init__(self, f: Callable, df: Callable, ddf: Callable | None = None, name: str = ""):
        self.f = f
        self.df = df
        self.ddf = ddf
        self.name = name

    def derivatives(self, v):
        v = np.asarray(v, dtype=float)
        C = np.asarray(self.f(v), dtype=float)
        dC = np.asarray(self.df(v), dtype=float)
        if self.ddf is not None:
            ddC = np.asarray(self.ddf(v), dtype=float)
        else:
            h = 1e-5
            ddC = (np.asarray(self.df(v + h)) - np.asarray(self.df(v - h))) / (2 * h)
        return C, dC, ddC


def _poly_eval(coef, s):
    """Horner evaluation of value, first and second derivative.

    ``coef`` has shape (deg+1, ...) in increasing powers.
    """
    deg = coef.shape[0] - 1
    shape = s.shape + coef.shape[1:]
    p = np.zeros(shape)
    dp = np.zeros(shape)
    ddp = np.zeros(shape)
    ss = s.reshape(s.shape + (1,) * (coef.ndim - 1))
    for j in range(deg, -1, -1):
        ddp = ddp * ss + 2.0 * dp
        dp = dp * ss + p
        p = p * ss + coef[j]
    return p, dp, ddp


class RationalPolyCurve(MinkCurve):
    """Piecewise rational polynomial curve.

    Segment ``i`` covers ``[breaks[i], breaks[i+1]]`` and is written in the
    local variable ``s in [0, 1]`` as ``numer[i](s) / denom[i](s)`` with
    power-basis coefficients.
    """

    def __init__(self, breaks: Sequence[float], numer: Sequence, denom: Sequence | None = None):
        self.breaks = np.asarray(breaks, dtype=float)
        self.numer = [np.asarray(n, dtype=float) for n in numer]
        if denom is None:
            denom = [np.array([1.0]) for _ in self.numer]
        self.denom = [np.asarray(d, dtype=float) for d in denom]
        if len(self.breaks) != len(self.numer) + 1:
            raise ValueError("need one more breakpoint than segments")
        if np.any(np.diff(self.breaks) <= 0):
            raise ValueError("breakpoints must increase")

    @classmethod
    def polynomial(cls, coeffs, breaks=(0.0, 1.0)):
        """Piecewise polynomial with coefficients in the global offset ``v - b_i``."""
        breaks = np.asarray(breaks, dtype=float)
        numer = []
        for i, c in enumerate(coeffs):
            c = np.asarray(c, dtype=float)
            h = breaks[i + 1] - breaks[i]
            numer.append(c * (h ** np.arange(c.shape[0]))[:, None])
        return cls(breaks, numer)

    @classmethod
    def rational_bezier(cls, segments, breaks=None):
        """From rational Bezier segments ``[(points (n+1, 3), weights (n+1,)), ...]``."""
        from math import comb

        numer, denom = [], []
        for pts, w in segments:
            pts = np.asarray(pts, dtype=float)
            w = np.ones(len(pts)) if w is None else np.asarray(w, dtype=float)
            n = len(pts) - 1
            # Bernstein -> power basis
            M = np.zeros((n + 1, n + 1))
            for i in range(n + 1):
                for j in range(i, n + 1):
                    M[j, i] = comb(n, j) * comb(j, i) * (-1) ** (j - i)
            numer.append(M @ (pts * w[:, None]))
            denom.append(M @ w)
        if breaks is None:
            breaks = np.linspace(0.0, 1.0, len(segments) + 1)
        return cls(breaks, numer, denom)

    def _segment_index(self, v):
        idx = np.searchsorted(self.breaks, v, side="right") - 1
        return np.clip(idx, 0, len(self.numer) - 1)

    def derivatives(self, v):
        v = np.asarray(v, dtype=float)
        flat = v.reshape(-1)
        out = [np.empty(flat.shape + (3,)) for _ in range(3)]
        idx = self._segment_index(flat)
        for i in np.unique(idx):
            m = idx == i
            h = self.breaks[i + 1] - self.breaks[i]
            s = (flat[m] - self.breaks[i]) / h
            N, dN, ddN = _poly_eval(self.numer[i], s)
            D, dD, ddD = _poly_eval(self.denom[i], s)
            D = D[:, None]
            dD = dD[:, None]
            ddD = ddD[:, None]
            A = N / D
            dA = (dN - A * dD) / D
            ddA = (ddN - 2.0 * dA * dD - A * ddD) / D
            out[0][m] = A
            out[1][m] = dA / h
            out[2][m] = ddA / (h * h)
        return tuple(o.reshape(v.shape + (3,)) for o in out)


class HermiteCurve(MinkCurve):
    """C^1 cubic Hermite interpolant of sampled points and derivatives.

    ``params`` are the sample parameters in any increasing units (e.g. arc
    length of a traced polyline); they are normalised onto ``[0, 1]``.
    """

    def __init__(self, params, points, tangents, closed: bool = False):
        params = np.asarray(params, dtype=float)
        span = params[-1] - params[0]
        if span <= 0:
            raise ValueError("parameters must increase")
        x = (params - params[0]) / span
        self.closed = closed
        self.points = np.asarray(points, dtype=float)
        self.tangents = np.asarray(tangents, dtype=float)
        self._spline = CubicHermiteSpline(x, self.points, self.tangents * span, axis=0)
        self._d1 = self._spline.derivative(1)
        self._d2 = self._spline.derivative(2)

    def derivatives(self, v):
        v = np.clip(np.asarray(v, dtype=float), 0.0, 1.0)
        return self._spline(v), self._d1(v), self._d2(v)


class ReparamCurve(MinkCurve):
    """``C(phi(s))`` for a monotone map ``phi`` of ``[0, 1]`` onto itself."""

    def __init__(self, base: MinkCurve, phi: Callable, dphi: Callable, ddphi: Callable):
        self.base = base
        self.phi = phi
        self.dphi = dphi
        self.ddphi = ddphi

    def derivatives(self, s):
        s = np.asarray(s, dtype=float)
        v = self.phi(s)
        C, dC, ddC = self.base.derivatives(v)
        g1 = np.asarray(self.dphi(s))[..., None]
        g2 = np.asarray(self.ddphi(s))[..., None]
        return C, dC * g1, ddC * g1 * g1 + dC * g2

    def base_param(self, s):
        return self.phi(np.asarray(s, dtype=float))


class AffineSubCurve(ReparamCurve):
    def __init__(self, base: MinkCurve, a: float, b: float):
        self.a = float(a)
        self.b = float(b)
        w = self.b - self.a
        super().__init__(base, lambda s: self.a + w * s, lambda s: np.full(np.shape(s), w),
                         lambda s: np.zeros(np.shape(s)))


def graded_map(start: bool, end: bool):
    """Parameter grading that clusters samples at light-like endpoints.

    Returns ``(phi, dphi, ddphi)``; the speed of ``phi`` vanishes linearly at
    each graded end, i.e. ``v = 1 - (1 - s)^2`` near a graded end point.
    """
    if start and end:
        return (lambda s: 3 * s**2 - 2 * s**3,
                lambda s: 6 * s - 6 * s**2,
                lambda s: 6 - 12 * s)
    if end:
        return (lambda s: 1 - (1 - s) ** 2, lambda s: 2 * (1 - s), lambda s: -2 + 0 * s)
    if start:
        return (lambda s: s**2, lambda s: 2 * s, lambda s: 2 + 0 * s)
    return (lambda s: s, lambda s: 1 + 0 * s, lambda s: 0 * s)
