"""Minkowski space R^{2,1}: inner product, causal classes, cyclographic map.

A point ``(x, y, r)`` of R^{2,1} is identified with the oriented planar
circle centred at ``(x, y)`` with signed radius ``r``.  Positive radii are
traversed counter-clockwise.

``mink_norm`` is the quadratic form ``x^2 + y^2 - r^2`` itself, never its
square root.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple

import numpy as np

from .errors import DegenerateSpan

EPS_LIGHT = 1e-10
G = np.diag([1.0, 1.0, -1.0])


class MinkPoint(NamedTuple):
    x: float
    y: float
    r: float


class MinkVector(NamedTuple):
    dx: float
    dy: float
    dr: float


class CausalClass(enum.Enum):
    SPACE_LIKE = "space"
    LIGHT_LIKE = "light"
    TIME_LIKE = "time"

    def __str__(self):
        return self.value


class OrientedCircle(NamedTuple):
    """Planar circle with signed radius (zero radius is a point)."""

    center: tuple[float, float]
    radius: float

    @property
    def orientation(self) -> str:
        if self.radius > 0:
            return "ccw"
        if self.radius < 0:
            return "cw"
        return "point"

    def to_mink(self) -> MinkPoint:
        return MinkPoint(float(self.center[0]), float(self.center[1]), float(self.radius))


def as_vec(v) -> np.ndarray:
    return np.asarray(v, dtype=float)


def mink_inner(a, b):
    """Minkowski inner product; broadcasts over leading axes."""
    a = as_vec(a)
    b = as_vec(b)
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] - a[..., 2] * b[..., 2]


def mink_norm(v):
    """The quadratic form <v, v>_M (may be negative)."""
    return mink_inner(v, v)


def _classify_value(q: float, tol: float) -> CausalClass:
    if abs(q) <= tol:
        return CausalClass.LIGHT_LIKE
    return CausalClass.SPACE_LIKE if q > 0 else CausalClass.TIME_LIKE


def classify_vector(v, scale: float = 1.0, eps: float = EPS_LIGHT) -> CausalClass:
    """Causal class of ``v``; light-like within ``eps * scale**2``."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    return _classify_value(float(mink_norm(v)), eps * scale * scale)


def plane_gram(v1, v2) -> np.ndarray:
    """Restriction of the Minkowski form to span(v1, v2) as a 2x2 matrix."""
    V = np.column_stack([as_vec(v1), as_vec(v2)])
    return V.T @ G @ V


def classify_plane(v1, v2, scale: float | None = None, eps: float = EPS_LIGHT) -> CausalClass:
    """Causal class of the plane spanned by ``v1`` and ``v2``.

    The form has index one, so a positive Gram determinant already means
    positive definite.  Linearly dependent spans have zero determinant and
    come back light-like.
    """
    v1 = as_vec(v1)
    v2 = as_vec(v2)
    n1 = float(np.linalg.norm(v1))
    n2 = float(np.linalg.norm(v2))
    if scale is None:
        scale = max(n1, n2)
        if scale == 0.0:
            raise DegenerateSpan("both spanning vectors vanish")
    elif max(n1, n2) <= eps * scale:
        raise DegenerateSpan("both spanning vectors vanish")
    det = float(np.linalg.det(plane_gram(v1, v2)))
    return _classify_value(det, eps * scale**4)


def cyclo(p) -> OrientedCircle:
    """Cyclographic image of a Minkowski point."""
    x, y, r = (float(c) for c in p)
    return OrientedCircle((x, y), r)


def oriented_contact(c1: OrientedCircle, c2: OrientedCircle, tol: float = 1e-9) -> bool:
    """True when the two oriented circles touch with matching orientation.

    Equivalent to a vanishing Minkowski distance between the preimages; the
    tolerance is relative to the squared scene size.
    """
    a = as_vec(c1.to_mink())
    b = as_vec(c2.to_mink())
    d = a - b
    scale2 = max(1.0, float(np.dot(a, a)), float(np.dot(b, b)))
    return abs(float(mink_norm(d))) <= tol * scale2


def unit_spacelike(v) -> np.ndarray:
    """Normalise a space-like vector to Minkowski length one."""
    v = as_vec(v)
    q = float(mink_norm(v))
    if q <= 0:
        raise ValueError("vector is not space-like")
    return v / math.sqrt(q)
