"""Worm and evolving-worm envelope pipelines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .arcs import PlanarArc
from .coverage import MARGIN_REL, CurveCoverage, UnionCoverage, coverage_oracle_from_surfaces
from .errors import LightLikeInterior
from .methods import ArcSoup, MethodConfig, approximate
from .mink import CausalClass
from .surfaces import (TRACE_EPS, SEED_GRID, boundary_curves, curve_causal_pieces, curve_length,
                       lift_to_mink_curve, segment_by_causality, trace_singular_curves)
from .trim import EnvelopeResult, extract_outer_envelope

MAX_SPLIT = 6


@dataclass
class Source:
    """A circle family feeding the soup: a curve or a single circle."""
    tag: str
    curve: object = None
    circle: tuple | None = None


@dataclass
class PipelineResult:
    soup: ArcSoup
    sources: list = field(default_factory=list)
    envelope: EnvelopeResult | None = None
    traced: list = field(default_factory=list)

    @property
    def singular_fraction(self) -> float:
        tags = self.envelope.tags() if self.envelope else [a.tag for a in self.soup.arcs]
        if not tags:
            return 0.0
        return sum(t.startswith("singular") for t in tags) / len(tags)


def _full_circle(c, r, tag):
    return PlanarArc.circular((float(c[0]), float(c[1])), abs(float(r)), 0.0,
                              math.copysign(2 * math.pi, r if r != 0 else 1.0), tag)


def _approximate_spacelike(curve, config: MethodConfig, depth: int = 0) -> ArcSoup:
    """Approximate a space-like curve, splitting at interior light-like touches."""
    try:
        return approximate(curve, config)
    except LightLikeInterior:
        if depth >= MAX_SPLIT:
            raise
    v = np.linspace(0.0, 1.0, 1025)
    dC = curve.derivative(v)
    q = (dC[:, 0] ** 2 + dC[:, 1] ** 2 - dC[:, 2] ** 2) / np.maximum(np.sum(dC * dC, axis=1), 1e-300)
    k = int(np.argmin(q[1:-1])) + 1
    soup = ArcSoup(method=config.method)
    for a, b in ((0.0, v[k]), (v[k], 1.0)):
        soup.extend(_approximate_spacelike(curve.sub(a, b), config, depth + 1))
    return soup


def curve_sources(curve, tag: str, tol: float) -> list[Source]:
    """Split a boundary curve into space-like pieces and dominant circles.

    Along a time-like (or light-like) stretch the circles are nested, so the
    union is the circle at whichever end has the larger radius.
    """
    if curve_length(curve) < tol:
        C = curve(0.5)
        return [Source(f"{tag}/point", circle=(C[:2], C[2]))] if abs(C[2]) > tol else []
    out = []
    for a, b, kind in curve_causal_pieces(curve):
        if kind is CausalClass.SPACE_LIKE:
            out.append(Source(f"{tag}[{a:.6g},{b:.6g}]", curve=curve.sub(a, b)))
        else:
            Ca, Cb = curve(a), curve(b)
            C = Ca if abs(Ca[2]) >= abs(Cb[2]) else Cb
            if abs(C[2]) > tol:
                out.append(Source(f"{tag}[{a:.6g},{b:.6g}]/{kind}", circle=(C[:2], C[2])))
    return out


def surface_sources(surface, name: str = "S0", seed_grid: int = SEED_GRID, eps_rel: float = TRACE_EPS):
    """Boundary and singular families of one surface, plus the traced curves."""
    tol = 1e-9 * surface.spatial_scale()
    sources = []
    for iso in boundary_curves(surface):
        sources += curve_sources(iso, f"boundary/{name}/{iso.label}", tol)
    traced = trace_singular_curves(surface, seed_grid, eps_rel=eps_rel)
    k = 0
    for tc in traced:
        for piece in segment_by_causality(tc):
            lifted = lift_to_mink_curve(piece)
            if lifted is None:
                continue
            sources.append(Source(f"singular/{name}/{k}", curve=lifted))
            k += 1
    return sources, traced


def soup_from_sources(sources, config: MethodConfig) -> ArcSoup:
    # envelope cusps are expected on surface-derived curves
    config = replace(config, cusp_policy="split")
    soup = ArcSoup(method=config.method)
    for src in sources:
        if src.circle is not None:
            soup.add(_full_circle(src.circle[0], src.circle[1], f"{src.tag}/circle"), (0, 0.0, 0.0))
            continue
        part = _approximate_spacelike(src.curve, config)
        soup.samples += part.samples
        for arc, span in zip(part.arcs, part.spans):
            soup.add(arc.with_tag(f"{src.tag}/{arc.tag}"), span)
    return soup


def worm_envelope(curve, config: MethodConfig, trim: bool = False, delta: float | None = None,
                  outer_only: bool = False, margin_rel: float = MARGIN_REL) -> PipelineResult:
    soup = approximate(curve, config)
    env = None
    if trim:
        cov = CurveCoverage(curve, margin_rel * curve.spatial_scale())
        env = extract_outer_envelope(soup, cov, delta=delta, outer_only=outer_only)
    return PipelineResult(soup, [Source("worm", curve=curve)], env)


def surfaces_envelope(surfaces, config: MethodConfig, trim: bool = True, seed_grid: int = SEED_GRID,
                      delta: float | None = None, outer_only: bool = False,
                      margin_rel: float = MARGIN_REL, eps_rel: float = TRACE_EPS) -> PipelineResult:
    """Untrimmed superset and trimmed outer envelope of a set of evolving worms."""
    sources, traced = [], []
    for i, s in enumerate(surfaces):
        src, tc = surface_sources(s, f"{getattr(s, 'name', '') or 'S'}{i}", seed_grid, eps_rel)
        sources += src
        traced += tc
    soup = soup_from_sources(sources, config)
    env = None
    if trim:
        cov = coverage_oracle_from_surfaces(surfaces, margin_rel)
        env = extract_outer_envelope(soup, cov, delta=delta, outer_only=outer_only)
    return PipelineResult(soup, sources, env, traced)


def curves_coverage(curves) -> UnionCoverage:
    return UnionCoverage([CurveCoverage(c) for c in curves])
