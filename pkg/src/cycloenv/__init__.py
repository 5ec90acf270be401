"""Boundaries of planar domains swept by families of circles.

Circles are points ``(x, y, r)`` of Minkowski 3-space; a curve of them sweeps
a *worm* and a surface of them sweeps an evolving domain.  The package
approximates the boundaries of such domains by circular arcs and trims the
resulting arc soups into closed loops.
"""

from .arcs import PlanarArc, loop_area
from .conics import MinkArc, MinkBiarc, mink_arc_envelope, mink_arc_hermite, mink_arc_through_3, mink_biarc
from .coverage import CurveCoverage, DiskUnion, SurfaceCoverage, UnionCoverage, coverage_oracle_from_surfaces
from .curves import FunctionCurve, HermiteCurve, MinkCurve, RationalPolyCurve
from .envelope import envelope_eval, envelope_point, find_envelope_cusps
from .errors import GeometryError, SceneError
from .methods import ArcSoup, MethodConfig, approximate, convergence_orders, hausdorff_error
from .mink import CausalClass, OrientedCircle, classify_plane, classify_vector, cyclo, mink_inner, mink_norm
from .pipeline import surfaces_envelope, worm_envelope
from .surfaces import (FunctionSurface, PolySurface, boundary_curves, det_condition, lift_to_mink_curve,
                       segment_by_causality, trace_singular_curves)
from .sweep import arc_arc_intersections, brute_force_intersections, sweep_intersections
from .trim import EnvelopeResult, extract_outer_envelope

__all__ = [
    "approximate", "arc_arc_intersections", "ArcSoup", "boundary_curves", "brute_force_intersections",
    "CausalClass", "classify_plane", "classify_vector", "convergence_orders", "coverage_oracle_from_surfaces",
    "CurveCoverage", "cyclo", "det_condition", "DiskUnion", "envelope_eval", "envelope_point",
    "EnvelopeResult", "extract_outer_envelope", "find_envelope_cusps", "FunctionCurve", "FunctionSurface",
    "GeometryError", "hausdorff_error", "HermiteCurve", "lift_to_mink_curve", "loop_area", "MethodConfig",
    "mink_arc_envelope", "mink_arc_hermite", "mink_arc_through_3", "mink_biarc", "mink_inner", "mink_norm",
    "MinkArc", "MinkBiarc", "MinkCurve", "OrientedCircle", "PlanarArc", "PolySurface", "RationalPolyCurve",
    "SceneError", "segment_by_causality", "SurfaceCoverage", "surfaces_envelope", "sweep_intersections",
    "trace_singular_curves", "UnionCoverage", "worm_envelope",
]

__version__ = "0.1.0"
