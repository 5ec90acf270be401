"""Scene files, arc files, CSV tables and SVG figures.

Scene JSON::

    {"version": 1, "units": "mm",
     "curves": [{"id": "spine", "type": "polynomial", "breaks": [0, 1],
                 "segments": [{"degree": 2, "coefficients": [[x, y, r], ...]}]},
                {"id": "arc", "type": "rational_bezier", "breaks": [0, 1],
                 "segments": [{"degree": 2, "points": [[x, y, r], ...],
                               "weights": [1, w, 1]}]}],
     "surfaces": [{"id": "s", "type": "bezier", "degrees": [p, q],
                   "ubreaks": [0, 1], "tbreaks": [0, 1],
                   "patches": [[ <(p+1) x (q+1) net of [x, y, r]> ]]}]}

Polynomial coefficients are in increasing powers of the local variable
``s in [0, 1]`` of each segment.  Surfaces may also use ``"type": "power"``
with the same layout holding power coefficients of each cell.

Arc JSON lists every arc with its exact internal state (start point,
heading, signed curvature, length) next to the derived circle or segment
fields, so reading never has to invert a conversion and
write -> read -> write is byte-identical.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass, field
from html import escape

import numpy as np

from .arcs import PlanarArc
from .curves import RationalPolyCurve
from .errors import SceneError
from .surfaces import PolySurface

SCENE_VERSION = 1
ARC_VERSION = 1


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _floats(x, shape_msg: str):
    try:
        a = np.asarray(x, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SceneError(f"{shape_msg}: not numeric") from exc
    if not np.all(np.isfinite(a)):
        raise SceneError(f"{shape_msg}: non-finite value")
    return a


def _breaks(d, n, what):
    b = _floats(d.get("breaks", np.linspace(0.0, 1.0, n + 1).tolist()), f"{what} breaks")
    if b.ndim != 1 or len(b) != n + 1 or np.any(np.diff(b) <= 0):
        raise SceneError(f"{what}: need {n + 1} increasing breakpoints")
    return b


# -- scene ---------------------------------------------------------------

def _check_curve(d, k):
    what = f"curve {d.get('id', k)!r}"
    kind = d.get("type", "polynomial")
    segs = d.get("segments")
    if not isinstance(segs, list) or not segs:
        raise SceneError(f"{what}: segments must be a non-empty list")
    out = {"id": str(d.get("id", f"c{k}")), "type": kind,
           "breaks": _breaks(d, len(segs), what).tolist(), "segments": []}
    for j, s in enumerate(segs):
        deg = s.get("degree")
        if not isinstance(deg, int) or deg < 0:
            raise SceneError(f"{what} segment {j}: degree must be a non-negative integer")
        key = "coefficients" if kind == "polynomial" else "points"
        if kind not in ("polynomial", "rational_bezier"):
            raise SceneError(f"{what}: unknown curve type {kind!r}")
        c = _floats(s.get(key), f"{what} segment {j}")
        if c.shape != (deg + 1, 3):
            raise SceneError(f"{what} segment {j}: expected {deg + 1} triples, got shape {c.shape}")
        seg = {"degree": deg, key: c.tolist()}
        if kind == "rational_bezier":
            w = _floats(s.get("weights", [1.0] * (deg + 1)), f"{what} weights")
            if w.shape != (deg + 1,) or np.any(w <= 0):
                raise SceneError(f"{what} segment {j}: need {deg + 1} positive weights")
            seg["weights"] = w.tolist()
        out["segments"].append(seg)
    return out


def _check_surface(d, k):
    what = f"surface {d.get('id', k)!r}"
    kind = d.get("type", "bezier")
    if kind not in ("bezier", "power"):
        raise SceneError(f"{what}: unknown surface type {kind!r}")
    deg = d.get("degrees")
    if not (isinstance(deg, list) and len(deg) == 2 and all(isinstance(x, int) and x >= 0 for x in deg)):
        raise SceneError(f"{what}: degrees must be two non-negative integers")
    patches = d.get("patches")
    if not isinstance(patches, list) or not patches or not all(isinstance(r, list) and r for r in patches):
        raise SceneError(f"{what}: patches must be a non-empty grid")
    nt = len(patches[0])
    if any(len(r) != nt for r in patches):
        raise SceneError(f"{what}: ragged patch grid")
    out = {"id": str(d.get("id", f"s{k}")), "type": kind, "degrees": list(deg), "patches": []}
    for i, row in enumerate(patches):
        orow = []
        for j, net in enumerate(row):
            a = _floats(net, f"{what} patch ({i},{j})")
            if a.shape != (deg[0] + 1, deg[1] + 1, 3):
                raise SceneError(f"{what} patch ({i},{j}): expected shape "
                                 f"{(deg[0] + 1, deg[1] + 1, 3)}, got {a.shape}")
            orow.append(a.tolist())
        out["patches"].append(orow)
    out["ubreaks"] = _breaks({"breaks": d["ubreaks"]} if "ubreaks" in d else {}, len(patches), what).tolist()
    out["tbreaks"] = _breaks({"breaks": d["tbreaks"]} if "tbreaks" in d else {}, nt, what).tolist()
    return out


@dataclass
class Scene:
    curves: list = field(default_factory=list)
    surfaces: list = field(default_factory=list)
    units: str = ""
    version: int = SCENE_VERSION

    @classmethod
    def from_dict(cls, d) -> "Scene":
        if not isinstance(d, dict):
            raise SceneError("scene must be a JSON object")
        if d.get("version", SCENE_VERSION) != SCENE_VERSION:
            raise SceneError(f"unsupported scene version {d.get('version')!r}")
        curves = [_check_curve(c, k) for k, c in enumerate(d.get("curves", []))]
        surfaces = [_check_surface(s, k) for k, s in enumerate(d.get("surfaces", []))]
        ids = [c["id"] for c in curves] + [s["id"] for s in surfaces]
        if len(set(ids)) != len(ids):
            raise SceneError("duplicate ids in scene")
        return cls(curves, surfaces, str(d.get("units", "")), SCENE_VERSION)

    def to_dict(self) -> dict:
        return {"version": self.version, "units": self.units,
                "curves": self.curves, "surfaces": self.surfaces}

    def _find(self, items, key, what):
        if isinstance(key, int) or (isinstance(key, str) and key.isdigit()):
            i = int(key)
            if 0 <= i < len(items):
                return items[i]
        for it in items:
            if it["id"] == key:
                return it
        raise SceneError(f"no {what} {key!r} in scene")

    def curve(self, key=0):
        d = self._find(self.curves, key, "curve")
        if d["type"] == "polynomial":
            return RationalPolyCurve(d["breaks"], [s["coefficients"] for s in d["segments"]])
        return RationalPolyCurve.rational_bezier(
            [(s["points"], s["weights"]) for s in d["segments"]], d["breaks"])

    def surface(self, key=0):
        d = self._find(self.surfaces, key, "surface")
        if d["type"] == "bezier":
            s = PolySurface.bezier(d["patches"], d["ubreaks"], d["tbreaks"])
        else:
            s = PolySurface(d["patches"], d["ubreaks"], d["tbreaks"])
        s.name = d["id"]
        return s

    def all_surfaces(self):
        return [self.surface(i) for i in range(len(self.surfaces))]


def loads_scene(text: str) -> Scene:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"invalid JSON: {exc}") from exc
    return Scene.from_dict(d)


def read_scene(path) -> Scene:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads_scene(fh.read())
    except OSError as exc:
        raise SceneError(str(exc)) from exc


def dumps_scene(scene: Scene) -> str:
    return dumps(scene.to_dict())


def write_scene(scene: Scene, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_scene(scene))


# -- arcs ----------------------------------------------------------------

def arc_record(arc: PlanarArc) -> dict:
    rec = {"kind": "segment" if arc.is_line else "circle", "sourceTag": arc.tag,
           "start": [arc.x0, arc.y0], "heading": arc.heading,
           "curvature": arc.curvature, "length": arc.length,
           "end": [float(x) for x in arc.end]}
    if not arc.is_line:
        rec.update(center=[float(x) for x in arc.center], radius=arc.radius,
                   startAngle=arc.start_angle, endAngle=arc.end_angle,
                   orientation=arc.orientation)
    return rec


def arc_from_record(rec) -> PlanarArc:
    try:
        x0, y0 = (float(v) for v in rec["start"])
        vals = [x0, y0, float(rec["heading"]), float(rec["curvature"]), float(rec["length"])]
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneError(f"bad arc record: {exc}") from exc
    if not all(math.isfinite(v) for v in vals) or vals[4] < 0:
        raise SceneError("arc record has non-finite values or negative length")
    return PlanarArc(*vals, tag=str(rec.get("sourceTag", "")))


@dataclass
class ArcFile:
    arcs: list = field(default_factory=list)
    loops: list = field(default_factory=list)
    layers: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"version": ARC_VERSION, "arcs": [arc_record(a) for a in self.arcs],
                "loops": [list(map(int, l)) for l in self.loops],
                "layers": {k: [arc_record(a) for a in v] for k, v in self.layers.items()},
                "stats": self.stats}

    @classmethod
    def from_dict(cls, d) -> "ArcFile":
        if not isinstance(d, dict) or d.get("version") != ARC_VERSION:
            raise SceneError("not an arc file of a supported version")
        arcs = [arc_from_record(r) for r in d.get("arcs", [])]
        loops = [list(l) for l in d.get("loops", [])]
        if any(not isinstance(i, int) or not 0 <= i < len(arcs) for l in loops for i in l):
            raise SceneError("loop index out of range")
        layers = {k: [arc_from_record(r) for r in v] for k, v in d.get("layers", {}).items()}
        return cls(arcs, loops, layers, dict(d.get("stats", {})))

    @classmethod
    def from_loops(cls, loops, **kw) -> "ArcFile":
        arcs, idx = [], []
        for loop in loops:
            idx.append(list(range(len(arcs), len(arcs) + len(loop))))
            arcs.extend(loop)
        return cls(arcs, idx, **kw)


def dumps_arcs(af: ArcFile) -> str:
    return dumps(af.to_dict())


def loads_arcs(text: str) -> ArcFile:
    try:
        return ArcFile.from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise SceneError(f"invalid JSON: {exc}") from exc


def write_arcs(af: ArcFile, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_arcs(af))


def read_arcs(path) -> ArcFile:
    with open(path, encoding="utf-8") as fh:
        return loads_arcs(fh.read())


# -- csv -----------------------------------------------------------------

def dumps_csv(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(x)) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


# -- svg -----------------------------------------------------------------

STYLE = {"boundary": "#1f77b4", "singular": "#d62728", "cap": "#2ca02c",
         "env": "#1f77b4", "superset": "#bbbbbb", "ghost": "#dddddd"}


def _colour(tag: str) -> str:
    for key, col in STYLE.items():
        if tag.startswith(key):
            return col
    return "#000000"


def _fmt(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _path_d(arc: PlanarArc, tx) -> str:
    x0, y0 = tx(arc.start)
    x1, y1 = tx(arc.end)
    if arc.is_line:
        return f"M {_fmt(x0)} {_fmt(y0)} L {_fmt(x1)} {_fmt(y1)}"
    R = arc.radius * tx.scale
    turn = abs(arc.turn)
    if turn >= 2 * math.pi - 1e-9:
        # a full circle needs two half arcs
        xm, ym = tx(arc.point_at(0.5))
        sweep = 0 if arc.curvature > 0 else 1
        return (f"M {_fmt(x0)} {_fmt(y0)} A {_fmt(R)} {_fmt(R)} 0 0 {sweep} {_fmt(xm)} {_fmt(ym)} "
                f"A {_fmt(R)} {_fmt(R)} 0 0 {sweep} {_fmt(x1)} {_fmt(y1)}")
    large = 1 if turn > math.pi else 0
    # the y flip mirrors orientation: ccw in the plane is clockwise on screen
    sweep = 0 if arc.curvature > 0 else 1
    return f"M {_fmt(x0)} {_fmt(y0)} A {_fmt(R)} {_fmt(R)} 0 {large} {sweep} {_fmt(x1)} {_fmt(y1)}"


class _Transform:
    def __init__(self, box, width):
        x0, y0, x1, y1 = box
        w, h = max(x1 - x0, 1e-12), max(y1 - y0, 1e-12)
        pad = 0.05 * max(w, h)
        self.x0, self.y1 = x0 - pad, y1 + pad
        self.scale = width / (w + 2 * pad)
        self.width = width
        self.height = (h + 2 * pad) * self.scale

    def __call__(self, p):
        return (p[0] - self.x0) * self.scale, (self.y1 - p[1]) * self.scale


def _bbox(arcs):
    boxes = np.array([a.bbox() for a in arcs]) if arcs else np.zeros((1, 4))
    return boxes[:, 0].min(), boxes[:, 1].min(), boxes[:, 2].max(), boxes[:, 3].max()


def render_svg(arcs, ghost=(), width: float = 800.0, stroke: float = 1.5, polylines=()) -> str:
    """One ``<path>`` per arc (ghost arcs and polylines are drawn underneath)."""
    arcs, ghost = list(arcs), list(ghost)
    box = _bbox(arcs + ghost)
    if polylines:
        pts = np.concatenate([np.asarray(p, float) for p in polylines])
        box = (min(box[0], pts[:, 0].min()), min(box[1], pts[:, 1].min()),
               max(box[2], pts[:, 0].max()), max(box[3], pts[:, 1].max()))
    tx = _Transform(box, width)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(tx.width)}" '
           f'height="{_fmt(tx.height)}" viewBox="0 0 {_fmt(tx.width)} {_fmt(tx.height)}">']
    if ghost:
        out.append('<g class="ghost" fill="none">')
        out += [f'<path d="{_path_d(a, tx)}" stroke="{STYLE["ghost"]}" stroke-width="{_fmt(stroke / 2)}"/>'
                for a in ghost]
        out.append("</g>")
    for k, poly in enumerate(polylines):
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (tx(p) for p in poly))
        out.append(f'<polyline class="curve" points="{pts}" fill="none" '
                   f'stroke="{STYLE["singular"]}" stroke-width="{_fmt(stroke)}"/>')
    out.append('<g class="arcs" fill="none">')
    for a in arcs:
        out.append(f'<path d="{_path_d(a, tx)}" stroke="{_colour(a.tag)}" '
                   f'stroke-width="{_fmt(stroke)}"><title>{escape(a.tag)}</title></path>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_param_svg(curves, boundary: bool = True, size: float = 400.0) -> str:
    """Parameter-domain picture: unit square boundary plus traced (u, t) polylines."""
    sq = [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]
    tx = _Transform((0.0, 0.0, 1.0, 1.0), size)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(tx.width)}" '
           f'height="{_fmt(tx.height)}" viewBox="0 0 {_fmt(tx.width)} {_fmt(tx.height)}">']
    if boundary:
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (tx(p) for p in sq))
        out.append(f'<polyline class="boundary" points="{pts}" fill="none" stroke="#2ca02c" stroke-width="2"/>')
    for c in curves:
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (tx(p) for p in np.asarray(c, float)))
        out.append(f'<polyline class="singular" points="{pts}" fill="none" stroke="#d62728" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
