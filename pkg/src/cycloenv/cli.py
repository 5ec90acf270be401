"""Command-line front end: ``cycloenv {worm,envelope,convergence,trace}``."""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import io
from .arcs import PlanarArc
from .coverage import MARGIN_REL
from .errors import GeometryError, SceneError
from .methods import METHODS, MethodConfig, convergence_orders
from .pipeline import surfaces_envelope, worm_envelope
from .surfaces import SEED_GRID, TRACE_EPS, TRACE_STEP, trace_singular_curves
from .trim import PROBE_REL

EXIT_OK, EXIT_INPUT, EXIT_GEOMETRY = 0, 2, 3


def _outputs(out: str, suffix: str):
    root, ext = os.path.splitext(out)
    if ext.lower() in (".json", ".csv", ".svg"):
        return root + suffix, root + ".svg"
    return out + suffix, out + ".svg"


def _write(path, text):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _config(args) -> MethodConfig:
    if args.adaptive:
        if args.delta is None:
            raise SceneError("--adaptive needs --delta")
        return MethodConfig(args.method, 2, delta=args.delta, cusp_policy=args.cusp_policy)
    return MethodConfig(args.method, args.n, cusp_policy=args.cusp_policy)


def cmd_worm(args) -> int:
    scene = io.read_scene(args.scene)
    curve = scene.curve(args.curve)
    res = worm_envelope(curve, _config(args), trim=args.trim, delta=args.tol_probe,
                        outer_only=args.outer_only, margin_rel=args.tol_margin)
    stats = dict(res.soup.stats)
    if res.envelope is not None:
        af = io.ArcFile.from_loops(res.envelope.loops, stats={**stats, **res.envelope.stats})
        shown = res.envelope.arcs()
    else:
        af = io.ArcFile(list(res.soup.arcs), stats=stats)
        shown = af.arcs
    if args.superset_layer and res.envelope is not None:
        af.layers["superset"] = list(res.soup.arcs)
    ghost = []
    if args.ghost:
        C = curve(np.linspace(0.0, 1.0, args.ghost))
        ghost = [PlanarArc.circular(c[:2], abs(c[2]), 0.0, 2 * np.pi, "ghost") for c in C if abs(c[2]) > 0]
    jpath, spath = _outputs(args.out, ".json")
    _write(jpath, io.dumps_arcs(af))
    _write(spath, io.render_svg(shown, ghost=ghost + af.layers.get("superset", [])))
    print(f"{len(af.arcs)} arcs -> {jpath}, {spath}")
    return EXIT_OK


def cmd_envelope(args) -> int:
    scene = io.read_scene(args.scene)
    surfaces = scene.all_surfaces()
    if not surfaces:
        raise SceneError("scene has no surfaces")
    res = surfaces_envelope(surfaces, MethodConfig(args.method, args.n), trim=args.trim,
                            seed_grid=args.seed_grid, delta=args.tol_probe, outer_only=args.outer_only,
                            margin_rel=args.tol_margin, eps_rel=args.tol_trace)
    stats = {**res.soup.stats, "singularFraction": res.singular_fraction}
    if res.envelope is not None:
        af = io.ArcFile.from_loops(res.envelope.loops, stats={**stats, **res.envelope.stats})
        if args.superset_layer:
            af.layers["superset"] = list(res.soup.arcs)
    else:
        af = io.ArcFile(list(res.soup.arcs), stats=stats)
    jpath, spath = _outputs(args.out, ".json")
    _write(jpath, io.dumps_arcs(af))
    _write(spath, io.render_svg(af.arcs, ghost=af.layers.get("superset", [])))
    print(f"{len(af.loops)} loops, {len(af.arcs)} arcs -> {jpath}, {spath}")
    return EXIT_OK


def cmd_convergence(args) -> int:
    scene = io.read_scene(args.scene)
    curve = scene.curve(args.curve)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise SceneError(f"unknown method {m!r}")
    Ns = [int(x) for x in args.ns.split(",")]
    rows = []
    for m in methods:
        for N, arcs, err, order in convergence_orders(curve, m, Ns, args.samples, args.cusp_policy):
            rows.append((m, N, arcs, float(err), float(order)))
    text = io.dumps_csv(("method", "N", "arcs", "error", "estimated_order"), rows)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        path = args.out if args.out.lower().endswith(".csv") else args.out + ".csv"
        _write(path, text)
        print(f"{len(rows)} rows -> {path}")
    return EXIT_OK


def cmd_trace(args) -> int:
    scene = io.read_scene(args.scene)
    surface = scene.surface(args.surface)
    curves = trace_singular_curves(surface, args.seed_grid, step=args.tol_step, eps_rel=args.tol_trace)
    rows = []
    for k, c in enumerate(curves):
        res = c.residuals
        for i, cls in enumerate(c.causal):
            rows.append((k, float(c.u[i]), float(c.t[i]), float(c.vu[i]), float(c.vt[i]),
                         cls.name.lower(), float(res[i])))
    cpath, spath = _outputs(args.out, ".csv")
    _write(cpath, io.dumps_csv(("curve", "u", "t", "v_u", "v_t", "causal", "D_residual"), rows))
    _write(spath, io.render_param_svg([np.column_stack([c.u, c.t]) for c in curves]))
    print(f"{len(curves)} curves, {len(rows)} samples -> {cpath}, {spath}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cycloenv", description="Envelopes of circle families.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, method=True):
        sp.add_argument("scene", help="scene JSON file")
        sp.add_argument("--out", required=True, help="output path (extension optional)")
        if method:
            sp.add_argument("--method", choices=METHODS, default="ibi")
            sp.add_argument("--n", type=int, default=16, help="number of segments")
        sp.add_argument("--tol-margin", type=float, default=MARGIN_REL,
                        help=f"coverage margin relative to scene size (default {MARGIN_REL:g})")
        sp.add_argument("--tol-probe", type=float, default=None,
                        help=f"absolute probe distance for trimming (default {PROBE_REL:g} x scene size)")
        sp.add_argument("--tol-trace", type=float, default=TRACE_EPS,
                        help=f"relative corrector tolerance of the tracer (default {TRACE_EPS:g})")

    w = sub.add_parser("worm", help="approximate the boundary of one worm")
    common(w)
    w.add_argument("--curve", default="0", help="curve id or index")
    w.add_argument("--adaptive", action="store_true", help="adaptive IAI")
    w.add_argument("--delta", type=float, default=None, help="deviation bound for --adaptive")
    w.add_argument("--trim", action=argparse.BooleanOptionalAction, default=False)
    w.add_argument("--outer-only", action="store_true")
    w.add_argument("--superset-layer", action="store_true")
    w.add_argument("--ghost", type=int, default=0, metavar="K", help="draw K input circles underneath")
    w.add_argument("--cusp-policy", choices=("error", "split"), default="error")
    w.set_defaults(func=cmd_worm)

    e = sub.add_parser("envelope", help="outer envelope of evolving worms")
    common(e)
    e.add_argument("--trim", action=argparse.BooleanOptionalAction, default=True)
    e.add_argument("--outer-only", action="store_true")
    e.add_argument("--superset-layer", action="store_true")
    e.add_argument("--seed-grid", type=int, default=SEED_GRID)
    e.set_defaults(func=cmd_envelope)

    c = sub.add_parser("convergence", help="error and estimated order table")
    c.add_argument("scene")
    c.add_argument("--out", default="-", help="CSV path or - for stdout")
    c.add_argument("--curve", default="0")
    c.add_argument("--methods", default=",".join(METHODS))
    c.add_argument("--ns", default="8,16,32,64")
    c.add_argument("--samples", type=int, default=512)
    c.add_argument("--cusp-policy", choices=("error", "split"), default="error")
    c.set_defaults(func=cmd_convergence)

    t = sub.add_parser("trace", help="trace singular curves of a surface")
    common(t, method=False)
    t.add_argument("--surface", default="0")
    t.add_argument("--seed-grid", type=int, default=SEED_GRID)
    t.add_argument("--tol-step", type=float, default=TRACE_STEP)
    t.set_defaults(func=cmd_trace)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except GeometryError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (SceneError, ValueError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
