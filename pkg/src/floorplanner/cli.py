"""Command line front end.

Subcommands: build (batch pipeline), online (interval snapshots), doors
(aperture detection only), candidates (enumeration and pruning only),
synth (generate a scene from a world description), render (SVG from a
saved plan).  Exit codes: 0 success, 2 bad input, 3 pipeline failure.
Set LAYOUT_LOG=debug|info|warning for progress logging on stderr.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace

import yaml

from .errors import (
    HeightOutOfRange,
    InvalidSpec,
    InvariantViolation,
    LayoutError,
    MissingFile,
    PoseOutsideFreeSpace,
    SchemaViolation,
    StageError,
)
from .figures import save_plan_figure, save_plane_profiles
from .ingest import load_scene, save_scene, slice_grid, project_segments_2d
from .candidates import enumerate_rects, prune_rects
from .model import LayoutPlane
from .pipeline import (
    PipelineParams,
    detect_scene_doorways,
    format_regions_csv,
    format_report,
    format_timeline,
    read_floorplan,
    run_batch,
    run_online,
    write_floorplan,
)
from .render import write_svg
from .synth import generate_world, observe_from_spec

log = logging.getLogger("floorplanner")

# errors the user can fix in their inputs or flags, as opposed to the
# pipeline failing on data it accepted
_INPUT_ERRORS = (MissingFile, SchemaViolation, InvariantViolation,
                 HeightOutOfRange, InvalidSpec, PoseOutsideFreeSpace)

_PARAM_FLAGS = (
    ("--height", "slice_height", float, "slice height in meters"),
    ("--z-max", "z_max", float, "ignore observation points above this height"),
    ("--bin-width", "bin_width", float, "door histogram bin width in meters"),
    ("--sigma-bins", "sigma_bins", float, "door histogram smoothing sigma in bins"),
    ("--width-step", "width_step", float, "door template width step in meters"),
    ("--response-min", "response_min", float, "door detector response threshold"),
    ("--min-flank", "min_flank", float, "required wall evidence span beside a door"),
    ("--min-dim", "min_dim", float, "minimum candidate rectangle side in meters"),
    ("--erosion", "erosion", float, "candidate interior erosion in meters"),
    ("--max-ratio", "max_ratio", float, "region total/free cell rejection ratio"),
    ("--plane-tol", "plane_tol", float, "doorway attachment distance in meters"),
    ("--transition-overlap", "transition_overlap", float,
     "fraction of door width a region boundary must front"),
    ("--perim-max", "perim_max", float, "perimeter over which a region is a corridor"),
    ("--turndist-max", "turndist_max", float,
     "square-dissimilarity over which a region is a corridor"),
)


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    for flag, dest, typ, help_text in _PARAM_FLAGS:
        p.add_argument(flag, dest=dest, type=typ, default=None, help=help_text)
    p.add_argument("--widths", dest="widths", default=None, metavar="LO,HI",
                   help="door template width band in meters, e.g. 0.8,1.2")


def _params(args: argparse.Namespace) -> PipelineParams:
    kw = {}
    for _, dest, _, _ in _PARAM_FLAGS:
        v = getattr(args, dest, None)
        if v is not None:
            kw[dest] = v
    w = getattr(args, "widths", None)
    if w is not None:
        try:
            lo, hi = (float(v) for v in w.split(","))
        except ValueError as exc:
            raise SchemaViolation(f"--widths expects LO,HI, got {w!r}") from exc
        kw["widths"] = (lo, hi)
    return PipelineParams(**kw)


def _outdir(args: argparse.Namespace) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def cmd_build(args: argparse.Namespace) -> int:
    scene = load_scene(args.manifest)
    params = _params(args)
    log.info("building %s", scene.name)
    result = run_batch(scene, params)
    out = _outdir(args)
    write_floorplan(os.path.join(out, "floorplan.txt"), result, scene.planes)
    report = format_report(result, scene)
    with open(os.path.join(out, "report.txt"), "w", newline="\n") as fh:
        fh.write(report)
    with open(os.path.join(out, "regions.csv"), "w", newline="\n") as fh:
        fh.write(format_regions_csv(result))
    figdir = os.path.join(out, "figures")
    os.makedirs(figdir, exist_ok=True)
    save_plan_figure(result, os.path.join(figdir, "plan.png"), scene.planes)
    save_plane_profiles(scene, result, figdir)
    if args.svg:
        write_svg(os.path.join(out, "floorplan.svg"), result.plan, result.grid,
                  scene.planes)
    sys.stdout.write(report)
    return 0


def cmd_online(args: argparse.Namespace) -> int:
    scene = load_scene(args.manifest)
    params = _params(args)
    log.info("online run of %s at %.1f s intervals", scene.name, args.interval)
    result = run_online(scene, interval=args.interval, params=params)
    out = _outdir(args)
    for i, snap in enumerate(result.snapshots):
        write_floorplan(os.path.join(out, f"snapshot_{i:04d}.txt"),
                        snap.result, snap.scene.planes)
    last = result.snapshots[-1]
    write_floorplan(os.path.join(out, "floorplan.txt"), last.result,
                    last.scene.planes)
    timeline = format_timeline(result)
    with open(os.path.join(out, "timeline.txt"), "w", newline="\n") as fh:
        fh.write(timeline)
    if args.svg:
        write_svg(os.path.join(out, "floorplan.svg"), last.result.plan,
                  last.result.grid, last.scene.planes)
    sys.stdout.write(timeline)
    return 0


def cmd_doors(args: argparse.Namespace) -> int:
    scene = load_scene(args.manifest)
    raw, merged = detect_scene_doorways(scene, _params(args))
    by_id = {p.id: p for p in scene.planes}
    lines = [f"doors {scene.name}"]
    for d in merged:
        p = by_id[d.plane_id]
        lines.append(f"plane {d.plane_id} axis {p.axis.value} facing {p.facing.value} "
                     f"offset {repr(float(p.offset))} center {repr(float(d.center))} "
                     f"width {repr(float(d.width))} response {repr(float(d.response))}")
    lines.append(f"raw {len(raw)} merged {len(merged)}")
    text = "\n".join(lines) + "\n"
    if args.out:
        out = _outdir(args)
        with open(os.path.join(out, "doors.txt"), "w", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


def cmd_candidates(args: argparse.Namespace) -> int:
    scene = load_scene(args.manifest)
    params = _params(args)
    grid = slice_grid(scene.grid, params.slice_height)
    planes = tuple(sorted(scene.planes, key=lambda p: p.id))
    segs2d = project_segments_2d(scene.clouds.values(), planes, z_max=params.z_max)
    _, doorways = detect_scene_doorways(scene, params)
    cands = enumerate_rects(planes)
    kept = prune_rects(cands, planes, segs2d, doorways, grid,
                       min_dim=params.min_dim, eps=params.erosion)
    frac = 1.0 - len(kept) / len(cands) if cands else 0.0
    lines = [f"candidates {scene.name}",
             f"enumerated {len(cands)} kept {len(kept)} pruned_fraction {repr(frac)}"]
    for i, r in enumerate(kept):
        ids = " ".join(str(p) for p in r.plane_ids)
        bounds = " ".join(repr(float(b)) for b in r.bounds)
        lines.append(f"rect {i} planes {ids} bounds {bounds} weight {r.weight}")
    text = "\n".join(lines) + "\n"
    if args.out:
        out = _outdir(args)
        with open(os.path.join(out, "candidates.txt"), "w", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    if not os.path.exists(args.spec):
        raise MissingFile(f"world description not found: {args.spec}")
    try:
        with open(args.spec, "r", encoding="utf-8") as fh:
            spec = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise SchemaViolation(f"world description {args.spec}: {exc}") from exc
    if not isinstance(spec, dict):
        raise InvalidSpec("world description must be a mapping")
    if args.seed is not None:
        spec.setdefault("observation", {})["seed"] = args.seed
    world = generate_world(spec)
    log.info("observing world %s", world.name)
    scene = observe_from_spec(world)
    out = _outdir(args)
    world_path = os.path.join(out, "world.yaml")
    with open(world_path, "w", newline="\n") as fh:
        yaml.safe_dump(spec, fh, sort_keys=False)
    scene = replace(scene, world_path=os.path.abspath(world_path))
    manifest = save_scene(out, scene)
    print(manifest)
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    plan_path = os.path.join(args.out, "floorplan.txt")
    if not os.path.exists(plan_path):
        raise MissingFile(f"no saved plan at {plan_path}")
    plan, _, _, file_planes = read_floorplan(plan_path)
    scene = load_scene(args.manifest)
    grid = slice_grid(scene.grid, plan.slice_height)
    planes: tuple[LayoutPlane, ...] = scene.planes or file_planes
    svg_path = os.path.join(args.out, "floorplan.svg")
    write_svg(svg_path, plan, grid, planes)
    print(svg_path)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="floorplanner",
        description="Estimate labeled 2-D floor plans from partial "
                    "axis-aligned indoor observations.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, manifest: bool = True) -> None:
        if manifest:
            p.add_argument("--manifest", required=True, help="scene manifest yaml")
        _add_param_flags(p)

    p = sub.add_parser("build", help="run the batch pipeline on one scene")
    common(p)
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--svg", action="store_true", help="also write floorplan.svg")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("online", help="re-estimate at fixed time intervals")
    common(p)
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--svg", action="store_true", help="also render the final snapshot")
    p.add_argument("--interval", type=float, default=15.0,
                   help="snapshot interval in seconds")
    p.set_defaults(func=cmd_online)

    p = sub.add_parser("doors", help="detect doorways only")
    common(p)
    p.add_argument("--out", default=None, help="also write doors.txt here")
    p.set_defaults(func=cmd_doors)

    p = sub.add_parser("candidates", help="enumerate and prune rectangles only")
    common(p)
    p.add_argument("--out", default=None, help="also write candidates.txt here")
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("synth", help="generate and observe a synthetic world")
    p.add_argument("--spec", required=True, help="world description yaml")
    p.add_argument("--out", default="out", help="output directory for the scene")
    p.add_argument("--seed", type=int, default=None,
                   help="override the observation seed")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("render", help="render a saved plan to SVG")
    p.add_argument("--manifest", required=True, help="scene manifest yaml")
    p.add_argument("--out", default="out",
                   help="directory holding floorplan.txt; the SVG goes beside it")
    p.set_defaults(func=cmd_render)
    return ap


def _configure_logging() -> None:
    level_name = os.environ.get("LAYOUT_LOG", "").strip()
    if not level_name:
        return
    level = getattr(logging, level_name.upper(), None)
    if not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc.cause, _INPUT_ERRORS) else 3
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LayoutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
