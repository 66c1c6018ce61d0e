"""
Command line interface

    python -m app.cli build --family A --params 1,2,3 -o cube.json
    python -m app.cli classify cube.json --degree
    python -m app.cli export cube.json --surfaces u=0,0.5,1 --singular
    python -m app.cli export --gallery A1 O2

Exit codes: 0 ok, 2 invalid input, 3 degenerate cube, 4 numerically
unclassifiable.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.errors import DupinCubeError, InvalidParameter
from app.core.tolerance import Tolerance
from app.geometry.analysis.classify import classify
from app.geometry.analysis.singular import singular_locus
from app.geometry.canonical import build_family
from app.geometry.construct import complete_cube, offset_cube
from app.geometry.qb import DIRECTIONS, DCCube, direction_index, spherical_polys
from app.io.cube_file import load_cube, load_patch, save_cube
from app.io.curves import export_singular_curves
from app.io.gallery import export_galleries, gallery_labels
from app.io.mesh import export_surface_mesh
from app.io.report import build_report, report_json, write_report
from app.schemas.report import ClassificationReport

logger = logging.getLogger("app.cli")


def parse_params(text: Optional[str]) -> Optional[List[float]]:
    if text is None or not text.strip():
        return None
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise InvalidParameter(f"parameters must be comma separated reals, got {text!r}")


def parse_surfaces(text: str) -> List[Tuple[int, float]]:
    """``u=0,0.5,1;s=2`` -> [(2, 0.0), (2, 0.5), (2, 1.0), (0, 2.0)]"""
    out = []
    for group in filter(None, (g.strip() for g in text.split(";"))):
        name, sep, values = group.partition("=")
        if not sep:
            raise InvalidParameter(f"surface group {group!r} must look like u=0,0.5")
        axis = direction_index(name.strip())
        for value in parse_params(values) or []:
            out.append((axis, value))
    return out


def _tolerance(args: argparse.Namespace) -> Tolerance:
    return Tolerance(
        abs_tol=settings.TOL_ABS if args.tol_abs is None else args.tol_abs,
        rel_tol=settings.TOL_REL if args.tol_rel is None else args.tol_rel,
    )


# Text output

def format_cube(D: DCCube) -> str:
    lines = ["control points (u, w):"]
    for index, h in enumerate(D.entries()):
        i, j, k = index & 1, (index >> 1) & 1, (index >> 2) & 1
        lines.append(f"  p{i}{j}{k}: u = {h.u}   w = {h.w}   -> {h.point()}")
    lines.append("spherical polynomials (c0 + c1 x + c2 x^2):")
    for name, coef in zip(DIRECTIONS, spherical_polys(D).coefficients()):
        lines.append(f"  sigma_{name}: " + ", ".join(f"{c:.12g}" for c in coef))
    return "\n".join(lines)


def format_report(report: ClassificationReport) -> str:
    lines = [report.summary, f"coarse type: {report.coarse}", f"subtype: {report.subtype or '-'}"]
    for key, value in sorted(report.parameters.items()):
        lines.append(f"  {key} = {value:.12g}")
    for curve in report.singular:
        where = f" ({curve.direction})" if curve.direction else ""
        lines.append(f"  singular{where}: {curve.description}")
    if report.degree is not None:
        lines.append(f"degree: {report.degree}")
    lines.extend(f"note: {n}" for n in report.notes)
    return "\n".join(lines)


# Commands

def cmd_build(args: argparse.Namespace) -> int:
    tol = _tolerance(args)
    family, params, notes = None, {}, []
    if args.family:
        built = build_family(args.family, parse_params(args.params))
        cube, family, params, notes = built.cube, built.label, built.params, built.notes
    elif args.from_faces:
        faces = [load_patch(p, tol) for p in args.from_faces]
        cube = complete_cube(*faces, tol=tol)
        notes = [f"completed from {', '.join(args.from_faces)}"]
    elif args.offset:
        if args.distance is None:
            raise InvalidParameter("--offset needs --distance")
        cube = offset_cube(load_patch(args.offset, tol), args.distance, tol)
        notes = [f"offset of {args.offset} at distance {args.distance!r}"]
    else:
        raise InvalidParameter("build needs --family, --from-faces or --offset")

    path = save_cube(cube, args.output, family, params, notes)
    if args.json:
        print(json.dumps({
            "cube": str(path),
            "family": family,
            "params": params,
            "sigma": dict(zip(DIRECTIONS, spherical_polys(cube).coefficients())),
            "notes": notes,
        }, indent=2))
    else:
        print(format_cube(cube))
        for note in notes:
            print(f"note: {note}")
        print(f"wrote {path}")
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    tol = _tolerance(args)
    cube = load_cube(args.cube, tol)
    result = classify(cube, tol=tol, with_degree=args.degree, seed=args.seed)
    report = build_report(result, cube, source=args.cube, tol=tol, seed=args.seed)
    if args.output:
        write_report(report, args.output)
    print(report_json(report).rstrip("\n") if args.json else format_report(report))
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    tol = _tolerance(args)
    out = Path(args.output_dir)
    written: List[str] = []
    if args.gallery:
        labels = gallery_labels() if "all" in args.gallery else args.gallery
        for entry in export_galleries(labels, out, args.resolution, tol):
            written.append(str(entry.cube))
            written.extend(str(p) for p in [entry.curves] + entry.surfaces if p is not None)
    if args.cube:
        cube = load_cube(args.cube, tol)
        stem = Path(args.cube).stem
        for axis, value in parse_surfaces(args.surfaces or ""):
            path = out / f"{stem}_{DIRECTIONS[axis]}_{value:g}.obj"
            export_surface_mesh(cube, axis, value, args.resolution, path, tol=tol)
            written.append(str(path))
        if args.singular:
            path = out / f"{stem}_singular.csv"
            export_singular_curves(singular_locus(cube, tol), path)
            written.append(str(path))
    elif not args.gallery:
        raise InvalidParameter("export needs a cube file or --gallery")
    if args.json:
        print(json.dumps({"written": written}, indent=2))
    else:
        print("\n".join(written))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dupincube",
        description="Build, classify and export Dupin cyclidic cubes",
    )
    parser.add_argument("--tol-abs", type=float, default=None, help="Absolute tolerance")
    parser.add_argument("--tol-rel", type=float, default=None, help="Relative tolerance")
    parser.add_argument("--seed", type=int, default=settings.SEED, help="Seed for randomized degree points")
    parser.add_argument("--json", action="store_true", help="Machine-readable output")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Logging level")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="Write a cube file")
    source = build.add_mutually_exclusive_group(required=True)
    source.add_argument("--family", help="Catalog family label (A, A4, TwoPlane, B, O1, O2, S1..S4, General)")
    source.add_argument("--from-faces", nargs=3, metavar=("ST", "SU", "TU"), help="Three patch files sharing p0")
    source.add_argument("--offset", metavar="PATCH", help="Patch file to offset")
    build.add_argument("--params", help="Comma separated family parameters")
    build.add_argument("--distance", type=float, help="Signed offset distance")
    build.add_argument("-o", "--output", default=str(Path(settings.EXPORT_PATH) / "cube.json"))
    build.set_defaults(handler=cmd_build)

    cls = sub.add_parser("classify", help="Classify the DC system of a cube file")
    cls.add_argument("cube", help="Cube file")
    cls.add_argument("--degree", action="store_true", help="Also count preimages of regular points")
    cls.add_argument("-o", "--output", help="Write the JSON report here")
    cls.set_defaults(handler=cmd_classify)

    export = sub.add_parser("export", help="Write meshes and singular polylines")
    export.add_argument("cube", nargs="?", help="Cube file")
    export.add_argument("--surfaces", help="Slices to mesh, e.g. u=0,0.5,1;s=2")
    export.add_argument("--singular", action="store_true", help="Export singular curves")
    export.add_argument("--resolution", type=int, default=None, help="Grid size per mesh side")
    export.add_argument("--gallery", nargs="+", metavar="LABEL",
                        help=f"Gallery configurations ({', '.join(gallery_labels())} or all)")
    export.add_argument("--output-dir", default=settings.EXPORT_PATH)
    export.set_defaults(handler=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except DupinCubeError as e:
        print(f"error: {e.message}", file=sys.stderr)
        for key, value in e.context.items():
            print(f"  {key}: {value}", file=sys.stderr)
        logger.debug("command failed", exc_info=True)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
