"""Batch command-line front end.

Every subcommand is a thin adapter over one library operation; paths are
always explicit flags.  Exit status: 0 success, 1 runtime error (I/O,
malformed files), 2 argument error.  The MCT_THREADS environment variable
caps the worker count used by `apply` and `bench`.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench, compose, costmodel, image, lattice
from .errors import ConfigError


def _read_image(path: str) -> image.Image:
    return image.decode_image(Path(path).read_bytes())


def _write_image(path: str, img: image.Image) -> None:
    fmt = "ppm" if Path(path).suffix.lower() in (".ppm", ".pgm") else "png"
    Path(path).write_bytes(image.encode_image(img, fmt))


def _read_grid(path: str) -> lattice.CurveGrid:
    return lattice.load_grid(Path(path).read_bytes())


def _write_grid(path: str, grid: lattice.CurveGrid) -> None:
    Path(path).write_bytes(lattice.save_grid(grid))


def _parse_sizes(text: str) -> list[tuple[int, int]]:
    sizes = []
    for token in text.split(","):
        h, sep, w = token.strip().partition("x")
        if not sep:
            raise ConfigError(f"bad size {token!r}, expected HxW")
        try:
            sizes.append((int(h), int(w)))
        except ValueError:
            raise ConfigError(f"bad size {token!r}, expected HxW") from None
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvegrid",
        description="Apply spatially-varying curve grids to images; build, "
        "transform, and benchmark the grids; estimate MAC costs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", help="translate an image through a grid")
    p.add_argument("--image", required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-clamp", action="store_true", help="skip the final [0, c_max] clamp")

    p = sub.add_parser("synth", help="generate a synthetic grid")
    p.add_argument("--kind", required=True, choices=["identity", "gamma", "sepia", "spatial_gamma"])
    p.add_argument("--gamma", type=float)
    p.add_argument("--gamma0", type=float, help="gamma at the left lattice column")
    p.add_argument("--gamma1", type=float, help="gamma at the right lattice column")
    p.add_argument("--grid-h", type=int, required=True)
    p.add_argument("--grid-w", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--c-max", type=float, default=1.0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("compose", help="add a base image as diagonal-curve biases")
    p.add_argument("--delta", required=True, help="grid of learned deltas (.mcpm)")
    p.add_argument("--base", required=True, help="base image at lattice resolution")
    p.add_argument("--out", required=True)

    p = sub.add_parser("misalign", help="replicate-pad and randomly crop a grid")
    p.add_argument("--grid", required=True)
    p.add_argument("--pad", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("downsample", help="bilinear resample an image")
    p.add_argument("--image", required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("gray", help="convert an image to single-channel luma")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("brightness", help="match content channel means to style")
    p.add_argument("--content", required=True)
    p.add_argument("--style", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("cost", help="MAC counts for an architecture spec")
    p.add_argument("--arch", required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--mct", action="store_true", help="also cost the curve-grid variant")
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--grid-h", type=int, default=256)
    p.add_argument("--grid-w", type=int, default=256)

    p = sub.add_parser("bench", help="throughput of translate at multiple sizes")
    p.add_argument("--grid", required=True)
    p.add_argument("--sizes", required=True, help="comma-separated HxW list, e.g. 1920x1080,3840x2160")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--warmup", type=int, default=1)
    p.add_argument("--csv-out", help="write the CSV here instead of stdout")

    return parser


def _cmd_apply(args) -> None:
    grid = _read_grid(args.grid)
    img = _read_image(args.image)
    cfg = lattice.TranslatorConfig(c_max=grid.c_max, clamp_output=not args.no_clamp)
    _write_image(args.out, lattice.translate(grid, img, cfg))


def _cmd_synth(args) -> None:
    grid = compose.synth_grid(
        args.kind,
        args.grid_h,
        args.grid_w,
        args.m,
        args.c_max,
        gamma=args.gamma,
        gamma_left=args.gamma0,
        gamma_right=args.gamma1,
    )
    _write_grid(args.out, grid)


def _cmd_compose(args) -> None:
    _write_grid(args.out, compose.compose_base(_read_grid(args.delta), _read_image(args.base)))


def _cmd_misalign(args) -> None:
    _write_grid(args.out, compose.misalign(_read_grid(args.grid), args.pad, args.seed))


def _cmd_downsample(args) -> None:
    _write_image(args.out, image.downsample(_read_image(args.image), args.h, args.w))


def _cmd_gray(args) -> None:
    _write_image(args.out, image.to_grayscale(_read_image(args.in_path)))


def _cmd_brightness(args) -> None:
    _write_image(args.out, image.match_brightness(_read_image(args.content), _read_image(args.style)))


def _cmd_cost(args) -> None:
    arch = costmodel.load_arch(args.arch)
    print(f"fcn_macs {costmodel.macs_fcn(arch, args.h, args.w)}")
    if args.mct:
        cost = costmodel.macs_mct(arch, args.m, args.grid_h, args.grid_w, args.h, args.w)
        print(f"backbone_macs {cost.backbone}")
        print(f"head_delta_macs {cost.head_delta}")
        print(f"slicing_macs {cost.slicing}")
        print(f"total_macs {cost.total}")


def _cmd_bench(args) -> None:
    report = bench.bench_translate(
        _read_grid(args.grid), args.sizes_parsed, args.repeats, args.warmup
    )
    csv = report.to_csv()
    if args.csv_out:
        Path(args.csv_out).write_text(csv)
    else:
        sys.stdout.write(csv)
    for label, message in report.errors:
        print(f"error: {label}: {message}", file=sys.stderr)


_COMMANDS = {
    "apply": _cmd_apply,
    "synth": _cmd_synth,
    "compose": _cmd_compose,
    "misalign": _cmd_misalign,
    "downsample": _cmd_downsample,
    "gray": _cmd_gray,
    "brightness": _cmd_brightness,
    "cost": _cmd_cost,
    "bench": _cmd_bench,
}


def _validate_args(args) -> str | None:
    """Argument-value checks that must fail before any file is touched."""
    if args.command == "synth":
        if args.kind == "gamma" and args.gamma is None:
            return "synth --kind gamma requires --gamma"
        if args.kind == "spatial_gamma" and (args.gamma0 is None or args.gamma1 is None):
            return "synth --kind spatial_gamma requires --gamma0 and --gamma1"
        if args.grid_h < 1 or args.grid_w < 1 or args.m < 1:
            return "grid dimensions and knot count must be >= 1"
    elif args.command == "bench":
        try:
            args.sizes_parsed = _parse_sizes(args.sizes)
        except ConfigError as exc:
            return str(exc)
        if args.repeats < 3:
            return "--repeats must be >= 3"
        if args.warmup < 0:
            return "--warmup must be >= 0"
    elif args.command == "misalign" and args.pad < 0:
        return "--pad must be >= 0"
    elif args.command == "downsample" and (args.h < 1 or args.w < 1):
        return "target dimensions must be >= 1"
    elif args.command == "cost" and (args.h < 1 or args.w < 1):
        return "input dimensions must be >= 1"
    return None


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    problem = _validate_args(args)
    if problem is not None:
        print(f"error: {problem}", file=sys.stderr)
        return 2
    try:
        _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
