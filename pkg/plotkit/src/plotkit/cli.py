"""Console entry points: plot-msc and plot-ellipsoids."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, plot_ellipsoid_frames, plot_msc_curves


def plot_msc_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-msc", description="Plot MSC-vs-time curves from a timeseries CSV."
    )
    parser.add_argument("csv", help="timeseries.csv produced by the simulation CLI")
    parser.add_argument("--out", required=True, help="output image path (e.g. fig.png)")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    spec = FigureSpec(input_path=args.csv, output_path=args.out, kind="msc-curves", dpi=args.dpi)
    try:
        path = plot_msc_curves(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


def plot_ellipsoids_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-ellipsoids",
        description="Plot 3D ellipsoid snapshots from a mesh JSON file "
        "(requested times are colored green/red/blue in order).",
    )
    parser.add_argument("mesh", help="ellipsoids.json produced by the simulation CLI")
    parser.add_argument("--times", default="0,0.8,1.6", help="comma list of snapshot times")
    parser.add_argument("--out", required=True, help="output image path (e.g. fig.png)")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    try:
        times = tuple(float(tok) for tok in args.times.split(",") if tok.strip())
    except ValueError:
        print(f"error: --times must be a comma list of numbers, got {args.times!r}", file=sys.stderr)
        return 2
    spec = FigureSpec(
        input_path=args.mesh, output_path=args.out, kind="ellipsoid-frames", times=times, dpi=args.dpi
    )
    try:
        path = plot_ellipsoid_frames(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(plot_msc_main())
