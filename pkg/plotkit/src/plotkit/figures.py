"""Figure builders for the two export formats.

Color convention for ellipsoid snapshots: the requested times map, in
order, to green / red / blue (earliest snapshot green).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .data import frames_at, load_mesh_frames, read_timeseries

TIME_COLORS = ("green", "red", "blue")

_POINT_AXIS_TOL = 1e-9
_PNG_METADATA = {"Software": None}  # keep output bytes reproducible


@dataclass(frozen=True)
class FigureSpec:
    """What to render: input file, figure kind, output path, styling."""

    input_path: str
    output_path: str
    kind: str = "msc-curves"  # or "ellipsoid-frames"
    times: tuple[float, ...] = (0.0, 0.8, 1.6)
    colors: tuple[str, ...] = TIME_COLORS
    dpi: int = 150


def build_msc_figure(rows: list[dict]):
    """One labeled MSC-vs-time curve per N."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for n in sorted({row["N"] for row in rows}):
        series = [(row["t"], row["msc"]) for row in rows if row["N"] == n]
        series.sort()
        ax.plot([s[0] for s in series], [s[1] for s in series], label=f"N={n}")
    ax.set_xlabel("t")
    ax.set_ylabel("MSC")
    ax.set_ylim(bottom=0.0)
    ax.legend()
    fig.tight_layout()
    return fig


def plot_msc_curves(spec: FigureSpec) -> str:
    """Render the MSC curves of a timeseries CSV to an image file."""
    rows = read_timeseries(spec.input_path)
    fig = build_msc_figure(rows)
    fig.savefig(spec.output_path, dpi=spec.dpi, metadata=_PNG_METADATA)
    plt.close(fig)
    return spec.output_path


def _draw_frame(ax, frame: dict, color: str) -> None:
    if float(np.max(frame["semiaxes"])) < _POINT_AXIS_TOL:
        c = frame["center"]
        ax.scatter([c[0]], [c[1]], [c[2]], color=color, s=25, depthshade=False)
        return
    pts = frame["points"]
    ax.plot_surface(
        pts[..., 0], pts[..., 1], pts[..., 2],
        color=color, alpha=0.35, linewidth=0, antialiased=True, shade=True,
    )


def build_ellipsoid_figure(frames: list[dict], times: list[float], colors=TIME_COLORS):
    """One 3D panel per N, nested surfaces colored by snapshot time."""
    if not times:
        raise ValueError("need at least one snapshot time")
    by_n = frames_at(frames, list(times))
    palette = list(colors) + [f"C{k}" for k in range(len(times))]
    fig = plt.figure(figsize=(4.0 * len(by_n), 4.2))
    for panel, (n, selected) in enumerate(sorted(by_n.items()), start=1):
        ax = fig.add_subplot(1, len(by_n), panel, projection="3d")
        for frame, color in zip(selected, palette):
            _draw_frame(ax, frame, color)
        ax.set_title(f"N={n}")
        ax.set_xlim(-1, 1)
        ax.set_ylim(-1, 1)
        ax.set_zlim(-1, 1)
        ax.set_box_aspect((1, 1, 1))
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_zlabel("z")
    fig.tight_layout()
    return fig


def plot_ellipsoid_frames(spec: FigureSpec) -> str:
    """Render mesh-JSON snapshots at the requested times to an image file."""
    frames = load_mesh_frames(spec.input_path)
    fig = build_ellipsoid_figure(frames, list(spec.times), colors=spec.colors)
    fig.savefig(spec.output_path, dpi=spec.dpi, metadata=_PNG_METADATA)
    plt.close(fig)
    return spec.output_path
