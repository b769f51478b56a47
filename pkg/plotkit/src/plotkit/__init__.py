"""Rendering for steerlab's exported CSV/JSON data files."""

from .data import frames_at, load_mesh_frames, read_timeseries
from .figures import (
    TIME_COLORS,
    FigureSpec,
    build_ellipsoid_figure,
    build_msc_figure,
    plot_ellipsoid_frames,
    plot_msc_curves,
)

__all__ = [
    "FigureSpec",
    "TIME_COLORS",
    "build_ellipsoid_figure",
    "build_msc_figure",
    "frames_at",
    "load_mesh_frames",
    "plot_ellipsoid_frames",
    "plot_msc_curves",
    "read_timeseries",
]
__version__ = "0.1.0"
