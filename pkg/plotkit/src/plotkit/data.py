"""Loading and validation of steerlab's exported file formats.

This package never recomputes physics: every number rendered traces back
to a value in an input file.
"""

from __future__ import annotations

import csv
import json

import numpy as np

TIMESERIES_COLUMNS = ("t", "N", "p", "s1", "s2", "s3", "center_z", "msc")
MESH_FRAME_KEYS = {"t", "N", "center", "semiaxes", "orientation", "points"}

# Surface points are exported on a theta-major latitude/longitude grid.
MESH_GRID_SHAPE = (32, 64)


def read_timeseries(path: str) -> list[dict]:
    """Rows of a timeseries CSV as dicts with numeric values.

    Raises ValueError when required columns are missing or the file has
    no data rows.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [col for col in TIMESERIES_COLUMNS if col not in header]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        rows = []
        for record in reader:
            try:
                parsed = {col: float(record[col]) for col in TIMESERIES_COLUMNS}
            except (TypeError, ValueError):
                raise ValueError(f"{path}: non-numeric row {record!r}") from None
            parsed["N"] = int(parsed["N"])
            rows.append(parsed)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def load_mesh_frames(path: str) -> list[dict]:
    """Frames of a mesh JSON file, with points as (32, 64, 3) arrays."""
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(raw, list) or not raw:
        raise ValueError(f"{path}: expected a non-empty array of frames")
    frames = []
    n_points = MESH_GRID_SHAPE[0] * MESH_GRID_SHAPE[1]
    for k, frame in enumerate(raw):
        if not isinstance(frame, dict) or not MESH_FRAME_KEYS.issubset(frame):
            raise ValueError(f"{path}: frame {k} missing keys {MESH_FRAME_KEYS - set(frame)}")
        points = np.asarray(frame["points"], dtype=float)
        if points.shape != (n_points, 3):
            raise ValueError(
                f"{path}: frame {k} has point array of shape {points.shape}, "
                f"expected ({n_points}, 3)"
            )
        frames.append(
            {
                "t": float(frame["t"]),
                "N": int(frame["N"]),
                "center": np.asarray(frame["center"], dtype=float),
                "semiaxes": np.asarray(frame["semiaxes"], dtype=float),
                "orientation": np.asarray(frame["orientation"], dtype=float).reshape(3, 3),
                "points": points.reshape(*MESH_GRID_SHAPE, 3),
            }
        )
    return frames


def frames_at(frames: list[dict], times: list[float], tol: float = 1e-9) -> dict[int, list[dict]]:
    """Frames grouped by N, restricted to the requested times (in order).

    Raises ValueError when any (N, time) combination is absent.
    """
    by_n: dict[int, list[dict]] = {}
    n_values = sorted({frame["N"] for frame in frames})
    for n in n_values:
        selected = []
        for t in times:
            matches = [f for f in frames if f["N"] == n and abs(f["t"] - t) < tol]
            if not matches:
                raise ValueError(f"no frame at t={t} for N={n}")
            selected.append(matches[0])
        by_n[n] = selected
    return by_n
