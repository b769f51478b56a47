"""Batch sweeps: reservoir/initial-state scenarios to CSV rows and meshes.

A scenario fixes the reservoir (minus N), the shared initial state, a
time grid and a list of qubit numbers N; the runner emits one row per
(N, t) with the damping probability, ellipsoid semiaxes, center height
and steered-coherence value, plus full surface meshes at selected times.
Everything is deterministic, so re-running a scenario reproduces the
output files byte for byte.
"""

from __future__ import annotations

import configparser
import json
import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .coherence import msc_bruteforce, msc_closed_form, reference_basis_of
from .linalg import partial_trace
from .reservoir import (
    InitialStateParams,
    ReservoirParams,
    closed_form_ellipsoid,
    evolve_bipartite,
    initial_state,
    kraus_pair,
    survival_amplitude,
)
from .steering import ellipsoid_surface_points

MESH_N_THETA = 32
MESH_N_PHI = 64

_RANGE_SLACK = 1e-9
_ANCHOR_TIMES = (0.8, 1.6)

MSC_MODES = ("paper", "strict", "bruteforce")
CHANNEL_MODES = ("paper", "exact")


class ConfigError(ValueError):
    """A scenario configuration problem, with the offending field named."""


class InvariantViolationError(RuntimeError):
    """An emitted value left its physical range."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Sweep definition; defaults reproduce the reference figure data
    (lam=1, gamma0=8, q=0.8, theta=pi/3, N in {1, 3, 6})."""

    lam: float = 1.0
    gamma0: float = 8.0
    omega0: float = 1.0
    n_list: tuple[int, ...] = (1, 3, 6)
    q: float = 0.8
    theta: float = math.pi / 3.0
    t_max: float = 5.0
    n_steps: int = 501
    msc_mode: str = "paper"
    channel_mode: str = "paper"
    mesh_times: tuple[float, ...] = (0.0, 0.8, 1.6)
    output_dir: str = "out"
    grid_size: int = 10_000


@dataclass(frozen=True)
class TimeSeriesRow:
    """One sweep sample.  ``degenerate_basis`` marks rows whose strict-mode
    value came from the infimum fallback; it is not part of the CSV."""

    t: float
    n_qubits: int
    p: float
    s1: float
    s2: float
    s3: float
    center_z: float
    msc: float
    degenerate_basis: bool = False


@dataclass(frozen=True)
class MeshRecord:
    """Ellipsoid surface snapshot for one (N, t)."""

    t: float
    n_qubits: int
    center: np.ndarray
    semiaxes: np.ndarray
    orientation: np.ndarray
    points: np.ndarray


def _config_error(section: str, key: str, problem: str) -> ConfigError:
    return ConfigError(f"[{section}] {key}: {problem}")


_SCHEMA = {
    "reservoir": ("lambda", "gamma0", "omega0", "n_list"),
    "initial": ("q", "theta"),
    "sweep": ("t_max", "n_steps", "msc_mode", "channel_mode", "grid_size", "mesh_times", "n_list"),
    "output": ("output_dir",),
}


def load_config(path: str) -> ScenarioConfig:
    """Parse a key = value scenario file; unset keys take figure defaults."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                raise _config_error(section, key, "unknown key")

    def get_float(section: str, key: str, default: float) -> float:
        raw = parser.get(section, key, fallback=None)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise _config_error(section, key, f"not a number: {raw!r}") from None

    def get_int(section: str, key: str, default: int) -> int:
        raw = parser.get(section, key, fallback=None)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise _config_error(section, key, f"not an integer: {raw!r}") from None

    base = ScenarioConfig()
    n_list = base.n_list
    raw = parser.get("sweep", "n_list", fallback=None)
    if raw is None:
        raw = parser.get("reservoir", "n_list", fallback=None)
    if raw is not None:
        try:
            n_list = tuple(int(tok.strip()) for tok in raw.split(",") if tok.strip())
        except ValueError:
            raise _config_error("reservoir", "n_list", f"not a comma list of integers: {raw!r}") from None

    mesh_times = base.mesh_times
    raw = parser.get("sweep", "mesh_times", fallback=None)
    if raw is not None:
        try:
            mesh_times = tuple(float(tok.strip()) for tok in raw.split(",") if tok.strip())
        except ValueError:
            raise _config_error("sweep", "mesh_times", f"not a comma list of numbers: {raw!r}") from None

    config = ScenarioConfig(
        lam=get_float("reservoir", "lambda", base.lam),
        gamma0=get_float("reservoir", "gamma0", base.gamma0),
        omega0=get_float("reservoir", "omega0", base.omega0),
        n_list=n_list,
        q=get_float("initial", "q", base.q),
        theta=get_float("initial", "theta", base.theta),
        t_max=get_float("sweep", "t_max", base.t_max),
        n_steps=get_int("sweep", "n_steps", base.n_steps),
        msc_mode=parser.get("sweep", "msc_mode", fallback=base.msc_mode),
        channel_mode=parser.get("sweep", "channel_mode", fallback=base.channel_mode),
        mesh_times=mesh_times,
        output_dir=parser.get("output", "output_dir", fallback=base.output_dir),
        grid_size=get_int("sweep", "grid_size", base.grid_size),
    )
    validate_config(config)
    return config


def validate_config(config: ScenarioConfig) -> None:
    """Raise :class:`ConfigError` naming the first offending field."""
    if config.lam <= 0.0:
        raise _config_error("reservoir", "lambda", f"must be positive, got {config.lam}")
    if config.gamma0 <= 0.0:
        raise _config_error("reservoir", "gamma0", f"must be positive, got {config.gamma0}")
    if not config.n_list:
        raise _config_error("reservoir", "n_list", "must list at least one qubit count")
    for n in config.n_list:
        if n < 1:
            raise _config_error("reservoir", "n_list", f"entries must be >= 1, got {n}")
    if not 0.0 <= config.q <= 1.0:
        raise _config_error("initial", "q", f"must lie in [0, 1], got {config.q}")
    if not 0.0 <= config.theta <= math.pi:
        raise _config_error("initial", "theta", f"must lie in [0, pi], got {config.theta}")
    if config.t_max <= 0.0:
        raise _config_error("sweep", "t_max", f"must be positive, got {config.t_max}")
    if config.n_steps < 2:
        raise _config_error("sweep", "n_steps", f"must be >= 2, got {config.n_steps}")
    if config.msc_mode not in MSC_MODES:
        raise _config_error("sweep", "msc_mode", f"must be one of {MSC_MODES}, got {config.msc_mode!r}")
    if config.channel_mode not in CHANNEL_MODES:
        raise _config_error("sweep", "channel_mode", f"must be one of {CHANNEL_MODES}, got {config.channel_mode!r}")
    if config.grid_size < 8:
        raise _config_error("sweep", "grid_size", f"must be >= 8, got {config.grid_size}")
    for mt in config.mesh_times:
        if not 0.0 <= mt <= config.t_max:
            raise _config_error("sweep", "mesh_times", f"{mt} outside [0, t_max={config.t_max}]")


def time_grid(t_max: float, n_steps: int) -> np.ndarray:
    """Uniform grid on [0, t_max], with the anchor times 0.8 and 1.6
    inserted when t_max reaches them (so sweeps always sample them)."""
    grid = list(np.linspace(0.0, t_max, n_steps))
    for anchor in _ANCHOR_TIMES:
        if anchor <= t_max and not any(abs(t - anchor) < 1e-12 for t in grid):
            grid.append(anchor)
    return np.array(sorted(grid))


def _check_row(row: TimeSeriesRow) -> None:
    checks = (("p", row.p), ("s1", row.s1), ("s2", row.s2), ("s3", row.s3), ("msc", row.msc))
    for name, value in checks:
        if not 0.0 <= value <= 1.0 + _RANGE_SLACK:
            raise InvariantViolationError(
                f"{name} = {value!r} outside [0, 1] at t={row.t}, N={row.n_qubits}"
            )


def _survival_probability(t: float, params: ReservoirParams) -> tuple[complex, float]:
    """Amplitude and probability with a roundoff-only clamp at 1."""
    g = survival_amplitude(t, params)
    p = abs(g) ** 2
    if p > 1.0 + _RANGE_SLACK:
        raise InvariantViolationError(f"p = {p!r} exceeds 1 at t={t}, N={params.n_qubits}")
    return g, min(p, 1.0)


def run_scenario(config: ScenarioConfig) -> tuple[list[TimeSeriesRow], list[MeshRecord]]:
    """Sweep (N, t), returning rows ordered by (N, t) plus mesh records."""
    validate_config(config)
    init = InitialStateParams(q=config.q, theta=config.theta)
    rho0 = initial_state(init)
    grid = time_grid(config.t_max, config.n_steps)

    rows: list[TimeSeriesRow] = []
    meshes: list[MeshRecord] = []
    for n in config.n_list:
        params = ReservoirParams(
            lam=config.lam, gamma0=config.gamma0, omega0=config.omega0, n_qubits=n
        )
        for t in grid:
            g, p = _survival_probability(float(t), params)
            ell = closed_form_ellipsoid(init, p)
            degenerate = False
            if config.msc_mode == "paper":
                msc = msc_closed_form(ell.semiaxes, mode="paper")
            else:
                rho_t = evolve_bipartite(rho0, kraus_pair(g, mode=config.channel_mode))
                if config.msc_mode == "strict":
                    basis = reference_basis_of(partial_trace(rho_t, keep="B"))
                    if basis.degenerate:
                        degenerate = True
                        msc = msc_bruteforce(rho_t, n_grid=config.grid_size)
                    else:
                        msc = msc_closed_form(ell.semiaxes, mode="strict")
                else:
                    msc = msc_bruteforce(rho_t, n_grid=config.grid_size)
            row = TimeSeriesRow(
                t=float(t),
                n_qubits=n,
                p=p,
                s1=float(ell.semiaxes[0]),
                s2=float(ell.semiaxes[1]),
                s3=float(ell.semiaxes[2]),
                center_z=float(ell.center[2]),
                msc=msc,
                degenerate_basis=degenerate,
            )
            _check_row(row)
            rows.append(row)

        for mt in config.mesh_times:
            _, p = _survival_probability(float(mt), params)
            ell = closed_form_ellipsoid(init, p)
            meshes.append(
                MeshRecord(
                    t=float(mt),
                    n_qubits=n,
                    center=ell.center,
                    semiaxes=ell.semiaxes,
                    orientation=ell.orientation,
                    points=ellipsoid_surface_points(ell, MESH_N_THETA, MESH_N_PHI),
                )
            )
    return rows, meshes


def detect_backflow(rows: list[TimeSeriesRow]) -> list[tuple[float, float]]:
    """Maximal intervals where p(t) strictly increases, for one N."""
    if not rows:
        return []
    n_values = {row.n_qubits for row in rows}
    if len(n_values) != 1:
        raise ValueError(f"rows mix several N values: {sorted(n_values)}")
    times = [row.t for row in rows]
    if any(t1 >= t2 for t1, t2 in zip(times, times[1:])):
        raise ValueError("rows are not sorted by strictly increasing t")
    intervals: list[tuple[float, float]] = []
    start = None
    for k in range(len(rows) - 1):
        rising = rows[k + 1].p > rows[k].p
        if rising and start is None:
            start = rows[k].t
        if not rising and start is not None:
            intervals.append((start, rows[k].t))
            start = None
    if start is not None:
        intervals.append((start, rows[-1].t))
    return intervals


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def export_csv(rows: list[TimeSeriesRow], path: str) -> None:
    """Write the sweep as CSV (17 significant digits, byte reproducible)."""
    lines = ["t,N,p,s1,s2,s3,center_z,msc"]
    for r in rows:
        lines.append(
            ",".join(
                [_fmt(r.t), str(r.n_qubits), _fmt(r.p), _fmt(r.s1), _fmt(r.s2),
                 _fmt(r.s3), _fmt(r.center_z), _fmt(r.msc)]
            )
        )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def export_mesh_json(meshes: list[MeshRecord], path: str) -> None:
    """Write mesh frames as a JSON array.

    Each frame is {t, N, center:[3], semiaxes:[3], orientation:[9 row-major],
    points:[[x, y, z] ...]} with points in theta-major 32x64 order.
    """
    frames = []
    for m in meshes:
        frames.append(
            {
                "t": m.t,
                "N": m.n_qubits,
                "center": [float(v) for v in m.center],
                "semiaxes": [float(v) for v in m.semiaxes],
                "orientation": [float(v) for v in m.orientation.reshape(-1)],
                "points": [[float(v) for v in pt] for pt in m.points],
            }
        )
    with open(path, "w", newline="") as fh:
        json.dump(frames, fh, separators=(",", ":"))
        fh.write("\n")


def read_rows_csv(path: str) -> list[TimeSeriesRow]:
    """Load rows previously written by :func:`export_csv`."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    if not lines or lines[0] != "t,N,p,s1,s2,s3,center_z,msc":
        raise ValueError(f"{path}: missing or unexpected CSV header")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 8:
            raise ValueError(f"{path}: malformed row {ln!r}")
        rows.append(
            TimeSeriesRow(
                t=float(parts[0]), n_qubits=int(parts[1]), p=float(parts[2]),
                s1=float(parts[3]), s2=float(parts[4]), s3=float(parts[5]),
                center_z=float(parts[6]), msc=float(parts[7]),
            )
        )
    return rows


def write_outputs(config: ScenarioConfig, out_dir: str | None = None) -> tuple[str, str]:
    """Run the scenario and write timeseries.csv and ellipsoids.json."""
    target = out_dir if out_dir is not None else config.output_dir
    if target != config.output_dir:
        config = replace(config, output_dir=target)
    os.makedirs(target, exist_ok=True)
    rows, meshes = run_scenario(config)
    csv_path = os.path.join(target, "timeseries.csv")
    json_path = os.path.join(target, "ellipsoids.json")
    export_csv(rows, csv_path)
    export_mesh_json(meshes, json_path)
    return csv_path, json_path
