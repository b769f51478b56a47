"""Command-line front end.

Subcommands:

* ``run <config>``  -- sweep a scenario file, write timeseries.csv and
  ellipsoids.json into the output directory.
* ``figures``       -- same with the built-in figure defaults.
* ``verify``        -- run the independent-oracle checks and report.
* ``backflow <csv>``-- report intervals of rising p(t) per N from a CSV.

Exit codes: 0 success, 2 configuration error, 3 numerical-invariant
violation (including failed verification).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import scenario
from .oracles import analytic_trace, compare_traces, discrete_modes_oracle, volterra_oracle
from .reservoir import ReservoirParams
from .scenario import ConfigError, InvariantViolationError, ScenarioConfig


def _add_sweep_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--msc-mode", choices=scenario.MSC_MODES, help="MSC column mode")
    parser.add_argument("--channel-mode", choices=scenario.CHANNEL_MODES, help="Kraus amplitude mode")
    parser.add_argument("--grid", type=int, help="measurement-sweep grid size for bruteforce mode")


def _apply_flags(config: ScenarioConfig, args: argparse.Namespace) -> ScenarioConfig:
    updates = {}
    if args.msc_mode:
        updates["msc_mode"] = args.msc_mode
    if args.channel_mode:
        updates["channel_mode"] = args.channel_mode
    if args.grid:
        updates["grid_size"] = args.grid
    if updates:
        config = replace(config, **updates)
    scenario.validate_config(config)
    return config


def _cmd_sweep(config: ScenarioConfig, args: argparse.Namespace) -> int:
    config = _apply_flags(config, args)
    csv_path, json_path = scenario.write_outputs(config, out_dir=args.out)
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    return 0


def _cmd_backflow(args: argparse.Namespace) -> int:
    rows = scenario.read_rows_csv(args.csv)
    by_n: dict[int, list[scenario.TimeSeriesRow]] = {}
    for row in rows:
        by_n.setdefault(row.n_qubits, []).append(row)
    for n in sorted(by_n):
        intervals = scenario.detect_backflow(by_n[n])
        if intervals:
            text = ", ".join(f"[{a:.4g}, {b:.4g}]" for a, b in intervals)
        else:
            text = "none"
        print(f"N={n}: {text}")
    return 0


def _cmd_verify() -> int:
    """Check the closed-form amplitude against both independent solvers."""
    failures = 0

    def report(name: str, ok: bool, detail: str) -> None:
        nonlocal failures
        if not ok:
            failures += 1
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")

    for n in (1, 3, 6):
        params = ReservoirParams(lam=1.0, gamma0=8.0, n_qubits=n)
        trace = volterra_oracle(params, t_max=3.0, dt=1e-4)
        diff = compare_traces(trace, analytic_trace(params, trace.times))
        report(f"memory-kernel solver N={n}", diff < 1e-6, f"sup diff {diff:.3e} (< 1e-6)")

    params = ReservoirParams(lam=1.0, gamma0=8.0, n_qubits=1)
    errs = {}
    for k_modes in (2000, 4000):
        trace = discrete_modes_oracle(params, k_modes=k_modes, window=40.0, t_max=2.0, dt=5e-4)
        errs[k_modes] = compare_traces(trace, analytic_trace(params, trace.times))
    report("discrete-bath solver K=2000", errs[2000] < 1e-2, f"sup diff {errs[2000]:.3e} (< 1e-2)")
    ratio = errs[2000] / errs[4000]
    report("discrete-bath refinement", ratio >= 1.8, f"error ratio K=2000/K=4000 = {ratio:.2f} (>= 1.8)")

    return 0 if failures == 0 else 3


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="steerlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="sweep a scenario config file")
    run_parser.add_argument("config", help="path to the scenario file")
    _add_sweep_flags(run_parser)

    figures_parser = sub.add_parser("figures", help="sweep the built-in figure defaults")
    _add_sweep_flags(figures_parser)

    sub.add_parser("verify", help="run the independent-oracle checks")

    backflow_parser = sub.add_parser("backflow", help="report rising-p intervals from a CSV")
    backflow_parser.add_argument("csv", help="timeseries.csv produced by run/figures")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_sweep(scenario.load_config(args.config), args)
        if args.command == "figures":
            return _cmd_sweep(ScenarioConfig(), args)
        if args.command == "verify":
            return _cmd_verify()
        if args.command == "backflow":
            return _cmd_backflow(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolationError as exc:
        print(f"numerical invariant violated: {exc}", file=sys.stderr)
        return 3
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
