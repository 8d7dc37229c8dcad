"""Command line interface for the experiment harness.

Subcommands: ``run`` (one grid point, record to stdout or CSV), ``sweep``
(grid of points to CSV) and ``figures-data`` (the three figure CSVs).
Flag values may also come from a flat key-value config file via ``--config``;
explicit flags override the file.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Optional

from .harness import (
    CSV_HEADER,
    ExperimentConfig,
    figures_data,
    load_config_file,
    run_experiment,
    sweep,
    write_records,
)

_CONFIG_KEYS = (
    "scheme", "agents", "m", "tau", "noise_db", "noise_db_range", "runs",
    "seed", "prefix_length", "max_iterations", "initial_estimate", "topology",
    "out",
)


def _int_list(text: str):
    """'8' -> 8; '2,3,4' -> [2, 3, 4]."""
    parts = [p.strip() for p in str(text).split(",") if p.strip()]
    if not parts:
        raise ValueError(f"empty integer list: {text!r}")
    values = [int(p) for p in parts]
    return values if len(values) > 1 else values[0]


def _noise_grid(text: str) -> list[float]:
    """'lo:hi:step' -> inclusive grid of dB values."""
    try:
        lo, hi, step = (float(p) for p in str(text).split(":"))
    except ValueError as exc:
        raise ValueError(f"expected lo:hi:step, got {text!r}") from exc
    if step <= 0 or hi < lo:
        raise ValueError(f"bad noise range {text!r}")
    count = int(round((hi - lo) / step)) + 1
    return [round(lo + k * step, 10) for k in range(count)]


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key-value config file; flags override it")
    parser.add_argument("--scheme", choices=(
        "scalablemax", "scalablemax-ec", "rb", "rp", "multi-coordinator"))
    parser.add_argument("--agents", help="agent count, or comma list for sweeps")
    parser.add_argument("--m", type=int, help="survivor budget m (even)")
    parser.add_argument("--tau", help="EC termination threshold, or comma list")
    parser.add_argument("--noise-db", type=float,
                        help="noise power in dB (omit for a noiseless channel)")
    parser.add_argument("--noise-db-range", metavar="LO:HI:STEP",
                        help="dB grid; write as --noise-db-range=-5.5:15.5:1.5")
    parser.add_argument("--runs", type=int, help="Monte Carlo runs per grid point")
    parser.add_argument("--seed", type=int, help="base seed for the run streams")
    parser.add_argument("--prefix-length", type=int,
                        help="explicit input prefix bits per agent (default 0)")
    parser.add_argument("--max-iterations", type=int, help="iteration cap per run")
    parser.add_argument("--initial-estimate", metavar="BITS",
                        help="warm-start estimate S(0), e.g. 101 (default empty)")
    parser.add_argument("--topology", metavar="FILE",
                        help="edge-list topology file (multi-coordinator, rb, rp)")
    parser.add_argument("--out", metavar="CSV", help="output CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scalablemax",
        description="Max-consensus protocol simulator over a modeled wireless "
        "multiple-access channel, with gossip baselines and experiment sweeps.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    run_p = commands.add_parser("run", help="run one experiment configuration")
    _add_experiment_flags(run_p)
    sweep_p = commands.add_parser("sweep", help="run a grid and write a CSV")
    _add_experiment_flags(sweep_p)
    fig_p = commands.add_parser(
        "figures-data", help="emit the three figure CSVs (noise sweep, EC scaling, RB/RP)"
    )
    fig_p.add_argument("--out-dir", default="figures-data")
    fig_p.add_argument("--runs", type=int, default=1000,
                       help="runs per noise-sweep grid point")
    fig_p.add_argument("--scaling-runs", type=int, default=1000)
    fig_p.add_argument("--rp-runs", type=int, default=2000)
    fig_p.add_argument("--seed", type=int, default=1)
    return parser


def _merge_options(args: argparse.Namespace) -> dict:
    merged: dict = {}
    if args.config:
        file_options = load_config_file(args.config)
        unknown = set(file_options) - set(_CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_options)
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _build_config(options: dict) -> tuple[ExperimentConfig, Optional[str]]:
    if "noise_db" in options and "noise_db_range" in options:
        raise ValueError("give either --noise-db or --noise-db-range, not both")
    if "noise_db_range" in options:
        noise_db = _noise_grid(options["noise_db_range"])
    elif "noise_db" in options:
        noise_db = float(options["noise_db"])
    else:
        noise_db = -math.inf
    tau = options.get("tau")
    config = ExperimentConfig(
        agents=_int_list(options.get("agents", 1000)),
        m=int(options.get("m", 8)),
        scheme=str(options.get("scheme", "scalablemax")),
        tau=None if tau in (None, "") else _int_list(tau),
        noise_db=noise_db,
        runs=int(options.get("runs", 10_000)),
        base_seed=int(options.get("seed", 1)),
        prefix_length=int(options.get("prefix_length", 0)),
        max_iterations=(
            int(options["max_iterations"]) if "max_iterations" in options else None
        ),
        initial_estimate=str(options.get("initial_estimate", "")),
        topology_path=options.get("topology"),
    )
    return config, options.get("out")


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "figures-data":
            paths = figures_data(
                args.out_dir,
                sweep_runs=args.runs,
                scaling_runs=args.scaling_runs,
                rp_runs=args.rp_runs,
                base_seed=args.seed,
            )
            for path in paths:
                print(path)
            return 0
        config, out_path = _build_config(_merge_options(args))
        if args.command == "run":
            config.require_scalar()
            record = run_experiment(config)
            if out_path:
                write_records([record], out_path)
                print(out_path)
            else:
                print(CSV_HEADER)
                print(record.csv_row())
            return 0
        # sweep
        if not out_path:
            raise ValueError("sweep requires --out")
        records = sweep(config, out_path)
        print(f"wrote {len(records)} records to {out_path}")
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
