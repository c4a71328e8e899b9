#!/usr/bin/env python3
"""
Run the verification sweeps and write one CSV per sweep under data/.

Usage:
    python run_sweeps.py
    python run_sweeps.py --sweep theorem thin           # subset only
    python run_sweeps.py --max-total-dim 3 --threads 4  # smaller family, parallel classes
    python run_sweeps.py --primes 2                     # oracle over F_2 only
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Callable

import pandas as pd

PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, PROJECT_ROOT)

from kac_cover.growth_plotting import plot_growth_profile
from kac_cover.kac import clear_memo
from kac_cover.oracle import oracle_sweep
from kac_cover.pipeline import (
    SweepConfig,
    run_growth_sweep,
    run_invariant_sweep,
    run_theorem_sweep,
    run_thin_sweep,
    summarize,
)


def run_oracle(cfg: SweepConfig) -> pd.DataFrame:
    return oracle_sweep(
        max_total_dim=cfg.oracle_max_total_dim,
        primes=cfg.primes,
        progress=cfg.progress,
    )


def run_growth(cfg: SweepConfig) -> pd.DataFrame:
    table = run_growth_sweep(cfg)
    path = plot_growth_profile(table, cfg.growth_m, 1, plots_dir=cfg.plots_dir)
    print(f"[growth] plot -> {path}")
    return table


# ---------------------------------------------------------------------------
# Sweep registry
# Each entry: (sweep_name, runner)
# ---------------------------------------------------------------------------
ALL_SWEEPS: list[tuple[str, Callable[[SweepConfig], pd.DataFrame]]] = [
    ("theorem",    run_theorem_sweep),
    ("thin",       run_thin_sweep),
    ("invariants", run_invariant_sweep),
    ("oracle",     run_oracle),
    ("growth",     run_growth),
]


def build_config(args: argparse.Namespace) -> SweepConfig:
    return SweepConfig(
        max_total_dim=args.max_total_dim,
        primes=args.primes,
        threads=args.threads,
        progress=not args.quiet,
    )


def main() -> None:
    parser = argparse.ArgumentParser(
        description="Run the covering-identity, thin, invariant, oracle and growth sweeps."
    )
    parser.add_argument(
        "--sweep",
        nargs="+",
        metavar="NAME",
        help=(
            "Run only these sweeps (by name). "
            f"Available: {', '.join(n for n, _ in ALL_SWEEPS)}"
        ),
    )
    parser.add_argument(
        "--max-total-dim",
        type=int,
        default=4,
        help="Largest total dimension in the covering and invariant sweeps. Default: 4",
    )
    parser.add_argument(
        "--primes",
        type=int,
        nargs="+",
        default=[2, 3],
        help="Primes for the oracle sweep. Default: 2 3",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="Worker processes for per-class Kac computations. Default: 1",
    )
    parser.add_argument(
        "--quiet",
        action="store_true",
        help="Hide progress bars.",
    )
    args = parser.parse_args()
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr)

    selected = ALL_SWEEPS
    if args.sweep:
        available = dict(ALL_SWEEPS)
        missing = [n for n in args.sweep if n not in available]
        if missing:
            parser.error(f"Unknown sweep name(s): {', '.join(missing)}")
        selected = [(n, available[n]) for n in args.sweep]

    cfg = build_config(args)
    os.makedirs(cfg.data_dir, exist_ok=True)
    print(f"Running {len(selected)} sweep(s): {[n for n, _ in selected]}")

    failed: list[str] = []
    for name, runner in selected:
        print(f"\n{'='*60}")
        print(f"  Sweep: {name}")
        print(f"{'='*60}")
        try:
            table = runner(cfg)
        except Exception as exc:
            print(f"\n[ERROR] {name}: {exc}")
            failed.append(name)
            continue
        finally:
            clear_memo()
        table.to_csv(cfg.output_path(name), index=False)
        print(f"[{name}] results -> {cfg.output_path(name)}")
        if summarize(name, table):
            failed.append(name)

    print(f"\n{'='*60}")
    if failed:
        print(f"Completed with failures in: {failed}")
    else:
        print(f"All {len(selected)} sweep(s) passed.")
    print(f"{'='*60}")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
