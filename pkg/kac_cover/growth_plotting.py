"""
Plot the empirical growth ln(ct)/d of cover-thin counts against its limit.
"""

import argparse
import os
from fractions import Fraction

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

from kac_cover.trees import GROWTH_COLUMNS, growth_table

PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
DEFAULT_PLOTS_DIR = os.path.join(PROJECT_ROOT, "plots")


def build_output_path(m: int, k, plots_dir: str = DEFAULT_PLOTS_DIR) -> str:
    """Image path named after the Kronecker parameter and the slope k."""
    slope = str(Fraction(k)).replace("/", "_")
    return os.path.join(plots_dir, f"growth_m{m}_k{slope}.png")


def plot_growth_profile(table: pd.DataFrame, m: int, k, plots_dir: str = DEFAULT_PLOTS_DIR) -> str:
    """Save ln(ct)/d per d with the limiting value as a horizontal line."""
    missing = set(GROWTH_COLUMNS).difference(table.columns)
    if missing:
        raise ValueError(f"Growth table missing columns: {sorted(missing)}")
    if table.empty:
        raise ValueError("Growth table is empty")

    os.makedirs(plots_dir, exist_ok=True)
    output_path = build_output_path(m, k, plots_dir=plots_dir)
    bound = float(table["bound"].iloc[0])

    fig, ax = plt.subplots(figsize=(10, 5))
    ax.plot(
        table["d"],
        table["log_ct_over_d"],
        color="#4e79a7",
        marker="o",
        linewidth=2.0,
        label="ln(ct) / d",
    )
    ax.axhline(bound, color="#e15759", linewidth=1.5, linestyle="--", label=f"limit = {bound:.4f}")
    ax.set_xlabel("d")
    ax.set_ylabel("ln(ct) / d")
    ax.set_title(f"Cover-thin tree modules of K({m}), dimension (d, {Fraction(k)}·d)")
    ax.grid(axis="y", linestyle="--", alpha=0.3)
    ax.legend(loc="lower right")

    plt.tight_layout()
    fig.savefig(output_path, dpi=150)
    plt.close(fig)

    return output_path


def main() -> None:
    """CLI entry point for the growth plot."""
    parser = argparse.ArgumentParser(description="Plot ln(ct)/d for cover-thin counts against the limit")
    parser.add_argument("--m", type=int, default=3, help="Number of Kronecker arrows. Default: 3")
    parser.add_argument("--k", type=str, default="1", help="Slope e/d as an integer or fraction. Default: 1")
    parser.add_argument("--dmax", type=int, default=80, help="Largest d. Default: 80")
    parser.add_argument(
        "--plots-dir",
        type=str,
        default=DEFAULT_PLOTS_DIR,
        help="Directory where the plot image is saved. Default: plots",
    )

    args = parser.parse_args()
    table = growth_table(args.m, Fraction(args.k), range(1, args.dmax + 1))
    output_path = plot_growth_profile(table, args.m, Fraction(args.k), plots_dir=args.plots_dir)
    print(f"Saved plot to {output_path}")


if __name__ == "__main__":
    main()
