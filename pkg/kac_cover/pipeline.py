"""
Sweeps over families of small quivers: the covering identity, the
spanning-tree count at thin vectors and the engine invariants, plus the
cover-thin growth profile. Each sweep returns a DataFrame with one row per
instance and a ``status`` column.
"""

from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass, field

import pandas as pd
from tqdm import tqdm

PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))

# Ensure the package is importable when the file is run directly
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from kac_cover.covering import DEFAULT_NODE_CAP, verify_main_theorem
from kac_cover.errors import QuiverInputError
from kac_cover.kac import kac_polynomial
from kac_cover.qseries import is_monic, render_polynomial
from kac_cover.quiver import (
    RootType,
    classify_root,
    dimension_vectors,
    reflect,
    reorientations,
    small_connected_quivers,
    tits_form,
    unit_vector,
)
from kac_cover.trees import (
    growth_table,
    spanning_tree_count,
    spanning_tree_count_bruteforce,
    thin_kac_at_one_check,
)

logger = logging.getLogger(__name__)


@dataclass
class SweepConfig:
    """Configuration for the sweeps run by ``run_sweeps.py``."""

    # Family for the covering identity and the invariant checks
    max_vertices: int = 3
    max_arrows: int = 3
    max_total_dim: int = 4

    # Family for the thin check
    thin_max_vertices: int = 4
    thin_max_arrows: int = 5
    brute_force_max_edges: int = 6

    # Orientation checks only on quivers with at most this many arrows
    orientation_max_arrows: int = 4
    # Reflected vectors larger than this are not recomputed
    reflection_max_total: int = 6

    # Oracle sweep
    oracle_max_total_dim: int = 3
    primes: list[int] = field(default_factory=lambda: [2, 3])

    # Growth table
    growth_m: int = 3
    growth_d_values: list[int] = field(default_factory=lambda: [5, 10, 20, 40, 80])
    # d -> largest allowed relative gap (bound - ln(ct)/d) / bound
    growth_tolerances: dict[int, float] = field(default_factory=lambda: {40: 0.11, 80: 0.10})

    node_cap: int = DEFAULT_NODE_CAP
    threads: int = 1
    progress: bool = True

    # Derived paths, auto-populated in __post_init__ if left empty
    data_dir: str = ""
    plots_dir: str = ""

    def __post_init__(self) -> None:
        if not self.data_dir:
            self.data_dir = os.path.join(PROJECT_ROOT, "data")
        if not self.plots_dir:
            self.plots_dir = os.path.join(PROJECT_ROOT, "plots")

    def output_path(self, job: str) -> str:
        return os.path.join(self.data_dir, f"{job}.csv")


def run_theorem_sweep(cfg: SweepConfig) -> pd.DataFrame:
    """Check a(1) = sum over cover classes for every quiver and vector of the family."""
    cases = [
        (quiver, alpha)
        for quiver in small_connected_quivers(cfg.max_vertices, cfg.max_arrows)
        for alpha in dimension_vectors(len(quiver.vertices), cfg.max_total_dim)
    ]
    rows = []
    for quiver, alpha in tqdm(cases, desc="covering identity", disable=not cfg.progress):
        report = verify_main_theorem(quiver, alpha, node_cap=cfg.node_cap, threads=cfg.threads)
        rows.append(
            {
                "quiver": quiver.describe(),
                "dim": alpha.render(),
                "lhs": report.lhs,
                "rhs": report.rhs,
                "classes": len(report.contributions),
                "status": "OK" if report.ok else "FAIL",
            }
        )
    return pd.DataFrame(rows, columns=["quiver", "dim", "lhs", "rhs", "classes", "status"])


def run_thin_sweep(cfg: SweepConfig) -> pd.DataFrame:
    """Kac polynomial at all-ones against Matrix-Tree, and Matrix-Tree against brute force."""
    quivers = small_connected_quivers(cfg.thin_max_vertices, cfg.thin_max_arrows)
    rows = []
    for quiver in tqdm(quivers, desc="thin check", disable=not cfg.progress):
        check = thin_kac_at_one_check(quiver)
        edges = sum(1 for s, t in quiver.arrow_pairs if s != t)
        brute = spanning_tree_count_bruteforce(quiver) if edges <= cfg.brute_force_max_edges else None
        ok = check.ok and (brute is None or brute == check.spanning_trees)
        rows.append(
            {
                "quiver": quiver.describe(),
                "kac_at_one": check.kac_value,
                "matrix_tree": check.spanning_trees,
                "brute_force": brute,
                "status": "OK" if ok else "FAIL",
            }
        )
    return pd.DataFrame(rows, columns=["quiver", "kac_at_one", "matrix_tree", "brute_force", "status"])


def check_invariants(quiver, alpha, cfg: SweepConfig) -> dict:
    """Root/zero agreement, degree law, orientation and reflection invariance for one instance."""
    poly = kac_polynomial(quiver, alpha)
    root_type = classify_root(quiver, alpha)
    is_root = root_type != RootType.NOT_A_ROOT

    root_ok = is_root == bool(poly)
    degree_ok = True
    if is_root and poly:
        degree_ok = is_monic(poly) and poly.degree() == 1 - tits_form(quiver, alpha)
    if root_type == RootType.REAL:
        degree_ok = degree_ok and tits_form(quiver, alpha) == 1

    orientation_ok = True
    if len(quiver.arrows) <= cfg.orientation_max_arrows:
        orientation_ok = all(kac_polynomial(other, alpha) == poly for other in reorientations(quiver))

    reflection_ok = True
    if is_root:
        for i, vertex in enumerate(quiver.vertices):
            if quiver.has_loop(i) or tuple(alpha) == tuple(unit_vector(quiver, i)):
                continue
            try:
                reflected = reflect(quiver, alpha, vertex)
            except QuiverInputError:
                reflection_ok = False
                continue
            if reflected.total <= cfg.reflection_max_total:
                reflection_ok = reflection_ok and kac_polynomial(quiver, reflected) == poly

    return {
        "quiver": quiver.describe(),
        "dim": alpha.render(),
        "root_type": root_type.value,
        "polynomial": render_polynomial(poly),
        "root_ok": root_ok,
        "degree_ok": degree_ok,
        "orientation_ok": orientation_ok,
        "reflection_ok": reflection_ok,
        "status": "OK" if root_ok and degree_ok and orientation_ok and reflection_ok else "FAIL",
    }


def run_invariant_sweep(cfg: SweepConfig) -> pd.DataFrame:
    cases = [
        (quiver, alpha)
        for quiver in small_connected_quivers(cfg.max_vertices, cfg.max_arrows)
        for alpha in dimension_vectors(len(quiver.vertices), cfg.max_total_dim)
    ]
    rows = [
        check_invariants(quiver, alpha, cfg)
        for quiver, alpha in tqdm(cases, desc="engine invariants", disable=not cfg.progress)
    ]
    return pd.DataFrame(
        rows,
        columns=[
            "quiver", "dim", "root_type", "polynomial",
            "root_ok", "degree_ok", "orientation_ok", "reflection_ok", "status",
        ],
    )


def run_growth_sweep(cfg: SweepConfig) -> pd.DataFrame:
    """ln(ct_{(d,d)}) / d for K(m): increasing in d, below the limit, within tolerance where one is set."""
    table = growth_table(cfg.growth_m, 1, sorted(cfg.growth_d_values))
    table["gap"] = (table["bound"] - table["log_ct_over_d"]) / table["bound"]
    statuses = []
    previous = float("-inf")
    for row in table.itertuples(index=False):
        tolerance = cfg.growth_tolerances.get(row.d)
        ok = previous < row.log_ct_over_d <= row.bound
        if tolerance is not None:
            ok = ok and row.gap < tolerance
        statuses.append("OK" if ok else "FAIL")
        previous = row.log_ct_over_d
    table["status"] = statuses
    return table


def summarize(name: str, table: pd.DataFrame) -> int:
    """Print a one-line summary of a sweep table and return its number of failures."""
    counts = table["status"].value_counts().to_dict() if "status" in table else {}
    failures = int(counts.get("FAIL", 0))
    parts = ", ".join(f"{status}={counts[status]}" for status in sorted(counts))
    print(f"[{name}] {len(table)} instance(s): {parts or 'no status column'}")
    return failures
