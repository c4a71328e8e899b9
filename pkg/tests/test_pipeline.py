"""
Tests for the verification sweeps on reduced families.
"""

import pandas as pd
import pytest

from kac_cover.pipeline import (
    SweepConfig,
    check_invariants,
    run_growth_sweep,
    run_invariant_sweep,
    run_theorem_sweep,
    run_thin_sweep,
    summarize,
)
from kac_cover.quiver import DimVector


def _make_config(tmp_path, **overrides) -> SweepConfig:
    settings = dict(
        max_vertices=2,
        max_arrows=2,
        max_total_dim=2,
        thin_max_vertices=3,
        thin_max_arrows=3,
        progress=False,
        data_dir=str(tmp_path / "data"),
        plots_dir=str(tmp_path / "plots"),
    )
    settings.update(overrides)
    return SweepConfig(**settings)


class TestSweepConfig:
    def test_default_paths(self):
        cfg = SweepConfig()
        assert cfg.data_dir.endswith("data")
        assert cfg.output_path("thin").endswith("thin.csv")


class TestSweeps:
    def test_theorem_sweep(self, tmp_path):
        table = run_theorem_sweep(_make_config(tmp_path))
        assert len(table) > 0
        assert set(table["status"]) == {"OK"}
        assert (table["lhs"] == table["rhs"]).all()

    def test_thin_sweep(self, tmp_path):
        table = run_thin_sweep(_make_config(tmp_path))
        assert set(table["status"]) == {"OK"}
        assert table["brute_force"].notna().all()

    def test_invariant_sweep(self, tmp_path):
        table = run_invariant_sweep(_make_config(tmp_path))
        assert set(table["status"]) == {"OK"}

    def test_check_invariants_kronecker(self, tmp_path, k3):
        row = check_invariants(k3, DimVector([2, 3]), _make_config(tmp_path))
        assert row["root_type"] == "imaginary"
        assert row["polynomial"] == "q^6+q^5+3*q^4+4*q^3+5*q^2+3*q+2"
        assert row["status"] == "OK"

    def test_growth_sweep(self, tmp_path):
        table = run_growth_sweep(_make_config(tmp_path, growth_d_values=[40, 5, 20, 10]))
        assert list(table["d"]) == [5, 10, 20, 40]
        assert set(table["status"]) == {"OK"}
        assert table["gap"].iloc[-1] < 0.11
        assert summarize("growth", table) == 0

    def test_growth_sweep_flags_tolerance(self, tmp_path):
        cfg = _make_config(tmp_path, growth_d_values=[10, 40], growth_tolerances={40: 0.05})
        table = run_growth_sweep(cfg)
        assert list(table["status"]) == ["OK", "FAIL"]
        assert summarize("growth", table) == 1

    def test_summarize_counts_failures(self, capsys):
        table = pd.DataFrame({"status": ["OK", "FAIL", "OK", "SKIPPED"]})
        assert summarize("demo", table) == 1
        assert "FAIL=1" in capsys.readouterr().out

    @pytest.mark.slow
    def test_default_families(self, tmp_path):
        cfg = SweepConfig(progress=False, data_dir=str(tmp_path))
        for runner in (run_theorem_sweep, run_thin_sweep, run_invariant_sweep):
            assert summarize(runner.__name__, runner(cfg)) == 0
