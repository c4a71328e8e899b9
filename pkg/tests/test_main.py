"""
End-to-end tests for the command-line interface.
"""

import pytest

from kac_cover.main import EXIT_FAILED, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE, main


def _run(capsys, *argv) -> tuple[int, list[str], str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.splitlines(), captured.err


class TestKacCommand:
    def test_kronecker(self, capsys):
        code, lines, _ = _run(capsys, "kac", "--quiver", "kronecker:3", "--dim", "2,3")
        assert code == EXIT_OK
        assert lines == ["q^6+q^5+3*q^4+4*q^3+5*q^2+3*q+2", "a(1)=19"]

    def test_simple_root(self, capsys):
        code, lines, _ = _run(capsys, "kac", "--quiver", "path:1", "--dim", "1")
        assert code == EXIT_OK
        assert lines[0] == "1"

    def test_machine(self, capsys):
        code, lines, _ = _run(capsys, "kac", "--quiver", "kronecker:2", "--dim", "1,1", "--machine")
        assert lines == ["q+1\t2"]

    def test_multiples(self, capsys):
        code, lines, _ = _run(capsys, "kac", "--quiver", "kronecker:2", "--dim", "1,1", "--multiples", "2", "--machine")
        assert code == EXIT_OK
        assert [line.split("\t")[2] for line in lines] == ["2", "2"]

    def test_cache_file(self, capsys, tmp_path):
        cache = str(tmp_path / "kac.tsv")
        _run(capsys, "--cache", cache, "kac", "--quiver", "kronecker:2", "--dim", "1,1")
        code, lines, _ = _run(capsys, "kac", "--quiver", "kronecker:2", "--dim", "1,1", "--cache", cache)
        assert code == EXIT_OK
        assert lines[0] == "q+1"
        assert len((tmp_path / "kac.tsv").read_text().splitlines()) == 1


class TestInputErrors:
    def test_bad_dimension(self, capsys):
        code, lines, err = _run(capsys, "kac", "--quiver", "kronecker:3", "--dim", "1,2,3")
        assert code == EXIT_INPUT
        assert lines == []
        assert "error:" in err

    def test_parse_error_has_line(self, capsys, tmp_path):
        target = tmp_path / "bad.quiver"
        target.write_text("vertex i\narrow a i j\n", encoding="utf-8")
        code, _, err = _run(capsys, "root", "--quiver", str(target), "--dim", "1")
        assert code == EXIT_INPUT
        assert "line 2" in err

    def test_growth_domain(self, capsys):
        code, _, _ = _run(capsys, "trees", "growth", "--m", "3", "--k", "5", "--dmax", "3")
        assert code == EXIT_INPUT

    def test_node_cap(self, capsys):
        code, _, _ = _run(capsys, "cover", "enumerate", "--quiver", "kronecker:3", "--dim", "2,3", "--node-cap", "5")
        assert code == EXIT_RESOURCE


class TestOtherCommands:
    def test_root(self, capsys):
        code, lines, _ = _run(capsys, "root", "--quiver", "kronecker:2", "--dim", "1,1", "--machine")
        assert lines == ["imaginary\t0"]

    def test_cover_enumerate(self, capsys):
        code, lines, _ = _run(capsys, "cover", "enumerate", "--quiver", "kronecker:3", "--dim", "1,1")
        assert code == EXIT_OK
        assert lines[-1] == "classes=3"

    def test_cover_verify(self, capsys):
        code, lines, _ = _run(capsys, "cover", "verify", "--quiver", "kronecker:3", "--dim", "2,3")
        assert code == EXIT_OK
        assert lines[-1] == "lhs=19 rhs=19 OK"
        assert len(lines) == 20

    def test_cover_verify_all_classes(self, capsys):
        code, lines, _ = _run(capsys, "cover", "verify", "--quiver", "kronecker:3", "--dim", "2,3", "--all-classes", "--machine")
        assert code == EXIT_OK
        assert lines[-1] == "total\t19\t19\tOK"

    def test_trees_spanning(self, capsys):
        _, lines, _ = _run(capsys, "trees", "spanning", "--quiver", "cycle:3")
        assert lines == ["3"]

    def test_trees_thin_check(self, capsys):
        code, lines, _ = _run(capsys, "trees", "thin-check", "--quiver", "kronecker:3", "--machine")
        assert code == EXIT_OK
        assert lines == ["3\t3\tOK"]

    def test_trees_coverthin(self, capsys):
        _, lines, _ = _run(capsys, "trees", "coverthin", "--m", "3", "--d", "2", "--e", "3")
        assert lines == ["18"]

    def test_trees_growth(self, capsys, tmp_path):
        code, lines, _ = _run(capsys, "trees", "growth", "--m", "3", "--dmax", "4", "--machine", "--plot-dir", str(tmp_path))
        assert code == EXIT_OK
        assert len(lines) == 4
        assert (tmp_path / "growth_m3_k1.png").exists()

    def test_trees_exceptional(self, capsys):
        _, lines, _ = _run(capsys, "trees", "exceptional", "--quiver", "kronecker:3", "--dim", "2,3")
        assert lines == ["count=19"]

    def test_trees_bound_table(self, capsys):
        _, lines, _ = _run(capsys, "trees", "bound-table", "--m", "3", "--dims", "2,3", "1,2", "--machine")
        assert lines == ["3\t2\t3\t18\t19\tTrue", "3\t1\t2\t3\t3\tTrue"]

    def test_oracle_brute(self, capsys):
        code, lines, _ = _run(capsys, "oracle", "brute", "--quiver", "kronecker:2", "--dim", "1,1", "--p", "3")
        assert code == EXIT_OK
        assert lines == ["abs_indec=4 engine=4 OK"]

    def test_oracle_trees(self, capsys):
        _, lines, _ = _run(capsys, "oracle", "trees", "--m", "3", "--d", "2", "--e", "3")
        assert lines == ["18"]

    def test_oracle_sweep(self, capsys):
        code, lines, _ = _run(capsys, "oracle", "sweep", "--max-total-dim", "1", "--primes", "2", "--machine")
        assert code == EXIT_OK
        assert all(line.endswith("OK") for line in lines)

    def test_missing_command(self):
        with pytest.raises(SystemExit):
            main([])

    @pytest.mark.slow
    def test_kronecker_4_verify(self, capsys):
        code, lines, _ = _run(capsys, "cover", "verify", "--quiver", "kronecker:4", "--dim", "2,4")
        assert code == EXIT_OK
        assert lines[-1] == "lhs=125 rhs=125 OK"


def test_exit_code_constants():
    assert (EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_RESOURCE) == (0, 1, 2, 3)
