"""
Unit tests for quiver files, builtins and dimension-vector parsing.
"""

import pytest

from kac_cover.errors import QuiverInputError, QuiverParseError
from kac_cover.quiver_file import (
    builtin_quiver,
    kronecker,
    load_quiver,
    parse_dim,
    parse_quiver,
    render_quiver,
    star,
)

A2_TEXT = "vertex i\nvertex j\narrow a i j\n"


class TestParseQuiver:
    def test_a2(self):
        quiver = parse_quiver(A2_TEXT)
        assert quiver.vertices == ("i", "j")
        assert [(a.id, a.source, a.target) for a in quiver.arrows] == [("a", "i", "j")]

    def test_comments_and_blank_lines(self):
        text = "# two vertices\n\nvertex i\n   \nvertex j\n# one arrow\narrow a i j\n"
        assert parse_quiver(text) == parse_quiver(A2_TEXT)

    def test_undeclared_vertex(self):
        with pytest.raises(QuiverParseError) as info:
            parse_quiver("arrow a i j")
        assert info.value.line_number == 1
        assert str(info.value).startswith("line 1:")

    @pytest.mark.parametrize(
        "text, line",
        [
            ("vertex i\nvertex i\n", 2),
            ("vertex i\narrow a i i\narrow a i i\n", 3),
            ("vertex i\nedge a i i\n", 2),
            ("vertex i j\n", 1),
            ("vertex i\narrow a i\n", 2),
            ("vertex i\nvertex j,k\n", 2),
            ("vertex i\narrow a=b i i\n", 2),
        ],
    )
    def test_malformed(self, text, line):
        with pytest.raises(QuiverParseError) as info:
            parse_quiver(text)
        assert info.value.line_number == line

    def test_empty(self):
        with pytest.raises(QuiverParseError):
            parse_quiver("# nothing\n")

    def test_render(self):
        assert render_quiver(parse_quiver(A2_TEXT)) == "vertex i\nvertex j\narrow a i j\n"


class TestBuiltins:
    def test_kronecker(self):
        assert builtin_quiver("kronecker:3") == kronecker(3)
        assert len(kronecker(3).arrows) == 3

    def test_star(self):
        quiver = star(4)
        assert quiver.vertices[0] == "c"
        assert all(a.target == "c" for a in quiver.arrows)

    def test_families(self):
        assert len(builtin_quiver("cycle:4").arrows) == 4
        assert len(builtin_quiver("path:3").arrows) == 2
        assert builtin_quiver("loops:2").loop_counts == (2,)

    @pytest.mark.parametrize("spec", ["tree:3", "kronecker:x", "cycle:0"])
    def test_rejected(self, spec):
        with pytest.raises(QuiverInputError):
            builtin_quiver(spec)


class TestLoad:
    def test_from_file(self, tmp_path):
        target = tmp_path / "a2.quiver"
        target.write_text(A2_TEXT, encoding="utf-8")
        assert load_quiver(str(target)) == parse_quiver(A2_TEXT)

    def test_builtin(self):
        assert load_quiver("kronecker:2") == kronecker(2)

    def test_missing(self):
        with pytest.raises(QuiverInputError):
            load_quiver("does-not-exist.quiver")


class TestParseDim:
    def test_ok(self, k3):
        assert parse_dim("2,3", k3) == (2, 3)

    @pytest.mark.parametrize("text", ["2", "2,3,4", "a,b", "1,-1"])
    def test_rejected(self, k3, text):
        with pytest.raises(QuiverInputError):
            parse_dim(text, k3)
