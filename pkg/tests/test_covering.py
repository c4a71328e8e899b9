"""
Unit tests for the covering-quiver enumeration and the a(1) identity.

Core claims:
    - cover arrows shift the character by the arrow's unit vector
    - canonicalize picks one representative per translation class
    - class counts: K(3),(1,1) -> 3; K(3),(2,3) -> 19; K(4),(2,4) -> 121 (108/12/1 by type)
    - a_{Q,alpha}(1) equals the sum of a(1) over the classes
    - dropping the root filter adds only classes that contribute 0
"""

import pytest

from kac_cover import covering
from kac_cover.covering import (
    CoverDim,
    CoverVertex,
    c_map,
    canonicalize,
    class_values,
    compositions,
    cover_arrows_in,
    cover_arrows_out,
    enumerate_compatible,
    is_dtilde4_star,
    shift,
    support_quiver,
    verify_main_theorem,
)
from kac_cover.errors import QuiverInputError, ResourceLimitError
from kac_cover.kac_cache import KacCache
from kac_cover.quiver import Quiver
from kac_cover.quiver_file import loops, path


# -- Helpers -----------------------------------------------------------------

def _make_beta(*entries) -> CoverDim:
    """entries: (base, chi, value) triples."""
    return CoverDim({CoverVertex(base, tuple(chi)): value for base, chi, value in entries})


# -- Cover structure ---------------------------------------------------------

class TestCoverStructure:
    def test_arrows_out(self, k2):
        targets = {target for _, target in cover_arrows_out(k2, CoverVertex("i", (0, 0)))}
        assert targets == {CoverVertex("j", (1, 0)), CoverVertex("j", (0, 1))}

    def test_arrows_in(self, k2):
        sources = {source for _, source in cover_arrows_in(k2, CoverVertex("j", (1, 0)))}
        assert sources == {CoverVertex("i", (0, 0)), CoverVertex("i", (1, -1))}

    def test_character_length_checked(self, k2):
        with pytest.raises(QuiverInputError):
            cover_arrows_out(k2, CoverVertex("i", (0,)))

    def test_entries_positive(self):
        with pytest.raises(QuiverInputError):
            _make_beta(("i", (0, 0), 0))

    def test_c_map(self, k2):
        beta = _make_beta(("i", (0, 0), 1), ("j", (1, 0), 2), ("j", (0, 1), 1))
        assert c_map(k2, beta) == (1, 3)

    def test_support_quiver(self, k2):
        beta = _make_beta(("i", (0, 0), 1), ("j", (1, 0), 1), ("j", (0, 1), 1))
        sub, dim = support_quiver(k2, beta)
        assert sub.vertices == ("i[0.0]", "j[0.1]", "j[1.0]")
        assert sorted(a.id for a in sub.arrows) == ["a1@0.0", "a2@0.0"]
        assert dim == (1, 1, 1)

    def test_support_quiver_ids_serialize(self, k2):
        beta = _make_beta(("i", (0, 0), 1), ("j", (1, 0), 1), ("j", (0, 1), 1))
        sub, _ = support_quiver(k2, beta)
        assert sub.serialize().count("|") == 1
        assert sub.serialize().count(",") == len(sub.vertices) + len(sub.arrows) - 2

    def test_search_walks_cover_arrows(self, k3, monkeypatch):
        calls = {"out": 0, "in": 0}

        def counted(kind, function):
            def wrapper(quiver, vertex):
                calls[kind] += 1
                return function(quiver, vertex)
            return wrapper

        monkeypatch.setattr(covering, "cover_arrows_out", counted("out", covering.cover_arrows_out))
        monkeypatch.setattr(covering, "cover_arrows_in", counted("in", covering.cover_arrows_in))
        assert len(enumerate_compatible(k3, (2, 3))) == 19
        assert calls["out"] > 0
        assert calls["in"] > 0


class TestCanonicalize:
    def test_minimum_is_zero(self):
        beta = canonicalize(_make_beta(("i", (3, -2), 1), ("j", (4, -2), 1)))
        assert beta == _make_beta(("i", (0, 0), 1), ("j", (1, 0), 1))

    def test_shift_invariant(self):
        beta = _make_beta(("i", (0, 0), 2), ("j", (0, 1), 1))
        assert canonicalize(shift(beta, (5, -7))) == canonicalize(beta)

    def test_empty_rejected(self):
        with pytest.raises(QuiverInputError):
            canonicalize(CoverDim({}))

    def test_compositions(self):
        assert list(compositions(4, 2)) == [(1, 3), (2, 2), (3, 1)]
        assert list(compositions(2, 3)) == []
        assert list(compositions(3, 1)) == [(3,)]


# -- Enumeration -------------------------------------------------------------

class TestEnumerate:
    def test_kronecker_thin(self, k3):
        classes = enumerate_compatible(k3, (1, 1))
        assert len(classes) == 3
        assert all((c.n_vertices, c.n_arrows) == (2, 1) for c in classes)

    def test_kronecker_3_23(self, k3):
        classes = enumerate_compatible(k3, (2, 3))
        assert len(classes) == 19
        thick = [c for c in classes if max(c.support_dim) > 1]
        assert len(thick) == 1
        assert sorted(thick[0].support_dim) == [1, 1, 1, 2]

    def test_every_class_maps_to_alpha(self, k3):
        for cls in enumerate_compatible(k3, (2, 3)):
            assert c_map(k3, cls.beta) == (2, 3)

    def test_sorted_and_unique(self, k3):
        keys = [c.serialization for c in enumerate_compatible(k3, (2, 3))]
        assert keys == sorted(set(keys))

    def test_tree_quiver_lifts_once(self, dtilde4):
        classes = enumerate_compatible(dtilde4, (2, 1, 1, 1, 1))
        assert len(classes) == 1
        assert is_dtilde4_star(classes[0])

    def test_single_vertex_multiple(self):
        assert enumerate_compatible(path(1), (2,)) == []
        assert len(enumerate_compatible(path(1), (2,), roots_only=False)) == 1

    def test_disconnected_support_rejected(self):
        with pytest.raises(QuiverInputError):
            enumerate_compatible(Quiver(("i", "j")), (1, 1))

    def test_zero_rejected(self, k3):
        with pytest.raises(QuiverInputError):
            enumerate_compatible(k3, (0, 0))

    def test_node_cap(self, k3):
        with pytest.raises(ResourceLimitError):
            enumerate_compatible(k3, (2, 3), node_cap=5)

    @pytest.mark.slow
    def test_kronecker_4_24_support_types(self, k4):
        report = verify_main_theorem(k4, (2, 4))
        assert len(report.contributions) == 121
        assert sorted(report.support_type_counts().values()) == [1, 12, 108]
        stars = [value for cls, value in report.contributions if is_dtilde4_star(cls)]
        assert stars == [5]


# -- Identity ----------------------------------------------------------------

class TestVerify:
    def test_kronecker_2(self, k2):
        report = verify_main_theorem(k2, (1, 1))
        assert (report.lhs, report.rhs, report.ok) == (2, 2, True)
        assert [value for _, value in report.contributions] == [1, 1]

    def test_kronecker_3(self, k3):
        report = verify_main_theorem(k3, (2, 3))
        assert report.ok
        assert report.lhs == 19
        assert all(value == 1 for _, value in report.contributions)

    def test_jordan(self, jordan):
        report = verify_main_theorem(jordan, (2,))
        assert report.ok
        assert report.lhs == 1

    def test_root_filter_does_not_change_total(self, k3):
        filtered = verify_main_theorem(k3, (2, 3))
        full = verify_main_theorem(k3, (2, 3), roots_only=False)
        assert full.rhs == filtered.rhs
        assert len(full.contributions) >= len(filtered.contributions)
        extra = {c.serialization for c, _ in full.contributions} - {c.serialization for c, _ in filtered.contributions}
        assert all(value == 0 for c, value in full.contributions if c.serialization in extra)

    def test_loops_two(self):
        assert verify_main_theorem(loops(2), (2,)).ok

    def test_render_lines(self, k2):
        report = verify_main_theorem(k2, (1, 1))
        human = report.render_lines()
        assert human[-1] == "lhs=2 rhs=2 OK"
        machine = report.render_lines(machine=True)
        assert machine[-1] == "total\t2\t2\tOK"
        assert all(line.startswith("class\t") for line in machine[:-1])

    def test_store_is_filled(self, tmp_path, k3):
        store = KacCache(str(tmp_path / "kac.tsv"))
        verify_main_theorem(k3, (1, 1), store=store)
        assert store.misses == 4
        again = verify_main_theorem(k3, (1, 1), store=store)
        assert again.ok
        assert store.hits == 4

    def test_threads_agree(self, k3):
        classes = enumerate_compatible(k3, (2, 3))
        assert class_values(classes, threads=2) == class_values(classes, threads=1)

    @pytest.mark.slow
    def test_kronecker_4(self, k4):
        report = verify_main_theorem(k4, (2, 4))
        assert (report.lhs, report.rhs, report.ok) == (125, 125, True)
