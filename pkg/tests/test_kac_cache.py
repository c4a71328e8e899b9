"""
Unit tests for the append-only Kac polynomial cache.
"""

from kac_cover.kac_cache import KacCache, cached_kac
from kac_cover.qseries import q
from kac_cover.quiver import Quiver


def _make_store(tmp_path, text: str = "") -> KacCache:
    path = tmp_path / "kac.tsv"
    if text:
        path.write_text(text, encoding="utf-8")
    return KacCache(str(path))


class TestKacCache:
    def test_second_call_hits(self, tmp_path, k2):
        store = _make_store(tmp_path)
        first = cached_kac(store, k2, (1, 1))
        second = cached_kac(store, k2, (1, 1))
        assert first.polynomial == second.polynomial == q + 1
        assert (store.misses, store.hits) == (1, 1)

    def test_persists_across_instances(self, tmp_path, k2):
        cached_kac(_make_store(tmp_path), k2, (1, 1))
        reopened = KacCache(str(tmp_path / "kac.tsv"))
        assert len(reopened) == 1
        result = cached_kac(reopened, k2, (1, 1))
        assert result.value_at_one == 2
        assert reopened.hits == 1

    def test_distinct_vectors_are_distinct_entries(self, tmp_path, k2):
        store = _make_store(tmp_path)
        cached_kac(store, k2, (1, 1))
        cached_kac(store, k2, (1, 0))
        assert len(store) == 2

    def test_corrupt_entry_is_recomputed(self, tmp_path, k2):
        key = KacCache.key_for(k2, (1, 1))
        store = _make_store(tmp_path, f"{key[0]}\t{key[1]}\tq^^2\n")
        result = cached_kac(store, k2, (1, 1))
        assert result.rendering == "q+1"
        assert store.misses == 1
        assert store.get(key) == "q+1"
        assert KacCache(store.path).get(key) == "q+1"

    def test_short_lines_are_skipped(self, tmp_path):
        store = _make_store(tmp_path, "garbage\nabc\ti=1\n")
        assert len(store) == 0

    def test_key_ignores_declaration_order(self, k3):
        relabelled = Quiver.from_triples(("j", "i"), [(f"a{k}", "i", "j") for k in (1, 2, 3)])
        assert KacCache.key_for(relabelled, (3, 2)) == KacCache.key_for(k3, (2, 3))

    def test_without_store(self, k2):
        assert cached_kac(None, k2, (1, 1)).value_at_one == 2
