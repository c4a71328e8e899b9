"""
Append-only text cache for Kac polynomials.

Each line is ``<quiver hash> TAB <dimension vector> TAB <polynomial>``.
Duplicate keys are allowed; the last line wins. Lines that cannot be read are
skipped and the value is recomputed and appended again.
"""

from __future__ import annotations

import csv
import logging
import os
from typing import Optional, Sequence

import pandas as pd

from kac_cover.kac import KacResult, dim_text, kac_result, quiver_hash
from kac_cover.qseries import parse_polynomial
from kac_cover.quiver import Quiver

logger = logging.getLogger(__name__)

CACHE_COLUMNS = ["quiver_hash", "dim", "polynomial"]


class KacCache:
    """Polynomial store backed by a tab-separated file."""

    def __init__(self, path: str):
        self.path = os.path.abspath(path)
        self.hits = 0
        self.misses = 0
        self._entries: dict[tuple[str, str], str] = {}
        self.load()

    def load(self) -> None:
        self._entries.clear()
        if not os.path.exists(self.path) or os.path.getsize(self.path) == 0:
            return
        try:
            table = pd.read_csv(
                self.path,
                sep="\t",
                header=None,
                names=CACHE_COLUMNS,
                dtype=str,
                quoting=csv.QUOTE_NONE,
                on_bad_lines="skip",
                keep_default_na=False,
            )
        except Exception as exc:
            logger.warning("Failed to read cache %s: %s", self.path, exc)
            return
        # short lines come back with NaN in the missing fields
        table = table.fillna("")
        for row in table.itertuples(index=False):
            if not row.quiver_hash or not row.dim or not row.polynomial:
                logger.warning("Skipping incomplete cache line for %s", row.quiver_hash)
                continue
            self._entries[(row.quiver_hash, row.dim)] = row.polynomial
        logger.info("Loaded %d cache entries from %s", len(self._entries), self.path)

    def __len__(self) -> int:
        return len(self._entries)

    @staticmethod
    def key_for(quiver: Quiver, alpha: Sequence[int]) -> tuple[str, str]:
        return quiver_hash(quiver), dim_text(quiver, alpha)

    def get(self, key: tuple[str, str]) -> Optional[str]:
        return self._entries.get(key)

    def put(self, key: tuple[str, str], rendering: str) -> None:
        directory = os.path.dirname(self.path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(f"{key[0]}\t{key[1]}\t{rendering}\n")
        self._entries[key] = rendering


def cached_kac(store: Optional[KacCache], quiver: Quiver, alpha: Sequence[int]) -> KacResult:
    """``kac_polynomial`` through an optional store; a hit skips the computation."""
    if store is None:
        return kac_result(quiver, alpha)

    key = store.key_for(quiver, alpha)
    text = store.get(key)
    if text is not None:
        try:
            polynomial = parse_polynomial(text)
        except ValueError:
            logger.warning("Corrupt cache entry %s=%r; recomputing", key, text)
        else:
            store.hits += 1
            return KacResult.build(quiver, alpha, polynomial)

    store.misses += 1
    result = kac_result(quiver, alpha)
    store.put(key, result.rendering)
    return result
