"""
Tree-module counts: spanning trees for thin dimension vectors, cover-thin
tree modules of the generalized Kronecker quiver K(m), and the exponential
growth bound for them.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import networkx as nx
import pandas as pd
from scipy.special import xlogy
from sympy import Matrix

from kac_cover.covering import (
    DEFAULT_NODE_CAP,
    CompatibleClass,
    enumerate_compatible,
    is_dtilde4_star,
)
from kac_cover.errors import DomainError, InternalError, QuiverInputError
from kac_cover.kac import kac_at_one, kac_polynomial
from kac_cover.qseries import QRING, render_polynomial
from kac_cover.quiver import DimVector, Quiver
from kac_cover.quiver_file import kronecker

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Thin dimension vectors
# ---------------------------------------------------------------------------


def laplacian(quiver: Quiver) -> Matrix:
    """Laplacian of the loop-free underlying multigraph (edge multiplicities kept)."""
    n = len(quiver.vertices)
    entries = [[0] * n for _ in range(n)]
    for s, t in quiver.arrow_pairs:
        if s == t:
            continue
        entries[s][s] += 1
        entries[t][t] += 1
        entries[s][t] -= 1
        entries[t][s] -= 1
    return Matrix(entries)


def spanning_tree_count(quiver: Quiver) -> int:
    """Matrix-Tree count: any cofactor of the Laplacian, exactly."""
    if not quiver.vertices:
        raise QuiverInputError("spanning_tree_count needs at least one vertex")
    minor = laplacian(quiver)[1:, 1:]
    return int(minor.det()) if minor.rows else 1


def spanning_tree_count_bruteforce(quiver: Quiver) -> int:
    """Count spanning trees by testing every (n-1)-subset of the non-loop edges."""
    n = len(quiver.vertices)
    edges = [(s, t) for s, t in quiver.arrow_pairs if s != t]
    count = 0
    for chosen in itertools.combinations(range(len(edges)), n - 1):
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from(edges[k] for k in chosen)
        if nx.is_tree(graph):
            count += 1
    return count


@dataclass(frozen=True)
class ThinCheck:
    kac_value: int
    spanning_trees: int

    @property
    def ok(self) -> bool:
        return self.kac_value == self.spanning_trees

    def render(self) -> str:
        return f"a(1)={self.kac_value} spanning_trees={self.spanning_trees} {'OK' if self.ok else 'FAIL'}"


def thin_kac_at_one_check(quiver: Quiver) -> ThinCheck:
    ones = DimVector([1] * len(quiver.vertices))
    return ThinCheck(kac_at_one(quiver, ones), spanning_tree_count(quiver))


# ---------------------------------------------------------------------------
# Cover-thin tree modules of K(m)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverThinParams:
    m: int
    d: int
    e: int

    def __post_init__(self) -> None:
        for name in ("m", "d", "e"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise QuiverInputError(f"{name} must be a positive integer, got {value!r}")

    @property
    def n(self) -> int:
        return self.m - 1


def binomial(x: int, k: int) -> int:
    """C(x, k), zero outside 0 <= k <= x."""
    if k < 0 or x < 0 or k > x:
        return 0
    return math.comb(x, k)


def cover_thin_count(params: CoverThinParams) -> int:
    """Number of indecomposable cover-thin tree modules of K(m) in dimension (d, e).

    ct = 1/d * sum_{i=1}^{m} C(m,i) C(n e, d-1) C(n(d-1), e-i) i/e with n = m - 1.
    """
    m, d, e, n = params.m, params.d, params.e, params.n
    total = Fraction(0)
    for i in range(1, m + 1):
        total += Fraction(binomial(m, i) * binomial(n * e, d - 1) * binomial(n * (d - 1), e - i) * i, e)
    total /= d
    if total.denominator != 1:
        raise InternalError(f"cover-thin count for {params} is not an integer: {total}")
    return total.numerator


def cover_thin_closed_form_m3(d: int) -> int:
    """ct_{(d, d+1)} for K(3): 3 / ((d+2)(d+3)) * C(2d, d) * C(2d+2, d+1)."""
    if d < 1:
        raise QuiverInputError(f"d must be >= 1, got {d}")
    value = Fraction(3, (d + 2) * (d + 3)) * math.comb(2 * d, d) * math.comb(2 * d + 2, d + 1)
    if value.denominator != 1:
        raise InternalError(f"closed form at d={d} is not an integer: {value}")
    return value.numerator


def growth_rate_bound(m: int, k) -> float:
    """Limit of ln(ct_{(d, kd)}) / d for K(m):

    n(k+1) ln n + k(n-1) ln k - (nk-1) ln(nk-1) - (n-k) ln(n-k), with n = m - 1
    and x ln x read as 0 at x = 0.
    """
    if m < 2:
        raise DomainError(f"growth bound needs m >= 2, got {m}")
    n = m - 1
    k = Fraction(k)
    if k < 1 or k > n:
        raise DomainError(f"growth bound needs 1 <= k <= {n}, got {k}")
    n, k = float(n), float(k)
    return float(
        xlogy(n * (k + 1), n)
        + xlogy(k * (n - 1), k)
        - xlogy(n * k - 1, n * k - 1)
        - xlogy(n - k, n - k)
    )


GROWTH_COLUMNS = ["d", "ct", "log_ct_over_d", "bound"]


def growth_table(m: int, k, d_values: Iterable[int]) -> pd.DataFrame:
    """ln(ct_{(d, kd)}) / d next to the limit, for every d with kd integral."""
    k = Fraction(k)
    bound = growth_rate_bound(m, k)
    rows = []
    for d in d_values:
        e = k * d
        if e.denominator != 1:
            logger.debug("skipping d=%d: k*d=%s is not an integer", d, e)
            continue
        ct = cover_thin_count(CoverThinParams(m, d, int(e)))
        rows.append(
            {
                "d": d,
                "ct": ct,
                "log_ct_over_d": math.log(ct) / d if ct > 0 else float("nan"),
                "bound": bound,
            }
        )
    return pd.DataFrame(rows, columns=GROWTH_COLUMNS)


def cover_thin_bound_table(m: int, dims: Sequence[tuple[int, int]]) -> pd.DataFrame:
    """ct_{(d,e)} against a_{K(m),(d,e)}(1); the latter is always at least the former."""
    quiver = kronecker(m)
    rows = []
    for d, e in dims:
        ct = cover_thin_count(CoverThinParams(m, d, e))
        value = kac_at_one(quiver, (d, e))
        rows.append({"m": m, "d": d, "e": e, "ct": ct, "a_at_one": value, "bound_holds": value >= ct})
    return pd.DataFrame(rows, columns=["m", "d", "e", "ct", "a_at_one", "bound_holds"])


# ---------------------------------------------------------------------------
# Tree modules when every class is exceptional
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeModuleCount:
    count: Optional[int] = None
    witness: Optional[CompatibleClass] = None
    witness_polynomial: Optional[str] = None

    @property
    def applicable(self) -> bool:
        return self.count is not None


def tree_module_count_if_exceptional(
    quiver: Quiver, alpha: Sequence[int], node_cap: int = DEFAULT_NODE_CAP
) -> TreeModuleCount:
    """Number of classes if every class has Kac polynomial 1, otherwise a witness class."""
    classes = enumerate_compatible(quiver, alpha, node_cap=node_cap)
    for cls in classes:
        poly = kac_polynomial(cls.support_quiver, cls.support_dim)
        if poly != QRING.one:
            return TreeModuleCount(witness=cls, witness_polynomial=render_polynomial(poly))
    return TreeModuleCount(count=len(classes))


def loop_quiver_star_contribution(g: int) -> int:
    """Total a(1) of the D4-tilde star classes of L_g at dimension 6.

    There are 2^4 C(g,4) + 3 * 2^2 C(g,3) + C(g,2) such classes, each with
    Kac polynomial q + 4.
    """
    if g < 1:
        raise QuiverInputError(f"g must be >= 1, got {g}")
    return 5 * (16 * binomial(g, 4) + 12 * binomial(g, 3) + binomial(g, 2))


def star_classes(quiver: Quiver, alpha: Sequence[int], node_cap: int = DEFAULT_NODE_CAP) -> list[CompatibleClass]:
    return [cls for cls in enumerate_compatible(quiver, alpha, node_cap=node_cap) if is_dtilde4_star(cls)]
