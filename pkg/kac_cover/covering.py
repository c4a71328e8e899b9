"""
Finite windows of the universal abelian covering quiver and the identity
a_{Q,alpha}(1) = sum over compatible classes beta of a_{cover,beta}(1).

The cover has vertex set Q_0 x Z^{Q_1}; an arrow a: i -> j of Q lifts to
(a, chi): (i, chi) -> (j, chi + e_a). Dimension vectors on the cover are
considered up to translation in Z^{Q_1}.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Mapping, NamedTuple, Optional, Sequence

import networkx as nx

from kac_cover.errors import InternalError, QuiverInputError, ResourceLimitError
from kac_cover.kac import kac_polynomial
from kac_cover.kac_cache import KacCache, cached_kac
from kac_cover.qseries import evaluate, parse_polynomial, render_polynomial
from kac_cover.quiver import (
    Arrow,
    DimVector,
    Quiver,
    RootType,
    classify_root,
    dim_vector,
    underlying_graph,
)

logger = logging.getLogger(__name__)

DEFAULT_NODE_CAP = 5_000_000


class CoverVertex(NamedTuple):
    base: str
    chi: tuple[int, ...]

    def render(self) -> str:
        return f"{self.base}[{','.join(str(c) for c in self.chi)}]"

    @property
    def label(self) -> str:
        """Vertex id on a support quiver, e.g. ``j[0.1]``."""
        return f"{self.base}[{'.'.join(str(c) for c in self.chi)}]"


class CoverDim:
    """Finitely supported positive dimension vector on the covering quiver."""

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[CoverVertex, int]):
        cleaned: dict[CoverVertex, int] = {}
        for vertex, value in entries.items():
            value = int(value)
            if value < 1:
                raise QuiverInputError(f"cover dimension at {vertex.render()} must be >= 1, got {value}")
            cleaned[CoverVertex(vertex.base, tuple(vertex.chi))] = value
        self.entries = cleaned

    @property
    def support(self) -> frozenset[CoverVertex]:
        return frozenset(self.entries)

    def items(self) -> Iterator[tuple[CoverVertex, int]]:
        return iter(sorted(self.entries.items()))

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoverDim):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(frozenset(self.entries.items()))

    def ordered_vertices(self, quiver: Quiver) -> list[CoverVertex]:
        return sorted(self.entries, key=lambda v: (quiver.index(v.base), v.chi))

    def serialize(self, quiver: Quiver) -> str:
        return ";".join(f"{v.render()}={self.entries[v]}" for v in self.ordered_vertices(quiver))

    def __repr__(self) -> str:
        shown = ";".join(f"{v.render()}={n}" for v, n in self.items())
        return f"CoverDim({shown})"


def _check_vertex(quiver: Quiver, vertex: CoverVertex) -> None:
    quiver.index(vertex.base)
    if len(vertex.chi) != len(quiver.arrows):
        raise QuiverInputError(
            f"cover vertex {vertex.render()} needs {len(quiver.arrows)} character entries"
        )


def _bump(chi: tuple[int, ...], k: int, step: int) -> tuple[int, ...]:
    return chi[:k] + (chi[k] + step,) + chi[k + 1:]


def cover_arrows_out(quiver: Quiver, vertex: CoverVertex) -> list[tuple[Arrow, CoverVertex]]:
    _check_vertex(quiver, vertex)
    return [
        (arrow, CoverVertex(arrow.target, _bump(vertex.chi, k, 1)))
        for k, arrow in enumerate(quiver.arrows)
        if arrow.source == vertex.base
    ]


def cover_arrows_in(quiver: Quiver, vertex: CoverVertex) -> list[tuple[Arrow, CoverVertex]]:
    _check_vertex(quiver, vertex)
    return [
        (arrow, CoverVertex(arrow.source, _bump(vertex.chi, k, -1)))
        for k, arrow in enumerate(quiver.arrows)
        if arrow.target == vertex.base
    ]


def c_map(quiver: Quiver, beta: CoverDim) -> DimVector:
    """c(beta)_i = sum over chi of beta_{i, chi}."""
    totals = [0] * len(quiver.vertices)
    for vertex, value in beta.entries.items():
        _check_vertex(quiver, vertex)
        totals[quiver.index(vertex.base)] += value
    return DimVector(totals)


def shift(beta: CoverDim, xi: Sequence[int]) -> CoverDim:
    return CoverDim(
        {
            CoverVertex(v.base, tuple(c + x for c, x in zip(v.chi, xi))): n
            for v, n in beta.entries.items()
        }
    )


def canonicalize(beta: CoverDim) -> CoverDim:
    """Translate so that the componentwise minimum of chi over the support is zero."""
    if not beta.entries:
        raise QuiverInputError("cannot canonicalize an empty cover dimension vector")
    chis = [v.chi for v in beta.entries]
    low = tuple(min(column) for column in zip(*chis))
    return shift(beta, tuple(-m for m in low))


def compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways of writing n as k positive parts."""
    if k < 1 or k > n:
        return
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0,) + cuts + (n,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def support_quiver(quiver: Quiver, beta: CoverDim) -> tuple[Quiver, DimVector]:
    """Full subquiver of the cover on supp(beta), relabelled, with beta on it."""
    ordered = beta.ordered_vertices(quiver)
    inside = set(ordered)
    arrows = []
    for vertex in ordered:
        for arrow, target in cover_arrows_out(quiver, vertex):
            if target in inside:
                chi_text = ".".join(str(c) for c in vertex.chi)
                arrows.append(Arrow(f"{arrow.id}@{chi_text}", vertex.label, target.label))
    sub = Quiver(tuple(v.label for v in ordered), tuple(arrows))
    return sub, DimVector(beta.entries[v] for v in ordered)


@dataclass(frozen=True)
class CompatibleClass:
    beta: CoverDim
    support_quiver: Quiver
    support_dim: DimVector
    serialization: str

    @property
    def n_vertices(self) -> int:
        return len(self.support_quiver.vertices)

    @property
    def n_arrows(self) -> int:
        return len(self.support_quiver.arrows)


def make_class(quiver: Quiver, beta: CoverDim) -> CompatibleClass:
    beta = canonicalize(beta)
    sub, sub_dim = support_quiver(quiver, beta)
    return CompatibleClass(beta, sub, sub_dim, beta.serialize(quiver))


def support_type(cls: CompatibleClass) -> tuple:
    """Sorted per-vertex (dimension, out-degree, in-degree) of the support."""
    out_degree = Counter(s for s, _ in cls.support_quiver.arrow_pairs)
    in_degree = Counter(t for _, t in cls.support_quiver.arrow_pairs)
    return tuple(
        sorted(
            (value, out_degree[k], in_degree[k])
            for k, value in enumerate(cls.support_dim)
        )
    )


def is_dtilde4_star(cls: CompatibleClass) -> bool:
    """Support is a four-leaf star with 2 at the centre and 1 at every leaf."""
    if cls.n_vertices != 5 or cls.n_arrows != 4:
        return False
    degree = Counter()
    for s, t in cls.support_quiver.arrow_pairs:
        degree[s] += 1
        degree[t] += 1
    centre = [k for k in range(5) if degree[k] == 4]
    if len(centre) != 1:
        return False
    return all(
        cls.support_dim[k] == (2 if k == centre[0] else 1) and (k == centre[0] or degree[k] == 1)
        for k in range(5)
    )


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _check_single_component(quiver: Quiver, alpha: DimVector) -> None:
    graph = underlying_graph(quiver)
    touched = {
        min(component)
        for component in nx.connected_components(graph)
        if any(alpha[k] > 0 for k in component)
    }
    if len(touched) > 1:
        raise QuiverInputError(
            f"dimension vector {alpha.render()} is supported on {len(touched)} components; split it first"
        )


def _cover_neighbours(quiver: Quiver, vertex: CoverVertex) -> Iterator[CoverVertex]:
    for _, target in cover_arrows_out(quiver, vertex):
        yield target
    for _, source in cover_arrows_in(quiver, vertex):
        yield source


def _connected_supports(quiver: Quiver, alpha: DimVector, node_cap: int) -> list[frozenset[CoverVertex]]:
    """Connected vertex sets of the cover containing (i0, 0), breadth first."""
    total = alpha.total
    start = frozenset({CoverVertex(quiver.vertices[alpha.support[0]], (0,) * len(quiver.arrows))})

    visited = {start}
    queue = deque([start])
    found = []
    while queue:
        current = queue.popleft()
        found.append(current)
        if len(current) == total:
            continue
        lifts = Counter(vertex.base for vertex in current)
        for vertex in current:
            for candidate in _cover_neighbours(quiver, vertex):
                if candidate in current or lifts[candidate.base] >= alpha[quiver.index(candidate.base)]:
                    continue
                grown = current | {candidate}
                if grown in visited:
                    continue
                if any(abs(c) > total for c in candidate.chi):
                    raise InternalError(f"cover search left the window |chi| <= {total}")
                visited.add(grown)
                if len(visited) > node_cap:
                    raise ResourceLimitError(
                        f"covering search for {alpha.render()} exceeded the node cap of {node_cap}"
                    )
                queue.append(grown)
    logger.info("cover search for %s: %d connected supports", alpha.render(), len(found))
    return found


def enumerate_compatible(
    quiver: Quiver,
    alpha: Sequence[int],
    node_cap: int = DEFAULT_NODE_CAP,
    roots_only: bool = True,
) -> list[CompatibleClass]:
    """Translation classes of cover dimension vectors with connected support and c(beta) = alpha.

    With ``roots_only`` a class is kept only when beta is a root of its
    support quiver; the other classes have Kac polynomial zero.
    """
    alpha = dim_vector(quiver, alpha)
    if alpha.is_zero():
        raise QuiverInputError("dimension vector must be non-zero")
    _check_single_component(quiver, alpha)

    needed = set(alpha.support)
    classes: dict[str, CoverDim] = {}
    for support in _connected_supports(quiver, alpha, node_cap):
        groups: dict[int, list[tuple[int, ...]]] = {}
        for vertex in support:
            groups.setdefault(quiver.index(vertex.base), []).append(vertex.chi)
        if set(groups) != needed:
            continue
        bases = sorted(groups)
        for base in bases:
            groups[base].sort()
        options = [list(compositions(alpha[b], len(groups[b]))) for b in bases]
        for choice in itertools.product(*options):
            entries = {}
            for base, parts in zip(bases, choice):
                for chi, value in zip(groups[base], parts):
                    entries[CoverVertex(quiver.vertices[base], chi)] = value
            beta = canonicalize(CoverDim(entries))
            key = beta.serialize(quiver)
            if key not in classes:
                classes[key] = beta

    result = []
    for key in sorted(classes):
        cls = make_class(quiver, classes[key])
        if roots_only and classify_root(cls.support_quiver, cls.support_dim) == RootType.NOT_A_ROOT:
            continue
        result.append(cls)
    logger.info(
        "%d compatible classes for %s (%d before root filter)",
        len(result), alpha.render(), len(classes),
    )
    return result


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def _render_kac(args: tuple[Quiver, DimVector]) -> str:
    sub, sub_dim = args
    return render_polynomial(kac_polynomial(sub, sub_dim))


def class_values(
    classes: Sequence[CompatibleClass],
    threads: int = 1,
    store: Optional[KacCache] = None,
) -> list[int]:
    """kac_at_one of every class support, in class order."""
    values: list[Optional[int]] = [None] * len(classes)
    pending = []
    for k, cls in enumerate(classes):
        if store is not None:
            text = store.get(store.key_for(cls.support_quiver, cls.support_dim))
            if text is not None:
                try:
                    values[k] = evaluate(parse_polynomial(text), 1)
                    store.hits += 1
                    continue
                except ValueError:
                    logger.warning("Corrupt cache entry for class %s", cls.serialization)
        pending.append(k)

    jobs = [(classes[k].support_quiver, classes[k].support_dim) for k in pending]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            renderings = list(pool.map(_render_kac, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        renderings = [_render_kac(job) for job in jobs]

    for k, text in zip(pending, renderings):
        values[k] = evaluate(parse_polynomial(text), 1)
        if store is not None:
            store.misses += 1
            store.put(store.key_for(classes[k].support_quiver, classes[k].support_dim), text)
    return [int(v) for v in values]


@dataclass
class VerificationReport:
    quiver: Quiver
    alpha: DimVector
    lhs: int
    contributions: list[tuple[CompatibleClass, int]] = field(default_factory=list)
    rhs: int = 0
    ok: bool = False

    def support_type_counts(self) -> dict[tuple, int]:
        return dict(Counter(support_type(cls) for cls, _ in self.contributions))

    def render_lines(self, machine: bool = False) -> list[str]:
        status = "OK" if self.ok else "FAIL"
        lines = []
        for cls, value in self.contributions:
            if machine:
                lines.append(f"class\t{cls.serialization}\t{cls.n_vertices}\t{cls.n_arrows}\t{value}")
            else:
                lines.append(
                    f"β={cls.serialization} support={cls.n_vertices}v/{cls.n_arrows}a a(1)={value}"
                )
        if machine:
            lines.append(f"total\t{self.lhs}\t{self.rhs}\t{status}")
        else:
            lines.append(f"lhs={self.lhs} rhs={self.rhs} {status}")
        return lines


def verify_main_theorem(
    quiver: Quiver,
    alpha: Sequence[int],
    node_cap: int = DEFAULT_NODE_CAP,
    threads: int = 1,
    roots_only: bool = True,
    store: Optional[KacCache] = None,
) -> VerificationReport:
    """Compare a_{Q,alpha}(1) with the sum over compatible classes on the cover."""
    alpha = dim_vector(quiver, alpha)
    lhs = cached_kac(store, quiver, alpha).value_at_one
    classes = enumerate_compatible(quiver, alpha, node_cap=node_cap, roots_only=roots_only)
    values = class_values(classes, threads=threads, store=store)
    rhs = sum(values)
    report = VerificationReport(
        quiver=quiver,
        alpha=alpha,
        lhs=lhs,
        contributions=list(zip(classes, values)),
        rhs=rhs,
        ok=lhs == rhs,
    )
    if not report.ok:
        logger.warning("identity fails for %s at %s: lhs=%d rhs=%d", quiver.describe(), alpha.render(), lhs, rhs)
    return report
