"""
Quivers, dimension vectors, the Euler form and the root system.

Vertex and arrow ids are opaque strings. Everything internal is positional:
a dimension vector is a tuple aligned with ``Quiver.vertices``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import networkx as nx

from kac_cover.errors import InternalError, QuiverInputError

logger = logging.getLogger(__name__)

# Block permutations tried by canonical_form before it falls back to the
# labelled form.
CANONICAL_PERMUTATION_LIMIT = 50_000


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target

    def reversed(self) -> "Arrow":
        return Arrow(self.id, self.target, self.source)


# Separators of Quiver.serialize and the cache key text.
RESERVED_CHARACTERS = frozenset("|,:>=")


def _check_token(kind: str, token: str) -> None:
    if not isinstance(token, str) or not token or any(ch.isspace() for ch in token):
        raise QuiverInputError(f"{kind} id must be a non-empty string without whitespace: {token!r}")
    reserved = sorted(RESERVED_CHARACTERS.intersection(token))
    if reserved:
        raise QuiverInputError(f"{kind} id {token!r} uses reserved characters {''.join(reserved)!r}")


@dataclass(frozen=True)
class Quiver:
    """A finite quiver; loops and parallel arrows are allowed."""

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverInputError(f"duplicate vertex id in {list(self.vertices)}")
        for vertex in self.vertices:
            _check_token("vertex", vertex)
        seen: set[str] = set()
        known = set(self.vertices)
        for arrow in self.arrows:
            _check_token("arrow", arrow.id)
            if arrow.id in seen:
                raise QuiverInputError(f"duplicate arrow id {arrow.id!r}")
            seen.add(arrow.id)
            for end in (arrow.source, arrow.target):
                if end not in known:
                    raise QuiverInputError(f"arrow {arrow.id!r} uses unknown vertex {end!r}")

    @classmethod
    def from_triples(
        cls, vertices: Iterable[str], arrows: Iterable[tuple[str, str, str]]
    ) -> "Quiver":
        """Build a quiver from ``(arrow id, source, target)`` triples."""
        return cls(tuple(vertices), tuple(Arrow(a, s, t) for a, s, t in arrows))

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {vertex: k for k, vertex in enumerate(self.vertices)}

    def index(self, vertex: str) -> int:
        try:
            return self._positions[vertex]
        except KeyError:
            raise QuiverInputError(f"unknown vertex {vertex!r}") from None

    @cached_property
    def arrow_pairs(self) -> tuple[tuple[int, int], ...]:
        """``(source index, target index)`` per arrow, in arrow order."""
        return tuple((self.index(a.source), self.index(a.target)) for a in self.arrows)

    @cached_property
    def loop_counts(self) -> tuple[int, ...]:
        counts = [0] * len(self.vertices)
        for s, t in self.arrow_pairs:
            if s == t:
                counts[s] += 1
        return tuple(counts)

    def has_loop(self, i: int) -> bool:
        return self.loop_counts[i] > 0

    def serialize(self) -> str:
        """Canonical text: vertices sorted, arrows sorted by (source, target, id)."""
        vertex_part = ",".join(sorted(self.vertices))
        arrow_part = ",".join(
            f"{a.id}:{a.source}>{a.target}"
            for a in sorted(self.arrows, key=lambda a: (a.source, a.target, a.id))
        )
        return f"{vertex_part}|{arrow_part}"

    def describe(self) -> str:
        """Short positional description used in sweep reports, e.g. ``2v[0>1,0>1]``."""
        pairs = ",".join(f"{s}>{t}" for s, t in sorted(self.arrow_pairs))
        return f"{len(self.vertices)}v[{pairs}]"


class DimVector(tuple):
    """Non-negative integer vector aligned with a quiver's vertex order."""

    def __new__(cls, entries: Iterable[int]) -> "DimVector":
        values = tuple(int(x) for x in entries)
        if any(x < 0 for x in values):
            raise QuiverInputError(f"dimension vector entries must be non-negative: {values}")
        return super().__new__(cls, values)

    @property
    def total(self) -> int:
        return sum(self)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, x in enumerate(self) if x > 0)

    def is_zero(self) -> bool:
        return not any(self)

    def render(self) -> str:
        return ",".join(str(x) for x in self)


def dim_vector(quiver: Quiver, values: Sequence[int]) -> DimVector:
    """Validate ``values`` against ``quiver`` and return a DimVector."""
    if len(values) != len(quiver.vertices):
        raise QuiverInputError(
            f"dimension vector has {len(values)} entries, quiver has {len(quiver.vertices)} vertices"
        )
    return values if isinstance(values, DimVector) else DimVector(values)


def unit_vector(quiver: Quiver, i: int) -> DimVector:
    return DimVector(1 if k == i else 0 for k in range(len(quiver.vertices)))


def _nonzero(quiver: Quiver, alpha: Sequence[int]) -> DimVector:
    alpha = dim_vector(quiver, alpha)
    if alpha.is_zero():
        raise QuiverInputError("dimension vector must be non-zero")
    return alpha


# ---------------------------------------------------------------------------
# Bilinear forms
# ---------------------------------------------------------------------------


def _euler(quiver: Quiver, alpha: Sequence[int], beta: Sequence[int]) -> int:
    value = sum(a * b for a, b in zip(alpha, beta))
    for s, t in quiver.arrow_pairs:
        value -= alpha[s] * beta[t]
    return value


def euler_form(quiver: Quiver, alpha: Sequence[int], beta: Sequence[int]) -> int:
    """Euler form <alpha, beta> = sum_i alpha_i beta_i - sum_{a: i->j} alpha_i beta_j."""
    return _euler(quiver, dim_vector(quiver, alpha), dim_vector(quiver, beta))


def symmetric_form(quiver: Quiver, alpha: Sequence[int], beta: Sequence[int]) -> int:
    return euler_form(quiver, alpha, beta) + euler_form(quiver, beta, alpha)


def tits_form(quiver: Quiver, alpha: Sequence[int]) -> int:
    return euler_form(quiver, alpha, alpha)


def _pairing_with_unit(quiver: Quiver, alpha: Sequence[int], i: int) -> int:
    """(alpha, e_i) for the symmetrised form."""
    value = 2 * alpha[i]
    for s, t in quiver.arrow_pairs:
        if s == i:
            value -= alpha[t]
        if t == i:
            value -= alpha[s]
    return value


def reflect(quiver: Quiver, alpha: Sequence[int], vertex: str) -> DimVector:
    """Reflection sigma_i(alpha) = alpha - (alpha, e_i) e_i at a loop-free vertex."""
    alpha = dim_vector(quiver, alpha)
    i = quiver.index(vertex)
    if quiver.has_loop(i):
        raise QuiverInputError(f"cannot reflect at vertex {vertex!r}: it carries a loop")
    entries = list(alpha)
    entries[i] -= _pairing_with_unit(quiver, alpha, i)
    if entries[i] < 0:
        raise QuiverInputError(
            f"reflection of {alpha.render()} at {vertex!r} leaves the positive cone"
        )
    return DimVector(entries)


# ---------------------------------------------------------------------------
# Graph structure
# ---------------------------------------------------------------------------


def underlying_graph(quiver: Quiver, keep_loops: bool = False) -> nx.MultiGraph:
    """Undirected multigraph on vertex indices; one edge per arrow."""
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(len(quiver.vertices)))
    for arrow, (s, t) in zip(quiver.arrows, quiver.arrow_pairs):
        if s == t and not keep_loops:
            continue
        graph.add_edge(s, t, key=arrow.id)
    return graph


def connected_support(quiver: Quiver, alpha: Sequence[int]) -> bool:
    support = [k for k, x in enumerate(dim_vector(quiver, alpha)) if x > 0]
    if not support:
        return False
    return nx.is_connected(underlying_graph(quiver).subgraph(support))


def is_connected(quiver: Quiver) -> bool:
    return bool(quiver.vertices) and nx.is_connected(underlying_graph(quiver))


def opposite(quiver: Quiver) -> Quiver:
    return Quiver(quiver.vertices, tuple(a.reversed() for a in quiver.arrows))


def support_subquiver(quiver: Quiver, alpha: Sequence[int]) -> tuple[Quiver, DimVector]:
    """Full subquiver on the support of ``alpha`` together with the restricted vector."""
    alpha = dim_vector(quiver, alpha)
    keep = [quiver.vertices[k] for k in alpha.support]
    kept = set(keep)
    arrows = tuple(a for a in quiver.arrows if a.source in kept and a.target in kept)
    return Quiver(tuple(keep), arrows), DimVector(alpha[k] for k in alpha.support)


def reorientations(quiver: Quiver) -> Iterator[Quiver]:
    """Every quiver obtained by reversing a subset of the non-loop arrows."""
    flippable = [k for k, a in enumerate(quiver.arrows) if not a.is_loop]
    for mask in range(1 << len(flippable)):
        flipped = {flippable[b] for b in range(len(flippable)) if mask >> b & 1}
        yield Quiver(
            quiver.vertices,
            tuple(a.reversed() if k in flipped else a for k, a in enumerate(quiver.arrows)),
        )


# ---------------------------------------------------------------------------
# Root system
# ---------------------------------------------------------------------------


class RootType(str, Enum):
    REAL = "real"
    IMAGINARY = "imaginary"
    NOT_A_ROOT = "not_a_root"


def classify_root(quiver: Quiver, alpha: Sequence[int]) -> RootType:
    """Decide whether ``alpha`` is a real root, an imaginary root or not a root.

    Reflections at loop-free vertices with (alpha, e_i) > 0 strictly lower
    the total dimension. The descent ends at a simple root (real), in the
    fundamental set (imaginary), or leaves the positive cone or the
    connected supports (not a root).
    """
    alpha = _nonzero(quiver, alpha)
    n = len(quiver.vertices)
    cap = alpha.total * n
    current = list(alpha)
    steps = 0
    while True:
        if not connected_support(quiver, current):
            return RootType.NOT_A_ROOT
        if sum(current) == 1:
            i = current.index(1)
            if not quiver.has_loop(i):
                return RootType.REAL
        for i in range(n):
            if quiver.has_loop(i):
                continue
            pairing = _pairing_with_unit(quiver, current, i)
            if pairing > 0:
                current[i] -= pairing
                if current[i] < 0:
                    return RootType.NOT_A_ROOT
                steps += 1
                if steps > cap:
                    raise InternalError(f"root descent for {alpha.render()} exceeded {cap} reflections")
                break
        else:
            return RootType.IMAGINARY


# ---------------------------------------------------------------------------
# Isomorphism-invariant keys and small quiver families
# ---------------------------------------------------------------------------


def canonical_form(quiver: Quiver, alpha: Sequence[int]) -> tuple:
    """Key for (quiver, alpha) that is invariant under relabelling the vertices.

    Vertices are first sorted by a local invariant; permutations are then
    tried only inside blocks of equal invariant.
    """
    alpha = dim_vector(quiver, alpha)
    n = len(quiver.vertices)
    pairs = quiver.arrow_pairs
    out_degree = [0] * n
    in_degree = [0] * n
    for s, t in pairs:
        out_degree[s] += 1
        in_degree[t] += 1
    invariant = [(alpha[v], quiver.loop_counts[v], out_degree[v], in_degree[v]) for v in range(n)]
    ordered = sorted(range(n), key=lambda v: invariant[v])
    blocks = [list(group) for _, group in itertools.groupby(ordered, key=lambda v: invariant[v])]
    signature = tuple(invariant[v] for v in ordered)

    permutation_count = 1
    for block in blocks:
        for k in range(2, len(block) + 1):
            permutation_count *= k
    if permutation_count > CANONICAL_PERMUTATION_LIMIT:
        logger.debug("canonical_form: %d permutations, using labelled key", permutation_count)
        return ("labelled", tuple(alpha), tuple(sorted(pairs)))

    best = None
    for choice in itertools.product(*(itertools.permutations(block) for block in blocks)):
        position = {}
        for k, v in enumerate(itertools.chain.from_iterable(choice)):
            position[v] = k
        key = tuple(sorted((position[s], position[t]) for s, t in pairs))
        if best is None or key < best:
            best = key
    return ("canonical", signature, best)


def small_connected_quivers(max_vertices: int, max_arrows: int) -> list[Quiver]:
    """All connected quivers up to isomorphism, loops and parallel arrows included."""
    found: dict[tuple, Quiver] = {}
    for n in range(1, max_vertices + 1):
        vertices = tuple(f"v{k + 1}" for k in range(n))
        slots = [(s, t) for s in range(n) for t in range(n)]
        for k in range(max_arrows + 1):
            for chosen in itertools.combinations_with_replacement(slots, k):
                quiver = Quiver(
                    vertices,
                    tuple(
                        Arrow(f"a{m + 1}", vertices[s], vertices[t])
                        for m, (s, t) in enumerate(chosen)
                    ),
                )
                if not is_connected(quiver):
                    continue
                key = canonical_form(quiver, [0] * n)
                if key not in found:
                    found[key] = quiver
    quivers = list(found.values())
    logger.info(
        "%d connected quivers with <= %d vertices and <= %d arrows",
        len(quivers), max_vertices, max_arrows,
    )
    return quivers


def dimension_vectors(n: int, max_total: int) -> Iterator[DimVector]:
    """Non-zero vectors of length ``n`` with total at most ``max_total``, in a fixed order."""
    for values in itertools.product(range(max_total + 1), repeat=n):
        if 0 < sum(values) <= max_total:
            yield DimVector(values)
