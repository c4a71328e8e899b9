"""
Brute-force ground truth over small prime fields.

``count_abs_indec`` enumerates the whole representation space R(Q, alpha)
over F_p, splits it into GL_alpha(F_p)-orbits and tests each orbit's
endomorphism algebra. ``enumerate_cover_thin_trees`` lists properly
edge-coloured bipartite trees directly.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import galois
import numpy as np
import pandas as pd
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from sympy.ntheory import isprime, primitive_root
from tqdm import tqdm

from kac_cover.errors import QuiverInputError, ResourceLimitError
from kac_cover.kac import kac_polynomial
from kac_cover.qseries import evaluate
from kac_cover.quiver import Quiver, dim_vector, dimension_vectors, small_connected_quivers

logger = logging.getLogger(__name__)

MAX_POINTS = 10**7
MAX_GROUP_ORDER = 10**5
MAX_TREE_VERTICES = 9

SWEEP_COLUMNS = ["quiver", "dim", "p", "engine", "oracle", "status"]


# ---------------------------------------------------------------------------
# Representation spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Block:
    source: int
    target: int
    offset: int
    rows: int
    cols: int

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def view(self, points: np.ndarray) -> np.ndarray:
        return points[:, self.offset:self.offset + self.size].reshape(-1, self.rows, self.cols)


def _blocks(quiver: Quiver, alpha: Sequence[int]) -> list[_Block]:
    blocks = []
    offset = 0
    for s, t in quiver.arrow_pairs:
        block = _Block(s, t, offset, alpha[t], alpha[s])
        blocks.append(block)
        offset += block.size
    return blocks


def representation_dimension(quiver: Quiver, alpha: Sequence[int]) -> int:
    return sum(alpha[s] * alpha[t] for s, t in quiver.arrow_pairs)


def group_order(alpha: Sequence[int], p: int) -> int:
    """|GL_alpha(F_p)| = prod_i prod_{k < alpha_i} (p^alpha_i - p^k)."""
    order = 1
    for n in alpha:
        for k in range(n):
            order *= p**n - p**k
    return order


def check_feasible(
    quiver: Quiver,
    alpha: Sequence[int],
    p: int,
    max_points: int = MAX_POINTS,
    max_group_order: int = MAX_GROUP_ORDER,
) -> None:
    points = p ** representation_dimension(quiver, alpha)
    if points > max_points:
        raise ResourceLimitError(f"{points} points in the representation space exceed {max_points}")
    order = group_order(alpha, p)
    if order > max_group_order:
        raise ResourceLimitError(f"|GL_alpha(F_{p})| = {order} exceeds {max_group_order}")


def _generators(alpha: Sequence[int], p: int) -> list[tuple[int, np.ndarray, np.ndarray]]:
    """Transvections and one diagonal generator per slot, with their inverses."""
    generators = []
    g = primitive_root(p) if p > 2 else 1
    g_inv = pow(g, -1, p)
    for vertex, n in enumerate(alpha):
        for r, c in itertools.permutations(range(n), 2):
            forward = np.eye(n, dtype=np.int64)
            forward[r, c] = 1
            backward = np.eye(n, dtype=np.int64)
            backward[r, c] = p - 1
            generators.append((vertex, forward, backward))
        if g != 1:
            for slot in range(n):
                forward = np.eye(n, dtype=np.int64)
                forward[slot, slot] = g
                backward = np.eye(n, dtype=np.int64)
                backward[slot, slot] = g_inv
                generators.append((vertex, forward, backward))
    return generators


def _act(points: np.ndarray, blocks: list[_Block], vertex: int, h: np.ndarray, h_inv: np.ndarray, p: int) -> np.ndarray:
    """Apply g_vertex = h: M_a -> h M_a for arrows into the vertex, M_a h^{-1} for arrows out."""
    moved = points.copy()
    for block in blocks:
        if block.source != vertex and block.target != vertex:
            continue
        matrices = block.view(points).astype(np.int64)
        if block.target == vertex:
            matrices = np.einsum("ij,njk->nik", h, matrices)
        if block.source == vertex:
            matrices = np.einsum("nij,jk->nik", matrices, h_inv)
        moved[:, block.offset:block.offset + block.size] = (matrices % p).reshape(len(points), -1)
    return moved


def _all_points(dimension: int, p: int) -> np.ndarray:
    index = np.arange(p**dimension, dtype=np.int64)
    weights = p ** np.arange(dimension, dtype=np.int64)
    return ((index[:, None] // weights) % p).astype(np.int8)


def _intertwining_system(quiver: Quiver, alpha: Sequence[int], point: np.ndarray, blocks: list[_Block]) -> np.ndarray:
    """Rows of M_a X_s - X_t M_a = 0 in the unknowns (X_i), each X_i row-major."""
    offsets = np.cumsum([0] + [n * n for n in alpha])
    width = int(offsets[-1])
    rows = []
    for block in blocks:
        m = point[block.offset:block.offset + block.size].reshape(block.rows, block.cols)
        equation = np.zeros((block.size, width), dtype=np.int64)
        s, t = block.source, block.target
        equation[:, offsets[s]:offsets[s + 1]] += np.kron(m, np.eye(alpha[s], dtype=np.int64))
        equation[:, offsets[t]:offsets[t + 1]] -= np.kron(np.eye(alpha[t], dtype=np.int64), m.T)
        rows.append(equation)
    if not rows:
        return np.zeros((0, width), dtype=np.int64)
    return np.vstack(rows)


@dataclass(frozen=True)
class OrbitRecord:
    representative: int
    size: int
    end_dimension: int
    absolutely_indecomposable: bool


def _endomorphism_test(quiver: Quiver, alpha: Sequence[int], point: np.ndarray, blocks: list[_Block], p: int) -> tuple[int, bool]:
    """Return (dim End, whether End is local with residue field F_p)."""
    GF = galois.GF(p)
    width = sum(n * n for n in alpha)
    system = _intertwining_system(quiver, alpha, point, blocks) % p
    if system.shape[0] == 0:
        basis = np.eye(width, dtype=np.int64)
    else:
        basis = np.asarray(GF(system).null_space(), dtype=np.int64)
    r = basis.shape[0]

    coefficients = _all_points(r, p)
    elements = (coefficients @ basis) % p
    invertible = np.ones(len(elements), dtype=bool)
    offset = 0
    for n in alpha:
        if n:
            block = elements[:, offset:offset + n * n].reshape(-1, n, n).astype(float)
            det = np.rint(np.linalg.det(block)).astype(np.int64) % p
            invertible &= det != 0
        offset += n * n

    non_units = coefficients[~invertible]
    rank = int(np.linalg.matrix_rank(GF(non_units))) if len(non_units) else 0
    local = len(non_units) == p**rank
    return r, local and len(elements) == p * len(non_units)


def orbit_labels(
    quiver: Quiver,
    alpha: Sequence[int],
    p: int,
    max_points: int = MAX_POINTS,
    max_group_order: int = MAX_GROUP_ORDER,
) -> np.ndarray:
    """Orbit number of every point of R(Q, alpha); point k has base-p digits k."""
    alpha = dim_vector(quiver, alpha)
    if not isprime(p):
        raise QuiverInputError(f"p must be prime, got {p}")
    if alpha.is_zero():
        raise QuiverInputError("dimension vector must be non-zero")
    check_feasible(quiver, alpha, p, max_points, max_group_order)

    blocks = _blocks(quiver, alpha)
    dimension = representation_dimension(quiver, alpha)
    points = _all_points(dimension, p)
    total = len(points)
    weights = p ** np.arange(dimension, dtype=np.int64)

    sources = []
    targets = []
    for vertex, h, h_inv in _generators(alpha, p):
        image = _act(points, blocks, vertex, h, h_inv, p) @ weights
        sources.append(np.arange(total, dtype=np.int64))
        targets.append(image)
    if sources:
        rows = np.concatenate(sources)
        cols = np.concatenate(targets)
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(total, total))
    n_orbits, labels = connected_components(graph, directed=True, connection="weak")
    logger.debug("%s at %s over F_%d: %d points, %d orbits", quiver.describe(), alpha.render(), p, total, n_orbits)
    return labels


def orbit_census(
    quiver: Quiver,
    alpha: Sequence[int],
    p: int,
    max_points: int = MAX_POINTS,
    max_group_order: int = MAX_GROUP_ORDER,
) -> list[OrbitRecord]:
    """One record per GL_alpha(F_p)-orbit of R(Q, alpha), indexed by orbit number."""
    labels = orbit_labels(quiver, alpha, p, max_points, max_group_order)
    alpha = dim_vector(quiver, alpha)
    blocks = _blocks(quiver, alpha)
    points = _all_points(representation_dimension(quiver, alpha), p)
    total = len(points)
    n_orbits = int(labels.max()) + 1
    sizes = np.bincount(labels, minlength=n_orbits)
    representatives = np.full(n_orbits, total, dtype=np.int64)
    np.minimum.at(representatives, labels, np.arange(total, dtype=np.int64))

    records = []
    for orbit in range(n_orbits):
        rep = int(representatives[orbit])
        end_dimension, flag = _endomorphism_test(quiver, alpha, points[rep], blocks, p)
        records.append(OrbitRecord(rep, int(sizes[orbit]), end_dimension, flag))
    return records


def count_abs_indec(
    quiver: Quiver,
    alpha: Sequence[int],
    p: int,
    max_points: int = MAX_POINTS,
    max_group_order: int = MAX_GROUP_ORDER,
) -> int:
    """Number of absolutely indecomposable representations of dimension alpha over F_p."""
    census = orbit_census(quiver, alpha, p, max_points, max_group_order)
    return sum(1 for record in census if record.absolutely_indecomposable)


def end_dimension_of_point(quiver: Quiver, alpha: Sequence[int], p: int, index: int) -> int:
    """dim End of the representation with the given point index."""
    alpha = dim_vector(quiver, alpha)
    dimension = representation_dimension(quiver, alpha)
    point = _all_points(dimension, p)[index]
    return _endomorphism_test(quiver, alpha, point, _blocks(quiver, alpha), p)[0]


# ---------------------------------------------------------------------------
# Coloured bipartite trees
# ---------------------------------------------------------------------------

SOURCE, SINK = "s", "t"


@dataclass(frozen=True)
class _ColouredTree:
    sides: tuple[str, ...]
    edges: tuple[tuple[int, int, int], ...]  # (u, v, colour)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        adjacent: list[list[tuple[int, int]]] = [[] for _ in self.sides]
        for u, v, colour in self.edges:
            adjacent[u].append((v, colour))
            adjacent[v].append((u, colour))
        return adjacent

    def counts(self) -> tuple[int, int]:
        return self.sides.count(SOURCE), self.sides.count(SINK)


def _encode(sides, adjacent, vertex: int, parent: int) -> str:
    children = sorted(
        f"<{colour}>{_encode(sides, adjacent, child, vertex)}"
        for child, colour in adjacent[vertex]
        if child != parent
    )
    return f"{sides[vertex]}({''.join(children)})"


def tree_canonical_form(tree: _ColouredTree) -> str:
    """Minimum rooted encoding over all roots; colours and sides are kept."""
    adjacent = tree.adjacency()
    return min(_encode(tree.sides, adjacent, root, -1) for root in range(len(tree.sides)))


def _extensions(tree: _ColouredTree, m: int, d: int, e: int) -> Iterable[_ColouredTree]:
    sources, sinks = tree.counts()
    adjacent = tree.adjacency()
    new = len(tree.sides)
    for vertex, side in enumerate(tree.sides):
        other = SINK if side == SOURCE else SOURCE
        if other == SOURCE and sources == d:
            continue
        if other == SINK and sinks == e:
            continue
        used = {colour for _, colour in adjacent[vertex]}
        for colour in range(m):
            if colour in used:
                continue
            edge = (vertex, new, colour) if side == SOURCE else (new, vertex, colour)
            yield _ColouredTree(tree.sides + (other,), tree.edges + (edge,))


def enumerate_cover_thin_trees(m: int, d: int, e: int) -> int:
    """Isomorphism classes of bipartite trees with d sources, e sinks and a proper m-colouring.

    Trees are grown one leaf at a time from single edges, keeping one
    representative per canonical form at every size.
    """
    if m < 1 or d < 1 or e < 1:
        raise QuiverInputError(f"m, d, e must be positive, got {(m, d, e)}")
    if d + e > MAX_TREE_VERTICES:
        raise ResourceLimitError(f"d + e = {d + e} exceeds {MAX_TREE_VERTICES}")
    level = {}
    for colour in range(m):
        tree = _ColouredTree((SOURCE, SINK), ((0, 1, colour),))
        level[tree_canonical_form(tree)] = tree
    for _ in range(d + e - 2):
        grown = {}
        for tree in level.values():
            for bigger in _extensions(tree, m, d, e):
                key = tree_canonical_form(bigger)
                if key not in grown:
                    grown[key] = bigger
        level = grown
    return sum(1 for tree in level.values() if tree.counts() == (d, e))


# ---------------------------------------------------------------------------
# Sweep
# ---------------------------------------------------------------------------


def oracle_sweep(
    max_total_dim: int = 3,
    primes: Sequence[int] = (2, 3),
    max_vertices: int = 2,
    max_arrows: int = 3,
    max_points: int = MAX_POINTS,
    max_group_order: int = MAX_GROUP_ORDER,
    progress: bool = False,
) -> pd.DataFrame:
    """Compare count_abs_indec with a_alpha(p) on every small connected quiver."""
    cases = [
        (quiver, alpha, p)
        for quiver in small_connected_quivers(max_vertices, max_arrows)
        for alpha in dimension_vectors(len(quiver.vertices), max_total_dim)
        for p in primes
    ]
    rows = []
    for quiver, alpha, p in tqdm(cases, desc="oracle sweep", disable=not progress):
        engine = evaluate(kac_polynomial(quiver, alpha), p)
        try:
            oracle = count_abs_indec(quiver, alpha, p, max_points, max_group_order)
        except ResourceLimitError as exc:
            logger.info("skipping %s at %s over F_%d: %s", quiver.describe(), alpha.render(), p, exc)
            rows.append([quiver.describe(), alpha.render(), p, engine, None, "SKIPPED"])
            continue
        status = "OK" if oracle == engine else "FAIL"
        rows.append([quiver.describe(), alpha.render(), p, engine, oracle, status])
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def render_sweep(report: pd.DataFrame) -> list[str]:
    """One line per instance: quiver, dimension vector, p, engine, oracle, status."""
    lines = []
    for row in report.itertuples(index=False):
        oracle = "-" if row.status == "SKIPPED" else str(row.oracle)
        lines.append(f"{row.quiver}\t{row.dim}\t{row.p}\t{row.engine}\t{oracle}\t{row.status}")
    return lines
