"""
Plain-text quiver files and the builtin quiver families.

A quiver file lists ``vertex <id>`` lines followed by ``arrow <id> <src> <dst>``
lines. Blank lines and lines starting with ``#`` are ignored, the same way
symbol lists are read elsewhere in the project.
"""

from __future__ import annotations

import os
from typing import Callable

from kac_cover.errors import QuiverInputError, QuiverParseError
from kac_cover.quiver import RESERVED_CHARACTERS, Arrow, DimVector, Quiver, dim_vector


def _check_id(kind: str, token: str, line_number: int) -> None:
    reserved = sorted(RESERVED_CHARACTERS.intersection(token))
    if reserved:
        raise QuiverParseError(f"{kind} id {token!r} uses reserved characters {''.join(reserved)!r}", line_number)


def parse_quiver(text: str) -> Quiver:
    vertices: list[str] = []
    arrows: list[Arrow] = []
    vertex_ids: set[str] = set()
    arrow_ids: set[str] = set()
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        keyword = fields[0]
        if keyword == "vertex":
            if len(fields) != 2:
                raise QuiverParseError("expected 'vertex <id>'", line_number)
            _check_id("vertex", fields[1], line_number)
            if fields[1] in vertex_ids:
                raise QuiverParseError(f"duplicate vertex id {fields[1]!r}", line_number)
            vertex_ids.add(fields[1])
            vertices.append(fields[1])
        elif keyword == "arrow":
            if len(fields) != 4:
                raise QuiverParseError("expected 'arrow <id> <source> <target>'", line_number)
            arrow_id, source, target = fields[1:]
            _check_id("arrow", arrow_id, line_number)
            if arrow_id in arrow_ids:
                raise QuiverParseError(f"duplicate arrow id {arrow_id!r}", line_number)
            for end in (source, target):
                if end not in vertex_ids:
                    raise QuiverParseError(f"undeclared vertex {end!r}", line_number)
            arrow_ids.add(arrow_id)
            arrows.append(Arrow(arrow_id, source, target))
        else:
            raise QuiverParseError(f"unknown keyword {keyword!r}", line_number)
    if not vertices:
        raise QuiverParseError("quiver has no vertices")
    return Quiver(tuple(vertices), tuple(arrows))


def render_quiver(quiver: Quiver) -> str:
    lines = [f"vertex {vertex}" for vertex in quiver.vertices]
    lines += [f"arrow {a.id} {a.source} {a.target}" for a in quiver.arrows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Builtin families
# ---------------------------------------------------------------------------


def kronecker(m: int) -> Quiver:
    """K(m): two vertices i, j and m arrows i -> j."""
    return Quiver.from_triples(("i", "j"), ((f"a{k}", "i", "j") for k in range(1, m + 1)))


def loops(g: int) -> Quiver:
    """L_g: one vertex with g loops."""
    return Quiver.from_triples(("i",), ((f"l{k}", "i", "i") for k in range(1, g + 1)))


def cycle(n: int) -> Quiver:
    vertices = tuple(f"v{k}" for k in range(1, n + 1))
    return Quiver.from_triples(
        vertices, ((f"c{k}", vertices[k - 1], vertices[k % n]) for k in range(1, n + 1))
    )


def path(n: int) -> Quiver:
    vertices = tuple(f"v{k}" for k in range(1, n + 1))
    return Quiver.from_triples(
        vertices, ((f"p{k}", vertices[k - 1], vertices[k]) for k in range(1, n))
    )


def star(k: int) -> Quiver:
    """Centre ``c`` first, then leaves s1..sk, each with one arrow into the centre."""
    leaves = tuple(f"s{n}" for n in range(1, k + 1))
    return Quiver.from_triples(("c",) + leaves, ((f"b{n}", leaf, "c") for n, leaf in enumerate(leaves, start=1)))


BUILTINS: dict[str, tuple[Callable[[int], Quiver], int]] = {
    "kronecker": (kronecker, 0),
    "loops": (loops, 0),
    "cycle": (cycle, 1),
    "path": (path, 1),
    "star": (star, 0),
}


def builtin_quiver(spec: str) -> Quiver:
    """Resolve ``family:n`` such as ``kronecker:3`` or ``star:4``."""
    family, _, argument = spec.partition(":")
    if family not in BUILTINS:
        raise QuiverInputError(f"unknown builtin quiver family {family!r}; available: {', '.join(BUILTINS)}")
    factory, minimum = BUILTINS[family]
    try:
        n = int(argument)
    except ValueError:
        raise QuiverInputError(f"builtin {spec!r} needs an integer parameter") from None
    if n < minimum:
        raise QuiverInputError(f"builtin {family} needs a parameter >= {minimum}, got {n}")
    return factory(n)


def load_quiver(spec: str) -> Quiver:
    """A path to a quiver file, or a builtin ``family:n``."""
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return parse_quiver(fh.read())
    if ":" in spec:
        return builtin_quiver(spec)
    raise QuiverInputError(f"no quiver file or builtin named {spec!r}")


def parse_dim(text: str, quiver: Quiver) -> DimVector:
    """Comma-separated entries in the quiver's vertex declaration order."""
    try:
        values = [int(part) for part in text.split(",")]
    except ValueError:
        raise QuiverInputError(f"dimension vector must be comma-separated integers: {text!r}") from None
    return dim_vector(quiver, DimVector(values))
