"""Undirected multigraphs with dart (directed-edge) indexing.

A dart is one orientation of an undirected edge.  Normal edges and
whole-loops contribute two mutually-reverse darts; a half-loop contributes
a single dart that is its own reverse.  Darts of the i-th paired edge
occupy indices 2i and 2i+1 (reverse = index XOR 1); half-loop darts are
appended after all paired darts.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

NORMAL = "normal"
WHOLE_LOOP = "whole_loop"
HALF_LOOP = "half_loop"

_EDGE_KINDS = (NORMAL, WHOLE_LOOP, HALF_LOOP)


class GraphError(ValueError):
    """Invalid graph construction input."""


class GraphParseError(GraphError):
    """Malformed graph text; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class IrreducibilityVerdict(str, Enum):
    OK = "ok"
    NOT_CONNECTED = "not_connected"
    MIN_DEGREE_BELOW_2 = "min_degree_below_2"
    IS_CYCLE = "is_cycle"


@dataclass(frozen=True)
class Dart:
    """One orientation of an edge: runs from ``tail`` to ``head``."""

    index: int
    tail: int
    head: int
    reverse_index: int


class Graph:
    """Immutable undirected multigraph with a materialized dart table.

    Build instances through :func:`build_graph` (or the generators in
    :mod:`nbrw.families`); the constructor performs full validation.
    """

    def __init__(self, vertex_count: int, edges: list[tuple[int, int, str]]):
        if vertex_count < 0:
            raise GraphError("vertex_count must be non-negative")
        self.vertex_count = vertex_count
        normalized = []
        for a, b, kind in edges:
            if kind not in _EDGE_KINDS:
                raise GraphError(f"unknown edge kind {kind!r}")
            if not (0 <= a < vertex_count and 0 <= b < vertex_count):
                raise GraphError(f"edge endpoint out of range: ({a}, {b})")
            if kind in (WHOLE_LOOP, HALF_LOOP) and a != b:
                raise GraphError(f"{kind} requires equal endpoints, got ({a}, {b})")
            if kind == NORMAL and a == b:
                kind = WHOLE_LOOP
            normalized.append((a, b, kind))
        self.edges: tuple[tuple[int, int, str], ...] = tuple(normalized)

        tails: list[int] = []
        heads: list[int] = []
        dart_edge: list[int] = []
        half_loops: list[int] = []
        for i, (a, b, kind) in enumerate(self.edges):
            if kind == HALF_LOOP:
                half_loops.append(i)
            else:
                tails += [a, b]
                heads += [b, a]
                dart_edge += [i, i]
        paired = len(tails)
        reverse = [d ^ 1 for d in range(paired)]
        for i in half_loops:
            v = self.edges[i][0]
            tails.append(v)
            heads.append(v)
            dart_edge.append(i)
            reverse.append(len(reverse))

        self.dart_count = len(tails)
        self.dart_tail = np.asarray(tails, dtype=np.int64)
        self.dart_head = np.asarray(heads, dtype=np.int64)
        self.dart_reverse = np.asarray(reverse, dtype=np.int64)
        self.dart_edge = np.asarray(dart_edge, dtype=np.int64)

        degrees = np.zeros(vertex_count, dtype=np.int64)
        for a, b, kind in self.edges:
            if kind == NORMAL:
                degrees[a] += 1
                degrees[b] += 1
            elif kind == WHOLE_LOOP:
                degrees[a] += 2
            else:
                degrees[a] += 1
        self.degrees = degrees

        # darts grouped by tail vertex, each group sorted by dart index
        order = np.argsort(self.dart_tail, kind="stable") if self.dart_count else np.array([], dtype=np.int64)
        self._out_darts_flat = order.astype(np.int64)
        self._out_darts_offsets = np.zeros(vertex_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.dart_tail, minlength=vertex_count), out=self._out_darts_offsets[1:])

    def dart(self, index: int) -> Dart:
        if not (0 <= index < self.dart_count):
            raise GraphError(f"dart index {index} out of range")
        return Dart(
            index=index,
            tail=int(self.dart_tail[index]),
            head=int(self.dart_head[index]),
            reverse_index=int(self.dart_reverse[index]),
        )

    def darts(self) -> list[Dart]:
        return [self.dart(i) for i in range(self.dart_count)]

    def out_darts(self, vertex: int) -> list[int]:
        """Indices of darts whose tail is ``vertex``, ascending."""
        lo = self._out_darts_offsets[vertex]
        hi = self._out_darts_offsets[vertex + 1]
        return [int(d) for d in self._out_darts_flat[lo:hi]]

    def out_degree(self, dart_index: int) -> int:
        """Number of non-backtracking continuations: degree(head) - 1."""
        return int(self.degrees[self.dart_head[dart_index]]) - 1

    def in_degree(self, dart_index: int) -> int:
        return int(self.degrees[self.dart_tail[dart_index]]) - 1

    def out_degree_vector(self) -> np.ndarray:
        return self.degrees[self.dart_head] - 1

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, edges={len(self.edges)}, darts={self.dart_count})"


def build_graph(vertex_count: int, edge_list: list[tuple[int, int] | tuple[int, int, str]]) -> Graph:
    """Build a multigraph from ``(a, b)`` or ``(a, b, kind)`` tuples.

    Kinds are ``"normal"`` (default), ``"whole_loop"`` and ``"half_loop"``;
    a normal edge with equal endpoints is stored as a whole-loop.
    """
    edges = []
    for item in edge_list:
        if len(item) == 2:
            a, b = item  # type: ignore[misc]
            edges.append((a, b, NORMAL))
        else:
            edges.append(tuple(item))  # type: ignore[arg-type]
    return Graph(vertex_count, edges)


def dart_transitions(g: Graph, dart_index: int) -> list[int]:
    """Darts f with tail(f) = head(e) and f != reverse(e), ascending by index.

    The exclusion bars only the exact reverse dart, so a parallel copy of
    the reversed edge is a legal continuation.  A half-loop dart is its own
    reverse and is therefore excluded from its own continuations.
    """
    head = int(g.dart_head[dart_index])
    rev = int(g.dart_reverse[dart_index])
    return [d for d in g.out_darts(head) if d != rev]


def is_nb_irreducible(g: Graph) -> IrreducibilityVerdict:
    """Check connectivity, min degree >= 2, max degree > 2, in that order.

    These three conditions together are exactly when the non-backtracking
    walk visits every dart from every dart.
    """
    if g.vertex_count == 0:
        return IrreducibilityVerdict.NOT_CONNECTED
    if not _is_connected(g):
        return IrreducibilityVerdict.NOT_CONNECTED
    if g.vertex_count and int(g.degrees.min()) < 2:
        return IrreducibilityVerdict.MIN_DEGREE_BELOW_2
    if g.vertex_count and int(g.degrees.max()) <= 2:
        return IrreducibilityVerdict.IS_CYCLE
    return IrreducibilityVerdict.OK


def _is_connected(g: Graph) -> bool:
    if g.vertex_count <= 1:
        return True
    parent = list(range(g.vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in g.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    root = find(0)
    return all(find(v) == root for v in range(g.vertex_count))


# --- text format ------------------------------------------------------------
#
# Line-oriented UTF-8: '#' starts a comment line, the first data line is
# "nbgraph <vertex_count>", then one line per edge: "e <a> <b>" (a == b
# means whole-loop) or "hl <a>" for a half-loop.  Vertex ids are 0-based.


def parse_graph_text(text: str) -> Graph:
    vertex_count = None
    edges: list[tuple[int, int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if vertex_count is None:
            if fields[0] != "nbgraph" or len(fields) != 2:
                raise GraphParseError(lineno, "expected header 'nbgraph <vertex_count>'")
            try:
                vertex_count = int(fields[1])
            except ValueError:
                raise GraphParseError(lineno, f"invalid vertex count {fields[1]!r}") from None
            continue
        if fields[0] == "e" and len(fields) == 3:
            try:
                a, b = int(fields[1]), int(fields[2])
            except ValueError:
                raise GraphParseError(lineno, f"invalid edge endpoints in {line!r}") from None
            edges.append((a, b, WHOLE_LOOP if a == b else NORMAL))
        elif fields[0] == "hl" and len(fields) == 2:
            try:
                a = int(fields[1])
            except ValueError:
                raise GraphParseError(lineno, f"invalid half-loop vertex in {line!r}") from None
            edges.append((a, a, HALF_LOOP))
        else:
            raise GraphParseError(lineno, f"unrecognized line {line!r}")
        try:
            Graph(vertex_count, edges[-1:])
        except GraphError as exc:
            raise GraphParseError(lineno, str(exc)) from None
    if vertex_count is None:
        raise GraphParseError(1, "missing 'nbgraph' header")
    return Graph(vertex_count, edges)


def format_graph_text(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"# {part}")
    lines.append(f"nbgraph {g.vertex_count}")
    for a, b, kind in g.edges:
        if kind == HALF_LOOP:
            lines.append(f"hl {a}")
        else:
            lines.append(f"e {a} {b}")
    return "\n".join(lines) + "\n"


def load_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph_text(fh.read())


def save_graph(g: Graph, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph_text(g, comment))
