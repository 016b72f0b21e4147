"""Generators for the graph families used throughout the package.

All generators label vertices canonically (hub first, junctions next,
subdivision vertices in edge order) so that emitted witnesses and text
files are reproducible.
"""

from __future__ import annotations

import warnings

from .graph import HALF_LOOP, Graph, build_graph


def k4_minus_edge() -> Graph:
    """Complete graph on four vertices minus one edge.

    Vertices 0 and 1 are the degree-3 endpoints of the surviving diagonal;
    vertices 2 and 3 have degree 2.  Ten darts in total.
    """
    return build_graph(4, [(0, 1), (0, 2), (2, 1), (0, 3), (3, 1)])


def complete_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("complete graph needs n >= 3")
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    if a < 2 or b < 2:
        raise ValueError("complete bipartite graph needs both sides >= 2")
    return build_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def wheel_graph(n: int, l1: int, l2: int) -> Graph:
    """Wheel with n spokes, cycle edges split into l1 segments and spokes
    into l2 segments.

    Vertex 0 is the hub (degree n), vertices 1..n are the cycle junctions
    (degree 3), and subdivision vertices (degree 2) follow in edge order:
    first the n cycle sections, then the n spokes.
    """
    if n < 3:
        raise ValueError("wheel needs n >= 3")
    if l1 < 1 or l2 < 1:
        raise ValueError("segment counts must be >= 1")
    edges: list[tuple[int, int]] = []
    next_vertex = n + 1

    def chain(u: int, v: int, segments: int) -> None:
        nonlocal next_vertex
        prev = u
        for _ in range(segments - 1):
            edges.append((prev, next_vertex))
            prev = next_vertex
            next_vertex += 1
        edges.append((prev, v))

    for i in range(n):
        chain(1 + i, 1 + (i + 1) % n, l1)
    for i in range(n):
        chain(0, 1 + i, l2)
    return build_graph(next_vertex, edges)


def equal_growth_wheel(k: int) -> Graph:
    """The k-th member of the subdivided-wheel family whose two growth
    rates coincide.

    With n = 2**k + 1 spokes, the cycle/spoke segment counts that balance
    the two suspended-path types are (2, k+1) for even k and (1, (k+1)/2)
    for odd k.  The two counts are then coprime, so the graph is not a
    plain subdivision of a smaller one.
    """
    if k < 1:
        raise ValueError("family index must be >= 1")
    if k > 20:
        warnings.warn(f"equal_growth_wheel({k}) has about 2**{k} vertices", stacklevel=2)
    n = 2**k + 1
    if k % 2 == 0:
        return wheel_graph(n, 2, k + 1)
    return wheel_graph(n, 1, (k + 1) // 2)


def equal_growth_wheel_parameters(k: int) -> tuple[int, int, int]:
    """(n, l1, l2) used by :func:`equal_growth_wheel`."""
    if k < 1:
        raise ValueError("family index must be >= 1")
    n = 2**k + 1
    return (n, 2, k + 1) if k % 2 == 0 else (n, 1, (k + 1) // 2)


def subdivide(g: Graph, m: int) -> Graph:
    """Replace every edge by a path of m edges (m-1 new degree-2 vertices).

    Whole-loops become cycles hanging on their anchor vertex; half-loops
    are rejected because a half-loop has no two-ended subdivision.
    """
    if m < 1:
        raise ValueError("subdivision factor must be >= 1")
    for a, _, kind in g.edges:
        if kind == HALF_LOOP:
            raise ValueError("cannot subdivide a graph with half-loops")
    if m == 1:
        return build_graph(g.vertex_count, list(g.edges))
    edges: list[tuple[int, int]] = []
    next_vertex = g.vertex_count
    for a, b, _ in g.edges:
        prev = a
        for _ in range(m - 1):
            edges.append((prev, next_vertex))
            prev = next_vertex
            next_vertex += 1
        edges.append((prev, b))
    return build_graph(next_vertex, edges)
