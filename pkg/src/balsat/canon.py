"""Canonical labelling of small simple graphs for isomorph rejection.

Individualisation-refinement: the ordered partition is refined by neighbour
counts until equitable, then each vertex of the first non-singleton cell is
individualised in turn.  Twins (vertices with the same neighbourhood apart
from each other) are interchangeable, so only one per twin class is tried.
The canonical form is the lexicographically smallest relabelled edge list
over all leaves.
"""

from __future__ import annotations

from .hypergraph import Hypergraph


def _refine(cells: list[list[int]], adj: list[int]) -> list[list[int]]:
    while True:
        masks = [sum(1 << v for v in cell) for cell in cells]
        out: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                sig = tuple((adj[v] & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) > 1:
                changed = True
            for sig in sorted(groups):
                out.append(groups[sig])
        cells = out
        if not changed:
            return cells


def _twin_representatives(cell: list[int], adj: list[int]) -> list[int]:
    reps: list[int] = []
    for v in cell:
        if not any((adj[v] & ~(1 << u)) == (adj[u] & ~(1 << v)) for u in reps):
            reps.append(v)
    return reps


def canonical_adjacency(n: int, adj: list[int]) -> tuple[tuple[int, int], ...]:
    """Canonical edge list of the graph with adjacency bitmasks ``adj``."""
    best: tuple[tuple[int, int], ...] | None = None
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if adj[u] >> v & 1]

    def leaf(cells: list[list[int]]) -> None:
        nonlocal best
        label = {cell[0]: i for i, cell in enumerate(cells)}
        code = tuple(sorted(tuple(sorted((label[u], label[v]))) for u, v in edges))
        if best is None or code < best:
            best = code

    def search(cells: list[list[int]]) -> None:
        cells = _refine(cells, adj)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            leaf(cells)
            return
        cell = cells[target]
        for v in _twin_representatives(cell, adj):
            rest = [u for u in cell if u != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    if n == 0:
        return ()
    search([list(range(n))])
    assert best is not None
    return best


def adjacency(g: Hypergraph) -> list[int]:
    if g.r != 2:
        raise ValueError("canonical forms are implemented for graphs only")
    adj = [0] * g.n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def canonical_form(g: Hypergraph) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Isomorphism-invariant key: equal keys iff the graphs are isomorphic."""
    return g.n, canonical_adjacency(g.n, adjacency(g))
