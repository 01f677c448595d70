"""Copies and embeddings of a small pattern H inside a host G.

The kernel is a vertex-by-vertex backtracking search.  Pattern vertices are
visited in BFS order so every new vertex (within a component) has an already
placed neighbour; its candidates are the common host neighbours of the images
of those placed neighbours, filtered by degree.  A pattern edge is checked the
moment its last vertex is placed, and forbidden edge sets are pruned as soon as
the partial edge image contains one.

A copy is the *edge set* of an embedding; embeddings are deduplicated on that
set, so each copy is found |Aut(H)| times and reported once.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .hypergraph import Hypergraph
from .metrics import Pattern


@dataclass(frozen=True, order=True)
class Copy:
    edges: tuple[int, ...]
    vertices: tuple[int, ...] = field(compare=False)


class _Stop(Exception):
    pass


def _as_graph(h: Pattern | Hypergraph) -> Hypergraph:
    return h.graph if isinstance(h, Pattern) else h


def search_order(h: Hypergraph, start: int | None = None) -> list[int]:
    """BFS order over the components of h, each rooted at a max-degree vertex."""
    seen = [False] * h.n
    order: list[int] = []
    roots = sorted(range(h.n), key=lambda v: (-h.degree(v), v))
    if start is not None:
        roots.insert(0, start)
    for root in roots:
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(h.neighbors[v]):
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
    return order


def _plan(h: Hypergraph, order: Sequence[int]):
    pos = {v: i for i, v in enumerate(order)}
    anchors = []
    closing = []
    for i, v in enumerate(order):
        anchors.append([u for u in h.neighbors[v] if pos[u] < i])
        closing.append([
            j for j in h.incidence[v]
            if max(pos[u] for u in h.edges[j]) == i
        ])
    return anchors, closing


def _search(
    g: Hypergraph,
    h: Hypergraph,
    visit: Callable[[list[int], list[int]], None],
    forbidden: Iterable[Iterable[int]] = (),
    order: Sequence[int] | None = None,
    first_candidates: Iterable[int] | None = None,
) -> None:
    """Call ``visit(image, edge_image)`` for every embedding of h into g.

    ``image[v]`` is the host vertex of pattern vertex v, ``edge_image[j]`` the
    host edge index of pattern edge j.  ``visit`` may raise ``_Stop``.
    """
    if g.r != h.r:
        raise ValueError(f"uniformity mismatch: host r={g.r}, pattern r={h.r}")
    if h.n > g.n or h.e > g.e:
        return
    order = list(order) if order is not None else search_order(h)
    anchors, closing = _plan(h, order)
    index = g.edge_index
    nbrs = g.neighbors
    hdeg = [h.degree(v) for v in range(h.n)]
    gdeg = [g.degree(v) for v in range(g.n)]
    all_vertices = range(g.n)

    forb_by_edge: dict[int, list[frozenset[int]]] = defaultdict(list)
    for raw in forbidden:
        fs = frozenset(raw)
        if not fs:
            return  # the empty set is contained in every copy
        for e in fs:
            forb_by_edge[e].append(fs)
    use_forbidden = bool(forb_by_edge)

    image = [-1] * h.n
    edge_image = [-1] * h.e
    used: set[int] = set()
    placed: set[int] = set()  # host edge indices in the partial image
    depth_total = len(order)

    def step(depth: int) -> None:
        if depth == depth_total:
            visit(image, edge_image)
            return
        v = order[depth]
        anc = anchors[depth]
        if anc:
            cand = nbrs[image[anc[0]]]
            for a in anc[1:]:
                cand = cand & nbrs[image[a]]
        elif depth == 0 and first_candidates is not None:
            cand = first_candidates
        else:
            cand = all_vertices
        need = hdeg[v]
        for c in sorted(cand):
            if c in used or gdeg[c] < need:
                continue
            image[v] = c
            new_edges = []
            ok = True
            for j in closing[depth]:
                idx = index.get(tuple(sorted(image[u] for u in h.edges[j])))
                if idx is None:
                    ok = False
                    break
                edge_image[j] = idx
                new_edges.append(idx)
            if ok and use_forbidden:
                trial = placed.union(new_edges)
                for idx in new_edges:
                    if any(fs <= trial for fs in forb_by_edge.get(idx, ())):
                        ok = False
                        break
            if ok:
                used.add(c)
                placed.update(new_edges)
                step(depth + 1)
                placed.difference_update(new_edges)
                used.discard(c)
            image[v] = -1

    step(0)


def embedding_count(g: Hypergraph | Pattern, h: Hypergraph | Pattern) -> int:
    """Number of injective homomorphisms h -> g."""
    count = 0

    def visit(image, edge_image):
        nonlocal count
        count += 1

    _search(_as_graph(g), _as_graph(h), visit)
    return count


def automorphism_count(h: Hypergraph | Pattern) -> int:
    return embedding_count(h, h)


def _collect(g: Hypergraph, h: Hypergraph, forbidden) -> dict[tuple[int, ...], tuple[int, ...]]:
    found: dict[tuple[int, ...], tuple[int, ...]] = {}

    def visit(image, edge_image):
        key = tuple(sorted(edge_image))
        if key not in found:
            found[key] = tuple(sorted(image))

    _search(g, h, visit, forbidden=forbidden or ())
    return found


def enumerate_copies(
    g: Hypergraph,
    h: Hypergraph | Pattern,
    limit: int | None = None,
    forbidden: Iterable[Iterable[int]] | None = None,
) -> Iterator[Copy]:
    """Copies of h in g in lexicographic order of their sorted edge-index tuples.

    Copies whose edge set contains any of ``forbidden`` are skipped.
    """
    found = _collect(g, _as_graph(h), forbidden)
    for i, key in enumerate(sorted(found)):
        if limit is not None and i >= limit:
            return
        yield Copy(key, found[key])


def count_copies(g: Hypergraph, h: Hypergraph | Pattern) -> int:
    seen: set[tuple[int, ...]] = set()

    def visit(image, edge_image):
        seen.add(tuple(sorted(edge_image)))

    _search(g, _as_graph(h), visit)
    return len(seen)


def has_copy(g: Hypergraph, h: Hypergraph | Pattern, through: int | None = None) -> bool:
    """Whether g contains h, optionally using host vertex ``through``."""
    hg = _as_graph(h)

    def visit(image, edge_image):
        raise _Stop

    try:
        if through is None:
            _search(g, hg, visit)
        else:
            for u in range(hg.n):
                _search(g, hg, visit, order=search_order(hg, start=u), first_candidates=(through,))
    except _Stop:
        return True
    return False


def is_copy(g: Hypergraph, h: Hypergraph | Pattern, edge_set: Iterable[int]) -> bool:
    """Whether the given host edges span a subgraph isomorphic to h."""
    hg = _as_graph(h)
    edge_set = sorted(set(edge_set))
    if len(edge_set) != hg.e or any(not 0 <= i < g.e for i in edge_set):
        return False
    sub, verts = g.edge_subgraph(edge_set)
    if len(verts) != hg.n:
        return False
    # same vertex and edge counts, so any embedding is onto
    return has_copy(sub, hg)
