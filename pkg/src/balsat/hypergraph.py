"""r-uniform hypergraphs: construction, standard hosts, sampling, edge-list I/O."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Edge = tuple[int, ...]
EdgeSet = tuple[int, ...]  # strictly increasing indices into Hypergraph.edges


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Counter-based Philox stream for ``seed``, optionally split by ``keys``."""
    ss = np.random.SeedSequence([int(seed), *map(int, keys)])
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: int, *keys: int) -> int:
    """A 63-bit child seed, stable across platforms."""
    state = np.random.SeedSequence([int(seed), *map(int, keys)]).generate_state(2, np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])


@dataclass(frozen=True)
class Hypergraph:
    n: int
    r: int
    edges: tuple[Edge, ...]
    incidence: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    duplicates_dropped: int = field(default=0, repr=False, compare=False)

    @property
    def e(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def edge_index(self) -> dict[Edge, int]:
        idx = self.__dict__.get("_edge_index")
        if idx is None:
            idx = {edge: i for i, edge in enumerate(self.edges)}
            object.__setattr__(self, "_edge_index", idx)
        return idx

    @property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        """Vertices sharing at least one edge with each vertex."""
        nb = self.__dict__.get("_neighbors")
        if nb is None:
            sets: list[set[int]] = [set() for _ in range(self.n)]
            for edge in self.edges:
                for v in edge:
                    sets[v].update(edge)
            for v, s in enumerate(sets):
                s.discard(v)
            nb = tuple(frozenset(s) for s in sets)
            object.__setattr__(self, "_neighbors", nb)
        return nb

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def has_edge(self, vertices: Iterable[int]) -> bool:
        return tuple(sorted(vertices)) in self.edge_index

    def vertices_of(self, edge_set: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted({v for i in edge_set for v in self.edges[i]}))

    def relabel(self, perm: Sequence[int]) -> Hypergraph:
        """Apply the vertex map ``v -> perm[v]``."""
        return build(self.n, self.r, [[perm[v] for v in edge] for edge in self.edges])

    def induced(self, vertices: Iterable[int]) -> tuple[Hypergraph, tuple[int, ...]]:
        """Induced subgraph relabelled to 0..w-1, plus the new->old vertex map."""
        keep = tuple(sorted(set(vertices)))
        pos = {v: i for i, v in enumerate(keep)}
        seen = set()
        for v in keep:
            for i in self.incidence[v]:
                seen.add(i)
        sub = [
            [pos[v] for v in self.edges[i]]
            for i in sorted(seen)
            if all(v in pos for v in self.edges[i])
        ]
        return build(max(len(keep), self.r), self.r, sub), keep

    def edge_subgraph(self, edge_set: Iterable[int]) -> tuple[Hypergraph, tuple[int, ...]]:
        """Subgraph spanned by the given edges, relabelled onto its vertices."""
        chosen = [self.edges[i] for i in sorted(set(edge_set))]
        verts = tuple(sorted({v for edge in chosen for v in edge}))
        pos = {v: i for i, v in enumerate(verts)}
        sub = [[pos[v] for v in edge] for edge in chosen]
        return build(max(len(verts), self.r), self.r, sub), verts

    def check(self) -> None:
        """Raise AssertionError if an invariant is broken."""
        assert len(set(self.edges)) == len(self.edges)
        for edge in self.edges:
            assert len(edge) == self.r and len(set(edge)) == self.r
            assert list(edge) == sorted(edge) and edge[-1] < self.n
        assert self.incidence == _incidence(self.n, self.edges)


def _incidence(n: int, edges: Sequence[Edge]) -> tuple[tuple[int, ...], ...]:
    inc: list[list[int]] = [[] for _ in range(n)]
    for i, edge in enumerate(edges):
        for v in edge:
            inc[v].append(i)
    return tuple(tuple(lst) for lst in inc)


def build(n: int, r: int, edges: Iterable[Iterable[int]]) -> Hypergraph:
    """Normalise ``edges`` into a Hypergraph.

    Edges are sorted internally and the edge list is sorted lexicographically;
    duplicates are dropped and counted in ``duplicates_dropped``.
    """
    if r < 2:
        raise ValueError(f"uniformity must be at least 2, got r={r}")
    if n < r:
        raise ValueError(f"need n >= r, got n={n}, r={r}")
    normed: set[Edge] = set()
    total = 0
    for raw in edges:
        edge = tuple(sorted(int(v) for v in raw))
        total += 1
        if len(edge) != r:
            raise ValueError(f"edge {raw!r} does not have {r} vertices")
        if len(set(edge)) != r:
            raise ValueError(f"edge {raw!r} repeats a vertex")
        if edge[0] < 0 or edge[-1] >= n:
            raise ValueError(f"edge {raw!r} has a vertex outside 0..{n - 1}")
        normed.add(edge)
    ordered = tuple(sorted(normed))
    return Hypergraph(n, r, ordered, _incidence(n, ordered), total - len(ordered))


def empty(n: int, r: int = 2) -> Hypergraph:
    return build(n, r, [])


def complete_graph(n: int, r: int = 2) -> Hypergraph:
    if n < max(r, 2):
        raise ValueError("complete graph needs n >= max(r, 2)")
    return build(n, r, combinations(range(n), r))


def complete_bipartite(a: int, b: int) -> Hypergraph:
    """K_{a,b} with parts {0..a-1} and {a..a+b-1}."""
    if a < 1 or b < 1:
        raise ValueError("both parts need at least one vertex")
    return build(a + b, 2, [(i, a + j) for i in range(a) for j in range(b)])


def cycle(length: int) -> Hypergraph:
    """The cycle 0-1-...-(length-1)-0; ``cycle(2*l)`` is C_{2l}."""
    if length < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return build(length, 2, [(i, (i + 1) % length) for i in range(length)])


def path(vertices: int) -> Hypergraph:
    if vertices < 2:
        raise ValueError("a path needs at least 2 vertices")
    return build(vertices, 2, [(i, i + 1) for i in range(vertices - 1)])


def cube(dim: int = 3) -> Hypergraph:
    """The hypercube Q_dim."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    n = 1 << dim
    return build(n, 2, [(v, v ^ (1 << b)) for v in range(n) for b in range(dim) if v < v ^ (1 << b)])


def gnp_sample(n: int, p: float, r: int = 2, seed: int = 0) -> Hypergraph:
    """Binomial random r-graph: each r-subset of [n] kept independently with prob. p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    candidates = math.comb(n, r)
    draws = make_rng(seed).random(candidates)
    keep = draws < p
    return build(n, r, (c for c, k in zip(combinations(range(n), r), keep) if k))


def uniform_vertex_subset(g: Hypergraph, w: int, seed: int) -> tuple[int, ...]:
    """A uniformly random w-subset of V(g), sorted."""
    if not 0 <= w <= g.n:
        raise ValueError(f"subset size {w} outside 0..{g.n}")
    chosen = make_rng(seed).choice(g.n, size=w, replace=False)
    return tuple(sorted(int(v) for v in chosen))


@dataclass(frozen=True)
class BinomRatio:
    """C(n-h, w-h)/C(n, w) against (w/n)^h and, when w >= h^2, (1/2)(w/n)^h."""

    ratio: Fraction
    upper: Fraction
    lower: Fraction | None
    upper_holds: bool
    lower_holds: bool | None


def binom_ratio_bounds(n: int, w: int, h: int) -> BinomRatio:
    if not (n >= w >= h >= 0 and n >= 1):
        raise ValueError(f"need n >= w >= h >= 0, got n={n}, w={w}, h={h}")
    # C(n-h, w-h)/C(n, w) = w(w-1)...(w-h+1) / n(n-1)...(n-h+1)
    ratio = Fraction(math.perm(w, h), math.perm(n, h))
    upper = Fraction(w, n) ** h
    lower = upper / 2 if w >= h * h else None
    return BinomRatio(
        ratio=ratio,
        upper=upper,
        lower=lower,
        upper_holds=ratio <= upper,
        lower_holds=None if lower is None else ratio >= lower,
    )


# --- edge-list text format: "n m r" header, then m lines of r vertex ids; '#' comments


def format_edgelist(g: Hypergraph, header: Sequence[str] = ()) -> str:
    lines = [f"# {line}" for line in header]
    lines.append(f"{g.n} {g.e} {g.r}")
    lines.extend(" ".join(map(str, edge)) for edge in g.edges)
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str) -> Hypergraph:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append([int(tok) for tok in line.split()])
    if not rows or len(rows[0]) != 3:
        raise ValueError("edge list must start with a 'n m r' line")
    n, m, r = rows[0]
    body = rows[1:]
    if len(body) != m:
        raise ValueError(f"header promises {m} edges, found {len(body)}")
    return build(n, r, body)


def read_edgelist(path: str | Path) -> Hypergraph:
    return parse_edgelist(Path(path).read_text())


def write_edgelist(g: Hypergraph, path: str | Path, header: Sequence[str] = ()) -> None:
    Path(path).write_text(format_edgelist(g, header))
