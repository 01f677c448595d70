"""Turan-type quantities at desk scale.

* ``ex_exact``: ex(n, H) with a witness, by exhaustive search for tiny n and
  by min-degree vertex extension with isomorph rejection beyond that.
* ``ex_random_subgraph``: the largest H-free subgraph of a given host, as
  e(G) minus a minimum hitting set of the copy hypergraph (or greedily).
* supersaturation checks and the random-subset / random-Turan experiments.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .canon import canonical_adjacency
from .enumeration import count_copies, enumerate_copies, has_copy
from .hypergraph import Hypergraph, build, derive_seed, gnp_sample, make_rng
from .metrics import Pattern, bound_formula_random_turan, compute_densities, compute_exponents, parse_alpha

EXHAUSTIVE_MAX_PAIRS = 10  # C(n,2) up to which ex_exact enumerates every graph


class BudgetExceeded(RuntimeError):
    """Raised instead of returning a value that might not be exact."""


def _graph(h: Pattern | Hypergraph) -> Hypergraph:
    return h.graph if isinstance(h, Pattern) else h


@dataclass(frozen=True)
class ExtremalRecord:
    n: int
    pattern: str
    ex_value: int
    witness: Hypergraph
    method: str  # "exhaustive" | "branch_and_bound"


def ex_exact(n: int, pattern: Pattern | Hypergraph, budget: int = 200_000) -> ExtremalRecord:
    """ex(n, H): the maximum number of edges of an H-free n-vertex graph."""
    h = _graph(pattern)
    name = pattern.name if isinstance(pattern, Pattern) else "H"
    if h.r != 2:
        raise ValueError("ex_exact handles graphs (r = 2)")
    value, edges, method = _ex_exact(n, h.n, h.edges, budget)
    return ExtremalRecord(n, name, value, build(max(n, 2), 2, edges), method)


@lru_cache(maxsize=None)
def _ex_exact(n: int, hn: int, hedges: tuple, budget: int):
    h = build(hn, 2, hedges)
    if n < 2:
        return 0, (), "exhaustive"
    pairs = list(combinations(range(n), 2))
    if n < hn:
        return len(pairs), tuple(pairs), "exhaustive"
    if len(pairs) <= EXHAUSTIVE_MAX_PAIRS:
        best: tuple = ()
        for mask in range(1 << len(pairs)):
            chosen = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            if len(chosen) > len(best) and not has_copy(build(n, 2, chosen), h):
                best = tuple(chosen)
        return len(best), best, "exhaustive"

    prev, _, _ = _ex_exact(n - 1, hn, hedges, budget)
    upper = (n * prev) // (n - 2)  # each edge survives n-2 of the n vertex deletions
    levels = _Levels(h, budget)
    for t in range(upper, prev - 1, -1):
        found = levels.get(n, t)
        if found:
            e, code = max(found, key=lambda item: (item[0], [-x for pair in item[1] for x in pair]))
            return e, code, "branch_and_bound"
    raise AssertionError("level search missed the (n-1)-vertex extremal graph")


class _Levels:
    """H-free graphs on k vertices with at least t edges, up to isomorphism.

    Deleting a minimum-degree vertex from such a graph leaves one with at
    least t - floor(2t/k) edges, so level (k, t) is generated by adding a
    vertex of degree d to level (k-1, t - floor(2t/k)) graphs, keeping d no
    larger than any degree in the result.
    """

    def __init__(self, h: Hypergraph, budget: int):
        self.h = h
        self.budget = budget
        self.cache: dict[tuple[int, int], list[tuple[int, tuple]]] = {}

    def get(self, k: int, t: int) -> list[tuple[int, tuple]]:
        t = max(t, 0)
        key = (k, t)
        if key not in self.cache:
            self.cache[key] = self._compute(k, t)
        return self.cache[key]

    def _compute(self, k: int, t: int) -> list[tuple[int, tuple]]:
        if k <= 1:
            return [(0, ())] if t <= 0 else []
        parents = self.get(k - 1, t - (2 * t) // k)
        seen: set[tuple] = set()
        out: list[tuple[int, tuple]] = []
        new = k - 1
        for e_p, code in parents:
            deg = [0] * (k - 1)
            adj = [0] * k
            for u, v in code:
                deg[u] += 1
                deg[v] += 1
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            low = min(deg) if deg else 0
            for d in range(max(0, t - e_p), min(low + 1, k - 1) + 1):
                forced = [u for u in range(k - 1) if deg[u] == d - 1]
                if len(forced) > d or any(x < d - 1 for x in deg):
                    continue
                optional = [u for u in range(k - 1) if deg[u] >= d]
                for extra in combinations(optional, d - len(forced)):
                    nbrs = forced + list(extra)
                    edges = list(code) + [(u, new) for u in nbrs]
                    g = build(k, 2, edges)
                    if has_copy(g, self.h, through=new):
                        continue
                    a = list(adj)
                    for u in nbrs:
                        a[u] |= 1 << new
                        a[new] |= 1 << u
                    canon = canonical_adjacency(k, a)
                    if canon not in seen:
                        seen.add(canon)
                        out.append((len(edges), canon))
                        if len(out) > self.budget:
                            raise BudgetExceeded(f"more than {self.budget} graphs at level ({k}, {t})")
        return out


# --- minimum hitting set of the copy hypergraph


def greedy_hitting_set(sets: Sequence[frozenset[int]], rng: np.random.Generator | None = None) -> list[int]:
    """Repeatedly take an element in the most unhit sets (ties: smallest, or random)."""
    alive = [s for s in sets]
    chosen: list[int] = []
    while alive:
        cnt = Counter(x for s in alive for x in s)
        top = max(cnt.values())
        ties = sorted(x for x, c in cnt.items() if c == top)
        x = ties[int(rng.integers(len(ties)))] if rng is not None and len(ties) > 1 else ties[0]
        chosen.append(x)
        alive = [s for s in alive if x not in s]
    return chosen


def min_hitting_set(sets: Iterable[Iterable[int]], node_budget: int = 500_000) -> list[int]:
    """Exact minimum hitting set by branch and bound.

    Branches on the elements of a smallest unhit set, excluding earlier
    siblings; bounds with a greedy packing of pairwise disjoint unhit sets.
    """
    family = sorted({frozenset(s) for s in sets}, key=lambda s: (len(s), sorted(s)))
    if any(not s for s in family):
        raise ValueError("the empty set cannot be hit")
    # supersets of other members are hit automatically
    minimal: list[frozenset[int]] = []
    for s in family:
        if not any(m <= s for m in minimal):
            minimal.append(s)
    best = greedy_hitting_set(minimal)
    nodes = 0

    def lower_bound(unhit: list[frozenset[int]]) -> int:
        used: set[int] = set()
        packed = 0
        for s in sorted(unhit, key=len):
            if used.isdisjoint(s):
                used |= s
                packed += 1
        return packed

    def solve(chosen: list[int], excluded: frozenset[int], unhit: list[frozenset[int]]) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"hitting-set search exceeded {node_budget} nodes")
        if not unhit:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        restricted = [s - excluded for s in unhit]
        if any(not s for s in restricted):
            return
        if len(chosen) + lower_bound(restricted) >= len(best):
            return
        pivot = min(restricted, key=lambda s: (len(s), sorted(s)))
        freq = Counter(x for s in restricted for x in s)
        excl = set(excluded)
        for x in sorted(pivot, key=lambda y: (-freq[y], y)):
            solve(chosen + [x], frozenset(excl), [s for s in unhit if x not in s])
            excl.add(x)

    solve([], frozenset(), minimal)
    return sorted(best)


@dataclass(frozen=True)
class FreeSubgraph:
    value: int
    kind: str  # "exact" | "greedy_lower_bound"
    removed: tuple[int, ...]
    copies: int


def ex_random_subgraph(
    g: Hypergraph,
    pattern: Pattern | Hypergraph,
    mode: str = "exact",
    seed: int | None = None,
    copy_budget: int = 5_000,
    node_budget: int = 500_000,
) -> FreeSubgraph:
    """Maximum number of edges of an H-free subgraph of g."""
    copies = [frozenset(c.edges) for c in enumerate_copies(g, pattern)]
    if mode == "exact":
        if len(copies) > copy_budget:
            raise BudgetExceeded(f"{len(copies)} copies exceed the budget of {copy_budget}")
        removed = min_hitting_set(copies, node_budget) if copies else []
        kind = "exact"
    elif mode == "greedy":
        rng = make_rng(seed) if seed is not None else None
        removed = _restore(copies, greedy_hitting_set(copies, rng))
        kind = "greedy_lower_bound"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return FreeSubgraph(g.e - len(removed), kind, tuple(sorted(removed)), len(copies))


def _restore(copies: Sequence[frozenset[int]], removed: list[int]) -> list[int]:
    """Put back, latest first, every deleted edge whose copies all stay broken."""
    out = set(removed)
    containing: dict[int, list[frozenset[int]]] = {}
    for c in copies:
        for x in c:
            containing.setdefault(x, []).append(c)
    for x in reversed(removed):
        if all(len(c & out) >= 2 for c in containing.get(x, ())):
            out.discard(x)
    return sorted(out)


def deletion_lower_bound(g: Hypergraph, ex_value: int) -> int:
    """e(G) - ex(n, H), floored at 0: copies of H that G must contain."""
    return max(0, g.e - ex_value)


# --- supersaturation experiments


@dataclass
class SubsetExperiment:
    n: int
    w: int
    p: float
    trials: int
    k: float
    edge_counts: list[int]
    copy_counts: list[int] | None
    good_fraction: float | None
    mean_edges: float | None
    stderr_edges: float | None
    expected_edges: float  # e(G) C(n-r, w-r)/C(n, w)
    expectation_lower_bound: float  # e(G) p^r / 2
    proof_copy_lower_bound: float  # e(G) p^{r-h} / 8
    empirical_c_h: float | None
    admissibility: dict[str, bool] = field(default_factory=dict)


def subset_probability(n: int, k: float, A: float, r: int, alpha) -> tuple[float, int, bool]:
    """Smallest p >= (8A/k)^{1/(r-alpha)} with np an integer >= r.

    Returns (p, w = np, whether p <= 2 (8A/k)^{1/(r-alpha)}).
    """
    base = (8 * A / k) ** (1 / (r - float(parse_alpha(alpha))))
    w = max(r, math.ceil(base * n - 1e-12))
    p = w / n
    if p >= 1:
        raise ValueError(f"(8A/k)^(1/(r-alpha)) = {base:.4g} forces p = {p:.4g} >= 1; need k >= 2^(3r) A")
    return p, w, p <= 2 * base


def random_subset_experiment(
    g: Hypergraph,
    pattern: Pattern,
    alpha,
    A: float,
    trials: int,
    seed: int,
    w: int | None = None,
    count: bool = True,
) -> SubsetExperiment:
    """Sample uniform w-subsets W and measure G[W] as in the random-subset argument.

    ``w`` overrides the size derived from (alpha, A).  A sample is good when
    e(G[W]) >= e(G) p^r / 4.
    """
    r, h = g.r, pattern.h
    alpha = parse_alpha(alpha)
    k = g.e / g.n ** float(alpha)
    in_range = True
    if w is None:
        p, w, in_range = subset_probability(g.n, k, A, r, alpha)
    else:
        if not 0 < w <= g.n:
            raise ValueError(f"subset size {w} outside 1..{g.n}")
        p = w / g.n
    expected = g.e * math.perm(w, r) / math.perm(g.n, r)
    edges: list[int] = []
    copies: list[int] | None = [] if count else None
    for t in range(trials):
        sub, _ = g.induced(_subset(g.n, w, seed, t))
        edges.append(sub.e)
        if copies is not None:
            copies.append(count_copies(sub, pattern) if sub.n >= pattern.h else 0)
    total = count_copies(g, pattern) if count else None
    scale = k ** ((h - float(alpha)) / (r - float(alpha))) * g.n ** float(alpha)
    arr = np.array(edges, dtype=float)
    return SubsetExperiment(
        n=g.n, w=w, p=p, trials=trials, k=k,
        edge_counts=edges,
        copy_counts=copies,
        good_fraction=float(np.mean(arr >= g.e * p**r / 4)) if trials else None,
        mean_edges=float(arr.mean()) if trials else None,
        stderr_edges=float(arr.std(ddof=1) / math.sqrt(trials)) if trials > 1 else None,
        expected_edges=expected,
        expectation_lower_bound=g.e * p**r / 2,
        proof_copy_lower_bound=g.e * p ** (r - h) / 8,
        empirical_c_h=total / scale if total is not None and scale > 0 else None,
        admissibility={"A_ge_r_2r": A >= r ** (2 * r), "k_ge_2_3r_A": k >= 2 ** (3 * r) * A,
                       "p_within_factor_2": in_range},
    )


def _subset(n: int, w: int, seed: int, trial: int) -> tuple[int, ...]:
    chosen = make_rng(seed, trial).choice(n, size=w, replace=False)
    return tuple(sorted(int(v) for v in chosen))


def es_good_check(g: Hypergraph, pattern: Pattern) -> dict:
    """copies / (e^l / n^{2l-h}): the empirical constant in the random-like count."""
    if g.r != 2:
        raise ValueError("the Erdos-Simonovits count form is for graphs")
    copies = count_copies(g, pattern)
    ell, h = pattern.ell, pattern.h
    scale = g.e**ell / g.n ** (2 * ell - h)
    return {"copies": copies, "edges": g.e, "n": g.n, "scale": scale,
            "ratio": copies / scale if scale else 0.0}


# --- random Turan sweep


@dataclass
class ExperimentRecord:
    n: int
    p: float
    seed: int
    trial: int
    measured: int | None
    measured_kind: str  # "exact" | "greedy_lower_bound" | "refused"
    bound_value: float
    branch: str
    runtime_ms: float
    edges: int = 0
    note: str = ""


CSV_COLUMNS = ["n", "p", "seed", "trial", "measured", "measured_kind", "bound_value", "branch", "runtime_ms"]


def _run_cell(args) -> ExperimentRecord:
    pattern, exps, n, p, trial, cell_seed, mode, variant, C, copy_budget, node_budget = args
    start = time.perf_counter()
    g = gnp_sample(n, p, 2, cell_seed)
    bound = bound_formula_random_turan(exps, n, p, variant, C)
    note = ""
    try:
        res = ex_random_subgraph(g, pattern, mode, seed=cell_seed, copy_budget=copy_budget,
                                 node_budget=node_budget)
        measured, kind = res.value, res.kind
    except BudgetExceeded as exc:
        measured, kind, note = None, "refused", str(exc)
    ms = (time.perf_counter() - start) * 1000
    return ExperimentRecord(n, p, cell_seed, trial, measured, kind, bound.value, bound.branch, ms, g.e, note)


def random_turan_sweep(
    pattern: Pattern,
    alpha,
    n_list: Sequence[int],
    p_list: Sequence[float],
    trials: int = 1,
    mode: str = "greedy",
    seed: int = 0,
    variant: str = "general",
    C: float = 1.0,
    copy_budget: int = 5_000,
    node_budget: int = 500_000,
    workers: int = 1,
) -> list[ExperimentRecord]:
    """One record per (n, p, trial) cell; cell i samples G(n,p) with seed derive_seed(seed, i)."""
    exps = compute_exponents(compute_densities(pattern), pattern, alpha)
    jobs = []
    for n in n_list:
        for p in p_list:
            for trial in range(trials):
                cell = len(jobs)
                jobs.append((pattern, exps, n, p, trial, derive_seed(seed, cell), mode, variant, C,
                             copy_budget, node_budget))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_cell, jobs))
    return [_run_cell(job) for job in jobs]


def sweep_summary(records: Sequence[ExperimentRecord]) -> dict:
    ratios = [r.measured / r.bound_value for r in records if r.measured is not None and r.bound_value > 0]
    return {
        "cells": len(records),
        "refused": sum(r.measured is None for r in records),
        "ratio_min": min(ratios) if ratios else None,
        "ratio_max": max(ratios) if ratios else None,
        "ratio_mean": float(np.mean(ratios)) if ratios else None,
    }
