import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balsat.enumeration import (
    automorphism_count,
    count_copies,
    embedding_count,
    enumerate_copies,
    has_copy,
    is_copy,
)
from balsat.hypergraph import build, complete_bipartite, complete_graph, cycle, gnp_sample
from balsat.metrics import builtin_pattern

from oracles import maps_and_copies

C4 = builtin_pattern("cycle:4")


def test_copy_examples():
    assert len(list(enumerate_copies(complete_graph(4), C4))) == 3
    assert len(list(enumerate_copies(complete_bipartite(2, 3), C4))) == 3
    assert list(enumerate_copies(cycle(4), C4, forbidden=[[0]])) == []


def test_count_examples():
    assert count_copies(complete_graph(4), C4) == 3
    assert count_copies(cycle(6), C4) == 0
    assert count_copies(complete_bipartite(3, 3), builtin_pattern("cycle:6")) == 6


def test_embedding_examples():
    assert embedding_count(complete_graph(4), C4) == 24
    assert automorphism_count(C4) == 8
    k2 = complete_graph(2)
    assert embedding_count(k2, k2) == 2
    assert count_copies(k2, k2) == 1


def test_uniformity_mismatch():
    g = build(4, 3, [(0, 1, 2)])
    with pytest.raises(ValueError):
        count_copies(g, C4)
    with pytest.raises(ValueError):
        list(enumerate_copies(g, C4))


def test_canonical_order_and_limit():
    g = gnp_sample(12, 0.6, 2, seed=4)
    copies = list(enumerate_copies(g, C4))
    keys = [c.edges for c in copies]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    assert list(enumerate_copies(g, C4, limit=5)) == copies[:5]


def test_copies_have_the_right_shape():
    g = gnp_sample(11, 0.5, 2, seed=9)
    for c in enumerate_copies(g, builtin_pattern("path:4")):
        assert len(c.edges) == 3 and len(c.vertices) == 4
        assert is_copy(g, builtin_pattern("path:4"), c.edges)


def test_has_copy_through_vertex():
    g = complete_bipartite(2, 3)
    assert has_copy(g, C4)
    assert all(has_copy(g, C4, through=v) for v in range(g.n))
    assert not has_copy(build(5, 2, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4)]), C4, through=4)
    assert not has_copy(cycle(6), C4)


def test_disconnected_pattern_counted_once():
    two_edges = build(4, 2, [(0, 1), (2, 3)])
    g = complete_graph(5)
    # matchings of size two in K5: 15
    assert count_copies(g, two_edges) == 15
    assert embedding_count(g, two_edges) == 15 * automorphism_count(two_edges)


def test_three_uniform_counting():
    loose = build(5, 3, [(0, 1, 2), (2, 3, 4)])
    g = complete_graph(6, 3)
    maps, copies = maps_and_copies(6, g.edges, 5, loose.edges)
    assert count_copies(g, loose) == len(copies)
    assert embedding_count(g, loose) == maps


@st.composite
def instances(draw):
    n = draw(st.integers(3, 8))
    p = draw(st.sampled_from([0.3, 0.5, 0.7, 0.9]))
    g = gnp_sample(n, p, 2, draw(st.integers(0, 10**6)))
    spec = draw(st.sampled_from(["cycle:4", "path:3", "path:4", "cycle:5", "complete_bipartite:2:3",
                                 "cycle:6", "complete:4", "path:5"]))
    return g, spec


@settings(max_examples=120, deadline=None)
@given(instances())
def test_counts_match_permutation_oracle(inst):
    g, spec = inst
    pat = builtin_pattern(spec)
    maps, copies = maps_and_copies(g.n, g.edges, pat.h, pat.graph.edges)
    assert embedding_count(g, pat) == maps
    assert count_copies(g, pat) == len(copies)
    assert {frozenset(c.edges) for c in enumerate_copies(g, pat)} == copies
    assert count_copies(g, pat) * automorphism_count(pat) == maps


@settings(max_examples=80, deadline=None)
@given(instances(), st.randoms(use_true_random=False))
def test_relabel_invariance(inst, rnd):
    g, spec = inst
    perm = list(range(g.n))
    rnd.shuffle(perm)
    pat = builtin_pattern(spec)
    assert count_copies(g.relabel(perm), pat) == count_copies(g, pat)


@settings(max_examples=80, deadline=None)
@given(instances(), st.randoms(use_true_random=False))
def test_forbidden_filter(inst, rnd):
    g, spec = inst
    pat = builtin_pattern(spec)
    if g.e == 0:
        return
    forbidden = []
    for _ in range(rnd.randint(1, 3)):
        size = rnd.randint(1, min(2, g.e))
        forbidden.append(frozenset(rnd.sample(range(g.e), size)))
    everything = [frozenset(c.edges) for c in enumerate_copies(g, pat)]
    kept = [frozenset(c.edges) for c in enumerate_copies(g, pat, forbidden=forbidden)]
    assert not any(f <= c for c in kept for f in forbidden)
    # inclusion-exclusion over the forbidden sets
    hit = 0
    for m in range(1, len(forbidden) + 1):
        for group in combinations(forbidden, m):
            union = frozenset().union(*group)
            hit += (-1) ** (m + 1) * sum(1 for c in everything if union <= c)
    assert len(everything) - len(kept) == hit
