import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from balsat.hypergraph import build, cycle
from balsat.metrics import (
    Pattern,
    bound_formula_random_turan,
    builtin_pattern,
    compute_densities,
    compute_exponents,
    is_r_partite,
    threshold_shape,
)

from oracles import subgraph_densities


def exps_for(spec, alpha, k=None, n=None):
    pat = builtin_pattern(spec)
    return compute_exponents(compute_densities(pat), pat, alpha, k, n)


@pytest.mark.parametrize(
    "spec, m, mstar",
    [
        ("cycle:4", Fraction(3, 2), Fraction(1)),
        ("cycle:6", Fraction(5, 4), Fraction(1)),
        ("complete_bipartite:3:3", Fraction(2), None),
    ],
)
def test_density_examples(spec, m, mstar):
    rep = compute_densities(builtin_pattern(spec))
    assert rep.m_r == m
    if mstar is not None:
        assert rep.m_star_r == mstar
        assert rep.strictly_balanced


def test_density_needs_more_vertices_than_r():
    single = build(3, 3, [(0, 1, 2)])
    with pytest.raises(ValueError):
        compute_densities(single)


@pytest.mark.parametrize("half", range(2, 7))
def test_even_cycle_densities(half):
    rep = compute_densities(builtin_pattern(f"cycle:{2 * half}"))
    assert rep.m_r == Fraction(2 * half - 1, 2 * half - 2)
    assert rep.m_star_r == 1


def test_witnesses_reproduce_ratio():
    for spec in ["cycle:4", "cube", "complete_bipartite:2:3", "path:5", "complete:4"]:
        pat = builtin_pattern(spec)
        rep = compute_densities(pat)
        assert rep.witness_mr.ratio(2) == rep.m_r
        assert rep.witness_mstar.ratio(2) == rep.m_star_r
        assert rep.m_r >= rep.m_star_r


def test_is_r_partite_examples():
    assert is_r_partite(cycle(4)) == ((0, 2), (1, 3))
    assert is_r_partite(cycle(5)) is None
    assert is_r_partite(build(3, 3, [(0, 1, 2)])) == ((0,), (1,), (2,))


def test_partition_is_proper():
    for spec in ["cube", "complete_bipartite:3:3", "cycle:8", "path:6"]:
        pat = builtin_pattern(spec)
        parts = pat.partition
        colour = {v: i for i, part in enumerate(parts) for v in part}
        assert all(len({colour[v] for v in e}) == pat.r for e in pat.graph.edges)


def test_pattern_rejects_small_or_isolated():
    with pytest.raises(ValueError):
        Pattern.of(build(3, 2, [(0, 1)]))
    with pytest.raises(ValueError):
        Pattern.of(build(5, 2, [(0, 1), (1, 2)]))


def test_exponent_examples():
    c4 = exps_for("cycle:4", "3/2")
    assert c4.lam == Fraction(4, 3)
    assert c4.lam_star == 2
    assert c4.phi == Fraction(1, 6)
    c6 = exps_for("cycle:6", "4/3")
    assert c6.lam_star == Fraction(3, 2)
    assert c6.phi == Fraction(2, 15)


def test_exponents_float_alpha_and_betas():
    e = exps_for("cycle:4", 1.5, k=16.0, n=100)
    assert isinstance(e.lam, float)
    assert e.beta_thm1 == pytest.approx(16 ** (-4 / 3))
    assert e.beta_thm2 == pytest.approx(max(100 ** (-1 / 6) / 16, 16**-2.0))


def test_exponent_errors():
    with pytest.raises(ValueError):
        exps_for("cycle:4", 2)


def test_admissibility_flag():
    assert exps_for("cycle:4", "3/2").alpha_admissible
    # alpha = 2 - 1/m_2 is the boundary: lambda = 1 exactly
    assert not exps_for("cycle:4", "4/3").alpha_admissible


def test_bound_examples():
    e = exps_for("cycle:4", "3/2")
    assert threshold_shape(e, "es_good") == (Fraction(1, 3), 4)
    # the log factor keeps the threshold above 1 until n is astronomically large
    n, p = 10**30, 0.9
    got = bound_formula_random_turan(e, n, p, "es_good")
    assert got.branch == "high"
    assert got.value == pytest.approx(p**0.5 * n**1.5, rel=1e-12)
    c6 = exps_for("cycle:6", "4/3")
    assert c6.alpha - c6.phi == Fraction(6, 5)
    low = bound_formula_random_turan(c6, 1000, 1e-4, "es_good")
    assert low.branch == "low"
    assert low.value == pytest.approx(1000**1.2 * math.log(1000) ** 2, rel=1e-12)


def test_general_bound_branches():
    e = exps_for("cycle:4", "3/2")
    n = 400
    low = bound_formula_random_turan(e, n, n ** (-2 / 3) / 2)
    assert low.branch == "low"
    assert low.value == pytest.approx(n ** (4 / 3))
    high = bound_formula_random_turan(e, n, 0.5, C=3.0)
    assert high.value == pytest.approx(3 * 0.5**0.25 * n**1.5)
    with pytest.raises(ValueError):
        bound_formula_random_turan(e, n, 1.5)


@pytest.mark.parametrize("half", range(2, 7))
def test_even_cycle_bound_specialisation(half):
    e = exps_for(f"cycle:{2 * half}", Fraction(half + 1, half))
    assert e.lam_star == Fraction(half, half - 1)
    assert e.phi == Fraction(half - 1, half * (2 * half - 1))
    a, b = threshold_shape(e, "es_good")
    assert a == Fraction(half - 1, 2 * half - 1)
    assert b == 2 * half
    rng = random.Random(half)
    for _ in range(20):
        n = rng.randint(50, 10**6)
        p = rng.random()
        got = bound_formula_random_turan(e, n, p, "es_good")
        thr = n ** (-(half - 1) / (2 * half - 1)) * math.log(n) ** (2 * half)
        assert math.isclose(got.threshold, thr, rel_tol=1e-12)
        if p <= thr:
            want = n ** (1 + 1 / (2 * half - 1)) * math.log(n) ** 2
        else:
            want = p ** (1 / half) * n ** (1 + 1 / half)
        assert math.isclose(got.value, want, rel_tol=1e-12)


@st.composite
def small_patterns(draw):
    n = draw(st.integers(3, 7))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), min_size=2, max_size=9, unique=True))
    used = sorted({v for e in edges for v in e})
    relabel = {v: i for i, v in enumerate(used)}
    return build(len(used), 2, [(relabel[a], relabel[b]) for a, b in edges])


@settings(max_examples=60, deadline=None)
@given(small_patterns())
def test_densities_match_brute_force(g):
    if g.n <= g.r:
        return
    rep = compute_densities(g)
    assert (rep.m_r, rep.m_star_r) == subgraph_densities(g.n, g.r, list(g.edges))


@settings(max_examples=60, deadline=None)
@given(small_patterns(), st.fractions(min_value=0, max_value=Fraction(19, 10), max_denominator=20))
def test_lambda_at_most_lambda_star(g, alpha):
    if g.n <= 2:
        return
    pat = Pattern.of(g)
    e = compute_exponents(compute_densities(pat), pat, alpha)
    assert e.lam <= e.lam_star
