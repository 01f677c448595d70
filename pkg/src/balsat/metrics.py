"""Densities of a forbidden pattern and the exponents derived from them.

Everything that can be exact is exact: densities are ``Fraction`` and so are
lambda, lambda* and phi whenever alpha is rational.  Quantities that involve
real powers of k or n (the codegree ratios, the bound formulas) are floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .hypergraph import Hypergraph, complete_bipartite, complete_graph, cube, cycle, path

Number = Fraction | float


@dataclass(frozen=True)
class Pattern:
    graph: Hypergraph
    name: str = "H"
    partition: tuple[tuple[int, ...], ...] | None = None

    @classmethod
    def of(cls, graph: Hypergraph, name: str = "H") -> Pattern:
        if graph.e < 2:
            raise ValueError("a pattern needs at least two edges")
        if any(graph.degree(v) == 0 for v in range(graph.n)):
            raise ValueError("pattern has isolated vertices")
        return cls(graph, name, is_r_partite(graph))

    @property
    def h(self) -> int:
        return self.graph.n

    @property
    def ell(self) -> int:
        return self.graph.e

    @property
    def r(self) -> int:
        return self.graph.r

    @property
    def r_partite(self) -> bool:
        return self.partition is not None


def builtin_pattern(spec: str) -> Pattern:
    """Patterns by descriptor: ``cycle:6``, ``complete_bipartite:3:3``,
    ``complete:4``, ``path:5`` (vertex count) or ``cube`` / ``cube:3``."""
    kind, *args = spec.split(":")
    nums = [int(a) for a in args]
    makers = {
        "cycle": cycle,
        "complete_bipartite": complete_bipartite,
        "complete": complete_graph,
        "path": path,
        "cube": cube,
    }
    if kind not in makers:
        raise ValueError(f"unknown builtin pattern {spec!r}")
    return Pattern.of(makers[kind](*nums), name=spec)


def is_r_partite(g: Hypergraph) -> tuple[tuple[int, ...], ...] | None:
    """Split V(g) into r parts meeting every edge in exactly one vertex.

    Returns the parts, or None when no such partition exists.  Plain
    backtracking; meant for patterns with a dozen or so vertices.
    """
    r = g.r
    color = [-1] * g.n
    # vertices in BFS order so that constraints bite early
    order: list[int] = []
    seen = [False] * g.n
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(g.neighbors[v]):
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)

    def consistent(v: int) -> bool:
        for i in g.incidence[v]:
            used = [color[u] for u in g.edges[i] if color[u] >= 0]
            if len(used) != len(set(used)):
                return False
        return True

    def assign(pos: int) -> bool:
        if pos == len(order):
            return True
        v = order[pos]
        # symmetry: a vertex may open at most one new colour
        limit = min(r, max(color) + 2) if pos else 1
        for c in range(limit):
            color[v] = c
            if consistent(v) and assign(pos + 1):
                return True
        color[v] = -1
        return False

    if not assign(0):
        return None
    return tuple(tuple(v for v in range(g.n) if color[v] == c) for c in range(r))


@dataclass(frozen=True)
class Subgraph:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]  # indices into the pattern's edge list

    def ratio(self, r: int) -> Fraction:
        return Fraction(len(self.edges) - 1, len(self.vertices) - r)


@dataclass(frozen=True)
class DensityReport:
    m_r: Fraction
    m_star_r: Fraction
    witness_mr: Subgraph
    witness_mstar: Subgraph

    @property
    def strictly_balanced(self) -> bool:
        return self.m_r > self.m_star_r


def compute_densities(pattern: Pattern | Hypergraph) -> DensityReport:
    """r-density and proper r-density by maximising over vertex subsets.

    For a fixed vertex set U the ratio (e(F)-1)/(|U|-r) is largest when F takes
    every edge inside U, so m_r only needs induced subgraphs.  The proper
    density additionally allows H minus one edge on the full vertex set, the
    only proper subgraph not dominated by an induced one on fewer vertices.
    """
    g = pattern.graph if isinstance(pattern, Pattern) else pattern
    r, h = g.r, g.n
    if h <= r:
        raise ValueError(f"need v(H) > r, got v(H)={h}, r={r}")
    best: Subgraph | None = None
    best_proper: Subgraph | None = None
    for size in range(r + 1, h + 1):
        for verts in combinations(range(h), size):
            inside = set(verts)
            edges = tuple(i for i, edge in enumerate(g.edges) if inside.issuperset(edge))
            cand = Subgraph(verts, edges)
            if best is None or cand.ratio(r) > best.ratio(r):
                best = cand
            if size < h and (best_proper is None or cand.ratio(r) > best_proper.ratio(r)):
                best_proper = cand
    if g.e >= 1:
        minus_one = Subgraph(tuple(range(h)), tuple(range(g.e - 1)))
        if best_proper is None or minus_one.ratio(r) > best_proper.ratio(r):
            best_proper = minus_one
    assert best is not None and best_proper is not None
    return DensityReport(best.ratio(r), best_proper.ratio(r), best, best_proper)


def parse_alpha(x: Number | str | int) -> Number:
    """Exact rational for ints, Fractions and strings like '3/2' or '1.5'; floats pass through."""
    if isinstance(x, (Fraction, int, str)):
        return Fraction(x)
    return float(x)


_exact = parse_alpha


@dataclass(frozen=True)
class ExponentSet:
    alpha: Number
    r: int
    h: int
    ell: int
    lam: Number
    lam_star: Number
    phi: Number | None
    k: float | None = None
    n: int | None = None
    beta_thm1: float | None = None
    beta_thm2: float | None = None

    @property
    def alpha_admissible(self) -> bool:
        """alpha > r - 1/m_r(H), equivalently lambda > 1."""
        return self.lam > 1

    @property
    def lambda_exceeds_one(self) -> bool:
        return self.lam > 1


def compute_exponents(
    report: DensityReport,
    pattern: Pattern,
    alpha: Number,
    k: float | None = None,
    n: int | None = None,
) -> ExponentSet:
    r, h, ell = pattern.r, pattern.h, pattern.ell
    if ell < 2:
        raise ValueError("pattern needs at least two edges")
    alpha = _exact(alpha)
    if alpha >= r:
        raise ValueError(f"need alpha < r, got alpha={alpha}, r={r}")
    gap = r - alpha
    lam = 1 / (report.m_r * gap)
    lam_star = 1 / (report.m_star_r * gap) if report.m_star_r > 0 else math.inf
    phi = (alpha * ell - alpha + h - 2 * ell) / (ell - 1) if r == 2 else None
    beta1 = beta2 = None
    if k is not None:
        k = float(k)
        beta1 = k ** -float(lam)
        if r == 2 and n is not None:
            beta2 = max(n ** -float(phi) / k, k ** -float(lam_star))
    return ExponentSet(alpha, r, h, ell, lam, lam_star, phi, k, n, beta1, beta2)


@dataclass(frozen=True)
class BoundValue:
    value: float
    branch: str  # "low" (sparse p) or "high"
    threshold: float
    variant: str


def threshold_shape(exps: ExponentSet, variant: str) -> tuple[Number, Number]:
    """(a, b) with p-threshold n^{-a} (log n)^b for the random Turan bound."""
    if variant == "general":
        return 1 / _m_r_from(exps), 0
    if variant == "es_good":
        ls = exps.lam_star
        if ls <= 1:
            raise ValueError("Erdos-Simonovits bound needs lambda* > 1")
        return exps.phi * ls / (ls - 1), 2 * ls / (ls - 1)
    raise ValueError(f"unknown variant {variant!r}")


def _m_r_from(exps: ExponentSet) -> Number:
    # lambda = 1/(m_r (r - alpha))
    return 1 / (exps.lam * (exps.r - exps.alpha))


def bound_formula_random_turan(
    exps: ExponentSet, n: int, p: float, variant: str = "general", C: float = 1.0
) -> BoundValue:
    """Upper-bound shape for ex(G(n,p), H), evaluated with constant C.

    general:  C n^{2-1/m_2}                  if p <= n^{-1/m_2}
              C p^{1-1/lambda} n^alpha        otherwise
    es_good:  C n^{alpha-phi} (log n)^2      if p <= n^{-phi l*/(l*-1)} (log n)^{2 l*/(l*-1)}
              C p^{1-1/lambda*} n^alpha       otherwise
    """
    if exps.r != 2:
        raise ValueError("random Turan bounds are for graphs (r = 2)")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    a, b = threshold_shape(exps, variant)
    log_n = math.log(n)
    threshold = n ** -float(a) * log_n ** float(b)
    alpha = float(exps.alpha)
    if variant == "general":
        m2 = float(_m_r_from(exps))
        if p <= threshold:
            return BoundValue(C * n ** (2 - 1 / m2), "low", threshold, variant)
        return BoundValue(C * p ** (1 - 1 / float(exps.lam)) * n**alpha, "high", threshold, variant)
    if p <= threshold:
        return BoundValue(C * n ** (alpha - float(exps.phi)) * log_n**2, "low", threshold, variant)
    return BoundValue(C * p ** (1 - 1 / float(exps.lam_star)) * n**alpha, "high", threshold, variant)


def pattern_summary(pattern: Pattern, alpha: Number, k: float | None = None, n: int | None = None) -> dict:
    """DensityReport and ExponentSet as a JSON-ready dict (rationals as strings)."""
    rep = compute_densities(pattern)
    exps = compute_exponents(rep, pattern, alpha, k, n)

    def s(x):
        return str(x) if isinstance(x, Fraction) else x

    return {
        "pattern": {"name": pattern.name, "h": pattern.h, "ell": pattern.ell, "r": pattern.r,
                    "r_partite": pattern.r_partite,
                    "partition": [list(p) for p in pattern.partition] if pattern.partition else None},
        "densities": {
            "m_r": s(rep.m_r),
            "m_star_r": s(rep.m_star_r),
            "strictly_balanced": rep.strictly_balanced,
            "witness_m_r": {"vertices": list(rep.witness_mr.vertices), "edges": list(rep.witness_mr.edges)},
            "witness_m_star_r": {"vertices": list(rep.witness_mstar.vertices),
                                 "edges": list(rep.witness_mstar.edges)},
        },
        "exponents": {
            "alpha": s(exps.alpha),
            "lambda": s(exps.lam),
            "lambda_star": s(exps.lam_star),
            "phi": s(exps.phi),
            "alpha_admissible": exps.alpha_admissible,
            "lambda_exceeds_one": exps.lambda_exceeds_one,
            "k": exps.k,
            "n": exps.n,
            "beta_thm1": exps.beta_thm1,
            "beta_thm2": exps.beta_thm2,
        },
    }
