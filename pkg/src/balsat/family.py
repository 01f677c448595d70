"""Balanced families of copies: greedy saturation builder, verifier, co-degree function.

A family F of copies of H in G is balanced when every set S of host edges
satisfies d_F(S) <= C beta^{|S|-1} |F| / e(G).  The builder grows F one copy at
a time.  A set S with |S| <= cutoff is *saturated* once d_F(S) reaches
C beta^{|S|-1} N / (2 e(G)); a copy is *good* if it contains no saturated set.
Only good copies are added, so every degree stays below threshold + 1.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .enumeration import Copy, enumerate_copies, is_copy
from .hypergraph import Hypergraph, build
from .metrics import Pattern, compute_densities, compute_exponents, parse_alpha

DegreeIndex = dict[tuple[int, ...], int]


def nonempty_subsets(edges: Sequence[int], max_size: int | None = None):
    top = len(edges) if max_size is None else min(max_size, len(edges))
    for s in range(1, top + 1):
        yield from combinations(edges, s)


def resolve_cutoff(cutoff: str | int, ell: int) -> int:
    if cutoff in ("l", "ell", ell):
        return ell
    if cutoff in ("l-1", "ell-1", ell - 1):
        return ell - 1
    raise ValueError(f"cutoff must be 'l' or 'l-1', got {cutoff!r}")


def saturation_threshold(C: float, beta: float, N: float, e_g: int, s: int) -> float:
    """C beta^{s-1} N / (2 e(G)): the degree at which an s-set counts as saturated."""
    return C * beta ** (s - 1) * N / (2 * e_g)


@dataclass(frozen=True)
class FamilyParams:
    C: float
    beta: float
    n_target: int
    cutoff: int
    alpha: str | None = None
    k: float | None = None
    beta_mode: str = "explicit"
    delta_prime: float | None = None


@dataclass
class CopyFamily:
    host: Hypergraph
    pattern: Pattern
    params: FamilyParams
    members: list[Copy] = field(default_factory=list)
    degree_index: DegreeIndex = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.members)

    def add(self, copy: Copy) -> list[tuple[int, ...]]:
        """Append a member and update degrees; returns the subsets touched."""
        touched = list(nonempty_subsets(copy.edges))
        for s in touched:
            self.degree_index[s] = self.degree_index.get(s, 0) + 1
        self.members.append(copy)
        return touched

    def degree(self, edge_set: Iterable[int]) -> int:
        return self.degree_index.get(tuple(sorted(edge_set)), 0)

    def threshold(self, s: int) -> float:
        p = self.params
        return saturation_threshold(p.C, p.beta, p.n_target, self.host.e, s)

    def bound(self, s: int) -> float:
        """C beta^{s-1} |F| / e(G)."""
        p = self.params
        return p.C * p.beta ** (s - 1) * len(self.members) / self.host.e


@dataclass
class BuildReport:
    reached_target: bool
    size: int
    n_target: int
    shortfall: int
    candidates_scanned: int
    total_copies: int
    thresholds: list[float]
    saturated_counts: list[int]
    claim1_bounds: list[float]
    claim1_violations: list[int]
    premise_ok: bool  # threshold at the cutoff size >= 1
    strict_premise_ok: bool  # ... >= 2
    admissibility: dict[str, bool]


def default_n_target(pattern: Pattern, e_g: int, k: float, alpha, delta_prime: float) -> int:
    """delta' k^{(h-r)/(r-alpha)} e(G), floored, at least 1."""
    expo = (pattern.h - pattern.r) / (pattern.r - float(alpha))
    return max(1, math.floor(delta_prime * k**expo * e_g))


def build_balanced_family(
    g: Hypergraph,
    pattern: Pattern,
    alpha,
    *,
    k: float | None = None,
    n_target: int | None = None,
    C: float | None = None,
    beta_mode: str | float = "thm1",
    cutoff: str | int = "l-1",
    delta_prime: float = 1.0,
    A: float | None = None,
) -> tuple[CopyFamily, BuildReport]:
    """Greedily grow a family of good copies until it has ``n_target`` members.

    ``C`` defaults to max(2^l, 4/delta'), the smallest value compatible with the
    saturation counting bound and with C delta' / 2 >= 2.

    Candidates are scanned once, in canonical copy order.  Degrees only grow,
    so a copy that was bad when passed over stays bad; the scan therefore picks
    exactly the first good copy not yet in F at every step.
    """
    if g.r != pattern.r:
        raise ValueError(f"uniformity mismatch: host r={g.r}, pattern r={pattern.r}")
    if not pattern.r_partite:
        raise ValueError(f"pattern {pattern.name} is not {pattern.r}-partite")
    if g.e < 1:
        raise ValueError("host has no edges")
    alpha_val = alpha = parse_alpha(alpha)
    if k is None:
        k = g.e / g.n ** float(alpha)
    exps = compute_exponents(compute_densities(pattern), pattern, alpha, k, g.n)
    if isinstance(beta_mode, str):
        if beta_mode == "thm1":
            beta = exps.beta_thm1
        elif beta_mode == "thm2":
            if exps.beta_thm2 is None:
                raise ValueError("thm2 codegree ratio needs r = 2")
            beta = exps.beta_thm2
        else:
            beta = float(beta_mode)
            beta_mode = "explicit"
    else:
        beta = float(beta_mode)
        beta_mode = "explicit"
    if n_target is None:
        n_target = default_n_target(pattern, g.e, k, alpha_val, delta_prime)
    ell = pattern.ell
    cut = resolve_cutoff(cutoff, ell)
    if C is None:
        C = max(2.0**ell, 4 / delta_prime)
    params = FamilyParams(C=float(C), beta=float(beta), n_target=int(n_target), cutoff=cut,
                          alpha=str(alpha_val), k=float(k), beta_mode=str(beta_mode),
                          delta_prime=float(delta_prime))
    fam = CopyFamily(g, pattern, params)
    thresholds = [fam.threshold(s) for s in range(1, cut + 1)]
    saturated: list[set[tuple[int, ...]]] = [set() for _ in range(cut + 1)]

    scanned = 0
    total = 0
    for copy in enumerate_copies(g, pattern):
        total += 1
        if len(fam) >= n_target:
            continue
        scanned += 1
        if any(s in saturated[len(s)] for s in nonempty_subsets(copy.edges, cut)):
            continue
        for s in fam.add(copy):
            size = len(s)
            if size <= cut and fam.degree_index[s] >= thresholds[size - 1]:
                saturated[size].add(s)

    counts = [len(saturated[i]) for i in range(1, cut + 1)]
    claim1 = [(2**ell / params.C) * (1 / beta) ** (i - 1) * g.e for i in range(1, cut + 1)]
    violations = [i for i in range(1, cut + 1) if counts[i - 1] > claim1[i - 1]]
    top = thresholds[-1] if thresholds else math.inf
    r = pattern.r
    admiss = {}
    if A is not None:
        admiss["A_ge_r_2r"] = A >= r ** (2 * r)
        admiss["k_ge_2_3r_A"] = k >= 2 ** (3 * r) * A
    admiss["alpha_gt_r_minus_inv_mr"] = bool(exps.alpha_admissible)
    report = BuildReport(
        reached_target=len(fam) >= n_target,
        size=len(fam),
        n_target=n_target,
        shortfall=max(0, n_target - len(fam)),
        candidates_scanned=scanned,
        total_copies=total,
        thresholds=thresholds,
        saturated_counts=counts,
        claim1_bounds=claim1,
        claim1_violations=violations,
        premise_ok=top >= 1,
        strict_premise_ok=top >= 2,
        admissibility=admiss,
    )
    return fam, report


def recompute_degrees(members: Iterable[Copy | Iterable[int]]) -> Counter:
    deg: Counter = Counter()
    for m in members:
        edges = m.edges if isinstance(m, Copy) else tuple(sorted(m))
        deg.update(nonempty_subsets(edges))
    return deg


@dataclass
class Certificate:
    satisfied: bool
    worst_S: tuple[int, ...] | None
    worst_ratio: float
    per_size_max_degree: list[int]
    per_size_worst_ratio: list[float]
    checked_sizes: int
    index_consistent: bool
    members_distinct: bool
    invalid_members: list[int]

    @property
    def ok(self) -> bool:
        return self.satisfied and self.index_consistent and self.members_distinct and not self.invalid_members


def verify_certificate(fam: CopyFamily, check_members: bool = True) -> Certificate:
    """Check d_F(S) <= C beta^{|S|-1} |F| / e(G) for all |S| <= cutoff from scratch.

    Degrees are recomputed from the member list and compared with the stored
    index; members are re-checked to be copies of the pattern.
    """
    ell = fam.pattern.ell
    cut = fam.params.cutoff
    deg = recompute_degrees(fam.members)
    consistent = dict(deg) == fam.degree_index
    keys = [m.edges for m in fam.members]
    distinct = len(set(keys)) == len(keys)
    invalid = []
    if check_members:
        invalid = [i for i, m in enumerate(fam.members) if not is_copy(fam.host, fam.pattern, m.edges)]

    max_deg = [0] * ell
    worst_by_size = [0.0] * ell
    worst_S = None
    worst = 0.0
    if fam.members:
        bounds = [fam.bound(s) for s in range(1, ell + 1)]
        for S, d in deg.items():
            s = len(S)
            if d > max_deg[s - 1]:
                max_deg[s - 1] = d
            ratio = d / bounds[s - 1]
            if ratio > worst_by_size[s - 1]:
                worst_by_size[s - 1] = ratio
            if s <= cut and (ratio > worst or (ratio == worst and worst_S is not None and S < worst_S)):
                worst, worst_S = ratio, S
    return Certificate(
        satisfied=worst <= 1.0,
        worst_S=worst_S,
        worst_ratio=worst,
        per_size_max_degree=max_deg,
        per_size_worst_ratio=worst_by_size,
        checked_sizes=cut,
        index_consistent=consistent,
        members_distinct=distinct,
        invalid_members=invalid,
    )


def replay_audit(fam: CopyFamily) -> list[tuple[int, tuple[int, ...]]]:
    """Re-run the insertions in order; list (step, S) where a member contained a saturated S."""
    cut = fam.params.cutoff
    thresholds = [fam.threshold(s) for s in range(1, cut + 1)]
    deg: Counter = Counter()
    bad = []
    for step, m in enumerate(fam.members):
        for S in nonempty_subsets(m.edges, cut):
            if deg[S] >= thresholds[len(S) - 1]:
                bad.append((step, S))
        deg.update(nonempty_subsets(m.edges))
    return bad


def codegree_function(members: CopyFamily | Iterable[Iterable[int]], tau):
    """delta(F, tau) = (1/|F|) sum_{j=2}^{l} tau^{1-j} sum_v d^{(j)}(v),

    with d^{(j)}(v) the largest degree of a j-set containing v.  F is read as
    an l-uniform hypergraph on E(G).  Exact (``Fraction``) for rational tau.
    """
    if isinstance(members, CopyFamily):
        sets = [m.edges for m in members.members]
    else:
        sets = [tuple(sorted(m)) for m in members]
    if not sets:
        raise ValueError("co-degree function of an empty family is undefined")
    if tau <= 0:
        raise ValueError("tau must be positive")
    ell = max(len(s) for s in sets)
    deg = recompute_degrees(sets)
    best: dict[tuple[int, int], int] = {}
    for S, d in deg.items():
        j = len(S)
        if j < 2:
            continue
        for v in S:
            if d > best.get((j, v), 0):
                best[(j, v)] = d
    sums = [0] * (ell + 1)
    for (j, _v), d in best.items():
        sums[j] += d
    t = Fraction(tau) if isinstance(tau, (int, Fraction)) else float(tau)
    total = sum(sums[j] / t ** (j - 1) for j in range(2, ell + 1))
    return total / len(sets)


# --- certificate bundle (JSON-ready dicts)


def family_to_dict(fam: CopyFamily) -> dict:
    cert = verify_certificate(fam, check_members=False)
    return {
        "host": {"n": fam.host.n, "r": fam.host.r, "edges": [list(e) for e in fam.host.edges]},
        "pattern": {"name": fam.pattern.name, "n": fam.pattern.h, "r": fam.pattern.r,
                    "edges": [list(e) for e in fam.pattern.graph.edges]},
        "params": asdict(fam.params),
        "members": [list(m.edges) for m in fam.members],
        "per_size_max_degree": cert.per_size_max_degree,
        "certificate": {
            "satisfied": cert.satisfied,
            "worst_S": list(cert.worst_S) if cert.worst_S else None,
            "worst_ratio": cert.worst_ratio,
            "per_size_worst_ratio": cert.per_size_worst_ratio,
        },
    }


def family_from_dict(data: Mapping) -> CopyFamily:
    host = build(data["host"]["n"], data["host"]["r"], data["host"]["edges"])
    pg = data["pattern"]
    pattern = Pattern.of(build(pg["n"], pg["r"], pg["edges"]), name=pg.get("name", "H"))
    params = FamilyParams(**data["params"])
    fam = CopyFamily(host, pattern, params)
    for edges in data["members"]:
        edges = tuple(sorted(int(i) for i in edges))
        verts = host.vertices_of(i for i in edges if 0 <= i < host.e)
        fam.add(Copy(edges, verts))
    return fam
