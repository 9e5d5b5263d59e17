"""Random linear triple systems and sparse graphs with small independence number.

Logarithms are natural throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .core.graph import ThreeGraph, is_linear
from .errors import InfeasibleMode

EXACT_COVER_K = 25
EXACT_INDEPENDENCE_M = 30


def unrank_triple(k: int, r: int) -> tuple[int, int, int]:
    """The triple of [0, k) with lexicographic rank r."""
    u = 0
    while True:
        block = (k - u - 1) * (k - u - 2) // 2
        if r < block:
            break
        r -= block
        u += 1
    v = u + 1
    while r >= k - v - 1:
        r -= k - v - 1
        v += 1
    return (u, v, v + 1 + r)


def unrank_triples(k: int, ranks) -> list[tuple[int, int, int]]:
    return [unrank_triple(k, int(r)) for r in sorted(int(r) for r in ranks)]


def sample_binomial_3graph(k: int, p: float, rng: np.random.Generator) -> ThreeGraph:
    total = math.comb(k, 3)
    m = int(rng.binomial(total, p)) if p > 0 else 0
    ranks = rng.choice(total, size=m, replace=False) if m else np.array([], dtype=np.int64)
    return ThreeGraph(k, unrank_triples(k, ranks))


def greedy_b_family(edges) -> list[tuple[tuple, tuple]]:
    """Maximal family of edge-disjoint copies of B (two edges sharing a pair),
    scanning edge pairs in lexicographic order."""
    edges = sorted(edges)
    by_pair: dict[tuple[int, int], list[int]] = {}
    for i, (u, v, w) in enumerate(edges):
        for p in ((u, v), (u, w), (v, w)):
            by_pair.setdefault(p, []).append(i)
    used = [False] * len(edges)
    family = []
    for i, (u, v, w) in enumerate(edges):
        if used[i]:
            continue
        partners = sorted({j for p in ((u, v), (u, w), (v, w)) for j in by_pair[p] if j > i and not used[j]})
        if partners:
            j = partners[0]
            used[i] = used[j] = True
            family.append((edges[i], edges[j]))
    return family


def count_b_copies(edges) -> int:
    """Number of edge pairs sharing two vertices."""
    by_pair: dict = {}
    for u, v, w in edges:
        for p in ((u, v), (u, w), (v, w)):
            by_pair[p] = by_pair.get(p, 0) + 1
    return sum(c * (c - 1) // 2 for c in by_pair.values())


@dataclass
class Verdict:
    status: str  # verified-exact | verified-sampled | refuted | not-run
    trials: int = 0
    failures: int = 0
    witness: object = None
    notes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"status": self.status, "trials": self.trials, "failures": self.failures}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.notes:
            d["notes"] = self.notes
        return d


@dataclass
class LinearSystemReport:
    k: int
    seed: int
    p: float
    edges_before: int
    edges_after: int
    b_copies_removed: int
    linear: bool
    property1: Verdict | None = None

    def to_dict(self) -> dict:
        d = {"k": self.k, "seed": self.seed, "p": self.p, "edges_before": self.edges_before,
             "edges_after": self.edges_after, "b_copies_removed": self.b_copies_removed,
             "linear": self.linear}
        if self.property1 is not None:
            d["property1"] = self.property1.to_dict()
        return d


def sample_linear_system(k: int, seed: int, p_override: float | None = None) -> tuple[ThreeGraph, LinearSystemReport]:
    """H^(3)(k, p) with p = 1/(200k), minus both edges of every copy in a
    greedy maximal family of edge-disjoint copies of B."""
    if k < 50:
        raise ValueError("sample_linear_system needs k >= 50")
    p = 1 / (200 * k) if p_override is None else float(p_override)
    rng = np.random.default_rng(seed)
    H = sample_binomial_3graph(k, p, rng)
    family = greedy_b_family(H.edges)
    dead = {e for pair in family for e in pair}
    F = ThreeGraph(k, [e for e in H.edges if e not in dead])
    rep = LinearSystemReport(k, seed, p, H.e, F.e, len(family), is_linear(F))
    return F, rep


def expected_retained(k: int, p: float) -> float:
    """First-order expectation of the edge count: C(k, 3) p."""
    return math.comb(k, 3) * p


def _has_edge_inside(F: ThreeGraph, S) -> tuple | None:
    Sset = set(S)
    for e in F.edges:
        if e[0] in Sset and e[1] in Sset and e[2] in Sset:
            return e
    return None


def check_cover_property1(F: ThreeGraph, subset_size: int | None = None, mode: str = "auto",
                          trials: int = 1000, seed: int = 0) -> Verdict:
    """Every vertex subset of the given size (default ceil(k^(3/5))) spans an edge."""
    k = F.n
    s = math.ceil(k ** 0.6) if subset_size is None else subset_size
    if s > k:
        return Verdict("verified-exact", notes={"subset_size": s, "reason": "no subset of this size"})
    if mode == "exact" and k > EXACT_COVER_K:
        raise InfeasibleMode(f"exact property-1 check supports k <= {EXACT_COVER_K}")
    if mode == "exact" or (mode == "auto" and k <= EXACT_COVER_K):
        n = 0
        for S in combinations(range(k), s):
            n += 1
            if _has_edge_inside(F, S) is None:
                return Verdict("refuted", n, 1, list(S), {"subset_size": s})
        return Verdict("verified-exact", n, 0, notes={"subset_size": s})
    rng = np.random.default_rng(seed)
    failures, first = 0, None
    for _ in range(trials):
        S = sorted(int(x) for x in rng.choice(k, size=s, replace=False))
        if _has_edge_inside(F, S) is None:
            failures += 1
            if first is None:
                first = S
    status = "refuted" if failures else "verified-sampled"
    return Verdict(status, trials, failures, first, {"subset_size": s})


def replay_property1(F: ThreeGraph, S) -> bool:
    """True when S spans no edge, i.e. S really refutes property 1."""
    return _has_edge_inside(F, S) is None


def property2_preconditions(k: int, S, T) -> dict:
    S, T = set(S), set(T)
    lk = math.log(k)
    return {"disjoint": not (S & T),
            "union_gt_k_over_4": len(S | T) > k / 4,
            "S_gt_log2k": len(S) > lk ** 2,
            "T_gt_sqrtk_logk": len(T) > math.sqrt(k) * lk}


def check_cover_property2(F: ThreeGraph, S, T) -> tuple[bool, dict]:
    """Some edge has one vertex in S and two in T. Returns (holds, report)."""
    S, T = set(S), set(T)
    witness = None
    for e in F.edges:
        ins = sum(x in S for x in e)
        int_ = sum(x in T for x in e)
        if ins == 1 and int_ == 2:
            witness = list(e)
            break
    pre = property2_preconditions(F.n, S, T)
    return witness is not None, {"witness": witness, "preconditions": pre,
                                 "advisory": not all(pre.values())}


def check_cover_property3(F: ThreeGraph, S, parts) -> dict:
    """Count edges with one vertex in S and the other two in distinct parts,
    against |S| / (500k) * sum_{i<j} |A_i||A_j| in exact arithmetic."""
    k = F.n
    S = set(S)
    part_of = {}
    for i, A in enumerate(parts):
        for x in A:
            part_of[x] = i
    count = 0
    for e in F.edges:
        s_vs = [x for x in e if x in S]
        if len(s_vs) != 1:
            continue
        rest = [x for x in e if x not in S]
        if all(x in part_of for x in rest) and part_of[rest[0]] != part_of[rest[1]]:
            count += 1
    sizes = [len(A) for A in parts]
    pair_sum = sum(sizes[i] * sizes[j] for i in range(len(sizes)) for j in range(i + 1, len(sizes)))
    threshold = Fraction(len(S), 500 * k) * pair_sum
    lk = math.log(k)
    union = set().union(*map(set, parts)) if parts else set()
    pre = {"disjoint": len(union) == sum(sizes) and not (union & S),
           "parts_le_sqrtk_logk": all(len(A) <= math.sqrt(k) * lk for A in parts),
           "union_ge_k_over_16logk": len(union) >= k / (16 * lk)}
    return {"count": count, "threshold": f"{threshold.numerator}/{threshold.denominator}",
            "meets_threshold": count >= threshold, "preconditions": pre,
            "advisory": not all(pre.values())}


# --- sparse graphs -------------------------------------------------------


def default_sparse_p(m: int, k: int) -> float:
    """p = m^(-64 log^5 k / sqrt(k))."""
    return m ** (-64 * math.log(k) ** 5 / math.sqrt(k))


def sample_graph(m: int, p: float, rng) -> list[tuple[int, int]]:
    total = m * (m - 1) // 2
    cnt = int(rng.binomial(total, p)) if p > 0 else 0
    ranks = sorted(int(r) for r in rng.choice(total, size=cnt, replace=False)) if cnt else []
    pairs = []
    it = iter(ranks)
    nxt = next(it, None)
    r = 0
    for u in range(m):
        for v in range(u + 1, m):
            if nxt == r:
                pairs.append((u, v))
                nxt = next(it, None)
            r += 1
    return pairs


def independence_number(m: int, edges) -> tuple[int, list[int]]:
    """Exact maximum independent set by branch and bound on bitmasks."""
    nbr = [0] * m
    for u, v in edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    best = [0, 0]

    def rec(cand, size, chosen):
        if cand == 0:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + cand.bit_count() <= best[0]:
            return
        v = (cand & -cand).bit_length() - 1
        # take v
        rec(cand & ~nbr[v] & ~(1 << v), size + 1, chosen | (1 << v))
        # skip v (only useful if v has a neighbour among candidates)
        if nbr[v] & cand:
            rec(cand & ~(1 << v), size, chosen)

    rec((1 << m) - 1, 0, 0)
    return best[0], [i for i in range(m) if best[1] >> i & 1]


def independence_brute(m: int, edges) -> int:
    nbr = [0] * m
    for u, v in edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    best = 0
    for S in range(1 << m):
        if S.bit_count() <= best:
            continue
        ok = True
        x = S
        while x:
            v = (x & -x).bit_length() - 1
            if nbr[v] & S:
                ok = False
                break
            x &= x - 1
        if ok:
            best = S.bit_count()
    return best


@dataclass
class SparseGraphReport:
    m: int
    n: int
    k: int
    seed: int
    p: float
    edges: int
    independence: Verdict
    local_sparsity: Verdict

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "k": self.k, "seed": self.seed, "p": self.p,
                "edges": self.edges, "independence": self.independence.to_dict(),
                "local_sparsity": self.local_sparsity.to_dict()}


def sample_sparse_graph(m: int, k: int, n: int, seed: int, p_override: float | None = None,
                        trials: int = 200) -> tuple[list[tuple[int, int]], SparseGraphReport]:
    if m < 4:
        raise ValueError("sample_sparse_graph needs m >= 4")
    p = default_sparse_p(m, k) if p_override is None else float(p_override)
    rng = np.random.default_rng(seed)
    edges = sample_graph(m, p, rng)
    eset = set(edges)
    if m <= EXACT_INDEPENDENCE_M:
        alpha, ind = independence_number(m, edges)
        if alpha >= n:
            indep = Verdict("refuted", 1, 1, ind[:n], {"alpha": alpha})
        else:
            indep = Verdict("verified-exact", 1, 0, notes={"alpha": alpha})
    else:
        fails, first = 0, None
        for _ in range(trials):
            S = sorted(int(x) for x in rng.choice(m, size=min(n, m), replace=False))
            if all((a, b) not in eset for a, b in combinations(S, 2)):
                fails += 1
                first = first or S
        indep = Verdict("refuted" if fails else "verified-sampled", trials, fails, first)
    lk = math.log(k)
    r_lo = max(2, math.ceil(math.sqrt(k) / (16 * lk ** 2)))
    r_hi = min(k, m)
    fails, first, done = 0, None, 0
    if r_lo <= r_hi:
        for _ in range(trials):
            r = int(rng.integers(r_lo, r_hi + 1))
            S = sorted(int(x) for x in rng.choice(m, size=r, replace=False))
            e_in = sum((a, b) in eset for a, b in combinations(S, 2))
            done += 1
            if e_in >= r * r / lk ** 3:
                fails += 1
                first = first or {"subset": S, "edges": e_in}
    local = Verdict("refuted" if fails else "verified-sampled", done, fails, first,
                    {"r_range": [r_lo, r_hi]})
    return edges, SparseGraphReport(m, n, k, seed, p, len(edges), indep, local)


def replay_independent(edges, S) -> bool:
    eset = {tuple(sorted(e)) for e in edges}
    return all((a, b) not in eset for a, b in combinations(sorted(S), 2))
