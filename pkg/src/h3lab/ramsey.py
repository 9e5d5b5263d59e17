"""Small-scale Ramsey certification for 3-graphs.

Every coloring of the triples of [0, N) is encoded as a bitmask over the
triples in lexicographic order (bit set = red). A red copy of H is a triple
set that must not be all red; a blue target is a triple set that must not be
all blue. ``exhaustive`` mode checks all 2^C(N,3) colorings with numpy;
``backtracking`` mode runs a DPLL search over the same clauses.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from .core.embed import Host, find_copy, verify_embedding
from .core.graph import ThreeGraph
from .colorings.search import (
    find_blue_clique,
    find_blue_ordered_tripartite,
    find_blue_tripartite_unordered,
    verify_blue_clique,
    verify_blue_tripartite,
)
from .core.certificate import Certificate
from .errors import BudgetExceeded, SizeLimitError

EXHAUSTIVE_MAX_TRIPLES = 20
BACKTRACK_MAX_N = 13


@dataclass(frozen=True)
class BlueTarget:
    kind: str  # "clique" | "nnn" (I < J < K) | "tripartite" (unordered parts)
    size: int

    def label(self) -> str:
        return f"{self.kind}:{self.size}"

    @classmethod
    def parse(cls, s: str) -> BlueTarget:
        kind, _, size = s.partition(":")
        if kind not in ("clique", "nnn", "tripartite"):
            raise ValueError(f"unknown blue target {s!r}")
        return cls(kind, int(size))


@dataclass
class RamseyInstance:
    red_target: ThreeGraph
    blue_target: BlueTarget
    N: int
    mode: str = "exhaustive"
    symmetry_breaking: bool = True

    def __post_init__(self):
        if self.mode not in ("exhaustive", "backtracking"):
            raise ValueError(f"unknown mode {self.mode!r}")
        ntrip = self.N * (self.N - 1) * (self.N - 2) // 6
        if self.mode == "exhaustive" and ntrip > EXHAUSTIVE_MAX_TRIPLES:
            raise SizeLimitError(f"exhaustive mode needs C(N,3) <= {EXHAUSTIVE_MAX_TRIPLES}")
        if self.mode == "backtracking" and self.N > BACKTRACK_MAX_N:
            raise SizeLimitError(f"backtracking mode needs N <= {BACKTRACK_MAX_N}")


@dataclass
class SearchOutcome:
    verdict: str  # good-coloring-found | ramsey | indeterminate
    coloring: list[tuple[int, int, int]] | None = None
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"verdict": self.verdict, "stats": self.stats}
        if self.coloring is not None:
            d["red_triples"] = [list(t) for t in self.coloring]
        return d


def _triples(N):
    T = list(combinations(range(N), 3))
    return T, {t: i for i, t in enumerate(T)}


def red_masks(H: ThreeGraph, N: int) -> list[int]:
    """Triple sets of all injective images of H's support in [0, N)."""
    T, idx = _triples(N)
    sup = H.support()
    if H.n > N:
        return []
    out = set()
    for img in permutations(range(N), len(sup)):
        m = dict(zip(sup, img))
        out.add(sum(1 << idx[tuple(sorted((m[u], m[v], m[w])))] for u, v, w in H.edges))
    return sorted(out)


def blue_masks(target: BlueTarget, N: int) -> list[int]:
    T, idx = _triples(N)
    n = target.size
    out = set()
    if target.kind == "clique":
        for Q in combinations(range(N), n):
            out.add(sum(1 << idx[t] for t in combinations(Q, 3)))
    else:
        for S in combinations(range(N), 3 * n):
            if target.kind == "nnn":
                splits = [(S[:n], S[n:2 * n], S[2 * n:])]
            else:
                splits = []
                for I in combinations(S, n):
                    rest = [x for x in S if x not in I]
                    for J in combinations(rest, n):
                        K = [x for x in rest if x not in J]
                        splits.append((I, J, K))
            for I, J, K in splits:
                out.add(sum(1 << idx[tuple(sorted((i, j, k)))] for i in I for j in J for k in K))
    return sorted(out)


def _decode(N, mask):
    T, _ = _triples(N)
    return [T[i] for i in range(len(T)) if mask >> i & 1]


def _exhaustive(inst: RamseyInstance) -> SearchOutcome:
    N = inst.N
    T, _ = _triples(N)
    C = len(T)
    reds = red_masks(inst.red_target, N)
    blues = blue_masks(inst.blue_target, N)
    if inst.red_target.e == 0 and reds:
        # the empty 3-graph is always present in red
        return SearchOutcome("ramsey", stats={"colorings": 0, "open_branches": 0, "mode": "exhaustive"})
    if any(b == 0 for b in blues):
        return SearchOutcome("ramsey", stats={"colorings": 0, "open_branches": 0, "mode": "exhaustive"})
    c = np.arange(1 << C, dtype=np.uint32)
    good = np.ones(c.shape, dtype=bool)
    for r in reds:
        good &= (c & np.uint32(r)) != np.uint32(r)
    for b in blues:
        good &= (c & np.uint32(b)) != 0
    hits = np.flatnonzero(good)
    stats = {"colorings": 1 << C, "red_constraints": len(reds), "blue_constraints": len(blues),
             "mode": "exhaustive"}
    if hits.size:
        return SearchOutcome("good-coloring-found", _decode(N, int(hits[0])), stats)
    stats["open_branches"] = 0
    return SearchOutcome("ramsey", stats=stats)


def _backtrack(inst: RamseyInstance, budget: int | None) -> SearchOutcome:
    """DPLL over triples. Clauses: each red mask needs a blue triple, each blue
    mask needs a red triple. With symmetry breaking, the link of vertex 0 is
    decided first and its degree sequence on 1..N-1 must be non-increasing
    (any good coloring can be relabelled to satisfy this)."""
    N = inst.N
    T, idx = _triples(N)
    C = len(T)
    reds = red_masks(inst.red_target, N)
    blues = blue_masks(inst.blue_target, N)
    stats = {"mode": "backtracking", "red_constraints": len(reds), "blue_constraints": len(blues)}
    if (inst.red_target.e == 0 and reds) or any(b == 0 for b in blues):
        stats.update(nodes=0, open_branches=0)
        return SearchOutcome("ramsey", stats=stats)
    # clause = (mask, wants_red): satisfied by some triple in mask with colour wants_red
    clauses = [(m, False) for m in reds] + [(m, True) for m in blues]
    watch: list[list[int]] = [[] for _ in range(C)]
    for ci, (m, _) in enumerate(clauses):
        x = m
        while x:
            b = (x & -x).bit_length() - 1
            watch[b].append(ci)
            x &= x - 1
    link = [i for i, t in enumerate(T) if t[0] == 0]
    link_mask = sum(1 << i for i in link)
    order = link + [i for i in range(C) if i not in set(link)]
    nodes = 0

    def status(ci, assigned, red):
        m, want = clauses[ci]
        sat = m & assigned & (red if want else ~red)
        if sat:
            return "sat", 0
        free = m & ~assigned
        if free == 0:
            return "conflict", 0
        if free & (free - 1) == 0:
            return "unit", free
        return "open", 0

    def propagate(assigned, red, changed):
        queue = list(changed)
        while queue:
            v = queue.pop()
            for ci in watch[v]:
                st, free = status(ci, assigned, red)
                if st == "conflict":
                    return None
                if st == "unit":
                    b = free.bit_length() - 1
                    assigned |= free
                    if clauses[ci][1]:
                        red |= free
                    queue.append(b)
        return assigned, red

    def link_ok(assigned, red):
        if not inst.symmetry_breaking or (assigned & link_mask) != link_mask:
            return True
        deg = [0] * N
        for i in link:
            if red >> i & 1:
                _, a, b = T[i]
                deg[a] += 1
                deg[b] += 1
        return all(deg[i] >= deg[i + 1] for i in range(1, N - 1))

    def rec(assigned, red):
        nonlocal nodes
        if not link_ok(assigned, red):
            return None
        for v in order:
            if not assigned >> v & 1:
                break
        else:
            return red
        for colour in (False, True):
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded("Ramsey backtracking exceeded budget", nodes)
            a2 = assigned | (1 << v)
            r2 = red | ((1 << v) if colour else 0)
            res = propagate(a2, r2, [v])
            if res is None:
                continue
            out = rec(*res)
            if out is not None:
                return out
        return None

    # initial unit clauses (single-triple masks)
    start = propagate(0, 0, list(range(C)))
    try:
        found = None if start is None else rec(*start)
    except BudgetExceeded as exc:
        stats.update(nodes=exc.nodes)
        return SearchOutcome("indeterminate", stats=stats)
    stats["nodes"] = nodes
    stats["symmetry_breaking"] = inst.symmetry_breaking
    if found is None:
        stats["open_branches"] = 0
        return SearchOutcome("ramsey", stats=stats)
    return SearchOutcome("good-coloring-found", _decode(N, found), stats)


def decide(inst: RamseyInstance, budget: int | None = 5_000_000) -> SearchOutcome:
    t0 = time.perf_counter()
    if inst.mode == "exhaustive":
        out = _exhaustive(inst)
    else:
        out = _backtrack(inst, budget)
    out.stats["seconds"] = round(time.perf_counter() - t0, 6)
    return out


def ramsey_number(H: ThreeGraph, blue: BlueTarget, N_max: int, mode: str = "auto",
                  budget: int | None = 5_000_000) -> tuple[int | None, list[dict]]:
    """Least N <= N_max with a "ramsey" verdict, checking that larger N stay ramsey."""
    first = None
    log = []
    for N in range(0, N_max + 1):
        m = mode
        if mode == "auto":
            m = "exhaustive" if N * (N - 1) * (N - 2) // 6 <= EXHAUSTIVE_MAX_TRIPLES else "backtracking"
        out = decide(RamseyInstance(H, blue, N, m), budget)
        log.append({"N": N, "verdict": out.verdict, "mode": m})
        if out.verdict == "indeterminate":
            raise BudgetExceeded(f"indeterminate at N={N}", out.stats.get("nodes"))
        if out.verdict == "ramsey" and first is None:
            first = N
        elif out.verdict != "ramsey" and first is not None:
            raise AssertionError(f"monotonicity broken: ramsey at N={first} but not at N={N}")
    return first, log


# --- verification of explicit colorings ----------------------------------


def verify_coloring(host: Host, H: ThreeGraph, blue: BlueTarget | None,
                    budget: int | None = 50_000_000) -> tuple[str, dict]:
    """Search ``host`` for a red H and for the blue target.

    Returns ("violation", report) if either is found, else ("no-violation", report).
    """
    report: dict = {"N": host.N}
    try:
        red = find_copy(host, H, "red", budget=budget)
        report["red"] = {"found": red is not None, "exhaustive": True,
                         "certificate": red.to_dict() if red else None}
        if red is not None:
            assert verify_embedding(host, H, red)
    except BudgetExceeded as exc:
        report["red"] = {"found": False, "exhaustive": False, "indeterminate": True, "nodes": exc.nodes}
    if blue is not None:
        if blue.kind == "clique":
            res = find_blue_clique(host, blue.size, budget=budget)
            ok = res.certificate is None or verify_blue_clique(host, res.certificate)
        elif blue.kind == "nnn":
            res = find_blue_ordered_tripartite(host, blue.size, budget=budget)
            ok = res.certificate is None or verify_blue_tripartite(host, res.certificate)
        else:
            res = find_blue_tripartite_unordered(host, blue.size)
            ok = res.certificate is None or verify_blue_tripartite(host, res.certificate, ordered=False)
        assert ok
        report["blue"] = {"target": blue.label(), "found": res.found, "exhaustive": res.exhaustive,
                          "certificate": res.certificate.to_dict() if res.certificate else None}
    violated = report["red"]["found"] or (blue is not None and report["blue"]["found"])
    if violated:
        return "violation", report
    indeterminate = report["red"].get("indeterminate", False)
    return ("indeterminate" if indeterminate else "no-violation"), report


def outcome_certificate(inst: RamseyInstance, out: SearchOutcome) -> Certificate:
    w = {"N": inst.N, "blue": inst.blue_target.label(), "red_edges": [list(e) for e in inst.red_target.edges]}
    w.update(out.to_dict())
    return Certificate(out.verdict, w)
