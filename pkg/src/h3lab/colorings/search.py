"""Searches for blue cliques and blue ordered tripartite boxes in a host.

Exact backtracking is used for the documented small regimes; outside them a
greedy randomized heuristic runs instead and its result says so.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..core.certificate import Certificate
from ..core.embed import TABLE_LIMIT, Host
from ..errors import BudgetExceeded

EXACT_MAX_N = 40
EXACT_MAX_Q = 5
EXACT_MAX_NNN = 3


@dataclass
class SearchResult:
    certificate: Certificate | None
    exhaustive: bool
    nodes: int

    @property
    def found(self) -> bool:
        return self.certificate is not None


def _blue_table(host: Host) -> np.ndarray | None:
    return ~host.table() if host.N <= TABLE_LIMIT else None


def _clique_backtrack(host: Host, q: int | None, budget: int | None, maximize: bool):
    """Lexicographically first blue q-clique, or a maximum blue clique."""
    N = host.N
    blue = _blue_table(host)

    def is_blue(a, b, c):
        return bool(blue[a, b, c]) if blue is not None else not host.is_red(a, b, c)

    clique: list[int] = []
    best: list[int] = []
    nodes = 0

    def rec(cands):
        nonlocal nodes, best
        if not maximize and len(clique) == q:
            return True
        if maximize and len(clique) > len(best):
            best = list(clique)
        for i, x in enumerate(cands):
            need = (q if not maximize else len(best) + 1) - len(clique)
            if len(cands) - i < need:
                return False
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded("blue clique search exceeded budget", nodes)
            rest = cands[i + 1:]
            if len(clique) >= 1:
                # every later candidate must stay blue with x and each chosen pair
                rest = [y for y in rest if all(is_blue(a, x, y) for a in clique)]
            clique.append(x)
            if rec(rest):
                return True
            clique.pop()
        return False

    hit = rec(list(range(N)))
    if maximize:
        return best, nodes
    return (list(clique) if hit else None), nodes


def find_blue_clique(host: Host, q: int, budget: int | None = 50_000_000,
                     exhaustive: bool | None = None, seed: int = 0, restarts: int = 200) -> SearchResult:
    """A blue K_q^(3) in ``host``; exact for N <= 40 and q <= 5 unless overridden."""
    if exhaustive is None:
        exhaustive = host.N <= EXACT_MAX_N and q <= EXACT_MAX_Q
    if q <= 2:
        verts = list(range(min(q, host.N))) if host.N >= q else None
        cert = Certificate("blue-clique", {"vertices": verts, "exhaustive": True}) if verts is not None else None
        return SearchResult(cert, True, 0)
    if exhaustive:
        verts, nodes = _clique_backtrack(host, q, budget, maximize=False)
    else:
        verts, nodes = _clique_greedy(host, q, seed, restarts)
    cert = None
    if verts is not None:
        cert = Certificate("blue-clique", {"vertices": verts, "exhaustive": exhaustive})
    return SearchResult(cert, exhaustive, nodes)


def max_blue_clique(host: Host, budget: int | None = 50_000_000) -> tuple[list[int], int]:
    """A maximum blue clique (exhaustive branch and bound) and the node count."""
    return _clique_backtrack(host, None, budget, maximize=True)


def _clique_greedy(host: Host, q: int, seed: int, restarts: int):
    rng = np.random.default_rng(seed)
    N = host.N
    nodes = 0
    for _ in range(restarts):
        order = [int(x) for x in rng.permutation(N)]
        clique: list[int] = []
        for x in order:
            nodes += 1
            if all(not host.is_red(*sorted((a, b, x))) for a, b in combinations(clique, 2)):
                clique.append(x)
                if len(clique) == q:
                    return sorted(clique), nodes
    return None, nodes


def verify_blue_clique(host: Host, cert: Certificate) -> bool:
    v = cert.witness["vertices"]
    if len(set(v)) != len(v) or any(not 0 <= x < host.N for x in v):
        return False
    return all(not host.is_red(*t) for t in combinations(sorted(v), 3))


def find_blue_ordered_tripartite(host: Host, n: int, budget: int | None = 50_000_000,
                                 exhaustive: bool | None = None, seed: int = 0,
                                 trials: int = 2000) -> SearchResult:
    """Blue I x J x K with |I| = |J| = |K| = n and I < J < K elementwise.

    Exact search fixes J, keeps the pairs (i, k) with i < min J < max J < k
    that are blue with all of J, and looks for an n x n biclique among them.
    """
    N = host.N
    if exhaustive is None:
        exhaustive = N <= EXACT_MAX_N and n <= EXACT_MAX_NNN
    if 3 * n > N:
        return SearchResult(None, True, 0)
    if n == 0:
        return SearchResult(Certificate("blue-ordered-tripartite", {"I": [], "J": [], "K": [],
                                                                    "exhaustive": True}), True, 0)
    if exhaustive:
        box, nodes = _nnn_exact(host, n, budget)
    else:
        box, nodes = _nnn_sampled(host, n, seed, trials)
    cert = None
    if box is not None:
        I, J, K = box
        cert = Certificate("blue-ordered-tripartite", {"I": I, "J": J, "K": K, "exhaustive": exhaustive})
    return SearchResult(cert, exhaustive, nodes)


def _nnn_exact(host: Host, n: int, budget):
    N = host.N
    blue = _blue_table(host)
    if blue is None:
        blue_fn = lambda i, j, k: not host.is_red(i, j, k)  # noqa: E731
    nodes = 0
    for J in combinations(range(n, N - n), n):
        lo, hi = J[0], J[-1]
        if lo < n or N - 1 - hi < n:
            continue
        left = range(lo)
        right = list(range(hi + 1, N))
        if blue is not None:
            good = blue[np.ix_(list(left), list(J), right)].all(axis=1)  # (i, k)
            masks = [sum(1 << c for c in np.flatnonzero(row)) for row in good]
        else:
            masks = [sum(1 << c for c, k in enumerate(right) if all(blue_fn(i, j, k) for j in J))
                     for i in left]
        chosen: list[int] = []

        def rec(start, common):
            nonlocal nodes
            if len(chosen) == n:
                return common
            for i in range(start, len(masks)):
                nodes += 1
                if budget is not None and nodes > budget:
                    raise BudgetExceeded("ordered tripartite search exceeded budget", nodes)
                c = common & masks[i]
                if c.bit_count() < n:
                    continue
                chosen.append(i)
                r = rec(i + 1, c)
                if r is not None:
                    return r
                chosen.pop()
            return None

        common = rec(0, (1 << len(right)) - 1)
        if common is not None:
            K = [right[c] for c in range(len(right)) if common >> c & 1][:n]
            return (list(chosen), list(J), K), nodes
    return None, nodes


def _nnn_sampled(host: Host, n: int, seed: int, trials: int):
    rng = np.random.default_rng(seed)
    N = host.N
    for t in range(trials):
        pts = sorted(int(x) for x in rng.choice(N, size=3 * n, replace=False))
        I, J, K = pts[:n], pts[n:2 * n], pts[2 * n:]
        if all(not host.is_red(i, j, k) for i in I for j in J for k in K):
            return (I, J, K), t + 1
    return None, trials


def verify_blue_tripartite(host: Host, cert: Certificate, ordered: bool = True) -> bool:
    w = cert.witness
    I, J, K = w["I"], w["J"], w["K"]
    if not (len(I) == len(J) == len(K)) or len(set(I) | set(J) | set(K)) != 3 * len(I):
        return False
    if ordered and I and not (max(I) < min(J) and max(J) < min(K)):
        return False
    return all(not host.is_red(*sorted((i, j, k))) for i in I for j in J for k in K)


def find_blue_tripartite_unordered(host: Host, n: int) -> SearchResult:
    """Blue box with disjoint but otherwise unconstrained parts (brute force)."""
    N = host.N
    nodes = 0
    for S in combinations(range(N), 3 * n):
        rest = list(S)
        for I in combinations(rest, n):
            if I[0] != rest[0]:
                break
            r2 = [x for x in rest if x not in I]
            for J in combinations(r2, n):
                if J[0] != r2[0]:
                    break
                K = [x for x in r2 if x not in J]
                nodes += 1
                if all(not host.is_red(*sorted((i, j, k))) for i in I for j in J for k in K):
                    return SearchResult(Certificate("blue-tripartite", {"I": list(I), "J": list(J), "K": K,
                                                                        "exhaustive": True}), True, nodes)
    return SearchResult(None, True, nodes)
