"""Stepping-up colorings of the triples of {0, ..., 2^m - 1}.

delta(u, v) is the highest bit where u and v differ. For v1 < v2 < v3 with
d1 = delta(v1, v2) and d2 = delta(v2, v3), the triple is red iff d1 > d2 and
{d1, d2} is an edge of the base graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from ..core.embed import TABLE_LIMIT, Color, Host

MATERIALIZE_MAX_M = 13


def delta(u: int, v: int, m: int | None = None) -> int:
    if u == v:
        raise ValueError("delta needs u != v")
    if m is not None and not (0 <= u < 2 ** m and 0 <= v < 2 ** m):
        raise ValueError(f"vertices must lie in [0, 2^{m})")
    return (u ^ v).bit_length() - 1


def delta_array(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorized delta for int64 arrays with u != v elementwise."""
    x = np.bitwise_xor(u, v).astype(np.int64)
    # floor(log2) via frexp is exact for integers below 2^53
    _, e = np.frexp(x.astype(np.float64))
    return e.astype(np.int64) - 1


@dataclass(frozen=True)
class StepUpColoring:
    m: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = set()
        for a, b in self.edges:
            if a == b or not (0 <= a < self.m and 0 <= b < self.m):
                raise ValueError(f"bad base edge {(a, b)} for m={self.m}")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        object.__setattr__(self, "_eset", frozenset(norm))

    @property
    def N(self) -> int:
        return 2 ** self.m

    def is_red(self, v1: int, v2: int, v3: int) -> bool:
        d1, d2 = delta(v1, v2), delta(v2, v3)
        return d1 > d2 and (d2, d1) in self._eset

    def to_dict(self) -> dict:
        return {"type": "stepup", "m": self.m, "graph_edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, d: dict) -> StepUpColoring:
        if d.get("type") != "stepup":
            raise ValueError("not a stepping-up container")
        return cls(int(d["m"]), tuple(tuple(e) for e in d["graph_edges"]))


def chi_stepup(sc: StepUpColoring, v1: int, v2: int, v3: int) -> Color:
    if not (0 <= v1 < v2 < v3 < sc.N):
        raise ValueError(f"chi_stepup needs 0 <= v1 < v2 < v3 < 2^m, got {(v1, v2, v3)}")
    return Color.RED if sc.is_red(v1, v2, v3) else Color.BLUE


def stepup_host(sc: StepUpColoring) -> Host:
    """Host evaluating colors on demand; tabulated only when small."""
    host = Host(sc.N, sc.is_red)
    if sc.N <= TABLE_LIMIT and sc.m <= MATERIALIZE_MAX_M:
        host.table()
    return host


def cycle_graph(m: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, (i + 1) % m) for i in range(m))


def delta_monotone_extremes(A, m: int | None = None) -> tuple[int, int]:
    """Longest delta-increasing and delta-decreasing chains inside sorted A."""
    A = list(A)
    if any(A[i] >= A[i + 1] for i in range(len(A) - 1)):
        raise ValueError("A must be strictly increasing")
    L = len(A)
    if L <= 1:
        return (L, L)
    d = [[0] * L for _ in range(L)]
    for i in range(L):
        for j in range(i + 1, L):
            d[i][j] = delta(A[i], A[j], m)
    inc = [[2] * L for _ in range(L)]
    dec = [[2] * L for _ in range(L)]
    best_inc = best_dec = 2
    for j in range(L):
        for i in range(j):
            for k in range(i):
                if d[k][i] < d[i][j] and inc[k][i] + 1 > inc[i][j]:
                    inc[i][j] = inc[k][i] + 1
                if d[k][i] > d[i][j] and dec[k][i] + 1 > dec[i][j]:
                    dec[i][j] = dec[k][i] + 1
            best_inc = max(best_inc, inc[i][j])
            best_dec = max(best_dec, dec[i][j])
    return (best_inc, best_dec)


def claim_bound(s: int, t: int) -> int:
    return comb(s + t - 4, t - 2)


def check_claim_exhaustive(m: int, s_values=(3, 4), t_values=(3, 4)) -> dict:
    """Every A in [0, 2^m) avoiding order-s increasing and order-t decreasing
    chains has |A| <= C(s+t-4, t-2). Depth-first over subsets in increasing
    order with incremental chain tables. Chain lengths only grow with A, so
    a branch stops once either length reaches the largest s or t."""
    V = 2 ** m
    smax, tmax = max(s_values), max(t_values)
    chosen: list[int] = []
    # inc[i][j], dec[i][j] for positions i < j in chosen
    inc: list[list[int]] = []
    dec: list[list[int]] = []
    largest = {(s, t): 0 for s in s_values for t in t_values}
    stats = {"subsets": 0, "violations": []}

    def rec(start, mi, md):
        stats["subsets"] += 1
        n = len(chosen)
        for (s, t) in largest:
            if mi < s and md < t:
                if n > largest[(s, t)]:
                    largest[(s, t)] = n
                if n > claim_bound(s, t):
                    stats["violations"].append({"A": list(chosen), "s": s, "t": t})
        if mi >= smax or md >= tmax:
            return
        for x in range(start, V):
            j = len(chosen)
            row_i = [2] * (j + 1)
            row_d = [2] * (j + 1)
            dj = [delta(chosen[i], x) for i in range(j)]
            ni, nd = max(mi, min(j + 1, 2)), max(md, min(j + 1, 2))
            for i in range(j):
                for k in range(i):
                    dk = delta(chosen[k], chosen[i])
                    if dk < dj[i] and inc[i][k] + 1 > row_i[i]:
                        row_i[i] = inc[i][k] + 1
                    if dk > dj[i] and dec[i][k] + 1 > row_d[i]:
                        row_d[i] = dec[i][k] + 1
                ni = max(ni, row_i[i])
                nd = max(nd, row_d[i])
            chosen.append(x)
            # inc[j][i] holds the chain value for the pair (i, j)
            inc.append(row_i)
            dec.append(row_d)
            rec(x + 1, ni, nd)
            chosen.pop()
            inc.pop()
            dec.pop()

    rec(0, 0, 0)
    return {"m": m, "subsets": stats["subsets"], "violations": stats["violations"],
            "largest": {f"{s},{t}": v for (s, t), v in sorted(largest.items())},
            "bounds": {f"{s},{t}": claim_bound(s, t) for (s, t) in sorted(largest)}}


def _sorted_distinct(rng, V, count, r):
    """``count`` uniformly random r-chains v1 < ... < vr in [0, V)."""
    out = []
    have = 0
    while have < count:
        x = rng.integers(0, V, size=(count - have + 64, r), dtype=np.int64)
        x.sort(axis=1)
        x = x[np.all(np.diff(x, axis=1) > 0, axis=1)][: count - have]
        out.append(x)
        have += x.shape[0]
    return np.concatenate(out)


def check_property_one(m: int, samples: int, seed: int) -> dict:
    """delta(u, v) != delta(v, w) for u < v < w, exhaustive when that is
    no more work than ``samples`` random triples."""
    V = 2 ** m
    if V < 3:
        return {"m": m, "mode": "exhaustive", "checked": 0, "violations": 0}
    if comb(V, 3) <= samples:
        x = np.array(list(combinations(range(V), 3)), dtype=np.int64)
        mode = "exhaustive"
    else:
        x = _sorted_distinct(np.random.default_rng(seed), V, samples, 3)
        mode = "sampled"
    d1 = delta_array(x[:, 0], x[:, 1])
    d2 = delta_array(x[:, 1], x[:, 2])
    bad = np.flatnonzero(d1 == d2)
    out = {"m": m, "mode": mode, "checked": int(x.shape[0]), "violations": int(bad.size)}
    if bad.size:
        out["witness"] = [int(v) for v in x[bad[0]]]
    return out


def check_property_two(m: int, samples: int, r_max: int, seed: int) -> dict:
    """delta(v1, vr) = max_j delta(v_j, v_j+1) on random chains of length 2..r_max."""
    rng = np.random.default_rng(seed)
    V = 2 ** m
    lengths = [r for r in range(2, r_max + 1) if r <= V]
    violations, done, witness = 0, 0, None
    for i, r in enumerate(lengths):
        n = samples // len(lengths) + (1 if i < samples % len(lengths) else 0)
        x = _sorted_distinct(rng, V, n, r)
        steps = np.stack([delta_array(x[:, j], x[:, j + 1]) for j in range(r - 1)], axis=1)
        ends = delta_array(x[:, 0], x[:, -1])
        bad = np.flatnonzero(ends != steps.max(axis=1))
        violations += int(bad.size)
        done += int(x.shape[0])
        if bad.size and witness is None:
            witness = [int(v) for v in x[bad[0]]]
    out = {"m": m, "checked": done, "violations": violations}
    if witness:
        out["witness"] = witness
    return out
