"""Conditions on the palette coloring g, and its construction by alteration.

1. red(g) is an oriented 3-graph (at most one red permutation per triple,
   nothing red with a repeated coordinate);
2. any k <= k_max palette values span fewer than k/2 red arcs;
3. no blue X x Y x Z with |X| = |Y| = |Z| = ceil(t^(1-eps)).

For condition 2 an arc counts towards a set S when all three of its
coordinates lie in S.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb

import numpy as np

from ..errors import ConstructionFailed, InfeasibleMode
from .pair import red_arcs

# exact condition-3 scan is attempted below this many (X, Y) candidate pairs
COND3_EXACT_LIMIT = 3_000_000


def floor_size(t: int, eps: float) -> int:
    # tiny slack so that e.g. 9**0.5 does not round up to 4
    return max(1, math.ceil(t ** (1 - eps) - 1e-9))


def wilson(failures: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials == 0:
        return (0.0, 1.0)
    ph = failures / trials
    den = 1 + z * z / trials
    mid = (ph + z * z / (2 * trials)) / den
    half = z * math.sqrt(ph * (1 - ph) / trials + z * z / (4 * trials * trials)) / den
    return (max(0.0, mid - half), min(1.0, mid + half))


@dataclass
class GConditionReport:
    t: int
    k_max: int
    eps: float
    cond1: bool
    cond1_witness: list | None
    cond2: bool
    cond2_witness: dict | None
    cond3: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"t": self.t, "k_max": self.k_max, "eps": self.eps,
                "cond1": self.cond1, "cond1_witness": self.cond1_witness,
                "cond2": self.cond2, "cond2_witness": self.cond2_witness,
                "cond3": self.cond3}


# --- condition 1 -----------------------------------------------------------


def cond1_violation(g: np.ndarray):
    """First offending arc(s) in lexicographic order, or None."""
    seen = {}
    for a in red_arcs(g):
        if len(set(a)) < 3:
            return [list(a)]
        key = frozenset(a)
        if key in seen:
            return [list(seen[key]), list(a)]
        seen[key] = a
    return None


# --- condition 2 -----------------------------------------------------------


def _distinct_arcs(g):
    out = {}
    for a in red_arcs(g):
        if len(set(a)) == 3:
            out.setdefault(frozenset(a), a)
    return list(out.values())


def cond2_violation(g: np.ndarray, k_max: int, alive=None):
    """A vertex set S with |S| <= k_max spanning >= |S|/2 red arcs, or None.

    A minimal such S is the vertex set of a connected arc family A with
    2|A| >= |V(A)|, so it suffices to enumerate connected arc families (each
    exactly once, ESU style) while |V(A)| <= k_max.
    """
    arcs = _distinct_arcs(g)
    if alive is not None:
        arcs = [a for a in arcs if all(alive[x] for x in a)]
    sets = [frozenset(a) for a in arcs]
    by_vertex: dict[int, list[int]] = {}
    for i, s in enumerate(sets):
        for x in s:
            by_vertex.setdefault(x, []).append(i)

    def nbrs(i):
        return {j for x in sets[i] for j in by_vertex[x] if j != i}

    def grow(chosen, verts, ext, root):
        if 2 * len(chosen) >= len(verts):
            return verts
        ext = set(ext)
        while ext:
            j = min(ext)
            ext.discard(j)
            nv = verts | sets[j]
            if len(nv) > k_max:
                continue
            excl = set()
            for i in chosen:
                excl |= nbrs(i)
            excl |= set(chosen)
            new_ext = ext | {x for x in nbrs(j) if x > root and x not in excl}
            res = grow(chosen + [j], nv, new_ext, root)
            if res is not None:
                return res
        return None

    if k_max < 3:
        return None
    for r in range(len(sets)):
        res = grow([r], sets[r], {j for j in nbrs(r) if j > r}, r)
        if res is not None:
            S = sorted(res)
            inside = [list(a) for a in arcs if set(a) <= set(S)]
            return {"set": S, "arcs": inside}
    return None


def count_inside(g: np.ndarray, S) -> int:
    S = list(S)
    sub = g[np.ix_(S, S, S)]
    return int(sub.sum())


def cond2_brute(g: np.ndarray, k_max: int) -> bool:
    """Reference: scan every vertex subset of size <= k_max."""
    t = g.shape[0]
    for k in range(1, min(k_max, t) + 1):
        for S in combinations(range(t), k):
            if 2 * count_inside(g, S) >= k:
                return False
    return True


# --- condition 3 -----------------------------------------------------------


def is_blue_box(g, X, Y, Z) -> bool:
    return not g[np.ix_(list(X), list(Y), list(Z))].any()


def cond3_exact(g: np.ndarray, s: int):
    """A blue s x s x s box with disjoint X, Y, Z, or None (exhaustive)."""
    t = g.shape[0]
    blue = ~g
    for X in combinations(range(t), s):
        bx = blue[list(X)].all(axis=0)  # (y, z)
        for Y in combinations([y for y in range(t) if y not in X], s):
            zs = bx[list(Y)].all(axis=0)
            zs[list(X)] = False
            zs[list(Y)] = False
            Z = np.flatnonzero(zs)
            if Z.size >= s:
                return [list(X), list(Y), [int(z) for z in Z[:s]]]
    return None


def cond3_exact_feasible(t: int, s: int) -> bool:
    return s <= 3 and 3 * s <= t and comb(t, s) * comb(t - s, s) <= COND3_EXACT_LIMIT


def cond3_sampled(g: np.ndarray, s: int, trials: int, seed: int):
    t = g.shape[0]
    if 3 * s > t:
        return 0, None
    rng = np.random.default_rng(seed)
    failures, first = 0, None
    for _ in range(trials):
        p = rng.permutation(t)
        X, Y, Z = sorted(p[:s]), sorted(p[s:2 * s]), sorted(p[2 * s:3 * s])
        if is_blue_box(g, X, Y, Z):
            failures += 1
            if first is None:
                first = [[int(x) for x in X], [int(y) for y in Y], [int(z) for z in Z]]
    return failures, first


def verify_g(g: np.ndarray, t: int, k_max: int, eps: float, mode: str = "auto",
             trials: int = 1000, seed: int = 0) -> GConditionReport:
    """Check conditions 1-3. ``mode`` is "exact", "sampled" or "auto"."""
    g = np.asarray(g, dtype=bool).reshape(t, t, t)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    w1 = cond1_violation(g)
    w2 = cond2_violation(g, k_max)
    s = floor_size(t, eps)
    exact_ok = cond3_exact_feasible(t, s) or 3 * s > t
    if mode == "exact" and not exact_ok:
        raise InfeasibleMode(f"exact condition 3 needs floor <= 3 and a small scan (t={t}, floor={s})")
    if mode not in ("exact", "sampled", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    if 3 * s > t:
        c3 = {"verdict": "verified-exact", "floor": s, "note": "no three disjoint sets of this size"}
    elif mode == "exact" or (mode == "auto" and exact_ok):
        box = cond3_exact(g, s)
        c3 = ({"verdict": "verified-exact", "floor": s} if box is None
              else {"verdict": "refuted", "floor": s, "witness": box})
    else:
        fails, first = cond3_sampled(g, s, trials, seed)
        lo, hi = wilson(fails, trials)
        c3 = {"verdict": "refuted" if first else "verified-sampled", "floor": s,
              "trials": trials, "failures": fails,
              "failure_rate_interval": [round(lo, 6), round(hi, 6)]}
        if first:
            c3["witness"] = first
    c3["eps"] = eps
    return GConditionReport(t, k_max, eps, w1 is None, w1, w2 is None, w2, c3)


# --- construction by alteration ------------------------------------------


def build_g(t: int, eps: float, k_max: int, seed: int, delta: float = 0.0, p: float | None = None,
            alter_blue: bool = False, trials: int = 1000):
    """Sample g on a 2t palette, delete one vertex per violation, keep t survivors.

    Default p is t^(-2+delta) / 8, which makes the expected number of red
    arcs on the 2t palette t^(1+delta). Blue boxes are only altered away when
    ``alter_blue`` is set and an exact scan is feasible; at small t they are
    nearly unavoidable and would exhaust the deletion allowance.
    Returns (g, report, info).
    """
    if t < 8:
        raise ValueError("build_g needs t >= 8")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if p is None:
        p = t ** (-2 + delta) / 8
    T = 2 * t
    rng = np.random.default_rng(seed)
    g = rng.random((T, T, T)) < p
    idx = np.arange(T)
    rep = (idx[:, None, None] == idx[None, :, None]) | (idx[None, :, None] == idx[None, None, :]) | \
          (idx[:, None, None] == idx[None, None, :])
    g &= ~rep
    sampled_arcs = int(g.sum())
    alive = np.ones(T, dtype=bool)
    deleted: list[dict] = []

    def kill(x, kind):
        alive[x] = False
        g[x, :, :] = False
        g[:, x, :] = False
        g[:, :, x] = False
        deleted.append({"vertex": int(x), "violation": kind})
        if len(deleted) >= t:
            raise ConstructionFailed(f"{len(deleted)} violations on a 2t={T} palette; reseed")

    # clashes: two red permutations of the same triple
    while True:
        w = cond1_violation(g)
        if w is None:
            break
        kill(min(min(a) for a in w), "clash")
    while True:
        w = cond2_violation(g, k_max)
        if w is None:
            break
        kill(w["set"][0], "dense")
    s = floor_size(t, eps)
    if alter_blue and cond3_exact_feasible(t, s):
        while True:
            sub = np.flatnonzero(alive)
            box = cond3_exact(g[np.ix_(sub, sub, sub)], s)
            if box is None:
                break
            kill(int(sub[min(min(b) for b in box)]), "blue-box")
    keep = np.flatnonzero(alive)[:t]
    final = g[np.ix_(keep, keep, keep)].copy()
    report = verify_g(final, t, k_max, eps, mode="auto", trials=trials, seed=seed)
    info = {"palette": T, "p": p, "sampled_arcs": sampled_arcs, "deleted": deleted,
            "kept": [int(x) for x in keep], "final_arcs": int(final.sum())}
    return final, report, info


def matching_g(t: int, seed: int | None = None) -> np.ndarray:
    """Red arcs forming disjoint triples on [0, t), randomly oriented when seeded."""
    verts = list(range(t))
    perms = list(permutations(range(3)))
    rng = np.random.default_rng(seed) if seed is not None else None
    if rng is not None:
        verts = [int(x) for x in rng.permutation(t)]
    g = np.zeros((t, t, t), dtype=bool)
    for i in range(0, t - 2, 3):
        tri = verts[i:i + 3]
        if rng is not None:
            tri = [tri[j] for j in perms[int(rng.integers(6))]]
        g[tri[0], tri[1], tri[2]] = True
    return g
