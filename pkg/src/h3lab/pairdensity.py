"""Pair homomorphisms, exact pair density, avoidability and 123-inducibility.

All densities are ``fractions.Fraction``; nothing here touches floats.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import numpy as np

from .core.berge import berge_cycle
from .core.canon import automorphisms
from .core.certificate import Certificate
from .core.graph import ThreeGraph
from .errors import BudgetExceeded, H3Error, InvalidHomomorphism, SizeLimitError

THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)

# exact routines refuse inputs above these sizes
MAX_PAIRS = 15
MAX_EDGES = 16
ENUM_ARCS = 20


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    return Fraction(str(s))


def edge_pairs(e, rank):
    """(uv, vw, uw) as sorted vertex pairs, where u < v < w under ``rank``."""
    u, v, w = sorted(e, key=rank.__getitem__)
    return (_p(u, v), _p(v, w), _p(u, w))


def _p(a, b):
    return (a, b) if a < b else (b, a)


# ---------------------------------------------------------------------------
# densest subhypergraph of an image
# ---------------------------------------------------------------------------


def _popcount(arr: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(arr).astype(np.int64)
    b = arr.view(np.uint8).reshape(arr.shape + (8,))
    return np.unpackbits(b, axis=-1).sum(axis=-1).astype(np.int64)


def densest_enum(arcs: list[frozenset]) -> Fraction:
    """max |A| / |V(A)| over nonempty arc subsets A, by subset enumeration."""
    if not arcs:
        raise ValueError("need at least one arc")
    verts = sorted(set().union(*arcs))
    if len(arcs) > ENUM_ARCS + 2 or len(verts) > 64:
        raise SizeLimitError("too many arcs or blocks for subset enumeration")
    idx = {x: i for i, x in enumerate(verts)}
    masks = np.zeros(1, dtype=np.uint64)
    counts = np.zeros(1, dtype=np.int64)
    for a in arcs:
        m = np.uint64(sum(1 << idx[x] for x in a))
        masks = np.concatenate([masks, masks | m])
        counts = np.concatenate([counts, counts + 1])
    masks, counts = masks[1:], counts[1:]
    sizes = _popcount(masks)
    # ratios have denominators <= 64, so a float argmax picks an exact maximiser
    i = int(np.argmax(counts / sizes))
    best = Fraction(int(counts[i]), int(sizes[i]))
    return best


def densest_flow(arcs: list[frozenset]) -> Fraction:
    """Same quantity via Dinkelbach iteration on a max-closure min cut."""
    import networkx as nx

    arcs = list(arcs)
    lam = Fraction(len(arcs), len(set().union(*arcs)))
    while True:
        p, q = lam.numerator, lam.denominator
        G = nx.DiGraph()
        for i, a in enumerate(arcs):
            G.add_edge("s", ("a", i), capacity=q)
            for x in a:
                G.add_edge(("a", i), ("v", x))  # infinite capacity
        for x in set().union(*arcs):
            G.add_edge(("v", x), "t", capacity=p)
        cut, (side, _) = nx.minimum_cut(G, "s", "t")
        gain = q * len(arcs) - cut
        if gain <= 0:
            return lam
        chosen = [arcs[i] for i in range(len(arcs)) if ("a", i) in side]
        lam = Fraction(len(chosen), len(set().union(*chosen)))


def densest(arcs) -> Fraction:
    """max |A| / |V(A)|, split by connected component."""
    arcs = [frozenset(a) for a in dict.fromkeys(frozenset(a) for a in arcs)]
    if not arcs:
        raise ValueError("need at least one arc")
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in arcs:
        it = iter(a)
        r = find(next(it))
        for x in it:
            rx = find(x)
            if rx != r:
                parent[rx] = r
    comps: dict = {}
    for a in arcs:
        comps.setdefault(find(next(iter(a))), []).append(a)
    best = Fraction(0)
    for comp in comps.values():
        nverts = len(set().union(*comp))
        if len(comp) <= ENUM_ARCS and nverts <= 64:
            d = densest_enum(comp)
        else:
            d = densest_flow(comp)
        best = max(best, d)
    return best


# ---------------------------------------------------------------------------
# pair partitions
# ---------------------------------------------------------------------------


@dataclass
class PairPartition:
    """A pair homomorphism stored as a labelled partition of the shadow."""

    base: ThreeGraph
    ordering: tuple[int, ...]
    blocks: dict[tuple[int, int], int]
    arcs: tuple[tuple[int, int, int], ...] = field(default=())

    @classmethod
    def build(cls, H: ThreeGraph, ordering, blocks) -> PairPartition:
        """Validate and construct. ``blocks`` is a pair->label dict or a list of pair lists."""
        ordering = tuple(int(x) for x in ordering)
        sup = H.support()
        if sorted(set(ordering)) != sorted(ordering) or not set(sup) <= set(ordering):
            raise InvalidHomomorphism("ordering must list every support vertex exactly once")
        if not isinstance(blocks, dict):
            lab = {}
            for b, members in enumerate(blocks):
                for pr in members:
                    key = _p(int(pr[0]), int(pr[1]))
                    if key in lab:
                        raise InvalidHomomorphism(f"pair {key} appears in two blocks")
                    lab[key] = b
            blocks = lab
        else:
            blocks = {_p(*map(int, k)): int(v) for k, v in blocks.items()}
        if set(blocks) != set(H._pairs):
            missing = sorted(set(H._pairs) - set(blocks))
            extra = sorted(set(blocks) - set(H._pairs))
            raise InvalidHomomorphism(f"blocks must partition the shadow (missing {missing}, extra {extra})")
        rank = {v: i for i, v in enumerate(ordering)}
        seen: dict[frozenset, tuple] = {}
        arcs = []
        for e in H.edges:
            a = tuple(blocks[p] for p in edge_pairs(e, rank))
            if len(set(a)) < 3:
                raise InvalidHomomorphism(f"edge {e} sends two of its pairs to one block: {a}")
            key = frozenset(a)
            if key in seen:
                if seen[key] != a:
                    raise InvalidHomomorphism(
                        f"edge {e} maps to {a}, a different permutation of existing arc {seen[key]}")
                continue
            seen[key] = a
            arcs.append(a)
        return cls(H, ordering, dict(blocks), tuple(arcs))

    @property
    def num_blocks(self) -> int:
        return len(set(self.blocks.values()))

    def block_lists(self) -> list[list[list[int]]]:
        """Blocks relabelled by first occurrence in sorted pair order."""
        relabel: dict[int, int] = {}
        out: list[list[list[int]]] = []
        for pr in sorted(self.blocks):
            b = self.blocks[pr]
            if b not in relabel:
                relabel[b] = len(out)
                out.append([])
            out[relabel[b]].append(list(pr))
        return out

    def encoding(self) -> tuple:
        return (self.ordering, tuple(tuple(map(tuple, b)) for b in self.block_lists()))

    def to_witness(self) -> dict:
        pp = PairPartition.build(self.base, self.ordering, self.block_lists())
        return {"ordering": list(self.ordering), "blocks": self.block_lists(),
                "arcs": [list(a) for a in pp.arcs]}


def max_subdensity(p: PairPartition) -> Fraction:
    """max over nonempty E' of e(f(E')) / v(f(E'))."""
    if not p.arcs:
        raise ValueError("the empty hypergraph has no nonempty subhypergraph")
    if p.base.e > 64:
        raise SizeLimitError("max_subdensity supports at most 64 edges")
    return densest(p.arcs)


def check_pair_homomorphism(H: ThreeGraph, ordering, blocks) -> Fraction:
    """Validate a pair homomorphism witness and return its max subdensity."""
    return max_subdensity(PairPartition.build(H, ordering, blocks))


def iterative_witness(H: ThreeGraph, edge_sequence=None, ordering=None) -> PairPartition:
    """Fresh-block pair homomorphism along a build sequence.

    Each edge of ``edge_sequence`` may share at most one pair with the shadow
    of the edges before it; its other pairs get new blocks, so every step adds
    one arc and at least two blocks.
    """
    seq = [tuple(sorted(e)) for e in (edge_sequence or H.edges)]
    if sorted(seq) != list(H.edges):
        raise ValueError("edge_sequence must list every edge of H once")
    ordering = tuple(range(H.n)) if ordering is None else tuple(ordering)
    rank = {v: i for i, v in enumerate(ordering)}
    blocks: dict = {}
    for e in seq:
        ps = edge_pairs(e, rank)
        old = [p for p in ps if p in blocks]
        if len(old) > 1:
            raise InvalidHomomorphism(f"edge {e} reuses {len(old)} shadow pairs; at most one allowed")
        for p in ps:
            if p not in blocks:
                blocks[p] = len(blocks)
    return PairPartition.build(H, ordering, blocks)


# ---------------------------------------------------------------------------
# ordering enumeration
# ---------------------------------------------------------------------------


def canonical_orderings(H: ThreeGraph, symmetry: bool = True) -> list[tuple[int, ...]]:
    """Orderings of the support, one per orbit of Aut(H) x reversal when ``symmetry``."""
    sup = H.support()
    if not symmetry:
        return list(permutations(sup))
    auts = automorphisms(H)
    out = []
    for o in permutations(sup):
        ok = True
        for a in auts:
            img = tuple(a[v] for v in o)
            if img < o or img[::-1] < o:
                ok = False
                break
        if ok:
            out.append(o)
    return out


def edge_sequence(H: ThreeGraph) -> list[tuple[int, int, int]]:
    """Edges in BFS order over shared shadow pairs, so pairs repeat early."""
    by_pair: dict = {}
    for i, (u, v, w) in enumerate(H.edges):
        for p in ((u, v), (v, w), (u, w)):
            by_pair.setdefault(p, []).append(i)
    seen = [False] * H.e
    order = []
    for s in range(H.e):
        if seen[s]:
            continue
        seen[s] = True
        q = deque([s])
        while q:
            i = q.popleft()
            order.append(H.edges[i])
            u, v, w = H.edges[i]
            for p in ((u, v), (v, w), (u, w)):
                for j in by_pair[p]:
                    if not seen[j]:
                        seen[j] = True
                        q.append(j)
    return order


# ---------------------------------------------------------------------------
# partition search
# ---------------------------------------------------------------------------


class _Search:
    """Restricted-growth DFS over pair partitions for one vertex ordering.

    mode "density": find the first partition (in DFS order) with max
    subdensity strictly below ``bound``, tightening as it goes.
    mode "acyclic": find any partition whose image is Berge-acyclic.
    """

    def __init__(self, H, ordering, mode, bound=None, budget=None):
        self.H = H
        self.ordering = tuple(ordering)
        rank = {v: i for i, v in enumerate(self.ordering)}
        self.mode = mode
        self.bound = bound
        self.budget = budget
        self.nodes = 0
        pairs = sorted(H._pairs)
        self.pidx = {p: i for i, p in enumerate(pairs)}
        self.npairs = len(pairs)
        self.steps = [tuple(self.pidx[p] for p in edge_pairs(e, rank)) for e in edge_sequence(H)]
        self.blk = [-1] * self.npairs
        self.best = None  # (value, blk copy)

    def run(self):
        arcs: dict[frozenset, tuple] = {}
        subs = [(0, 0)]
        self._rec(0, 0, arcs, subs, Fraction(0))
        return self.best

    def _rec(self, depth, nb, arcs, subs, cur):
        if self.mode == "density" and self.best is not None and self.best[0] == THIRD:
            return True
        if depth == len(self.steps):
            if self.mode == "density":
                if self.bound is None or cur < self.bound:
                    self.bound = cur
                    self.best = (cur, list(self.blk))
                return cur == THIRD
            self.best = (None, list(self.blk))
            return True
        step = self.steps[depth]
        free = [i for i in step if self.blk[i] < 0]
        for choice in self._choices(len(free), nb):
            self.nodes += 1
            if self.budget is not None and self.nodes > self.budget:
                raise BudgetExceeded("pair partition search exceeded budget", self.nodes)
            for i, b in zip(free, choice):
                self.blk[i] = b
            arc = tuple(self.blk[i] for i in step)
            new_nb = max([nb - 1] + list(choice)) + 1
            if len(set(arc)) == 3:
                key = frozenset(arc)
                old = arcs.get(key)
                if old is None:
                    res = self._extend(depth, new_nb, arcs, subs, cur, key, arc)
                    if res:
                        self._clear(free)
                        return True
                elif old == arc:
                    if self._rec(depth + 1, new_nb, arcs, subs, cur):
                        self._clear(free)
                        return True
            self._clear(free)
        return False

    def _clear(self, free):
        for i in free:
            self.blk[i] = -1

    def _choices(self, k, nb):
        """Restricted-growth block assignments for k fresh pairs."""
        if k == 0:
            yield ()
            return
        for b in range(nb + 1):
            for rest in self._choices(k - 1, max(nb, b + 1)):
                yield (b,) + rest

    def _extend(self, depth, nb, arcs, subs, cur, key, arc):
        arcs[key] = arc
        try:
            if self.mode == "density":
                am = 0
                for b in arc:
                    am |= 1 << b
                new_subs = [(m | am, c + 1) for m, c in subs]
                top = cur
                for m, c in new_subs:
                    r = Fraction(c, m.bit_count())
                    if r > top:
                        top = r
                if self.bound is not None and top >= self.bound:
                    return False
                return self._rec(depth + 1, nb, arcs, subs + new_subs, top)
            image = ThreeGraph(max(nb, 3), [tuple(sorted(k)) for k in arcs])
            if berge_cycle(image) is not None:
                return False
            return self._rec(depth + 1, nb, arcs, subs, cur)
        finally:
            del arcs[key]

    def partition(self, blk) -> PairPartition:
        pairs = sorted(self.H._pairs)
        return PairPartition.build(self.H, self.ordering, {p: blk[self.pidx[p]] for p in pairs})


def _search_orderings(H, orderings, start_index, budget):
    """Sequential density search across orderings; returns (value, index, blk, nodes)."""
    bound = None
    found = None
    nodes = 0
    for k, o in enumerate(orderings):
        s = _Search(H, o, "density", bound=bound, budget=None if budget is None else budget - nodes)
        res = s.run()
        nodes += s.nodes
        if res is not None:
            bound = res[0]
            found = (res[0], start_index + k, res[1])
            if bound == THIRD:
                break
    return found, nodes


def _worker(args):
    H, chunk, budget = args
    results = []
    bound = None
    nodes = 0
    for idx, o in chunk:
        s = _Search(H, o, "density", bound=bound, budget=None if budget is None else budget - nodes)
        res = s.run()
        nodes += s.nodes
        if res is not None:
            bound = res[0]
            results.append((res[0], idx, res[1]))
            if bound == THIRD:
                break
    best = min(results, key=lambda r: (r[0], r[1])) if results else None
    return best, nodes


@dataclass
class MpairResult:
    value: Fraction
    partition: PairPartition
    orderings_searched: int
    nodes: int

    def certificate(self) -> Certificate:
        w = self.partition.to_witness()
        w["value"] = frac_str(self.value)
        return Certificate("mpair-optimal", w)


def _check_limits(H):
    if H.e == 0:
        raise H3Error("m_pair is defined for nonempty hypergraphs only")
    if len(H._pairs) > MAX_PAIRS or H.e > MAX_EDGES:
        raise SizeLimitError(
            f"exact m_pair supports |shadow| <= {MAX_PAIRS} and e <= {MAX_EDGES}; "
            f"got {len(H._pairs)} pairs, {H.e} edges (use check_pair_homomorphism)")


def mpair_exact(H: ThreeGraph, orderings="all", symmetry: bool = True, threads: int = 1,
                budget: int | None = None) -> MpairResult:
    """Exact m_pair(H) with an optimal pair partition as certificate.

    ``orderings`` is "all" (minimise over vertex orderings, or just the
    identity when H.ordered) or an explicit list of orderings.
    """
    _check_limits(H)
    if orderings == "all":
        ords = [tuple(range(H.n))] if H.ordered else canonical_orderings(H, symmetry)
        if H.ordered:
            ords = [tuple(v for v in ords[0] if v in set(H.support()))]
    else:
        ords = [tuple(o) for o in orderings]
    if threads > 1 and len(ords) > 1:
        chunks = [[] for _ in range(threads)]
        for i, o in enumerate(ords):
            chunks[i % threads].append((i, o))
        with ProcessPoolExecutor(max_workers=threads) as ex:
            outs = list(ex.map(_worker, [(H, c, budget) for c in chunks if c]))
        nodes = sum(n for _, n in outs)
        cands = [b for b, _ in outs if b is not None]
        found = min(cands, key=lambda r: (r[0], r[1]))
    else:
        found, nodes = _search_orderings(H, ords, 0, budget)
    value, idx, blk = found
    s = _Search(H, ords[idx], "density")
    return MpairResult(value, s.partition(blk), len(ords), nodes)


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("H3LAB_THREADS", "1")))
    except ValueError:
        return 1


def verify_mpair_certificate(H: ThreeGraph, cert: Certificate) -> bool:
    """The partition is a valid pair homomorphism achieving the stated value."""
    w = cert.witness
    try:
        val = check_pair_homomorphism(H, w["ordering"], w["blocks"])
    except InvalidHomomorphism:
        return False
    return val == parse_frac(w["value"])


# ---------------------------------------------------------------------------
# avoidability
# ---------------------------------------------------------------------------


def find_acyclic_image(H: ThreeGraph, symmetry: bool = True, budget=None) -> PairPartition | None:
    """A pair homomorphism whose image is Berge-acyclic, or None if none exists."""
    for o in canonical_orderings(H, symmetry):
        s = _Search(H, o, "acyclic", budget=budget)
        res = s.run()
        if res is not None:
            return s.partition(res[1])
    return None


def is_avoidable(H: ThreeGraph, symmetry: bool = True) -> tuple[bool, Certificate]:
    """Avoidability decided twice: direct image search and m_pair >= 1/2.

    Raises H3Error if the two routes disagree.
    """
    _check_limits(H)
    witness = find_acyclic_image(H, symmetry)
    direct = witness is None
    mp = mpair_exact(H, symmetry=symmetry)
    via_density = mp.value >= HALF
    if direct != via_density:
        raise H3Error(f"avoidability routes disagree on {H.edges}: direct={direct}, m_pair={mp.value}")
    if direct:
        cert = Certificate("avoidable", {"mpair": frac_str(mp.value),
                                         "orderings_searched": mp.orderings_searched,
                                         "optimal": mp.partition.to_witness()})
    else:
        w = witness.to_witness()
        w["mpair"] = frac_str(mp.value)
        cert = Certificate("not-avoidable", w)
    return direct, cert


def verify_not_avoidable(H: ThreeGraph, cert: Certificate) -> bool:
    w = cert.witness
    try:
        pp = PairPartition.build(H, w["ordering"], w["blocks"])
    except InvalidHomomorphism:
        return False
    image = ThreeGraph(max(pp.num_blocks, 3), [tuple(sorted(a)) for a in pp.arcs])
    return berge_cycle(image) is None


# ---------------------------------------------------------------------------
# 123-inducibility
# ---------------------------------------------------------------------------

# label assignment (uv, vw, uw) = (1, 2, 3) for each way of naming an edge's
# vertices u, v, w
_ROLES = list(permutations(range(3)))


@dataclass
class InducibilityWitness:
    labeling: dict[tuple[int, int], int]
    ordering: tuple[int, ...]

    def to_dict(self):
        return {"ordering": list(self.ordering),
                "labeling": [[u, v, lab] for (u, v), lab in sorted(self.labeling.items())]}

    @classmethod
    def from_dict(cls, d):
        return cls({_p(u, v): lab for u, v, lab in d["labeling"]}, tuple(d["ordering"]))


def is_123_inducible(H: ThreeGraph, budget: int | None = 50_000_000) -> tuple[InducibilityWitness | None, int]:
    """Search for a 123-labelling; returns (witness or None, nodes searched).

    Edges are labelled one at a time, most constrained first. Each edge
    labelling fixes the relative order of its three vertices; the precedence
    relation is kept acyclic incrementally.
    """
    label: dict[tuple[int, int], int] = {}
    succ: dict[int, dict[int, int]] = {v: {} for v in range(H.n)}
    done = [False] * H.e
    nodes = 0
    edges = H.edges

    def reaches(a, b):
        stack, seen = [a], {a}
        while stack:
            x = stack.pop()
            if x == b:
                return True
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return False

    def add_prec(a, b, added):
        if b in succ[a]:
            succ[a][b] += 1
            added.append((a, b))
            return True
        if reaches(b, a):
            return False
        succ[a][b] = 1
        added.append((a, b))
        return True

    def undo(added, newly):
        for a, b in added:
            succ[a][b] -= 1
            if succ[a][b] == 0:
                del succ[a][b]
        for p in newly:
            del label[p]

    def pick():
        best, score = None, -1
        for i, e in enumerate(edges):
            if done[i]:
                continue
            a, b, c = e
            s = sum(p in label for p in ((a, b), (b, c), (a, c)))
            if s > score:
                best, score = i, s
                if s == 3:
                    break
        return best

    def rec(remaining):
        nonlocal nodes
        if remaining == 0:
            return True
        i = pick()
        done[i] = True
        a, b, c = edges[i]
        verts = (a, b, c)
        for role in _ROLES:
            u, v, w = (verts[r] for r in role)
            want = {_p(u, v): 1, _p(v, w): 2, _p(u, w): 3}
            if any(label.get(p, lab) != lab for p, lab in want.items()):
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded("123-inducibility search exceeded budget", nodes)
            newly = [p for p in want if p not in label]
            for p in newly:
                label[p] = want[p]
            added: list = []
            if add_prec(u, v, added) and add_prec(v, w, added):
                if rec(remaining - 1):
                    return True
            undo(added, newly)
        done[i] = False
        return False

    if not rec(H.e):
        return None, nodes
    return InducibilityWitness(dict(label), _topo_order(H.n, succ)), nodes


def _topo_order(n, succ):
    indeg = [0] * n
    for a in succ:
        for b in succ[a]:
            indeg[b] += 1
    import heapq
    heap = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        x = heapq.heappop(heap)
        out.append(x)
        for y in sorted(succ[x]):
            indeg[y] -= 1
            if indeg[y] == 0:
                heapq.heappush(heap, y)
    return tuple(out)


def verify_inducibility(H: ThreeGraph, w: InducibilityWitness) -> bool:
    if sorted(w.ordering) != list(range(H.n)):
        return False
    rank = {v: i for i, v in enumerate(w.ordering)}
    for e in H.edges:
        uv, vw, uw = edge_pairs(e, rank)
        if (w.labeling.get(uv), w.labeling.get(vw), w.labeling.get(uw)) != (1, 2, 3):
            return False
    return True


def inducibility_certificate(H: ThreeGraph, budget=50_000_000) -> Certificate:
    w, nodes = is_123_inducible(H, budget)
    if w is None:
        return Certificate("not-123-inducible", {"complete": True, "nodes": nodes})
    d = w.to_dict()
    d["nodes"] = nodes
    return Certificate("123-inducible", d)
