"""3-uniform hypergraphs, oriented 3-graphs and the standard families."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

Pair = tuple[int, int]
Triple = tuple[int, int, int]


def _pair(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class ThreeGraph:
    """A 3-graph on vertices 0..n-1.

    Edges are stored as ascending triples in sorted order. When ``ordered`` is
    set, the identity order on 0..n-1 is the linear order of the vertex set.
    """

    n: int
    edges: tuple[Triple, ...]
    ordered: bool = False
    _pairs: frozenset = field(default=None, init=False, repr=False, compare=False)

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = (), ordered: bool = False):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = set()
        for e in edges:
            t = tuple(sorted(int(x) for x in e))
            if len(t) != 3 or len(set(t)) != 3:
                raise ValueError(f"edge {tuple(e)} does not have three distinct vertices")
            if t[0] < 0 or t[2] >= n:
                raise ValueError(f"edge {t} has a vertex outside [0, {n})")
            if t in norm:
                raise ValueError(f"duplicate edge {t}")
            norm.add(t)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        object.__setattr__(self, "ordered", bool(ordered))
        pairs = set()
        for u, v, w in self.edges:
            pairs.update(((u, v), (v, w), (u, w)))
        object.__setattr__(self, "_pairs", frozenset(pairs))

    @property
    def e(self) -> int:
        return len(self.edges)

    def support(self) -> list[int]:
        """Vertices lying in at least one edge."""
        return sorted({x for ed in self.edges for x in ed})

    def has_pair(self, a: int, b: int) -> bool:
        return _pair(a, b) in self._pairs

    def incidence(self) -> list[list[int]]:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, ed in enumerate(self.edges):
            for x in ed:
                inc[x].append(i)
        return inc

    def relabel(self, perm: dict[int, int] | list[int], n: int | None = None) -> ThreeGraph:
        """Image under the vertex map ``perm`` (old -> new)."""
        n = self.n if n is None else n
        return ThreeGraph(n, [(perm[u], perm[v], perm[w]) for u, v, w in self.edges], self.ordered)

    def sub(self, edge_indices: Iterable[int]) -> ThreeGraph:
        return ThreeGraph(self.n, [self.edges[i] for i in edge_indices], self.ordered)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Shadow:
    n: int
    pairs: frozenset

    def __contains__(self, p) -> bool:
        return _pair(*p) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> list[Pair]:
        return sorted(self.pairs)

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in self.pairs:
            adj[a].add(b)
            adj[b].add(a)
        return adj


@dataclass(frozen=True)
class OrientedThreeGraph:
    """Ordered triples with at most one permutation of any vertex set."""

    n: int
    arcs: tuple[Triple, ...]

    def __init__(self, n: int, arcs: Iterable[Iterable[int]] = ()):
        seen: dict[frozenset, Triple] = {}
        out = []
        for a in arcs:
            t = tuple(int(x) for x in a)
            if len(t) != 3 or len(set(t)) != 3:
                raise ValueError(f"arc {t} needs three distinct coordinates")
            if min(t) < 0 or max(t) >= n:
                raise ValueError(f"arc {t} has a vertex outside [0, {n})")
            key = frozenset(t)
            if key in seen:
                if seen[key] == t:
                    continue
                raise ValueError(f"arcs {seen[key]} and {t} are permutations of one triple")
            seen[key] = t
            out.append(t)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arcs", tuple(sorted(out)))

    def underlying(self) -> ThreeGraph:
        return ThreeGraph(self.n, self.arcs)


def shadow(H: ThreeGraph) -> Shadow:
    return Shadow(H.n, H._pairs)


def is_linear(H: ThreeGraph) -> bool:
    seen = set()
    for u, v, w in H.edges:
        for p in ((u, v), (v, w), (u, w)):
            if p in seen:
                return False
            seen.add(p)
    return True


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


def tight_cycle(n: int) -> ThreeGraph:
    """C_n^(3): vertices Z_n, edges {k, k+1, k+2}."""
    if n < 3:
        raise ValueError("tight_cycle needs n >= 3")
    edges = {tuple(sorted({k % n, (k + 1) % n, (k + 2) % n})) for k in range(n)}
    return ThreeGraph(n, edges)


def link_of_cycle(n: int) -> ThreeGraph:
    """L_n^(3): apex x = n, cycle vertices 0..n-1, edges {x, k, k+1}."""
    if n < 3:
        raise ValueError("link_of_cycle needs n >= 3")
    return ThreeGraph(n + 1, [(n, k, (k + 1) % n) for k in range(n)])


def link_of_path(n: int) -> ThreeGraph:
    """Link of the path 0-1-...-(n-1); the apex is vertex n."""
    if n < 1:
        raise ValueError("link_of_path needs n >= 1")
    return ThreeGraph(n + 1, [(n, k, k + 1) for k in range(n - 1)])


def complete(s: int) -> ThreeGraph:
    if s < 0:
        raise ValueError("complete needs s >= 0")
    return ThreeGraph(s, combinations(range(s), 3))


def single_edge() -> ThreeGraph:
    return ThreeGraph(3, [(0, 1, 2)])


def two_edge_b() -> ThreeGraph:
    """B: the 3-graph with 4 vertices and 2 edges."""
    return ThreeGraph(4, [(0, 1, 2), (0, 1, 3)])


# Vertex numbering for glued_link_paths: u = 0, u_i = i (1..12), v = 13, and
# v_j is whatever u_i it is glued to, else a fresh label 14..17.
GLUE = {1: 2, 2: 5, 5: 6, 6: 1, 7: 11, 8: 8, 11: 7, 12: 12}


def _glue_map() -> dict[int, int]:
    vmap = {}
    fresh = 14
    for j in range(1, 13):
        if j in GLUE:
            vmap[j] = GLUE[j]
        else:
            vmap[j] = fresh
            fresh += 1
    return vmap


def glued_link_paths_parts() -> tuple[list[Triple], list[Triple]]:
    """Edges of the two link paths, each listed in path order."""
    vmap = _glue_map()
    ue = [(0, i, i + 1) for i in range(1, 12)]
    ve = [tuple(sorted((13, vmap[j], vmap[j + 1]))) for j in range(1, 12)]
    return ue, ve


def glued_link_paths() -> ThreeGraph:
    """Two link paths on 12 path vertices each, glued along eight vertex pairs."""
    ue, ve = glued_link_paths_parts()
    return ThreeGraph(18, ue + ve)


GENERATORS = {
    "tight-cycle": tight_cycle,
    "link-cycle": link_of_cycle,
    "link-path": link_of_path,
    "complete": complete,
    "glued-link-paths": glued_link_paths,
    "edge": single_edge,
    "b": two_edge_b,
}
