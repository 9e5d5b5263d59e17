"""Berge cycles, the tree census and shadow-buildable edge orderings."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, asdict

from .certificate import Certificate
from .graph import ThreeGraph, shadow


def berge_cycle(G: ThreeGraph) -> Certificate | None:
    """Shortest Berge cycle of G, or None when G is Berge-acyclic.

    Works on the vertex/edge incidence graph: a Berge cycle of length t is a
    cycle of length 2t there. BFS from every node finds the girth; the first
    shortest simple cycle in root order is returned.
    """
    if G.e < 2:
        return None
    n = G.n
    inc = G.incidence()
    # incidence nodes: vertex x -> x, edge i -> n + i
    def nbrs(node):
        if node < n:
            return [n + i for i in inc[node]]
        return list(G.edges[node - n])

    best = None
    for root in range(n):
        if not inc[root]:
            continue
        found = _shortest_cycle_through(root, nbrs)
        if found is not None and (best is None or len(found) < len(best)):
            best = found
            if len(best) == 4:
                break
    if best is None:
        return None
    # best alternates vertex, edge, vertex, edge ... starting at a vertex node
    verts = [x for x in best[0::2]]
    edges = [x - n for x in best[1::2]]
    return Certificate(
        "berge-cycle",
        {"vertices": verts, "edges": [list(G.edges[i]) for i in edges], "edge_indices": edges},
    )


def _shortest_cycle_through(root, nbrs):
    """Shortest simple cycle whose BFS apex is ``root`` (node list), or None."""
    dist = {root: 0}
    parent = {root: None}
    branch = {root: None}
    q = deque([root])
    best = None
    while q:
        x = q.popleft()
        if best is not None and 2 * dist[x] >= best[0]:
            break
        for y in nbrs(x):
            if y == parent[x]:
                continue
            if y not in dist:
                dist[y] = dist[x] + 1
                parent[y] = x
                branch[y] = y if x == root else branch[x]
                q.append(y)
            elif branch[y] != branch[x] or x == root or y == root:
                length = dist[x] + dist[y] + 1
                if best is None or length < best[0]:
                    best = (length, x, y)
    if best is None:
        return None
    _, x, y = best
    px, py = [], []
    while x is not None:
        px.append(x)
        x = parent[x]
    while y is not None:
        py.append(y)
        y = parent[y]
    # px ends at root; py ends at root
    cycle = list(reversed(px)) + py[:-1]
    return cycle


def verify_berge_cycle(G: ThreeGraph, cert: Certificate) -> bool:
    w = cert.witness
    verts = list(w["vertices"])
    edges = [tuple(sorted(e)) for e in w["edges"]]
    t = len(verts)
    if t < 2 or len(edges) != t:
        return False
    if len(set(verts)) != t or len(set(edges)) != t:
        return False
    eset = set(G.edges)
    for i in range(t):
        e = edges[i]
        if e not in eset:
            return False
        if verts[i] not in e or verts[(i + 1) % t] not in e:
            return False
    return True


def components(G: ThreeGraph) -> list[list[int]]:
    """Connected components of the support, via union-find over edges."""
    parent = list(range(G.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, w in G.edges:
        ru = find(u)
        for y in (v, w):
            ry = find(y)
            if ry != ru:
                parent[ry] = ru
    groups: dict[int, list[int]] = {}
    for x in G.support():
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values())


def has_long_cycle(adj: list[set[int]], min_len: int = 4) -> bool:
    """Does the graph have a simple cycle of length >= min_len? (DFS over paths)"""
    n = len(adj)

    def dfs(start, x, depth, on_path):
        for y in adj[x]:
            if y == start and depth + 1 >= min_len:
                return True
            if y > start and y not in on_path:
                on_path.add(y)
                if dfs(start, y, depth + 1, on_path):
                    return True
                on_path.discard(y)
        return False

    # every cycle is found from its smallest vertex
    for s in range(n):
        if dfs(s, s, 0, {s}):
            return True
    return False


@dataclass(frozen=True)
class TreeCensus:
    connected: bool
    v: int
    e: int
    acyclic: bool
    shadow_long_cycle: bool

    def to_dict(self):
        return asdict(self)


def tree_census(G: ThreeGraph) -> TreeCensus:
    comps = components(G)
    return TreeCensus(
        connected=G.e > 0 and len(comps) == 1,
        v=len(G.support()),
        e=G.e,
        acyclic=berge_cycle(G) is None,
        shadow_long_cycle=has_long_cycle(shadow(G).adjacency()),
    )


def shadow_buildable(H: ThreeGraph) -> Certificate | None:
    """Edge ordering where each edge adds a new shadow pair, or None.

    Greedy reverse elimination: peel any edge that owns a pair no other
    remaining edge contains. The peel order reversed is the build order.
    """
    remaining = set(range(H.e))
    count: dict[tuple[int, int], int] = {}
    for u, v, w in H.edges:
        for p in ((u, v), (v, w), (u, w)):
            count[p] = count.get(p, 0) + 1
    peeled = []
    while remaining:
        pick = None
        for i in sorted(remaining, reverse=True):
            u, v, w = H.edges[i]
            if any(count[p] == 1 for p in ((u, v), (v, w), (u, w))):
                pick = i
                break
        if pick is None:
            return None
        remaining.discard(pick)
        peeled.append(pick)
        u, v, w = H.edges[pick]
        for p in ((u, v), (v, w), (u, w)):
            count[p] -= 1
    order = peeled[::-1]
    return Certificate("shadow-buildable", {"order": [list(H.edges[i]) for i in order]})


def verify_build_order(H: ThreeGraph, cert: Certificate) -> bool:
    order = [tuple(sorted(e)) for e in cert.witness["order"]]
    if sorted(order) != sorted(H.edges) or len(set(order)) != len(order):
        return False
    seen = set()
    for u, v, w in order:
        ps = {(u, v), (v, w), (u, w)}
        if ps <= seen:
            return False
        seen |= ps
    return True
