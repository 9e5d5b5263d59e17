"""Canonical labeling, automorphisms and isomorphism-class enumeration.

Canonical labeling is the usual individualization-refinement search: refine
an ordered vertex partition by edge signatures, individualize a vertex of the
first non-singleton cell, recurse, and keep the lexicographically least edge
list over all leaves. Automorphisms discovered at leaves prune sibling
branches lying in one orbit.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator

from ..errors import SizeLimitError
from .graph import ThreeGraph

CANON_MAX_N = 16
ENUM_MAX_N = 7


def _refine(cells: list[list[int]], inc_edges: dict[int, list[tuple[int, int]]]) -> list[list[int]]:
    while True:
        cell_of = {}
        for ci, c in enumerate(cells):
            for v in c:
                cell_of[v] = ci
        out = []
        changed = False
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            sig = {}
            for v in c:
                s = tuple(sorted(tuple(sorted((cell_of[a], cell_of[b]))) for a, b in inc_edges[v]))
                sig.setdefault(s, []).append(v)
            if len(sig) == 1:
                out.append(c)
                continue
            changed = True
            for s in sorted(sig):
                out.append(sorted(sig[s]))
        cells = out
        if not changed:
            return cells


def _orbits_rep(cands, gens):
    """Union-find orbits of ``cands`` under permutations ``gens``."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x, y in g.items():
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    return find


def canonical_labeling(H: ThreeGraph) -> tuple[dict[int, int], tuple]:
    """(old -> new vertex map, canonical code) for an unordered 3-graph."""
    if H.n > CANON_MAX_N:
        raise SizeLimitError(f"canonical_form supports n <= {CANON_MAX_N}, got {H.n}")
    support = H.support()
    isolated = [x for x in range(H.n) if x not in set(support)]
    inc_edges: dict[int, list[tuple[int, int]]] = {v: [] for v in support}
    for u, v, w in H.edges:
        inc_edges[u].append((v, w))
        inc_edges[v].append((u, w))
        inc_edges[w].append((u, v))

    best: list = [None, None]  # code, labeling
    first: list = [None, None]
    gens: list[dict[int, int]] = []

    def leaf(cells):
        lab = {c[0]: i for i, c in enumerate(cells)}
        code = tuple(sorted(tuple(sorted((lab[u], lab[v], lab[w]))) for u, v, w in H.edges))
        if first[0] is None:
            first[0], first[1] = code, lab
        for ref_code, ref_lab in ((first[0], first[1]), (best[0], best[1])):
            if ref_code is not None and code == ref_code and ref_lab is not lab:
                inv = {i: v for v, i in ref_lab.items()}
                g = {v: inv[lab[v]] for v in lab}
                if any(k != x for k, x in g.items()):
                    gens.append(g)
                break
        if best[0] is None or code < best[0]:
            best[0], best[1] = code, lab

    def search(cells, prefix):
        cells = _refine(cells, inc_edges)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            leaf(cells)
            return
        cell = cells[target]
        done = []
        for v in cell:
            stab = [g for g in gens if all(g.get(p, p) == p for p in prefix)]
            if stab and done:
                find = _orbits_rep(cell, stab)
                if any(find(v) == find(d) for d in done):
                    continue
            done.append(v)
            new = cells[:target] + [[v], [x for x in cell if x != v]] + cells[target + 1:]
            search(new, prefix + [v])

    if support:
        search([list(support)], [])
        lab = dict(best[1])
    else:
        lab = {}
    nxt = len(support)
    for x in isolated:
        lab[x] = nxt
        nxt += 1
    code = (H.n, best[0] if support else ())
    return lab, code


def canonical_form(H: ThreeGraph) -> bytes:
    """Bytes that are equal exactly for isomorphic 3-graphs (ignores ``ordered``)."""
    _, (n, edges) = canonical_labeling(H)
    body = ";".join(f"{a},{b},{c}" for a, b, c in edges)
    return f"h3:{n}:{body}".encode("ascii")


def canonical_graph(H: ThreeGraph) -> ThreeGraph:
    lab, _ = canonical_labeling(H)
    return H.relabel(lab)


def is_isomorphic(G: ThreeGraph, H: ThreeGraph) -> bool:
    return canonical_form(G) == canonical_form(H)


def automorphisms(H: ThreeGraph) -> list[tuple[int, ...]]:
    """All automorphisms of H as tuples p with p[v] the image of v."""
    n = H.n
    eset = set(H.edges)
    inc = H.incidence()
    deg = [len(inc[v]) for v in range(n)]
    out = []
    img = [-1] * n
    used = [False] * n

    def consistent(v):
        for i in inc[v]:
            e = H.edges[i]
            if all(img[x] >= 0 for x in e):
                if tuple(sorted(img[x] for x in e)) not in eset:
                    return False
        return True

    def rec(v):
        if v == n:
            out.append(tuple(img))
            return
        for y in range(n):
            if used[y] or deg[y] != deg[v]:
                continue
            img[v] = y
            if consistent(v):
                used[y] = True
                rec(v + 1)
                used[y] = False
            img[v] = -1

    rec(0)
    return out


def enumerate_all(n_max: int, e_max: int, include_isolated: bool = False) -> Iterator[ThreeGraph]:
    """Non-isomorphic 3-graphs with at most n_max vertices and e_max edges.

    With ``include_isolated`` False (default) only graphs without isolated
    vertices are produced, plus the empty graph on zero vertices.
    """
    if n_max > ENUM_MAX_N:
        raise SizeLimitError(f"enumerate_all supports n_max <= {ENUM_MAX_N}")
    results = []
    for n in range(0, n_max + 1):
        triples = list(combinations(range(n), 3))
        level = {canonical_form(ThreeGraph(n)): ThreeGraph(n)}
        classes = dict(level)
        for _ in range(e_max):
            nxt = {}
            for G in level.values():
                present = set(G.edges)
                for t in triples:
                    if t in present:
                        continue
                    K = ThreeGraph(n, G.edges + (t,))
                    key = canonical_form(K)
                    if key not in nxt and key not in classes:
                        nxt[key] = canonical_graph(K)
            classes.update(nxt)
            level = nxt
        for key, G in classes.items():
            if include_isolated or len(G.support()) == n:
                results.append((n, G.e, key, G))
    results.sort(key=lambda r: (r[0], r[1], r[2]))
    for *_, G in results:
        yield G
