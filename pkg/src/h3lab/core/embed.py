"""Triple colorings of [0, N) and monochromatic-copy search."""

from __future__ import annotations

from enum import IntEnum
from itertools import permutations
from typing import Callable

import numpy as np

from ..errors import BudgetExceeded
from .certificate import Certificate
from .graph import ThreeGraph

# materialize hosts up to this size; above it colors are evaluated on demand
TABLE_LIMIT = 160


class Color(IntEnum):
    BLUE = 0
    RED = 1

    @classmethod
    def parse(cls, s) -> Color:
        if isinstance(s, Color):
            return s
        return cls[str(s).upper()]

    def __str__(self):
        return self.name.lower()


class Host:
    """A total red/blue coloring of the ascending triples of [0, N).

    ``rule(u, v, w)`` must accept u < v < w and return True for red.
    The boolean table, when built, is symmetric under permuting coordinates.
    """

    def __init__(self, N: int, rule: Callable[[int, int, int], bool], table: np.ndarray | None = None):
        self.N = N
        self._rule = rule
        self._table = table

    @classmethod
    def from_table(cls, red: np.ndarray) -> Host:
        N = red.shape[0]
        red = symmetrize(red)
        return cls(N, lambda u, v, w: bool(red[u, v, w]), red)

    @classmethod
    def constant(cls, N: int, color: Color) -> Host:
        red = color == Color.RED
        return cls.from_table(np.full((N, N, N), red, dtype=bool))

    @classmethod
    def from_red_triples(cls, N: int, triples) -> Host:
        red = np.zeros((N, N, N), dtype=bool)
        for t in triples:
            u, v, w = sorted(t)
            red[u, v, w] = True
        return cls.from_table(red)

    def is_red(self, u: int, v: int, w: int) -> bool:
        if self._table is not None:
            return bool(self._table[u, v, w])
        a, b, c = sorted((u, v, w))
        return bool(self._rule(a, b, c))

    def color(self, u: int, v: int, w: int) -> Color:
        return Color.RED if self.is_red(u, v, w) else Color.BLUE

    def table(self) -> np.ndarray:
        """Symmetric N x N x N boolean red table (built on first use)."""
        if self._table is None:
            if self.N > TABLE_LIMIT:
                raise MemoryError(f"host with N={self.N} is too large to materialize")
            red = np.zeros((self.N,) * 3, dtype=bool)
            for u in range(self.N):
                for v in range(u + 1, self.N):
                    for w in range(v + 1, self.N):
                        red[u, v, w] = self._rule(u, v, w)
            self._table = symmetrize(red)
        return self._table

    def red_triples(self) -> list[tuple[int, int, int]]:
        t = self.table()
        us, vs, ws = np.nonzero(t)
        return [(int(a), int(b), int(c)) for a, b, c in zip(us, vs, ws) if a < b < c]


def symmetrize(red: np.ndarray) -> np.ndarray:
    """Copy the u<v<w entries of ``red`` to all six coordinate orders."""
    N = red.shape[0]
    idx = np.arange(N)
    asc = (idx[:, None, None] < idx[None, :, None]) & (idx[None, :, None] < idx[None, None, :])
    base = red & asc
    out = np.zeros_like(base)
    for perm in permutations(range(3)):
        out |= np.transpose(base, perm)
    return out


def _vertex_order(H: ThreeGraph) -> list[int]:
    """Support vertices ordered so that each new vertex closes edges early."""
    sup = H.support()
    if not sup:
        return []
    inc = H.incidence()
    deg = {x: len(inc[x]) for x in sup}
    order = [max(sup, key=lambda x: (deg[x], -x))]
    placed = set(order)
    while len(order) < len(sup):
        def score(x):
            closes = sum(1 for i in inc[x] if all(y in placed or y == x for y in H.edges[i]))
            touches = sum(1 for i in inc[x] if any(y in placed for y in H.edges[i]))
            return (closes, touches, deg[x], -x)
        nxt = max((x for x in sup if x not in placed), key=score)
        order.append(nxt)
        placed.add(nxt)
    return order


def find_copy(host: Host, H: ThreeGraph, color, budget: int | None = 10_000_000) -> Certificate | None:
    """Injective map V(H) -> [0, N) making every edge of H the given color.

    Backtracking over H's support vertices, trying host vertices in increasing
    order, so the returned map is the first one in that fixed search order.
    Raises BudgetExceeded when more than ``budget`` nodes are expanded.
    """
    color = Color.parse(color)
    want_red = color == Color.RED
    order = _vertex_order(H)
    if H.n > host.N:
        return None
    if not order:
        return Certificate("embedding", {"map": {str(x): x for x in range(H.n)},
                                         "color": str(color), "nodes": 0})
    pos = {x: i for i, x in enumerate(order)}
    # edges to check when vertex order[i] gets placed: those whose last-placed vertex is it
    checks: list[list[tuple[int, int]]] = [[] for _ in order]
    for u, v, w in H.edges:
        last = max(pos[u], pos[v], pos[w])
        others = [pos[x] for x in (u, v, w) if pos[x] != last]
        checks[last].append((others[0], others[1]))

    N = host.N
    table = host.table() if N <= TABLE_LIMIT else None
    image = [-1] * len(order)
    used = [False] * N
    nodes = 0

    def ok(i, y):
        for a, b in checks[i]:
            ya, yb = image[a], image[b]
            if table is not None:
                r = table[ya, yb, y]
            else:
                r = host.is_red(ya, yb, y)
            if bool(r) != want_red:
                return False
        return True

    def rec(i):
        nonlocal nodes
        if i == len(order):
            return True
        for y in range(N):
            if used[y]:
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded(f"find_copy exceeded {budget} nodes", nodes)
            if ok(i, y):
                image[i] = y
                used[y] = True
                if rec(i + 1):
                    return True
                used[y] = False
                image[i] = -1
        return False

    if rec(0):
        mapping = {int(order[i]): int(image[i]) for i in range(len(order))}
        spare = (y for y in range(N) if not used[y])
        for x in range(H.n):
            if x not in mapping:
                mapping[x] = next(spare)
        return Certificate("embedding", {"map": {str(k): v for k, v in sorted(mapping.items())},
                                         "color": str(color), "nodes": nodes})
    return None


def verify_embedding(host: Host, H: ThreeGraph, cert: Certificate) -> bool:
    w = cert.witness
    color = Color.parse(w["color"])
    mapping = {int(k): int(v) for k, v in w["map"].items()}
    if len(set(mapping.values())) != len(mapping):
        return False
    if any(not (0 <= y < host.N) for y in mapping.values()):
        return False
    for e in H.edges:
        if any(x not in mapping for x in e):
            return False
        if host.color(*(mapping[x] for x in e)) != color:
            return False
    return True


def count_copies_brute(host: Host, H: ThreeGraph, color) -> int:
    """Number of injective maps of H's support making every edge ``color``."""
    color = Color.parse(color)
    sup = H.support()
    total = 0
    for img in permutations(range(host.N), len(sup)):
        m = dict(zip(sup, img))
        if all(host.color(m[u], m[v], m[w]) == color for u, v, w in H.edges):
            total += 1
    return total
