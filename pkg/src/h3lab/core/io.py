"""Text formats: ``.h3`` for 3-graphs and ``.oh3`` for oriented 3-graphs.

.h3   header ``h3 <n> <m> [ordered]`` then m lines ``u v w`` with u < v < w.
.oh3  header ``oh3 <n> <m>`` then m lines of ordered triples.
ASCII, LF line endings. Blank lines and ``#`` comments are ignored on read.
"""

from __future__ import annotations

from pathlib import Path

from .graph import OrientedThreeGraph, ThreeGraph


class FormatError(ValueError):
    pass


def _lines(text: str) -> list[str]:
    out = []
    for raw in text.split("\n"):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def dumps_h3(H: ThreeGraph) -> str:
    head = f"h3 {H.n} {H.e}" + (" ordered" if H.ordered else "")
    return "\n".join([head] + [f"{u} {v} {w}" for u, v, w in H.edges]) + "\n"


def loads_h3(text: str) -> ThreeGraph:
    lines = _lines(text)
    if not lines:
        raise FormatError("empty .h3 input")
    head = lines[0].split()
    if head[0] != "h3" or len(head) not in (3, 4) or (len(head) == 4 and head[3] != "ordered"):
        raise FormatError(f"bad .h3 header: {lines[0]!r}")
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError as exc:
        raise FormatError(f"bad .h3 header: {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != m:
        raise FormatError(f"header promises {m} edges, found {len(body)}")
    edges = []
    for line in body:
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"bad edge line {line!r}")
        u, v, w = (int(x) for x in parts)
        if not (0 <= u < v < w < n):
            raise FormatError(f"edge line {line!r} violates 0 <= u < v < w < n")
        edges.append((u, v, w))
    try:
        return ThreeGraph(n, edges, ordered=len(head) == 4)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def dumps_oh3(G: OrientedThreeGraph) -> str:
    return "\n".join([f"oh3 {G.n} {len(G.arcs)}"] + [f"{a} {b} {c}" for a, b, c in G.arcs]) + "\n"


def loads_oh3(text: str) -> OrientedThreeGraph:
    lines = _lines(text)
    if not lines:
        raise FormatError("empty .oh3 input")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "oh3":
        raise FormatError(f"bad .oh3 header: {lines[0]!r}")
    n, m = int(head[1]), int(head[2])
    if len(lines) - 1 != m:
        raise FormatError(f"header promises {m} arcs, found {len(lines) - 1}")
    arcs = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"bad arc line {line!r}")
        arcs.append(tuple(int(x) for x in parts))
    try:
        return OrientedThreeGraph(n, arcs)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def read_h3(path) -> ThreeGraph:
    return loads_h3(Path(path).read_text(encoding="ascii"))


def write_h3(H: ThreeGraph, path) -> None:
    Path(path).write_bytes(dumps_h3(H).encode("ascii"))


def read_oh3(path) -> OrientedThreeGraph:
    return loads_oh3(Path(path).read_text(encoding="ascii"))


def write_oh3(G: OrientedThreeGraph, path) -> None:
    Path(path).write_bytes(dumps_oh3(G).encode("ascii"))
