"""Random pair constructions: chi(u, v, w) = g(f(uv), f(vw), f(wu)) for u < v < w."""

from __future__ import annotations

import base64
from dataclasses import dataclass

import numpy as np

from ..core.embed import TABLE_LIMIT, Color, Host, symmetrize


def num_pairs(N: int) -> int:
    return N * (N - 1) // 2


def pair_index(u: int, v: int, N: int) -> int:
    """Position of pair {u, v} (u < v) in the flat upper-triangular table."""
    return u * N - u * (u + 1) // 2 + (v - u - 1)


def random_f(N: int, t: int, seed: int) -> np.ndarray:
    """Uniform values in [0, t) for every pair of [0, N), from a PCG64 stream."""
    if N < 2 or t < 1:
        raise ValueError("random_f needs N >= 2 and t >= 1")
    rng = np.random.default_rng(seed)
    return rng.integers(0, t, size=num_pairs(N), dtype=np.int64)


def g_from_red(t: int, arcs) -> np.ndarray:
    """A (t, t, t) boolean table that is red exactly on ``arcs``."""
    g = np.zeros((t, t, t), dtype=bool)
    for a, b, c in arcs:
        g[a, b, c] = True
    return g


def red_arcs(g: np.ndarray) -> list[tuple[int, int, int]]:
    return [tuple(int(x) for x in a) for a in np.argwhere(g)]


def encode_g(g: np.ndarray) -> str:
    return base64.b64encode(np.packbits(g.reshape(-1), bitorder="little").tobytes()).decode("ascii")


def decode_g(s: str, t: int) -> np.ndarray:
    raw = np.frombuffer(base64.b64decode(s), dtype=np.uint8)
    bits = np.unpackbits(raw, bitorder="little")[: t ** 3]
    if bits.size != t ** 3:
        raise ValueError("g payload is shorter than t^3 bits")
    return bits.astype(bool).reshape(t, t, t)


@dataclass
class PairConstruction:
    N: int
    t: int
    f: np.ndarray  # flat, length N(N-1)/2, values in [0, t)
    g: np.ndarray  # (t, t, t) bool, True = red
    seed: int | None = None

    def __post_init__(self):
        self.f = np.asarray(self.f, dtype=np.int64).reshape(-1)
        self.g = np.asarray(self.g, dtype=bool).reshape(self.t, self.t, self.t)
        if self.f.size != num_pairs(self.N):
            raise ValueError(f"f must have {num_pairs(self.N)} entries, got {self.f.size}")
        if self.f.size and (self.f.min() < 0 or self.f.max() >= self.t):
            raise ValueError("f values must lie in [0, t)")

    def f_at(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return int(self.f[pair_index(u, v, self.N)])

    def f_matrix(self) -> np.ndarray:
        F = np.zeros((self.N, self.N), dtype=np.int64)
        iu = np.triu_indices(self.N, 1)
        F[iu] = self.f
        return F + F.T

    def to_dict(self) -> dict:
        return {"type": "pair", "N": self.N, "t": self.t, "seed": self.seed,
                "f": [int(x) for x in self.f], "g": encode_g(self.g)}

    @classmethod
    def from_dict(cls, d: dict) -> PairConstruction:
        if d.get("type") != "pair":
            raise ValueError("not a pair-construction container")
        N, t = int(d["N"]), int(d["t"])
        return cls(N, t, np.array(d["f"], dtype=np.int64), decode_g(d["g"], t), d.get("seed"))


def chi_pair(pc: PairConstruction, u: int, v: int, w: int) -> Color:
    if not (0 <= u < v < w < pc.N):
        raise ValueError(f"chi_pair needs 0 <= u < v < w < N, got {(u, v, w)}")
    red = pc.g[pc.f_at(u, v), pc.f_at(v, w), pc.f_at(u, w)]
    return Color.RED if red else Color.BLUE


def materialize(pc: PairConstruction) -> Host:
    """A Host for the construction; tabulated in one numpy pass when small enough."""
    if pc.N > TABLE_LIMIT:
        return Host(pc.N, lambda u, v, w: chi_pair(pc, u, v, w) == Color.RED)
    F = pc.f_matrix()
    red = pc.g[F[:, :, None], F[None, :, :], F[:, None, :]]
    return Host.from_table(symmetrize(red))
