"""r-uniform hypergraphs: data model, HGR text format, components, generators.

Vertices are 1-based everywhere in the public API. Edges are stored as
strictly increasing tuples, and the edge list is kept in lexicographic order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class HypergraphError(ValueError):
    """Invalid hypergraph construction."""


class HGRParseError(HypergraphError):
    """Malformed HGR input. ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message}, line {line}")
        self.line = line


@dataclass(frozen=True)
class Hypergraph:
    r: int
    n: int
    edges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.r < 2:
            raise HypergraphError(f"uniformity must be >= 2, got {self.r}")
        if self.n < 1:
            raise HypergraphError(f"vertex count must be >= 1, got {self.n}")
        canon = []
        for e in self.edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != self.r:
                raise HypergraphError(f"edge {tuple(e)} has arity {len(t)}, expected {self.r}")
            if len(set(t)) != self.r:
                raise HypergraphError(f"repeated vertex in edge {tuple(e)}")
            if t[0] < 1 or t[-1] > self.n:
                raise HypergraphError(f"edge {tuple(e)} has a vertex outside 1..{self.n}")
            canon.append(t)
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise HypergraphError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    def incidence(self) -> np.ndarray:
        """0/1 edge-vertex incidence matrix, shape (m, n)."""
        M = np.zeros((self.m, self.n), dtype=np.int64)
        for i, e in enumerate(self.edges):
            M[i, [v - 1 for v in e]] = 1
        return M

    def edge_array(self) -> np.ndarray:
        """Edges as a 0-based (m, r) integer array (internal use)."""
        if not self.edges:
            return np.zeros((0, self.r), dtype=np.int64)
        return np.asarray(self.edges, dtype=np.int64) - 1


def parse_hypergraph(text: str) -> Hypergraph:
    """Parse HGR text: header ``r n m`` then ``m`` lines of 1-based vertices."""
    header = None
    edges: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise HGRParseError("non-integer token", lineno) from None
        if header is None:
            if len(nums) != 3:
                raise HGRParseError("malformed header, expected 'r n m'", lineno)
            r, n, m = nums
            if r < 2 or n < 1 or m < 0:
                raise HGRParseError("malformed header, need r >= 2, n >= 1, m >= 0", lineno)
            header = (r, n, m)
            continue
        r, n, m = header
        if len(edges) >= m:
            raise HGRParseError(f"more edge lines than declared m={m}", lineno)
        if len(nums) != r:
            raise HGRParseError(f"edge of wrong arity {len(nums)} (expected {r})", lineno)
        if any(v < 1 or v > n for v in nums):
            raise HGRParseError(f"vertex index out of range 1..{n}", lineno)
        if len(set(nums)) != r:
            raise HGRParseError("repeated vertex in edge", lineno)
        e = tuple(sorted(nums))
        if e in seen:
            raise HGRParseError(f"duplicate edge (first seen on line {seen[e]})", lineno)
        seen[e] = lineno
        edges.append(e)
    if header is None:
        raise HGRParseError("missing header", 1)
    if len(edges) != header[2]:
        raise HGRParseError(
            f"declared {header[2]} edges but found {len(edges)}", len(text.splitlines()) or 1
        )
    return Hypergraph(header[0], header[1], tuple(edges))


def serialize_hypergraph(G: Hypergraph) -> str:
    lines = [f"{G.r} {G.n} {G.m}"]
    lines.extend(" ".join(map(str, e)) for e in G.edges)
    return "\n".join(lines) + "\n"


def degrees(G: Hypergraph) -> np.ndarray:
    deg = np.zeros(G.n, dtype=np.int64)
    for e in G.edges:
        for v in e:
            deg[v - 1] += 1
    return deg


class UnionFind:
    """Disjoint-set forest over 0..n-1 with path halving and union by size."""

    def __init__(self, n: int):
        self._parent = list(range(n))
        self._size = [1] * n

    def find(self, a: int) -> int:
        parent = self._parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self._size[ra] < self._size[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        self._size[ra] += self._size[rb]
        return True


@dataclass(frozen=True)
class ComponentPartition:
    """Connected components. ``blocks[i]`` holds original labels (sorted);
    ``subgraphs[i]`` is the induced hypergraph relabeled to 1..len(block)
    in increasing label order."""

    blocks: tuple[tuple[int, ...], ...]
    subgraphs: tuple[Hypergraph, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.blocks)


def connected_components(G: Hypergraph) -> ComponentPartition:
    uf = UnionFind(G.n)
    for e in G.edges:
        for v in e[1:]:
            uf.union(e[0] - 1, v - 1)
    groups: dict[int, list[int]] = {}
    for v in range(G.n):
        groups.setdefault(uf.find(v), []).append(v + 1)
    blocks = sorted((tuple(b) for b in groups.values()), key=lambda b: b[0])
    owner = {}
    for bi, b in enumerate(blocks):
        for pos, v in enumerate(b, start=1):
            owner[v] = (bi, pos)
    sub_edges: list[list[tuple[int, ...]]] = [[] for _ in blocks]
    for e in G.edges:
        bi = owner[e[0]][0]
        sub_edges[bi].append(tuple(owner[v][1] for v in e))
    subgraphs = tuple(
        Hypergraph(G.r, len(b), tuple(es)) for b, es in zip(blocks, sub_edges)
    )
    return ComponentPartition(tuple(blocks), subgraphs)


def disjoint_union(G1: Hypergraph, G2: Hypergraph) -> Hypergraph:
    if G1.r != G2.r:
        raise HypergraphError(f"uniformity mismatch: {G1.r} vs {G2.r}")
    shifted = tuple(tuple(v + G1.n for v in e) for e in G2.edges)
    return Hypergraph(G1.r, G1.n + G2.n, G1.edges + shifted)


def complete_rgraph(n: int, r: int) -> Hypergraph:
    """K_n^{(r)}: all r-subsets of [n]."""
    from itertools import combinations

    return Hypergraph(r, n, tuple(combinations(range(1, n + 1), r)))


def unrank_combination(rank: int, n: int, r: int) -> tuple[int, ...]:
    """The ``rank``-th r-subset of [n] in lexicographic order (0-based rank)."""
    out = []
    x = 1
    for k in range(r, 0, -1):
        while True:
            c = math.comb(n - x, k - 1)
            if rank < c:
                break
            rank -= c
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def random_rgraph(n: int, r: int, m: int, seed: int) -> Hypergraph:
    """Sample ``m`` distinct edges uniformly without replacement.

    Uses numpy's ``default_rng`` (PCG64) seeded with ``seed``: edge ranks are
    drawn with ``Generator.choice(C(n, r), m, replace=False)`` and decoded by
    lexicographic unranking, so results are reproducible across platforms.
    """
    if r > n:
        raise HypergraphError(f"r={r} exceeds n={n}")
    total = math.comb(n, r)
    if m > total:
        raise HypergraphError(f"m={m} exceeds the {total} possible edges")
    rng = np.random.default_rng(seed)
    ranks = rng.choice(total, size=m, replace=False) if m else []
    return Hypergraph(r, n, tuple(unrank_combination(int(k), n, r) for k in ranks))


def induced_edges(G: Hypergraph, vertices: Iterable[int]) -> list[tuple[int, ...]]:
    """Edges of G lying entirely inside ``vertices``."""
    vs = set(vertices)
    return [e for e in G.edges if vs.issuperset(e)]


def vertex_edges(G: Hypergraph) -> list[list[int]]:
    """For each 0-based vertex, the indices of edges containing it."""
    inc: list[list[int]] = [[] for _ in range(G.n)]
    for i, e in enumerate(G.edges):
        for v in e:
            inc[v - 1].append(i)
    return inc


def relabel(G: Hypergraph, perm: Sequence[int]) -> Hypergraph:
    """Apply the vertex map ``v -> perm[v-1]`` (a permutation of 1..n)."""
    if sorted(perm) != list(range(1, G.n + 1)):
        raise HypergraphError("relabel map is not a permutation of 1..n")
    return Hypergraph(G.r, G.n, tuple(tuple(perm[v - 1] for v in e) for e in G.edges))
