"""Odd-colorings, odd-bipartitions, weak colorings and the extremal construction.

An odd-coloring of an r-graph (r even) is a map phi: [n] -> {1..r} whose
sum over every edge is congruent to r/2 mod r. Solvers work with residues
0..r-1 and report residue 0 as the value r.
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .hypergraph import Hypergraph, UnionFind, unrank_combination, vertex_edges
from .zmod import gf2_solve, solve_mod


class OddUniformityError(ValueError):
    """Odd-colorings and odd-bipartitions are only defined for even r."""


class InvalidColoringError(ValueError):
    pass


class SearchSpaceError(ValueError):
    pass


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class OddColoring:
    phi: tuple[int, ...]

    def residues(self, r: int) -> np.ndarray:
        return np.asarray(self.phi, dtype=np.int64) % r


@dataclass(frozen=True)
class OddBipartition:
    part: frozenset[int]


@dataclass(frozen=True)
class WeakColoring:
    classes: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(set(self.classes))


def two_adic(r: int) -> tuple[int, int]:
    """Write r = 2^q (2t + 1) and return (q, t)."""
    if r < 1:
        raise ValueError("r must be positive")
    q = (r & -r).bit_length() - 1
    return q, ((r >> q) - 1) // 2


def _require_even(G: Hypergraph) -> None:
    if G.r % 2:
        raise OddUniformityError(f"r={G.r} is odd; odd-colorings need even r")


def check_odd_coloring(G: Hypergraph, c: OddColoring) -> bool:
    _require_even(G)
    phi = c.phi
    if len(phi) != G.n:
        raise InvalidColoringError(f"coloring has length {len(phi)}, expected {G.n}")
    if any(v < 1 or v > G.r for v in phi):
        raise InvalidColoringError(f"coloring values must lie in 1..{G.r}")
    half = G.r // 2
    return all(sum(phi[v - 1] for v in e) % G.r == half for e in G.edges)


def _residues_to_coloring(res, r: int) -> OddColoring:
    return OddColoring(tuple(int(x) % r or r for x in res))


def find_odd_coloring(G: Hypergraph) -> OddColoring | None:
    """Solve the incidence system ``M x = (r/2) 1 (mod r)`` exactly."""
    _require_even(G)
    if not G.edges:
        return OddColoring((G.r,) * G.n)
    sol = solve_mod(G.incidence(), [G.r // 2] * G.m, G.r)
    if sol is None:
        return None
    return _residues_to_coloring(sol.particular, G.r)


def brute_force_odd_coloring(G: Hypergraph, cap: int = 10**6) -> OddColoring | None:
    """Exhaustive search over all r^n maps, lexicographic in (phi_1, ..., phi_n)."""
    _require_even(G)
    r, n = G.r, G.n
    total = r**n
    if total > cap:
        raise SearchSpaceError(f"search space r^n = {total} exceeds cap {cap}")
    if not G.edges:
        return OddColoring((1,) * n)
    Mt = G.incidence().T
    weights = r ** np.arange(n - 1, -1, -1, dtype=np.int64)
    chunk = 1 << 16
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        phi = (idx[:, None] // weights) % r + 1
        ok = np.all((phi @ Mt) % r == r // 2, axis=1)
        hit = np.flatnonzero(ok)
        if hit.size:
            return OddColoring(tuple(int(v) for v in phi[hit[0]]))
    return None


def check_odd_bipartition(G: Hypergraph, b: OddBipartition) -> bool:
    _require_even(G)
    part = b.part
    if not part or len(part) >= G.n or not part.issubset(range(1, G.n + 1)):
        raise InvalidColoringError("V1 must be a proper nonempty subset of the vertices")
    return all(sum(v in part for v in e) % 2 == 1 for e in G.edges)


def find_odd_bipartition(G: Hypergraph) -> OddBipartition | None:
    """Solve ``M y = 1`` over GF(2); V1 is the support of y.

    For even r neither the empty set nor the full vertex set meets an edge
    oddly, so any solution is proper once G has an edge. An edgeless graph
    gets V1 = {1} (when n >= 2).
    """
    _require_even(G)
    if not G.edges:
        if G.n < 2:
            return None
        return OddBipartition(frozenset({1}))
    sol = gf2_solve(G.incidence(), [1] * G.m)
    if sol is None:
        return None
    return OddBipartition(frozenset(int(i) + 1 for i in np.flatnonzero(sol.solution)))


def check_weak_coloring(G: Hypergraph, c: WeakColoring) -> bool:
    cl = c.classes
    if len(cl) != G.n:
        raise InvalidColoringError(f"coloring has length {len(cl)}, expected {G.n}")
    return all(len({cl[v - 1] for v in e}) > 1 for e in G.edges)


def _normalize_classes(labels: Sequence[int]) -> WeakColoring:
    """Relabel classes 1..k by first appearance."""
    seen: dict[int, int] = {}
    return WeakColoring(tuple(seen.setdefault(x, len(seen) + 1) for x in labels))


def residue_partition(c: OddColoring, q: int, G: Hypergraph | None = None) -> WeakColoring:
    """Split vertices by phi mod 2^q; nonempty classes numbered by residue."""
    if G is not None and not check_odd_coloring(G, c):
        raise InvalidColoringError("not an odd-coloring of the given graph")
    mod = 1 << q
    res = [v % mod for v in c.phi]
    order = {x: i + 1 for i, x in enumerate(sorted(set(res)))}
    return WeakColoring(tuple(order[x] for x in res))


# --- exact chromatic number -------------------------------------------------


@dataclass(frozen=True)
class ChromaticResult:
    lower: int
    upper: int
    witness: WeakColoring
    timed_out: bool = False
    nodes: int = 0

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> int | None:
        return self.upper if self.exact else None


class _Timeout(Exception):
    pass


def twin_classes(G: Hypergraph) -> list[list[int]]:
    """Classes of 0-based vertices that are pairwise interchangeable.

    u ~ v when the transposition (u v) is an automorphism; this is an
    equivalence relation, and each class is acted on by its full symmetric
    group.
    """
    edge_set = {tuple(v - 1 for v in e) for e in G.edges}
    inc = vertex_edges(G)
    deg = [len(x) for x in inc]
    reps: list[int] = []
    uf = UnionFind(G.n)

    def swappable(u: int, v: int) -> bool:
        for ei in inc[u]:
            e = G.edges[ei]
            if v + 1 in e:
                continue
            img = tuple(sorted(v if x - 1 == u else x - 1 for x in e))
            if img not in edge_set:
                return False
        return True

    for v in range(G.n):
        for u in reps:
            if deg[u] == deg[v] and swappable(u, v):
                uf.union(u, v)
                break
        else:
            reps.append(v)
    groups: dict[int, list[int]] = {}
    for v in range(G.n):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(groups.values())


class _KColorSearch:
    """Backtracking k-coloring with no monochromatic edge.

    Variable choice: fewest remaining colors, then most incident edges, then
    lowest index. Propagation: when r-1 vertices of an edge share color c and
    one vertex is still open, c is barred for that vertex. Symmetry: colors
    not yet used anywhere are interchangeable (only one fresh color is
    tried), and within a twin class vertices are colored in index order
    with each color occupying one contiguous run.
    """

    def __init__(self, G: Hypergraph, k: int, twins: list[list[int]], deadline: float | None):
        self.G, self.k, self.r, self.n = G, k, G.r, G.n
        self.edges = [tuple(v - 1 for v in e) for e in G.edges]
        self.inc = vertex_edges(G)
        self.deg = [len(x) for x in self.inc]
        self.color = [-1] * self.n
        self.cnt = [[0] * k for _ in self.edges]
        self.open = [self.r] * len(self.edges)
        self.bar = [[0] * k for _ in range(self.n)]
        self.used = [0] * k
        self.cls = [0] * self.n
        self.prev = [-1] * self.n
        for ci, members in enumerate(twins):
            for a, b in zip(members, members[1:]):
                self.prev[b] = a
            for v in members:
                self.cls[v] = ci
        self.cls_used = [[0] * k for _ in twins]
        self.deadline = deadline
        self.nodes = 0

    def domain(self, v: int) -> list[int]:
        bar = self.bar[v]
        p = self.prev[v]
        fresh_taken = False
        out = []
        for c in range(self.k):
            if bar[c]:
                continue
            if p >= 0 and c != self.color[p] and self.cls_used[self.cls[v]][c]:
                continue
            if not self.used[c]:
                if fresh_taken:
                    continue
                fresh_taken = True
            out.append(c)
        return out

    def assign(self, v: int, c: int, trail: list) -> bool:
        self.color[v] = c
        self.used[c] += 1
        self.cls_used[self.cls[v]][c] += 1
        ok = True
        r1 = self.r - 1
        for ei in self.inc[v]:
            cnt = self.cnt[ei]
            cnt[c] += 1
            self.open[ei] -= 1
            if cnt[c] == r1 and self.open[ei] == 1:
                w = next(x for x in self.edges[ei] if self.color[x] < 0)
                bw = self.bar[w]
                bw[c] += 1
                trail.append((w, c))
                if bw[c] == 1 and all(bw):
                    ok = False
        return ok

    def unassign(self, v: int, c: int, trail: list) -> None:
        for w, cc in trail:
            self.bar[w][cc] -= 1
        for ei in self.inc[v]:
            self.cnt[ei][c] -= 1
            self.open[ei] += 1
        self.cls_used[self.cls[v]][c] -= 1
        self.used[c] -= 1
        self.color[v] = -1

    def pick(self):
        best = None
        for v in range(self.n):
            if self.color[v] >= 0:
                continue
            p = self.prev[v]
            if p >= 0 and self.color[p] < 0:
                continue
            dom = self.domain(v)
            key = (len(dom), -self.deg[v], v)
            if best is None or key < best[0]:
                best = (key, v, dom)
                if not dom:
                    break
        return best

    def run(self) -> list[int] | None:
        limit = sys.getrecursionlimit()
        if limit < 4 * self.n + 100:
            sys.setrecursionlimit(4 * self.n + 100)
        try:
            return self._dfs(0)
        finally:
            sys.setrecursionlimit(limit)

    def _dfs(self, depth: int) -> list[int] | None:
        if depth == self.n:
            return self.color[:]
        self.nodes += 1
        if self.deadline is not None and self.nodes % 256 == 0:
            if time.monotonic() > self.deadline:
                raise _Timeout
        _, v, dom = self.pick()
        for c in dom:
            trail: list = []
            if self.assign(v, c, trail):
                found = self._dfs(depth + 1)
                if found is not None:
                    return found
            self.unassign(v, c, trail)
        return None


def greedy_weak_coloring(G: Hypergraph) -> WeakColoring:
    """Color vertices in index order with the least color that closes no
    monochromatic edge."""
    color = [0] * G.n
    inc = vertex_edges(G)
    for v in range(G.n):
        banned = set()
        for ei in inc[v]:
            others = [color[x - 1] for x in G.edges[ei] if x - 1 != v]
            if all(o and o == others[0] for o in others) and others[0]:
                banned.add(others[0])
        c = 1
        while c in banned:
            c += 1
        color[v] = c
    return WeakColoring(tuple(color))


def k_colorable(G: Hypergraph, k: int, time_budget: float | None = None) -> WeakColoring | None:
    """Exact test; raises TimeoutError when the budget runs out."""
    deadline = None if time_budget is None else time.monotonic() + time_budget
    search = _KColorSearch(G, k, twin_classes(G), deadline)
    try:
        found = search.run()
    except _Timeout:
        raise TimeoutError(f"{k}-colorability undecided within {time_budget}s") from None
    return None if found is None else _normalize_classes(found)


def chromatic_number(G: Hypergraph, time_budget: float | None = None) -> ChromaticResult:
    """Exact weak chromatic number by iterative deepening on k.

    Upper bound from a greedy coloring, improved by the residue partition of
    an odd-coloring when one exists. Each k below the upper bound is then
    decided exactly; on timeout the current bracket is returned.
    """
    if not G.edges:
        return ChromaticResult(1, 1, WeakColoring((1,) * G.n))
    start = time.monotonic()
    deadline = None if time_budget is None else start + time_budget
    best = _normalize_classes(greedy_weak_coloring(G).classes)
    if G.r % 2 == 0:
        oc = find_odd_coloring(G)
        if oc is not None:
            rp = residue_partition(oc, two_adic(G.r)[0])
            if rp.k < best.k:
                best = rp
    lower, upper = 2, best.k
    twins = twin_classes(G)
    nodes = 0
    k = lower
    while k < upper:
        search = _KColorSearch(G, k, twins, deadline)
        try:
            found = search.run()
        except _Timeout:
            return ChromaticResult(lower, upper, best, timed_out=True, nodes=nodes + search.nodes)
        nodes += search.nodes
        if found is not None:
            return ChromaticResult(k, k, _normalize_classes(found), nodes=nodes)
        lower = k = k + 1
    return ChromaticResult(upper, upper, best, nodes=nodes)


# --- extremal construction --------------------------------------------------


@dataclass(frozen=True)
class ConstructionParams:
    """r = 2^q (2t+1) with 2^q blocks V_1..V_{2^q}.

    ``block_sizes`` defaults to 2^q equal blocks of the minimal size
    r(2^q - 1).
    """

    q: int
    t: int
    block_sizes: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.q < 1 or self.t < 0:
            raise ConstructionError(f"need q >= 1 and t >= 0, got q={self.q}, t={self.t}")
        if self.block_sizes is None:
            object.__setattr__(self, "block_sizes", (self.min_block,) * self.blocks)
        sizes = tuple(int(s) for s in self.block_sizes)
        object.__setattr__(self, "block_sizes", sizes)
        if len(sizes) != self.blocks:
            raise ConstructionError(f"need {self.blocks} block sizes, got {len(sizes)}")
        small = [s for s in sizes if s < self.min_block]
        if small:
            raise ConstructionError(
                f"block size {small[0]} below r(2^q - 1) = {self.min_block}"
            )

    @property
    def r(self) -> int:
        return (1 << self.q) * (2 * self.t + 1)

    @property
    def blocks(self) -> int:
        return 1 << self.q

    @property
    def min_block(self) -> int:
        return self.r * (self.blocks - 1)

    @property
    def n(self) -> int:
        return sum(self.block_sizes)

    @property
    def min_n(self) -> int:
        return self.blocks * (self.blocks - 1) * self.r

    def pair_data(self, i: int, j: int) -> tuple[int, int, int]:
        """(p, a, b) for blocks i < j: j - i = 2^p (2a + 1), b = 2^(q-p-1)(2t+1)."""
        if not 1 <= i < j <= self.blocks:
            raise ValueError(f"need 1 <= i < j <= {self.blocks}")
        p, a = two_adic(j - i)
        return p, a, (1 << (self.q - p - 1)) * (2 * self.t + 1)

    def b_table(self) -> dict[tuple[int, int], int]:
        return {
            (i, j): self.pair_data(i, j)[2]
            for i in range(1, self.blocks + 1)
            for j in range(i + 1, self.blocks + 1)
        }


@dataclass(frozen=True)
class Construction:
    graph: Hypergraph
    params: ConstructionParams
    blocks: tuple[tuple[int, ...], ...]
    coloring: OddColoring
    family_sizes: dict[tuple[int, int], int] = field(default_factory=dict)


def build_construction(
    params: ConstructionParams, sample_cap: int | None = None, seed: int = 0
) -> Construction:
    """2^q-chromatic odd-colorable graph on contiguous blocks V_1..V_{2^q}.

    E_{i,j} consists of all r-sets with r - b_{i,j} vertices in V_i and
    b_{i,j} in V_j. With ``sample_cap`` at most that many members of each
    E_{i,j} are kept, sampled with ``numpy.random.default_rng(seed)``.
    """
    r = params.r
    blocks = []
    start = 1
    for size in params.block_sizes:
        blocks.append(tuple(range(start, start + size)))
        start += size
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, ...]] = []
    fam_sizes = {}
    for (i, j), b in params.b_table().items():
        Vi, Vj = blocks[i - 1], blocks[j - 1]
        ci, cj = math.comb(len(Vi), r - b), math.comb(len(Vj), b)
        total = ci * cj
        if sample_cap is None or total <= sample_cap:
            fam = [
                x + y for x in combinations(Vi, r - b) for y in combinations(Vj, b)
            ]
        else:
            ranks = np.sort(rng.choice(total, size=sample_cap, replace=False))
            fam = []
            for rank in ranks:
                hi, lo = divmod(int(rank), cj)
                x = unrank_combination(hi, len(Vi), r - b)
                y = unrank_combination(lo, len(Vj), b)
                fam.append(tuple(Vi[k - 1] for k in x) + tuple(Vj[k - 1] for k in y))
        fam_sizes[(i, j)] = len(fam)
        edges.extend(fam)
    G = Hypergraph(r, params.n, tuple(edges))
    phi = tuple(i for i, blk in enumerate(blocks, start=1) for _ in blk)
    return Construction(G, params, tuple(blocks), OddColoring(phi), fam_sizes)
