"""Instance generators and brute-force oracles shared by the test modules."""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from oddgraph.hypergraph import Hypergraph, connected_components


def planted_odd_colorable(n: int, r: int, m: int, rng: np.random.Generator) -> Hypergraph:
    """Random graph whose edges all satisfy a hidden odd-coloring."""
    phi = rng.integers(1, r + 1, size=n)
    pool = [e for e in combinations(range(1, n + 1), r) if sum(phi[v - 1] for v in e) % r == r // 2]
    k = min(m, len(pool))
    pick = rng.choice(len(pool), size=k, replace=False) if k else []
    return Hypergraph(r, n, tuple(pool[i] for i in pick))


def planted_odd_bipartite(n: int, r: int, m: int, rng: np.random.Generator) -> Hypergraph:
    """Random graph with a hidden V1 meeting every edge oddly."""
    size = int(rng.integers(1, n))
    part = set(rng.choice(np.arange(1, n + 1), size=size, replace=False).tolist())
    pool = [e for e in combinations(range(1, n + 1), r) if len(part.intersection(e)) % 2 == 1]
    k = min(m, len(pool))
    pick = rng.choice(len(pool), size=k, replace=False) if k else []
    return Hypergraph(r, n, tuple(pool[i] for i in pick))


def connected_odd_bipartite(n: int, r: int, rng: np.random.Generator) -> Hypergraph:
    """Keep drawing planted odd-bipartite graphs until one is connected."""
    m = n
    while True:
        G = planted_odd_bipartite(n, r, m, rng)
        if G.m and len(connected_components(G)) == 1:
            return G
        m += 1


def connected_random(n: int, r: int, rng: np.random.Generator) -> Hypergraph:
    pool = list(combinations(range(1, n + 1), r))
    m = max(1, n // 2)
    while True:
        pick = rng.choice(len(pool), size=min(m, len(pool)), replace=False)
        G = Hypergraph(r, n, tuple(pool[i] for i in pick))
        if len(connected_components(G)) == 1:
            return G
        m += 1


def enumerate_odd_colorings(G: Hypergraph) -> int:
    """Number of odd-colorings, by plain enumeration of [r]^n."""
    r = G.r
    return sum(
        all(sum(phi[v - 1] for v in e) % r == r // 2 for e in G.edges)
        for phi in product(range(1, r + 1), repeat=G.n)
    )


def brute_chromatic(G: Hypergraph) -> int:
    """Smallest k admitting a labeling with no monochromatic edge."""
    if not G.edges:
        return 1
    for k in range(1, G.n + 1):
        for labels in product(range(k), repeat=G.n):
            if all(len({labels[v - 1] for v in e}) > 1 for e in G.edges):
                return k
    raise AssertionError("unreachable")
