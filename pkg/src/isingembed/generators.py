"""Seeded random instances for property tests and experiments."""

from __future__ import annotations

import heapq
import itertools

import numpy as np

from .embedding import Embedding
from .ising import Graph, IsingModel, edge_key
from .subproblem import SubproblemInstance


def _ids(n: int, prefix: str = "v") -> list[str]:
    width = len(str(max(n - 1, 0)))
    return [f"{prefix}{i:0{width}d}" for i in range(n)]


def random_tree(n: int, rng: np.random.Generator, prefix: str = "v") -> Graph:
    """Uniform random labelled tree (decoded from a random Pruefer sequence)."""
    ids = _ids(n, prefix)
    if n <= 2:
        return Graph(ids, [(ids[0], ids[1])] if n == 2 else [])
    seq = rng.integers(0, n, n - 2)
    degree = np.ones(n, dtype=np.int64)
    np.add.at(degree, seq, 1)
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((ids[leaf], ids[x]))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, int(x))
    u, w = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((ids[u], ids[w]))
    return Graph(ids, edges)


def random_connected_graph(n: int, rng: np.random.Generator, p: float = 0.3, prefix: str = "v") -> Graph:
    """Random spanning tree plus each remaining pair independently with probability ``p``."""
    tree = random_tree(n, rng, prefix)
    edges = set(tree.edges)
    for u, w in itertools.combinations(tree.vertices, 2):
        if edge_key(u, w) not in edges and rng.random() < p:
            edges.add(edge_key(u, w))
    return Graph(tree.vertices, edges)


def random_instance(
    G: Graph,
    rng: np.random.Generator,
    sigma_high: float = 5.0,
    lam_fraction: float = 0.9,
    gamma: float = 1.0,
) -> SubproblemInstance:
    sigma = rng.uniform(0.0, sigma_high, len(G))
    if sigma.sum() == 0:
        sigma[0] = 1.0
    lam = rng.uniform(0.0, lam_fraction * sigma.sum())
    return SubproblemInstance(G, sigma, lam, gamma)


def random_model(G: Graph, rng: np.random.Generator, strength_range=(0.25, 2.0), slack: float = 0.95) -> IsingModel:
    """Nonzero strengths of random sign; weights strictly inside the preprocessing bound."""
    lo, hi = strength_range
    strengths = {e: float(rng.choice([-1, 1]) * rng.uniform(lo, hi)) for e in G.sorted_edges()}
    weights = {}
    for v in G.vertices:
        bound = sum(abs(s) for e, s in strengths.items() if v in e)
        weights[v] = float(rng.uniform(-slack, slack) * bound)
    return IsingModel(G, weights, strengths)


def random_embedding(
    G: Graph,
    rng: np.random.Generator,
    max_hardware: int = 12,
    max_chain: int = 3,
    extra_edge_p: float = 0.3,
) -> tuple[Graph, Embedding]:
    """Hardware graph built around random chains.

    Each original vertex gets a random tree chain; covered original edges get
    one or two inter edges; with probability ``extra_edge_p`` a chain gains a
    surplus intra edge, a non-adjacent pair of chains gains an unused edge,
    and an idle qubit is attached.
    """
    n = len(G)
    budget = max_hardware - n
    sizes = [1] * n
    for i in rng.permutation(n):
        grow = int(rng.integers(0, max_chain))
        grow = min(grow, budget)
        sizes[i] += grow
        budget -= grow
    chains: dict[str, list[str]] = {}
    hw_edges: set = set()
    counter = itertools.count()
    for v, size in zip(G.vertices, sizes):
        qs = [f"q{next(counter):02d}" for _ in range(size)]
        chains[v] = qs
        for k in range(1, size):
            hw_edges.add(edge_key(qs[k], qs[int(rng.integers(0, k))]))
        if size >= 3 and rng.random() < extra_edge_p:
            a, b = rng.choice(size, 2, replace=False)
            hw_edges.add(edge_key(qs[a], qs[b]))
    for u, w in G.sorted_edges():
        for _ in range(int(rng.integers(1, 3))):
            hw_edges.add(edge_key(rng.choice(chains[u]), rng.choice(chains[w])))
    non_adjacent = [
        (u, w) for u, w in itertools.combinations(G.vertices, 2) if edge_key(u, w) not in G.edges
    ]
    if non_adjacent and rng.random() < extra_edge_p:
        u, w = non_adjacent[int(rng.integers(0, len(non_adjacent)))]
        hw_edges.add(edge_key(rng.choice(chains[u]), rng.choice(chains[w])))
    hw_vertices = [q for qs in chains.values() for q in qs]
    if len(hw_vertices) < max_hardware and rng.random() < extra_edge_p:
        idle = f"q{next(counter):02d}"
        hw_edges.add(edge_key(idle, hw_vertices[int(rng.integers(0, len(hw_vertices)))]))
        hw_vertices.append(idle)
    return Graph(hw_vertices, hw_edges), Embedding(chains)


def k3_into_c4() -> tuple[IsingModel, Graph, Embedding]:
    """Triangle u, v, w embedded in the 4-cycle p1-p2-p3-p4 with w on {p3, p4}; S = -1, W = 0."""
    G = Graph("uvw", [("u", "v"), ("v", "w"), ("u", "w")])
    model = IsingModel(G, {v: 0.0 for v in "uvw"}, {e: -1.0 for e in G.edges})
    H = Graph(["p1", "p2", "p3", "p4"], [("p1", "p2"), ("p2", "p3"), ("p3", "p4"), ("p4", "p1")])
    phi = Embedding({"u": ["p1"], "v": ["p2"], "w": ["p3", "p4"]})
    return model, H, phi
