"""Graphs, Ising models and exhaustive minimisation."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError, SizeError

BRUTE_FORCE_LIMIT = 24
ATTAIN_TOL = 1e-9

Edge = tuple[str, str]


def edge_key(u, v) -> Edge:
    """Canonical (sorted) key of the undirected edge ``uv``."""
    u, v = str(u), str(v)
    if u == v:
        raise DomainError(f"self-loop on vertex {u!r}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph over string vertex ids.

    Vertices are kept sorted by id so that dense indices are reproducible.
    """

    vertices: tuple[str, ...]
    edges: frozenset[Edge]

    def __init__(self, vertices: Iterable, edges: Iterable = ()):
        names = [str(v) for v in vertices]
        verts = tuple(sorted(set(names)))
        if len(verts) != len(names):
            raise DomainError("duplicate vertex ids")
        es = set()
        for e in edges:
            u, v = e
            key = edge_key(u, v)
            if key in es:
                raise DomainError(f"duplicate edge {key}")
            es.add(key)
        vset = set(verts)
        for u, v in es:
            if u not in vset or v not in vset:
                raise DomainError(f"edge {(u, v)} has an undeclared endpoint")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", frozenset(es))

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for nbrs in adj.values():
            nbrs.sort()
        return adj

    def subgraph(self, vertices: Iterable) -> "Graph":
        vs = {str(v) for v in vertices}
        return Graph(vs, [e for e in self.edges if e[0] in vs and e[1] in vs])

    def is_connected(self) -> bool:
        return is_connected(self.vertices, self.edges)


def is_connected(vertices: Iterable[str], edges: Iterable[Edge]) -> bool:
    """BFS connectivity of the graph ``(vertices, edges)``; the empty graph is not connected."""
    verts = set(vertices)
    if not verts:
        return False
    adj: dict[str, list[str]] = {v: [] for v in verts}
    for u, v in edges:
        if u in verts and v in verts:
            adj[u].append(v)
            adj[v].append(u)
    start = min(verts)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


@dataclass(frozen=True)
class IsingModel:
    """Weights per vertex and strengths per edge of a graph.

    ``evaluate`` computes ``sum_v W_v s_v + sum_vw S_vw s_v s_w``.
    """

    graph: Graph
    weights: Mapping[str, float]
    strengths: Mapping[Edge, float] = field(default_factory=dict)

    def __post_init__(self):
        w = {str(k): float(v) for k, v in self.weights.items()}
        s = {edge_key(*k): float(v) for k, v in self.strengths.items()}
        if set(w) != set(self.graph.vertices):
            raise DomainError("weights must be given for exactly the graph's vertices")
        if set(s) != set(self.graph.edges):
            raise DomainError("strengths must be given for exactly the graph's edges")
        if not all(math.isfinite(x) for x in itertools.chain(w.values(), s.values())):
            raise DomainError("weights and strengths must be finite")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "strengths", s)

    @classmethod
    def from_dicts(cls, weights: Mapping, strengths: Mapping) -> "IsingModel":
        return cls(Graph(weights.keys(), strengths.keys()), weights, strengths)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.graph.vertices

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Dense ``(W, edge index pairs, S)`` in the graph's vertex order."""
        idx = self.graph.index
        W = np.array([self.weights[v] for v in self.graph.vertices], dtype=float)
        edges = self.graph.sorted_edges()
        pairs = np.array([(idx[u], idx[v]) for u, v in edges], dtype=np.int64).reshape(-1, 2)
        S = np.array([self.strengths[e] for e in edges], dtype=float)
        return W, pairs, S

    def incident_strength(self, v: str) -> float:
        """``sum_{n in N(v)} |S_vn|``."""
        return sum(abs(s) for e, s in self.strengths.items() if v in e)


def evaluate(model: IsingModel, s: Mapping[str, int]) -> float:
    spins = {str(k): v for k, v in s.items()}
    if set(spins) != set(model.vertices):
        raise DomainError("assignment domain does not match the model's vertices")
    if any(v not in (-1, 1) for v in spins.values()):
        raise DomainError("spins must be -1 or +1")
    total = sum(model.weights[v] * spins[v] for v in model.vertices)
    total += sum(st * spins[u] * spins[w] for (u, w), st in model.strengths.items())
    return float(total)


def c_max(model: IsingModel) -> float:
    """Largest absolute coefficient; 0 for an all-zero model."""
    vals = [abs(x) for x in model.weights.values()]
    vals += [abs(x) for x in model.strengths.values()]
    return max(vals, default=0.0)


def all_spin_configs(n: int) -> np.ndarray:
    """All ``2**n`` spin vectors as rows, in binary counting order.

    Column 0 is the most significant bit; bit value 0 maps to ``+1``, so the
    first row is all ``+1`` and the last all ``-1``.
    """
    if n == 0:
        return np.ones((1, 0), dtype=np.int8)
    k = np.arange(2**n, dtype=np.int64)[:, None]
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)[None, :]
    bits = (k >> shifts) & 1
    return (1 - 2 * bits).astype(np.int8)


def energies(model: IsingModel, configs: np.ndarray) -> np.ndarray:
    """Vectorised evaluation of many assignments (rows in vertex order)."""
    W, pairs, S = model.arrays()
    X = configs.astype(float)
    out = X @ W
    if len(S):
        out += (X[:, pairs[:, 0]] * X[:, pairs[:, 1]]) @ S
    return out


def brute_force_minimum(
    model: IsingModel, limit: int = BRUTE_FORCE_LIMIT, tol: float = ATTAIN_TOL
) -> tuple[float, list[dict[str, int]]]:
    """Exhaustive minimum and every minimiser within absolute ``tol``.

    Enumeration runs in blocks of assignments sharing a prefix so memory stays bounded.
    """
    n = len(model.vertices)
    if n > limit:
        raise SizeError(f"{n} vertices exceeds brute-force limit {limit}")
    block = min(n, 16)
    prefix_bits = n - block
    tail = all_spin_configs(block)
    best = math.inf
    hits: list[np.ndarray] = []
    for head in all_spin_configs(prefix_bits):
        configs = np.hstack([np.broadcast_to(head, (len(tail), prefix_bits)), tail])
        e = energies(model, configs)
        m = float(e.min())
        if m < best - tol:
            best = m
            hits = [configs[e <= m + tol]]
        elif m <= best + tol:
            best = min(best, m)
            hits.append(configs[e <= best + tol])
    rows = np.vstack(hits)
    # re-filter against the final best, an earlier block may have been looser
    rows = rows[energies(model, rows) <= best + tol]
    verts = model.vertices
    minimizers = [{v: int(x) for v, x in zip(verts, row)} for row in rows]
    return best, minimizers
