"""Families of vertex cuts that index the weight distribution constraints.

Subsets are stored as rows of a boolean membership matrix over the graph's
dense vertex order; ``subsets()`` exports them as sorted id tuples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConnectivityError, SizeError, StructureError
from .ising import Graph

SUBSET_LIMIT = 20


@dataclass(frozen=True)
class CutFamily:
    graph: Graph
    members: np.ndarray  # (k, n) bool
    cut_sizes: np.ndarray  # (k,) int, |delta(S)|
    kind: str = "custom"

    def __len__(self) -> int:
        return len(self.members)

    def subsets(self) -> list[tuple[str, ...]]:
        verts = np.array(self.graph.vertices, dtype=object)
        return [tuple(verts[row]) for row in self.members]

    def as_set(self) -> set[frozenset[str]]:
        return {frozenset(s) for s in self.subsets()}

    def sigma_sums(self, sigma: np.ndarray) -> np.ndarray:
        return self.members.astype(float) @ sigma


def cut_sizes(G: Graph, members: np.ndarray) -> np.ndarray:
    if not len(members):
        return np.zeros(0, dtype=np.int64)
    idx = G.index
    sizes = np.zeros(len(members), dtype=np.int64)
    for u, v in G.edges:
        sizes += members[:, idx[u]] != members[:, idx[v]]
    return sizes


def _from_masks(G: Graph, masks: np.ndarray, kind: str) -> CutFamily:
    n = len(G)
    bits = np.arange(n, dtype=np.int64)
    members = ((masks[:, None] >> bits[None, :]) & 1).astype(bool)
    return CutFamily(G, members, cut_sizes(G, members), kind)


def all_subsets(G: Graph, limit: int = SUBSET_LIMIT) -> CutFamily:
    """Every nonempty proper subset of ``V``, in increasing bitmask order."""
    n = len(G)
    if n > limit:
        raise SizeError(f"{n} vertices exceeds subset enumeration limit {limit}")
    masks = np.arange(1, 2**n - 1, dtype=np.int64)
    return _from_masks(G, masks, "all")


def _neighbor_masks(G: Graph) -> list[int]:
    idx = G.index
    nb = [0] * len(G)
    for u, v in G.edges:
        nb[idx[u]] |= 1 << idx[v]
        nb[idx[v]] |= 1 << idx[u]
    return nb


def _mask_connected(mask: int, nb: list[int]) -> bool:
    if mask == 0:
        return False
    reached = mask & -mask
    frontier = reached
    while frontier:
        grow = 0
        f = frontier
        while f:
            low = f & -f
            grow |= nb[low.bit_length() - 1]
            f ^= low
        frontier = grow & mask & ~reached
        reached |= frontier
    return reached == mask


def connected_cuts(G: Graph, limit: int = SUBSET_LIMIT) -> CutFamily:
    """Subsets ``S`` with both ``G[S]`` and ``G[V \\ S]`` connected."""
    if not G.is_connected():
        raise ConnectivityError("connected_cuts needs a connected graph")
    n = len(G)
    if n > limit:
        raise SizeError(f"{n} vertices exceeds subset enumeration limit {limit}")
    nb = _neighbor_masks(G)
    full = (1 << n) - 1
    keep = [
        m for m in range(1, full)
        if _mask_connected(m, nb) and _mask_connected(full ^ m, nb)
    ]
    return _from_masks(G, np.array(keep, dtype=np.int64), "connected")


def is_tree(G: Graph) -> bool:
    return len(G.edges) == len(G) - 1 and G.is_connected()


def tree_edge_cuts(G: Graph) -> CutFamily:
    """Both sides of every single-edge cut of a tree: ``2|V| - 2`` sets.

    Row ``2k`` is the side of the ``k``-th sorted edge that is the child
    subtree when the tree is rooted at its smallest id; row ``2k + 1`` is its
    complement.
    """
    if not is_tree(G):
        raise StructureError("tree_edge_cuts needs a tree")
    n = len(G)
    idx = G.index
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in G.edges:
        adj[idx[u]].append(idx[v])
        adj[idx[v]].append(idx[u])
    parent = [-1] * n
    order = [0]
    parent[0] = 0
    for u in order:
        for w in sorted(adj[u]):
            if parent[w] == -1:
                parent[w] = u
                order.append(w)
    parent[0] = -1
    # preorder positions make every subtree a contiguous block
    pre: list[int] = []
    stack = [0]
    children: list[list[int]] = [[] for _ in range(n)]
    for w in order[1:]:
        children[parent[w]].append(w)
    while stack:
        u = stack.pop()
        pre.append(u)
        stack.extend(sorted(children[u], reverse=True))
    pos = np.empty(n, dtype=np.int64)
    pos[pre] = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    for u in reversed(order[1:]):
        size[parent[u]] += size[u]
    pre_arr = np.array(pre)
    edges = G.sorted_edges()
    members = np.zeros((2 * len(edges), n), dtype=bool)
    for k, (a, b) in enumerate(edges):
        ia, ib = idx[a], idx[b]
        child = ib if parent[ib] == ia else ia
        block = pre_arr[pos[child]: pos[child] + size[child]]
        members[2 * k, block] = True
        members[2 * k + 1] = ~members[2 * k]
    return CutFamily(G, members, np.ones(len(members), dtype=np.int64), "tree")


def default_family(G: Graph, limit: int = SUBSET_LIMIT) -> CutFamily:
    """Tree cuts for trees, otherwise the connected-cut family."""
    return tree_edge_cuts(G) if is_tree(G) else connected_cuts(G, limit)
