"""Minor embeddings, their validation, and the embedded graph structure."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ConnectivityError, DomainError, EmbeddingError
from .ising import Edge, Graph, edge_key, is_connected

DISJOINT = "disjointness"
CONNECTED = "connectivity"
COVERAGE = "coverage"


@dataclass(frozen=True)
class Embedding:
    """Map from original vertex ids to non-empty sets of hardware vertex ids."""

    chains: Mapping[str, frozenset[str]]

    def __init__(self, chains: Mapping):
        norm = {}
        for v, image in chains.items():
            image = frozenset(str(q) for q in image)
            if not image:
                raise DomainError(f"empty image for vertex {v!r}")
            norm[str(v)] = image
        object.__setattr__(self, "chains", dict(sorted(norm.items())))

    def __getitem__(self, v: str) -> frozenset[str]:
        return self.chains[v]

    def __iter__(self):
        return iter(self.chains)

    def __len__(self) -> int:
        return len(self.chains)

    @classmethod
    def identity(cls, graph: Graph) -> "Embedding":
        return cls({v: [v] for v in graph.vertices})

    def owner(self) -> dict[str, str]:
        """Hardware vertex -> original vertex (assumes disjoint images)."""
        return {q: v for v, image in self.chains.items() for q in image}


@dataclass
class ValidationReport:
    ok: bool
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def condition(self) -> str | None:
        """First violated condition, checked in the order disjointness, connectivity, coverage."""
        return self.failures[0][0] if self.failures else None

    def lines(self) -> list[str]:
        if self.ok:
            return ["embedding valid"]
        return [f"{cond}: {msg}" for cond, msg in self.failures]


def _check_domain(G: Graph, H: Graph, phi: Embedding):
    if set(phi) != set(G.vertices):
        missing = sorted(set(G.vertices) - set(phi))
        extra = sorted(set(phi) - set(G.vertices))
        raise DomainError(f"embedding keys differ from V(G): missing {missing}, unknown {extra}")
    hw = set(H.vertices)
    for v in phi:
        unknown = sorted(phi[v] - hw)
        if unknown:
            raise DomainError(f"image of {v!r} uses unknown hardware vertices {unknown}")


def _cross_edges(H: Graph, owner: Mapping[str, str]) -> dict[Edge, list[Edge]]:
    """Hardware edges between different images, grouped by the pair of owners."""
    out: dict[Edge, list[Edge]] = {}
    for p, q in H.sorted_edges():
        a, b = owner.get(p), owner.get(q)
        if a is None or b is None or a == b:
            continue
        out.setdefault(edge_key(a, b), []).append((p, q))
    return out


def validate_embedding(G: Graph, H: Graph, phi: Embedding) -> ValidationReport:
    """Check the three minor-embedding conditions and collect every violation."""
    _check_domain(G, H, phi)
    failures: list[tuple[str, str]] = []
    seen: dict[str, str] = {}
    for v, image in phi.chains.items():
        for q in sorted(image):
            if q in seen:
                failures.append((DISJOINT, f"hardware vertex {q!r} used by {seen[q]!r} and {v!r}"))
            else:
                seen[q] = v
    for v, image in phi.chains.items():
        if not is_connected(image, H.edges):
            failures.append((CONNECTED, f"H[phi({v!r})] = {sorted(image)} is disconnected"))
    owner = phi.owner()
    cross = _cross_edges(H, owner)
    for e in G.sorted_edges():
        if e not in cross:
            failures.append((COVERAGE, f"no hardware edge between images of {e[0]!r} and {e[1]!r}"))
    # keep the documented order even when violations interleave
    order = {DISJOINT: 0, CONNECTED: 1, COVERAGE: 2}
    failures.sort(key=lambda f: order[f[0]])
    return ValidationReport(not failures, failures)


def spanning_tree(vertices: Iterable, edges: Iterable) -> set[Edge]:
    """BFS spanning tree from the smallest id, visiting neighbours in id order."""
    verts = sorted({str(v) for v in vertices})
    if not verts:
        raise ConnectivityError("empty vertex set")
    vset = set(verts)
    adj: dict[str, list[str]] = {v: [] for v in verts}
    for u, v in edges:
        u, v = str(u), str(v)
        if u in vset and v in vset:
            adj[u].append(v)
            adj[v].append(u)
    for nbrs in adj.values():
        nbrs.sort()
    tree: set[Edge] = set()
    seen = {verts[0]}
    queue = deque([verts[0]])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                tree.add(edge_key(u, w))
                queue.append(w)
    if len(seen) != len(verts):
        raise ConnectivityError(f"vertices {sorted(vset - seen)} unreachable from {verts[0]!r}")
    return tree


@dataclass(frozen=True)
class EmbeddedGraphStructure:
    """Vertex set of the embedded graph with intra edges per original vertex
    and inter edge families per original edge.

    Hardware edges joining images of non-adjacent original vertices belong to
    neither family; they are listed in ``unused`` and left out of the embedded
    model.
    """

    original: Graph
    embedding: Embedding
    vertices: tuple[str, ...]
    intra: Mapping[str, tuple[Edge, ...]]
    inter: Mapping[Edge, tuple[Edge, ...]]
    unused: tuple[Edge, ...] = ()

    @property
    def owner(self) -> dict[str, str]:
        return self.embedding.owner()

    def intra_edges(self) -> list[Edge]:
        return sorted(e for es in self.intra.values() for e in es)

    def inter_edges(self) -> list[Edge]:
        return sorted(e for es in self.inter.values() for e in es)

    def graph(self) -> Graph:
        """The embedded graph restricted to intra and inter edges."""
        return Graph(self.vertices, self.intra_edges() + self.inter_edges())

    def tree_edges(self, v: str) -> set[Edge]:
        return spanning_tree(self.embedding[v], self.intra[v])

    def boundary(self, v: str) -> list[tuple[str, Edge, Edge]]:
        """Inter edges leaving ``phi_v`` as ``(inner vertex, hardware edge, original edge)``."""
        image = self.embedding[v]
        out = []
        for oe, family in self.inter.items():
            if v not in oe:
                continue
            for he in family:
                inner = he[0] if he[0] in image else he[1]
                out.append((inner, he, oe))
        return sorted(out)


def build_embedded_structure(G: Graph, H: Graph, phi: Embedding) -> EmbeddedGraphStructure:
    report = validate_embedding(G, H, phi)
    if not report.ok:
        raise EmbeddingError("; ".join(report.lines()))
    owner = phi.owner()
    intra: dict[str, list[Edge]] = {v: [] for v in phi}
    for p, q in H.sorted_edges():
        if p in owner and q in owner and owner[p] == owner[q]:
            intra[owner[p]].append((p, q))
    cross = _cross_edges(H, owner)
    inter = {e: tuple(cross[e]) for e in G.sorted_edges()}
    unused = tuple(sorted(he for e, hes in cross.items() if e not in G.edges for he in hes))
    return EmbeddedGraphStructure(
        original=G,
        embedding=phi,
        vertices=tuple(sorted(owner)),
        intra={v: tuple(es) for v, es in intra.items()},
        inter=inter,
        unused=unused,
    )
