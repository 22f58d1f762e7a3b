"""Fixing spins whose weight dominates all incident strengths.

If ``|W_v| > sum_n |S_vn|`` every optimum has ``s_v = -sign(W_v)``; with
equality that choice is still optimal. Fixing ``v`` folds ``W_v s_v`` into a
constant offset and ``S_vn s_v`` into the neighbours' weights, which can make
further vertices fixable, so fixing runs to a fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ising import Edge, Graph, IsingModel


@dataclass(frozen=True)
class FixEvent:
    vertex: str
    weight: float  # W_v at fixing time
    incident: float  # sum of |S_vn| over remaining neighbours
    value: int


@dataclass
class PreprocessResult:
    reduced: IsingModel
    fixed: dict[str, int]
    offset: float
    adjustments: list[tuple[str, str, float]] = field(default_factory=list)
    events: list[FixEvent] = field(default_factory=list)

    def complete(self, s: dict[str, int]) -> dict[str, int]:
        """Merge an assignment of the reduced model with the fixed spins."""
        return {**self.fixed, **s}


def _dominates(weight: float, incident: float, strict: bool) -> bool:
    return abs(weight) > incident if strict else abs(weight) >= incident


def preprocess(model: IsingModel, strict: bool = False) -> PreprocessResult:
    """Fix dominated vertices, scanning in id order until nothing changes.

    With ``strict`` only ``|W_v| > sum |S_vn|`` triggers a fix; by default the
    equality case is fixed too. A vertex with zero weight and no remaining
    neighbours is fixed to ``+1``.
    """
    W = dict(model.weights)
    S: dict[Edge, float] = dict(model.strengths)
    nbrs: dict[str, dict[str, Edge]] = {v: {} for v in model.vertices}
    for e in S:
        u, w = e
        nbrs[u][w] = e
        nbrs[w][u] = e
    fixed: dict[str, int] = {}
    offset = 0.0
    adjustments = []
    events = []
    changed = True
    while changed:
        changed = False
        for v in model.vertices:
            if v in fixed:
                continue
            incident = sum(abs(S[e]) for e in nbrs[v].values())
            if not _dominates(W[v], incident, strict):
                continue
            value = -1 if W[v] > 0 else 1
            events.append(FixEvent(v, W[v], incident, value))
            fixed[v] = value
            offset += W[v] * value
            for n, e in sorted(nbrs[v].items()):
                delta = S[e] * value
                W[n] += delta
                adjustments.append((v, n, delta))
                del S[e]
                del nbrs[n][v]
            nbrs[v].clear()
            changed = True
    rest = [v for v in model.vertices if v not in fixed]
    reduced = IsingModel(Graph(rest, S.keys()), {v: W[v] for v in rest}, S)
    return PreprocessResult(reduced, fixed, offset, adjustments, events)


def is_preprocessable(model: IsingModel) -> list[str]:
    """Vertices with ``|W_v| >= sum |S_vn|``; empty means every vertex is strictly dominated by its strengths."""
    return [v for v in model.vertices if abs(model.weights[v]) >= model.incident_strength(v)]
