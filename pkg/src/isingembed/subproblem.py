"""Per-vertex weight distribution instances.

For an original vertex ``v`` the instance is the (tree of the) inner graph
``H[phi_v]``, the outer influence ``sigma_q`` on every inner vertex (sum of
absolute inter-edge strengths touching ``q``), the weight ``lam = |W_v|`` to
distribute, and the gap ``gamma``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .embedding import EmbeddedGraphStructure
from .errors import ConnectivityError, EmbeddingError, InstanceError, PreprocessableError, StructureError
from .ising import Edge, Graph, IsingModel

SUM_TOL = 1e-12


class Strategy(str, enum.Enum):
    UNIFORM_SPLIT = "uniform-split"
    SINGLE_EDGE = "single-edge"


@dataclass(frozen=True)
class OuterStrengthAssignment:
    values: Mapping[Edge, float]
    strategy: Strategy

    def check(self, structure: EmbeddedGraphStructure, model: IsingModel, tol: float = SUM_TOL):
        for oe, family in structure.inter.items():
            total = sum(self.values[e] for e in family)
            if abs(total - model.strengths[oe]) > tol:
                raise InstanceError(f"outer strengths on {oe} sum to {total}, expected {model.strengths[oe]}")


def assign_outer_strengths(
    structure: EmbeddedGraphStructure,
    model: IsingModel,
    strategy: Strategy | str = Strategy.UNIFORM_SPLIT,
) -> OuterStrengthAssignment:
    strategy = Strategy(strategy)
    values: dict[Edge, float] = {}
    for oe, family in structure.inter.items():
        if not family:
            raise StructureError(f"no inter edges for original edge {oe}")
        S = model.strengths[oe]
        family = sorted(family)
        if strategy is Strategy.SINGLE_EDGE:
            share = [S] + [0.0] * (len(family) - 1)
        else:
            share = [S / len(family)] * len(family)
            # absorb rounding into the last share so the family sum stays S
            share[-1] = S - math.fsum(share[:-1])
        values.update(zip(family, share))
    out = OuterStrengthAssignment(values, strategy)
    out.check(structure, model)
    return out


@dataclass(frozen=True, eq=False)
class SubproblemInstance:
    """Input of the gapped weight distribution LP.

    ``sigma`` is aligned with ``graph.vertices``.
    """

    graph: Graph
    sigma: np.ndarray
    lam: float
    gamma: float
    vertex: str | None = None

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=float).reshape(-1)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "gamma", float(self.gamma))
        if len(sigma) != len(self.graph):
            raise InstanceError("sigma must have one entry per vertex")
        if np.any(sigma < 0) or not np.all(np.isfinite(sigma)):
            raise InstanceError("sigma must be finite and nonnegative")
        if self.lam < 0:
            raise InstanceError("lam must be nonnegative")
        if not self.gamma > 0:
            raise InstanceError("gamma must be positive")
        if not self.lam < sigma.sum():
            raise InstanceError(f"lam = {self.lam} must be below sigma(V) = {sigma.sum()}")
        if not self.graph.is_connected():
            raise ConnectivityError("instance graph must be connected")

    @classmethod
    def build(cls, graph: Graph, sigma: Mapping | Sequence, lam: float, gamma: float, vertex=None):
        if isinstance(sigma, Mapping):
            sigma = [sigma[v] for v in graph.vertices]
        return cls(graph, np.asarray(sigma, dtype=float), lam, gamma, vertex)

    @property
    def n(self) -> int:
        return len(self.graph)

    @property
    def sigma_total(self) -> float:
        return float(self.sigma.sum())

    def sigma_map(self) -> dict[str, float]:
        return dict(zip(self.graph.vertices, self.sigma.tolist()))

    def scaled(self, c: float) -> "SubproblemInstance":
        return SubproblemInstance(self.graph, self.sigma * c, self.lam * c, self.gamma * c, self.vertex)

    def with_gamma(self, gamma: float) -> "SubproblemInstance":
        return SubproblemInstance(self.graph, self.sigma, self.lam, gamma, self.vertex)


def outer_influence(v: str, structure: EmbeddedGraphStructure, assignment: OuterStrengthAssignment) -> dict[str, float]:
    sigma = {q: 0.0 for q in structure.embedding[v]}
    for inner, he, _ in structure.boundary(v):
        sigma[inner] += abs(assignment.values[he])
    return sigma


def extract_instance(
    v: str,
    structure: EmbeddedGraphStructure,
    assignment: OuterStrengthAssignment,
    model: IsingModel,
    gamma: float,
    use_spanning_tree: bool = True,
) -> SubproblemInstance:
    if not gamma > 0:
        raise InstanceError("gamma must be positive")
    image = structure.embedding[v]
    try:
        edges = structure.tree_edges(v) if use_spanning_tree else structure.intra[v]
    except ConnectivityError as exc:
        raise EmbeddingError(f"image of {v!r} is disconnected") from exc
    G = Graph(image, edges)
    sigma = outer_influence(v, structure, assignment)
    lam = abs(model.weights[v])
    total = math.fsum(sigma.values())
    if lam >= total:
        raise PreprocessableError(
            f"vertex {v!r}: |W| = {lam} >= sigma(V) = {total}; apply preprocess first"
        )
    return SubproblemInstance.build(G, sigma, lam, gamma, vertex=v)
