"""Combining per-vertex LP solutions into an embedded Ising model."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .cuts import default_family
from .embedding import EmbeddedGraphStructure, Embedding, build_embedded_structure
from .errors import InstanceError, PreprocessableError
from .ising import Edge, Graph, IsingModel, c_max
from .lp import build_lp, solve_simplex
from .preprocess import is_preprocessable
from .subproblem import (
    OuterStrengthAssignment,
    Strategy,
    SubproblemInstance,
    assign_outer_strengths,
    extract_instance,
)


def sign(x: float) -> float:
    return -1.0 if x < 0 else 1.0


@dataclass
class VertexRecord:
    """Per original vertex: coupling ``theta`` (None for single-qubit chains),
    weight split ``omega`` oriented so that it sums to ``|W_v|``, and the
    instance it was computed for."""

    theta: float | None
    omega: dict[str, float]
    sign: float
    coupled_edges: tuple[Edge, ...] = ()
    tight_cuts: list[tuple[str, ...]] = field(default_factory=list)
    n_constraints: int = 0
    instance: SubproblemInstance | None = None


@dataclass
class EmbeddedIsingModel:
    model: IsingModel
    offset: float
    records: dict[str, VertexRecord]
    gamma: float | None
    strategy: Strategy
    original: IsingModel
    embedding: Embedding
    kind: str = "optimal"
    factor: float | None = None

    @property
    def thetas(self) -> dict[str, float]:
        return {v: r.theta for v, r in self.records.items() if r.theta is not None}


def _combine(
    model: IsingModel,
    structure: EmbeddedGraphStructure,
    assignment: OuterStrengthAssignment,
    records: dict[str, VertexRecord],
) -> tuple[IsingModel, float]:
    weights: dict[str, float] = {}
    strengths: dict[Edge, float] = {}
    for v, rec in records.items():
        for q, w in rec.omega.items():
            weights[q] = rec.sign * w
        coupled = set(rec.coupled_edges)
        for e in structure.intra[v]:
            strengths[e] = -rec.theta if e in coupled else 0.0
    strengths.update(assignment.values)
    emb = IsingModel(structure.graph(), weights, strengths)
    offset = -math.fsum(strengths[e] for e in structure.intra_edges())
    return emb, offset


def set_parameters(
    model: IsingModel,
    H: Graph,
    phi: Embedding,
    gamma: float,
    strategy: Strategy | str = Strategy.UNIFORM_SPLIT,
    use_spanning_tree: bool = True,
    gamma_overrides: Mapping[str, float] | None = None,
) -> EmbeddedIsingModel:
    """Optimal per-qubit weights and minimal uniform chain couplings.

    Every original vertex gets its own LP over the connected (or tree) cut
    family of its chain; the results are merged and the offset
    ``c = -sum of intra strengths`` is returned with the model.
    """
    if not gamma > 0:
        raise InstanceError("gamma must be positive")
    bad = is_preprocessable(model)
    if bad:
        raise PreprocessableError(f"vertices {bad} are preprocessable; run preprocess first")
    structure = build_embedded_structure(model.graph, H, phi)
    assignment = assign_outer_strengths(structure, model, strategy)
    overrides = dict(gamma_overrides or {})
    records: dict[str, VertexRecord] = {}
    for v in model.vertices:
        g = overrides.get(v, gamma)
        inst = extract_instance(v, structure, assignment, model, g, use_spanning_tree)
        s = sign(model.weights[v])
        if inst.n == 1:
            (q,) = inst.graph.vertices
            records[v] = VertexRecord(None, {q: inst.lam}, s, instance=inst)
            continue
        lp = build_lp(inst, default_family(inst.graph))
        sol = solve_simplex(lp)
        records[v] = VertexRecord(
            theta=sol.theta,
            omega=sol.omega,
            sign=s,
            coupled_edges=tuple(inst.graph.sorted_edges()),
            tight_cuts=sol.tight_cuts,
            n_constraints=len(lp),
            instance=inst,
        )
    emb, offset = _combine(model, structure, assignment, records)
    return EmbeddedIsingModel(emb, offset, records, gamma, assignment.strategy, model, phi)


def baseline_uniform(
    model: IsingModel,
    H: Graph,
    phi: Embedding,
    factor: float,
    use_spanning_tree: bool = True,
) -> EmbeddedIsingModel:
    """Heuristic comparator: even weight split, chain coupling ``factor * C_max``.

    Not certified; use the oracle to check it.
    """
    if not factor > 0:
        raise InstanceError("factor must be positive")
    structure = build_embedded_structure(model.graph, H, phi)
    assignment = assign_outer_strengths(structure, model, Strategy.UNIFORM_SPLIT)
    theta = factor * c_max(model)
    records: dict[str, VertexRecord] = {}
    for v in model.vertices:
        image = sorted(phi[v])
        lam = abs(model.weights[v])
        omega = {q: lam / len(image) for q in image}
        try:
            # any positive gamma; only graph, sigma and lam are used for checking
            inst = extract_instance(v, structure, assignment, model, 1.0, use_spanning_tree)
        except PreprocessableError:
            inst = None
        if use_spanning_tree:
            coupled = tuple(sorted(structure.tree_edges(v)))
        else:
            coupled = tuple(structure.intra[v])
        records[v] = VertexRecord(
            theta=theta if len(image) > 1 else None,
            omega=omega,
            sign=sign(model.weights[v]),
            coupled_edges=coupled,
            instance=inst,
        )
    emb, offset = _combine(model, structure, assignment, records)
    return EmbeddedIsingModel(emb, offset, records, None, Strategy.UNIFORM_SPLIT, model, phi, "baseline", factor)


def report(embedded: EmbeddedIsingModel) -> dict:
    thetas = embedded.thetas
    return {
        "kind": embedded.kind,
        "c_max": c_max(embedded.model),
        "c_max_original": c_max(embedded.original),
        "theta": dict(sorted(thetas.items())),
        "max_theta": max(thetas.values(), default=0.0),
        "offset_c": embedded.offset,
        "gamma": embedded.gamma,
        "factor": embedded.factor,
        "strategy": embedded.strategy.value,
        "constraints": {v: r.n_constraints for v, r in sorted(embedded.records.items())},
        "qubits": len(embedded.model.vertices),
    }
