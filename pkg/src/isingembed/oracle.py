"""Exhaustive checks of sufficiency, redundancy and equivalence.

Everything here enumerates spin assignments directly and shares no code
path with the LP construction, so it can be used to validate it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .cuts import all_subsets, connected_cuts, is_tree, tree_edge_cuts
from .errors import DomainError, SizeError
from .ising import all_spin_configs, brute_force_minimum, evaluate
from .lp import build_lp, solve_simplex
from .setter import EmbeddedIsingModel
from .subproblem import SubproblemInstance

SUFFICIENCY_LIMIT = 14
REDUNDANCY_LIMIT = 12
END_TO_END_LIMIT = 24
MARGIN_TOL = 1e-9


@dataclass
class SufficiencyReport:
    passed: bool
    worst_margin: float
    required_gap: float
    witness: tuple[dict[str, int], dict[str, int]] | None = None


def _omega_array(inst: SubproblemInstance, omega) -> np.ndarray:
    if isinstance(omega, Mapping):
        return np.array([omega[v] for v in inst.graph.vertices], dtype=float)
    return np.asarray(omega, dtype=float)


def reduced_energy(inst: SubproblemInstance, theta: float, omega, r: Sequence[int], s: Sequence[int]) -> float:
    """``sum omega_q r_q - theta sum_{pq in E} r_p r_q + sum sigma_q r_q s_q`` for one pair."""
    idx = inst.graph.index
    w = _omega_array(inst, omega)
    total = sum(w[i] * r[i] for i in range(inst.n))
    total -= theta * sum(r[idx[a]] * r[idx[b]] for a, b in inst.graph.edges)
    total += sum(inst.sigma[i] * r[i] * s[i] for i in range(inst.n))
    return float(total)


def verify_sufficiency(
    inst: SubproblemInstance,
    theta: float,
    omega,
    raw_gap: float,
    limit: int = SUFFICIENCY_LIMIT,
    tol: float = MARGIN_TOL,
) -> SufficiencyReport:
    """Worst ``I(r, s) - min(I(-1, s), I(+1, s))`` over every outer pattern ``s``
    and every non-constant inner assignment ``r``."""
    n = inst.n
    if n > limit:
        raise SizeError(f"{n} inner vertices exceeds sufficiency limit {limit}")
    if n == 1:
        return SufficiencyReport(True, math.inf, raw_gap)
    w = _omega_array(inst, omega)
    idx = inst.graph.index
    pairs = np.array([(idx[a], idx[b]) for a, b in inst.graph.sorted_edges()]).reshape(-1, 2)
    R = all_spin_configs(n).astype(float)
    R = R[1:-1]  # drop the all-(+1) and all-(-1) rows
    base = R @ w - theta * (R[:, pairs[:, 0]] * R[:, pairs[:, 1]]).sum(axis=1)
    sync_base = np.array([1.0, -1.0]) * w.sum() - theta * len(pairs)
    worst = math.inf
    witness = None
    for s in all_spin_configs(n).astype(float):
        outer = inst.sigma * s
        energy = base + R @ outer
        sync = sync_base + np.array([1.0, -1.0]) * outer.sum()
        margins = energy - sync.min()
        k = int(np.argmin(margins))
        if margins[k] < worst:
            worst = float(margins[k])
            verts = inst.graph.vertices
            witness = (
                {v: int(x) for v, x in zip(verts, R[k])},
                {v: int(x) for v, x in zip(verts, s)},
            )
    return SufficiencyReport(worst >= raw_gap - tol, worst, raw_gap, witness)


def verify_solution_gap(
    embedded: EmbeddedIsingModel,
    raw_gap: float | None = None,
    limit: int = SUFFICIENCY_LIMIT,
) -> dict[str, SufficiencyReport]:
    """Per-vertex sufficiency, by default with raw gap ``2 gamma``.

    A baseline model carries no gamma; unless ``raw_gap`` is given it is
    checked for strict separation only (margin > 0).
    """
    strict = raw_gap is None and embedded.gamma is None
    out = {}
    for v, rec in sorted(embedded.records.items()):
        inst = rec.instance
        if raw_gap is not None:
            gap = raw_gap
        elif inst is not None and embedded.gamma is not None:
            gap = 2.0 * inst.gamma
        else:
            gap = 0.0
        if inst is None:
            out[v] = SufficiencyReport(False, -math.inf, gap)
            continue
        if rec.theta is None:
            out[v] = SufficiencyReport(True, math.inf, gap)
            continue
        omega = {q: rec.omega[q] for q in inst.graph.vertices}
        rep = verify_sufficiency(inst, rec.theta, omega, gap, limit)
        if strict:
            rep.passed = rep.worst_margin > MARGIN_TOL
        out[v] = rep
    return out


@dataclass
class RedundancyReport:
    theta_all: float
    theta_connected: float
    n_all: int
    n_connected: int
    theta_tree: float | None = None
    equal: bool = False


def verify_redundancy(inst: SubproblemInstance, limit: int = REDUNDANCY_LIMIT, tol: float = 1e-6) -> RedundancyReport:
    """Compare LP optima over all subsets, the connected cuts and (for trees) single-edge cuts."""
    if inst.n > limit:
        raise SizeError(f"{inst.n} vertices exceeds redundancy limit {limit}")
    fam_all = all_subsets(inst.graph)
    fam_conn = connected_cuts(inst.graph)
    t_all = solve_simplex(build_lp(inst, fam_all)).theta
    t_conn = solve_simplex(build_lp(inst, fam_conn)).theta
    t_tree = None
    equal = abs(t_all - t_conn) <= tol
    if is_tree(inst.graph):
        t_tree = solve_simplex(build_lp(inst, tree_edge_cuts(inst.graph))).theta
        equal = equal and abs(t_tree - t_conn) <= tol
    return RedundancyReport(t_all, t_conn, len(fam_all), len(fam_conn), t_tree, equal)


def synchronize(embedded: EmbeddedIsingModel, t: Mapping[str, int]) -> dict[str, int]:
    """Spread an original assignment over every chain."""
    return {q: int(t[v]) for v, chain in embedded.embedding.chains.items() for q in chain}


def _check_domain(embedded: EmbeddedIsingModel, s: Mapping[str, int]):
    if set(s) != set(embedded.model.vertices):
        raise DomainError("sample must cover exactly the embedded qubits")


def psi(embedded: EmbeddedIsingModel, s: Mapping[str, int]) -> int:
    """1 iff ``s`` is constant on every chain."""
    _check_domain(embedded, s)
    return int(all(len({s[q] for q in chain}) == 1 for chain in embedded.embedding.chains.values()))


def tau(embedded: EmbeddedIsingModel, s: Mapping[str, int]) -> dict[str, int]:
    """Original assignment read from the smallest-id qubit of each chain."""
    if not psi(embedded, s):
        raise DomainError("tau is only defined on synchronized samples")
    return {v: int(s[min(chain)]) for v, chain in embedded.embedding.chains.items()}


def majority_vote(embedded: EmbeddedIsingModel, s: Mapping[str, int]) -> dict[str, int]:
    """Majority spin per chain, ties go to +1. No optimality guarantee."""
    _check_domain(embedded, s)
    return {v: 1 if sum(s[q] for q in chain) >= 0 else -1 for v, chain in embedded.embedding.chains.items()}


@dataclass
class EquivalenceReport:
    passed: bool
    original_min: float
    embedded_min: float
    offset: float
    all_synchronized: bool
    tau_optimal: bool
    identity_max_error: float
    problems: list[str] = field(default_factory=list)


def verify_end_to_end(embedded: EmbeddedIsingModel, limit: int = END_TO_END_LIMIT, tol: float = 1e-6) -> EquivalenceReport:
    """Brute-force both models and check value, synchronization and de-embedding."""
    orig_val, orig_min = brute_force_minimum(embedded.original, limit)
    emb_val, emb_min = brute_force_minimum(embedded.model, limit)
    c = embedded.offset
    problems = []
    if abs(emb_val + c - orig_val) > tol:
        problems.append(f"min embedded + c = {emb_val + c} differs from original min {orig_val}")
    synced = all(psi(embedded, s) for s in emb_min)
    if not synced:
        problems.append("an embedded minimiser is not synchronized")
    orig_set = {tuple(sorted(t.items())) for t in orig_min}
    tau_ok = synced and all(tuple(sorted(tau(embedded, s).items())) in orig_set for s in emb_min)
    if synced and not tau_ok:
        problems.append("tau of an embedded minimiser is not an original minimiser")
    err = synchronized_identity_error(embedded)
    if err > tol:
        problems.append(f"synchronized evaluation identity off by {err}")
    return EquivalenceReport(not problems, orig_val, emb_val, c, synced, tau_ok, err, problems)


def synchronized_identity_error(embedded: EmbeddedIsingModel, limit: int = 10) -> float:
    """Max over all original ``t`` of ``|I_emb(sync(t)) + c - I(t)|``."""
    verts = embedded.original.vertices
    if len(verts) > limit:
        raise SizeError(f"{len(verts)} original vertices exceeds identity check limit {limit}")
    worst = 0.0
    for row in all_spin_configs(len(verts)):
        t = dict(zip(verts, (int(x) for x in row)))
        lhs = evaluate(embedded.model, synchronize(embedded, t)) + embedded.offset
        worst = max(worst, abs(lhs - evaluate(embedded.original, t)))
    return worst
