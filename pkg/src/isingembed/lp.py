"""The gapped weight distribution LP: construction, solution, checks.

Variables are ``theta`` followed by one ``omega`` per instance vertex. For a
cut ``S`` with ``theta_half = (sigma(V) - lam) / 2`` the row is

    |delta(S)| theta - omega(S) >= sigma(S) + gamma                 if sigma(S) < theta_half
    |delta(S)| theta - omega(S) >= 2 theta_half - sigma(S) + gamma  otherwise

which is the min-form constraint with the minimum resolved (both branches
agree at ``sigma(S) == theta_half``). ``omega(V) = lam`` and
``theta >= |omega_q|`` complete the program.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from .cuts import CutFamily, default_family
from .errors import InstanceError, LPError
from .simplex import simplex
from .subproblem import SubproblemInstance

FEAS_TOL = 1e-9
TIGHT_TOL = 1e-9


@dataclass(eq=False)
class LinearProgram:
    """``min theta`` over rows ``A x (>=|=) rhs``; ``x = (theta, omega...)``, all free."""

    variables: list[str]
    A: sp.csr_matrix
    relations: list[str]
    rhs: np.ndarray
    labels: list[tuple]
    instance: SubproblemInstance | None = None

    @property
    def constraints(self) -> list[tuple[np.ndarray, str, float]]:
        dense = self.A.toarray()
        return [(dense[i], self.relations[i], float(self.rhs[i])) for i in range(len(self.rhs))]

    @property
    def objective(self) -> np.ndarray:
        c = np.zeros(len(self.variables))
        c[0] = 1.0
        return c

    def __len__(self) -> int:
        return len(self.rhs)

    def count(self, kind: str) -> int:
        return sum(1 for lab in self.labels if lab[0] == kind)


@dataclass
class WeightDistribution:
    theta: float
    omega: dict[str, float]
    tight: list[tuple] = field(default_factory=list)
    iterations: int = 0

    def omega_array(self, order: Iterable[str]) -> np.ndarray:
        return np.array([self.omega[v] for v in order])

    @property
    def tight_cuts(self) -> list[tuple[str, ...]]:
        return [lab[1] for lab in self.tight if lab[0] == "cut"]


def theta_half(inst: SubproblemInstance) -> float:
    return 0.5 * (inst.sigma_total - inst.lam)


def build_lp(inst: SubproblemInstance, family: CutFamily) -> LinearProgram:
    n = inst.n
    if inst.lam >= inst.sigma_total:
        raise InstanceError("lam must be below sigma(V)")
    if len(family) == 0 and n > 1:
        raise InstanceError("empty cut family for a graph with several vertices")
    if family.graph.vertices != inst.graph.vertices:
        raise InstanceError("cut family was built for a different vertex set")
    half = theta_half(inst)
    sig_S = family.sigma_sums(inst.sigma)
    rhs_cut = np.where(sig_S < half, sig_S, 2.0 * half - sig_S) + inst.gamma

    k = len(family)
    members = sp.csr_matrix(family.members.astype(float))
    cut_rows = sp.hstack([sp.csr_matrix(family.cut_sizes.astype(float)[:, None]), -members])
    sum_row = sp.csr_matrix(np.concatenate([[0.0], np.ones(n)])[None, :])
    eye = sp.identity(n, format="csr")
    ones = sp.csr_matrix(np.ones((n, 1)))
    box = sp.vstack([sp.hstack([ones, -eye]), sp.hstack([ones, eye])])
    A = sp.vstack([cut_rows, sum_row, box], format="csr") if k else sp.vstack([sum_row, box], format="csr")

    verts = inst.graph.vertices
    labels: list[tuple] = [("cut", s) for s in family.subsets()]
    labels.append(("sum",))
    labels += [("box+", v) for v in verts] + [("box-", v) for v in verts]
    relations = [">="] * k + ["="] + [">="] * (2 * n)
    rhs = np.concatenate([rhs_cut, [inst.lam], np.zeros(2 * n)])
    variables = ["theta"] + [f"omega[{v}]" for v in verts]
    return LinearProgram(variables, A, relations, rhs, labels, inst)


def solve_simplex(lp: LinearProgram) -> WeightDistribution:
    """Optimal basic solution of ``lp`` via the simplex method on its dual.

    The primal has free variables and inequality rows, so its dual is already
    in standard form with one row per primal variable; the primal optimum is
    read off the dual's simplex multipliers.
    """
    ge = np.array([r == ">=" for r in lp.relations])
    G, h = lp.A[ge], lp.rhs[ge]
    E, e = lp.A[~ge], lp.rhs[~ge]
    G, h = _sparsify(G, h, E, e)
    A_std = sp.hstack([G.T, E.T, -E.T], format="csc")
    cost = np.concatenate([-h, -e, e])
    res = simplex(cost, A_std, lp.objective, start=_box_basis(lp, ge))
    if res.status != "optimal":
        raise LPError(f"dual simplex status {res.status!r}: primal {_primal_status(res.status)}")
    x = -res.multipliers + 0.0  # no negative zeros in reports
    _check_feasible(lp, x)
    slack = lp.A @ x - lp.rhs
    scale = np.maximum(1.0, np.abs(lp.rhs))
    tight = [lp.labels[i] for i in np.flatnonzero(np.abs(slack) <= TIGHT_TOL * scale)]
    verts = lp.variables[1:]
    omega = {name[len("omega["):-1]: float(val) for name, val in zip(verts, x[1:])}
    return WeightDistribution(float(x[0]), omega, tight, res.iterations)


def _sparsify(G: sp.csr_matrix, h: np.ndarray, E: sp.csr_matrix, e: np.ndarray):
    """Add the single equality row to every inequality row it thins out.

    ``-omega(S) >= r`` becomes ``omega(V - S) >= r - lam``; the feasible set
    is unchanged and large-side cut rows lose most of their nonzeros.
    """
    if E.shape[0] != 1:
        return G, h
    eq = E.toarray().ravel()
    support = np.flatnonzero(eq)
    part = G[:, support].tocsr()
    part.eliminate_zeros()
    cancels = part.copy()
    cancels.data = (part.data == -eq[support][part.indices]).astype(float)
    before = np.diff(part.indptr)
    after = len(support) - np.asarray(cancels.sum(axis=1)).ravel()
    add = (after < before).astype(float)
    if not add.any():
        return G, h
    G = (G + sp.csr_matrix(add[:, None]) @ sp.csr_matrix(eq[None, :])).tocsr()
    G.eliminate_zeros()
    return G, h + add * e[0]


def _box_basis(lp: LinearProgram, ge: np.ndarray) -> np.ndarray | None:
    """Dual columns of both box rows of the first vertex and ``theta - omega_q >= 0``
    for the others: with multipliers (1/2, 1/2, 0, ...) they match the objective."""
    n = len(lp.variables) - 1
    pos = {lab: k for k, lab in enumerate(lab for lab, g in zip(lp.labels, ge) if g)}
    verts = [name[len("omega["):-1] for name in lp.variables[1:]]
    try:
        cols = [pos[("box-", verts[0])]] + [pos[("box+", v)] for v in verts]
    except KeyError:
        return None
    return np.array(cols) if len(cols) == n + 1 else None


def _primal_status(dual_status: str) -> str:
    return {"infeasible": "unbounded or infeasible", "unbounded": "infeasible"}.get(dual_status, dual_status)


def _check_feasible(lp: LinearProgram, x: np.ndarray, tol: float = FEAS_TOL):
    slack = lp.A @ x - lp.rhs
    scale = np.maximum(1.0, np.abs(lp.rhs))
    for i, rel in enumerate(lp.relations):
        bad = abs(slack[i]) > tol * scale[i] if rel == "=" else slack[i] < -tol * scale[i]
        if bad:
            raise LPError(f"row {lp.labels[i]} violated by {slack[i]:.3e} after solve")


def solve_instance(inst: SubproblemInstance, family: CutFamily | None = None) -> WeightDistribution:
    if family is None:
        family = default_family(inst.graph)
    return solve_simplex(build_lp(inst, family))


def resolved_min_check(inst: SubproblemInstance, S: Iterable[str], omega: Mapping[str, float] | np.ndarray) -> float:
    """Unresolved right-hand side ``(min{sigma(S)+omega(S), sigma(V-S)-omega(V-S)} + gamma) / |delta(S)|``."""
    verts = inst.graph.vertices
    S = {str(v) for v in S}
    if not S or S == set(verts) or not S <= set(verts):
        raise InstanceError("S must be a nonempty proper subset of the instance vertices")
    mask = np.array([v in S for v in verts])
    w = np.asarray([omega[v] for v in verts] if isinstance(omega, Mapping) else omega, dtype=float)
    cut = sum(1 for a, b in inst.graph.edges if (a in S) != (b in S))
    if cut == 0:
        raise InstanceError("S has an empty cut")
    inside = inst.sigma[mask].sum() + w[mask].sum()
    outside = inst.sigma[~mask].sum() - w[~mask].sum()
    return (min(inside, outside) + inst.gamma) / cut


def _lp_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.]", "_", name)


def to_lp_format(lp: LinearProgram) -> str:
    """CPLEX LP text of the program, for cross-checking with external solvers."""
    names = [_lp_name(v) for v in lp.variables]
    out = ["\\ gapped weight distribution", "Minimize", f" obj: {names[0]}", "Subject To"]
    A = lp.A.tocsr()
    for i in range(A.shape[0]):
        lo, hi = A.indptr[i], A.indptr[i + 1]
        terms = []
        for j, a in zip(A.indices[lo:hi], A.data[lo:hi]):
            sign = "-" if a < 0 else "+"
            terms.append(f"{sign} {abs(a):.17g} {names[j]}")
        lhs = " ".join(terms).lstrip("+ ")
        rel = ">=" if lp.relations[i] == ">=" else "="
        out.append(f" r{i}: {lhs} {rel} {lp.rhs[i]:.17g}")
    out.append("Bounds")
    out += [f" {v} free" for v in names]
    out.append("End")
    return "\n".join(out) + "\n"
