"""Two-phase revised simplex for ``min c x  s.t.  A x = b, x >= 0``.

The basis is held as a sparse LU factorisation plus a product-form file of
eta columns, refactorised every ``REFACTOR_EVERY`` pivots. Entering columns
are priced by most-negative reduced cost; after ``DEGENERATE_STREAK``
consecutive degenerate pivots the solver switches to Bland's smallest-index
rule until a pivot makes progress, which rules out cycling. Ratio-test ties
always go to the smallest basic index, so runs are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

PIVOT_TOL = 1e-9
REFACTOR_EVERY = 64
DEGENERATE_STREAK = 30


@dataclass
class SimplexResult:
    status: str  # "optimal" | "infeasible" | "unbounded" | "iteration_limit"
    x: np.ndarray
    objective: float
    multipliers: np.ndarray  # y with y B = c_B for the final basis
    basis: np.ndarray
    iterations: int


class _Basis:
    """``B^{-1}`` as ``E_k ... E_1 (LU)^{-1}``."""

    def __init__(self, A_full: sp.csc_matrix, basis: np.ndarray):
        self.A_full = A_full
        self.m = A_full.shape[0]
        self.refactor(basis)

    def refactor(self, basis: np.ndarray):
        B = self.A_full[:, basis].tocsc()
        self.lu = splu(B, permc_spec="COLAMD", options={"SymmetricMode": False})
        self.etas: list[tuple[int, np.ndarray]] = []

    def ftran(self, a: np.ndarray) -> np.ndarray:
        z = self.lu.solve(a)
        for r, u in self.etas:
            zr = z[r] / u[r]
            z -= zr * u
            z[r] = zr
        return z

    def btran(self, c: np.ndarray) -> np.ndarray:
        w = c.astype(float).copy()
        for r, u in reversed(self.etas):
            w[r] = (w[r] - (w @ u - w[r] * u[r])) / u[r]
        return self.lu.solve(w, trans="T")

    def update(self, r: int, u: np.ndarray):
        self.etas.append((r, u.copy()))


class _Revised:
    def __init__(self, A, b: np.ndarray, tol: float):
        self.m, self.n = A.shape
        self.tol = tol
        # row-scaled so that b >= 0; artificial columns n..n+m-1 form the identity
        self.flip = np.where(b < 0, -1.0, 1.0)
        A = sp.csc_matrix(sp.diags(self.flip) @ sp.csc_matrix(A))
        self.A = A
        self.A_full = sp.hstack([A, sp.identity(self.m, format="csc")], format="csc")
        self.b = b * self.flip
        self.basis = np.arange(self.n, self.n + self.m)
        self.B = _Basis(self.A_full, self.basis)
        self.xB = self.b.copy()
        self.iterations = 0

    def warm_start(self, basis: np.ndarray) -> bool:
        if len(basis) != self.m or len(set(basis.tolist())) != self.m or basis.min() < 0 or basis.max() >= self.n:
            return False
        try:
            trial = _Basis(self.A_full, basis)
        except RuntimeError:  # exactly singular
            return False
        xB = trial.ftran(self.b)
        scale = max(1.0, float(np.abs(self.b).max(initial=0.0)))
        if not np.all(np.isfinite(xB)) or xB.min() < -self.tol * scale:
            return False
        if np.abs(self.A_full[:, basis] @ xB - self.b).max() > 1e3 * self.tol * scale:
            return False  # numerically singular
        self.basis, self.B, self.xB = basis.copy(), trial, np.maximum(xB, 0.0)
        return True

    def column(self, j: int) -> np.ndarray:
        lo, hi = self.A_full.indptr[j], self.A_full.indptr[j + 1]
        col = np.zeros(self.m)
        col[self.A_full.indices[lo:hi]] = self.A_full.data[lo:hi]
        return col

    def refactor(self):
        self.B.refactor(self.basis)
        self.xB = self.B.ftran(self.b)
        self.xB[np.abs(self.xB) < self.tol * 1e-3] = 0.0

    def pivot(self, r: int, q: int, u: np.ndarray):
        step = self.xB[r] / u[r]
        self.xB -= step * u
        self.xB[r] = step
        self.basis[r] = q
        self.iterations += 1
        self.B.update(r, u)
        if len(self.B.etas) >= REFACTOR_EVERY:
            self.refactor()

    def run(self, c: np.ndarray, allow_artificial: bool, max_iter: int) -> str:
        """Optimise ``c`` (length n + m) starting from the current basis."""
        n, tol = self.n, self.tol
        # reduced costs carry the magnitude of c
        dtol = tol * max(1.0, float(np.abs(c).max(initial=0.0)))
        streak = 0
        ncols = n + self.m if allow_artificial else n
        while True:
            if self.iterations >= max_iter:
                return "iteration_limit"
            y = self.B.btran(c[self.basis])
            d = c[:n] - self.A.T @ y
            if allow_artificial:
                d = np.concatenate([d, c[n:] - y])
            blocked = self.basis[self.basis < ncols]
            d[blocked] = 0.0
            cand = np.flatnonzero(d < -dtol)
            if cand.size == 0:
                return "optimal"
            if streak >= DEGENERATE_STREAK:
                q = int(cand[0])
            else:
                q = int(cand[np.argmin(d[cand])])
            u = self.B.ftran(self.column(q))
            r = self._ratio(u, allow_artificial)
            if r is None:
                return "unbounded"
            streak = streak + 1 if self.xB[r] <= tol else 0
            self.pivot(r, q, u)

    def _ratio(self, u: np.ndarray, allow_artificial: bool):
        tol = self.tol
        if not allow_artificial:
            # zero-level artificials left over from phase 1 leave first
            art = np.flatnonzero((self.basis >= self.n) & (np.abs(u) > tol))
            if art.size:
                return int(art[np.argmin(self.basis[art])])
        pos = np.flatnonzero(u > tol)
        if pos.size == 0:
            return None
        ratios = np.maximum(self.xB[pos], 0.0) / u[pos]
        best = ratios.min()
        ties = pos[ratios <= best + tol]
        return int(ties[np.argmin(self.basis[ties])])


def simplex(
    c, A, b, tol: float = PIVOT_TOL, max_iter: int | None = None, start: np.ndarray | None = None
) -> SimplexResult:
    """Solve ``min c x`` subject to ``A x = b``, ``x >= 0``.

    ``A`` may be dense or scipy sparse. The returned ``multipliers`` are the
    simplex multipliers of the final basis; at optimality they solve the dual
    ``max b y  s.t.  y A <= c``. ``start`` is an optional list of ``m`` column
    indices; if it forms a nonsingular, primal feasible basis phase 1 is
    skipped, otherwise it is ignored.
    """
    c = np.asarray(c, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if max_iter is None:
        max_iter = 50 * (m + n) + 1000
    S = _Revised(A, b, tol)
    if start is not None and S.warm_start(np.asarray(start, dtype=np.int64)):
        status = S.run(np.concatenate([c, np.zeros(m)]), allow_artificial=False, max_iter=max_iter)
        S.refactor()
        return _result(S, status, c)

    phase1 = np.concatenate([np.zeros(n), np.ones(m)])
    status = S.run(phase1, allow_artificial=True, max_iter=max_iter)
    if status != "optimal":
        return _result(S, status, c)
    S.refactor()
    art = S.basis >= n
    if S.xB[art].sum() > 10 * tol * max(1.0, np.abs(b).max(initial=0.0)):
        return _result(S, "infeasible", c)

    # artificials still basic sit at level zero and never re-enter
    S.xB[art] = 0.0
    phase2 = np.concatenate([c, np.zeros(m)])
    status = S.run(phase2, allow_artificial=False, max_iter=max_iter)
    S.refactor()
    return _result(S, status, c)


def _result(S: _Revised, status: str, c: np.ndarray) -> SimplexResult:
    x = np.zeros(S.n)
    real = S.basis < S.n
    x[S.basis[real]] = np.maximum(S.xB[real], 0.0)
    cfull = np.concatenate([c, np.zeros(S.m)])
    y = S.B.btran(cfull[S.basis]) * S.flip
    return SimplexResult(status, x, float(c @ x), y, S.basis.copy(), S.iterations)
