import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from isingembed.simplex import simplex


def test_small_lp():
    # min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
    A = np.array([[1, 2, 1, 0], [3, 1, 0, 1]], dtype=float)
    res = simplex([-1, -1, 0, 0], A, [4, 6])
    assert res.status == "optimal"
    assert res.x[:2] == pytest.approx([1.6, 1.2])
    assert res.objective == pytest.approx(-2.8)
    # multipliers solve the dual
    assert res.multipliers @ np.array([4, 6]) == pytest.approx(-2.8)


def test_infeasible_and_unbounded():
    A = np.array([[1.0, 1.0]])
    assert simplex([1, 1], A, [-1]).status == "infeasible"
    assert simplex([-1, 0], np.array([[1.0, -1.0]]), [0]).status == "unbounded"


def test_degenerate_cycling_example():
    # Beale's example cycles under plain Dantzig pricing with naive ties
    A = np.array([
        [0.25, -60, -1 / 25, 9, 1, 0, 0],
        [0.5, -90, -1 / 50, 3, 0, 1, 0],
        [0, 0, 1, 0, 0, 0, 1],
    ])
    c = [-0.75, 150, -1 / 50, 6, 0, 0, 0]
    res = simplex(c, A, [0, 0, 1])
    assert res.status == "optimal"
    assert res.objective == pytest.approx(-0.05)


@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(1, 12))
def test_matches_highs(seed, m, extra):
    rng = np.random.default_rng(seed)
    n = m + extra
    A = rng.integers(-3, 4, (m, n)).astype(float)
    x0 = rng.uniform(0, 2, n) * (rng.random(n) < 0.7)
    b = A @ x0  # feasible by construction
    c = rng.integers(-2, 5, n).astype(float)
    ref = linprog(c, A_eq=A, b_eq=b, bounds=[(0, None)] * n, method="highs")
    for mat in (A, sp.csc_matrix(A)):
        res = simplex(c, mat, b)
        if ref.status == 3:
            assert res.status == "unbounded"
            continue
        assert ref.status == 0
        assert res.status == "optimal"
        assert res.objective == pytest.approx(ref.fun, abs=1e-7 * max(1, abs(ref.fun)))
        assert A @ res.x == pytest.approx(b, abs=1e-7)
        assert (res.x >= -1e-9).all()


def test_warm_start_and_fallback():
    A = np.array([[1, 2, 1, 0], [3, 1, 0, 1]], dtype=float)
    c, b = [-1, -1, 0, 0], [4, 6]
    cold = simplex(c, A, b)
    # slack basis is feasible; a singular or infeasible start is ignored
    for start in ([2, 3], [0, 0], [0, 2], [7, 1]):
        res = simplex(c, A, b, start=start)
        assert res.status == "optimal" and res.objective == pytest.approx(cold.objective)
    assert simplex(c, A, b, start=[2, 3]).iterations <= cold.iterations
