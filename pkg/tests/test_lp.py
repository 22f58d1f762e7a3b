import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from isingembed.cuts import all_subsets, connected_cuts, default_family, tree_edge_cuts
from isingembed.errors import InstanceError
from isingembed.generators import random_connected_graph, random_instance, random_tree
from isingembed.ising import Graph
from isingembed.lp import build_lp, resolved_min_check, solve_instance, solve_simplex, theta_half, to_lp_format
from isingembed.subproblem import SubproblemInstance

EDGE = Graph("ab", [("a", "b")])


def inst(sigma, lam, gamma, G=EDGE):
    return SubproblemInstance(G, sigma, lam, gamma)


def highs_theta(lp):
    """Independent solve of the same rows with scipy's HiGHS."""
    A = lp.A.toarray()
    ge = np.array([r == ">=" for r in lp.relations])
    res = linprog(
        lp.objective,
        A_ub=-A[ge], b_ub=-lp.rhs[ge],
        A_eq=A[~ge], b_eq=lp.rhs[~ge],
        bounds=[(None, None)] * A.shape[1], method="highs",
    )
    assert res.status == 0
    return res.fun


def test_two_path_rows():
    lp = build_lp(inst([1, 1], 0, 0.5), tree_edge_cuts(EDGE))
    assert len(lp) == 7
    assert lp.count("cut") == 2 and lp.count("sum") == 1 and lp.count("box+") == 2
    rows = {lab: (row, rhs) for lab, (row, _, rhs) in zip(lp.labels, lp.constraints)}
    row, rhs = rows[("cut", ("a",))]
    # sigma(S) = 1 >= theta_half = 1: theta - omega_a >= 2*1 - 1 + 0.5
    assert row.tolist() == [1, -1, 0] and rhs == 1.5


def test_small_branch_selected():
    i = inst([1, 9], 0, 0.5)
    assert theta_half(i) == 5
    lp = build_lp(i, tree_edge_cuts(EDGE))
    k = lp.labels.index(("cut", ("a",)))
    assert lp.rhs[k] == 1 + 0.5
    assert lp.rhs[lp.labels.index(("cut", ("b",)))] == 2 * 5 - 9 + 0.5


def test_singleton_lp():
    g = Graph("a")
    i = inst([3.0], 2.0, 1.0, g)
    lp = build_lp(i, default_family(g))
    assert lp.count("cut") == 0 and len(lp) == 3
    sol = solve_simplex(lp)
    assert sol.theta == 2.0 and sol.omega == {"a": 2.0}


def test_two_path_optimum():
    sol = solve_instance(inst([1, 1], 0, 0.5))
    assert sol.theta == pytest.approx(1.5, abs=1e-12)
    assert sol.omega["a"] == pytest.approx(0, abs=1e-12) and sol.omega["b"] == pytest.approx(0, abs=1e-12)
    assert sorted(sol.tight_cuts) == [("a",), ("b",)]


def test_two_path_with_weight():
    sol = solve_instance(inst([1, 1], 1, 0.5))
    assert sol.theta == pytest.approx(1.0, abs=1e-12)
    assert [sol.omega["a"], sol.omega["b"]] == pytest.approx([0.5, 0.5], abs=1e-12)


def test_resolved_min_examples():
    i = inst([1, 1], 0, 0.5)
    assert resolved_min_check(i, ["a"], {"a": 0, "b": 0}) == 1.5
    assert resolved_min_check(i, ["a"], [0, 0]) == resolved_min_check(i, ["b"], [0, 0])
    # sigma(S) = theta_half makes both arguments of the min equal
    j = inst([1, 3], 2, 0.5)
    assert theta_half(j) == 1
    w = [0.7, 1.3]
    assert 1 + w[0] == 3 - w[1]
    assert resolved_min_check(j, ["a"], w) == 1 + w[0] + 0.5
    with pytest.raises(InstanceError):
        resolved_min_check(i, ["a", "b"], [0, 0])


def test_lp_text_format():
    text = to_lp_format(build_lp(inst([1, 1], 0, 0.5), tree_edge_cuts(EDGE)))
    assert text.startswith("\\") and "Minimize" in text and text.rstrip().endswith("End")
    assert text.count(" r") >= 7 and "omega_a_ free" in text


def test_rejects_bad_family():
    with pytest.raises(InstanceError):
        build_lp(inst([1, 1], 0, 0.5), tree_edge_cuts(Graph("xy", [("x", "y")])))


seeds = st.integers(0, 2**32 - 1)


def rand_inst(seed, n, tree=False, gamma=1.0):
    rng = np.random.default_rng(seed)
    G = random_tree(n, rng) if tree else random_connected_graph(n, rng)
    return random_instance(G, rng, gamma=gamma)


@given(seeds, st.integers(2, 6))
def test_branch_consistency(seed, n):
    i = rand_inst(seed, n)
    rng = np.random.default_rng(seed + 7)
    omega = rng.normal(0, 2, n)
    omega += (i.lam - omega.sum()) / n
    fam = all_subsets(i.graph)
    lp = build_lp(i, fam)
    theta_req = [resolved_min_check(i, S, omega) for S in fam.subsets()]
    for theta in rng.uniform(-5, 15, 6).tolist() + theta_req:
        x = np.concatenate([[theta], omega])
        lhs = (lp.A @ x)[: len(fam)]
        for k, req in enumerate(theta_req):
            # same inequality up to rounding
            if abs(theta - req) > 1e-9:
                assert (lhs[k] >= lp.rhs[k]) == (theta >= req)


@given(seeds, st.integers(2, 7), st.sampled_from([0.1, 1.0]))
def test_matches_highs_on_every_family(seed, n, gamma):
    i = rand_inst(seed, n, gamma=gamma)
    for fam in (all_subsets(i.graph), connected_cuts(i.graph)):
        lp = build_lp(i, fam)
        assert solve_simplex(lp).theta == pytest.approx(highs_theta(lp), abs=1e-7)


@given(seeds, st.integers(2, 8))
def test_redundancy(seed, n):
    i = rand_inst(seed, n)
    t_all = solve_instance(i, all_subsets(i.graph)).theta
    t_conn = solve_instance(i, connected_cuts(i.graph)).theta
    assert t_all == pytest.approx(t_conn, abs=1e-6)


@given(seeds, st.integers(2, 10))
def test_tree_family_equivalence(seed, n):
    i = rand_inst(seed, n, tree=True)
    assert solve_instance(i, tree_edge_cuts(i.graph)).theta == pytest.approx(
        solve_instance(i, connected_cuts(i.graph)).theta, abs=1e-6
    )


@given(seeds, st.integers(2, 8), st.sampled_from([0.5, 2.0, 10.0]))
def test_homogeneity(seed, n, c):
    i = rand_inst(seed, n)
    t = solve_instance(i).theta
    assert solve_instance(i.scaled(c)).theta == pytest.approx(c * t, rel=1e-9, abs=1e-9)


@given(seeds, st.integers(2, 8))
def test_gap_monotonicity(seed, n):
    i = rand_inst(seed, n)
    thetas = [solve_instance(i.with_gamma(g)).theta for g in (0.1, 0.5, 1.0, 2.0)]
    assert all(b >= a - 1e-9 for a, b in itertools.pairwise(thetas))


@given(seeds, st.integers(2, 8))
def test_solution_meets_unresolved_constraints(seed, n):
    i = rand_inst(seed, n)
    sol = solve_instance(i)
    omega = sol.omega_array(i.graph.vertices)
    assert omega.sum() == pytest.approx(i.lam, abs=1e-9)
    assert sol.theta >= np.abs(omega).max() - 1e-9
    for S in connected_cuts(i.graph).subsets():
        assert sol.theta >= resolved_min_check(i, S, omega) - 1e-9
