import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from isingembed.embedding import Embedding, build_embedded_structure
from isingembed.errors import PreprocessableError
from isingembed.generators import k3_into_c4, random_connected_graph, random_embedding, random_model
from isingembed.ising import Graph, IsingModel, c_max
from isingembed.oracle import synchronized_identity_error, verify_solution_gap
from isingembed.setter import baseline_uniform, report, set_parameters


def test_identity_embedding_reproduces_model():
    G = Graph("abc", [("a", "b"), ("b", "c")])
    m = IsingModel(G, {"a": 0.5, "b": -0.3, "c": 0.0}, {("a", "b"): 1.0, ("b", "c"): -2.0})
    emb = set_parameters(m, G, Embedding.identity(G), 0.5)
    assert emb.model == m and emb.offset == 0
    assert report(emb)["c_max"] == c_max(m)
    base = baseline_uniform(m, G, Embedding.identity(G), 2.0)
    assert base.model == m


def test_k3_c4_composition():
    model, H, phi = k3_into_c4()
    emb = set_parameters(model, H, phi, 0.5)
    assert emb.records["w"].theta == pytest.approx(1.5, abs=1e-12)
    assert emb.records["u"].theta is None
    assert emb.model.strengths[("p3", "p4")] == pytest.approx(-1.5, abs=1e-12)
    assert emb.offset == pytest.approx(1.5, abs=1e-12)
    assert report(emb)["c_max"] == pytest.approx(1.5, abs=1e-12)
    base = baseline_uniform(model, H, phi, 2.0)
    assert base.model.strengths[("p3", "p4")] == -2.0
    assert report(base)["c_max"] == 2.0


def test_negative_weight_flips_omega():
    # phi_v = {a, b}, each touching one unit inter edge; W_v = -1
    G = Graph("vxy", [("v", "x"), ("v", "y")])
    H = Graph(["a", "b", "x", "y"], [("a", "b"), ("a", "x"), ("b", "y")])
    m = IsingModel(G, {"v": -1.0, "x": 0.0, "y": 0.0}, {("v", "x"): 1.0, ("v", "y"): -1.0})
    emb = set_parameters(m, H, Embedding({"v": ["a", "b"], "x": ["x"], "y": ["y"]}), 0.5)
    assert emb.records["v"].instance.lam == 1.0
    assert [emb.model.weights["a"], emb.model.weights["b"]] == pytest.approx([-0.5, -0.5], abs=1e-12)
    assert all(r.passed for r in verify_solution_gap(emb).values())


def test_refuses_preprocessable():
    G = Graph("ab", [("a", "b")])
    m = IsingModel(G, {"a": 2.0, "b": 0.0}, {("a", "b"): 1.0})
    with pytest.raises(PreprocessableError):
        set_parameters(m, G, Embedding.identity(G), 1.0)


def test_baseline_factor_two_sets_all_intra():
    G = Graph("uv", [("u", "v")])
    H = Graph(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d")])
    m = IsingModel(G, {"u": 0.0, "v": 0.0}, {("u", "v"): 1.0})
    base = baseline_uniform(m, H, Embedding({"u": ["a", "b"], "v": ["c", "d"]}), 2.0)
    assert base.model.strengths[("a", "b")] == -2 and base.model.strengths[("c", "d")] == -2


def test_surplus_intra_edges_get_zero():
    G = Graph("uv", [("u", "v")])
    H = Graph(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")])
    m = IsingModel(G, {"u": 0.0, "v": 0.0}, {("u", "v"): -1.0})
    emb = set_parameters(m, H, Embedding({"u": ["a", "b", "c"], "v": ["d"]}), 1.0)
    zeros = [e for e in emb.records["u"].instance.graph.edges]
    assert len(zeros) == 2
    assert emb.model.strengths[("b", "c")] == 0.0


def test_gamma_overrides():
    model, H, phi = k3_into_c4()
    emb = set_parameters(model, H, phi, 0.5, gamma_overrides={"w": 1.0})
    assert emb.records["w"].theta == pytest.approx(2.0, abs=1e-12)


seeds = st.integers(0, 2**32 - 1)


@given(seeds, st.integers(2, 5), st.booleans(), st.sampled_from(["uniform-split", "single-edge"]))
def test_sum_conditions_and_identity(seed, n, tree, strategy):
    rng = np.random.default_rng(seed)
    G = random_connected_graph(n, rng)
    m = random_model(G, rng)
    H, phi = random_embedding(G, rng)
    emb = set_parameters(m, H, phi, 0.5, strategy, use_spanning_tree=tree)
    s = build_embedded_structure(G, H, phi)
    for v in G.vertices:
        assert math.fsum(emb.model.weights[q] for q in phi[v]) == pytest.approx(m.weights[v], abs=1e-9)
    for oe, fam in s.inter.items():
        assert math.fsum(emb.model.strengths[e] for e in fam) == pytest.approx(m.strengths[oe], abs=1e-12)
    assert synchronized_identity_error(emb) <= 1e-9


@given(seeds, st.integers(2, 5))
def test_optimal_c_max_not_above_passing_baseline(seed, n):
    rng = np.random.default_rng(seed)
    G = random_connected_graph(n, rng)
    m = random_model(G, rng)
    H, phi = random_embedding(G, rng)
    gamma = 0.1
    emb = set_parameters(m, H, phi, gamma)
    factor = 2.0
    if factor * c_max(m) >= max(emb.thetas.values(), default=0.0):
        base = baseline_uniform(m, H, phi, factor)
        intra = build_embedded_structure(G, H, phi).intra_edges()
        strongest = [max((abs(x.model.strengths[e]) for e in intra), default=0.0) for x in (emb, base)]
        assert strongest[0] <= strongest[1] + 1e-9
