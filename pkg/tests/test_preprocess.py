import numpy as np
import pytest
from hypothesis import given, strategies as st

from isingembed.generators import random_connected_graph
from isingembed.ising import Graph, IsingModel, all_spin_configs, brute_force_minimum, evaluate
from isingembed.preprocess import is_preprocessable, preprocess


def star(W=5.0, strengths=(1.0, -1.0, 2.0)):
    leaves = [f"x{i}" for i in range(len(strengths))]
    G = Graph(["v"] + leaves, [("v", x) for x in leaves])
    return IsingModel(G, {"v": W, **dict.fromkeys(leaves, 0.0)}, {("v", x): s for x, s in zip(leaves, strengths)})


def test_dominant_star_center_fixed():
    res = preprocess(star())
    assert res.fixed["v"] == -1
    assert res.events[0].vertex == "v" and res.events[0].incident == 4.0
    assert is_preprocessable(star()) == ["v"]


def test_weak_weight_not_fixed():
    m = star(3.0, (2.0, 2.0))
    assert preprocess(m).fixed == {}
    assert is_preprocessable(m) == []


def test_chain_cascade():
    m = IsingModel(Graph("ab", [("a", "b")]), {"a": 5.0, "b": 0.0}, {("a", "b"): 1.0})
    res = preprocess(m)
    assert res.fixed == {"a": -1, "b": 1}
    assert res.offset == -6.0
    assert res.adjustments == [("a", "b", -1.0)]
    assert res.reduced.vertices == ()
    assert brute_force_minimum(m)[0] == -6.0


def test_zero_weights_and_isolated_vertex():
    m = star(0.0, (1.0, 2.0))
    assert is_preprocessable(m) == []
    iso = IsingModel(Graph("a"), {"a": 0.0})
    assert is_preprocessable(iso) == ["a"]
    assert preprocess(iso).fixed == {"a": 1}


def test_strict_leaves_ties():
    m = IsingModel(Graph("ab", [("a", "b")]), {"a": 1.0, "b": 0.0}, {("a", "b"): 1.0})
    assert preprocess(m, strict=True).fixed == {}
    assert preprocess(m).fixed["a"] == -1


def random_dominated_model(seed, n):
    rng = np.random.default_rng(seed)
    G = random_connected_graph(n, rng)
    S = {e: float(rng.choice([-1, 1]) * rng.integers(1, 4)) for e in G.edges}
    W = {v: float(rng.integers(-6, 7)) for v in G.vertices}
    return IsingModel(G, W, S)


seeds = st.integers(0, 2**32 - 1)


@given(seeds, st.integers(1, 8), st.booleans())
def test_completion_identity(seed, n, strict):
    m = random_dominated_model(seed, n)
    res = preprocess(m, strict)
    rest = res.reduced.vertices
    for row in all_spin_configs(len(rest)):
        s = dict(zip(rest, row.tolist()))
        assert evaluate(m, res.complete(s)) - res.offset == pytest.approx(evaluate(res.reduced, s), abs=1e-9)
    orig_val, orig_min = brute_force_minimum(m)
    red_val, _ = brute_force_minimum(res.reduced)
    assert orig_val == pytest.approx(red_val + res.offset, abs=1e-9)
    # fixed spins agree with some minimiser, and with all of them when strict
    agree = [all(t[v] == x for v, x in res.fixed.items()) for t in orig_min]
    assert all(agree) if strict else any(agree)
    for ev in res.events:
        assert ev.value == (-1 if ev.weight > 0 else 1)
    for v in rest:
        w, inc = abs(res.reduced.weights[v]), res.reduced.incident_strength(v)
        assert w <= inc if strict else w < inc
