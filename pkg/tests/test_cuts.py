import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from isingembed.cuts import all_subsets, connected_cuts, default_family, is_tree, tree_edge_cuts
from isingembed.errors import SizeError, StructureError
from isingembed.generators import random_connected_graph, random_tree
from isingembed.ising import Graph, is_connected

PATH = Graph("abc", [("a", "b"), ("b", "c")])
TRIANGLE = Graph("abc", [("a", "b"), ("b", "c"), ("a", "c")])
STAR = Graph("mxy", [("m", "x"), ("m", "y")])


def fam(*sets):
    return {frozenset(s) for s in sets}


def test_all_subsets_counts():
    assert len(all_subsets(Graph("ab", [("a", "b")]))) == 2
    assert len(all_subsets(TRIANGLE)) == 6
    f = all_subsets(PATH)
    k = f.subsets().index(("b",))
    assert f.cut_sizes[k] == 2


def test_connected_cut_examples():
    assert connected_cuts(PATH).as_set() == fam("a", "c", "ab", "bc")
    assert connected_cuts(TRIANGLE).as_set() == all_subsets(TRIANGLE).as_set()
    assert connected_cuts(STAR).as_set() == fam("x", "y", "mx", "my")


def test_tree_edge_cut_examples():
    assert tree_edge_cuts(PATH).as_set() == fam("a", "bc", "ab", "c")
    assert tree_edge_cuts(Graph("ab", [("a", "b")])).as_set() == fam("a", "b")
    assert tree_edge_cuts(STAR).as_set() == fam("x", "my", "y", "mx")
    with pytest.raises(StructureError):
        tree_edge_cuts(TRIANGLE)


def test_default_family_picks_tree_path():
    assert default_family(PATH).kind == "tree"
    assert default_family(TRIANGLE).kind == "connected"


def test_size_guard():
    G = random_connected_graph(8, np.random.default_rng(0))
    with pytest.raises(SizeError):
        all_subsets(G, limit=6)
    with pytest.raises(SizeError):
        connected_cuts(G, limit=6)


def brute_connected(G):
    """Filter every proper subset by two independent connectivity checks."""
    out = set()
    V = G.vertices
    for k in range(1, len(V)):
        for S in itertools.combinations(V, k):
            rest = [v for v in V if v not in S]
            if is_connected(S, G.edges) and is_connected(rest, G.edges):
                out.add(frozenset(S))
    return out


seeds = st.integers(0, 2**32 - 1)


@given(seeds, st.integers(2, 9), st.floats(0, 1))
def test_connected_cuts_match_brute_filter(seed, n, p):
    G = random_connected_graph(n, np.random.default_rng(seed), p=p)
    f = connected_cuts(G)
    assert f.as_set() == brute_connected(G)
    assert len(f.as_set()) == len(f)
    comp = {frozenset(G.vertices) - S for S in f.as_set()}
    assert comp == f.as_set()


@given(seeds, st.integers(2, 12))
def test_tree_cuts_equal_connected_cuts(seed, n):
    T = random_tree(n, np.random.default_rng(seed))
    assert is_tree(T)
    f = tree_edge_cuts(T)
    assert len(f) == 2 * n - 2
    assert (f.cut_sizes == 1).all()
    assert f.as_set() == connected_cuts(T).as_set()


@given(seeds, st.integers(2, 8), st.floats(0, 1))
def test_cut_sizes_count_crossing_edges(seed, n, p):
    G = random_connected_graph(n, np.random.default_rng(seed), p=p)
    f = all_subsets(G)
    for S, size in zip(f.subsets(), f.cut_sizes):
        assert size == sum((a in S) != (b in S) for a, b in G.edges)
