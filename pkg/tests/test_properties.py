import itertools

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from signlink import cover as cv
from signlink.graph import bfs_spanning_forest, build_graph, path_sign_product, tree_path_edges
from signlink.io import format_edge_list, loads_edge_list
from signlink.oracles import delta2_exact, delta_exact
from signlink.treepredict import flip_bound_rhs, tree_learner_run


@st.composite
def signed_graphs(draw, max_n=7, connected=False):
    n = draw(st.integers(2 if connected else 1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = set()
    if connected:
        for k in range(1, n):
            chosen.add((draw(st.integers(0, k - 1)), k))
    extra = draw(st.lists(st.sampled_from(pairs), max_size=len(pairs))) if pairs else []
    chosen.update(extra)
    edges = sorted(chosen)
    signs = draw(st.lists(st.sampled_from([-1, 1]), min_size=len(edges), max_size=len(edges)))
    return build_graph(n, [(a, b, s) for (a, b), s in zip(edges, signs)])


@settings(max_examples=60, deadline=None)
@given(signed_graphs())
def test_oracles_match_brute(g):
    assert delta_exact(g).cost == brute.delta(g.n, g.edges)
    assert delta2_exact(g).cost == brute.delta2(g.n, g.edges)


@settings(max_examples=60, deadline=None)
@given(signed_graphs(max_n=8, connected=True))
def test_path_product_composes(g):
    t = bfs_spanning_forest(g)
    for i, j, k in itertools.combinations(range(g.n), 3):
        assert path_sign_product(t, i, j) * path_sign_product(t, j, k) == path_sign_product(t, i, k)
        assert path_sign_product(t, i, j) == int(np.prod(g.sign[tree_path_edges(t, i, j)]))


@settings(max_examples=60, deadline=None)
@given(signed_graphs(max_n=9, connected=True), st.floats(0.5, 4), st.integers(1, 6))
def test_cover_valid_and_flip_bounded(g, rho, theta):
    c = cv.scccc(g, rho, theta)
    assert cv.verify_cover(c, g) == []
    # relative to the balanced labeling induced by the tree, every edge off it is a flip
    t = bfs_spanning_forest(g)
    base = np.array([path_sign_product(t, int(a), int(b)) for a, b in zip(g.u, g.v)])
    flips = np.flatnonzero(base != g.sign)
    assert cv.cover_mistakes(c, g.sign) <= cv.flip_load(c, flips)


@settings(max_examples=60, deadline=None)
@given(signed_graphs(max_n=9, connected=True), st.data())
def test_tree_learner_within_flip_bound(g, data):
    base_sides = np.array(data.draw(st.lists(st.sampled_from([-1, 1]), min_size=g.n, max_size=g.n)))
    base = np.where(base_sides[g.u] == base_sides[g.v], 1, -1)
    flips = np.flatnonzero(base != g.sign)
    t = bfs_spanning_forest(g)
    assert tree_learner_run(g, g.sign, tree=t).mistakes <= flip_bound_rhs(t, g, flips)


@settings(max_examples=40, deadline=None)
@given(signed_graphs(max_n=10))
def test_edge_list_roundtrip(g):
    h, names = loads_edge_list(format_edge_list(g))
    assert h.n == g.n and h.edges == g.edges and names == [str(k) for k in range(g.n)]
