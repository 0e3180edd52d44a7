import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liphom import (
    GraphError,
    ball,
    build_graph,
    gen_random_bipartite_regular,
    gen_random_regular,
    gen_tree,
    graph_from_text,
    graph_to_text,
)
from liphom.graphs import (
    boundary,
    component_in_square,
    count_connected_sets,
    distances_from,
    neighborhood,
    square_neighbors,
)

from .conftest import c4, k4


def test_build_rejects_self_loops_and_duplicates():
    with pytest.raises(GraphError):
        build_graph(2, [(0, 0)])
    with pytest.raises(GraphError):
        build_graph(2, [(0, 1), (1, 0)])


def test_build_rejects_bad_bipartition():
    with pytest.raises(GraphError):
        build_graph(3, [(0, 1), (1, 2), (0, 2)], bipartition=([0, 2], [1]))


def test_k4_degree_and_edges():
    g = k4()
    assert g.degree == 3
    assert g.n_edges == 6


@given(st.integers(0, 2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_gen_random_regular_valid(seed):
    g = gen_random_regular(8, 3, seed)
    assert g.degree == 3
    assert all(len(set(g.adj[v])) == 3 for v in range(g.n))
    assert all(v not in g.adj[v] for v in range(g.n))
    assert min(distances_from(g, 0)) >= 0  # connected


@given(st.integers(0, 2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_gen_bipartite_regular_valid(seed):
    g = gen_random_bipartite_regular(6, 3, seed)
    assert g.degree == 3
    assert g.bipartition is not None
    v0, v1 = g.bipartition
    assert len(v0) == len(v1) == 6
    for u in range(g.n):
        side = v0 if u in v0 else v1
        assert all(w not in side for w in g.adj[u])


def test_gen_regular_determinism():
    a = gen_random_regular(20, 4, 11)
    b = gen_random_regular(20, 4, 11)
    assert a.adj == b.adj


def test_gen_regular_parity_error():
    with pytest.raises(GraphError):
        gen_random_regular(5, 3, 0)


def test_tree_shape():
    t = gen_tree(3, 2)
    # root degree 3, internal degree 3, leaves degree 1
    assert t.n == 10
    assert len(t.adj[t.root]) == 3
    assert len(t.leaves) == 6
    assert all(len(t.adj[v]) == 1 for v in t.leaves)
    inner = set(range(t.n)) - set(t.leaves)
    assert all(len(t.adj[v]) == 3 for v in inner)


def test_glued_tree_degrees():
    gt = gen_tree(3, 2, glued=True)
    assert gt.glue is not None
    # glue vertex degree d(d-1)^{h-1} = 6
    assert len(gt.adj[gt.glue]) == 6
    inner = set(range(gt.n)) - {gt.glue}
    assert all(len(gt.adj[v]) == 3 for v in inner)


def test_ball_examples():
    g = k4()
    assert ball(g, 1, 0) == frozenset({1})
    assert ball(g, 1, 1) == frozenset(range(4))
    t = gen_tree(3, 2)
    assert len(ball(t, t.root, 1)) == 4


def test_boundary_examples():
    g = c4()
    _, bd, bd2 = boundary(g, {0})
    assert bd == frozenset({1, 3})
    assert bd2 == frozenset({2})
    g = k4()
    _, bd, bd2 = boundary(g, {0})
    assert bd == frozenset({1, 2, 3})
    assert bd2 == frozenset()
    t = gen_tree(3, 2)
    _, bd, _ = boundary(t, {t.root})
    assert len(bd) == 3 > (3 - 2) * 1


def test_square_component():
    g = c6()
    assert square_neighbors(g, 0) == frozenset({1, 2, 4, 5})
    comp = component_in_square(g, 0, {0, 2, 3})
    assert comp == frozenset({0, 2, 3})
    comp = component_in_square(g, 0, {0, 3})
    assert comp == frozenset({0})


def c6():
    return build_graph(
        6,
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)],
        bipartition=([0, 2, 4], [1, 3, 5]),
    )


def test_count_connected_sets_trivial():
    g = k4()
    assert count_connected_sets(g, 0, 1) == 1
    # K4: connected 2-sets through vertex 0 are {0,1},{0,2},{0,3}
    assert count_connected_sets(g, 0, 2) == 3


def test_text_roundtrip():
    for g in (k4(), c4(), gen_tree(3, 2)):
        text = graph_to_text(g)
        h = graph_from_text(text)
        assert h.n == g.n
        assert h.adj == g.adj


def test_text_bipartite_header():
    g = c4()
    text = graph_to_text(g)
    # V0 = {0,2} is not contiguous, so no bipartite header is written
    assert "bipartite" not in text
    from .conftest import k33

    assert "bipartite 3" in graph_to_text(k33())
