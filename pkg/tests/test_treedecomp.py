from __future__ import annotations

import json
import random

import pytest

from nconn.catalog import enumerate_up_to, named, random_composition
from nconn.connectivity import is_k_connected
from nconn.constructions import two_sum
from nconn.core import from_graph, is_binary, uniform
from nconn.errors import BadEdge, BadN, NotConnected
from nconn.isominor import has_minor_using, is_n_connected, isomorphic
from nconn.treedecomp import (
    CIRCUIT,
    COCIRCUIT,
    THREE_CONNECTED,
    canonical_tree,
    classify_vertices,
    displayed_separation,
    general_condition,
    locate_vertex,
    mk4_vertex_condition,
    path_two_sum,
    reconstruct,
    render_ascii,
    same_tree,
    tree_from_json,
    tree_to_json,
    u24_condition,
    u34_forbidden_config,
    vertex_class,
)

CONNECTED_7 = enumerate_up_to(7, connected=True)


def test_circuit_is_single_vertex():
    for n in range(2, 7):
        T = canonical_tree(uniform(n - 1, n))
        assert len(T.vertices) == 1 and T.edges == ()
        assert vertex_class(T.vertices[0]) == CIRCUIT


def test_mk4_single_vertex():
    T = canonical_tree(named("MK4"))
    assert len(T.vertices) == 1
    assert classify_vertices(T)[0].kind == THREE_CONNECTED


def test_mk23_star():
    T = canonical_tree(named("MK23"))
    info = classify_vertices(T)
    centers = [i for i in info if i.kind == COCIRCUIT]
    leaves = [i for i in info if i.kind == CIRCUIT]
    assert len(centers) == 1 and len(leaves) == 3
    c = centers[0]
    assert T.degree(c.index) == 3 and c.non_basepoints == 0
    assert all(i.non_basepoints == 2 and T.degree(i.index) == 1 for i in leaves)
    assert isomorphic(T.vertices[c.index], uniform(1, 3))
    assert all(isomorphic(T.vertices[i.index], uniform(2, 3)) for i in leaves)


def test_mk23_displayed_separations():
    T = canonical_tree(named("MK23"))
    for k in range(len(T.edges)):
        sep = displayed_separation(T, k)
        assert sorted([len(sep.side_x), len(sep.side_y)]) == [2, 4]
        assert sep.order == 1
    with pytest.raises(BadEdge):
        displayed_separation(T, 7)


def test_two_element_input():
    T = canonical_tree(uniform(1, 2))
    assert len(T.vertices) == 1 and reconstruct(T) == uniform(1, 2)


def test_not_connected():
    with pytest.raises(NotConnected):
        canonical_tree(named("U(1,2)+U(1,1)"))
    with pytest.raises(NotConnected):
        canonical_tree(uniform(1, 1))


def test_single_vertex_reconstruct():
    M = named("W(3)")
    assert reconstruct(canonical_tree(M)) == M


def test_basepoints_avoid_user_labels():
    M = uniform(3, 4, ["p0", "p1", "x", "y"])
    T = canonical_tree(two_sum(M, uniform(2, 3, ["p0", "q", "r"]), "p0"))
    assert not T.basepoints & set(T.matroid.labels)


@pytest.mark.parametrize("M", CONNECTED_7, ids=repr)
def test_tree_invariants(M):
    T = canonical_tree(M)
    assert reconstruct(T) == M
    kinds = [vertex_class(L) for L in T.vertices]
    for L, kind in zip(T.vertices, kinds):
        if kind == THREE_CONNECTED:
            assert L.n >= 4 and is_k_connected(L, 3)
        if len(T.vertices) > 1:
            assert L.n >= 3
    for k, (p, a, b) in enumerate(T.edges):
        assert set(T.vertices[a].labels) & set(T.vertices[b].labels) == {p}
        assert not (kinds[a] == kinds[b] != THREE_CONNECTED)
        for v in (a, b):
            L = T.vertices[v]
            i = L.ground.index[p]
            assert L.rank_table[1 << i] == 1
            assert L.rank_table[L.full ^ (1 << i)] == L.rank()
        assert displayed_separation(T, k).order == 1
    n = len(T.vertices)
    for u in range(n):
        for v in range(u + 1, n):
            if v not in T.neighbors(u):
                assert not set(T.vertices[u].labels) & set(T.vertices[v].labels)


def test_reconstruction_is_order_independent():
    rng = random.Random(5)
    for _ in range(20):
        M = random_composition(rng, 12)
        T = canonical_tree(M)
        order = list(range(len(T.edges)))
        rng.shuffle(order)
        assert reconstruct(T, order) == M


def test_uniqueness_randomized_orders():
    rng = random.Random(11)
    for M in CONNECTED_7[::7]:
        T0 = canonical_tree(M)
        for _ in range(5):
            assert same_tree(T0, canonical_tree(M, rng))


def test_classify_vertices_examples():
    info = classify_vertices(canonical_tree(named("MK23")), uniform(3, 4))
    assert all(i.binary for i in info)
    assert not any(i.n_connected for i in info)


def test_u24_condition_examples():
    assert u24_condition(canonical_tree(named("W(3)")))
    assert not u24_condition(canonical_tree(named("MK23")))
    M = two_sum(uniform(2, 4), uniform(2, 3, ["a", "x", "y"]), "a")
    T = canonical_tree(M)
    assert not u24_condition(T)
    assert not is_n_connected(M, uniform(2, 4))


def test_general_condition_examples():
    K = named("MK4")
    assert general_condition(canonical_tree(K), K)
    M = two_sum(K, uniform(2, 3, ["a", "x", "y"]), "a")
    T = canonical_tree(M)
    assert not general_condition(T, K)
    assert not is_n_connected(M, K)
    with pytest.raises(BadN):
        general_condition(T, uniform(2, 3))
    with pytest.raises(BadN):
        general_condition(T, named("MK23"))


def test_general_matches_u24_on_compositions():
    rng = random.Random(2)
    for _ in range(30):
        T = canonical_tree(random_composition(rng, 10))
        assert general_condition(T, uniform(2, 4)) == u24_condition(T)


def test_u34_examples():
    K = named("MK23")
    T = canonical_tree(K)
    assert u34_forbidden_config(T)
    assert is_n_connected(K, uniform(3, 4))
    assert u34_forbidden_config(canonical_tree(named("MK4")))
    # a U(2,3) leaf hanging off a cocircuit vertex that holds elements of E(M)
    M = two_sum(uniform(1, 3), uniform(2, 3, ["a", "x", "y"]), "a")
    T = canonical_tree(M)
    assert not u34_forbidden_config(T)
    assert not is_n_connected(M, uniform(3, 4))


def test_mk4_vertex_condition_examples():
    assert mk4_vertex_condition(canonical_tree(named("MK4")))
    assert not mk4_vertex_condition(canonical_tree(named("MK23")))
    # two K4's glued along an edge, the edge removed
    edges = [(1, 2, "g"), (1, 3, "a"), (1, 4, "b"), (2, 3, "c"), (2, 4, "d"), (3, 4, "e"),
             (1, 5, "h"), (1, 6, "i"), (2, 5, "j"), (2, 6, "k"), (5, 6, "l")]
    G = from_graph(edges)
    from nconn.constructions import delete

    M = delete(G, {"g"})
    T = canonical_tree(M)
    assert len(T.vertices) == 2
    assert mk4_vertex_condition(T)
    assert is_binary(M)


def test_json_roundtrip():
    T = canonical_tree(named("MK23"))
    doc = tree_to_json(T)
    text = json.dumps(doc)
    back = tree_from_json(json.loads(text))
    assert back.vertices == T.vertices and back.edges == T.edges
    assert json.dumps(tree_to_json(back)) == text


def test_render_ascii_mentions_every_vertex():
    T = canonical_tree(named("MK23"))
    text = render_ascii(T)
    assert text.count("circuit") == 4
    assert "--p0--" in text


def test_path_two_sum_minor_found():
    rng = random.Random(7)
    checked = 0
    for _ in range(40):
        M = random_composition(rng, 11)
        T = canonical_tree(M)
        if len(T.vertices) < 2:
            continue
        u, v = rng.sample(range(len(T.vertices)), 2)
        P = path_two_sum(T, u, v)
        Z = (set(T.vertices[u].labels) | set(T.vertices[v].labels)) & set(M.labels)
        w = has_minor_using(M, P, Z)
        assert w is not None and w.verify(M, P)
        checked += 1
    assert checked > 10


def test_locate_vertex_unique():
    rng = random.Random(13)
    N = uniform(2, 4)
    checked = 0
    for _ in range(60):
        M = random_composition(rng, 10)
        w = has_minor_using(M, N)
        if w is None:
            continue
        T = canonical_tree(M)
        Z = set(w.map)
        assert len(locate_vertex(T, Z)) == 1
        checked += 1
    assert checked > 5
