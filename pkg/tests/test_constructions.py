from __future__ import annotations

import pytest

from nconn.catalog import enumerate_up_to, named, relaxation_chain
from nconn.connectivity import two_separation_masks
from nconn.constructions import (
    add_parallel,
    add_series,
    circuit_hyperplanes,
    contract,
    decompose_two_sum,
    delete,
    direct_sum,
    extract_part,
    fresh_label,
    minor,
    parallel_connection,
    relax,
    series_connection,
    specially_relabeled,
    truncation,
    two_sum,
)
from nconn.core import dual, is_connected, uniform
from nconn.errors import (
    BadChoice,
    DegenerateBasepoint,
    DegenerateElement,
    LabelCollision,
    NotA2Separation,
    NotCircuitHyperplane,
    Overlap,
    RankZero,
    TooSmall,
    UnknownElement,
)
from nconn.isominor import isomorphic
from nconn.treedecomp import canonical_tree

from oracles import Ref


def fam(sets):
    return sorted(sorted(s) for s in sets)


def triangles(M):
    return sum(1 for c in M.circuits() if len(c) == 3)


def test_delete_contract_uniform():
    U = uniform(2, 4)
    assert isomorphic(delete(U, {"d"}), uniform(2, 3))
    assert isomorphic(contract(U, {"d"}), uniform(1, 3))


def test_contract_w2_s1():
    M = contract(named("MW(2)"), {"s1"})
    assert M.labels == ("s2", "r1", "r2")
    assert M.rank() == 1
    assert fam(M.circuits()) == [["r1", "r2"], ["r1", "s2"], ["r2", "s2"]]


def test_minor_overlap_and_unknown():
    with pytest.raises(Overlap):
        minor(uniform(2, 4), {"a"}, {"a"})
    with pytest.raises(UnknownElement):
        delete(uniform(2, 4), {"z"})


def test_minor_order_independent():
    M = named("MK4")
    assert minor(M, {"a"}, {"f"}) == delete(contract(M, {"a"}), {"f"}) == contract(delete(M, {"f"}), {"a"})


def test_minor_matches_oracle():
    M = named("Q6")
    R = Ref.of(M)
    for C, D in [({"a"}, {"b"}), ({"a", "c"}, set()), (set(), {"d", "e"}), ({"f"}, {"a", "b"})]:
        got = minor(M, C, D)
        ref = R.minor(C, D)
        assert set(got.bases()) == set(ref.bases)


def test_direct_sum_examples():
    M = direct_sum(uniform(0, 1, ["a"]), uniform(1, 1, ["b"]))
    assert M.loops() == {"a"} and M.coloops() == {"b"}
    S = direct_sum(uniform(2, 3), uniform(1, 1, ["d"]))
    assert S.rank() == 3 and S.n == 4
    with pytest.raises(LabelCollision):
        direct_sum(uniform(1, 2), uniform(1, 2))


def test_parallel_connection_two_triangles():
    P = parallel_connection(uniform(2, 3), uniform(2, 3, ["a", "d", "e"]), "a")
    assert P.n == 5 and P.rank() == 3
    assert fam(P.circuits()) == [["a", "b", "c"], ["a", "d", "e"], ["b", "c", "d", "e"]]


def test_series_connection_two_u12():
    S = series_connection(uniform(1, 2), uniform(1, 2, ["a", "c"]), "a")
    assert S.rank() == 2
    assert fam(S.circuits()) == [["a", "b", "c"]]


def test_parallel_connection_then_delete_is_two_sum():
    A, B = named("MK4"), uniform(2, 4, ["a", "x", "y", "z"])
    assert delete(parallel_connection(A, B, "a"), {"a"}) == two_sum(A, B, "a")


def test_parallel_connection_degenerate_basepoint():
    with pytest.raises(DegenerateBasepoint):
        parallel_connection(named("U(1,2)+U(1,1)"), uniform(1, 2, ["c", "d"]), "c")
    with pytest.raises(DegenerateBasepoint):
        parallel_connection(named("U(1,2)+U(0,1)"), uniform(1, 2, ["c", "d"]), "c")


def test_parallel_connection_label_collision():
    with pytest.raises(LabelCollision):
        parallel_connection(uniform(2, 3), uniform(2, 3), "a")


def test_two_sum_examples():
    T = two_sum(uniform(2, 3), uniform(2, 3, ["a", "d", "e"]), "a")
    assert isomorphic(T, uniform(3, 4))
    S = two_sum(uniform(1, 3), uniform(2, 3, ["a", "d", "e"]), "a")
    assert S.labels == ("b", "c", "d", "e") and S.rank() == 2
    assert fam(S.circuits()) == [["b", "c"], ["b", "d", "e"], ["c", "d", "e"]]


def test_two_sum_too_small():
    with pytest.raises(TooSmall):
        two_sum(uniform(1, 2), uniform(2, 3, ["a", "d", "e"]), "a")


def test_two_sum_rank():
    A, B = named("W(3)"), uniform(2, 5, ["a", "v", "w", "x", "y"])
    assert two_sum(A, B, "a").rank() == A.rank() + B.rank() - 1


def test_extract_part_examples():
    assert extract_part(uniform(3, 4), {"a", "b"}, "p") == uniform(2, 3, ["a", "b", "p"])
    assert extract_part(uniform(1, 4), {"a", "b"}, "p") == uniform(1, 3, ["a", "b", "p"])
    K = named("MK23")
    assert extract_part(K, {"a", "b"}, "p") == uniform(2, 3, ["a", "b", "p"])


def test_extract_part_rejects():
    with pytest.raises(NotA2Separation):
        extract_part(named("MK4"), {"a", "b"}, "p")
    with pytest.raises(NotA2Separation):
        extract_part(uniform(3, 4), {"a"}, "p")
    with pytest.raises(LabelCollision):
        extract_part(uniform(3, 4), {"a", "b"}, "c")


def test_reconstruction_all_connected_up_to_7():
    checked = 0
    for M in enumerate_up_to(7, connected=True):
        for x in two_separation_masks(M):
            if M.rank_table[x] + M.rank_table[M.full ^ x] - M.rank() != 1:
                continue
            d = decompose_two_sum(M, M.subset(x))
            assert d.reconstruct() == M
            assert d.reconstruct().rank() == d.part_x.rank() + d.part_y.rank() - 1
            checked += 1
    assert checked > 600


def test_add_parallel_and_series():
    assert add_parallel(uniform(1, 1), "a", "b") == uniform(1, 2)
    S = add_series(uniform(2, 3), "c", "d")
    assert fam(S.circuits()) == [["a", "b", "c", "d"]]
    assert S.rank() == 3
    M = named("MK4")
    assert delete(add_parallel(M, "a", "z"), {"z"}) == M
    assert delete(add_series(M, "a", "z"), {"z"}) != M
    assert contract(add_series(M, "a", "z"), {"z"}) == M


def test_add_degenerate():
    with pytest.raises(DegenerateElement):
        add_parallel(named("U(1,2)+U(0,1)"), "c", "z")
    with pytest.raises(DegenerateElement):
        add_series(named("U(1,2)+U(1,1)"), "c", "z")
    with pytest.raises(LabelCollision):
        add_parallel(uniform(1, 2), "a", "b")


def test_truncation_examples():
    assert truncation(uniform(3, 4)) == uniform(2, 4)
    assert truncation(uniform(2, 2)) == uniform(1, 2)
    # M(K4) is simple, so its truncation has no parallel pairs: it is U(2,6)
    T = truncation(named("MK4"))
    assert T.rank() == 2 and T.n == 6
    assert [c for c in T.circuits() if len(c) == 2] == []
    assert isomorphic(T, uniform(2, 6))
    with pytest.raises(RankZero):
        truncation(uniform(0, 2))


def test_relax_chain():
    chain = relaxation_chain()
    assert [triangles(M) for M in chain] == [4, 3, 2, 1, 0]
    assert all(M.rank() == 3 and M.n == 6 for M in chain)
    K = named("MK4")
    for c in circuit_hyperplanes(K):
        assert isomorphic(relax(K, c), named("W(3)"))


def test_relax_requires_circuit_hyperplane():
    U = uniform(2, 4)
    assert circuit_hyperplanes(U) == []
    with pytest.raises(NotCircuitHyperplane):
        relax(U, {"a", "b", "c"})


def test_relax_adds_one_basis():
    K = named("MK4")
    R = relax(K, {"a", "b", "d"})
    assert set(R.bases()) == set(K.bases()) | {frozenset("abd")}


def test_fresh_label():
    assert fresh_label(["a", "p0", "p1"]) == "p2"
    assert fresh_label([]) == "p0"


def test_specially_relabeled_mk23():
    M = named("MK23")
    T = canonical_tree(M)
    center = next(v for v, L in enumerate(T.vertices) if L.rank() == 1)
    choices = {}
    for k in T.incident_edges(center):
        _, far = T.displayed_sides(k, center)
        choices[T.edges[k][0]] = sorted(far)[0]
    target, w = specially_relabeled(M, T, center, choices)
    assert isomorphic(target, uniform(1, 3))
    assert sorted(target.labels) == sorted(choices.values())
    assert minor(M, w.contract, w.delete) == target


def test_specially_relabeled_single_vertex():
    M = named("MK4")
    T = canonical_tree(M)
    target, w = specially_relabeled(M, T, 0, {})
    assert target == M


def test_specially_relabeled_wrong_side():
    M = named("MK23")
    T = canonical_tree(M)
    center = next(v for v, L in enumerate(T.vertices) if L.rank() == 1)
    choices = {}
    for k in T.incident_edges(center):
        near, _ = T.displayed_sides(k, center)
        choices[T.edges[k][0]] = sorted(near)[0]
    with pytest.raises(BadChoice):
        specially_relabeled(M, T, center, choices)


def test_specially_relabeled_missing_choice():
    M = named("MK23")
    T = canonical_tree(M)
    center = next(v for v, L in enumerate(T.vertices) if L.rank() == 1)
    with pytest.raises(BadChoice):
        specially_relabeled(M, T, center, {})


def test_duality_of_delete_contract_exhaustive():
    for M in enumerate_up_to(6):
        for e in M.labels:
            assert dual(delete(M, {e})) == contract(dual(M), {e})


def test_every_connected_two_sum_is_connected():
    A = named("W(3)")
    B = uniform(2, 4, ["a", "w", "x", "y"])
    assert is_connected(two_sum(A, B, "a"))
