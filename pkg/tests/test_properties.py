from __future__ import annotations

import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from nconn.catalog import enumerate_up_to, named, random_composition
from nconn.connectivity import connectivity_function, kappa
from nconn.constructions import contract, delete, minor, two_sum
from nconn.core import clonal_classes, components, dual, is_connected
from nconn.isominor import is_n_connected, pair_relation
from nconn.treedecomp import canonical_tree, reconstruct

CLASSES = enumerate_up_to(7)
SMALL_N = [named(x) for x in ("U(1,2)", "U(2,3)", "U(1,3)", "U(2,4)", "MW(2)", "U(2,2)", "U(0,1)+U(1,1)")]

SETTINGS = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def matroids(draw, min_n=0):
    """An enumerated class under a random relabelling and element order."""
    pool = [M for M in CLASSES if M.n >= min_n]
    M = draw(st.sampled_from(pool))
    perm = draw(st.permutations(list(M.labels)))
    names = [f"e{i}" for i in range(M.n)]
    return M.relabel(dict(zip(M.labels, names))).reorder([f"e{M.labels.index(x)}" for x in perm])


def subsets(M):
    return st.integers(0, (1 << M.n) - 1).map(M.subset)


@SETTINGS
@given(st.data())
def test_rank_axioms(data):
    M = data.draw(matroids())
    X = data.draw(subsets(M))
    Y = data.draw(subsets(M))
    r = M.rank
    assert 0 <= r(X) <= len(X)
    assert r(X | Y) + r(X & Y) <= r(X) + r(Y)
    assert r(X) <= r(X | Y)


@SETTINGS
@given(matroids())
def test_dual_circuits_are_cocircuits(M):
    D = dual(M)
    assert set(D.circuits()) == set(M.cocircuits())
    assert dual(D) == M
    assert set(components(D)) == set(components(M))
    assert D.rank() == M.n - M.rank()


@SETTINGS
@given(matroids(min_n=2))
def test_clone_transposition_is_automorphism(M):
    for cls in clonal_classes(M):
        if len(cls) < 2:
            continue
        e, f = sorted(cls)[:2]
        swapped = M.relabel({e: f, f: e})
        assert swapped == M


@SETTINGS
@given(st.data())
def test_lambda_symmetry(data):
    M = data.draw(matroids())
    X = data.draw(subsets(M))
    rest = set(M.labels) - set(X)
    lam = connectivity_function(M, X)
    assert lam == connectivity_function(M, rest) == connectivity_function(dual(M), X)
    assert 0 <= lam <= min(len(X), len(rest))


@SETTINGS
@given(st.data())
def test_kappa_monotone_under_minors(data):
    M = data.draw(matroids(min_n=3))
    labels = list(M.labels)
    roles = data.draw(st.lists(st.sampled_from("ABcdk"), min_size=M.n, max_size=M.n))
    A = {x for x, t in zip(labels, roles) if t == "A"}
    B = {x for x, t in zip(labels, roles) if t == "B"}
    C = {x for x, t in zip(labels, roles) if t == "c"}
    D = {x for x, t in zip(labels, roles) if t == "d"}
    assert kappa(minor(M, C, D), A, B) <= kappa(M, A, B)


@SETTINGS
@given(st.data())
def test_minor_operations_commute(data):
    M = data.draw(matroids(min_n=2))
    e, f = data.draw(st.permutations(list(M.labels)))[:2]
    assert contract(delete(M, {e}), {f}) == delete(contract(M, {f}), {e})
    assert dual(delete(M, {e})) == contract(dual(M), {e})


@SETTINGS
@given(st.integers(0, 10**6))
def test_two_sum_rank_and_connectivity(seed):
    rng = random.Random(seed)
    A = random_composition(rng, 8)
    B = random_composition(rng, 8)
    B = B.relabel({x: "y" + x[1:] for x in B.labels})
    p = rng.choice(A.labels)
    B = B.relabel({rng.choice(B.labels): p})
    S = two_sum(A, B, p)
    assert S.rank() == A.rank() + B.rank() - 1
    assert S.n == A.n + B.n - 2
    assert is_connected(S)


@SETTINGS
@given(matroids(min_n=2), st.sampled_from(SMALL_N))
def test_n_connectivity_is_dual_invariant(M, N):
    R, RD = pair_relation(M, N), pair_relation(dual(M), dual(N))
    assert R.edges == RD.edges
    assert is_n_connected(M, N) == is_n_connected(dual(M), dual(N))


@SETTINGS
@given(st.integers(0, 10**6))
def test_tree_reconstructs_random_composition(seed):
    rng = random.Random(seed)
    M = random_composition(rng, 12)
    T = canonical_tree(M)
    assert reconstruct(T) == M
    assert all(L.n >= 3 for L in T.vertices) or len(T.vertices) == 1
