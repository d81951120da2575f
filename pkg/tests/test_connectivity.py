from __future__ import annotations

import itertools

import pytest

from nconn.catalog import enumerate_up_to, heredity_constructions, named
from nconn.connectivity import (
    Fan,
    check_special_fan_lemma,
    connectivity_function,
    find_fans,
    hereditary_removal_check,
    is_fan,
    is_k_connected,
    is_special_fan,
    is_transitive,
    kappa,
    reduce_preserving,
    search_transitivity_counterexample,
    two_separations,
)
from nconn.constructions import direct_sum, minor
from nconn.core import dual, is_connected, is_simple, uniform
from nconn.errors import Overlap, PreconditionFailed, TooSmall
from nconn.isominor import is_n_connected

from oracles import Ref


def test_lambda_examples():
    for M in (named("MK4"), uniform(2, 4), named("MW(2)")):
        assert connectivity_function(M, ()) == 0
    assert connectivity_function(named("U(1,2)+U(1,1)"), {"c"}) == 0
    U = uniform(2, 4)
    assert {connectivity_function(U, p) for p in itertools.combinations(U.labels, 2)} == {2}


def test_lambda_identities_exhaustive():
    for M in enumerate_up_to(7):
        D = dual(M)
        t, td = M.rank_table, D.rank_table
        for x in range(1 << M.n):
            lam = t[x] + t[M.full ^ x] - t[M.full]
            assert lam == t[x] + td[x] - bin(x).count("1")
            assert lam == td[x] + td[M.full ^ x] - td[M.full]


def test_lambda_matches_oracle():
    M = named("Q6")
    R = Ref.of(M)
    E = set(M.labels)
    for k in range(M.n + 1):
        for X in itertools.combinations(M.labels, k):
            assert connectivity_function(M, X) == R.rank(X) + R.rank(E - set(X)) - R.r


def test_kappa_examples():
    U = uniform(2, 4)
    assert kappa(U, {"a"}, {"b"}) == 1
    M = named("MK23")
    for A, B in [({"a"}, {"c"}), ({"a", "b"}, {"e"}), ({"c"}, {"d", "f"})]:
        assert kappa(M, A, B) == kappa(M, B, A)
    with pytest.raises(Overlap):
        kappa(U, {"a"}, {"a", "b"})


def test_kappa_by_exhaustion_matches_definition():
    M = named("W(3)")
    labels = M.labels
    for A, B in [({"a"}, {"f"}), ({"a", "b"}, {"c"}), ((), ())]:
        rest = [x for x in labels if x not in A and x not in B]
        best = min(
            connectivity_function(M, set(A) | set(S))
            for k in range(len(rest) + 1)
            for S in itertools.combinations(rest, k)
        )
        assert kappa(M, A, B) == best


def test_two_separations_u34():
    seps = two_separations(uniform(3, 4))
    assert len(seps) == 3
    assert all(len(s.side_x) == 2 and len(s.side_y) == 2 and s.order == 1 and s.exact for s in seps)


def test_k_connectivity_examples():
    assert is_k_connected(named("MK4"), 3)
    assert not is_k_connected(named("MK23"), 3)
    assert is_k_connected(named("MK23"), 2)
    assert is_k_connected(uniform(2, 3), 3)
    assert not is_k_connected(named("U(1,2)+U(1,1)"), 2)


def test_fans_w2():
    W = named("MW(2)")
    fans = find_fans(W)
    assert any(f.ordering == ("s1", "s2", "r1", "r2") for f in fans)
    assert is_fan(W, ("s1", "s2", "r1", "r2"))
    assert is_special_fan(W, ("s1", "s2", "r1", "r2"))
    assert W.mask({"r1", "r2"}) in W.circuit_masks()
    assert not is_special_fan(W, ("s1", "r1", "s2", "r2"))


def reference_fans(M):
    """All fan orderings from the set-based circuit and cocircuit lists."""
    R = Ref.of(M)
    tri = {c for c in R.circuits() if len(c) == 3}
    triad = {c for c in R.cocircuits() if len(c) == 3}
    out = set()
    for k in range(3, M.n + 1):
        for seq in itertools.permutations(M.labels, k):
            steps = [frozenset(seq[i:i + 3]) for i in range(k - 2)]
            if not all(s in tri or s in triad for s in steps):
                continue
            ok = all(
                (a not in tri or b in triad) and (a not in triad or b in tri)
                for a, b in zip(steps, steps[1:])
            )
            if ok:
                out.add(seq)
    return out


def test_fans_u24_every_ordering():
    # every 3-subset of U(2,4) is both a triangle and a triad
    fans = find_fans(uniform(2, 4))
    assert len(fans) == 12
    assert all(len(f.ordering) == 4 for f in fans)


@pytest.mark.parametrize("name", ["MW(2)", "MK4", "W(3)", "MK23", "U(2,4)", "Q6", "MW(3)"])
def test_fans_match_reference(name):
    M = named(name)
    ref = reference_fans(M)
    assert all(is_fan(M, seq) for seq in ref)
    maximal = {
        s for s in ref
        if not any(len(t) == len(s) + 1 and (t[:-1] == s or t[1:] == s) for t in ref)
    }
    got = {f.ordering for f in find_fans(M)}
    assert got == {min(s, s[::-1], key=lambda q: [M.labels.index(x) for x in q]) for s in maximal}


def test_fans_mk4_lengths():
    fans = find_fans(named("MK4"))
    assert fans
    assert max(len(f.ordering) for f in fans) == 6
    for f in fans:
        assert isinstance(f, Fan)
        assert is_fan(named("MK4"), f.ordering)


def test_fans_reported_once_up_to_reversal():
    fans = find_fans(named("MK4"))
    orders = {f.ordering for f in fans}
    for o in orders:
        assert o == o[::-1] or o[::-1] not in orders


def test_fan_lemma_examples():
    W = named("MW(2)")
    rep = check_special_fan_lemma(W)
    assert rep.ok and rep.applicable > 0
    S = direct_sum(W, uniform(1, 1, ["z"]))
    rep = check_special_fan_lemma(S)
    assert rep.ok and rep.applicable > 0


def test_fan_lemma_exhaustive():
    for M in enumerate_up_to(7):
        assert check_special_fan_lemma(M).ok


def test_transitivity_examples():
    assert is_transitive(named("U(1,2)+U(1,1)"), uniform(2, 2)) == ("a", "c", "b")
    for M in enumerate_up_to(6):
        if M.n >= 2:
            assert is_transitive(M, uniform(1, 2)) is None
            assert is_transitive(M, named("MW(2)")) is None
    with pytest.raises(TooSmall):
        is_transitive(uniform(1, 1), uniform(1, 2))


def test_search_transitivity_counterexample():
    hit = search_transitivity_counterexample(uniform(2, 2))
    assert hit.matroid.n == 3
    assert hit.triple == ("a", "c", "b")
    hit = search_transitivity_counterexample(uniform(2, 3))
    assert hit is not None and is_transitive(hit.matroid, uniform(2, 3)) == hit.triple
    assert search_transitivity_counterexample(uniform(1, 2), max_n=6) is None


def test_search_with_explicit_universe():
    universe = [("mine", named("U(1,2)+U(1,1)"))]
    assert search_transitivity_counterexample(uniform(2, 2), universe).source == "mine"
    assert search_transitivity_counterexample(uniform(1, 2), universe) is None


def test_heredity_u22_simple():
    for M in enumerate_up_to(6):
        if M.n > 2 and is_simple(M) and M.rank() >= 2:
            assert hereditary_removal_check(M, uniform(2, 2)).ok


def test_heredity_u12_connected():
    for M in enumerate_up_to(6, connected=True):
        if M.n >= 3:
            assert hereditary_removal_check(M, uniform(1, 2)).ok


def test_heredity_u23_m4_fails():
    N = uniform(2, 3)
    M4 = next(c.matroid for c in heredity_constructions(N) if c.step.startswith("heredity:M4"))
    assert is_n_connected(M4, N)
    rep = hereditary_removal_check(M4, N)
    assert rep.failures
    for e in rep.failures:
        assert not is_n_connected(minor(M4, (), {e}), N)
        assert not is_n_connected(minor(M4, {e}, ()), N)


def test_heredity_preconditions():
    with pytest.raises(PreconditionFailed):
        hereditary_removal_check(uniform(2, 4), named("MW(2)"))
    with pytest.raises(PreconditionFailed):
        hereditary_removal_check(uniform(1, 2), uniform(1, 2))


def test_reduce_preserving():
    M = uniform(2, 5)
    out = reduce_preserving(M, uniform(2, 3), ["a"])
    assert out is not None and out.n == 4 and is_n_connected(out, uniform(2, 3))
    assert reduce_preserving(uniform(2, 3), uniform(2, 3), ["a"]) is None
    assert reduce_preserving(M, uniform(2, 3), []) == M


def test_n_connectivity_composes_over_catalog():
    names = ["U(1,2)", "U(2,3)", "U(1,3)", "U(2,4)", "MW(2)", "U(3,4)", "U(1,4)", "MK4", "W(3)", "MK23"]
    cat = {n: named(n) for n in names}
    for a, b, c in itertools.permutations(names, 3):
        M, N, P = cat[a], cat[b], cat[c]
        if M.n >= 2 and N.n >= 2 and is_n_connected(M, N) and is_n_connected(N, P):
            assert is_n_connected(M, P), (a, b, c)


def test_connected_means_u12_connected():
    for M in enumerate_up_to(6):
        assert is_connected(M) == is_n_connected(M, uniform(1, 2))
