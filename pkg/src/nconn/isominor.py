"""Isomorphism testing and minor search with prescribed elements.

Minor search normalises every candidate to ``M / C \\ D`` with ``C``
independent and ``D`` coindependent, so ``|C| = r(M) - r(N)`` and
``|D| = r*(M) - r*(N)``.  Whether a candidate minor is isomorphic to ``N`` is
decided by a single set lookup: the candidate's basis-indicator signature
(one bit per ``r(N)``-subset of its ground set, in lexicographic order) is
looked up among the signatures of all relabellings of ``N``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from . import kernels
from .constructions import minor_masks
from .core import Matroid, Subset, bits, dual, popcount
from .errors import BadSize, TooSmall, UnknownElement

# Above this many elements N's relabelling orbit is not tabulated.
ORBIT_LIMIT = 8


@dataclass(frozen=True)
class Fingerprint:
    rank: int
    corank: int
    size: int
    circuit_sizes: tuple[int, ...]
    cocircuit_sizes: tuple[int, ...]
    element_profiles: tuple[tuple, ...]


def element_profiles(M: Matroid) -> list[tuple]:
    """Per-element isomorphism invariant, in ground-set order."""

    def compute():
        n = M.n
        circ = [Counter() for _ in range(n)]
        for c in M.circuit_masks():
            k = popcount(c)
            for i in bits(c):
                circ[i][k] += 1
        cocirc = [Counter() for _ in range(n)]
        for c in M.cocircuit_masks():
            k = popcount(c)
            for i in bits(c):
                cocirc[i][k] += 1
        nbases = [0] * n
        for b in M.basis_masks():
            for i in bits(b):
                nbases[i] += 1
        return [
            (nbases[i], tuple(sorted(circ[i].items())), tuple(sorted(cocirc[i].items())))
            for i in range(n)
        ]

    return M._memo("profiles", compute)


def fingerprint(M: Matroid) -> Fingerprint:
    def compute():
        return Fingerprint(
            rank=M.rank(),
            corank=M.n - M.rank(),
            size=M.n,
            circuit_sizes=tuple(sorted(popcount(c) for c in M.circuit_masks())),
            cocircuit_sizes=tuple(sorted(popcount(c) for c in M.cocircuit_masks())),
            element_profiles=tuple(sorted(element_profiles(M))),
        )

    return M._memo("fingerprint", compute)


def isomorphic(M: Matroid, N: Matroid) -> Optional[dict[str, str]]:
    """A rank-preserving bijection ``E(M) -> E(N)``, or None."""
    if fingerprint(M) != fingerprint(N):
        return None
    pm, pn = element_profiles(M), element_profiles(N)
    cand: dict[tuple, list[int]] = {}
    for j, prof in enumerate(pn):
        cand.setdefault(prof, []).append(j)
    order = sorted(range(M.n), key=lambda i: (len(cand[pm[i]]), i))
    tm, tn = M.rank_table, N.rank_table
    used = [False] * N.n
    image = [0] * M.n

    def extend(k: int, pairs: list[tuple[int, int]]) -> bool:
        if k == len(order):
            return True
        i = order[k]
        bm = 1 << i
        for j in cand[pm[i]]:
            if used[j]:
                continue
            bn = 1 << j
            new = [(x | bm, y | bn) for x, y in pairs]
            if all(tm[x] == tn[y] for x, y in new):
                used[j] = True
                image[i] = j
                if extend(k + 1, pairs + new):
                    return True
                used[j] = False
        return False

    if not extend(0, [(0, 0)]):
        return None
    return {M.labels[i]: N.labels[image[i]] for i in range(M.n)}


# -- minor witnesses ---------------------------------------------------------


@dataclass(frozen=True)
class MinorWitness:
    contract: frozenset[str]
    delete: frozenset[str]
    map: dict = field(hash=False)

    def to_json(self, M: Optional[Matroid] = None) -> dict:
        def order(s):
            return [x for x in M.labels if x in s] if M is not None else sorted(s)

        keys = order(self.map) if M is not None else sorted(self.map)
        return {
            "contract": order(self.contract),
            "delete": order(self.delete),
            "map": {k: self.map[k] for k in keys},
        }

    def verify(self, M: Matroid, N: Matroid) -> bool:
        """Recompute the minor from scratch and check the map basis by basis."""
        c, d = M.mask(self.contract), M.mask(self.delete)
        if c & d:
            return False
        if M.rank_table[c] != popcount(c):
            return False
        if M.rank_table[M.full & ~d] != M.rank():
            return False
        rest = M.full & ~(c | d)
        if set(M.subset(rest)) != set(self.map) or sorted(self.map.values()) != sorted(N.labels):
            return False
        m = minor_masks(M, c, d)
        mapped = {N.mask(self.map[x] for x in m.subset(b)) for b in m.basis_masks()}
        return mapped == set(N.basis_masks())


class _Pattern:
    """Signature orbit of ``N`` under all relabellings."""

    def __init__(self, N: Matroid):
        self.N = N
        self.m = N.n
        self.rank = N.rank()
        self.combos = list(itertools.combinations(range(self.m), self.rank))
        self.sigs: Optional[dict[int, tuple[int, ...]]] = None
        if self.m <= ORBIT_LIMIT:
            bases = N.basis_masks()
            sigs: dict[int, tuple[int, ...]] = {}
            combos = self.combos
            for perm in itertools.permutations(range(self.m)):
                sig = 0
                for j, combo in enumerate(combos):
                    mask = 0
                    for i in combo:
                        mask |= 1 << perm[i]
                    if mask in bases:
                        sig |= 1 << j
                sigs.setdefault(sig, perm)
            self.sigs = sigs
        self.min_pair_kappa = min_pair_kappa(N)


def min_pair_kappa(N: Matroid) -> int:
    if N.n < 2:
        return 0
    return min(
        kernels.kappa(N.rank_table, N.n, 1 << i, 1 << j)
        for i, j in itertools.combinations(range(N.n), 2)
    )


@lru_cache(maxsize=512)
def _pattern(N: Matroid) -> _Pattern:
    return _Pattern(N)


def _feasible(M: Matroid, N: Matroid) -> bool:
    return N.n <= M.n and N.rank() <= M.rank() and N.n - N.rank() <= M.n - M.rank()


def _witness_from(M: Matroid, pat: _Pattern, c: int, d: int, sig: int) -> MinorWitness:
    s = M.full & ~(c | d)
    perm = pat.sigs[sig]
    mapping = {M.labels[i]: pat.N.labels[perm[k]] for k, i in enumerate(bits(s))}
    return MinorWitness(M.subset(c), M.subset(d), mapping)


def _slow_candidates(M: Matroid, N: Matroid, required: int):
    """(C, D) pairs in search order whose minor is isomorphic to N."""
    kc = M.rank() - N.rank()
    kd = (M.n - M.rank()) - (N.n - N.rank())
    rest = [i for i in range(M.n) if not required >> i & 1]
    for cc in itertools.combinations(rest, kc):
        c = sum(1 << i for i in cc)
        if M.rank_table[c] != kc:
            continue
        for dd in itertools.combinations([i for i in rest if not c >> i & 1], kd):
            d = sum(1 << i for i in dd)
            if M.rank_table[M.full & ~d] != M.rank():
                continue
            iso = isomorphic(minor_masks(M, c, d), N)
            if iso is not None:
                yield c, d, iso


def has_minor_using(M: Matroid, N: Matroid, Z: Subset = ()) -> Optional[MinorWitness]:
    """First witness (by increasing C, then D) of an N-minor of M avoiding
    nothing in ``Z``; None if there is none."""
    z = M.mask(Z)
    if not _feasible(M, N) or popcount(z) > N.n:
        return None
    pat = _pattern(N)
    if popcount(z) == 2:
        # kappa can only drop when passing to a minor
        if kernels.kappa(M.rank_table, M.n, z & -z, z & (z - 1)) < pat.min_pair_kappa:
            return None
    kc = M.rank() - N.rank()
    if pat.sigs is None:
        for c, d, iso in _slow_candidates(M, N, z):
            return MinorWitness(M.subset(c), M.subset(d), iso)
        return None
    hit = kernels.first_witness(M.rank_table, M.n, N.n, kc, pat.combos, pat.sigs, z)
    if hit is None:
        return None
    c, d, sig = hit
    return _witness_from(M, pat, c, d, sig)


def minor_ground_masks(M: Matroid, N: Matroid) -> list[int]:
    """Ground sets (as masks) of all N-minors of M."""

    def compute():
        if not _feasible(M, N):
            return []
        pat = _pattern(N)
        if pat.sigs is None:
            seen = set()
            for c, d, _ in _slow_candidates(M, N, 0):
                seen.add(M.full & ~(c | d))
            return sorted(seen)
        kc = M.rank() - N.rank()
        hits = kernels.scan_grounds(M.rank_table, M.n, N.n, kc, pat.combos, pat.sigs, 0)
        return [s for s, _, _ in hits]

    return M._memo(("grounds", N._key()), compute)


# -- pair relation -----------------------------------------------------------


@dataclass(frozen=True)
class PairRelation:
    elements: tuple[str, ...]
    edges: frozenset[frozenset[str]]

    def related(self, e: str, f: str) -> bool:
        return frozenset((e, f)) in self.edges

    def is_complete(self) -> bool:
        k = len(self.elements)
        return len(self.edges) == k * (k - 1) // 2

    def missing(self) -> list[tuple[str, str]]:
        return [
            (e, f)
            for e, f in itertools.combinations(self.elements, 2)
            if frozenset((e, f)) not in self.edges
        ]

    def sorted_edges(self) -> list[tuple[str, str]]:
        pos = {x: i for i, x in enumerate(self.elements)}
        out = [tuple(sorted(e, key=pos.__getitem__)) for e in self.edges]
        return sorted(out, key=lambda p: (pos[p[0]], pos[p[1]]))


def pair_relation(M: Matroid, N: Matroid) -> PairRelation:
    if M.n < 2:
        raise TooSmall("the pair relation needs at least two elements")
    edges = set()
    for s in minor_ground_masks(M, N):
        idx = list(bits(s))
        for i, j in itertools.combinations(idx, 2):
            edges.add(frozenset((M.labels[i], M.labels[j])))
    return PairRelation(M.labels, frozenset(edges))


def is_n_connected(M: Matroid, N: Matroid) -> bool:
    """Every two elements of M lie together in an N-minor.

    Matroids with fewer than two elements are reported as not N-connected.
    """
    if M.n < 2:
        return False
    return pair_relation(M, N).is_complete()


def covered_tuples(M: Matroid, Ns: Iterable[Matroid], k: int) -> set[int]:
    """Masks of the k-subsets of E(M) lying in a minor isomorphic to a member of Ns."""
    out: set[int] = set()
    for N in Ns:
        for s in minor_ground_masks(M, N):
            for combo in itertools.combinations(list(bits(s)), k):
                out.add(sum(1 << i for i in combo))
    return out


def has_minor_using_triple(
    M: Matroid, oracle_list: Sequence[tuple[str, Matroid]], Z3: Subset
) -> Optional[tuple[str, MinorWitness]]:
    z = list(Z3) if not isinstance(Z3, str) else [Z3]
    if len(set(z)) != 3:
        raise BadSize("exactly three distinct elements are required")
    for x in z:
        if x not in M.ground.index:
            raise UnknownElement(f"unknown element {x!r}")
    for name, N in oracle_list:
        w = has_minor_using(M, N, z)
        if w is not None:
            return name, w
    return None


def find_exact_minor(M: Matroid, target: Matroid) -> Optional[MinorWitness]:
    """A minor of M *equal* to ``target`` (same labels, same bases)."""
    s = M.mask(target.labels)
    kc = M.rank() - target.rank()
    if kc < 0:
        return None
    want = target.reorder(M.ordered(s)).rank_table
    rest = [i for i in range(M.n) if not s >> i & 1]
    rm = M.rank()
    for cc in itertools.combinations(rest, kc):
        c = sum(1 << i for i in cc)
        if M.rank_table[c] != kc or M.rank_table[s | c] != rm:
            continue
        if kernels.minor_table(M.rank_table, M.n, s, c) == want:
            d = M.full & ~(s | c)
            return MinorWitness(M.subset(c), M.subset(d), {x: x for x in target.labels})
    return None


def is_minor(M: Matroid, N: Matroid) -> bool:
    return has_minor_using(M, N, ()) is not None


def dual_witness(w: MinorWitness) -> MinorWitness:
    """Witness for ``N*`` in ``M*`` from one for ``N`` in ``M``."""
    return MinorWitness(w.delete, w.contract, dict(w.map))


__all__ = [
    "Fingerprint",
    "MinorWitness",
    "PairRelation",
    "covered_tuples",
    "dual",
    "element_profiles",
    "find_exact_minor",
    "fingerprint",
    "has_minor_using",
    "has_minor_using_triple",
    "is_minor",
    "is_n_connected",
    "isomorphic",
    "minor_ground_masks",
    "pair_relation",
]
