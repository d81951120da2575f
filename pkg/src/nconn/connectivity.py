"""Connectivity function, separations, fans and the N-minor pair relation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import kernels
from .constructions import contract, delete
from .core import Matroid, Subset, component_masks, is_connected, popcount
from .errors import Overlap, PreconditionFailed, TooSmall
from .isominor import PairRelation, is_n_connected, pair_relation

__all__ = [
    "PairRelation",
    "TwoSeparation",
    "Fan",
    "connectivity_function",
    "kappa",
    "two_separations",
    "is_k_connected",
    "find_fans",
    "is_special_fan",
    "check_special_fan_lemma",
    "is_transitive",
    "search_transitivity_counterexample",
    "hereditary_removal_check",
    "reduce_preserving",
]


def connectivity_function(M: Matroid, X: Subset) -> int:
    """``r(X) + r(E - X) - r(M)``."""
    x = M.mask(X)
    t = M.rank_table
    return t[x] + t[M.full ^ x] - t[M.full]


lam = connectivity_function


def kappa(M: Matroid, A: Subset, B: Subset) -> int:
    """Minimum of lambda over all sets between A and E - B."""
    a, b = M.mask(A), M.mask(B)
    if a & b:
        raise Overlap(f"A and B share {sorted(M.subset(a & b))}")
    return kernels.kappa(M.rank_table, M.n, a, b)


@dataclass(frozen=True)
class TwoSeparation:
    side_x: frozenset[str]
    side_y: frozenset[str]
    order: int

    @property
    def exact(self) -> bool:
        return self.order == 1


def two_separation_masks(M: Matroid) -> list[int]:
    """Masks X (containing the first element) of all 2-separations (X, E-X)."""
    n, t, full = M.n, M.rank_table, M.full
    r = t[full]
    out = []
    if n < 4:
        return out
    for x in range(1, full, 2):
        k = popcount(x)
        if k < 2 or n - k < 2:
            continue
        if t[x] + t[full ^ x] - r <= 1:
            out.append(x)
    return out


def two_separations(M: Matroid) -> list[TwoSeparation]:
    t, full = M.rank_table, M.full
    return [
        TwoSeparation(M.subset(x), M.subset(full ^ x), t[x] + t[full ^ x] - t[full])
        for x in two_separation_masks(M)
    ]


def is_k_connected(M: Matroid, k: int) -> bool:
    """Tutte k-connectivity for k in {1, 2, 3}."""
    if k <= 1:
        return True
    if not is_connected(M):
        return False
    if k == 2:
        return True
    if k == 3:
        return not two_separation_masks(M)
    raise ValueError("only k <= 3 is supported")


# -- fans --------------------------------------------------------------------

TRIANGLE, TRIAD = "triangle", "triad"


@dataclass(frozen=True)
class Fan:
    ordering: tuple[str, ...]
    step_types: tuple[frozenset[str], ...] = field(compare=False)

    @property
    def elements(self) -> frozenset[str]:
        return frozenset(self.ordering)


class _FanGraph:
    def __init__(self, M: Matroid):
        self.M = M
        self.tri = {c for c in M.circuit_masks() if popcount(c) == 3}
        self.triad = {c for c in M.cocircuit_masks() if popcount(c) == 3}

    def types(self, a: int, b: int, c: int) -> frozenset[str]:
        m = (1 << a) | (1 << b) | (1 << c)
        out = set()
        if m in self.tri:
            out.add(TRIANGLE)
        if m in self.triad:
            out.add(TRIAD)
        return frozenset(out)

    def extensions(self, seq: Sequence[int], last: frozenset[str]) -> list[tuple[int, frozenset[str]]]:
        want = set()
        if TRIANGLE in last:
            want.add(TRIAD)
        if TRIAD in last:
            want.add(TRIANGLE)
        out = []
        used = set(seq)
        for s in range(self.M.n):
            if s in used:
                continue
            ty = self.types(seq[-2], seq[-1], s)
            if ty and want <= ty:
                out.append((s, ty))
        return out

    def all_orderings(self):
        """Every fan ordering (index tuples with their step types)."""
        n = self.M.n
        stack = []
        for a, b, c in itertools.permutations(range(n), 3):
            ty = self.types(a, b, c)
            if ty:
                stack.append(((a, b, c), (ty,)))
        while stack:
            seq, tys = stack.pop()
            yield seq, tys
            for s, ty in self.extensions(seq, tys[-1]):
                stack.append((seq + (s,), tys + (ty,)))


def _reversed_types(seq: Sequence[int], g: _FanGraph) -> tuple:
    rev = tuple(reversed(seq))
    return tuple(g.types(rev[i], rev[i + 1], rev[i + 2]) for i in range(len(rev) - 2))


def _fan_ok(seq: Sequence[int], g: _FanGraph) -> bool:
    tys = [g.types(seq[i], seq[i + 1], seq[i + 2]) for i in range(len(seq) - 2)]
    if not all(tys):
        return False
    for a, b in zip(tys, tys[1:]):
        if TRIANGLE in a and TRIAD not in b:
            return False
        if TRIAD in a and TRIANGLE not in b:
            return False
    return True


def find_fans(M: Matroid) -> list[Fan]:
    """Maximal fan orderings, one per reversal pair, lexicographically sorted."""
    g = _FanGraph(M)
    found = set()
    for seq, tys in g.all_orderings():
        if g.extensions(seq, tys[-1]):
            continue
        rev = tuple(reversed(seq))
        rtys = _reversed_types(seq, g)
        if g.extensions(rev, rtys[-1]):
            continue
        found.add(min(seq, rev))
    out = []
    for seq in sorted(found):
        tys = tuple(g.types(seq[i], seq[i + 1], seq[i + 2]) for i in range(len(seq) - 2))
        out.append(Fan(tuple(M.labels[i] for i in seq), tys))
    return out


def is_fan(M: Matroid, ordering: Sequence[str]) -> bool:
    seq = [M.ground.index[x] for x in ordering]
    return len(seq) >= 3 and len(set(seq)) == len(seq) and _fan_ok(seq, _FanGraph(M))


def is_special_fan(M: Matroid, fan: Fan | Sequence[str]) -> bool:
    """A fan whose first two elements form a cocircuit."""
    ordering = fan.ordering if isinstance(fan, Fan) else tuple(fan)
    if not is_fan(M, ordering):
        return False
    return M.mask(ordering[:2]) in set(M.cocircuit_masks())


@dataclass
class FanLemmaReport:
    fans_checked: int = 0
    applicable: int = 0
    violations: list[tuple[str, ...]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_special_fan_lemma(M: Matroid) -> FanLemmaReport:
    """Every fan whose end pairs are circuits or cocircuits is a component."""
    g = _FanGraph(M)
    small = {c for c in M.circuit_masks() if popcount(c) == 2}
    small |= {c for c in M.cocircuit_masks() if popcount(c) == 2}
    comps = set(component_masks(M))
    report = FanLemmaReport()
    for seq, _ in g.all_orderings():
        report.fans_checked += 1
        head = (1 << seq[0]) | (1 << seq[1])
        tail = (1 << seq[-2]) | (1 << seq[-1])
        if head in small and tail in small:
            report.applicable += 1
            x = sum(1 << i for i in seq)
            if x not in comps:
                report.violations.append(tuple(M.labels[i] for i in seq))
    return report


# -- transitivity ------------------------------------------------------------


def is_transitive(M: Matroid, N: Matroid) -> Optional[tuple[str, str, str]]:
    """None if the pair relation is transitive, else the first ordered triple
    (e, f, g) with e~f, f~g but not e~g."""
    if M.n < 2:
        raise TooSmall("transitivity needs at least two elements")
    R = pair_relation(M, N)
    labels = M.labels
    for e in labels:
        for f in labels:
            if f == e or not R.related(e, f):
                continue
            for g in labels:
                if g in (e, f):
                    continue
                if R.related(f, g) and not R.related(e, g):
                    return (e, f, g)
    return None


@dataclass(frozen=True)
class TransitivityCounterexample:
    matroid: Matroid
    triple: tuple[str, str, str]
    source: str


def default_universe(N: Matroid, max_n: int = 7) -> Iterable[tuple[str, Matroid]]:
    """Proof-driven extensions of N first, then every enumerated class."""
    from .catalog import enumerate_classes, transitivity_constructions

    for c in transitivity_constructions(N):
        yield c.step, c.matroid
    for n in range(2, max_n + 1):
        for k, M in enumerate(enumerate_classes(n)):
            yield f"enum:n={n}#{k}", M


def search_transitivity_counterexample(
    N: Matroid, universe: Optional[Iterable[tuple[str, Matroid]]] = None, max_n: int = 7
) -> Optional[TransitivityCounterexample]:
    """First matroid of ``universe`` whose N pair relation is not transitive."""
    if universe is None:
        universe = default_universe(N, max_n)
    for source, M in universe:
        if M.n < 3:
            continue
        triple = is_transitive(M, N)
        if triple is not None:
            return TransitivityCounterexample(M, triple, source)
    return None


# -- heredity ----------------------------------------------------------------


@dataclass
class HeredityReport:
    deletion_ok: dict[str, bool]
    contraction_ok: dict[str, bool]

    @property
    def failures(self) -> list[str]:
        return [e for e in self.deletion_ok if not (self.deletion_ok[e] or self.contraction_ok[e])]

    @property
    def ok(self) -> bool:
        return not self.failures


def hereditary_removal_check(M: Matroid, N: Matroid) -> HeredityReport:
    """For each e, whether ``M \\ e`` or ``M / e`` is still N-connected."""
    if M.n <= N.n:
        raise PreconditionFailed("M must have more elements than N")
    if not is_n_connected(M, N):
        raise PreconditionFailed("M is not N-connected")
    dele, con = {}, {}
    for e in M.labels:
        dele[e] = is_n_connected(delete(M, [e]), N)
        con[e] = is_n_connected(contract(M, [e]), N)
    return HeredityReport(dele, con)


def reduce_preserving(M: Matroid, N: Matroid, remove: Sequence[str]) -> Optional[Matroid]:
    """Delete or contract each of ``remove`` in turn keeping M N-connected.

    Returns the first successful result in (delete, contract) order, or None.
    """
    if not remove:
        return M
    x, rest = remove[0], remove[1:]
    for op in (delete, contract):
        smaller = op(M, [x])
        if is_n_connected(smaller, N):
            out = reduce_preserving(smaller, N, rest)
            if out is not None:
                return out
    return None
