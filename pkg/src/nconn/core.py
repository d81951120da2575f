"""Immutable matroids on small ground sets.

A :class:`Matroid` stores its ordered ground set and the full rank table over
all ``2**n`` subsets (bit ``i`` of a mask is the ``i``-th label).  Everything
else (bases, circuits, flats, ...) is derived from the table on demand and
memoised.  Values are never mutated after construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from . import kernels
from .errors import AxiomViolation, CapExceeded, EmptyFamily, UnknownElement

MAX_ELEMENTS = 16

Subset = Iterable[str]


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int) -> Iterator[int]:
    """Indices of the set bits of ``x``, ascending."""
    i = 0
    while x:
        if x & 1:
            yield i
        x >>= 1
        i += 1


@dataclass(frozen=True)
class GroundSet:
    labels: tuple[str, ...]
    cap: int = MAX_ELEMENTS
    index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(set(labels)) != len(labels):
            dup = sorted({x for x in labels if labels.count(x) > 1})
            raise AxiomViolation(f"duplicate labels: {dup}")
        if len(labels) > self.cap:
            raise CapExceeded(f"{len(labels)} elements exceeds the cap of {self.cap}")
        object.__setattr__(self, "index", {x: i for i, x in enumerate(labels)})

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def mask(self, subset: Subset) -> int:
        if isinstance(subset, str):
            subset = (subset,)
        m = 0
        for x in subset:
            try:
                m |= 1 << self.index[x]
            except KeyError:
                raise UnknownElement(f"unknown element {x!r}") from None
        return m

    def subset(self, mask: int) -> frozenset[str]:
        return frozenset(self.labels[i] for i in bits(mask))

    def ordered(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in bits(mask))


@dataclass(frozen=True)
class ElementClassification:
    loops: frozenset[str]
    coloops: frozenset[str]
    parallel_classes: tuple[frozenset[str], ...]
    series_classes: tuple[frozenset[str], ...]


class Matroid:
    """A matroid given by its ground set and rank table.

    Use :func:`from_bases`, :func:`from_circuits` or :func:`from_graph` to build
    validated instances; the constructor itself trusts its input.
    """

    __slots__ = ("ground", "rank_table", "_cache", "__weakref__")

    def __init__(self, ground: GroundSet | Sequence[str], rank_table: bytes):
        if not isinstance(ground, GroundSet):
            ground = GroundSet(tuple(ground))
        if len(rank_table) != 1 << len(ground):
            raise ValueError("rank table has the wrong length")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "rank_table", bytes(rank_table))
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("Matroid is immutable")

    # -- basic access -----------------------------------------------------

    @property
    def labels(self) -> tuple[str, ...]:
        return self.ground.labels

    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __len__(self) -> int:
        return self.n

    def mask(self, subset: Subset) -> int:
        return self.ground.mask(subset)

    def subset(self, mask: int) -> frozenset[str]:
        return self.ground.subset(mask)

    def ordered(self, mask: int) -> tuple[str, ...]:
        return self.ground.ordered(mask)

    def _memo(self, key: Hashable, compute):
        # Two threads may both compute a missing entry; the value is
        # deterministic so the duplicate write is harmless.
        try:
            return self._cache[key]
        except KeyError:
            value = compute()
            self._cache[key] = value
            return value

    # -- rank and closure -------------------------------------------------

    def rank(self, subset: Optional[Subset] = None) -> int:
        if subset is None:
            return self.rank_table[self.full]
        return self.rank_table[self.mask(subset)]

    def corank(self, subset: Optional[Subset] = None) -> int:
        """Rank in the dual matroid."""
        x = self.full if subset is None else self.mask(subset)
        return popcount(x) + self.rank_table[self.full ^ x] - self.rank_table[self.full]

    def closure_mask(self, x: int) -> int:
        r = self.rank_table[x]
        out = x
        for i in range(self.n):
            b = 1 << i
            if not x & b and self.rank_table[x | b] == r:
                out |= b
        return out

    def closure(self, subset: Subset) -> frozenset[str]:
        return self.subset(self.closure_mask(self.mask(subset)))

    def is_independent(self, subset: Subset) -> bool:
        x = self.mask(subset)
        return self.rank_table[x] == popcount(x)

    def is_independent_mask(self, x: int) -> bool:
        return self.rank_table[x] == popcount(x)

    # -- derived families -------------------------------------------------

    def basis_masks(self) -> frozenset[int]:
        def compute():
            r = self.rank()
            t = self.rank_table
            return frozenset(x for x in range(1 << self.n) if t[x] == r and popcount(x) == r)

        return self._memo("bases", compute)

    def bases(self) -> list[frozenset[str]]:
        return [self.subset(b) for b in sorted(self.basis_masks())]

    def circuit_masks(self) -> tuple[int, ...]:
        def compute():
            t = self.rank_table
            out = []
            for x in range(1, 1 << self.n):
                k = popcount(x)
                if t[x] != k - 1:
                    continue
                if all(t[x ^ (1 << i)] == k - 1 for i in bits(x)):
                    out.append(x)
            return tuple(sorted(out, key=lambda c: (popcount(c), c)))

        return self._memo("circuits", compute)

    def circuits(self) -> list[frozenset[str]]:
        return [self.subset(c) for c in self.circuit_masks()]

    def cocircuit_masks(self) -> tuple[int, ...]:
        return self._memo("cocircuits", lambda: dual(self).circuit_masks())

    def cocircuits(self) -> list[frozenset[str]]:
        return [self.subset(c) for c in self.cocircuit_masks()]

    def flat_masks(self) -> tuple[int, ...]:
        def compute():
            t = self.rank_table
            n = self.n
            out = []
            for x in range(1 << n):
                r = t[x]
                if all(x >> i & 1 or t[x | 1 << i] > r for i in range(n)):
                    out.append(x)
            return tuple(sorted(out, key=lambda f: (t[f], f)))

        return self._memo("flats", compute)

    def flats(self) -> list[frozenset[str]]:
        return [self.subset(f) for f in self.flat_masks()]

    def cyclic_flat_masks(self) -> tuple[int, ...]:
        def compute():
            t = self.rank_table
            return tuple(
                f for f in self.flat_masks() if all(t[f ^ (1 << i)] == t[f] for i in bits(f))
            )

        return self._memo("cyclic_flats", compute)

    def cyclic_flats(self) -> list[frozenset[str]]:
        return [self.subset(f) for f in self.cyclic_flat_masks()]

    def loops(self) -> frozenset[str]:
        return self.subset(sum(1 << i for i in range(self.n) if self.rank_table[1 << i] == 0))

    def coloops(self) -> frozenset[str]:
        full, t = self.full, self.rank_table
        return self.subset(sum(1 << i for i in range(self.n) if t[full ^ (1 << i)] < t[full]))

    def __repr__(self) -> str:
        return f"Matroid(rank={self.rank()}, ground={list(self.labels)!r})"

    # -- equality ---------------------------------------------------------

    def _key(self):
        def compute():
            order = sorted(range(self.n), key=lambda i: self.labels[i])
            perm = [0] * self.n
            for new, old in enumerate(order):
                perm[old] = new
            bases = sorted(sum(1 << perm[i] for i in bits(b)) for b in self.basis_masks())
            return (tuple(self.labels[i] for i in order), tuple(bases))

        return self._memo("key", compute)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matroid):
            return NotImplemented
        if self.labels == other.labels:
            return self.rank_table == other.rank_table
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __reduce__(self):
        return (Matroid, (self.labels, self.rank_table))

    # -- relabelling ------------------------------------------------------

    def relabel(self, mapping: Mapping[str, str]) -> "Matroid":
        labels = tuple(mapping.get(x, x) for x in self.labels)
        return Matroid(GroundSet(labels, cap=max(MAX_ELEMENTS, self.n)), self.rank_table)

    def reorder(self, labels: Sequence[str]) -> "Matroid":
        """The same matroid with its ground set listed in ``labels`` order."""
        if sorted(labels) != sorted(self.labels):
            raise UnknownElement(f"{list(labels)} is not a reordering of the ground set")
        idx = [self.ground.index[x] for x in labels]
        n = self.n
        table = bytearray(1 << n)
        t = self.rank_table
        for y in range(1, 1 << n):
            table[y] = t[_remap(y, idx)]
        return Matroid(GroundSet(tuple(labels), cap=max(MAX_ELEMENTS, n)), bytes(table))


def _remap(y: int, idx: Sequence[int]) -> int:
    x = 0
    i = 0
    while y:
        if y & 1:
            x |= 1 << idx[i]
        y >>= 1
        i += 1
    return x


# -- constructors ----------------------------------------------------------


def _ground(labels: Iterable[str]) -> GroundSet:
    return GroundSet(tuple(labels))


def from_bases(ground: Iterable[str] | GroundSet, bases: Iterable[Subset]) -> Matroid:
    """Validated matroid from a basis family."""
    g = ground if isinstance(ground, GroundSet) else _ground(ground)
    masks = sorted({g.mask(b) for b in bases})
    if not masks:
        raise EmptyFamily("basis family is empty")
    sizes = {popcount(b) for b in masks}
    if len(sizes) > 1:
        small = min(masks, key=popcount)
        large = max(masks, key=popcount)
        raise AxiomViolation(
            f"bases {sorted(g.subset(small))} and {sorted(g.subset(large))} have unequal cardinality"
        )
    bad = kernels.exchange_violation(masks)
    if bad is not None:
        b1, b2, x = bad
        raise AxiomViolation(
            f"basis exchange fails for {sorted(g.subset(b1))}, {sorted(g.subset(b2))} "
            f"removing {g.ordered(x)[0]!r}"
        )
    return Matroid(g, kernels.rank_from_bases(len(g), masks))


def from_circuits(ground: Iterable[str] | GroundSet, circuits: Iterable[Subset]) -> Matroid:
    """Validated matroid from its circuit family (checks the circuit axioms)."""
    g = ground if isinstance(ground, GroundSet) else _ground(ground)
    cs = sorted({g.mask(c) for c in circuits})
    if 0 in cs:
        raise AxiomViolation("the empty set is not a circuit")
    for a, b in itertools.permutations(cs, 2):
        if a & b == a:
            raise AxiomViolation(
                f"circuit {sorted(g.subset(a))} is contained in {sorted(g.subset(b))}"
            )
    family = set(cs)
    for a, b in itertools.combinations(cs, 2):
        union = a | b
        for e in bits(a & b):
            rest = union & ~(1 << e)
            if not any(c & rest == c for c in family):
                raise AxiomViolation(
                    f"circuit elimination fails for {sorted(g.subset(a))}, "
                    f"{sorted(g.subset(b))} at {g.labels[e]!r}"
                )
    return Matroid(g, kernels.rank_from_circuits(len(g), cs))


def from_graph(edges: Iterable[Sequence[Hashable]]) -> Matroid:
    """Cycle matroid of a multigraph given as ``(u, v, label)`` triples.

    Two-element edges get labels ``e0, e1, ...``.
    """
    es = []
    for k, edge in enumerate(edges):
        if len(edge) == 3:
            u, v, lab = edge
        elif len(edge) == 2:
            (u, v), lab = edge, f"e{k}"
        else:
            raise ValueError(f"bad edge {edge!r}")
        es.append((u, v, str(lab)))
    g = _ground(lab for _, _, lab in es)
    vertices = sorted({str(x) for u, v, _ in es for x in (u, v)})
    vid = {x: i for i, x in enumerate(vertices)}
    ends = [(vid[str(u)], vid[str(v)]) for u, v, _ in es]
    n = len(es)
    table = bytearray(1 << n)
    for x in range(1, 1 << n):
        parent = list(range(len(vertices)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        r = 0
        for i in bits(x):
            a, b = find(ends[i][0]), find(ends[i][1])
            if a != b:
                parent[a] = b
                r += 1
        table[x] = r
    return Matroid(g, bytes(table))


def uniform(r: int, n: int, labels: Optional[Sequence[str]] = None) -> Matroid:
    if not 0 <= r <= n:
        raise ValueError(f"U({r},{n}) is undefined")
    labels = tuple(labels) if labels is not None else default_labels(n)
    table = bytes(min(popcount(x), r) for x in range(1 << n))
    return Matroid(_ground(labels), table)


def default_labels(n: int) -> tuple[str, ...]:
    letters = "abcdefghijklmnopqrstuvwxyz"
    if n <= len(letters):
        return tuple(letters[:n])
    return tuple(f"e{i}" for i in range(n))


# -- derived structure -----------------------------------------------------


def rank(M: Matroid, S: Optional[Subset] = None) -> int:
    return M.rank(S)


def closure(M: Matroid, S: Subset) -> frozenset[str]:
    return M.closure(S)


def is_independent(M: Matroid, S: Subset) -> bool:
    return M.is_independent(S)


def dual(M: Matroid) -> Matroid:
    def compute():
        D = Matroid(M.ground, kernels.dual_table(M.rank_table, M.n))
        D._cache["dual"] = M
        return D

    return M._memo("dual", compute)


def circuits(M: Matroid) -> list[frozenset[str]]:
    return M.circuits()


def cocircuits(M: Matroid) -> list[frozenset[str]]:
    return M.cocircuits()


def component_masks(M: Matroid) -> tuple[int, ...]:
    def compute():
        parent = list(range(M.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for c in M.circuit_masks():
            idx = list(bits(c))
            for i in idx[1:]:
                a, b = find(idx[0]), find(i)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups: dict[int, int] = {}
        for i in range(M.n):
            groups[find(i)] = groups.get(find(i), 0) | 1 << i
        return tuple(sorted(groups.values(), key=lambda m: (m & -m)))

    return M._memo("components", compute)


def components(M: Matroid) -> list[frozenset[str]]:
    return [M.subset(c) for c in component_masks(M)]


def is_connected(M: Matroid) -> bool:
    """Connected with at least two elements."""
    return M.n >= 2 and len(component_masks(M)) == 1


def classify_elements(M: Matroid) -> ElementClassification:
    t = M.rank_table
    loops = M.loops()
    coloops = M.coloops()
    par: dict[int, list[str]] = {}
    for i, x in enumerate(M.labels):
        if t[1 << i] == 0:
            continue
        par.setdefault(M.closure_mask(1 << i), []).append(x)
    D = dual(M)
    ser: dict[int, list[str]] = {}
    for i, x in enumerate(M.labels):
        if D.rank_table[1 << i] == 0:
            continue
        ser.setdefault(D.closure_mask(1 << i), []).append(x)
    return ElementClassification(
        loops=loops,
        coloops=coloops,
        parallel_classes=tuple(frozenset(v) for v in par.values()),
        series_classes=tuple(frozenset(v) for v in ser.values()),
    )


def is_uniform(M: Matroid) -> bool:
    r = M.rank()
    return len(M.basis_masks()) == _binom(M.n, r)


def is_simple(M: Matroid) -> bool:
    t = M.rank_table
    if any(t[1 << i] == 0 for i in range(M.n)):
        return False
    return all(t[(1 << i) | (1 << j)] == 2 for i, j in itertools.combinations(range(M.n), 2))


def is_cosimple(M: Matroid) -> bool:
    return is_simple(dual(M))


def cyclic_flats(M: Matroid) -> list[frozenset[str]]:
    return M.cyclic_flats()


def clonal_classes(M: Matroid) -> list[frozenset[str]]:
    """Elements grouped by the set of cyclic flats containing them."""
    classes: dict[tuple[int, ...], list[str]] = {}
    cfs = M.cyclic_flat_masks()
    for i, x in enumerate(M.labels):
        key = tuple(f for f in cfs if f >> i & 1)
        classes.setdefault(key, []).append(x)
    return [frozenset(v) for v in classes.values()]


def is_free_element(M: Matroid, e: str) -> bool:
    i = M.ground.index.get(e)
    if i is None:
        raise UnknownElement(f"unknown element {e!r}")
    t, r = M.rank_table, M.rank()
    if t[M.full ^ (1 << i)] < r:
        return False
    return all(t[c] == r for c in M.circuit_masks() if c >> i & 1)


def free_elements(M: Matroid) -> list[str]:
    return [x for x in M.labels if is_free_element(M, x)]


def is_binary(M: Matroid) -> bool:
    from .catalog import named
    from .isominor import has_minor_using

    return has_minor_using(M, named("U(2,4)"), ()) is None


def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)
