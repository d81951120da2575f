"""Matroid-building operations: minors, sums, connections and extensions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from . import kernels
from .core import (
    MAX_ELEMENTS,
    GroundSet,
    Matroid,
    Subset,
    bits,
    dual,
    is_connected,
    popcount,
)
from .errors import (
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


def fresh_label(used: Iterable[str], prefix: str = "p") -> str:
    """First of ``p0, p1, ...`` not in ``used``."""
    used = set(used)
    k = 0
    while f"{prefix}{k}" in used:
        k += 1
    return f"{prefix}{k}"


def _ground(labels: Sequence[str]) -> GroundSet:
    return GroundSet(tuple(labels), cap=max(MAX_ELEMENTS, len(labels)))


# -- minors ------------------------------------------------------------------


def minor(M: Matroid, contract: Subset = (), delete: Subset = ()) -> Matroid:
    """``M / contract \\ delete``; the ground set keeps M's order."""
    c, d = M.mask(contract), M.mask(delete)
    if c & d:
        raise Overlap(f"contract and delete sets share {sorted(M.subset(c & d))}")
    return minor_masks(M, c, d)


def minor_masks(M: Matroid, c: int, d: int) -> Matroid:
    keep = M.full & ~(c | d)
    if not c and not d:
        return M
    table = kernels.minor_table(M.rank_table, M.n, keep, c)
    return Matroid(_ground(M.ordered(keep)), table)


def delete(M: Matroid, S: Subset) -> Matroid:
    return minor(M, (), S)


def contract(M: Matroid, S: Subset) -> Matroid:
    return minor(M, S, ())


def restrict(M: Matroid, S: Subset) -> Matroid:
    return minor_masks(M, 0, M.full & ~M.mask(S))


# -- sums and connections ----------------------------------------------------


def direct_sum(M1: Matroid, M2: Matroid) -> Matroid:
    clash = set(M1.labels) & set(M2.labels)
    if clash:
        raise LabelCollision(f"labels {sorted(clash)} occur in both summands")
    n1, n2 = M1.n, M2.n
    t1, t2 = M1.rank_table, M2.rank_table
    lo = (1 << n1) - 1
    table = bytes(t1[x & lo] + t2[x >> n1] for x in range(1 << (n1 + n2)))
    return Matroid(_ground(M1.labels + M2.labels), table)


def _check_basepoint(M: Matroid, p: str, which: str) -> int:
    if p not in M.ground.index:
        raise UnknownElement(f"basepoint {p!r} is not an element of the {which} matroid")
    i = M.ground.index[p]
    t = M.rank_table
    if t[1 << i] == 0:
        raise DegenerateBasepoint(f"basepoint {p!r} is a loop of the {which} matroid")
    if t[M.full ^ (1 << i)] < t[M.full]:
        raise DegenerateBasepoint(f"basepoint {p!r} is a coloop of the {which} matroid")
    return i


def parallel_connection(M1: Matroid, M2: Matroid, p1: str, p2: Optional[str] = None) -> Matroid:
    """Parallel connection identifying ``p1`` of M1 with ``p2`` of M2.

    The shared element keeps the label ``p1``.
    """
    p2 = p1 if p2 is None else p2
    _check_basepoint(M1, p1, "first")
    _check_basepoint(M2, p2, "second")
    rest2 = [x for x in M2.labels if x != p2]
    clash = set(M1.labels) & set(rest2)
    if clash:
        raise LabelCollision(f"labels {sorted(clash)} occur in both matroids")
    if p2 != p1 and p1 in rest2:
        raise LabelCollision(f"label {p1!r} already used in the second matroid")
    labels = M1.labels + tuple(rest2)
    g = _ground(labels)
    m2 = {x: g.index[p1 if x == p2 else x] for x in M2.labels}
    pbit = 1 << g.index[p1]

    def lift2(c: int) -> int:
        return sum(1 << m2[M2.labels[i]] for i in bits(c))

    c1 = list(M1.circuit_masks())
    c2 = [lift2(c) for c in M2.circuit_masks()]
    circuits = set(c1) | set(c2)
    for a in c1:
        if a & pbit:
            for b in c2:
                if b & pbit:
                    circuits.add((a | b) & ~pbit)
    return Matroid(g, kernels.rank_from_circuits(len(labels), sorted(circuits)))


def series_connection(M1: Matroid, M2: Matroid, p1: str, p2: Optional[str] = None) -> Matroid:
    return dual(parallel_connection(dual(M1), dual(M2), p1, p2))


def parallel_connection_many(parts: Sequence[Matroid], basepoints: Sequence[str], label: str) -> Matroid:
    """Parallel connection of several matroids along one shared basepoint."""
    parts = [P.relabel({b: label}) for P, b in zip(parts, basepoints)]
    out = parts[0]
    for P in parts[1:]:
        out = parallel_connection(out, P, label)
    return out


def two_sum(M1: Matroid, M2: Matroid, p: str, p2: Optional[str] = None) -> Matroid:
    """2-sum across basepoint ``p`` (``p2`` in M2 if it is labelled differently)."""
    if M1.n < 3 or M2.n < 3:
        raise TooSmall("both parts of a 2-sum need at least three elements")
    P = parallel_connection(M1, M2, p, p2)
    return delete(P, [p])


@dataclass(frozen=True)
class TwoSumDecomposition:
    part_x: Matroid
    part_y: Matroid
    basepoint: str

    def reconstruct(self) -> Matroid:
        return two_sum(self.part_x, self.part_y, self.basepoint)


def extract_part(M: Matroid, X: Subset, p: str) -> Matroid:
    """The part ``M_X`` on ``X + p`` of the 2-sum decomposition along ``(X, E-X)``.

    For ``A`` inside ``X``: ``r(A)`` is unchanged, and
    ``r(A + p) = min(r(A) + 1, r(A + Y) - r(Y) + 1)``.
    """
    x = M.mask(X)
    y = M.full & ~x
    if p in M.ground.index:
        raise LabelCollision(f"basepoint label {p!r} is already an element")
    t = M.rank_table
    lam = t[x] + t[y] - t[M.full]
    if popcount(x) < 2 or popcount(y) < 2 or lam != 1 or not is_connected(M):
        raise NotA2Separation(
            f"{sorted(M.subset(x))} does not give an exact 2-separation of a connected matroid"
        )
    labels = M.ordered(x) + (p,)
    k = popcount(x)
    pos = [1 << i for i in bits(x)]
    ry = t[y]
    table = bytearray(1 << (k + 1))
    expand = [0] * (1 << k)
    for a in range(1 << k):
        if a:
            low = a & -a
            expand[a] = expand[a ^ low] | pos[low.bit_length() - 1]
        ra = t[expand[a]]
        table[a] = ra
        table[a | 1 << k] = min(ra + 1, t[expand[a] | y] - ry + 1)
    return Matroid(_ground(labels), bytes(table))


def decompose_two_sum(M: Matroid, X: Subset, p: Optional[str] = None) -> TwoSumDecomposition:
    x = M.mask(X)
    p = p or fresh_label(M.labels)
    return TwoSumDecomposition(
        extract_part(M, M.subset(x), p), extract_part(M, M.subset(M.full & ~x), p), p
    )


# -- single-element extensions ----------------------------------------------


def add_parallel(M: Matroid, e: str, new_label: str) -> Matroid:
    i = M.ground.index.get(e)
    if i is None:
        raise UnknownElement(f"unknown element {e!r}")
    if M.rank_table[1 << i] == 0:
        raise DegenerateElement(f"{e!r} is a loop")
    if new_label in M.ground.index:
        raise LabelCollision(f"label {new_label!r} is already an element")
    n, t = M.n, M.rank_table
    eb = 1 << i
    table = t + bytes(t[x | eb] for x in range(1 << n))
    return Matroid(_ground(M.labels + (new_label,)), table)


def add_series(M: Matroid, e: str, new_label: str) -> Matroid:
    i = M.ground.index.get(e)
    if i is None:
        raise UnknownElement(f"unknown element {e!r}")
    if M.rank_table[M.full ^ (1 << i)] < M.rank():
        raise DegenerateElement(f"{e!r} is a coloop")
    return dual(add_parallel(dual(M), e, new_label))


def truncation(M: Matroid) -> Matroid:
    r = M.rank()
    if r == 0:
        raise RankZero("cannot truncate a rank-0 matroid")
    return Matroid(M.ground, bytes(min(v, r - 1) for v in M.rank_table))


def is_circuit_hyperplane(M: Matroid, C: Subset) -> bool:
    c = M.mask(C)
    return (
        c in set(M.circuit_masks())
        and M.rank_table[c] == M.rank() - 1
        and M.closure_mask(c) == c
    )


def relax(M: Matroid, C: Subset) -> Matroid:
    c = M.mask(C)
    if not is_circuit_hyperplane(M, M.subset(c)):
        raise NotCircuitHyperplane(f"{sorted(M.subset(c))} is not a circuit-hyperplane")
    table = bytearray(M.rank_table)
    table[c] = M.rank()
    return Matroid(M.ground, bytes(table))


def circuit_hyperplanes(M: Matroid) -> list[frozenset[str]]:
    return [M.subset(c) for c in M.circuit_masks() if is_circuit_hyperplane(M, M.subset(c))]


# -- specially relabelled minors --------------------------------------------


def specially_relabeled(M: Matroid, T, v: int, choices: Mapping[str, str]):
    """The vertex label of ``v`` with each incident basepoint renamed to the
    chosen far-side element, realised as a genuine minor of ``M``.

    Returns ``(matroid, witness)``; the witness satisfies
    ``minor(M, witness.contract, witness.delete) == matroid``.
    """
    from .isominor import find_exact_minor

    label = T.vertices[v]
    renames = {}
    for k, (p, a, b) in enumerate(T.edges):
        if v not in (a, b):
            continue
        if p not in choices:
            raise BadChoice(f"no element chosen for basepoint {p!r}")
        near, far = T.displayed_sides(k, v)
        y = choices[p]
        if y not in far:
            raise BadChoice(f"{y!r} is not on the far side of basepoint {p!r}")
        renames[p] = y
    extra = set(choices) - set(renames)
    if extra:
        raise BadChoice(f"basepoints {sorted(extra)} do not meet vertex {v}")
    target = label.relabel(renames)
    witness = find_exact_minor(M, target)
    if witness is None:  # pragma: no cover - would contradict the tree theory
        raise BadChoice("no minor of M realises the relabelled vertex")
    return target, witness
