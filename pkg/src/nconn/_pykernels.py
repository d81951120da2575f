"""Pure-Python implementations of the bitmask kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
Subsets of an ``n``-element ground set are ints; a rank table is a ``bytes``
object of length ``2**n`` indexed by subset mask.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

BACKEND = "python"


def _popcounts(n: int) -> bytearray:
    pc = bytearray(1 << n)
    for x in range(1, 1 << n):
        pc[x] = pc[x >> 1] + (x & 1)
    return pc


def _rank_from_independent(n: int, indep: bytearray) -> bytes:
    size = 1 << n
    pc = _popcounts(n)
    rank = bytearray(size)
    for x in range(1, size):
        if indep[x]:
            rank[x] = pc[x]
            continue
        best = 0
        y = x
        while y:
            low = y & -y
            v = rank[x ^ low]
            if v > best:
                best = v
            y ^= low
        rank[x] = best
    return bytes(rank)


def rank_from_bases(n: int, bases: Sequence[int]) -> bytes:
    """Rank table of the matroid whose bases are ``bases``."""
    size = 1 << n
    indep = bytearray(size)
    for b in bases:
        indep[b] = 1
    full = size - 1
    for x in range(full, -1, -1):
        if indep[x]:
            continue
        rest = full ^ x
        while rest:
            low = rest & -rest
            if indep[x | low]:
                indep[x] = 1
                break
            rest ^= low
    return _rank_from_independent(n, indep)


def rank_from_circuits(n: int, circuits: Iterable[int]) -> bytes:
    size = 1 << n
    dep = bytearray(size)
    for c in circuits:
        dep[c] = 1
    for x in range(1, size):
        if dep[x]:
            continue
        y = x
        while y:
            low = y & -y
            if dep[x ^ low]:
                dep[x] = 1
                break
            y ^= low
    indep = bytearray(1 - d for d in dep)
    return _rank_from_independent(n, indep)


def dual_table(rank: bytes, n: int) -> bytes:
    full = (1 << n) - 1
    r = rank[full]
    pc = _popcounts(n)
    return bytes(pc[x] + rank[full ^ x] - r for x in range(1 << n))


def minor_table(rank: bytes, n: int, keep: int, contract: int) -> bytes:
    """Rank table of ``M / contract`` restricted to ``keep`` (compressed)."""
    pos = [1 << i for i in range(n) if keep >> i & 1]
    m = len(pos)
    base = rank[contract]
    expand = [0] * (1 << m)
    out = bytearray(1 << m)
    out[0] = 0
    for y in range(1, 1 << m):
        low = y & -y
        expand[y] = expand[y ^ low] | pos[low.bit_length() - 1]
        out[y] = rank[expand[y] | contract] - base
    return bytes(out)


def kappa(rank: bytes, n: int, a: int, b: int) -> int:
    """min lambda(X) over A <= X <= E - B, by exhaustion."""
    full = (1 << n) - 1
    r = rank[full]
    free = full & ~(a | b)
    best = 1 << 30
    y = 0
    while True:
        x = a | y
        lam = rank[x] + rank[full ^ x] - r
        if lam < best:
            best = lam
            if best == 0:
                return 0
        if y == free:
            break
        y = (y - free) & free
    return best


def exchange_violation(bases: Sequence[int]) -> Optional[tuple[int, int, int]]:
    """Return ``(B1, B2, x)`` for the first failed basis exchange, else None."""
    family = set(bases)
    for b1 in bases:
        for b2 in bases:
            d1 = b1 & ~b2
            if not d1:
                continue
            d2 = b2 & ~b1
            while d1:
                x = d1 & -d1
                d1 ^= x
                rem = b1 ^ x
                y = d2
                ok = False
                while y:
                    low = y & -y
                    if (rem | low) in family:
                        ok = True
                        break
                    y ^= low
                if not ok:
                    return (b1, b2, x)
    return None


def _subsets_of_size(pool: int, k: int):
    """Subsets of ``pool`` with ``k`` elements, in increasing mask order."""
    bits = [1 << i for i in range(pool.bit_length()) if pool >> i & 1]
    m = len(bits)
    if k < 0 or k > m:
        return
    if k == 0:
        yield 0
        return
    # Gosper's hack on compressed indices; expansion is monotone.
    c = (1 << k) - 1
    limit = 1 << m
    while c < limit:
        x = 0
        y = c
        while y:
            low = y & -y
            x |= bits[low.bit_length() - 1]
            y ^= low
        yield x
        low = c & -c
        ripple = c + low
        c = (((ripple ^ c) >> 2) // low) | ripple


def _signature(rank: bytes, ground: int, contract: int, target: int, combos: Sequence[Sequence[int]]) -> int:
    pos = [1 << i for i in range(ground.bit_length()) if ground >> i & 1]
    sig = 0
    for j, combo in enumerate(combos):
        x = contract
        for i in combo:
            x |= pos[i]
        if rank[x] == target:
            sig |= 1 << j
    return sig


def scan_grounds(
    rank: bytes,
    n: int,
    m: int,
    kc: int,
    combos: Sequence[Sequence[int]],
    sigs,
    required: int,
) -> list[tuple[int, int, int]]:
    """For every m-subset S containing ``required``, the first contract set C
    (increasing mask order) with ``M/C|S`` in ``sigs``.

    Returns ``(S, C, signature)`` triples in increasing order of S.
    """
    full = (1 << n) - 1
    rm = rank[full]
    out = []
    for extra in _subsets_of_size(full & ~required, m - _pc(required)):
        s = required | extra
        for c in _subsets_of_size(full & ~s, kc):
            if rank[c] != kc or rank[s | c] != rm:
                continue
            sig = _signature(rank, s, c, rm, combos)
            if sig in sigs:
                out.append((s, c, sig))
                break
    return out


def first_witness(
    rank: bytes,
    n: int,
    m: int,
    kc: int,
    combos: Sequence[Sequence[int]],
    sigs,
    required: int,
) -> Optional[tuple[int, int, int]]:
    """First ``(C, D, signature)`` by increasing C then increasing D."""
    full = (1 << n) - 1
    rm = rank[full]
    kd = n - m - kc
    if kd < 0:
        return None
    for c in _subsets_of_size(full & ~required, kc):
        if rank[c] != kc:
            continue
        for d in _subsets_of_size(full & ~(required | c), kd):
            s = full & ~(c | d)
            if rank[s | c] != rm:
                continue
            sig = _signature(rank, s, c, rm, combos)
            if sig in sigs:
                return (c, d, sig)
    return None


def _pc(x: int) -> int:
    return bin(x).count("1")
