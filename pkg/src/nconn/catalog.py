"""Named matroids, the composition grammar, and exhaustive enumeration.

Names: ``U(r,n)``, ``MW(n)`` (wheel), ``W(r)`` (whirl), ``MK4``, ``Q6``,
``P6``, ``MK23``.  Expressions combine them left to right:

* ``A+B``     direct sum
* ``A~B@p``   2-sum identifying element ``p`` of both sides
* ``A||B@p``  parallel connection at ``p``
* ``A*``      dual

Labels on the right operand that clash with the left are renamed to fresh
letters; parentheses group.
"""

from __future__ import annotations

import itertools
import json
import logging
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional, Sequence

from .constructions import (
    add_parallel,
    add_series,
    circuit_hyperplanes,
    direct_sum,
    parallel_connection,
    relax,
    truncation,
    two_sum,
)
from .core import (
    MAX_ELEMENTS,
    Matroid,
    component_masks,
    default_labels,
    dual,
    from_graph,
    is_connected,
    is_cosimple,
    is_simple,
    is_uniform,
    popcount,
    uniform,
)
from .errors import CapExceeded, UnknownName, UnsupportedN

log = logging.getLogger(__name__)

ENUM_VERSION = "1"
ENUM_CAP = 8


# -- named matroids ----------------------------------------------------------


def wheel(n: int) -> Matroid:
    """M(W_n): spokes s1..sn, rim edges r1..rn (r_i joins rim vertices i, i+1)."""
    if n < 2:
        raise UnknownName("wheels need at least two spokes")
    edges = [("h", f"v{i}", f"s{i}") for i in range(1, n + 1)]
    edges += [(f"v{i}", f"v{i % n + 1}", f"r{i}") for i in range(1, n + 1)]
    M = from_graph(edges)
    return M.reorder([f"s{i}" for i in range(1, n + 1)] + [f"r{i}" for i in range(1, n + 1)])


def mk4() -> Matroid:
    return from_graph(
        [(1, 2, "a"), (1, 3, "b"), (1, 4, "c"), (2, 3, "d"), (2, 4, "e"), (3, 4, "f")]
    )


def mk23() -> Matroid:
    return from_graph(
        [("u1", "w1", "a"), ("u2", "w1", "b"), ("u1", "w2", "c"),
         ("u2", "w2", "d"), ("u1", "w3", "e"), ("u2", "w3", "f")]
    )


def relaxation_chain() -> list[Matroid]:
    """M(K4), W^3, Q6, P6, U(3,6), each relaxing the next triangle of M(K4)."""
    K = mk4()
    triangles = sorted(circuit_hyperplanes(K), key=K.mask)
    chain = [K]
    for tri in triangles:
        chain.append(relax(chain[-1], tri))
    return chain


def whirl(r: int) -> Matroid:
    if r < 2:
        raise UnknownName("whirls need rank at least two")
    if r == 3:
        return relaxation_chain()[1]
    W = wheel(r)
    return relax(W, [f"r{i}" for i in range(1, r + 1)])


_SIMPLE_NAMES: dict[str, Callable[[], Matroid]] = {
    "MK4": mk4,
    "MK23": mk23,
    "Q6": lambda: relaxation_chain()[2],
    "P6": lambda: relaxation_chain()[3],
}


def _named_atom(name: str) -> Matroid:
    name = name.strip()
    if name in _SIMPLE_NAMES:
        return _SIMPLE_NAMES[name]()
    m = re.fullmatch(r"U\((\d+),(\d+)\)", name)
    if m:
        r, n = int(m.group(1)), int(m.group(2))
        if r > n:
            raise UnknownName(f"{name}: rank exceeds size")
        if n > MAX_ELEMENTS:
            raise CapExceeded(f"{name} exceeds the element cap")
        return uniform(r, n)
    m = re.fullmatch(r"MW\((\d+)\)", name)
    if m:
        return wheel(int(m.group(1)))
    m = re.fullmatch(r"W\((\d+)\)", name)
    if m:
        return whirl(int(m.group(1)))
    raise UnknownName(f"unknown matroid name {name!r}")


_TOKEN = re.compile(r"\s*(\|\||[+~()*@]|[A-Za-z][A-Za-z0-9]*\(\d+(?:,\d+)?\)|[A-Za-z0-9_]+)")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise UnknownName(f"cannot parse {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def _fresh_letters(used: set[str], k: int) -> list[str]:
    pool = [x for x in default_labels(26) if x not in used]
    i = 0
    while len(pool) < k:
        if f"e{i}" not in used:
            pool.append(f"e{i}")
        i += 1
    return pool[:k]


def _disjoin(A: Matroid, B: Matroid, keep: Optional[str] = None) -> Matroid:
    """Rename B's labels that clash with A (except ``keep``)."""
    clash = [x for x in B.labels if x in set(A.labels) and x != keep]
    if not clash:
        return B
    fresh = _fresh_letters(set(A.labels) | set(B.labels), len(clash))
    return B.relabel(dict(zip(clash, fresh)))


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.text = text

    def peek(self) -> Optional[str]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise UnknownName(f"unexpected end of {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Matroid:
        M = self.expr()
        if self.peek() is not None:
            raise UnknownName(f"trailing input in {self.text!r}: {self.tokens[self.i:]}")
        return M

    def expr(self) -> Matroid:
        M = self.term()
        while self.peek() in ("+", "~", "||"):
            op = self.take()
            R = self.term()
            if op == "+":
                M = direct_sum(M, _disjoin(M, R))
                continue
            if self.take() != "@":
                raise UnknownName(f"{op} needs a basepoint: A{op}B@p")
            p = self.take()
            R = _disjoin(M, R, keep=p)
            M = two_sum(M, R, p) if op == "~" else parallel_connection(M, R, p)
        return M

    def term(self) -> Matroid:
        tok = self.take()
        if tok == "(":
            M = self.expr()
            if self.take() != ")":
                raise UnknownName(f"unbalanced parentheses in {self.text!r}")
        else:
            M = _named_atom(tok)
        while self.peek() == "*":
            self.take()
            M = dual(M)
        return M


def named(name: str) -> Matroid:
    """Catalog matroid or composition expression (see module docstring)."""
    return _named_cached(name.replace(" ", ""))


@lru_cache(maxsize=256)
def _named_cached(name: str) -> Matroid:
    return _Parser(name).parse()


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    recipe: str
    rank: int
    size: int
    circuit_sizes: tuple[int, ...]

    def build(self) -> Matroid:
        return named(self.name)

    def check(self) -> bool:
        M = self.build()
        sizes = tuple(sorted(popcount(c) for c in M.circuit_masks()))
        return (M.rank(), M.n, sizes) == (self.rank, self.size, self.circuit_sizes)


CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry("U(2,4)", "uniform", 2, 4, (3, 3, 3, 3)),
    CatalogEntry("U(1,2)", "uniform", 1, 2, (2,)),
    CatalogEntry("U(3,6)", "uniform", 3, 6, (4,) * 15),
    CatalogEntry("MW(2)", "graphic", 2, 4, (2, 3, 3)),
    CatalogEntry("MK4", "graphic", 3, 6, (3, 3, 3, 3, 4, 4, 4)),
    CatalogEntry("MK23", "graphic", 4, 6, (4, 4, 4)),
    CatalogEntry("W(2)", "relaxation", 2, 4, (3, 3, 3, 3)),
    CatalogEntry("W(3)", "relaxation", 3, 6, (3, 3, 3) + (4,) * 6),
    CatalogEntry("Q6", "relaxation", 3, 6, (3, 3) + (4,) * 9),
    CatalogEntry("P6", "relaxation", 3, 6, (3,) + (4,) * 12),
    CatalogEntry("U(1,2)+U(1,1)", "composition", 2, 3, (2,)),
)


# Unavoidable minors through a triple in a 3-connected matroid of rank and corank at least 3.
def triple_oracle_list() -> list[tuple[str, Matroid]]:
    chain = relaxation_chain()
    return [("U(3,6)", chain[4]), ("P6", chain[3]), ("Q6", chain[2]), ("W(3)", chain[1]), ("MK4", chain[0])]


# -- enumeration -------------------------------------------------------------


def linear_subclasses(M: Matroid) -> list[frozenset[int]]:
    """All linear subclasses of the hyperplanes of M (as sets of flat masks)."""
    r = M.rank()
    t = M.rank_table
    flats = M.flat_masks()
    hyper = [f for f in flats if t[f] == r - 1]
    colines = [f for f in flats if t[f] == r - 2]
    lines = [[k for k, h in enumerate(hyper) if h & L == L] for L in colines]
    through: list[list[int]] = [[] for _ in hyper]
    for li, members in enumerate(lines):
        for k in members:
            through[k].append(li)

    def close(chosen: set[int]) -> set[int]:
        todo = list(chosen)
        chosen = set(chosen)
        while todo:
            k = todo.pop()
            for li in through[k]:
                members = lines[li]
                if sum(1 for m in members if m in chosen) >= 2:
                    for m in members:
                        if m not in chosen:
                            chosen.add(m)
                            todo.append(m)
        return chosen

    out: list[frozenset[int]] = []

    def rec(k: int, chosen: set[int], excluded: set[int]):
        while k < len(hyper) and (k in chosen or k in excluded):
            k += 1
        if k == len(hyper):
            out.append(frozenset(hyper[i] for i in chosen))
            return
        rec(k + 1, chosen, excluded | {k})
        grown = close(chosen | {k})
        if not grown & excluded:
            rec(k + 1, grown, excluded)

    rec(0, set(), set())
    return out


def modular_cuts(M: Matroid) -> list[frozenset[int]]:
    """Every modular cut of M, the empty cut first."""
    flats = M.flat_masks()
    t = M.rank_table
    r = M.rank()
    hyper = [f for f in flats if t[f] == r - 1]
    cuts = [frozenset()]
    for sub in linear_subclasses(M):
        cuts.append(
            frozenset(f for f in flats if all(h in sub for h in hyper if h & f == f))
        )
    return cuts


def extend(M: Matroid, cut: frozenset[int], label: str) -> Matroid:
    """Single-element extension of M by the modular cut ``cut``."""
    n, t = M.n, M.rank_table
    closure = [M.closure_mask(x) for x in range(1 << n)]
    upper = bytes(t[x] if closure[x] in cut else t[x] + 1 for x in range(1 << n))
    return Matroid(M.labels + (label,), t + upper)


def _cache_path(n: int) -> Optional[Path]:
    root = os.environ.get("MATROID_CACHE_DIR")
    if not root:
        return None
    return Path(root) / f"matroids-n{n}-v{ENUM_VERSION}.ndjson"


def _load(path: Path) -> Optional[list[Matroid]]:
    from .io import from_document

    try:
        lines = path.read_text().splitlines()
    except OSError:
        return None
    out = []
    for line in lines:
        if line.strip():
            out.append(from_document(json.loads(line)["matroid"], validate=False))
    return out


def _save(path: Path, classes: list[Matroid]) -> None:
    from .io import to_document
    from .isominor import fingerprint

    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with tmp.open("w") as fh:
        for M in classes:
            fp = fingerprint(M)
            header = f"r{fp.rank}n{fp.size}c{''.join(map(str, fp.circuit_sizes))}"
            fh.write(json.dumps({"fingerprint": header, "matroid": to_document(M)}) + "\n")
    tmp.replace(path)


@lru_cache(maxsize=None)
def _classes(n: int) -> tuple[Matroid, ...]:
    if n == 0:
        return (Matroid((), b"\x00"),)
    path = _cache_path(n)
    if path is not None and path.exists():
        loaded = _load(path)
        if loaded is not None:
            return tuple(loaded)
    from .isominor import fingerprint, isomorphic

    label = default_labels(n)[n - 1]
    buckets: dict = {}
    reps: list[Matroid] = []
    for parent in _classes(n - 1):
        for cut in modular_cuts(parent):
            E = extend(parent, cut, label)
            bucket = buckets.setdefault(fingerprint(E), [])
            if any(isomorphic(E, R) is not None for R in bucket):
                continue
            bucket.append(E)
            reps.append(E)
    log.info("enumerated %d classes on %d elements", len(reps), n)
    if path is not None:
        _save(path, reps)
    return tuple(reps)


def enumerate_classes(
    n: int,
    *,
    connected: bool = False,
    simple: bool = False,
    cosimple: bool = False,
    three_connected: bool = False,
    binary: Optional[bool] = None,
    min_rank: int = 0,
    max_rank: Optional[int] = None,
    cap: int = ENUM_CAP,
) -> list[Matroid]:
    """One representative per isomorphism class of matroids on ``n`` elements."""
    if n > cap:
        raise CapExceeded(f"enumeration is limited to {cap} elements")
    if n < 0:
        return []
    from .connectivity import is_k_connected
    from .core import is_binary

    out = []
    for M in _classes(n):
        r = M.rank()
        if r < min_rank or (max_rank is not None and r > max_rank):
            continue
        if connected and not is_connected(M):
            continue
        if simple and not is_simple(M):
            continue
        if cosimple and not is_cosimple(M):
            continue
        if three_connected and not is_k_connected(M, 3):
            continue
        if binary is not None and is_binary(M) != binary:
            continue
        out.append(M)
    return out


def enumerate_up_to(max_n: int, **filters) -> list[Matroid]:
    out = []
    for n in range(max_n + 1):
        out.extend(enumerate_classes(n, **filters))
    return out


# -- proof constructions -----------------------------------------------------


@dataclass(frozen=True)
class Construction:
    step: str
    matroid: Matroid


def _uniform_params(N: Matroid) -> Optional[tuple[int, int]]:
    return (N.rank(), N.n) if is_uniform(N) else None


def _components(N: Matroid) -> list[Matroid]:
    from .constructions import restrict

    return [restrict(N, N.subset(c)) for c in component_masks(N)]


def _loops_coloops_only(N: Matroid) -> Optional[tuple[int, int]]:
    """(#loops, #coloops) when every element is one or the other."""
    loops, coloops = N.loops(), N.coloops()
    if len(loops) + len(coloops) == N.n:
        return len(loops), len(coloops)
    return None


def heredity_constructions(N: Matroid) -> list[Construction]:
    """Counterexamples built in the proof that only U(1,2), U(0,2), U(2,2)
    are hereditary under single-element removal."""
    from .connectivity import reduce_preserving

    out: list[Construction] = []
    up = _uniform_params(N)
    lc = _loops_coloops_only(N)
    if up and is_connected(N) and is_simple(N) and N.n >= 3:
        r, n = up
        big = uniform(r, n + 1)
        copy1 = big.relabel({x: f"{x}1" for x in big.labels})
        copy2 = big.relabel({x: f"{x}2" for x in big.labels})
        g1, g2 = copy1.labels[0], copy2.labels[0]
        M3 = parallel_connection(copy1, copy2, g1, g2).relabel({g1: "g"})
        out.append(Construction("heredity:M3 parallel connection of two N-connected copies", M3))
        keep = {"g", copy1.labels[1], copy1.labels[2]}
        remove = [x for x in copy1.labels if x not in keep and x != g1]
        M4 = reduce_preserving(M3, N, remove)
        if M4 is not None:
            out.append(Construction("heredity:M4 reduction keeping {e,f,g}", M4))
    elif up and is_connected(N) and is_cosimple(N) and N.n >= 3:
        for c in heredity_constructions(dual(N)):
            out.append(Construction(c.step + " (dual)", dual(c.matroid)))
    elif lc is not None:
        loops, coloops = lc
        if loops == 0 and coloops >= 3:
            out.append(Construction("heredity:U(2,3)+U(n-2,n-2)", named(f"U(2,3)+U({coloops - 2},{coloops - 2})")))
        elif coloops == 0 and loops >= 3:
            out.append(Construction("heredity:U(1,3)+U(0,n-2) (dual)", named(f"U(1,3)+U(0,{loops - 2})")))
        elif loops == 1 and coloops == 1:
            out.append(Construction("heredity:M(K4) for U(0,1)+U(1,1)", mk4()))
        elif loops >= 2 and coloops >= 1:
            out.append(Construction("heredity:U(0,n+1)+U(m,m)", named(f"U(0,{loops + 1})+U({coloops},{coloops})")))
        elif coloops >= 2 and loops >= 1:
            out.append(Construction("heredity:U(n+1,n+1)+U(0,m) (dual)", named(f"U({coloops + 1},{coloops + 1})+U(0,{loops})")))
    return out


def transitivity_constructions(N: Matroid) -> list[Construction]:
    """Extensions of N used to refute the transitivity property."""
    out: list[Construction] = []
    if _uniform_params(N) == (2, 2):
        out.append(Construction("transitivity:U(1,2)+U(1,1)", named("U(1,2)+U(1,1)")))
    if _uniform_params(N) == (0, 2):
        out.append(Construction("transitivity:U(1,2)+U(0,1)", named("U(1,2)+U(0,1)")))
    new = "x0"
    while new in N.labels:
        new += "'"
    for i, e in enumerate(N.labels):
        if N.rank_table[1 << i] > 0:
            out.append(Construction(f"transitivity:parallel extension at {e}", add_parallel(N, e, new)))
    for i, e in enumerate(N.labels):
        if N.rank_table[N.full ^ (1 << i)] == N.rank():
            out.append(Construction(f"transitivity:series extension at {e}", add_series(N, e, new)))
    out.extend(_n01_constructions(N))
    return out


def _two_circuit(C: Matroid) -> Optional[tuple[str, str]]:
    for c in C.circuit_masks():
        if popcount(c) == 2:
            a, b = C.ordered(c)
            return a, b
    return None


def _fresh(used: set[str], base: str) -> str:
    k = 0
    while f"{base}{k}" in used:
        k += 1
    used.add(f"{base}{k}")
    return f"{base}{k}"


def _n01_constructions(N: Matroid) -> list[Construction]:
    from .constructions import restrict

    comps = component_masks(N)
    if len(comps) < 2:
        return []
    size = max(popcount(c) for c in comps)
    big = [c for c in comps if popcount(c) == size]
    out: list[Construction] = []
    used = set(N.labels)
    if len(big) >= 2:
        N0, N1 = restrict(N, N.subset(big[0])), restrict(N, N.subset(big[1]))
        p0, p1 = _two_circuit(N0), _two_circuit(N1)
        if p0 and p1:
            c0, c1, z = _fresh(used, "c"), _fresh(used, "c"), _fresh(used, "z")
            A = add_series(N0, p0[1], c0)
            B = add_series(N1, p1[1], c1)
            tri = uniform(2, 3, (c0, z, c1))
            P = parallel_connection(parallel_connection(tri, A, c0), B, c1)
            N01 = truncation(P)
            rest = N.full & ~(big[0] | big[1])
            Np = direct_sum(N01, restrict(N, N.subset(rest))) if rest else N01
            out.append(Construction("transitivity:N01 truncated parallel connection", Np))
    mw2 = wheel(2)
    from .isominor import isomorphic

    if len(big) == 1 and isomorphic(restrict(N, N.subset(big[0])), mw2) is not None:
        for c in comps:
            if c == big[0]:
                continue
            C = restrict(N, N.subset(c))
            k = C.n
            if C.rank() == 1 and is_uniform(C) and k in (2, 3):
                c0, c1, z = _fresh(used, "c"), _fresh(used, "c"), _fresh(used, "z")
                tri = uniform(2, 3, (c0, z, c1))
                A = uniform(2, k + 1, [c0] + [_fresh(used, "u") for _ in range(k)])
                B = uniform(2, k + 1, [c1] + [_fresh(used, "v") for _ in range(k)])
                N01 = parallel_connection(parallel_connection(tri, A, c0), B, c1)
                rest = N.full & ~(big[0] | c)
                Np = direct_sum(N01, restrict(N, N.subset(rest))) if rest else N01
                out.append(Construction("transitivity:final M(W2)+U(1,k) construction", Np))
                break
    return out


def proof_constructions(N: Matroid) -> list[Construction]:
    out = heredity_constructions(N) + transitivity_constructions(N)
    if not out:
        raise UnsupportedN("no proof construction applies to this matroid")
    return out


# -- random 2-sum compositions ----------------------------------------------

COMPOSITION_POOL = (
    "U(2,3)", "U(1,3)", "U(2,4)", "U(2,5)", "U(3,5)", "U(3,4)", "U(1,4)",
    "MK4", "W(3)", "Q6", "P6", "U(3,6)", "MW(2)",
)


def random_composition(rng, max_elements: int = 12, pool: Sequence[str] = COMPOSITION_POOL,
                       stop: float = 0.25) -> Matroid:
    """A connected matroid built by 2-summing random catalog atoms at random
    elements; labels are ``x0, x1, ...``."""
    counter = itertools.count()

    def fresh(A: Matroid) -> Matroid:
        return A.relabel({x: f"x{next(counter)}" for x in A.labels})

    atoms = [named(name) for name in pool]
    M = fresh(rng.choice([A for A in atoms if A.n <= max_elements]))
    while rng.random() > stop:
        fits = [A for A in atoms if M.n + A.n - 2 <= max_elements]
        if not fits:
            break
        A = fresh(rng.choice(fits))
        e = rng.choice(M.labels)
        f = rng.choice(A.labels)
        M = two_sum(M, A.relabel({f: e}), e)
    return M.relabel({x: f"x{i}" for i, x in enumerate(M.labels)})
