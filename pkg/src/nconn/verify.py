"""Exhaustive and seeded-random verification suites T1..T17.

Each suite is a list of :class:`Check` objects; a check applies a top-level
predicate to every instance of its universe, so instances can be farmed out
to worker processes without changing the (ordered) result.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .catalog import (
    enumerate_up_to,
    heredity_constructions,
    named,
    random_composition,
    triple_oracle_list,
)
from .connectivity import (
    check_special_fan_lemma,
    hereditary_removal_check,
    is_k_connected,
    kappa,
    search_transitivity_counterexample,
)
from .constructions import minor_masks
from .core import (
    Matroid,
    clonal_classes,
    dual,
    free_elements,
    is_binary,
    is_connected,
    is_simple,
    is_cosimple,
    is_uniform,
)
from .io import to_document
from .isominor import covered_tuples, is_n_connected, pair_relation
from .treedecomp import (
    canonical_tree,
    general_condition,
    mk4_vertex_condition,
    reconstruct,
    tree_signature,
    u24_condition,
    u34_forbidden_config,
)

PASS, FAIL, CONJECTURE_PASS = "pass", "fail", "conjecture-pass"
MAX_COUNTEREXAMPLES = 20


@dataclass
class Check:
    name: str
    instances: Sequence[Matroid]
    predicate: Callable[..., tuple[bool, Any]]
    args: tuple = ()
    universe: str = ""


@dataclass
class VerificationReport:
    theorem_id: str
    title: str
    universe: list[str]
    instances_checked: int
    per_size: dict[int, int]
    status: str
    counterexamples: list[dict[str, Any]] = field(default_factory=list)
    wall_time: float = 0.0
    failures: int = 0
    checks: list[dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_json(self, timing: bool = False) -> dict[str, Any]:
        doc = {
            "theorem_id": self.theorem_id,
            "title": self.title,
            "universe": self.universe,
            "instances_checked": self.instances_checked,
            "per_size": {str(k): v for k, v in sorted(self.per_size.items())},
            "status": self.status,
            "failures": self.failures,
            "checks": self.checks,
            "counterexamples": self.counterexamples,
        }
        if timing:
            doc["wall_time"] = round(self.wall_time, 3)
        return doc


@dataclass
class Context:
    max_n: int = 7
    seed: int = 0

    def classes(self, min_n: int = 0, **filters) -> list[Matroid]:
        return [M for M in enumerate_up_to(self.max_n, **filters) if M.n >= min_n]

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")


# -- predicates (module level so worker processes can pickle them) ----------


def _nc(M: Matroid, name: str) -> bool:
    return is_n_connected(M, named(name))


def p_equiv(M: Matroid, name: str, rhs: str) -> tuple[bool, Any]:
    lhs = _nc(M, name)
    expected = RHS[rhs](M)
    return lhs == expected, {"N": name, "n_connected": lhs, "expected": expected}


def _u2n(M: Matroid) -> bool:
    return is_uniform(M) and M.rank() == 2 and M.n >= 5


def _rank_corank3(M: Matroid) -> bool:
    return M.rank() >= 3 and M.n - M.rank() >= 3


def _t9(M: Matroid) -> bool:
    return not M.loops() and len(M.coloops()) <= 1 and len(free_elements(M)) <= 1


RHS: dict[str, Callable[[Matroid], bool]] = {
    "connected_simple": lambda M: is_connected(M) and is_simple(M),
    "connected_cosimple": lambda M: is_connected(M) and is_cosimple(M),
    "connected_nonuniform": lambda M: is_connected(M) and not is_uniform(M),
    "u14": lambda M: _u2n(M) or _rank_corank3(M),
    "u34": lambda M: _u2n(dual(M)) or _rank_corank3(M),
    "simple_rank2": lambda M: is_simple(M) and M.rank() >= 2,
    "simple_rank3": lambda M: is_simple(M) and M.rank() >= 3,
    "clones_trivial": lambda M: all(len(c) == 1 for c in clonal_classes(M)),
    "t9": _t9,
    "t9_dual": lambda M: _t9(dual(M)),
}


def p_u24_tree(M: Matroid) -> tuple[bool, Any]:
    T = canonical_tree(M)
    a, b = u24_condition(T), _nc(M, "U(2,4)")
    return a == b, {"tree_predicate": a, "n_connected": b}


def p_general_tree(M: Matroid, name: str) -> tuple[bool, Any]:
    T = canonical_tree(M)
    a, b = general_condition(T, named(name)), _nc(M, name)
    return a == b, {"N": name, "tree_predicate": a, "n_connected": b}


def p_u34_tree(M: Matroid) -> tuple[bool, Any]:
    T = canonical_tree(M)
    a, b = u34_forbidden_config(T), _nc(M, "U(3,4)")
    return a == b, {"configuration_absent": a, "n_connected": b}


def p_mk23_anchor(M: Matroid) -> tuple[bool, Any]:
    T = canonical_tree(M)
    whole = _nc(M, "U(3,4)")
    parts = [is_n_connected(L, named("U(3,4)")) for L in T.vertices]
    return whole and not any(parts), {"n_connected": whole, "vertex_flags": parts}


def p_heredity(M: Matroid, name: str) -> tuple[bool, Any]:
    rep = hereditary_removal_check(M, named(name))
    return rep.ok, {"N": name, "failures": rep.failures}


def p_construction(N_name: str, step: str, witness: str) -> tuple[bool, Any]:
    """The named proof construction is N-connected and fails heredity as claimed."""
    N = named(N_name)
    cons = [c for c in heredity_constructions(N) if c.step.startswith(step)]
    if not cons:
        return False, {"N": N_name, "error": f"no construction {step!r}"}
    M = cons[0].matroid
    if not is_n_connected(M, N):
        return False, {"N": N_name, "step": cons[0].step, "error": "construction is not N-connected"}
    rep = hereditary_removal_check(M, N)
    fails = rep.failures
    if witness == "some":
        ok = bool(fails)
    elif witness == "all":
        ok = sorted(fails) == sorted(M.labels)
    else:
        ok = sorted(fails) == sorted(M.coloops())
    return ok, {"N": N_name, "step": cons[0].step, "failures": fails, "matroid": to_document(M)}


def p_transitive(M: Matroid, name: str) -> tuple[bool, Any]:
    from .connectivity import is_transitive

    triple = None if M.n < 3 else is_transitive(M, named(name))
    return triple is None, {"N": name, "triple": triple}


def p_transitivity_counterexample(N_name: str, max_n: int, max_size: Optional[int]) -> tuple[bool, Any]:
    found = search_transitivity_counterexample(named(N_name), max_n=max_n)
    if found is None:
        return False, {"N": N_name, "error": "no counterexample in the universe"}
    ok = max_size is None or found.matroid.n <= max_size
    return ok, {
        "N": N_name,
        "source": found.source,
        "triple": list(found.triple),
        "matroid": to_document(found.matroid),
    }


def p_fan_lemma(M: Matroid) -> tuple[bool, Any]:
    rep = check_special_fan_lemma(M)
    return rep.ok, {"violations": rep.violations}


def p_u24_pairs(M: Matroid) -> tuple[bool, Any]:
    R = pair_relation(M, named("U(2,4)"))
    return R.is_complete(), {"missing": R.missing()[:5]}


def _all_triples_covered(M: Matroid, Ns: Sequence[Matroid]) -> tuple[bool, list]:
    got = covered_tuples(M, Ns, 3)
    missing = []
    for t in itertools.combinations(range(M.n), 3):
        x = sum(1 << i for i in t)
        if x not in got:
            missing.append(sorted(M.subset(x)))
    return not missing, missing


def p_triple_list(M: Matroid) -> tuple[bool, Any]:
    ok, missing = _all_triples_covered(M, [N for _, N in triple_oracle_list()])
    return ok, {"missing": missing[:5]}


def p_mk4_triples(M: Matroid) -> tuple[bool, Any]:
    covered, missing = _all_triples_covered(M, [named("MK4")])
    cond = mk4_vertex_condition(canonical_tree(M))
    return covered == cond, {"all_triples": covered, "vertex_condition": cond, "missing": missing[:5]}


def p_kappa(M: Matroid, seed: str) -> tuple[bool, Any]:
    """Random minor and random disjoint A, B: kappa does not grow in the minor."""
    rng = random.Random(seed)
    order = list(range(M.n))
    rng.shuffle(order)
    k = rng.randint(0, max(0, M.n - 2))
    removed = order[:k]
    c = d = 0
    for i in removed:
        if rng.random() < 0.5:
            c |= 1 << i
        else:
            d |= 1 << i
    N = minor_masks(M, c, d)
    labels = list(N.labels)
    rng.shuffle(labels)
    a_size = rng.randint(0, len(labels))
    b_size = rng.randint(0, len(labels) - a_size)
    A, B = labels[:a_size], labels[a_size:a_size + b_size]
    kn, km = kappa(N, A, B), kappa(M, A, B)
    return kn <= km, {"contract": sorted(M.subset(c)), "delete": sorted(M.subset(d)),
                      "A": sorted(A), "B": sorted(B), "kappa_minor": kn, "kappa": km}


def p_tree_unique(M: Matroid, seed: str, orders: int) -> tuple[bool, Any]:
    T0 = canonical_tree(M)
    if reconstruct(T0) != M:
        return False, {"error": "reconstruction differs"}
    sig = tree_signature(T0)
    rng = random.Random(seed)
    for k in range(orders):
        T = canonical_tree(M, rng)
        if tree_signature(T) != sig:
            return False, {"error": f"split order {k} gives a different tree"}
        if reconstruct(T) != M:
            return False, {"error": f"split order {k} does not reconstruct"}
    return True, {"vertices": len(T0.vertices)}


# -- suites ------------------------------------------------------------------


def _equiv_checks(ctx: Context, pairs, min_n: int = 0, **filters) -> list[Check]:
    inst = ctx.classes(min_n, **filters)
    desc = _universe_desc(ctx, min_n, filters)
    return [Check(f"{N}-connected <=> {rhs}", inst, p_equiv, (N, rhs), desc) for N, rhs in pairs]


def _universe_desc(ctx: Context, min_n: int, filters: dict) -> str:
    parts = [f"all classes with {max(min_n, 0)} <= |E| <= {ctx.max_n}"]
    parts += [k for k, v in sorted(filters.items()) if v]
    return ", ".join(parts)


def suite_t1(ctx):
    return _equiv_checks(ctx, [("U(2,3)", "connected_simple"), ("U(1,3)", "connected_cosimple")])


def suite_t2(ctx):
    conn = ctx.classes(2, connected=True)
    rng = ctx.rng("T2")
    rand = [random_composition(rng, 12) for _ in range(200)]
    return [
        Check("U(2,4) tree condition", conn, p_u24_tree, (), _universe_desc(ctx, 2, {"connected": True})),
        Check("U(2,4) tree condition", rand, p_u24_tree, (), "200 random 2-sum compositions, |E| <= 12"),
    ]


def suite_t3(ctx):
    conn = ctx.classes(2, connected=True)
    rng = ctx.rng("T3")
    rand = [random_composition(rng, 12) for _ in range(200)]
    out = []
    for name in ("U(2,4)", "MK4", "W(3)"):
        out.append(Check(f"{name} general tree condition", conn, p_general_tree, (name,),
                         _universe_desc(ctx, 2, {"connected": True})))
        out.append(Check(f"{name} general tree condition", rand, p_general_tree, (name,),
                         "200 random 2-sum compositions, |E| <= 12"))
    return out


def suite_t4(ctx):
    return _equiv_checks(ctx, [("MW(2)", "connected_nonuniform")])


def suite_t5(ctx):
    return _equiv_checks(ctx, [("U(1,4)", "u14"), ("U(3,4)", "u34")], 2, three_connected=True)


def suite_t6(ctx):
    inst = [M for M in ctx.classes(2, connected=True, simple=True) if not is_k_connected(M, 3)]
    return [
        Check("U(3,4)-connected <=> configuration absent", inst, p_u34_tree, (),
              _universe_desc(ctx, 2, {"connected": True, "simple": True, "not 3-connected": True})),
        Check("U(3,4)-connected <=> configuration absent", [named("MK23")], p_u34_tree, (), "MK23"),
        Check("MK23 is U(3,4)-connected with no such vertex", [named("MK23")], p_mk23_anchor, (), "MK23"),
    ]


def suite_t7(ctx):
    return _equiv_checks(ctx, [("U(2,2)", "simple_rank2"), ("U(3,3)", "simple_rank3")])


def suite_t8(ctx):
    return _equiv_checks(ctx, [("U(0,1)+U(1,1)", "clones_trivial")], 2)


def suite_t9(ctx):
    return _equiv_checks(ctx, [("U(1,2)+U(1,1)", "t9"), ("U(1,2)+U(0,1)", "t9_dual")], 2)


def suite_t10(ctx):
    out = []
    for name in ("U(1,2)", "U(0,2)", "U(2,2)"):
        N = named(name)
        inst = [M for M in ctx.classes(3) if is_n_connected(M, N)]
        out.append(Check(f"{name} heredity", inst, p_heredity, (name,),
                         f"{name}-connected classes with 3 <= |E| <= {ctx.max_n}"))
    return out


def suite_t11(ctx):
    return [
        Check("U(2,3): M4 fails heredity", [named("U(2,3)")], _proxy,
              (p_construction, ("U(2,3)", "heredity:M4", "some")), "proof construction"),
        Check("U(3,3): U(2,3)+U(1,1) fails at its coloop", [named("U(3,3)")], _proxy,
              (p_construction, ("U(3,3)", "heredity:U(2,3)", "coloops")), "proof construction"),
        Check("U(0,1)+U(1,1): M(K4) fails at every element", [named("U(0,1)+U(1,1)")], _proxy,
              (p_construction, ("U(0,1)+U(1,1)", "heredity:M(K4)", "all")), "proof construction"),
    ]


TRANSITIVITY_FAILURES = ("U(2,2)", "U(0,2)", "U(2,3)", "U(1,3)", "U(2,4)", "U(1,4)", "U(3,4)", "U(2,5)")


def suite_t12(ctx):
    inst = ctx.classes(3)
    out = [
        Check(f"{name} transitive", inst, p_transitive, (name,), _universe_desc(ctx, 3, {}))
        for name in ("U(1,2)", "MW(2)")
    ]
    for name in TRANSITIVITY_FAILURES:
        bound = 3 if name == "U(2,2)" else None
        out.append(Check(f"{name} counterexample found", [named(name)], _proxy,
                         (p_transitivity_counterexample, (name, ctx.max_n, bound)),
                         f"enumerated classes |E| <= {ctx.max_n} plus extensions of N"))
    return out


def suite_t13(ctx):
    return [Check("special fan lemma", ctx.classes(), p_fan_lemma, (), _universe_desc(ctx, 0, {}))]


def suite_t14(ctx):
    three = ctx.classes(2, three_connected=True)
    nonbin = [M for M in three if not is_binary(M)]
    rc3 = [M for M in three if _rank_corank3(M)]
    return [
        Check("U(2,4) through every pair", nonbin, p_u24_pairs, (),
              _universe_desc(ctx, 2, {"three_connected": True, "non-binary": True})),
        Check("oracle list through every triple", rc3, p_triple_list, (),
              _universe_desc(ctx, 2, {"three_connected": True, "rank and corank >= 3": True})),
    ]


def suite_t15(ctx):
    inst = ctx.classes(3, connected=True, binary=True)
    return [Check("M(K4) triples <=> vertex condition", inst, p_mk4_triples, (),
                  _universe_desc(ctx, 3, {"connected": True, "binary": True}))]


def suite_t16(ctx):
    rng = ctx.rng("T16")
    pool = ctx.classes(1)
    inst, seeds = [], []
    for k in range(1000):
        if k % 2:
            M = random_composition(rng, 10)
        else:
            M = rng.choice(pool)
        inst.append(M)
        seeds.append(f"{ctx.seed}:T16:{k}")
    return [Check("kappa minor monotonicity", inst, _seeded, (p_kappa, tuple(seeds)),
                  "1000 seeded random (M, minor, A, B), |E(M)| <= 10")]


def suite_t17(ctx):
    inst = ctx.classes(2, connected=True)
    return [Check("canonical tree unique and reconstructs", inst, _seeded_tree, (ctx.seed, 10),
                  _universe_desc(ctx, 2, {"connected": True}) + ", 10 random split orders")]


def _proxy(_: Matroid, fn, args) -> tuple[bool, Any]:
    return fn(*args)


def _seeded(M: Matroid, fn, seeds, index: int = -1) -> tuple[bool, Any]:
    return fn(M, seeds[index])


def _seeded_tree(M: Matroid, seed: int, orders: int) -> tuple[bool, Any]:
    return p_tree_unique(M, f"{seed}:T17:{M!r}", orders)


SUITES: dict[str, tuple[str, Callable[[Context], list[Check]]]] = {
    "T1": ("U(2,3): connected and simple; U(1,3): connected and cosimple", suite_t1),
    "T2": ("U(2,4)-connectivity via the canonical tree", suite_t2),
    "T3": ("N-connectivity via the canonical tree for 3-connected N", suite_t3),
    "T4": ("M(W2): connected and non-uniform", suite_t4),
    "T5": ("3-connected U(1,4)/U(3,4)-connectivity", suite_t5),
    "T6": ("U(3,4)-connectivity via a forbidden tree configuration", suite_t6),
    "T7": ("U(n,n): simple with rank at least n", suite_t7),
    "T8": ("U(0,1)+U(1,1): all clonal classes trivial", suite_t8),
    "T9": ("U(1,2)+U(1,1) and its dual", suite_t9),
    "T10": ("heredity of U(1,2), U(0,2), U(2,2)", suite_t10),
    "T11": ("non-heredity constructions", suite_t11),
    "T12": ("transitivity property", suite_t12),
    "T13": ("special fans are components", suite_t13),
    "T14": ("unavoidable minors through pairs and triples", suite_t14),
    "T15": ("M(K4) through every triple of a binary matroid", suite_t15),
    "T16": ("kappa does not increase under minors", suite_t16),
    "T17": ("canonical tree uniqueness and reconstruction", suite_t17),
}

CONJECTURES = {"T3"}


def _run_index(payload):
    pred, args, M, i = payload
    if pred is _seeded:
        fn, seeds = args
        return _seeded(M, fn, seeds, i)
    return pred(M, *args)


def run(theorem_id: str, max_n: int = 7, seed: int = 0, jobs: int = 1) -> VerificationReport:
    if theorem_id not in SUITES:
        raise KeyError(theorem_id)
    title, build = SUITES[theorem_id]
    start = time.perf_counter()
    ctx = Context(max_n=max_n, seed=seed)
    checks = build(ctx)
    checked = failures = 0
    per_size: dict[int, int] = {}
    counterexamples: list[dict[str, Any]] = []
    universe: list[str] = []
    summary: list[dict[str, Any]] = []
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        for check in checks:
            if check.universe and check.universe not in universe:
                universe.append(check.universe)
            payloads = [(check.predicate, check.args, M, i) for i, M in enumerate(check.instances)]
            if pool is not None:
                results = list(pool.map(_run_index, payloads, chunksize=8))
            else:
                results = [_run_index(p) for p in payloads]
            row: dict[str, Any] = {"name": check.name, "instances": len(results),
                                   "failures": sum(1 for ok, _ in results if not ok)}
            # single-instance checks are searches; keep what they found
            if len(results) == 1 and results[0][0]:
                row["finding"] = results[0][1]
            summary.append(row)
            for M, (ok, data) in zip(check.instances, results):
                checked += 1
                per_size[M.n] = per_size.get(M.n, 0) + 1
                if ok:
                    continue
                failures += 1
                if len(counterexamples) < MAX_COUNTEREXAMPLES:
                    counterexamples.append({"check": check.name, "matroid": to_document(M), "data": data})
    finally:
        if pool is not None:
            pool.shutdown()
    if failures:
        status = FAIL
    elif theorem_id in CONJECTURES:
        status = CONJECTURE_PASS
    else:
        status = PASS
    return VerificationReport(theorem_id, title, universe, checked, per_size, status,
                              counterexamples, time.perf_counter() - start, failures, summary)
