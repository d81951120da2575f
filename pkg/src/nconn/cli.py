"""Command-line front end.

Exit codes: 0 ran and passed/answered, 1 property violated, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import catalog
from .connectivity import find_fans, kappa
from .core import (
    Matroid,
    clonal_classes,
    components,
    is_binary,
    is_connected,
    is_uniform,
)
from .errors import MatroidError
from .io import dumps, load_matroid, to_document
from .isominor import min_pair_kappa, has_minor_using, pair_relation
from .treedecomp import (
    canonical_tree,
    general_condition,
    mk4_vertex_condition,
    render_ascii,
    tree_to_json,
    u24_condition,
    u34_forbidden_config,
)
from .verify import SUITES, run

QUERIES = ("rank", "circuits", "cocircuits", "flats", "cyclic-flats", "clones",
           "components", "fans", "binary", "uniform")


class UsageError(Exception):
    pass


def _sets(family) -> list[list[str]]:
    return sorted((sorted(s) for s in family), key=lambda s: (len(s), s))


def _fmt_sets(family) -> str:
    return "\n".join("{" + ",".join(s) + "}" for s in _sets(family)) or "(none)"


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _load(source: str) -> Matroid:
    try:
        return load_matroid(source)
    except (MatroidError, OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot load {source!r}: {exc}") from None


# -- show --------------------------------------------------------------------


def cmd_show(args) -> int:
    M = _load(args.input)
    wanted = [q for q in QUERIES if getattr(args, q.replace("-", "_"))]
    data: dict = {"ground": list(M.labels), "size": M.n}
    for q in wanted or ["rank"]:
        if q == "rank":
            data["rank"] = M.rank()
        elif q == "circuits":
            data["circuits"] = _sets(M.circuits())
        elif q == "cocircuits":
            data["cocircuits"] = _sets(M.cocircuits())
        elif q == "flats":
            data["flats"] = _sets(M.flats())
        elif q == "cyclic-flats":
            data["cyclic-flats"] = _sets(M.cyclic_flats())
        elif q == "clones":
            data["clones"] = _sets(clonal_classes(M))
        elif q == "components":
            data["components"] = _sets(components(M))
        elif q == "fans":
            data["fans"] = [list(f.ordering) for f in find_fans(M)]
        elif q == "binary":
            data["binary"] = is_binary(M)
        elif q == "uniform":
            data["uniform"] = is_uniform(M)
    if args.json:
        data["matroid"] = to_document(M)
        sys.stdout.write(dumps(data))
        return 0
    print(f"ground: {{{','.join(M.labels)}}} ({M.n} elements)")
    for q in wanted or ["rank"]:
        value = data[q]
        if isinstance(value, bool):
            print(f"{q}: {_yes(value)}")
        elif isinstance(value, int):
            print(f"{q}: {value}")
        elif q == "fans":
            print(f"{q}: {len(value)}")
            for f in value:
                print("(" + ",".join(f) + ")")
        else:
            print(f"{q}: {len(value)}")
            print(_fmt_sets(value))
    return 0


# -- nconn -------------------------------------------------------------------


def cmd_nconn(args) -> int:
    M, N = _load(args.matroid), _load(args.n)
    if M.n < 2:
        raise UsageError("N-connectivity needs at least two elements")
    if args.pair:
        pair = [x.strip() for x in args.pair.split(",")]
        if len(pair) != 2 or pair[0] == pair[1]:
            raise UsageError("--pair takes two distinct elements, e.g. --pair a,b")
        for x in pair:
            if x not in M.labels:
                raise UsageError(f"unknown element {x!r}")
        w = has_minor_using(M, N, pair)
        doc = {"pair": pair, "related": w is not None, "witness": None if w is None else w.to_json(M)}
        if args.json:
            sys.stdout.write(dumps(doc))
        elif w is None:
            print(f"pair {pair[0]},{pair[1]}: no N-minor uses both")
            print(f"kappa: {kappa(M, [pair[0]], [pair[1]])}")
        else:
            print(f"pair {pair[0]},{pair[1]}: related")
            print(json.dumps(doc["witness"], sort_keys=True))
        return 0
    R = pair_relation(M, N)
    edges = [list(e) for e in R.sorted_edges()]
    missing = R.missing()
    total = M.n * (M.n - 1) // 2
    doc = {
        "connected": is_connected(M),
        "related_pairs": len(edges),
        "pairs": total,
        "verdict": R.is_complete(),
    }
    if missing:
        e, f = missing[0]
        doc["first_missing"] = {
            "pair": [e, f],
            "kappa": kappa(M, [e], [f]),
            "kappa_needed": min_pair_kappa(N) if N.n >= 2 else None,
        }
    if args.relation:
        doc["edges"] = edges
    if args.json:
        sys.stdout.write(dumps(doc))
        return 0
    print(f"connected: {_yes(doc['connected'])}")
    print(f"related pairs: {len(edges)}/{total}")
    print(f"verdict: {_yes(doc['verdict'])}")
    if missing:
        fm = doc["first_missing"]
        print(f"first missing pair: {fm['pair'][0]},{fm['pair'][1]} "
              f"(kappa {fm['kappa']}, N pairs need at least {fm['kappa_needed']})")
    if args.relation:
        print("edges:")
        for e, f in edges:
            print(f"  {e} {f}")
    return 0


# -- decompose ---------------------------------------------------------------


def cmd_decompose(args) -> int:
    M = _load(args.input)
    if M.n < 2 or not is_connected(M):
        raise UsageError("decompose needs a connected matroid with at least two elements")
    T = canonical_tree(M)
    N = _load(args.n) if args.n else None
    preds = {
        "u24_condition": u24_condition(T),
        "u34_forbidden_config_absent": u34_forbidden_config(T),
        "mk4_vertex_condition": mk4_vertex_condition(T),
    }
    if N is not None:
        try:
            preds["general_condition"] = general_condition(T, N)
        except MatroidError as exc:
            raise UsageError(str(exc)) from None
    doc = tree_to_json(T, N)
    doc["predicates"] = preds
    if args.json:
        sys.stdout.write(dumps(doc))
        return 0
    print(render_ascii(T))
    for k, v in preds.items():
        print(f"{k}: {_yes(v)}")
    return 0


# -- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    tid = args.theorem.upper()
    if tid not in SUITES:
        raise UsageError(f"unknown suite {args.theorem!r}; choose from {', '.join(SUITES)}")
    if not 0 <= args.max_n <= catalog.ENUM_CAP:
        raise UsageError(f"--max-n must be between 0 and {catalog.ENUM_CAP}")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    report = run(tid, max_n=args.max_n, seed=args.seed, jobs=args.jobs)
    if args.json:
        sys.stdout.write(dumps(report.to_json(timing=args.timing)))
    else:
        print(f"{report.theorem_id}: {report.title}")
        for u in report.universe:
            print(f"universe: {u}")
        sizes = ", ".join(f"{k}:{v}" for k, v in sorted(report.per_size.items()))
        print(f"instances checked: {report.instances_checked} (by size {sizes})")
        for row in report.checks:
            ok = row["instances"] - row["failures"]
            print(f"  {row['name']}: {ok}/{row['instances']} ok")
        print(f"status: {report.status}")
        for c in report.counterexamples:
            print(f"counterexample [{c['check']}]: {json.dumps(c['data'], sort_keys=True)}")
            if "matroid" in c:
                print(f"  matroid: {json.dumps(c['matroid'])}")
        if args.timing:
            print(f"wall time: {report.wall_time:.2f}s")
    return 0 if report.passed else 1


# -- construct ---------------------------------------------------------------


def cmd_construct(args) -> int:
    if args.proof:
        N = _load(args.input)
        try:
            cons = catalog.proof_constructions(N)
        except MatroidError as exc:
            raise UsageError(str(exc)) from None
        docs = [{"step": c.step, "matroid": to_document(c.matroid)} for c in cons]
        if args.json:
            sys.stdout.write(dumps(docs))
        else:
            for d in docs:
                print(f"{d['step']}: {json.dumps(d['matroid'])}")
        return 0
    M = _load(args.input)
    sys.stdout.write(dumps(to_document(M)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nconn", description="N-connectivity of small matroids")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("show", help="print derived data of a matroid")
    s.add_argument("input", help="JSON file or catalog expression")
    for q in QUERIES:
        s.add_argument(f"--{q}", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_show)

    s = sub.add_parser("nconn", help="pair relation and N-connectivity verdict")
    s.add_argument("matroid")
    s.add_argument("n", metavar="N")
    s.add_argument("--pair", help="e,f: only this pair, with its minor witness")
    s.add_argument("--relation", action="store_true", help="list every related pair")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_nconn)

    s = sub.add_parser("decompose", help="canonical tree decomposition")
    s.add_argument("input")
    s.add_argument("--N", dest="n", help="also evaluate the general tree condition for N")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("verify", help="run a verification suite (T1..T17)")
    s.add_argument("theorem")
    s.add_argument("--max-n", type=int, default=7)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--timing", action="store_true", help="report wall time")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("construct", help="print a catalog matroid as a JSON document")
    s.add_argument("input")
    s.add_argument("--proof", action="store_true", help="list proof constructions for N=input")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_construct)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MatroidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
