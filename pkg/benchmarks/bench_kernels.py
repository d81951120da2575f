"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--json]

Micro benchmarks call both kernel modules directly on the same inputs.  The
end-to-end benchmark runs a verification suite in a fresh interpreter per
backend (``NCONN_KERNELS=python`` forces the fallback), so memoised results
never leak between the two timings.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

from nconn import _pykernels
from nconn.catalog import enumerate_classes, named
from nconn.isominor import _pattern

try:
    from nconn import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _inputs():
    big = enumerate_classes(7)
    M = named("Q6")
    N = named("U(2,4)")
    pat = _pattern(N)
    return big, M, N, pat


def micro_cases():
    big, M, N, pat = _inputs()
    kc = M.rank() - N.rank()
    bases = [list(A.basis_masks()) for A in big]

    def rank_from_bases(k):
        for A, b in zip(big, bases):
            k.rank_from_bases(A.n, b)

    def dual_table(k):
        for A in big:
            k.dual_table(A.rank_table, A.n)

    def kappa(k):
        for A in big:
            for a in range(1, 1 << 3):
                k.kappa(A.rank_table, A.n, a, 1 << 6)

    def scan_grounds(k):
        k.scan_grounds(M.rank_table, M.n, N.n, kc, pat.combos, pat.sigs, 0)

    def exchange_violation(k):
        for b in bases:
            k.exchange_violation(b)

    return {
        "rank_from_bases (306 classes, n=7)": rank_from_bases,
        "dual_table (306 classes, n=7)": dual_table,
        "kappa (306 classes x 7 pairs)": kappa,
        "exchange_violation (306 basis families)": exchange_violation,
        "scan_grounds (U(2,4) minors of Q6)": scan_grounds,
    }


def end_to_end(backend: str, suite: str, max_n: int) -> float:
    env = dict(os.environ)
    if backend == "python":
        env["NCONN_KERNELS"] = "python"
    else:
        env.pop("NCONN_KERNELS", None)
    code = (
        "import time; from nconn.verify import run; from nconn.catalog import enumerate_up_to\n"
        f"enumerate_up_to({max_n})\n"
        f"t = time.perf_counter(); rep = run({suite!r}, max_n={max_n}); dt = time.perf_counter() - t\n"
        "assert rep.passed; print(dt)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True, capture_output=True, text=True)
    return float(out.stdout.strip())


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--suite", default="T2", help="verification suite for the end-to-end timing")
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--json", action="store_true")
    args = p.parse_args(argv)

    if _ckernels is None:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1
    rows = []
    for name, fn in micro_cases().items():
        t_c = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        t_py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        rows.append({"case": name, "compiled": t_c, "python": t_py})
    name = f"verify {args.suite} --max-n {args.max_n}"
    t_c = min(end_to_end("compiled", args.suite, args.max_n) for _ in range(args.repeat))
    t_py = min(end_to_end("python", args.suite, args.max_n) for _ in range(args.repeat))
    rows.append({"case": name, "compiled": t_c, "python": t_py})

    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    width = max(len(r["case"]) for r in rows)
    print(f"{'case':<{width}}  {'compiled':>10}  {'python':>10}  {'speedup':>8}")
    for r in rows:
        speedup = r["python"] / r["compiled"] if r["compiled"] else float("inf")
        print(f"{r['case']:<{width}}  {r['compiled']:>9.4f}s  {r['python']:>9.4f}s  {speedup:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
