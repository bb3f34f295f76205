"""Benchmark the hot kernels on both execution paths.

Run directly to time the *current* path (controlled by QUASIVAR_NUMBA),
or with --compare to run itself twice in subprocesses, once per path,
and print the table side by side:

    python3 benchmarks/bench_kernels.py --compare
"""

import json
import os
import subprocess
import sys
import time

import numpy as np


def workloads():
    import quasivar as qv
    from quasivar.brouwer import hat, k_poset, up_algebra
    from quasivar.congruence import all_congruences
    from quasivar.kernel import close_subset, subuniverses
    from quasivar.morphisms import enumerate_homs

    prod = qv.direct_product([qv.catalog("two"), qv.catalog("s3")])
    from quasivar.demorgan import x_construction
    X = x_construction(prod)
    UhK3 = up_algebra(hat(k_poset(3))).algebra
    g = qv.Guards(subalgebra_enum=40)

    def bench_closures():
        for _ in range(40):
            for a in range(X.size):
                close_subset(X, [a])

    def bench_subuniverses():
        subuniverses(UhK3, guards=g)

    def bench_congruences():
        all_congruences(UhK3)

    def bench_hom_enum():
        s7 = qv.catalog("s7")
        for _ in range(5):
            enumerate_homs(s7, s7)

    def bench_psc():
        qv.psc_check([qv.catalog("c4"), qv.catalog("d4")])
        qv.psc_check([qv.catalog("two")])

    return [("subuniverse closures (X(2xS3), 600x)", bench_closures),
            ("subuniverse enumeration (36-element algebra)", bench_subuniverses),
            ("congruence lattice (36-element algebra)", bench_congruences),
            ("endomorphism enumeration (S7, 5x)", bench_hom_enum),
            ("psc_check on catalog pairs", bench_psc)]


def run_once():
    from quasivar import NUMBA_ENABLED
    results = {}
    for name, fn in workloads():
        fn()  # warm-up (and JIT compilation on the numba path)
        t0 = time.perf_counter()
        fn()
        results[name] = time.perf_counter() - t0
    return {"numba": NUMBA_ENABLED, "timings": results}


def compare():
    rows = {}
    for flag, label in (("1", "numba"), ("0", "fallback")):
        env = dict(os.environ, QUASIVAR_NUMBA=flag)
        out = subprocess.run([sys.executable, __file__, "--emit-json"],
                             env=env, capture_output=True, text=True, check=True)
        rows[label] = json.loads(out.stdout)["timings"]
    width = max(len(k) for k in rows["numba"])
    print(f"{'workload':{width}s}  {'numba':>10s}  {'fallback':>10s}  {'speedup':>8s}")
    for name in rows["numba"]:
        a, b = rows["numba"][name], rows["fallback"][name]
        print(f"{name:{width}s}  {a:10.4f}s {b:10.4f}s  {b / a:7.1f}x")


if __name__ == "__main__":
    if "--compare" in sys.argv:
        compare()
    elif "--emit-json" in sys.argv:
        print(json.dumps(run_once()))
    else:
        data = run_once()
        print(f"numba enabled: {data['numba']}")
        for name, secs in data["timings"].items():
            print(f"{name:50s} {secs:10.4f}s")
