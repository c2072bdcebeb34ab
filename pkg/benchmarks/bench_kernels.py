"""Compiled versus pure-Python kernel timings.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 3] [--csv out.csv]

Each kernel runs on the same inputs under both backends; the table reports
the best-of-``repeat`` wall time, the speedup and the max abs difference of
the outputs.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from specsparse import kernels
from specsparse.expander import build_for_epsilon
from specsparse.matview import gen_random_symmetric_bounded


def _cases():
    cases = []
    for n in (1024, 4096):
        G, _ = build_for_epsilon(n, 0.25)
        sh = np.asarray(G.shifts, dtype=np.int64)
        cases.append((f"circulant_eigenvalues n={n} d={G.degree}",
                      lambda m, n=n, sh=sh: m.circulant_eigenvalues(n, sh)))
    for n in (64, 128):
        A = gen_random_symmetric_bounded(n, 0).peek_dense()
        sched = kernels.round_robin_schedule(n)
        cases.append((f"jacobi_sweeps n={n}",
                      lambda m, A=A, sched=sched: m.jacobi_sweeps(A.copy(), sched, 1e-12, 60)[0]))
    rng = np.random.default_rng(0)
    for n, m_edges in ((4096, 40000), (20000, 200000)):
        u = rng.integers(0, n, m_edges).astype(np.int64)
        v = rng.integers(0, n, m_edges).astype(np.int64)
        cases.append((f"connected_components n={n} m={m_edges}",
                      lambda m, n=n, u=u, v=v: m.connected_components(n, u, v)))
    for n in (512, 1024):
        G, _ = build_for_epsilon(n, 0.25)
        r, c = G.edges()
        vals = rng.uniform(-1, 1, r.size)
        X = rng.standard_normal((n, 8))
        cases.append((f"sym_coo_matmat n={n} nnz={2 * r.size} k=8",
                      lambda m, n=n, r=r, c=c, vals=vals, X=X: m.sym_coo_matmat(n, r, c, vals, X)))
    return cases


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args(argv)
    try:
        compiled = kernels.backend_module("compiled")
    except ImportError:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    python = kernels.backend_module("python")
    rows = []
    for name, fn in _cases():
        tc, oc = _best(lambda: fn(compiled), args.repeat)
        tp, op = _best(lambda: fn(python), args.repeat)
        diff = float(np.max(np.abs(np.asarray(oc, dtype=np.float64) - np.asarray(op, dtype=np.float64))))
        rows.append({"kernel": name, "compiled_s": tc, "python_s": tp, "speedup": tp / tc, "max_abs_diff": diff})
    width = max(len(r["kernel"]) for r in rows)
    print(f"{'kernel':<{width}}  {'compiled s':>11}  {'python s':>11}  {'speedup':>8}  {'max diff':>9}")
    for r in rows:
        print(f"{r['kernel']:<{width}}  {r['compiled_s']:11.5f}  {r['python_s']:11.5f}  "
              f"{r['speedup']:8.1f}  {r['max_abs_diff']:9.1e}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
