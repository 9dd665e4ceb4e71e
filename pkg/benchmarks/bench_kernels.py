"""Compare the compiled and pure-Python kernels on identical inputs.

    python benchmarks/bench_kernels.py --n 64 256 --budget 20000

Each row times one kernel call on both backends and checks the outputs match.
"""

import argparse
import json
import time

import numpy as np

from graphsums import _kernels_py
from graphsums.graphs import random_regular
from graphsums.heuristic import bfs_order, csr

try:
    from graphsums import _kernels
except ImportError:
    _kernels = None


def timed(fn, *args, repeat=3):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return bool(np.array_equal(np.asarray(a), np.asarray(b)))


def cases(n: int, budget: int, seed: int):
    G = random_regular(n, 3, seed)
    indptr, nbr = csr(G)
    mods = np.array([2 * n], dtype=np.int64)
    order = np.asarray(bfs_order(G), dtype=np.int64)
    rng = np.random.default_rng(seed)
    start = _kernels_py.greedy_labeling(indptr, nbr, order, 2 * n, mods, 2 * n)
    draws = (
        rng.integers(0, 2, budget), rng.integers(0, n, budget), rng.integers(0, n, budget),
        rng.integers(0, 2 * n, budget), rng.random(budget),
    )
    eu = np.array([u for u, _ in G.edges], dtype=np.int64)
    ev = np.array([v for _, v in G.edges], dtype=np.int64)
    B, L, p = 8, n, 6
    S = np.sort(rng.choice(np.arange(1, 1 << p), 40, replace=False))
    S = np.concatenate([[0], S]).astype(np.int64)
    walk = (
        rng.integers(0, 1 << p, B), rng.integers(0, 3, B),
        rng.integers(0, len(S), (B, L)), rng.integers(0, 3, (B, L)), S, 3,
    )
    return {
        "count_sums": ("count_sums", (eu, ev, start, mods)),
        "greedy": ("greedy_labeling", (indptr, nbr, order, 2 * n, mods, 2 * n)),
        "anneal": ("anneal", (indptr, nbr, start, 2 * n, mods, 2 * n, *draws, 1.0, 0.9998, 0.01, 5000)),
        "walks": ("sum_graph_walks", walk),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[64, 256])
    ap.add_argument("--budget", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    args = ap.parse_args(argv)
    if _kernels is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    rows = []
    for n in args.n:
        for name, (fn, fargs) in cases(n, args.budget, args.seed).items():
            tp, op = timed(getattr(_kernels_py, fn), *fargs)
            tc, oc = timed(getattr(_kernels, fn), *fargs)
            rows.append({"n": n, "kernel": name, "python_s": tp, "cython_s": tc,
                         "speedup": tp / tc if tc else float("inf"), "match": same(op, oc)})
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'n':>5} {'kernel':<11} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8}  match")
    for r in rows:
        print(f"{r['n']:>5} {r['kernel']:<11} {r['python_s']:>11.4f} {r['cython_s']:>11.5f} "
              f"{r['speedup']:>8.1f}  {r['match']}")


if __name__ == "__main__":
    main()
