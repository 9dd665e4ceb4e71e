import os
import subprocess
import sys

import numpy as np
import pytest

from graphsums import _kernels_py, kernels
from graphsums.abelian import AbelianGroup, decode
from graphsums.graphs import random_regular
from graphsums.heuristic import bfs_order, csr
from graphsums.sumset import Labeling, sumset_size

MODULI = [(40,), (2, 2, 2, 2, 2, 2), (2, 4, 5), (3, 3, 6)]


def kernel_cases(seed=50):
    rng = np.random.default_rng(seed)
    for i, mods in enumerate(MODULI):
        G = random_regular(24, 3, seed + i)
        order = int(np.prod(mods))
        m = np.asarray(mods, dtype=np.int64)
        labels = rng.choice(order, G.n, replace=False).astype(np.int64)
        yield G, mods, m, order, labels, rng


def edge_arrays(G):
    return (
        np.array([u for u, _ in G.edges], dtype=np.int64),
        np.array([v for _, v in G.edges], dtype=np.int64),
    )


def test_count_sums_matches_evaluation():
    for G, mods, m, order, labels, _ in kernel_cases():
        H = AbelianGroup(mods)
        lab = Labeling(H, tuple(decode(H, int(x)) for x in labels))
        eu, ev = edge_arrays(G)
        assert _kernels_py.count_sums(eu, ev, labels, m) == sumset_size(G, lab)


def test_anneal_output_is_consistent():
    for G, mods, m, order, labels, rng in kernel_cases(51):
        indptr, nbr = csr(G)
        B = 3000
        draws = (
            rng.integers(0, 2, B), rng.integers(0, G.n, B), rng.integers(0, G.n, B),
            rng.integers(0, order, B), rng.random(B),
        )
        best, lab, accepted, restarts = _kernels_py.anneal(
            indptr, nbr, labels, order, m, order, *draws, 1.0, 0.999, 0.01, 500
        )
        eu, ev = edge_arrays(G)
        assert len(set(lab.tolist())) == G.n and lab.max() < order
        assert best == _kernels_py.count_sums(eu, ev, lab, m)
        assert best <= _kernels_py.count_sums(eu, ev, labels, m)


def test_walk_steps_are_edges():
    rng = np.random.default_rng(52)
    S = np.array([0, 3, 5, 6, 9], dtype=np.int64)
    q = 3
    V, U = _kernels_py.sum_graph_walks(
        rng.integers(0, 16, 4), rng.integers(0, q, 4), rng.integers(0, len(S), (4, 30)), rng.integers(0, q, (4, 30)), S, q
    )
    assert ((V[:, 1:] ^ V[:, :-1])[..., None] == S).any(axis=-1).all()
    assert ((U >= 0) & (U < q)).all()


needs_ext = pytest.mark.skipif(kernels.compiled is None, reason="extension not built")


@needs_ext
def test_backends_agree_on_every_kernel():
    fast, slow = kernels.compiled, _kernels_py
    for G, mods, m, order, labels, rng in kernel_cases(53):
        indptr, nbr = csr(G)
        eu, ev = edge_arrays(G)
        assert fast.count_sums(eu, ev, labels, m) == slow.count_sums(eu, ev, labels, m)
        bfs = np.asarray(bfs_order(G), dtype=np.int64)
        args = (indptr, nbr, bfs, order, m, order)
        assert np.array_equal(fast.greedy_labeling(*args), slow.greedy_labeling(*args))
        B = 5000
        draws = (
            (rng.random(B) < 0.5).astype(np.int64), rng.integers(0, G.n, B), rng.integers(0, G.n, B),
            rng.integers(0, order, B), rng.random(B),
        )
        a = fast.anneal(indptr, nbr, labels, order, m, order, *draws, 1.0, 0.999, 0.01, 300)
        b = slow.anneal(indptr, nbr, labels, order, m, order, *draws, 1.0, 0.999, 0.01, 300)
        assert a[0] == b[0] and np.array_equal(a[1], b[1]) and a[2:] == b[2:]
    S = np.array([0, 1, 6, 7, 12], dtype=np.int64)
    walk = (
        rng.integers(0, 16, 5), rng.integers(0, 5, 5), rng.integers(0, len(S), (5, 40)), rng.integers(0, 5, (5, 40)), S, 5,
    )
    for x, y in zip(fast.sum_graph_walks(*walk), slow.sum_graph_walks(*walk)):
        assert np.array_equal(x, y)


def backend_in_subprocess(env_extra):
    env = {k: v for k, v in os.environ.items() if k != "GRAPHSUMS_PURE_PYTHON"}
    env.update(env_extra)
    out = subprocess.run(
        [sys.executable, "-c", "from graphsums import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, check=True, env=env,
    )
    return out.stdout.strip()


def test_backend_selection():
    assert backend_in_subprocess({"GRAPHSUMS_PURE_PYTHON": "1"}) == "python"
    expected = "cython" if kernels.compiled is not None else "python"
    assert backend_in_subprocess({}) == expected
