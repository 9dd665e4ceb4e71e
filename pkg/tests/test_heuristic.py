import random

import numpy as np
import pytest

from graphsums import _kernels_py, kernels
from graphsums.abelian import AbelianGroup, decode
from graphsums.graphs import Graph, complete, cycle, path, random_regular
from graphsums.heuristic import AnnealConfig, GroupTooSmall, bfs_order, csr, heuristic_min_sumset
from graphsums.sumset import Labeling, exact_min_sumset, sumset_size
from helpers import random_connected_graph, random_finite_group


def test_heuristic_examples():
    assert heuristic_min_sumset(complete(3), AbelianGroup((7,)), 2000, 0).size == 3
    assert heuristic_min_sumset(cycle(4), AbelianGroup((2, 2)), 2000, 0).size == 2


def greedy_size(G, H):
    """Budget-0 reference: the greedy start evaluated independently."""
    mods = np.asarray(H.moduli, dtype=np.int64)
    order_size = int(H.order())
    indptr, nbr = csr(G)
    codes = _kernels_py.greedy_labeling(indptr, nbr, np.asarray(bfs_order(G)), order_size, mods, order_size)
    return sumset_size(G, Labeling(H, tuple(decode(H, int(c)) for c in codes)))


def test_budget_zero_is_greedy():
    rng = random.Random(30)
    for _ in range(30):
        G = random_connected_graph(rng, rng.randint(2, 9), 0.3)
        H = AbelianGroup((rng.randint(G.n, 40),))
        r = heuristic_min_sumset(G, H, 0, rng.randrange(100))
        assert r.size == greedy_size(G, H)
        assert r.accepted == 0


def test_deterministic_given_seed():
    G = random_regular(16, 3, 1)
    H = AbelianGroup((32,))
    a = heuristic_min_sumset(G, H, 3000, 9)
    b = heuristic_min_sumset(G, H, 3000, 9)
    assert a == b
    assert a.metadata()["anneal"] == {
        "t0": 1.0, "t_final": 0.02, "t_min": 0.01, "relabel_prob": 0.5, "stagnation": 5000,
    }


def test_never_beats_exact_oracle():
    rng = random.Random(31)
    for _ in range(25):
        G = random_connected_graph(rng, rng.randint(2, 6), 0.3)
        if G.m > 12:
            continue
        H = random_finite_group(rng, G.n, 24)
        r = heuristic_min_sumset(G, H, 500, rng.randrange(1000))
        assert r.size >= exact_min_sumset(G).size
        assert sumset_size(G, r.labeling) == r.size


def test_z_window():
    r = heuristic_min_sumset(path(6), AbelianGroup((0,)), 2000, 3)
    assert r.window == 12 and r.size == 2
    assert all(0 <= x.coords[0] < 12 for x in r.labeling.assign)
    r = heuristic_min_sumset(complete(4), AbelianGroup((0,)), 500, 3, window=4)
    assert sorted(x.coords[0] for x in r.labeling.assign) == [0, 1, 2, 3]
    assert r.size == 5


def test_group_too_small():
    with pytest.raises(GroupTooSmall):
        heuristic_min_sumset(complete(4), AbelianGroup((3,)), 10, 0)
    with pytest.raises(GroupTooSmall):
        heuristic_min_sumset(complete(4), AbelianGroup((0, 0)), 10, 0)
    with pytest.raises(GroupTooSmall):
        heuristic_min_sumset(complete(4), AbelianGroup((0,)), 10, 0, window=3)


def test_custom_config_and_edgeless():
    cfg = AnnealConfig(t0=2.0, t_final=0.1, stagnation=50)
    r = heuristic_min_sumset(random_regular(12, 3, 4), AbelianGroup((2, 2, 4)), 2000, 1, config=cfg)
    assert r.config == cfg and r.restarts >= 1
    assert heuristic_min_sumset(Graph(5), AbelianGroup((5,)), 100, 0).size == 0


@pytest.mark.skipif(kernels.compiled is None, reason="extension not built")
def test_backends_agree(monkeypatch):
    G = random_regular(20, 3, 2)
    H = AbelianGroup((2, 4, 4))
    fast = heuristic_min_sumset(G, H, 4000, 5)
    monkeypatch.setattr(kernels, "greedy_labeling", _kernels_py.greedy_labeling)
    monkeypatch.setattr(kernels, "anneal", _kernels_py.anneal)
    slow = heuristic_min_sumset(G, H, 4000, 5)
    assert fast == slow
