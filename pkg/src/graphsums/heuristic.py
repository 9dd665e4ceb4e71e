"""Simulated-annealing upper bounds on ``S_H(G)``.

Labels are integer codes of a finite group (see :func:`abelian.encode`); the
inner loop lives in :mod:`graphsums.kernels`. Every random number is drawn
here, up front, so the compiled and pure-Python kernels agree bit for bit.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .abelian import AbelianGroup, decode
from .graphs import Graph
from .sumset import Labeling, sumset_size


class GroupTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class AnnealConfig:
    t0: float = 1.0  # starting temperature, in units of one edge sum
    t_final: float = 0.02  # temperature reached after the whole budget
    t_min: float = 0.01  # cooling floor
    relabel_prob: float = 0.5  # share of relabel moves; the rest are swaps
    stagnation: int = 5000  # steps without improvement before a restart


@dataclass(frozen=True)
class HeuristicResult:
    size: int
    labeling: Labeling
    window: int | None  # label window [0, W) when H = Z
    accepted: int
    restarts: int
    config: AnnealConfig

    def metadata(self) -> dict:
        return {
            "window": self.window,
            "accepted": self.accepted,
            "restarts": self.restarts,
            "anneal": asdict(self.config),
        }


def csr(G: Graph) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(G.n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(a) for a in G.adj])
    nbr = np.fromiter((w for a in G.adj for w in a), dtype=np.int64, count=int(indptr[-1]))
    return indptr, nbr


def bfs_order(G: Graph) -> list[int]:
    seen = [False] * G.n
    out = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        queue = [s]
        for u in queue:
            out.append(u)
            for w in G.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return out


def heuristic_min_sumset(
    G: Graph,
    H: AbelianGroup,
    budget: int,
    seed: int,
    config: AnnealConfig | None = None,
    window: int | None = None,
) -> HeuristicResult:
    """Best sum-set size found over injections ``V(G) -> H``.

    Starts from a greedy labeling (vertices in BFS order, each taking the
    unused element creating fewest new sums), then anneals for ``budget``
    steps. ``H = Z`` is handled by labels in ``[0, W)`` computed in
    ``Z_{2W}``, which never wraps; ``W`` defaults to ``2n``.
    """
    cfg = config or AnnealConfig()
    if H.moduli == (0,):
        W = window if window is not None else 2 * G.n
        moduli = (2 * W,)
        n_cand = W
        group = H
    elif H.is_finite:
        moduli = H.moduli
        n_cand = int(H.order())
        W = None
        group = H
    else:
        raise GroupTooSmall(f"heuristic needs a finite group or Z, got {H}")
    if n_cand < G.n:
        raise GroupTooSmall(f"{n_cand} candidate labels for {G.n} vertices")
    order_size = int(np.prod(moduli, dtype=np.int64)) if moduli else 1
    mods = np.asarray(moduli, dtype=np.int64)
    indptr, nbr = csr(G)
    start = kernels.greedy_labeling(
        indptr, nbr, np.asarray(bfs_order(G), dtype=np.int64), n_cand, mods, order_size
    )

    rng = np.random.default_rng(seed)
    n = max(G.n, 1)
    kinds = (rng.random(budget) < cfg.relabel_prob).astype(np.int64)
    va = rng.integers(0, n, budget, dtype=np.int64)
    vb = rng.integers(0, n, budget, dtype=np.int64)
    xs = rng.integers(0, n_cand, budget, dtype=np.int64)
    us = rng.random(budget)
    alpha = (cfg.t_final / cfg.t0) ** (1.0 / budget) if budget > 0 else 1.0
    if G.n == 0:
        kinds = va = vb = xs = np.zeros(0, dtype=np.int64)
        us = np.zeros(0)
    best, codes, accepted, restarts = kernels.anneal(
        indptr, nbr, start, n_cand, mods, order_size,
        kinds, va, vb, xs, us, cfg.t0, alpha, cfg.t_min, cfg.stagnation,
    )

    if W is None:
        lab = Labeling(group, tuple(decode(group, int(c)) for c in codes))
    else:
        lab = Labeling.from_coords(group, [(int(c),) for c in codes])
    size = sumset_size(G, lab)
    if size != best:  # pragma: no cover
        raise AssertionError(f"kernel reported {best}, labeling realises {size}")
    return HeuristicResult(size, lab, W, int(accepted), int(restarts), cfg)
