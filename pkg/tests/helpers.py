"""Shared generators and brute-force oracles for the test suite."""

import itertools
import math
import random

import numpy as np

from graphsums.abelian import AbelianGroup
from graphsums.graphs import Graph


def random_connected_graph(rng: random.Random, n: int, extra: float = 0.4) -> Graph:
    """Random spanning tree plus each remaining pair with probability ``extra``."""
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < extra:
            edges.add((u, v))
    perm = list(range(n))
    rng.shuffle(perm)
    return Graph(n, sorted((min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in edges))


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def _canonical(n: int, edges) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))
        if best is None or key < best:
            best = key
    return best


def connected_graphs_up_to_iso(max_n: int, min_n: int = 2) -> list[Graph]:
    """Every connected graph with ``min_n..max_n`` vertices, one per isomorphism class."""
    out = []
    for n in range(min_n, max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        seen = set()
        for mask in range(1 << len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            G = Graph(n, edges)
            if not G.is_connected():
                continue
            key = _canonical(n, edges)
            if key not in seen:
                seen.add(key)
                out.append(Graph(n, key))
    return out


def random_finite_group(rng: random.Random, min_order: int, max_order: int) -> AbelianGroup:
    while True:
        mods = [rng.randint(2, max_order) for _ in range(rng.randint(1, 3))]
        order = math.prod(mods)
        if min_order <= order <= max_order:
            return AbelianGroup(tuple(mods))


def random_unimodular(rng: random.Random, k: int, steps: int = 12) -> list[list[int]]:
    U = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(steps):
        i, j = rng.sample(range(k), 2) if k > 1 else (0, 0)
        op = rng.random()
        if k > 1 and op < 0.6:
            c = rng.choice([-2, -1, 1, 2])
            U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        elif k > 1 and op < 0.8:
            U[i], U[j] = U[j], U[i]
        else:
            U[i] = [-a for a in U[i]]
    return U


def minors_gcd(M, t: int) -> int:
    """gcd of all t x t minors; the determinantal divisor d_1 ... d_t."""
    r, c = len(M), len(M[0]) if M else 0
    g = 0
    for rows in itertools.combinations(range(r), t):
        for cols in itertools.combinations(range(c), t):
            sub = np.array([[M[i][j] for j in cols] for i in rows], dtype=object)
            g = math.gcd(g, int(round(_det_obj(sub))))
    return g


def _det_obj(A) -> int:
    n = len(A)
    if n == 1:
        return A[0][0]
    return sum((-1) ** j * A[0][j] * _det_obj(np.delete(np.delete(A, 0, 0), j, 1)) for j in range(n))


def brute_min_over_group(G: Graph, H: AbelianGroup) -> int | None:
    """Minimum sum-set size over every injection into a finite ``H``."""
    from graphsums.abelian import enumerate_elements

    elems = list(enumerate_elements(H))
    if len(elems) < G.n:
        return None
    best = None
    for assign in itertools.permutations(elems, G.n):
        s = len({assign[u] + assign[v] for u, v in G.edges})
        if best is None or s < best:
            best = s
    return best


def groups_up_to_order(N: int) -> list[AbelianGroup]:
    """One group per isomorphism class of order 1..N (invariant-factor lists)."""

    def chains(n, smallest):
        # invariant factors d_1 | d_2 | ... | d_r with product n, d_1 >= smallest
        if n == 1:
            yield ()
            return
        for d in range(smallest, n + 1):
            if n % d == 0:
                for rest in chains(n // d, d):
                    if not rest or rest[0] % d == 0:
                        yield (d,) + rest

    out = []
    for n in range(1, N + 1):
        for ch in chains(n, 2):
            out.append(AbelianGroup(ch, canonical=True))
    return out
