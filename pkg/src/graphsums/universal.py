"""A Cayley sum-graph containing every bounded-degree graph on ``n`` vertices.

Pieces, bottom up:

* ``Z``: the Cayley graph of ``Z_2^p`` on a random connection set ``S`` with
  ``0 in S`` (a loop everywhere), tensored with the looped clique ``K_q``.
  In ``Z_2^p`` sums and differences coincide, so ``Z`` is the Cayley
  sum-graph of ``Z_2^p x Z_q`` with connection set ``S x Z_q``.
* ``F``: vertices are ``d'``-tuples of ``Z``-vertices, adjacent when at least
  two coordinates are ``Z``-adjacent.
* ``Gamma = K_{2^s} (x) F``: each ``F``-vertex blown up into a looped clique.

``Gamma`` has about ``2^s m^{d'}`` vertices and is never built; adjacency is
answered by :func:`gamma_adjacent`.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import kernels
from .abelian import AbelianGroup, GroupElement, decode, encode
from .graphs import Edge, Graph, PathHomomorphism, covering_family
from .sumset import Labeling

P_MIN, P_MAX = 3, 14


# -- expanders ---------------------------------------------------------------


def _parity(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    shift = 1
    while shift < 64:
        x ^= x >> shift
        shift <<= 1
    return x & 1


def character_sums(p: int, generators) -> np.ndarray:
    """Eigenvalue of the Cayley graph of ``Z_2^p`` at every character.

    The characters ``x -> (-1)^<chi, x>`` diagonalise the adjacency matrix;
    the eigenvalue at ``chi`` is ``sum_s (-1)^<chi, s>``. Exact integers.
    """
    chi = np.arange(1 << p, dtype=np.int64)[:, None]
    S = np.asarray(generators, dtype=np.int64)[None, :]
    return (1 - 2 * _parity(chi & S)).sum(axis=1)


@dataclass(frozen=True)
class CayleyExpander:
    p: int
    generators: tuple[int, ...]  # elements of Z_2^p as bit masks, 0 first
    lambda_bound: int  # largest |eigenvalue| over nontrivial characters
    tries: int = 1

    @property
    def m(self) -> int:
        return 1 << self.p

    @property
    def r(self) -> int:
        return len(self.generators)

    def adjacency_matrix(self) -> np.ndarray:
        m = self.m
        A = np.zeros((m, m))
        x = np.arange(m)
        for s in self.generators:
            A[x, x ^ s] = 1
        return A

    def to_graph(self) -> Graph:
        edges = {(min(x, x ^ s), max(x, x ^ s)) for x in range(self.m) for s in self.generators}
        return Graph(self.m, sorted(edges), loops=True)


class ExpanderNotFound(RuntimeError):
    pass


def build_expander(p: int, b: float = 8.0, seed=0, max_tries: int = 200) -> CayleyExpander:
    """Random Cayley graph on ``Z_2^p`` with second eigenvalue at most ``r/2``.

    ``S = {0}`` plus ``ceil(b p) - 1`` distinct random nonzero elements
    (capped at the whole group). The draw is repeated until the spectral
    check passes.
    """
    if not P_MIN <= p <= P_MAX:
        raise ValueError(f"p = {p} outside [{P_MIN}, {P_MAX}]")
    m = 1 << p
    k = min(math.ceil(b * p) - 1, m - 1)
    if k < 0:
        raise ValueError("b too small for a nonempty generating set")
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_tries + 1):
        rest = np.sort(rng.choice(np.arange(1, m), size=k, replace=False))
        gens = (0,) + tuple(int(x) for x in rest)
        eig = character_sums(p, gens)
        lam = int(np.abs(eig[1:]).max()) if m > 1 else 0
        if 2 * lam <= len(gens):
            return CayleyExpander(p, gens, lam, attempt)
    raise ExpanderNotFound(f"no expander after {max_tries} draws; raise b")


def tensor_with_clique(X: Graph, q: int) -> Graph:
    """Direct product with the looped clique on ``q`` vertices.

    Vertex ``(x, a)`` is numbered ``x * q + a``.
    """
    if q < 1:
        raise ValueError("need q >= 1")
    if not all(X.has_edge(v, v) for v in range(X.n)):
        raise ValueError("X needs a loop at every vertex")
    edges = []
    for x, y in X.edges:
        for a in range(q):
            for c in range(a if x == y else 0, q):
                edges.append((x * q + a, y * q + c))
    return Graph(X.n * q, edges, loops=True)


def walk_deviation(A: np.ndarray, t: int, start: int = 0) -> float:
    """``max_v |P^t(start, v) - 1/m|`` for the simple random walk on ``A``."""
    P = A / A.sum(axis=1, keepdims=True)
    dist = np.zeros(len(A))
    dist[start] = 1.0
    for _ in range(t):
        dist = dist @ P
    return float(np.abs(dist - 1.0 / len(A)).max())


# -- parameters ----------------------------------------------------------------


@dataclass(frozen=True)
class UniversalParameters:
    n: int
    d: int
    c: float
    d_prime: int
    mu: float
    p: int
    q: int
    s: int
    p_min: int
    asymptotic: bool  # 3 <= d <= ln n / ln ln n
    m_within_bound: bool  # m <= mu (1 + 12/d)

    @property
    def m(self) -> int:
        return (1 << self.p) * self.q

    @property
    def t1(self) -> int:
        return self.p * self.d_prime + self.s

    @property
    def t2(self) -> int:
        return self.d_prime

    @property
    def gamma_order(self) -> int:
        return (1 << self.s) * self.m**self.d_prime


def choose_parameters(
    n: int, d: int, c: float = 1.0, d_prime: int | None = None, p_min: int = P_MIN
) -> UniversalParameters:
    """Sizes for the construction, with the product dimension set to ``d_prime``.

    ``mu = (n / (c d' ln^2 n))^(1/d')``; ``m = 2^p q`` is the least such value
    ``>= mu`` with ``q`` odd, ``q <= d`` and ``p >= p_min``; ``2^s`` is the
    least power of two above ``1.1 c d' ln^2 n``.
    """
    if n < 3 or d < 1:
        raise ValueError("need n >= 3 and d >= 1")
    if c <= 0:
        raise ValueError("need c > 0")
    c = float(c)
    dp = 2 * (d + 1) if d_prime is None else d_prime
    if dp < 2:
        raise ValueError("need d_prime >= 2")
    ln = math.log(n)
    mu = (n / (c * dp * ln * ln)) ** (1.0 / dp)
    best = None
    for q in range(1, d + 1, 2):
        p = max(p_min, math.ceil(math.log2(mu / q)) if mu > q else 0)
        while (1 << p) * q < mu:
            p += 1
        while p > p_min and (1 << (p - 1)) * q >= mu:
            p -= 1
        cand = ((1 << p) * q, q, p)
        if best is None or cand < best:
            best = cand
    if best is None:  # pragma: no cover
        raise ValueError("no valid (p, q)")
    m, q, p = best
    if p > P_MAX:
        raise ValueError(f"p = {p} exceeds the expander limit {P_MAX}")
    target = 1.1 * c * dp * ln * ln
    s = 0
    while (1 << s) <= target:
        s += 1
    asym = 3 <= d <= ln / math.log(ln)
    params = UniversalParameters(n, d, c, dp, mu, p, q, s, p_min, asym, m <= mu * (1 + 12 / d))
    assert mu <= params.m and q % 2 == 1 and q <= d
    assert (1 << s) > target and (1 << (s - 1)) <= target if s else True
    if params.gamma_order < n:
        raise ValueError("Gamma has fewer than n vertices")
    return params


# -- the descriptor -----------------------------------------------------------


@dataclass(frozen=True)
class UniversalGraphDescriptor:
    params: UniversalParameters
    b: float
    seed: int
    generators: tuple[int, ...]  # S, the connection set of the expander on Z_2^p
    lambda_bound: int

    def __post_init__(self):
        P = self.params
        if 0 not in self.generators:
            raise ValueError("0 must be a generator")
        if any(not 0 <= g < (1 << P.p) for g in self.generators):
            raise ValueError("generator outside Z_2^p")
        if 2 * self.lambda_bound > self.r:
            raise ValueError("expander bound violated")

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def gset(self) -> frozenset:
        return frozenset(self.generators)

    def group(self) -> AbelianGroup:
        P = self.params
        return AbelianGroup((2,) * P.t1 + (P.q,) * P.t2)

    def to_dict(self) -> dict:
        P = self.params
        return {
            "schema": 1,
            "n": P.n,
            "d": P.d,
            "c": P.c,
            "b": self.b,
            "seed": self.seed,
            "d_prime": P.d_prime,
            "mu": P.mu,
            "p": P.p,
            "p_min": P.p_min,
            "q": P.q,
            "m": P.m,
            "s": P.s,
            "t1": P.t1,
            "t2": P.t2,
            "r": self.r,
            "lambda_bound": self.lambda_bound,
            "asymptotic_regime": P.asymptotic,
            "m_within_bound": P.m_within_bound,
            "generators": list(self.generators),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "UniversalGraphDescriptor":
        params = choose_parameters(
            data["n"], data["d"], data["c"], data["d_prime"], data.get("p_min", P_MIN)
        )
        for key in ("p", "q", "s", "m"):
            if getattr(params, key) != data[key]:
                raise ValueError(f"descriptor field {key} is inconsistent")
        gens = tuple(int(g) for g in data["generators"])
        lam = int(np.abs(character_sums(params.p, gens)[1:]).max())
        if lam != data["lambda_bound"]:
            raise ValueError("stored lambda_bound does not match the generators")
        return cls(params, float(data["b"]), int(data["seed"]), gens, lam)

    @classmethod
    def from_json(cls, text: str) -> "UniversalGraphDescriptor":
        return cls.from_dict(json.loads(text))


def build_descriptor(
    n: int,
    d: int,
    c: float = 1.0,
    b: float = 8.0,
    seed=0,
    d_prime: int | None = None,
    p_min: int = P_MIN,
) -> UniversalGraphDescriptor:
    params = choose_parameters(n, d, c, d_prime, p_min)
    X = build_expander(params.p, b, seed)
    return UniversalGraphDescriptor(params, b, int(seed), X.generators, X.lambda_bound)


# Gamma vertices: (blocks, slot) with blocks a d'-tuple of (v, u) in Z_2^p x Z_q
Vertex = tuple[tuple[tuple[int, int], ...], int]


def _check_vertex(desc: UniversalGraphDescriptor, x) -> None:
    P = desc.params
    blocks, slot = x
    if len(blocks) != P.d_prime:
        raise ValueError(f"expected {P.d_prime} blocks, got {len(blocks)}")
    if not 0 <= slot < (1 << P.s):
        raise ValueError(f"slot {slot} out of range")
    for v, u in blocks:
        if not (0 <= v < (1 << P.p) and 0 <= u < P.q):
            raise ValueError(f"block {(v, u)} out of range")


def gamma_adjacent(desc: UniversalGraphDescriptor, x: Vertex, y: Vertex) -> bool:
    """At least two blocks whose sum lies in the connection set ``S x Z_q``."""
    _check_vertex(desc, x)
    _check_vertex(desc, y)
    S = desc.gset
    hits = 0
    for (xv, _), (yv, _) in zip(x[0], y[0]):
        if xv ^ yv in S:
            hits += 1
            if hits >= 2:
                return True
    return False


def gamma_element(desc: UniversalGraphDescriptor, x: Vertex) -> tuple[int, ...]:
    """Coordinates of ``x`` in ``Z_2^{t1} x Z_q^{t2}``: block bits, slot bits, block residues."""
    P = desc.params
    blocks, slot = x
    bits = [(v >> i) & 1 for v, _ in blocks for i in range(P.p)]
    bits += [(slot >> i) & 1 for i in range(P.s)]
    return tuple(bits + [u for _, u in blocks])


@dataclass(frozen=True)
class GeneratingSetSize:
    exact: int
    bound: int


def generating_set_size(desc: UniversalGraphDescriptor) -> GeneratingSetSize:
    """Size of Gamma's connection set, exactly and by the union bound.

    Per block, ``g = r q`` of the ``m`` sums are good; a tuple generates when
    at least two blocks are good, and the slot block is free.
    """
    P = desc.params
    g, m, dp = desc.r * P.q, P.m, P.d_prime
    exact = sum(math.comb(dp, j) * g**j * (m - g) ** (dp - j) for j in range(2, dp + 1))
    bound = m ** (dp - 2) * g * g * math.comb(dp, 2)
    return GeneratingSetSize(exact << P.s, bound << P.s)


# -- embedding ---------------------------------------------------------------------


class EmbeddingFailed(RuntimeError):
    def __init__(self, msg: str, histogram: dict[int, int]):
        super().__init__(f"{msg}; worst preimage histogram {histogram}")
        self.histogram = histogram


@dataclass(frozen=True)
class Embedding:
    f: tuple[Vertex, ...]
    attempts: int
    cap: int
    worst_preimage: int

    def to_dict(self) -> dict:
        return {
            "attempts": self.attempts,
            "cap": self.cap,
            "worst_preimage": self.worst_preimage,
            "f": {str(v): {"blocks": [list(b) for b in x[0]], "slot": x[1]} for v, x in enumerate(self.f)},
        }

    def labeling(self, desc: UniversalGraphDescriptor) -> Labeling:
        return Labeling.from_coords(desc.group(), [gamma_element(desc, x) for x in self.f])


def verify_embedding(G: Graph, desc: UniversalGraphDescriptor, emb: Embedding) -> None:
    if len(emb.f) != G.n or len(set(emb.f)) != G.n:
        raise AssertionError("embedding is not injective")
    for u, v in G.edges:
        if not gamma_adjacent(desc, emb.f[u], emb.f[v]):
            raise AssertionError(f"edge {(u, v)} is not mapped to an edge")
    load = Counter(x[0] for x in emb.f)
    if max(load.values(), default=0) > emb.cap:
        raise AssertionError("preimage cap exceeded")


def embed(
    G: Graph, desc: UniversalGraphDescriptor, c_embed: float = 1.0, retries: int = 100, seed=0
) -> Embedding:
    """Embed ``G`` into Gamma by independent random walks on ``Z``.

    One walk per covering subgraph, indexed by path position; vertex ``v``
    lands on the tuple of walk positions at its path positions. Attempts with
    an overfull ``F``-vertex are discarded. Walk streams are seeded by
    ``(seed, attempt, subgraph)``.
    """
    P = desc.params
    if G.max_degree() > P.d:
        raise ValueError(f"max degree {G.max_degree()} exceeds d = {P.d}")
    if G.n > P.n:
        raise ValueError(f"{G.n} vertices but the descriptor targets n = {P.n}")
    fam = covering_family(G)
    if fam.d_prime > P.d_prime:
        raise ValueError(f"covering family needs {fam.d_prime} blocks, descriptor has {P.d_prime}")
    homs = list(fam.homs)
    homs += [PathHomomorphism(tuple(range(G.n)))] * (P.d_prime - fam.d_prime)
    pos = np.array([h.position for h in homs], dtype=np.int64)  # (d', n)

    ln = math.log(P.n)
    cap = min(1 << P.s, math.ceil(1.1 * c_embed * P.d_prime * ln * ln))
    if cap < 1 or cap * P.m**P.d_prime < G.n:
        raise ValueError("preimage capacity below n")
    S = np.asarray(desc.generators, dtype=np.int64)
    L = max(G.n, 1)
    worst_hist: dict[int, int] = {}
    worst = -1
    for attempt in range(retries):
        sv, su, sidx, uval = [], [], [], []
        for i in range(P.d_prime):
            rng = np.random.default_rng([int(seed), attempt, i])
            sv.append(rng.integers(0, 1 << P.p))
            su.append(rng.integers(0, P.q))
            sidx.append(rng.integers(0, desc.r, L))
            uval.append(rng.integers(0, P.q, L))
        V, U = kernels.sum_graph_walks(
            np.array(sv, dtype=np.int64), np.array(su, dtype=np.int64),
            np.array(sidx, dtype=np.int64), np.array(uval, dtype=np.int64), S, P.q,
        )
        rows = np.arange(P.d_prime)[:, None]
        Vb, Ub = V[rows, pos], U[rows, pos]  # (d', n)
        images = [tuple(zip(Vb[:, v].tolist(), Ub[:, v].tolist())) for v in range(G.n)]
        load = Counter(images)
        top = max(load.values(), default=0)
        if top > cap:
            if worst < 0 or top < worst:
                worst, worst_hist = top, dict(sorted(Counter(load.values()).items()))
            continue
        used: dict[tuple, int] = {}
        f = []
        for x in images:
            slot = used.get(x, 0)
            used[x] = slot + 1
            f.append((x, slot))
        emb = Embedding(tuple(f), attempt + 1, cap, top)
        verify_embedding(G, desc, emb)
        return emb
    raise EmbeddingFailed(f"no embedding within {retries} attempts", worst_hist)


# -- placement avoiding a set of sums ---------------------------------------------


class PlacementFailed(RuntimeError):
    """Search budget ran out. The bijection exists; this is incompleteness."""


def placement_limit(n: int, max_degree: int) -> int:
    if max_degree == 0:
        return n
    return -(-n // (2 * max_degree)) - 1


def sauer_spencer_place(
    G: Graph, H: AbelianGroup, U, seed=0, restarts: int = 50, repair_steps: int = 2000
) -> Labeling:
    """Bijection ``V(G) -> H`` with no edge sum in ``U``.

    Randomised greedy followed by pair-swap repair; graphs with at most 16
    vertices fall back to exhaustive backtracking.
    """
    if not H.is_finite or H.order() != G.n:
        raise ValueError(f"group order must equal n = {G.n}")
    avoid = {encode(u if isinstance(u, GroupElement) else H.element(u)) for u in U}
    if len(avoid) > placement_limit(G.n, G.max_degree()):
        raise ValueError(f"|U| = {len(avoid)} exceeds {placement_limit(G.n, G.max_degree())}")
    n = G.n
    elems = [decode(H, x) for x in range(n)]
    bad = np.array([[encode(a + b) in avoid for b in elems] for a in elems], dtype=bool).reshape(n, n)
    edges = G.edges

    def conflicts(lab) -> list[Edge]:
        return [(u, v) for u, v in edges if bad[lab[u], lab[v]]]

    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        lab = [-1] * n
        free = set(range(n))
        for v in rng.permutation(n).tolist():
            cand = [x for x in sorted(free) if not any(lab[w] >= 0 and bad[x, lab[w]] for w in G.adj[v])]
            pool = cand or sorted(free)
            x = pool[int(rng.integers(len(pool)))]
            lab[v] = x
            free.discard(x)
        cur = conflicts(lab)
        for _ in range(repair_steps):
            if not cur:
                break
            u, v = cur[int(rng.integers(len(cur)))]
            a = (u, v)[int(rng.integers(2))]
            w = int(rng.integers(n))
            lab[a], lab[w] = lab[w], lab[a]
            nxt = conflicts(lab)
            if len(nxt) <= len(cur):
                cur = nxt
            else:
                lab[a], lab[w] = lab[w], lab[a]
        if not cur:
            return Labeling(H, tuple(elems[x] for x in lab))

    if n <= 16:
        lab = _backtrack(G, bad)
        if lab is not None:
            return Labeling(H, tuple(elems[x] for x in lab))
        raise PlacementFailed("exhaustive search found nothing; this contradicts the theorem")
    raise PlacementFailed("search budget exhausted")


def _backtrack(G: Graph, bad: np.ndarray) -> list[int] | None:
    n = G.n
    lab = [-1] * n
    used = [False] * n
    vorder = sorted(range(n), key=lambda v: -G.degree(v))

    def rec(i: int) -> bool:
        if i == n:
            return True
        v = vorder[i]
        for x in range(n):
            if used[x] or any(lab[w] >= 0 and bad[x, lab[w]] for w in G.adj[v]):
                continue
            lab[v], used[x] = x, True
            if rec(i + 1):
                return True
            lab[v], used[x] = -1, False
        return False

    return lab if rec(0) else None
