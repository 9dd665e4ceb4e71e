"""Simple graphs, random regular graphs, edge colouring and path covers."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

Edge = tuple[int, int]


class Graph:
    """Undirected graph on vertices ``0..n-1``.

    Edges keep their insertion order (it is the reference order for edge
    colourings and for the file format). Loops ``(u, u)`` are rejected unless
    ``loops=True``.
    """

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), loops: bool = False):
        if n < 0:
            raise ValueError("negative vertex count")
        self.n = n
        self.loops = loops
        seen = set()
        out = []
        adj: list[list[int]] = [[] for _ in range(n)]
        for e in edges:
            u, v = sorted(map(int, e))
            if not (0 <= u and v < n):
                raise ValueError(f"edge {e} out of range for n={n}")
            if u == v and not loops:
                raise ValueError(f"loop at {u} in a loop-free graph")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge {(u, v)}")
            seen.add((u, v))
            out.append((u, v))
            adj[u].append(v)
            if u != v:
                adj[v].append(u)
        self.edges: tuple[Edge, ...] = tuple(out)
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in adj)
        self._edge_set = frozenset(seen)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edge_set

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], deque([s])
            while queue:
                u = queue.popleft()
                comp.append(u)
                for w in self.adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for u, v in self.edges:
            A[u, v] = A[v, u] = 1
        return A

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.loops == other.loops
            and self._edge_set == other._edge_set
        )

    def __hash__(self):
        return hash((self.n, self._edge_set))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # file format: "n m" then one "u v" line per edge, u <= v

    def dumps(self) -> str:
        lines = [f"{self.n} {self.m}"] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, loops: bool = False) -> "Graph":
        tokens = text.split("\n")
        n, m = map(int, tokens[0].split())
        edges = [tuple(map(int, line.split())) for line in tokens[1 : 1 + m]]
        if len(edges) != m:
            raise ValueError(f"expected {m} edges, found {len(edges)}")
        for u, v in edges:
            if u > v or (u == v and not loops):
                raise ValueError(f"malformed edge line {u} {v}")
        return cls(n, edges, loops=loops)

    def save(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path, loops: bool = False) -> "Graph":
        with open(path) as fh:
            return cls.loads(fh.read(), loops=loops)


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph(n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])


def complete(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def disjoint_triangles(m: int) -> Graph:
    if m < 1:
        raise ValueError("need at least one triangle")
    edges = []
    for i in range(m):
        a, b, c = 3 * i, 3 * i + 1, 3 * i + 2
        edges += [(a, b), (a, c), (b, c)]
    return Graph(3 * m, edges)


def perfect_matching(n: int) -> Graph:
    if n % 2:
        raise ValueError("perfect matching needs even n")
    return Graph(n, [(i, i + 1) for i in range(0, n, 2)])


def random_regular(n: int, d: int, seed) -> Graph:
    """Uniform random simple d-regular graph.

    Configuration model: pair the ``n*d`` stubs uniformly and throw the whole
    pairing away if it has a loop or a repeated edge.
    """
    if (n * d) % 2:
        raise ValueError("n * d must be even")
    if d >= n:
        raise ValueError("need d < n")
    if d < 1:
        raise ValueError("need d >= 1")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    while True:
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        a = pairs.min(axis=1)
        b = pairs.max(axis=1)
        if np.any(a == b):
            continue
        keys = a * n + b
        if len(np.unique(keys)) != len(keys):
            continue
        return Graph(n, sorted(zip(a.tolist(), b.tolist())))


def random_max_degree(n: int, d: int, seed, keep: float = 0.8) -> Graph:
    """Random graph with maximum degree at most ``d``: a d-regular (or, for odd
    ``n*d``, a (d-1)-regular) graph with each edge kept with probability ``keep``."""
    rng = np.random.default_rng(seed)
    base_d = d if (n * d) % 2 == 0 else d - 1
    base = random_regular(n, base_d, rng)
    mask = rng.random(base.m) < keep
    return Graph(n, [e for e, k in zip(base.edges, mask) if k])


def bfs_distances(G: Graph, root: int) -> list[int | None]:
    dist: list[int | None] = [None] * G.n
    dist[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in G.adj[u]:
            if dist[w] is None:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def diameter(G: Graph) -> int | None:
    """Largest BFS eccentricity, or ``None`` when ``G`` is disconnected."""
    best = 0
    for s in range(G.n):
        dist = bfs_distances(G, s)
        if any(x is None for x in dist):
            return None
        best = max(best, max(dist))
    return best


@dataclass(frozen=True)
class SpanningTree:
    root: int
    edges: tuple[Edge, ...]
    parent: tuple[int | None, ...]
    depth: tuple[int, ...]
    order: tuple[int, ...]  # BFS discovery order


def bfs_spanning_tree(G: Graph, root: int = 0) -> SpanningTree:
    parent: list[int | None] = [None] * G.n
    depth = [-1] * G.n
    depth[root] = 0
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in G.adj[u]:
            if depth[w] < 0:
                depth[w] = depth[u] + 1
                parent[w] = u
                order.append(w)
                queue.append(w)
    if len(order) != G.n:
        raise ValueError("graph is disconnected")
    edges = tuple((min(parent[v], v), max(parent[v], v)) for v in order[1:])
    return SpanningTree(root, edges, tuple(parent), tuple(depth), tuple(order))


# -- edge colouring ---------------------------------------------------------


def edge_color(G: Graph) -> list[list[Edge]]:
    """Proper edge colouring with at most ``max_degree + 1`` colours (Misra-Gries).

    Returns the colour classes as lists of edges; every class is a matching.
    An edge whose endpoints share a free colour takes the smallest such
    colour, so easy graphs often need only ``max_degree`` colours.
    """
    if G.loops and any(u == v for u, v in G.edges):
        raise ValueError("cannot edge-colour loops")
    ncol = G.max_degree() + 1
    at: list[dict[int, int]] = [dict() for _ in range(G.n)]  # colour -> neighbour

    def free(v: int) -> int:
        return next(c for c in range(ncol) if c not in at[v])

    def is_free(c: int, v: int) -> bool:
        return c not in at[v]

    def color_of(u: int, v: int) -> int | None:
        return next((c for c, w in at[u].items() if w == v), None)

    def set_color(u: int, v: int, c: int):
        at[u][c] = v
        at[v][c] = u

    def clear(u: int, v: int):
        c = color_of(u, v)
        if c is not None:
            del at[u][c]
            del at[v][c]

    def invert_path(u: int, c: int, d: int):
        # the maximal path from u whose edges alternate d, c, d, ...
        path_edges = []
        x, want = u, d
        while want in at[x]:
            y = at[x][want]
            path_edges.append((x, y, want))
            x, want = y, (c if want == d else d)
        for x, y, col in path_edges:
            del at[x][col]
            del at[y][col]
        for x, y, col in path_edges:
            set_color(x, y, c if col == d else d)

    for u, v in G.edges:
        common = next((c for c in range(ncol) if is_free(c, u) and is_free(c, v)), None)
        if common is not None:
            set_color(u, v, common)
            continue
        fan = [v]
        in_fan = {v}
        while True:
            last = fan[-1]
            nxt = None
            for c in range(ncol):
                if is_free(c, last):
                    w = at[u].get(c)
                    if w is not None and w not in in_fan:
                        nxt = w
                        break
            if nxt is None:
                break
            fan.append(nxt)
            in_fan.add(nxt)
        c = free(u)
        d = free(fan[-1])
        invert_path(u, c, d)
        # shortest prefix of the fan that is still a fan and ends at a vertex missing d
        end = None
        for i, w in enumerate(fan):
            if i > 0:
                prev_col = color_of(u, w)
                if prev_col is None or not is_free(prev_col, fan[i - 1]):
                    break
            if is_free(d, w):
                end = i
                break
        if end is None:  # pragma: no cover - excluded by the Misra-Gries lemma
            raise AssertionError("Misra-Gries rotation failed")
        for i in range(end):
            col = color_of(u, fan[i + 1])
            clear(u, fan[i + 1])
            set_color(u, fan[i], col)
        set_color(u, fan[end], d)

    classes: dict[int, list[Edge]] = {}
    for u, v in G.edges:
        classes.setdefault(color_of(u, v), []).append((u, v))
    return [classes[c] for c in sorted(classes)]


# -- covering by path-homomorphic subgraphs -------------------------------


@dataclass(frozen=True)
class PathHomomorphism:
    """Map from vertices to positions of the looped path ``P_n``."""

    position: tuple[int, ...]
    bound: int = 1

    def check(self, H: Graph) -> None:
        if len(self.position) != H.n:
            raise AssertionError("homomorphism is not total")
        if any(not 0 <= p < H.n for p in self.position):
            raise AssertionError("position outside the path")
        for u, v in H.edges:
            if abs(self.position[u] - self.position[v]) > 1:
                raise AssertionError(f"edge {(u, v)} is stretched")
        counts: dict[int, int] = {}
        for p in self.position:
            counts[p] = counts.get(p, 0) + 1
        if max(counts.values(), default=0) > self.bound:
            raise AssertionError("preimage bound violated")


@dataclass(frozen=True)
class CoveringFamily:
    subgraphs: tuple[Graph, ...]
    homs: tuple[PathHomomorphism, ...]

    @property
    def d_prime(self) -> int:
        return len(self.subgraphs)

    def check(self, G: Graph) -> None:
        cover = {e: 0 for e in G.edges}
        for H, g in zip(self.subgraphs, self.homs):
            if H.n != G.n:
                raise AssertionError("subgraph is not spanning")
            g.check(H)
            for e in H.edges:
                if e not in cover:
                    raise AssertionError(f"{e} is not an edge of G")
                cover[e] += 1
        bad = [e for e, c in cover.items() if c != 2]
        if bad:
            raise AssertionError(f"edges not covered exactly twice: {bad[:5]}")


def matching_homomorphism(n: int, matching: Sequence[Edge]) -> PathHomomorphism:
    """Lay the matching edges side by side along the path; everything else after."""
    pos = [-1] * n
    nxt = 0
    for u, v in matching:
        pos[u], pos[v] = nxt, nxt + 1
        nxt += 2
    for x in range(n):
        if pos[x] < 0:
            pos[x] = nxt
            nxt += 1
    return PathHomomorphism(tuple(pos), 1)


def covering_family(G: Graph) -> CoveringFamily:
    """Every edge covered exactly twice by spanning linear forests.

    Each colour class of :func:`edge_color` is a matching; it is used twice.
    Gives at most ``2 * (max_degree + 1)`` subgraphs, all with injective
    path homomorphisms.
    """
    subs, homs = [], []
    for matching in edge_color(G):
        H = Graph(G.n, matching)
        g = matching_homomorphism(G.n, matching)
        subs += [H, H]
        homs += [g, g]
    fam = CoveringFamily(tuple(subs), tuple(homs))
    fam.check(G)
    return fam
