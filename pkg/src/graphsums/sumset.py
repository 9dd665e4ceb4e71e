"""Sum-sets of graphs: evaluation, the quotient reduction, and the exact oracle.

The exact oracle rests on one observation: an injective labelling ``A`` of a
connected graph is determined, up to translation, by which edges share a sum.
Treat the sums as formal basis vectors ``e_1..e_k``, push labels down a
spanning tree, and collect one relation per non-tree edge. The colouring is
realisable iff the induced map into ``Z^k / Span(relations)`` is injective,
and that quotient is then a witness group. Minimising over colourings gives
the minimum over *all* abelian groups.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .abelian import AbelianGroup, GroupElement, QuotientMap, dot_action, quotient_group
from .graphs import Edge, Graph, SpanningTree, bfs_spanning_tree, diameter
from .lattice import IntVector, LatticeBasis, hnf, l1

DEFAULT_EDGE_CAP = 12


class ReductionError(AssertionError):
    """A verified property of the reduction failed; always a bug."""


@dataclass(frozen=True)
class Labeling:
    group: AbelianGroup
    assign: tuple[GroupElement, ...]

    def __post_init__(self):
        if any(a.group != self.group for a in self.assign):
            raise ValueError("labels from different groups")
        if len(set(self.assign)) != len(self.assign):
            raise ValueError("labeling is not injective")

    @classmethod
    def from_coords(cls, group: AbelianGroup, coords: Sequence[Sequence[int]]) -> "Labeling":
        return cls(group, tuple(group.element(c) for c in coords))

    def __len__(self) -> int:
        return len(self.assign)

    def __getitem__(self, v: int) -> GroupElement:
        return self.assign[v]

    def translated(self, v0: int = 0) -> "Labeling":
        shift = self.assign[v0]
        return Labeling(self.group, tuple(a - shift for a in self.assign))

    def to_json(self) -> list[list[int]]:
        return [a.to_json() for a in self.assign]


def eval_sumset(G: Graph, L: Labeling) -> set[GroupElement]:
    if len(L) != G.n:
        raise ValueError(f"labeling has {len(L)} values for {G.n} vertices")
    return {L[u] + L[v] for u, v in G.edges}


def sumset_size(G: Graph, L: Labeling) -> int:
    return len(eval_sumset(G, L))


# -- the reduction -----------------------------------------------------------


def _unit(k: int, i: int) -> list[int]:
    e = [0] * k
    e[i] = 1
    return e


def _vadd(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class CanonicalReduction:
    k: int
    sums: tuple[GroupElement, ...]  # a_1..a_k, in order of first appearance
    F: tuple[IntVector, ...]  # one relation per non-tree edge
    group: AbelianGroup
    labeling: Labeling
    pi: QuotientMap
    aprime: tuple[IntVector, ...]
    D: int
    tree: SpanningTree


def canonical_reduction(G: Graph, L: Labeling, D: int | None = None) -> CanonicalReduction:
    """Replace ``(H, L)`` by a quotient of ``Z^k`` with no more edge sums.

    ``D`` must exceed the diameter; by default it is ``diameter + 1``. All the
    properties of the result are checked before it is returned.
    """
    diam = diameter(G)
    if diam is None:
        raise ValueError("graph is disconnected")
    if D is None:
        D = diam + 1
    if D <= diam:
        raise ValueError(f"D = {D} does not exceed the diameter {diam}")
    A = L.translated(0)

    index: dict[GroupElement, int] = {}
    for u, v in G.edges:
        index.setdefault(A[u] + A[v], len(index))
    k = len(index)
    sums = tuple(sorted(index, key=index.get))

    tree = bfs_spanning_tree(G, 0)
    ap: list[IntVector] = [()] * G.n
    ap[0] = (0,) * k
    for v in tree.order[1:]:
        u = tree.parent[v]
        ap[v] = _vsub(_unit(k, index[A[u] + A[v]]), ap[u])
    tree_edges = set(tree.edges)
    F = tuple(
        _vsub(_vadd(ap[u], ap[v]), _unit(k, index[A[u] + A[v]]))
        for u, v in G.edges
        if (u, v) not in tree_edges
    )
    group, pi = quotient_group(k, F)
    tilde = Labeling(group, tuple(pi(x) for x in ap)) if _injective_images(pi, ap) else None
    red = CanonicalReduction(k, sums, F, group, tilde, pi, tuple(ap), D, tree)
    _verify_reduction(G, A, red)
    return red


def _injective_images(pi: QuotientMap, vecs) -> bool:
    imgs = [pi(x) for x in vecs]
    return len(set(imgs)) == len(imgs)


def _verify_reduction(G: Graph, A: Labeling, red: CanonicalReduction) -> None:
    if red.labeling is None:
        raise ReductionError("reduced labeling is not injective")
    for f in red.F:
        if l1(f) > 3 * red.D:
            raise ReductionError(f"relation {f} has L1 norm above 3D = {3 * red.D}")
    basis_imgs = set(red.pi.images_of_basis())
    new_sums = eval_sumset(G, red.labeling)
    if not new_sums <= basis_imgs:
        raise ReductionError("an edge sum falls outside pi(e_1..e_k)")
    if len(new_sums) > red.k:
        raise ReductionError("reduction enlarged the sum-set")
    if red.k == 0:
        return
    zero = A.group.zero()
    for i, x in enumerate(red.aprime):
        if dot_action(x, red.sums) != A[i]:
            raise ReductionError(f"S1 fails at vertex {i}")
    for f in red.F:
        if dot_action(f, red.sums) != zero:
            raise ReductionError(f"S2 fails for {f}")
    # S3: any other preimage of the reduced label acts the same way
    if red.F:
        shifts = list(red.F) + [tuple(map(sum, zip(*red.F)))]
        for i, x in enumerate(red.aprime):
            for f in shifts:
                y = _vadd(x, f)
                if red.pi(y) != red.labeling[i] or dot_action(y, red.sums) != A[i]:
                    raise ReductionError(f"S3 fails at vertex {i}")


# -- colourings and feasibility --------------------------------------------


@dataclass(frozen=True)
class EdgeColoring:
    """Edge -> class index, numbered in order of first appearance."""

    k: int
    color: tuple[int, ...]

    def __post_init__(self):
        top = -1
        for c in self.color:
            if not 0 <= c < self.k:
                raise ValueError(f"class {c} outside [0, {self.k})")
            if c > top + 1:
                raise ValueError("colouring is not in restricted-growth form")
            top = max(top, c)

    @classmethod
    def canonical(cls, colors: Sequence[int]) -> "EdgeColoring":
        relabel: dict[int, int] = {}
        out = tuple(relabel.setdefault(c, len(relabel)) for c in colors)
        return cls(len(relabel), out)

    @property
    def classes_used(self) -> int:
        return len(set(self.color))


@dataclass(frozen=True)
class _Potentials:
    dim: int
    ap: tuple[IntVector, ...]
    relations: tuple[IntVector, ...]


def _potentials(G: Graph, colors: Sequence[int], dim: int, tree: SpanningTree) -> _Potentials:
    col = dict(zip(G.edges, colors))
    ap: list[IntVector] = [()] * G.n
    ap[tree.root] = (0,) * dim
    for v in tree.order[1:]:
        u = tree.parent[v]
        ap[v] = _vsub(_unit(dim, col[(min(u, v), max(u, v))]), ap[u])
    tree_edges = set(tree.edges)
    rel = tuple(
        _vsub(_vadd(ap[u], ap[v]), _unit(dim, col[(u, v)]))
        for u, v in G.edges
        if (u, v) not in tree_edges
    )
    return _Potentials(dim, tuple(ap), rel)


def _feasible(G: Graph, colors: Sequence[int], dim: int, tree: SpanningTree):
    pot = _potentials(G, colors, dim, tree)
    if len(set(pot.ap)) < G.n:
        return None
    L = hnf(pot.relations, dim)
    if len({L.reduce(x) for x in pot.ap}) < G.n:
        return None
    return pot


def _witness(pot: _Potentials) -> tuple[AbelianGroup, Labeling, QuotientMap]:
    group, pi = quotient_group(pot.dim, pot.relations)
    return group, Labeling(group, tuple(pi(x) for x in pot.ap)), pi


def coloring_feasible(G: Graph, c: EdgeColoring | Sequence[int]):
    """Witness ``(group, labeling)`` realising colouring ``c``, or ``None``.

    Edges of the same class get the same sum under the witness labeling; the
    witness is the universal one, ``Z^k / Span(relations)``.
    """
    if not G.is_connected():
        raise ValueError("graph is disconnected")
    colors = c.color if isinstance(c, EdgeColoring) else tuple(c)
    if len(colors) != G.m:
        raise ValueError("one colour per edge is required")
    dim = max(colors, default=-1) + 1
    pot = _feasible(G, colors, dim, bfs_spanning_tree(G, 0))
    if pot is None:
        return None
    group, lab, _ = _witness(pot)
    return group, lab


# -- exact minimum -----------------------------------------------------------


@dataclass(frozen=True)
class ExactResult:
    size: int
    group: AbelianGroup
    labeling: Labeling
    coloring: EdgeColoring
    virtual_edges: tuple[Edge, ...]
    nodes: int  # search nodes visited (or colourings tested)


class EdgeCapExceeded(ValueError):
    pass


def _connected_closure(G: Graph) -> tuple[Graph, tuple[Edge, ...]]:
    comps = G.components()
    virtual = tuple((0, comp[0]) for comp in comps[1:])
    if not virtual:
        return G, ()
    return Graph(G.n, list(G.edges) + list(virtual)), virtual


def _finish(G, Gc, virtual, k, real_colors, nodes) -> ExactResult:
    nv = len(virtual)
    colors = list(real_colors) + [k + j for j in range(nv)]
    pot = _feasible(Gc, colors, k + nv, bfs_spanning_tree(Gc, 0))
    if pot is None:  # pragma: no cover
        raise AssertionError("search returned an infeasible colouring")
    group, lab, _ = _witness(pot)
    size = sumset_size(G, lab)
    if size != k:  # pragma: no cover
        raise AssertionError(f"witness realises {size}, expected {k}")
    return ExactResult(size, group, lab, EdgeColoring.canonical(real_colors), virtual, nodes)


def _trivial(G: Graph) -> ExactResult:
    Gc, virtual = _connected_closure(G)
    return _finish(G, Gc, virtual, 0, [], 0)


def exact_min_sumset(G: Graph, cap: int = DEFAULT_EDGE_CAP) -> ExactResult:
    """Minimum sum-set size over every abelian group, with a witness.

    Branch and bound over edge colourings in restricted-growth form. Edges are
    visited in BFS order so every cycle closes as early as possible; a branch
    dies as soon as two settled vertices fall into the same coset of the
    relations collected so far. Disconnected graphs are joined to vertex 0 by
    virtual bridges, each with its own private colour.
    """
    if G.m > cap:
        raise EdgeCapExceeded(f"{G.m} edges exceed the cap of {cap}")
    if G.m == 0:
        return _trivial(G)
    Gc, virtual = _connected_closure(G)
    m_real, nv = G.m, len(virtual)
    tree = bfs_spanning_tree(Gc, 0)
    eidx = {e: i for i, e in enumerate(Gc.edges)}

    steps = []  # (edge index, settled endpoint, other endpoint, is tree edge)
    settled = {tree.root}
    for v in tree.order[1:]:
        p = tree.parent[v]
        steps.append((eidx[(min(p, v), max(p, v))], p, v, True))
        settled.add(v)
        for w in Gc.adj[v]:
            if w in settled and w != p:
                steps.append((eidx[(min(v, w), max(v, w))], w, v, False))

    nodes = 0
    for k in range(max(1, G.max_degree()), m_real + 1):
        dim = k + nv
        colors = [-1] * Gc.m
        at = [set() for _ in range(G.n)]
        ap: list[IntVector | None] = [None] * G.n
        ap[tree.root] = (0,) * dim
        order = [tree.root]

        def rec(i: int, nused: int, L: LatticeBasis, reps: set) -> bool:
            nonlocal nodes
            nodes += 1
            if i == len(steps):
                return True
            e, u, v, is_tree = steps[i]
            if e >= m_real:
                choices = [k + e - m_real]
            else:
                choices = [
                    c for c in range(min(nused + 1, k)) if c not in at[u] and c not in at[v]
                ]
            for c in choices:
                real = e < m_real
                nu = nused + 1 if real and c == nused else nused
                if is_tree:
                    a = _vsub(_unit(dim, c), ap[u])
                    r = L.reduce(a)
                    if r in reps:
                        continue
                    ap[v] = a
                    order.append(v)
                    reps.add(r)
                    nxt_L, nxt_reps = L, reps
                else:
                    f = _vsub(_vadd(ap[u], ap[v]), _unit(dim, c))
                    if f in L:
                        nxt_L, nxt_reps = L, reps
                    else:
                        nxt_L = hnf(L.rows + (f,), dim)
                        nxt_reps = {nxt_L.reduce(ap[w]) for w in order}
                        if len(nxt_reps) < len(order):
                            continue
                colors[e] = c
                if real:
                    at[u].add(c)
                    at[v].add(c)
                if rec(i + 1, nu, nxt_L, nxt_reps):
                    return True
                colors[e] = -1
                if real:
                    at[u].discard(c)
                    at[v].discard(c)
                if is_tree:
                    reps.discard(r)
                    order.pop()
                    ap[v] = None
            return False

        if rec(0, 0, hnf([], dim), {(0,) * dim}):
            return _finish(G, Gc, virtual, k, colors[:m_real], nodes)
    raise AssertionError("no feasible colouring found")  # pragma: no cover


def _rg_strings(length: int, classes: int) -> Iterator[list[int]]:
    """Restricted-growth strings using exactly ``classes`` symbols."""
    s = [0] * length

    def rec(i: int, top: int):
        if length - i < classes - top - 1:
            return
        if i == length:
            if top + 1 == classes:
                yield list(s)
            return
        for c in range(min(top + 2, classes)):
            s[i] = c
            yield from rec(i + 1, max(top, c))

    if length == 0:
        if classes == 0:
            yield []
        return
    yield from rec(0, -1)


def exact_min_sumset_bruteforce(G: Graph, cap: int = DEFAULT_EDGE_CAP) -> ExactResult:
    """Same answer as :func:`exact_min_sumset`, by testing every colouring.

    No pruning and no degree bound: class counts are tried from 1 upward and
    every restricted-growth colouring with that many classes is checked.
    """
    if G.m > cap:
        raise EdgeCapExceeded(f"{G.m} edges exceed the cap of {cap}")
    if G.m == 0:
        return _trivial(G)
    Gc, virtual = _connected_closure(G)
    nv = len(virtual)
    tree = bfs_spanning_tree(Gc, 0)
    tested = 0
    for k in range(1, G.m + 1):
        extra = [k + j for j in range(nv)]
        for s in _rg_strings(G.m, k):
            tested += 1
            if _feasible(Gc, s + extra, k + nv, tree) is not None:
                return _finish(G, Gc, virtual, k, s, tested)
    raise AssertionError("no feasible colouring found")  # pragma: no cover


# -- disjoint triangles over Z ---------------------------------------------


def triangle_alphabet_size(m: int) -> int:
    s = 3
    while math.comb(s, 3) < m:
        s += 1
    return s


def triangle_construction(m: int, max_retries: int = 16) -> Labeling:
    """Integer labels for ``disjoint_triangles(m)`` using few edge sums.

    Triangle ``t`` gets the ``t``-th 3-subset ``{p, q, r}`` of an even
    alphabet and vertex values ``((p+q-r)/2, (p-q+r)/2, (-p+q+r)/2)``, so its
    edge sums are exactly ``p, q, r``. The alphabet ``2 * base**i`` starts at
    base 3; a label collision bumps the base.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    s = triangle_alphabet_size(m)
    Z = AbelianGroup((0,), canonical=True)
    for attempt in range(max_retries):
        base = 3 + attempt
        alpha = [2 * base**i for i in range(s)]
        values = []
        for a, b, c in itertools.islice(itertools.combinations(range(s), 3), m):
            p, q, r = alpha[a], alpha[b], alpha[c]
            values += [(p + q - r) // 2, (p - q + r) // 2, (-p + q + r) // 2]
        if len(set(values)) == len(values):
            return Labeling.from_coords(Z, [(x,) for x in values])
    raise RuntimeError(f"alphabet exhausted after {max_retries} rescalings")
