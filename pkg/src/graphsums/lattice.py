"""Integer sublattices of Z^k.

Everything here works on plain Python ints (arbitrary precision). Vectors are
tuples of ints; matrices are lists of such tuples, row-major.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

IntVector = tuple[int, ...]


class LatticeError(ValueError):
    pass


def l1(v: Sequence[int]) -> int:
    return sum(abs(x) for x in v)


def _as_rows(M: Iterable[Sequence[int]]) -> list[list[int]]:
    rows = [list(map(int, r)) for r in M]
    if rows and len({len(r) for r in rows}) != 1:
        raise LatticeError("ragged matrix")
    return rows


def _hnf_rows(M: Iterable[Sequence[int]], k: int | None = None) -> list[IntVector]:
    A = _as_rows(M)
    if not A:
        return []
    ncols = len(A[0]) if k is None else k
    r = 0
    for j in range(ncols):
        if r == len(A):
            break
        while True:
            # smallest nonzero entry in column j at or below row r becomes the pivot
            best = None
            for i in range(r, len(A)):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best][j])):
                    best = i
            if best is None:
                break
            A[r], A[best] = A[best], A[r]
            piv = A[r][j]
            done = True
            for i in range(r + 1, len(A)):
                if A[i][j]:
                    q = A[i][j] // piv
                    if q:
                        Ai, Ar = A[i], A[r]
                        for c in range(j, ncols):
                            Ai[c] -= q * Ar[c]
                    if A[i][j]:
                        done = False
            if done:
                break
        if r < len(A) and A[r][j]:
            if A[r][j] < 0:
                A[r] = [-x for x in A[r]]
            piv = A[r][j]
            for i in range(r):
                q = A[i][j] // piv
                if q:
                    Ai, Ar = A[i], A[r]
                    for c in range(j, ncols):
                        Ai[c] -= q * Ar[c]
            r += 1
    return [tuple(row) for row in A[:r]]


@dataclass(frozen=True)
class LatticeBasis:
    """Row basis of a sublattice of Z^k, stored in Hermite normal form.

    Rows are in row-echelon form with positive pivots and the entries above
    every pivot reduced into ``[0, pivot)``. Two bases span the same lattice
    iff their ``rows`` are equal.
    """

    k: int
    rows: tuple[IntVector, ...]
    pivots: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not self.pivots and self.rows:
            piv = tuple(next(j for j, x in enumerate(r) if x) for r in self.rows)
            object.__setattr__(self, "pivots", piv)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence[int]) -> IntVector:
        """Canonical representative of the coset ``v + L``."""
        if len(v) != self.k:
            raise LatticeError(f"dimension mismatch: {len(v)} != {self.k}")
        w = list(v)
        for row, j in zip(self.rows, self.pivots):
            q = w[j] // row[j]
            if q:
                for c in range(j, self.k):
                    w[c] -= q * row[c]
        return tuple(w)

    def __contains__(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def hnf(M: Iterable[Sequence[int]], k: int | None = None) -> LatticeBasis:
    """Row Hermite normal form of ``M``; dependent and zero rows are dropped.

    ``k`` is only needed when ``M`` has no rows.
    """
    rows = _as_rows(M)
    if k is None:
        if not rows:
            raise LatticeError("ambient dimension unknown for an empty matrix")
        k = len(rows[0])
    elif rows and len(rows[0]) != k:
        raise LatticeError(f"rows have length {len(rows[0])}, expected {k}")
    return LatticeBasis(k, tuple(_hnf_rows(rows, k)))


def basis_of(F: LatticeBasis | Iterable[Sequence[int]], k: int) -> LatticeBasis:
    if isinstance(F, LatticeBasis):
        if F.k != k:
            raise LatticeError(f"lattice lives in Z^{F.k}, expected Z^{k}")
        return F
    return hnf(list(F), k)


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def snf(M: Sequence[Sequence[int]], k: int | None = None):
    """Smith normal form: returns ``(D, U, V)`` with ``U @ M @ V == D``.

    ``D`` has the shape of ``M`` and nonnegative diagonal ``d_1 | d_2 | ...``;
    ``U`` and ``V`` are unimodular.
    """
    A = _as_rows(M)
    m = len(A)
    n = len(A[0]) if A else (k or 0)
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // piv)
                    clean = clean and not A[i][t]
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // piv)
                    clean = clean and not A[t][j]
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            # fold the offending row in; the next pass lowers the pivot
            add_row(t, bad, -1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return A, U, V


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    Bt = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = _as_rows(M)
    n = len(A)
    if n == 0:
        return 1
    if any(len(r) != n for r in A):
        raise LatticeError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for i in range(n - 1):
        if A[i][i] == 0:
            swap = next((r for r in range(i + 1, n) if A[r][i]), None)
            if swap is None:
                return 0
            A[i], A[swap] = A[swap], A[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                A[r][c] = (A[r][c] * A[i][i] - A[r][i] * A[i][c]) // prev
        prev = A[i][i]
    return sign * A[-1][-1]


def span_membership(L: LatticeBasis, v: Sequence[int]) -> bool:
    return v in L


def volume_squared(L: LatticeBasis | Sequence[Sequence[int]]) -> int:
    """Squared covolume: the Gram determinant of the basis rows."""
    rows = L.rows if isinstance(L, LatticeBasis) else _as_rows(L)
    gram = [[sum(a * b for a, b in zip(r, s)) for s in rows] for r in rows]
    g = det(gram)
    if g <= 0:
        raise LatticeError("basis rows are linearly dependent")
    return g


def lattice_index(L: LatticeBasis, Lsub: LatticeBasis) -> int:
    """Index of ``Lsub`` in ``L``, i.e. ``Vol(Lsub) / Vol(L)``."""
    if L.k != Lsub.k:
        raise LatticeError("dimension mismatch")
    if L.rank != Lsub.rank:
        raise LatticeError(f"rank mismatch: {L.rank} != {Lsub.rank}")
    if any(r not in L for r in Lsub.rows):
        raise LatticeError("not a sublattice")
    num, den = volume_squared(Lsub), volume_squared(L)
    q, rem = divmod(num, den)
    root = math.isqrt(q)
    if rem or root * root != q:  # pragma: no cover - internal consistency
        raise AssertionError(f"covolume ratio {num}/{den} is not an integer square")
    return root


def rank(vectors: Iterable[Sequence[int]], k: int) -> int:
    return hnf(list(vectors), k).rank


def reduce_generating_set(F: Sequence[Sequence[int]], D: int) -> list[IntVector]:
    """Pick a subset of ``F`` with the same span and at most ``k(2 + log2 D)`` members.

    First a maximal linearly independent prefix-greedy selection, then one pass
    adding every vector that lies outside the current span. Ties go to input
    order.
    """
    if D < 2:
        raise LatticeError("D must be at least 2")
    F = [tuple(map(int, f)) for f in F]
    if not F:
        return []
    k = len(F[0])
    for f in F:
        if len(f) != k:
            raise LatticeError("generators of different lengths")
        if l1(f) > 3 * D:
            raise LatticeError(f"|{f}|_1 = {l1(f)} exceeds 3D = {3 * D}")

    chosen: list[int] = []
    r = 0
    for i, f in enumerate(F):
        if rank([F[j] for j in chosen] + [f], k) > r:
            chosen.append(i)
            r += 1
    L = hnf([F[j] for j in chosen], k)
    taken = set(chosen)
    for i, f in enumerate(F):
        if i in taken or f in L:
            continue
        chosen.append(i)
        L = hnf([F[j] for j in chosen], k)
    S = [F[j] for j in chosen]
    bound = k * (2 + math.log2(D))
    if len(S) > bound:  # pragma: no cover - would contradict the halving argument
        raise AssertionError(f"{len(S)} generators exceed k(2+log2 D) = {bound:.3f}")
    return S


def l1_ball_size(k: int, B: int) -> int:
    """Number of points of Z^k with L1 norm at most ``B``."""
    return sum(math.comb(k, s) * math.comb(B, s) * 2**s for s in range(min(k, B) + 1))


def enumerate_l1_ball(k: int, B: int) -> Iterator[IntVector]:
    if k < 1 or B < 0:
        raise LatticeError("need k >= 1 and B >= 0")

    def rec(dim: int, budget: int) -> Iterator[IntVector]:
        if dim == 1:
            yield (0,)
            for x in range(1, budget + 1):
                yield (x,)
                yield (-x,)
            return
        for x in range(-budget, budget + 1):
            for rest in rec(dim - 1, budget - abs(x)):
                yield (x, *rest)

    yield from rec(k, B)
