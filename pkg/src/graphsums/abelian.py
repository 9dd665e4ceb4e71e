"""Finitely generated abelian groups as products of cyclic factors.

A group is a tuple of moduli; modulus 0 is a copy of Z, modulus m >= 1 is
Z_m. Elements carry fully reduced residues, so equality is tuple equality.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .lattice import LatticeBasis, basis_of, snf


class GroupMismatch(ValueError):
    pass


class InfiniteGroupError(ValueError):
    pass


def _reduce(coords: Sequence[int], moduli: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(x) % m if m else int(x) for x, m in zip(coords, moduli))


@dataclass(frozen=True)
class AbelianGroup:
    moduli: tuple[int, ...]
    canonical: bool = False

    def __post_init__(self):
        mods = tuple(int(m) for m in self.moduli)
        if any(m < 0 for m in mods):
            raise ValueError(f"negative modulus in {mods}")
        object.__setattr__(self, "moduli", mods)
        if self.canonical and not _is_invariant_form(mods):
            raise ValueError(f"{mods} is not in invariant-factor form")

    @classmethod
    def of(cls, moduli: Iterable[int]) -> "AbelianGroup":
        """The group given by ``moduli``, rewritten in invariant-factor form."""
        return cls(tuple(moduli)).canonicalize()

    def canonicalize(self) -> "AbelianGroup":
        if self.canonical:
            return self
        if _is_invariant_form(self.moduli):
            return AbelianGroup(self.moduli, canonical=True)
        k = len(self.moduli)
        rows = [[m if i == j else 0 for j in range(k)] for i, m in enumerate(self.moduli)]
        return quotient_group(k, rows)[0]

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def is_finite(self) -> bool:
        return 0 not in self.moduli

    def order(self) -> float | int:
        return math.prod(self.moduli) if self.is_finite else math.inf

    def element(self, coords: Sequence[int]) -> "GroupElement":
        if len(coords) != len(self.moduli):
            raise ValueError(f"expected {len(self.moduli)} coordinates, got {len(coords)}")
        return GroupElement(self, _reduce(coords, self.moduli))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * len(self.moduli))

    def to_json(self) -> str:
        return json.dumps(list(self.moduli))

    @classmethod
    def from_json(cls, text: str | list) -> "AbelianGroup":
        data = json.loads(text) if isinstance(text, str) else text
        return cls.of(data)

    def __str__(self) -> str:
        if not self.moduli:
            return "0"
        return " x ".join("Z" if m == 0 else f"Z_{m}" for m in self.moduli)


def _is_invariant_form(mods: Sequence[int]) -> bool:
    nfin = next((i for i, m in enumerate(mods) if m == 0), len(mods))
    finite, rest = mods[:nfin], mods[nfin:]
    if any(rest) or 1 in finite:
        return False
    return all(b % a == 0 for a, b in zip(finite, finite[1:]))


@dataclass(frozen=True)
class GroupElement:
    group: AbelianGroup
    coords: tuple[int, ...]

    def _check(self, other: "GroupElement"):
        if self.group != other.group:
            raise GroupMismatch(f"{self.group} vs {other.group}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(
            self.group,
            _reduce([a + b for a, b in zip(self.coords, other.coords)], self.group.moduli),
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, _reduce([-a for a in self.coords], self.group.moduli))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, z: int) -> "GroupElement":
        return GroupElement(self.group, _reduce([z * a for a in self.coords], self.group.moduli))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> list[int]:
        return list(self.coords)

    def __repr__(self) -> str:
        return f"GroupElement({list(self.coords)})"


def add(a: GroupElement, b: GroupElement) -> GroupElement:
    return a + b


def dot_action(f: Sequence[int], elems: Sequence[GroupElement]) -> GroupElement:
    """Z-module action: ``sum(f[i] * elems[i])``."""
    if len(f) != len(elems):
        raise ValueError(f"coefficient vector has length {len(f)}, got {len(elems)} elements")
    if not elems:
        raise ValueError("empty action has no group")
    g = elems[0].group
    acc = [0] * g.rank
    for z, e in zip(f, elems):
        if e.group != g:
            raise GroupMismatch(f"{e.group} vs {g}")
        if z:
            for i, c in enumerate(e.coords):
                acc[i] += z * c
    return g.element(acc)


@dataclass(frozen=True)
class QuotientMap:
    """The projection ``Z^k -> Z^k / L`` onto an invariant-factor group.

    ``pi(x)`` is ``x @ V`` restricted to ``columns`` and reduced by the
    target moduli, where ``V`` is the column transform of the Smith form of
    the relation matrix.
    """

    k: int
    group: AbelianGroup
    V: tuple[tuple[int, ...], ...]
    columns: tuple[int, ...]

    def __call__(self, x: Sequence[int]) -> GroupElement:
        if len(x) != self.k:
            raise ValueError(f"expected a vector of length {self.k}")
        coords = [sum(xi * self.V[i][j] for i, xi in enumerate(x) if xi) for j in self.columns]
        return self.group.element(coords)

    def images_of_basis(self) -> list[GroupElement]:
        return [self(tuple(int(i == j) for j in range(self.k))) for i in range(self.k)]


def quotient_group(
    k: int, F: LatticeBasis | Iterable[Sequence[int]]
) -> tuple[AbelianGroup, QuotientMap]:
    """``Z^k / Span(F)`` in invariant-factor form, with its quotient map."""
    rows = [list(r) for r in basis_of(F, k).rows]
    D, _, V = snf(rows, k)
    r = len(rows)
    diag = [D[i][i] for i in range(min(r, k))]
    columns, moduli = [], []
    for j in range(k):
        d = diag[j] if j < len(diag) else 0
        if d == 1:
            continue
        columns.append(j)
        moduli.append(d)
    # SNF puts nonzero invariants first; free factors (d = 0) come last already
    group = AbelianGroup(tuple(moduli), canonical=True)
    return group, QuotientMap(k, group, tuple(tuple(row) for row in V), tuple(columns))


def enumerate_elements(g: AbelianGroup) -> Iterator[GroupElement]:
    if not g.is_finite:
        raise InfiniteGroupError("infinite group")
    for coords in itertools.product(*(range(m) for m in g.moduli)):
        yield GroupElement(g, coords)


# Integer codes for finite groups (mixed radix, first coordinate fastest);
# the annealing and placement kernels work on these.


def strides(g: AbelianGroup) -> tuple[int, ...]:
    out, acc = [], 1
    for m in g.moduli:
        out.append(acc)
        acc *= m
    return tuple(out)


def encode(e: GroupElement) -> int:
    return sum(c * s for c, s in zip(e.coords, strides(e.group)))


def decode(g: AbelianGroup, code: int) -> GroupElement:
    coords = []
    for m in g.moduli:
        code, c = divmod(code, m)
        coords.append(c)
    return GroupElement(g, tuple(coords))
