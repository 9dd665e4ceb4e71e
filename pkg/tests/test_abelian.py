import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors

from graphsums.abelian import (
    AbelianGroup,
    GroupMismatch,
    InfiniteGroupError,
    add,
    decode,
    dot_action,
    encode,
    enumerate_elements,
    quotient_group,
)
from graphsums.lattice import enumerate_l1_ball, l1_ball_size


def test_add_examples():
    Z6 = AbelianGroup((6,))
    assert add(Z6.element([4]), Z6.element([5])) == Z6.element([3])
    G = AbelianGroup((2, 0))
    assert add(G.element([1, 7]), G.element([1, -2])).coords == (0, 5)
    a = G.element([1, 3])
    assert a + G.zero() == a
    with pytest.raises(GroupMismatch):
        add(Z6.element([1]), AbelianGroup((7,)).element([1]))


def test_dot_action_examples():
    Z = AbelianGroup((0,))
    elems = [Z.element([x]) for x in (1, 2, 3)]
    assert dot_action((1, 1, -1), elems).is_zero()
    assert dot_action((0, 1, 0), elems) == elems[1]
    Z4 = AbelianGroup((4,))
    assert dot_action((2, 0), [Z4.element([1]), Z4.element([1])]).coords == (2,)
    with pytest.raises(ValueError):
        dot_action((1,), elems)


def test_quotient_examples():
    assert quotient_group(2, [(2, 0), (0, 3)])[0].moduli == (6,)
    assert quotient_group(2, [(1, 1)])[0].moduli == (0,)
    assert quotient_group(3, [])[0].moduli == (0, 0, 0)
    assert quotient_group(2, [(1, 0), (0, 1)])[0].moduli == ()


def test_enumerate_examples():
    assert len(list(enumerate_elements(AbelianGroup((2, 2))))) == 4
    assert len(set(enumerate_elements(AbelianGroup((6,))))) == 6
    with pytest.raises(InfiniteGroupError):
        list(enumerate_elements(AbelianGroup((0,))))


def test_canonical_form_and_json():
    g = AbelianGroup.of([6, 0, 2])
    assert g.moduli == (2, 6, 0) and g.canonical
    assert AbelianGroup.from_json("[0,2,6]") == g
    assert AbelianGroup.of([2, 3]).moduli == (6,)
    assert AbelianGroup.of([4, 6]).moduli == (2, 12)
    assert AbelianGroup.of([1, 1]).moduli == ()
    assert AbelianGroup.of([]).order() == 1
    assert AbelianGroup.of([0]).order() == math.inf
    with pytest.raises(ValueError):
        AbelianGroup((3, 2), canonical=True)
    with pytest.raises(ValueError):
        AbelianGroup((-1,))


def random_group(rng, max_order=36):
    while True:
        mods = tuple(rng.randint(1, 12) for _ in range(rng.randint(1, 3)))
        if math.prod(mods) <= max_order:
            return AbelianGroup(mods)


def test_group_axioms():
    rng = random.Random(7)
    for _ in range(60):
        g = random_group(rng)
        elems = list(enumerate_elements(g))
        if len(elems) <= 12:
            triples = itertools.product(elems, repeat=3)
        else:
            triples = (tuple(rng.choice(elems) for _ in range(3)) for _ in range(300))
        for a, b, c in triples:
            assert (a + b) + c == a + (b + c)
            assert a + b == b + a
        for a in elems if len(elems) <= 12 else rng.sample(elems, 12):
            assert (a + (-a)).is_zero()
            assert decode(g, encode(a)) == a


def test_canonicalization_idempotent_and_isomorphic():
    rng = random.Random(8)
    for _ in range(100):
        mods = [rng.choice([0, 1, 2, 3, 4, 6, 8, 9, 12]) for _ in range(rng.randint(0, 4))]
        g = AbelianGroup.of(mods)
        assert g.canonicalize() == g and AbelianGroup.of(g.moduli) == g
        finite = [m for m in mods if m]
        expected = sorted(int(x) for x in invariant_factors(Matrix.diag(*finite)) if x != 1) if finite else []
        assert list(g.moduli) == expected + [0] * mods.count(0)


def quotient_cases(count=150, seed=9):
    rng = random.Random(seed)
    for _ in range(count):
        k = rng.randint(1, 4)
        F = [[rng.randint(-5, 5) for _ in range(k)] for _ in range(rng.randint(0, 4))]
        yield k, F


def test_quotient_map_kills_relations_and_is_homomorphism():
    rng = random.Random(10)
    for k, F in quotient_cases():
        g, pi = quotient_group(k, F)
        for f in F:
            assert pi(f).is_zero()
        for _ in range(20):
            x = [rng.randint(-9, 9) for _ in range(k)]
            y = [rng.randint(-9, 9) for _ in range(k)]
            assert pi([a + b for a, b in zip(x, y)]) == pi(x) + pi(y)
        # agrees with an independent Smith form
        if F:
            inv = [int(x) for x in invariant_factors(Matrix(F))]
            free = k - Matrix(F).rank()
            expected = [d for d in inv if d not in (0, 1)] + [0] * free
        else:
            expected = [0] * k
        assert list(g.moduli) == expected


def test_quotient_map_surjective_on_finite():
    for k, F in quotient_cases(60, 11):
        g, pi = quotient_group(k, F)
        if not g.is_finite:
            continue
        B = 0
        hit = set()
        while len(hit) < g.order() and B < 30:
            hit |= {pi(v) for v in enumerate_l1_ball(k, B)}
            B += 1
        assert len(hit) == g.order()


def test_image_of_l1_ball_bounded():
    """|pi(ball)| <= min(order, ball size), exhaustively for k <= 3, B <= 4."""
    for k in range(1, 4):
        for F in ([], [[2] + [0] * (k - 1)], [[1] * k], [[3] * k, [1] + [0] * (k - 1)]):
            g, pi = quotient_group(k, F)
            for B in range(5):
                img = {pi(v) for v in enumerate_l1_ball(k, B)}
                assert len(img) <= min(g.order(), l1_ball_size(k, B))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 12), max_size=4), st.data())
def test_element_arithmetic_property(mods, data):
    g = AbelianGroup(tuple(mods))
    coord = st.lists(st.integers(-50, 50), min_size=len(mods), max_size=len(mods))
    a, b = g.element(data.draw(coord)), g.element(data.draw(coord))
    z = data.draw(st.integers(-5, 5))
    assert a - b + b == a
    assert z * (a + b) == z * a + z * b
    assert all(0 <= c < m for c, m in zip(a.coords, mods) if m)
