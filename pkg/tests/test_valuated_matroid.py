import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mactrop.macaulay_ideal import macaulay_degree
from mactrop.polynomial import parse
from mactrop.semiring import BOOL, TROP
from mactrop.stiefel import members, to_mask
from mactrop.valuated_matroid import (
    ValuatedMatroid,
    check_plucker,
    circuits,
    cocircuits,
    covector_support,
    elimination_axiom_holds,
    equal,
    membership,
    normalize_covector,
    orthogonal,
    perp,
    rank_one,
    stable_sum,
    underlying,
    unit_matroid,
)

Z = Fraction(0)
a, b = Fraction(1), Fraction(1, 2)


def example():
    return macaulay_degree(parse("1*x0 + 1/2*x1", TROP), 2)


def naive_plucker(coords, E, r):
    """Three-term Plücker relations straight from the definition, over all (A, B) pairs."""
    for A in itertools.combinations(range(E), r + 1):
        for B in itertools.combinations(range(E), r - 1):
            terms = []
            for i in set(A) - set(B):
                x = coords.get(to_mask(set(A) - {i}))
                y = coords.get(to_mask(set(B) | {i}))
                if x is not None and y is not None:
                    terms.append(x + y)
            if terms and terms.count(max(terms)) == 1:
                return False
    return True


def test_plucker_examples():
    assert check_plucker(example()).ok
    p = ValuatedMatroid(range(4), 2, BOOL, {0b0011: Z, 0b1100: Z})
    res = check_plucker(p)
    assert not res.ok and res.violation is not None
    assert check_plucker(rank_one(range(5), {0: Z, 3: Fraction(2)}, TROP)).ok


@given(st.integers(3, 6), st.data())
def test_plucker_matches_naive(E, data):
    r = data.draw(st.integers(1, E - 1))
    subsets = [to_mask(c) for c in itertools.combinations(range(E), r)]
    chosen = data.draw(st.lists(st.sampled_from(subsets), min_size=1, unique=True))
    vals = data.draw(st.lists(st.integers(-3, 3), min_size=len(chosen), max_size=len(chosen)))
    coords = {B: Fraction(v) for B, v in zip(chosen, vals)}
    assert check_plucker(coords, E, r).ok == naive_plucker(coords, E, r)


def test_cocircuits_example():
    shown = {
        normalize_covector((None, 2 * a, a + b)),
        normalize_covector((2 * a, None, 2 * b)),
        normalize_covector((a + b, 2 * b, None)),
    }
    assert set(cocircuits(example())) == shown


def test_cocircuits_rank_one_and_linear():
    p = rank_one(range(3), {0: Fraction(1), 2: Fraction(3)}, TROP)
    assert cocircuits(p) == [normalize_covector((Fraction(1), None, Fraction(3)))]
    q = macaulay_degree(parse("x0 + x1 + x2"), 1)
    assert cocircuits(q) == [(Z, Z, Z)]


def test_circuits_examples():
    p = example()
    cs = circuits(p)
    assert cs == [normalize_covector((2 * b, a + b, 2 * a))]
    u32 = ValuatedMatroid(range(3), 2, BOOL, {0b011: Z, 0b101: Z, 0b110: Z})
    assert circuits(u32) == [(Z, Z, Z)]
    free = ValuatedMatroid(range(3), 3, BOOL, {0b111: Z})
    assert circuits(free) == []


def test_perp_examples():
    D = perp([(Z, Z, None)], 3, BOOL)
    assert D.contains((Z, Z, None)) and D.contains((None, None, Z))
    assert not D.contains((Z, None, None))
    assert D.generators() == [(Z, Z, None), (None, None, Z)]
    assert perp([], 3).contains((Z, None, None))
    p = example()
    K = perp(cocircuits(p), 3, TROP)
    assert all(K.contains(c) for c in circuits(p))


def test_membership_examples():
    p = example()
    for c in cocircuits(p):
        assert membership(p, c)
    assert membership(p, (2 * a, None, 2 * b))
    assert not membership(p, (Z, None, None))


def bool_span(vectors):
    span = {0}
    for v in vectors:
        span |= {S | covector_support(v) for S in span}
    return span


@pytest.mark.parametrize("text,d", [("x0 + x1 + x2", 2), ("x0 + x1 + x2", 3), ("x0^2 + x1*x2", 3), ("x0^2 + x0*x1 + x2^2", 3)])
def test_membership_against_brute_span(text, d):
    p = macaulay_degree(parse(text), d)
    assert p.size <= 12
    span = bool_span(cocircuits(p))
    for S in range(1 << p.size):
        v = tuple(Z if (S >> i) & 1 else None for i in range(p.size))
        assert membership(p, v) == (S in span), members(S)


def test_stable_sum_examples():
    l1 = rank_one(range(3), {0: Z, 1: Z}, BOOL)
    l2 = rank_one(range(3), {1: Z, 2: Z}, BOOL)
    s = stable_sum(l1, l2)
    assert s.coordinates() == {0b011: Z, 0b101: Z, 0b110: Z}
    E = example().ground
    r1 = rank_one(E, {0: a, 1: b}, TROP)
    r2 = rank_one(E, {1: a, 2: b}, TROP)
    assert equal(stable_sum(r1, r2), example())
    assert equal(stable_sum(example(), unit_matroid(E, TROP)), example())
    with pytest.raises(ValueError, match="degenerate"):
        stable_sum(rank_one(range(3), {0: Z}, BOOL), rank_one(range(3), {0: Z}, BOOL))


rank_ones = st.dictionaries(st.integers(0, 4), st.integers(-4, 4).map(Fraction), min_size=1)


@given(rank_ones, rank_ones, rank_ones)
def test_stable_sum_laws(w1, w2, w3):
    p, q, r = (rank_one(range(5), w, TROP) for w in (w1, w2, w3))
    try:
        pq = stable_sum(p, q)
    except ValueError:
        return
    assert equal(pq, stable_sum(q, p))
    assert check_plucker(pq).ok
    assert equal(underlying(pq), stable_sum(underlying(p), underlying(q)))
    try:
        left = stable_sum(pq, r)
    except ValueError:
        return
    assert equal(left, stable_sum(p, stable_sum(q, r)))


def test_underlying_and_equal():
    p = example()
    u = underlying(p)
    assert u.semifield is BOOL and set(u.coordinates()) == {0b011, 0b101, 0b110}
    assert equal(p, ValuatedMatroid(p.ground, 2, TROP, {k: v + 5 for k, v in p.coordinates().items()}))
    assert not equal(p, ValuatedMatroid(p.ground, 2, TROP, {0b011: 2 * a, 0b101: a + b, 0b110: a + b}))
    assert not equal(u, ValuatedMatroid(p.ground, 1, BOOL, {1: Z}))
    zero_coord = ValuatedMatroid(range(3), 1, TROP, {0b001: Z})
    assert set(underlying(zero_coord).coordinates()) == {0b001}


def test_json_round_trip():
    p = example()
    q = ValuatedMatroid.from_json(p.to_json())
    assert equal(p, q)
    assert p.to_json()["normalized"] is True


def test_elimination_examples():
    p = macaulay_degree(parse("x0 + x1 + x2"), 2)
    assert elimination_axiom_holds(cocircuits(p), BOOL).holds
    rows = [(a, b, None), (None, a, b)]  # x0 f and x1 f with f = a x0 + b x1
    res = elimination_axiom_holds(rows, TROP)
    assert res.holds is False
    v, w, j = res.witness
    assert j == 1  # the x0*x1 term
    full = elimination_axiom_holds(cocircuits(example()), TROP)
    assert full.holds is None  # bounded search over T never claims success


@pytest.mark.parametrize("text,d", [("x0 + x1 + x2", 3), ("x0^2 + x1*x2", 4), ("1*x0 + -2*x1 + 1/3*x2", 2)])
def test_circuits_orthogonal_to_cocircuits(text, d):
    sf = TROP if "/" in text or "-" in text else BOOL
    p = macaulay_degree(parse(text, sf), d)
    for x in circuits(p):
        for y in cocircuits(p):
            assert orthogonal(x, y)


def test_random_tropical_membership_of_cocircuit_sums():
    p = macaulay_degree(parse("1*x0 + -1*x1 + 2*x2", TROP), 2)
    ks = cocircuits(p)
    rng = random.Random(5)
    for _ in range(50):
        v = tuple([None] * p.size)
        for k in rng.sample(ks, 3):
            s = Fraction(rng.randint(-5, 5))
            v = tuple(x if y is None else (y + s if x is None else max(x, y + s)) for x, y in zip(v, k))
        assert membership(p, v)
