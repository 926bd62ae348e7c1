from math import comb

import pytest
from hypothesis import given, strategies as st

from mactrop.monomials import (
    SimplexTranslate,
    enumerate_monomials,
    format_monomial,
    index_of,
    monomial_at,
    parse_monomial,
    simplex_size,
    translate_members,
    translates,
)


def test_small_enumerations():
    assert enumerate_monomials(1, 3) == ((3, 0), (2, 1), (1, 2), (0, 3))
    assert len(enumerate_monomials(2, 3)) == 10
    assert len(enumerate_monomials(2, 6)) == 28
    assert enumerate_monomials(2, 0) == ((0, 0, 0),)


@pytest.mark.parametrize("n", range(4))
@pytest.mark.parametrize("d", range(9))
def test_counts_and_order(n, d):
    ms = enumerate_monomials(n, d)
    assert len(ms) == comb(n + d, d) == simplex_size(n, d)
    assert all(sum(m) == d and len(m) == n + 1 for m in ms)
    assert all(a > b for a, b in zip(ms, ms[1:]))  # strictly decreasing lex


def test_index_endpoints():
    assert index_of((3, 0, 0)) == 0
    assert index_of((0, 0, 3)) == 9


def test_round_trip_degree4():
    for i, m in enumerate(enumerate_monomials(2, 4)):
        assert index_of(m) == i
        assert monomial_at(2, 4, index_of(m)) == m


def test_out_of_range():
    with pytest.raises(IndexError):
        monomial_at(2, 3, 10)
    with pytest.raises(IndexError):
        monomial_at(2, 3, -1)


def test_translate_examples():
    d = 5
    t = SimplexTranslate((0, 0, d - 2), 2)
    got = set(translate_members(t, d))
    want = {(0, 0, d), (1, 0, d - 1), (2, 0, d - 2), (0, 1, d - 1), (0, 2, d - 2), (1, 1, d - 2)}
    assert got == want
    assert set(translate_members(SimplexTranslate((0, 0, 0), 4), 4)) == set(enumerate_monomials(2, 4))
    x3 = set(translate_members(SimplexTranslate((3, 0, 0), 3), 6))
    assert len(x3) == 10 and all(m[0] >= 3 for m in x3)


def test_translate_degree_mismatch():
    with pytest.raises(ValueError):
        translate_members(SimplexTranslate((1, 0, 0), 2), 4)


@given(st.integers(0, 3), st.integers(0, 6), st.data())
def test_translates_biject_with_gcds(n, d, data):
    ell = data.draw(st.integers(0, d))
    ts = translates(n, ell, d)
    assert len(ts) == simplex_size(n, d - ell)
    sets = {frozenset(translate_members(t, d)) for t in ts}
    assert len(sets) == len(ts)
    assert all(len(s) == simplex_size(n, ell) for s in sets)


@given(st.integers(0, 3), st.integers(0, 5), st.data())
def test_text_round_trip(n, d, data):
    m = data.draw(st.sampled_from(enumerate_monomials(n, d)))
    assert parse_monomial(format_monomial(m), n) == m


def test_format():
    assert format_monomial((2, 1, 0)) == "x0^2*x1"
    assert format_monomial((0, 0)) == "1"
