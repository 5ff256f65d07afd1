import itertools
from fractions import Fraction

import pytest

from affshuffle import classic
from affshuffle.classic import (
    ColorSymFunc,
    classic_A,
    classic_B,
    classic_product,
    classic_wheel_check,
    monomial,
    pole_denominator,
    pole_shape_ok,
)
from affshuffle.ring import ONE

N = 2
CORPUS = [
    (maker, i, length, k)
    for maker in (classic_A, classic_B)
    for i in (1, 2)
    for length in (1, 2, 3)
    for k in (1, 2, 3)
]


def build(maker, i, length, k):
    return maker(N, Fraction(length, k), i, i + length)


@pytest.mark.parametrize("maker, i, length, k", CORPUS)
def test_pbw_elements_satisfy_wheel_conditions(maker, i, length, k):
    X = build(maker, i, length, k)
    assert X.expr
    assert X.is_symmetric()
    assert pole_shape_ok(X)
    assert classic_wheel_check(X)


@pytest.mark.parametrize("maker, i, length, k", CORPUS)
def test_color_and_total_degree(maker, i, length, k):
    X = build(maker, i, length, k)
    d = [0, 0]
    for a in range(i, i + length):
        d[(a - 1) % N] += 1
    assert X.degree() == (tuple(d), k)


def test_non_integral_slope_gives_zero():
    assert not classic_A(N, Fraction(2), 1, 2).expr
    assert not classic_B(N, Fraction(3, 2), 1, 3).expr


SMALL = [classic_A(N, Fraction(1, k), i, i + 1) for i in (1, 2) for k in (1, 2)] + [
    classic_B(N, 1, 1, 2),
    monomial(N, 1, -1),
]


@pytest.mark.parametrize("a, b, c", list(itertools.product(range(len(SMALL)), repeat=3))[::7])
def test_product_is_associative(a, b, c):
    A, B, C = SMALL[a], SMALL[b], SMALL[c]
    left = classic_product(classic_product(A, B), C)
    assert left == classic_product(A, classic_product(B, C))
    assert classic_wheel_check(left)


@pytest.mark.parametrize("X", SMALL)
def test_unit(X):
    one = ColorSymFunc.one(N)
    assert classic_product(X, one) == X
    assert classic_product(one, X) == X


@pytest.mark.parametrize("i", [1, 2])
def test_products_of_larger_elements_stay_in_the_algebra(i):
    A = classic_B(N, 1, i, i + 2)
    for B in SMALL[:4]:
        for P in (classic_product(A, B), classic_product(B, A)):
            assert P.is_symmetric()
            assert classic_wheel_check(P)


def test_bare_pole_product_fails_the_wheel_condition():
    X = ColorSymFunc(N, (2, 1), 1 / pole_denominator(ColorSymFunc(N, (2, 1), ONE)))
    assert pole_shape_ok(X)
    assert not classic_wheel_check(X)


def test_mismatched_degrees_cannot_be_added():
    with pytest.raises(ValueError):
        monomial(N, 1, 0) + monomial(N, 2, 0)


@pytest.mark.parametrize(
    "relabel, shift, passing",
    [
        ("absolute", "fractional", 36),
        ("occurrence", "fractional", 24),
        ("absolute", "literal", 18),
        ("occurrence", "literal", 15),
    ],
)
def test_alternative_color_conventions(monkeypatch, relabel, shift, passing):
    monkeypatch.setitem(classic.RELABEL, "mode", relabel)
    monkeypatch.setitem(classic.SHIFT, "mode", shift)
    assert sum(classic_wheel_check(build(*spec)) for spec in CORPUS) == passing


def test_literal_shift_breaks_pole_shape_of_products(monkeypatch):
    assert pole_shape_ok(classic_product(monomial(N, 2, 0), monomial(N, 1, 0)))
    monkeypatch.setitem(classic.SHIFT, "mode", "literal")
    assert not pole_shape_ok(classic_product(monomial(N, 2, 0), monomial(N, 1, 0)))
