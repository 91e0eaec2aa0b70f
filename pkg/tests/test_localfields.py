from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from shadiv.errors import ZeroInput
from shadiv.localfields import (
    Place,
    SquareClass,
    all_square_classes,
    hensel_roots,
    square_class,
    same_class,
)

REAL = Place.real()
V2 = Place.finite(2)
V3 = Place.finite(3)
V5 = Place.finite(5)


def test_square_class_normal_forms():
    assert square_class(1, V5).is_trivial
    assert square_class(4, V5).is_trivial
    assert not square_class(2, V5).is_trivial  # 2 is a non-residue mod 5
    c = square_class(50, V5)  # 2 * 5^2 -> class of 2
    assert c.val_parity == 0 and c.tag == -1
    c2 = square_class(40, V2)  # 8 * 5
    assert c2.val_parity == 1 and c2.tag == 5
    assert square_class(-3, REAL).tag == -1


def test_square_class_counts():
    assert len(all_square_classes(REAL)) == 2
    assert len(all_square_classes(V2)) == 8
    assert len(all_square_classes(V3)) == 4


def test_zero_rejected():
    with pytest.raises(ZeroInput):
        square_class(0, V3)


def test_representative_roundtrip():
    for v in (REAL, V2, V3, V5):
        for c in all_square_classes(v):
            assert square_class(c.representative, v) == c


nonzero_rationals = st.fractions(
    min_value=-200, max_value=200
).filter(lambda q: q != 0)


@given(nonzero_rationals, nonzero_rationals)
@settings(max_examples=100, deadline=None)
def test_square_class_multiplicative(x, y):
    for v in (REAL, V2, V3, V5):
        assert square_class(x, v) * square_class(y, v) == square_class(x * y, v)


@given(nonzero_rationals)
@settings(max_examples=60, deadline=None)
def test_squares_are_trivial(x):
    for v in (REAL, V2, V3, V5):
        assert square_class(x * x, v).is_trivial


def test_same_class():
    assert same_class(41, 1, V2)  # 41 = 1 mod 8
    assert same_class(-5, 1, V3)
    assert not same_class(5, 1, V3)
    assert same_class(Fraction(1, 5), 5, V5)


def test_int_and_fraction_paths_agree():
    for v in (V2, V3, V5):
        for n in (-50, -7, -1, 1, 2, 3, 8, 40, 41, 90):
            assert square_class(n, v) == square_class(Fraction(n), v)


def test_hensel_roots_certified():
    # x^2 - 17 over Q_2: roots are +-sqrt(17), sqrt(17) = 9 mod 16
    res = hensel_roots((-17, 0, 1), 2, 4)
    assert set(res.certified) == {7, 9}  # -sqrt(17), sqrt(17) mod 16
    assert set(res.undecided) == {1, 15}  # v(f) = k exactly: not yet refutable
    # escalating the precision resolves the undecided classes
    res5 = hensel_roots((-17, 0, 1), 2, 5)
    assert {x % 16 for x in res5.certified} == {7, 9}
    assert not any(x % 16 in (1, 15) for x in res5.certified + res5.undecided)


def test_hensel_roots_refuted():
    res = hensel_roots((-5, 0, 1), 2, 6)  # 5 is not a square in Q_2
    assert not res.certified and not res.undecided


def test_hensel_roots_undecided_when_uncertifiable():
    # x^2 - 64 at x0 = 0 mod 16: f(0) = -64 vanishes to depth 6 >= 4 but
    # f'(0) = 0, so the class can be neither certified nor refuted here.
    res = hensel_roots((-64, 0, 1), 2, 4)
    assert 0 in res.undecided
    assert 8 in res.certified  # the exact root


def test_hensel_odd_prime():
    res = hensel_roots((-19, 0, 0, 1), 3, 4)  # x^3 = 19 over Q_3
    assert res.certified
    x0 = res.certified[0]
    assert (x0**3 - 19) % 3 ** res.precision == 0
