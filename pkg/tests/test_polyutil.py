from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from shadiv import polyutil as pu

X = sympy.Symbol("x")

coeffs_strategy = st.lists(
    st.integers(min_value=-30, max_value=30), min_size=1, max_size=6
).filter(lambda c: any(c))


@given(coeffs_strategy, st.integers(min_value=-5, max_value=5))
@settings(max_examples=80, deadline=None)
def test_evaluate_matches_sympy(coeffs, x0):
    f = pu.normalize(tuple(coeffs))
    expr = sum(c * X**i for i, c in enumerate(f))
    assert pu.evaluate(f, x0) == int(sympy.expand(expr).subs(X, x0))


@given(coeffs_strategy)
@settings(max_examples=50, deadline=None)
def test_derivative_matches_sympy(coeffs):
    f = pu.normalize(tuple(coeffs))
    if pu.degree(f) < 1:
        return
    expr = sum(c * X**i for i, c in enumerate(f))
    d = pu.derivative(f)
    dexpr = sum(c * X**i for i, c in enumerate(d))
    assert sympy.expand(dexpr - sympy.diff(expr, X)) == 0


def test_discriminant_matches_sympy():
    for f in [(1, 0, 1), (-31, -26, 159, 34, -11), (0, 16400, 285, 1)]:
        expr = sum(c * X**i for i, c in enumerate(f))
        assert pu.discriminant(f) == sympy.discriminant(sympy.Poly(expr, X))


def test_vp():
    assert pu.vp(48, 2) == 4
    assert pu.vp(-45, 3) == 2
    assert pu.vp(7, 5) == 0
    assert pu.vp_rat(Fraction(1, 8), 2) == -3


def test_real_root_count():
    assert pu.real_root_count((1, 0, 1)) == 0  # x^2 + 1
    assert pu.real_root_count((-2, 0, 1)) == 2
    assert pu.real_root_count((0, -25, 0, 1)) == 3  # x^3 - 25x


def test_attains_nonnegative():
    ok, w = pu.attains_nonnegative((-1, 0, 0, 0, -1))  # -x^4 - 1 < 0
    assert not ok
    ok, w = pu.attains_nonnegative((1, 0, 0, 0, 1))
    assert ok and pu.evaluate((1, 0, 0, 0, 1), w) >= 0
    # negative leading coefficient but positive somewhere between roots
    g = (-31, -26, 159, 34, -11)
    ok, w = pu.attains_nonnegative(g)
    assert ok
    assert pu.evaluate(g, w) >= 0
    # odd degree always attains nonnegative values
    ok, _ = pu.attains_nonnegative((5, 0, 0, -1))
    assert ok


def test_is_squarefree():
    assert pu.is_squarefree((0, -25, 0, 1))
    assert not pu.is_squarefree((1, 2, 1))
