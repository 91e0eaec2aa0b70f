"""Integer polynomial helpers.

Polynomials are tuples of int coefficients in ascending degree order.
Real-root questions are answered exactly (Sturm sequences via sympy on
rational arithmetic); no floating point enters any verdict.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

_x = sympy.symbols("x")


def normalize(coeffs) -> tuple[int, ...]:
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(int(a) for a in c)


def degree(f) -> int:
    f = normalize(f)
    return len(f) - 1


def evaluate(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def derivative(f) -> tuple[int, ...]:
    if len(f) <= 1:
        return (0,)
    return tuple(i * c for i, c in enumerate(f) if i >= 1)


def reverse(f) -> tuple[int, ...]:
    """x^deg * f(1/x)."""
    return normalize(tuple(reversed(normalize(f))))


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_rat(x, p: int) -> int:
    x = Fraction(x)
    return vp(x.numerator, p) - vp(x.denominator, p)


def to_sympy(f):
    return sympy.Poly(list(reversed(normalize(f))), _x)


def discriminant(f) -> int:
    return int(to_sympy(f).discriminant())


def is_squarefree(f) -> bool:
    g = to_sympy(f)
    return sympy.gcd(g, g.diff(_x)).degree() == 0


def real_root_count(f) -> int:
    return int(to_sympy(f).count_roots())


def real_root_intervals(f) -> list[tuple[Fraction, Fraction]]:
    """Exact isolating intervals for the real roots."""
    out = []
    for iv in to_sympy(f).intervals():
        (a, b), _ = iv
        out.append((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))))
    return out


def attains_nonnegative(f) -> tuple[bool, Fraction | None]:
    """Whether f(x) >= 0 for some real x, with a rational witness when >0.

    When f is everywhere negative returns (False, None).  When f only touches
    zero at an irrational root the witness is None but the verdict is True.
    """
    f = normalize(f)
    if degree(f) % 2 == 1 or f[-1] > 0:
        # unbounded above: walk out in the direction driven by the leading term
        sign = 1 if f[-1] > 0 else -1
        w = Fraction(sign)
        while evaluate(f, w) < 0:
            w *= 2
        return True, w
    if evaluate(f, 0) >= 0:
        return True, Fraction(0)
    n = real_root_count(f)
    if n == 0:
        return False, None
    # negative leading coefficient with real roots: f >= 0 on the closed
    # region between the outermost roots; scan midpoints of consecutive
    # isolating intervals for a strict witness.
    ivs = real_root_intervals(f)
    candidates = []
    for (a1, b1), (a2, b2) in zip(ivs, ivs[1:]):
        candidates.append((b1 + a2) / 2)
    for a, b in ivs:
        candidates.append(a)
        candidates.append(b)
        candidates.append((a + b) / 2)
    for w in candidates:
        if evaluate(f, w) >= 0:
            return True, w
    # roots exist, so the maximum of f is >= 0 even if no rational witness
    # was sampled (double root touching zero from below)
    return True, None
