"""Analytic data for elliptic curves: minimal models, conductors, L(E, 1).

All curves enter as long Weierstrass a-invariants (a1, a2, a3, a4, a6).
The minimal model is computed from the (c4, c6) invariants, after which
traces of Frobenius and the truncated L-series at s = 1 follow by point
counts over prime fields and the Hecke recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .arith import factorize, is_prime
from .errors import ConductorUnavailable


@dataclass(frozen=True)
class WeierstrassModel:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def c_invariants(self) -> tuple[int, int]:
        b2, b4, b6, _ = self.b_invariants
        return b2 * b2 - 24 * b4, -b2 ** 3 + 36 * b2 * b4 - 216 * b6

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def model_from_cubic(e1: int, e2: int, e3: int) -> WeierstrassModel:
    """Model for y^2 = (x - e1)(x - e2)(x - e3)."""
    s1 = e1 + e2 + e3
    s2 = e1 * e2 + e1 * e3 + e2 * e3
    s3 = e1 * e2 * e3
    return WeierstrassModel(0, -s1, 0, s2, -s3)


def _c_invariants_valid(c4: int, c6: int) -> bool:
    """Kraus's criterion: (c4, c6) arise from an integral model over Z."""
    # At 3: need v3(c6) != 2.
    if c6 % 9 == 0 and c6 % 27 != 0:
        return False
    # At 2: either c6 = -1 mod 4, or c4 = 0 mod 16 and c6 = 0 or 8 mod 32.
    if c6 % 4 == 3:
        return True
    return c4 % 16 == 0 and c6 % 32 in (0, 8)


def _model_from_c(c4: int, c6: int) -> WeierstrassModel:
    """Reconstruct an integral model with the given c-invariants."""
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    num4 = b2 * b2 - c4
    assert num4 % 24 == 0
    b4 = num4 // 24
    num6 = -b2 ** 3 + 36 * b2 * b4 - c6
    assert num6 % 216 == 0
    b6 = num6 // 216
    a1 = b2 % 2
    a3 = b6 % 2
    a2 = (b2 - a1) // 4
    assert (b4 - a1 * a3) % 2 == 0
    a4 = (b4 - a1 * a3) // 2
    assert (b6 - a3 * a3) % 4 == 0
    a6 = (b6 - a3 * a3) // 4
    model = WeierstrassModel(a1, a2, a3, a4, a6)
    assert model.c_invariants == (c4, c6)
    return model


def minimal_model(model: WeierstrassModel) -> WeierstrassModel:
    """Global minimal model over Q (Kraus-Connell method).

    At each prime p the scaling exponent is the largest k with p^(4k) | c4
    and p^(6k) | c6 such that the rescaled pair still satisfies Kraus's
    integrality criterion; the criterion at 2 and 3 is invariant under
    rescaling at other primes, so primes can be treated independently.
    """
    c4_0, c6_0 = model.c_invariants
    disc = model.discriminant
    if disc == 0:
        raise ValueError("singular curve")
    u = 1
    for p, e in factorize(disc).factors:
        for k in range(e // 12, 0, -1):
            v = u * p ** k
            if c4_0 % v ** 4 == 0 and c6_0 % v ** 6 == 0:
                if p >= 5 or _c_invariants_valid(c4_0 // v ** 4, c6_0 // v ** 6):
                    u = v
                    break
    return _model_from_c(c4_0 // u ** 4, c6_0 // u ** 6)


def conductor(model: WeierstrassModel) -> int:
    """Conductor of E/Q when every bad prime of the minimal model is >= 5.

    For p >= 5 the exponent is 1 for multiplicative reduction (p not
    dividing c4) and 2 for additive reduction.  If the minimal model still
    has bad reduction at 2 or 3, Tate's algorithm would be needed and
    ConductorUnavailable is raised.
    """
    mm = minimal_model(model)
    disc = mm.discriminant
    c4, _ = mm.c_invariants
    n = 1
    for p, _e in factorize(disc).factors:
        if p in (2, 3):
            raise ConductorUnavailable(
                f"minimal model has bad reduction at {p}; supply the conductor"
            )
        n *= p if c4 % p != 0 else p * p
    return n


def trace_of_frobenius(model: WeierstrassModel, p: int) -> int:
    """a_p = p + 1 - #E(F_p) on the given model (assumed minimal at p).

    Valid for good reduction and for multiplicative reduction (where the
    point count over the smooth locus gives a_p = +-1); additive primes
    give 0 via the same count on the smooth locus.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    a1, a2, a3, a4, a6 = model.a1, model.a2, model.a3, model.a4, model.a6
    disc = model.discriminant
    if p == 2:
        count = 1  # point at infinity
        for x in range(2):
            for y in range(2):
                lhs = y * y + a1 * x * y + a3 * y
                rhs = x ** 3 + a2 * x * x + a4 * x + a6
                if (lhs - rhs) % 2 == 0:
                    count += 1
        if disc % 2 == 0:
            # Bad reduction: a_2 = 2 - #E_ns(F_2).
            return 2 - (count - _singular_point_count(model, 2))
        return 2 + 1 - count
    # Odd p: complete the square, count via the quadratic character on
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
    b2, b4, b6, _b8 = model.b_invariants
    is_square = bytearray(p)
    for y in range(p // 2 + 1):
        is_square[y * y % p] = 1
    total = 0
    count = 1  # point at infinity
    for x in range(p):
        val = (4 * x ** 3 + b2 * x * x + 2 * b4 * x + b6) % p
        if val == 0:
            count += 1
        else:
            chi = 2 * is_square[val] - 1
            total += chi
            count += 1 + chi
    if disc % p == 0:
        # Bad reduction: a_p = p - #E_ns(F_p).
        return p - (count - _singular_point_count(model, p))
    return -total


def _singular_point_count(model: WeierstrassModel, p: int) -> int:
    """Number of singular points of the reduction mod p (0 or 1)."""
    a1, a2, a3, a4, a6 = model.a1, model.a2, model.a3, model.a4, model.a6
    found = 0
    for x in range(p):
        for y in range(p):
            f = y * y + a1 * x * y + a3 * y - (x ** 3 + a2 * x * x + a4 * x + a6)
            fx = a1 * y - (3 * x * x + 2 * a2 * x + a4)
            fy = 2 * y + a1 * x + a3
            if f % p == 0 and fx % p == 0 and fy % p == 0:
                found += 1
    return found


def an_coefficients(model: WeierstrassModel, limit: int) -> list[int]:
    """Dirichlet coefficients a_1..a_limit of L(E, s) (index 0 unused).

    Uses the minimal model, point counts at primes, and the Hecke
    recursion a_{p^(k+1)} = a_p a_{p^k} - p a_{p^(k-1)} at good primes
    (a_{p^k} = a_p^k at bad primes), extended by multiplicativity.
    """
    mm = minimal_model(model)
    disc = mm.discriminant
    a = [0] * (limit + 1)
    if limit >= 1:
        a[1] = 1
    sieve = _least_prime_factors(limit)
    for n in range(2, limit + 1):
        p = sieve[n]
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        if m > 1:
            a[n] = a[m] * a[n // m]
            continue
        if k == 1:
            a[n] = trace_of_frobenius(mm, p)
        elif disc % p == 0:
            a[n] = a[p] * a[n // p]
        else:
            a[n] = a[p] * a[n // p] - p * a[n // (p * p)]
    return a


def _least_prime_factors(limit: int) -> list[int]:
    lpf = list(range(limit + 1))
    i = 2
    while i * i <= limit:
        if lpf[i] == i:
            for j in range(i * i, limit + 1, i):
                if lpf[j] == j:
                    lpf[j] = i
        i += 1
    return lpf


@dataclass(frozen=True)
class LValueResult:
    value: float
    conductor: int
    terms: int
    tail_bound: float


def l_value_at_1(
    model: WeierstrassModel,
    conductor_hint: Optional[int] = None,
    terms: Optional[int] = None,
    coefficients: Optional[list[int]] = None,
) -> LValueResult:
    """Approximate L(E, 1) = 2 sum_{n>=1} (a_n / n) exp(-2 pi n / sqrt(N)).

    The formula assumes root number +1 (it returns ~0 when the sign is -1,
    consistently with L(E, 1) = 0 in that case).  `tail_bound` is a crude
    bound on the truncation error using |a_n| <= n.
    """
    n_cond = conductor_hint if conductor_hint is not None else conductor(model)
    sqrt_n = math.sqrt(n_cond)
    if terms is None:
        # exp(-2 pi T / sqrt(N)) * sqrt(N) small: geometric tail < 1e-12.
        terms = max(50, int(sqrt_n * 30 / (2 * math.pi)) + 1)
    a = coefficients if coefficients is not None else an_coefficients(model, terms)
    if len(a) < terms + 1:
        raise ValueError("too few precomputed coefficients")
    x = math.exp(-2 * math.pi / sqrt_n)
    total = 0.0
    power = 1.0
    for n in range(1, terms + 1):
        power *= x
        total += a[n] / n * power
    tail = x ** (terms + 1) / (1 - x)
    return LValueResult(2 * total, n_cond, terms, 2 * tail)
