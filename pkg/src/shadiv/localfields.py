"""Square classes of completions of Q and Hensel-based local root finding.

A square class in Q_v is stored in normal form: valuation parity plus a
unit-class tag (Legendre symbol for odd v, unit mod 8 for v = 2, sign at
the real place).  All decisions are exact; Hensel certificates carry the
margin that makes them replayable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from . import polyutil
from .arith import is_prime, jacobi
from .errors import NonPrime, PrecisionExhausted, ZeroInput

#: Environment variable overriding the maximum Hensel precision.
MAXPREC_ENV = "SHA_NONDIV_MAXPREC"


@dataclass(frozen=True, order=True)
class Place:
    """A completion of Q: a finite prime, or the real place (prime=0)."""

    prime: int

    @classmethod
    def real(cls) -> "Place":
        return cls(0)

    @classmethod
    def finite(cls, p: int) -> "Place":
        if not is_prime(p):
            raise NonPrime(f"{p} is not prime")
        return cls(p)

    @property
    def is_real(self) -> bool:
        return self.prime == 0

    def __str__(self) -> str:
        return "real" if self.is_real else str(self.prime)


REAL = Place.real()


def _smallest_nonresidue(p: int) -> int:
    for u in range(2, p):
        if jacobi(u, p) == -1:
            return u
    raise AssertionError("no quadratic non-residue found")


@dataclass(frozen=True)
class SquareClass:
    """An element of Q_v^x / (Q_v^x)^2 in normal form.

    tag: odd v: +1 (residue) or -1 (non-residue); v = 2: unit in {1,3,5,7}
    mod 8; real place: +1 or -1 (the sign).  val_parity is 0 at the real
    place.
    """

    place: Place
    val_parity: int
    tag: int

    @property
    def representative(self) -> int:
        """Canonical squarefree integer representative."""
        v = self.place
        if v.is_real:
            return self.tag
        if v.prime == 2:
            return (2**self.val_parity) * self.tag
        u = 1 if self.tag == 1 else _smallest_nonresidue(v.prime)
        return (v.prime**self.val_parity) * u

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if self.place != other.place:
            raise ValueError("classes at different places")
        v = self.place
        if v.is_real:
            return SquareClass(v, 0, self.tag * other.tag)
        par = (self.val_parity + other.val_parity) % 2
        if v.prime == 2:
            return SquareClass(v, par, (self.tag * other.tag) % 8)
        return SquareClass(v, par, self.tag * other.tag)

    @property
    def is_trivial(self) -> bool:
        return self.val_parity == 0 and self.tag == 1


def square_class(x, v: Place) -> SquareClass:
    """Normal form of x in Q_v^x / (Q_v^x)^2."""
    if x == 0:
        raise ZeroInput("0 has no square class")
    if v.is_real:
        return SquareClass(v, 0, 1 if x > 0 else -1)
    p = v.prime
    if isinstance(x, int):
        # fast integer path (the residue searches live here)
        a = 0
        while x % p == 0:
            x //= p
            a += 1
        if p == 2:
            return SquareClass(v, a % 2, x % 8)
        # Euler's criterion; x is now a unit at p
        tag = 1 if pow(x, (p - 1) >> 1, p) == 1 else -1
        return SquareClass(v, a % 2, tag)
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    a = polyutil.vp(num, p) - polyutil.vp(den, p)
    un = num // p ** polyutil.vp(num, p)
    ud = den // p ** polyutil.vp(den, p)
    if p == 2:
        u = (un * pow(ud, -1, 8)) % 8
        return SquareClass(v, a % 2, u)
    u = (un * ud) % p  # = un/ud mod squares
    return SquareClass(v, a % 2, jacobi(u, p))


def same_class(x, y, v: Place) -> bool:
    """Whether x/y is a square in Q_v^x."""
    return square_class(x, v) == square_class(y, v)


def all_square_classes(v: Place) -> list[SquareClass]:
    """The full group Q_v^x/(Q_v^x)^2: 4 classes for odd v, 8 for 2, 2 real."""
    if v.is_real:
        return [SquareClass(v, 0, 1), SquareClass(v, 0, -1)]
    if v.prime == 2:
        return [SquareClass(v, a, u) for a in (0, 1) for u in (1, 3, 5, 7)]
    return [SquareClass(v, a, t) for a in (0, 1) for t in (1, -1)]


@dataclass(frozen=True)
class HenselResult:
    """Residues mod p^k certified as Z_p roots by the strong Hensel criterion."""

    prime: int
    precision: int
    certified: tuple[int, ...]
    undecided: tuple[int, ...]


def hensel_roots(f, p: int, k: int) -> HenselResult:
    """Classify residues mod p^k for the polynomial f.

    A residue x0 is certified when v(f(x0)) > 2*v(f'(x0)) and
    v(f(x0)) - v(f'(x0)) >= k: the Newton iteration from x0 then converges
    to a Z_p root congruent to x0 mod p^k.  It is refuted when
    v(f(x0)) < k (no root in the class), and undecided otherwise.
    """
    f = polyutil.normalize(f)
    if f == (0,):
        raise ZeroInput("zero polynomial")
    if k < 1:
        raise ValueError("precision k must be >= 1")
    df = polyutil.derivative(f)
    mod = p**k
    certified, undecided = [], []
    for x0 in range(mod):
        fx = polyutil.evaluate(f, x0)
        a = polyutil.vp(fx, p) if fx else None  # None = infinite
        dfx = polyutil.evaluate(df, x0)
        b = polyutil.vp(dfx, p) if dfx else None
        if a is None:
            certified.append(x0)
        elif b is not None and a > 2 * b and a - b >= k:
            certified.append(x0)
        elif a >= k:
            undecided.append(x0)
    return HenselResult(p, k, tuple(certified), tuple(undecided))


def _max_precision(f, p: int) -> int:
    override = os.environ.get(MAXPREC_ENV)
    if override:
        return int(override)
    disc = polyutil.discriminant(f)
    vd = polyutil.vp(disc, p) if disc else 0
    return 2 * vd + 3


def precision_ladder(f, p: int) -> list[int]:
    cap = _max_precision(f, p)
    return sorted({min(k, cap) for k in (1, 3, 5, cap)})


@dataclass(frozen=True)
class LinearFactorWitness:
    """A certified linear factor of f over Q_v."""

    place: Place
    kind: str  # "integral" | "inverted" | "real"
    root: object  # residue (int) with modulus, or a rational interval
    precision: int


def local_linear_factor(f, v: Place) -> LinearFactorWitness | None:
    """A witness root of f in Q_v, or None when no linear factor exists.

    f must be nonzero and squarefree.  Finite places use strong Hensel with
    a deterministic precision ladder; the real place uses exact root
    isolation.
    """
    f = polyutil.normalize(f)
    if not polyutil.is_squarefree(f):
        raise ValueError("f must be squarefree")
    if v.is_real:
        if polyutil.real_root_count(f) == 0:
            return None
        a, b = polyutil.real_root_intervals(f)[0]
        return LinearFactorWitness(v, "real", (a, b), 0)
    p = v.prime
    rev = polyutil.reverse(f)
    for k in precision_ladder(f, p):
        res = hensel_roots(f, p, k)
        if res.certified:
            return LinearFactorWitness(v, "integral", (res.certified[0], p**k), k)
        # roots of f outside Z_p correspond to roots t = 1/x of the
        # reversed polynomial with p | t
        res_inv = hensel_roots(rev, p, k)
        inv_certified = [t for t in res_inv.certified if t % p == 0]
        if inv_certified:
            return LinearFactorWitness(v, "inverted", (inv_certified[0], p**k), k)
        pending = res.undecided + tuple(t for t in res_inv.undecided if t % p == 0)
        if not pending:
            return None
    raise PrecisionExhausted(
        f"undecided residues remain for {f} at p={p}", undecided=pending
    )
