"""Exact integer arithmetic: factorization, residue symbols, finite fields.

Integers are plain Python ints (arbitrary precision, exact).  Finite fields
F_{r^f} are represented with an explicit monic irreducible modulus over Z/r;
elements are coefficient tuples in ascending degree order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

from .errors import BoundExceeded, ExcludedPrime, NonPrime, ZeroInput

#: Largest |n| accepted by factorize().
DESK_SCALE_BOUND = 2**128


def is_prime(n: int) -> bool:
    """Deterministic primality test at desk scale (strong BPSW)."""
    return bool(sympy.isprime(n))


@dataclass(frozen=True)
class Factorization:
    """A signed prime factorization: unit * prod(p**e)."""

    unit: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        n = self.unit
        for p, e in self.factors:
            n *= p**e
        return n


def factorize(n: int, bound: int = DESK_SCALE_BOUND) -> Factorization:
    """Factor a nonzero integer with |n| <= bound into increasing primes."""
    if n == 0:
        raise ZeroInput("cannot factor 0")
    if abs(n) > bound:
        raise BoundExceeded(f"|{n}| exceeds desk-scale bound {bound}")
    factors = tuple(sorted(sympy.factorint(abs(n)).items()))
    return Factorization(unit=1 if n > 0 else -1, factors=factors)


def squarefree_part(n: int) -> int:
    """The squarefree d (carrying the sign of n) with n/d a positive square."""
    if n == 0:
        raise ZeroInput("0 has no squarefree part")
    fac = factorize(n)
    d = fac.unit
    for p, e in fac.factors:
        if e % 2:
            d *= p
    return d


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd positive n; Legendre when n is prime."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"jacobi requires odd positive n, got {n}")
    return int(sympy.jacobi_symbol(a, n))


def multiplicative_order(a: int, p: int) -> int:
    """Order of a in (Z/p)^x."""
    return int(sympy.n_order(a, p))


@dataclass(frozen=True)
class FiniteField:
    """F_{r^f} = (Z/r)[x]/(modulus), with a distinguished root of unity.

    ``modulus`` is monic of degree f, coefficients ascending; ``zeta`` is an
    element of multiplicative order exactly ``zeta_order`` (a prime), used
    for power-residue computations.
    """

    char: int
    degree: int
    modulus: tuple[int, ...]
    zeta: tuple[int, ...]
    zeta_order: int

    @property
    def order(self) -> int:
        return self.char**self.degree

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.degree

    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.degree - 1)

    def element(self, n: int) -> tuple[int, ...]:
        """The scalar n, reduced into the prime field."""
        return (n % self.char,) + (0,) * (self.degree - 1)

    def from_coeffs(self, coeffs) -> tuple[int, ...]:
        c = [x % self.char for x in coeffs]
        if len(c) > self.degree:
            return self._reduce(c)
        c += [0] * (self.degree - len(c))
        return tuple(c)

    def add(self, a, b):
        r = self.char
        return tuple((x + y) % r for x, y in zip(a, b))

    def sub(self, a, b):
        r = self.char
        return tuple((x - y) % r for x, y in zip(a, b))

    def neg(self, a):
        r = self.char
        return tuple((-x) % r for x in a)

    def _reduce(self, c: list[int]) -> tuple[int, ...]:
        # divide by the monic modulus, keep the remainder
        r, f, m = self.char, self.degree, self.modulus
        c = list(c)
        for i in range(len(c) - 1, f - 1, -1):
            t = c[i]
            if t:
                c[i] = 0
                for j in range(f):
                    c[i - f + j] = (c[i - f + j] - t * m[j]) % r
        return tuple(x % r for x in c[:f])

    def mul(self, a, b):
        f = self.degree
        if f == 1:
            return ((a[0] * b[0]) % self.char,)
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._reduce(prod)

    def pow(self, a, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_zero(self, a) -> bool:
        return all(x == 0 for x in a)

    def elements(self):
        """All field elements (small fields only; used by oracles)."""
        r, f = self.char, self.degree

        def rec(i):
            if i == f:
                yield ()
                return
            for rest in rec(i + 1):
                for c in range(r):
                    yield (c,) + rest

        yield from rec(0)


def build_residue_field(p: int, r: int) -> FiniteField:
    """Residue field at a prime above r in the p-th cyclotomic field.

    Returns F_{r^f} with f the multiplicative order of r mod p, together
    with a distinguished element zeta of multiplicative order exactly p.
    The modulus is the lexicographically least irreducible factor of the
    p-th cyclotomic polynomial mod r (coefficients compared in descending
    degree order), which makes the construction reproducible; zeta is then
    the class of x.
    """
    if not is_prime(p):
        raise NonPrime(f"p = {p} is not prime")
    if not is_prime(r):
        raise NonPrime(f"r = {r} is not prime")
    if r == p:
        raise ExcludedPrime(f"r must differ from p = {p}")
    f = 1 if p == 2 else multiplicative_order(r, p)
    # p-th cyclotomic polynomial x^(p-1) + ... + 1, dense descending
    cyclo = [ZZ(1)] * p
    _, factors = gf_factor(cyclo, r, ZZ)
    candidates = sorted(
        tuple(int(c) % r for c in fac) for fac, _ in factors
    )
    m_desc = candidates[0]
    assert len(m_desc) == f + 1
    modulus = tuple(reversed(m_desc))  # ascending
    if f == 1:
        zeta = ((-modulus[0]) % r,)
    else:
        zeta = tuple(1 if i == 1 else 0 for i in range(f))
    field = FiniteField(char=r, degree=f, modulus=modulus, zeta=zeta, zeta_order=p)
    assert field.pow(zeta, p) == field.one() and zeta != field.one()
    return field


def is_pth_power(field: FiniteField, z, p: int) -> bool:
    """Whether z lies in (F^x)^p, by exponentiation to (|F|-1)/gcd(p,|F|-1)."""
    if field.is_zero(z):
        raise ZeroInput("power-residue test requires a nonzero element")
    n = field.order - 1
    e = n // math.gcd(p, n)
    return field.pow(z, e) == field.one()


def pth_root(field: FiniteField, c, p: int):
    """A p-th root of c in F (c must be a p-th power; p prime).

    Adleman-Manders-Miller, deterministic: the non-residue needed for the
    p-Sylow generator is found by scanning scalars then low-degree elements.
    """
    if not is_pth_power(field, c, p):
        raise ValueError("element is not a p-th power")
    n = field.order - 1
    if n % p != 0:
        # raising to the inverse of p mod n is a bijection
        return field.pow(c, pow(p, -1, n))
    s, m = 0, n
    while m % p == 0:
        s += 1
        m //= p
    # x0 = c^alpha with p*alpha = 1 + k*m; then x0^p = c * (c^m)^k
    alpha = pow(p, -1, m)
    k = (p * alpha - 1) // m
    x0 = field.pow(c, alpha)
    target = field.pow(c, (m * k) % n)  # (c^m)^k, lies in the p-Sylow subgroup
    if target == field.one():
        return x0
    g = _non_pth_power(field, p)
    h = field.pow(g, m)  # generator of the p-Sylow subgroup, order p^s
    # Pohlig-Hellman: find e with h^e = target^(-1); e is divisible by p
    # since target is a p-th power in the cyclic p-group.
    inv_target = field.pow(target, n - 1)
    e = _plog_p_group(field, h, inv_target, p, s)
    assert e % p == 0
    root = field.mul(x0, field.pow(h, e // p))
    assert field.pow(root, p) == c
    return root


def _non_pth_power(field: FiniteField, p: int):
    def vq(n):
        v = 0
        while n % p == 0:
            v += 1
            n //= p
        return v

    # Every scalar is a p-th power when v_p(char - 1) < v_p(order - 1):
    # the scalar subgroup then lies inside the index-p power subgroup.
    # Otherwise non-residues have density 1 - 1/p among scalars.
    if vq(field.char - 1) == vq(field.order - 1):
        for a in range(2, field.char):
            z = field.element(a)
            if not is_pth_power(field, z, p):
                return z
    # scan x + a
    for a in range(field.char):
        z = field.from_coeffs([a, 1])
        if not field.is_zero(z) and not is_pth_power(field, z, p):
            return z
    raise AssertionError("no p-th non-residue found")


def _plog_p_group(field: FiniteField, h, y, p: int, s: int) -> int:
    """Discrete log of y base h in the cyclic group <h> of order p^s."""
    e = 0
    gamma = field.pow(h, p ** (s - 1))  # order p
    table = {}
    z = field.one()
    for j in range(p):
        table[z] = j
        z = field.mul(z, gamma)
    for i in range(s):
        # strip known digits, look at the top remaining digit
        t = field.mul(y, field.pow(h, (p**s - e) % (p**s)))
        t = field.pow(t, p ** (s - 1 - i))
        d = table[t]
        e += d * p**i
    assert field.pow(h, e) == y
    return e
