"""2-descent on elliptic curves with full rational 2-torsion.

The connecting homomorphism is computed by the explicit square-class
formulas; local images are decided through the homogeneous-space tests;
the 2-Selmer group is cut out by the local conditions at the bad places
(good places impose no condition on classes supported on the bad set).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from .arith import squarefree_part
from .errors import PointNotOnCurve
from .homspaces import ConicPair, conic_pair_solvable_at, torsion_delta_pairs
from .localfields import REAL, Place, SquareClass, all_square_classes, square_class

#: Default naive-height bound for the rational point search.
POINT_SEARCH_BOUND = 10**4


@dataclass(frozen=True)
class CurveE2:
    """y^2 = (x - e1)(x - e2)(x - e3) with distinct integer roots.

    The ordered 2-torsion basis is (e1, 0), (e2, 0); for curves given as
    y^2 = x(x+a)(x+b) this is (0, 0), (-a, 0), matching the convention in
    which the identity, (e1,0), (e2,0), (e3,0) map to the four torsion
    class pairs.
    """

    e1: int
    e2: int
    e3: int

    def __post_init__(self):
        if len({self.e1, self.e2, self.e3}) != 3:
            raise ValueError("roots must be pairwise distinct")

    @classmethod
    def from_ab(cls, a: int, b: int) -> "CurveE2":
        return cls(0, -a, -b)

    @property
    def roots(self) -> tuple[int, int, int]:
        return (self.e1, self.e2, self.e3)

    @property
    def discriminant(self) -> int:
        d12 = self.e1 - self.e2
        d13 = self.e1 - self.e3
        d23 = self.e2 - self.e3
        return 16 * (d12 * d13 * d23) ** 2

    @property
    def a_invariants(self) -> tuple[int, int, int, int, int]:
        """(a1, a2, a3, a4, a6) of the expanded Weierstrass model."""
        e1, e2, e3 = self.roots
        return (0, -(e1 + e2 + e3), 0, e1 * e2 + e1 * e3 + e2 * e3, -e1 * e2 * e3)

    @property
    def bad_primes(self) -> tuple[int, ...]:
        prod = 2 * (self.e1 - self.e2) * (self.e1 - self.e3) * (self.e2 - self.e3)
        return tuple(sorted(sympy.primefactors(abs(prod))))

    @property
    def places(self) -> tuple[Place, ...]:
        return (REAL,) + tuple(Place.finite(p) for p in self.bad_primes)

    def contains(self, x, y) -> bool:
        x, y = Fraction(x), Fraction(y)
        return y * y == (x - self.e1) * (x - self.e2) * (x - self.e3)


@dataclass(frozen=True)
class GlobalClass:
    """A pair of squarefree integers representing a class in (Q^x/Q^x2)^2."""

    d1: int
    d2: int

    def __post_init__(self):
        for d in (self.d1, self.d2):
            if d == 0 or squarefree_part(d) != d:
                raise ValueError(f"{d} is not a squarefree nonzero integer")

    def __mul__(self, other: "GlobalClass") -> "GlobalClass":
        return GlobalClass(
            squarefree_part(self.d1 * other.d1), squarefree_part(self.d2 * other.d2)
        )

    def local_key(self, v: Place) -> tuple[SquareClass, SquareClass]:
        return (square_class(self.d1, v), square_class(self.d2, v))

    @property
    def is_trivial(self) -> bool:
        return self.d1 == 1 and self.d2 == 1

    def as_tuple(self) -> tuple[int, int]:
        return (self.d1, self.d2)


IDENTITY_POINT = None  # the group identity, passed to delta_of_point


def delta_of_point(E: CurveE2, P) -> GlobalClass:
    """Image of a rational point under the connecting homomorphism.

    P is None for the identity or a pair (x, y) of rationals.  At the
    2-torsion points the generic formula degenerates and the standard
    substitutes are used; the third torsion point uses (e3-e1, e3-e2).
    """
    if P is None:
        return GlobalClass(1, 1)
    x, y = Fraction(P[0]), Fraction(P[1])
    if not E.contains(x, y):
        raise PointNotOnCurve(f"({x}, {y}) does not lie on {E}")
    e1, e2, e3 = E.roots
    pairs = torsion_delta_pairs(e1, e2, e3)
    if y == 0:
        idx = {e1: 1, e2: 2, e3: 3}[int(x)]
        t1, t2 = pairs[idx]
        return GlobalClass(squarefree_part(t1), squarefree_part(t2))
    n1 = (x - e1).numerator * (x - e1).denominator
    n2 = (x - e2).numerator * (x - e2).denominator
    return GlobalClass(squarefree_part(n1), squarefree_part(n2))


def torsion_image_set(E: CurveE2) -> tuple[GlobalClass, ...]:
    """The four torsion class pairs: images of O, (e1,0), (e2,0), (e3,0)."""
    return tuple(
        GlobalClass(squarefree_part(t1), squarefree_part(t2))
        for t1, t2 in torsion_delta_pairs(*E.roots)
    )


def _span_closure(keys):
    """Closure of a set of (SquareClass, SquareClass) keys under the group law."""
    span = set(keys)
    changed = True
    while changed:
        changed = False
        current = list(span)
        for a1, a2 in current:
            for b1, b2 in current:
                prod = (a1 * b1, a2 * b2)
                if prod not in span:
                    span.add(prod)
                    changed = True
    return frozenset(span)


def local_image_order(v: Place) -> int:
    """|image of E(Q_v)/2E(Q_v)| for full rational 2-torsion."""
    if v.is_real:
        return 2
    return 8 if v.prime == 2 else 4


def local_image(E: CurveE2, v: Place, exhaustive: bool = False):
    """The image of the local points under delta, as a set of class-pair keys.

    Candidate pairs are tested via the conic-pair system.  In the default
    mode the search stops once the subgroup reaches its known order
    (4 at odd places, 8 at v=2, 2 at the real place); with exhaustive=True
    every candidate is tested and the subgroup structure is verified.
    """
    return _local_image_cached(E.roots, v, exhaustive)


@lru_cache(maxsize=None)
def _local_image_cached(roots, v: Place, exhaustive: bool):
    e1, e2, e3 = roots
    target = local_image_order(v)
    torsion_keys = [
        (square_class(t1, v), square_class(t2, v))
        for t1, t2 in torsion_delta_pairs(e1, e2, e3)
    ]
    if exhaustive:
        verified = set(torsion_keys)
        for c1 in all_square_classes(v):
            for c2 in all_square_classes(v):
                if (c1, c2) in verified:
                    continue
                pair = ConicPair(c1.representative, c2.representative, e1, e2, e3)
                if conic_pair_solvable_at(pair, v).solvable:
                    verified.add((c1, c2))
        if verified != _span_closure(list(verified)) or len(verified) != target:
            raise AssertionError(
                f"solvable pairs at {v} are not a subgroup of order {target}"
            )
        return frozenset(verified)
    span = _span_closure(torsion_keys)
    if len(span) >= target:
        return span
    for c1 in all_square_classes(v):
        for c2 in all_square_classes(v):
            key = (c1, c2)
            if key in span:
                continue
            pair = ConicPair(c1.representative, c2.representative, e1, e2, e3)
            if conic_pair_solvable_at(pair, v).solvable:
                span = _span_closure(list(span) + [key])
            if len(span) >= target:
                break
        if len(span) >= target:
            break
    if len(span) != target:
        raise AssertionError(
            f"local image at {v} has order {len(span)}, expected {target}"
        )
    return frozenset(span)


def search_points(E: CurveE2, bound: int = POINT_SEARCH_BOUND):
    """Naive rational point search: x = m/n^2, |m|, n^2 <= bound.

    Only used to exhibit points; never to prove non-existence.
    """
    return _search_points_cached(E.roots, bound)


@lru_cache(maxsize=None)
def _search_points_cached(roots, bound):
    e1, e2, e3 = roots
    points = []
    nmax = math.isqrt(bound)
    for n in range(1, nmax + 1):
        n2 = n * n
        n3 = n2 * n
        c1, c2, c3 = e1 * n2, e2 * n2, e3 * n2
        for m in range(-bound, bound + 1):
            t = (m - c1) * (m - c2) * (m - c3)
            if t < 0 or (t & 3) not in (0, 1):
                continue
            if math.gcd(m, n) != 1:
                continue
            s = math.isqrt(t)
            if s * s == t:
                points.append((Fraction(m, n2), Fraction(s, n3)))
    return tuple(points)


def _class_to_vec(d: int, gens) -> int:
    """Exponent bitvector of a squarefree d over generators (-1, p1, p2, ...)."""
    vec = 0
    rem = d
    for i, g in enumerate(gens):
        if g == -1:
            if rem < 0:
                vec |= 1 << i
                rem = -rem
        elif rem % g == 0:
            vec |= 1 << i
            rem //= g
    if rem != 1:
        raise ValueError(f"{d} is not supported on generators {gens}")
    return vec


def _vec_to_class(vec: int, gens) -> int:
    d = 1
    for i, g in enumerate(gens):
        if vec & (1 << i):
            d *= g
    return d


def _sc_bits(c: SquareClass) -> tuple[int, ...]:
    """A SquareClass as an F2 coordinate vector."""
    v = c.place
    if v.is_real:
        return (0 if c.tag == 1 else 1,)
    if v.prime == 2:
        u = c.tag
        minus = 1 if u in (3, 7) else 0  # u = (-1)^minus * 5^five mod 8
        five = 1 if u in (3, 5) else 0
        return (c.val_parity, minus, five)
    return (c.val_parity, 0 if c.tag == 1 else 1)


def _bits_to_int(bits) -> int:
    out = 0
    for i, b in enumerate(bits):
        if b:
            out |= 1 << i
    return out


def _echelon_insert(pivots: dict[int, int], vec: int) -> int:
    """Reduce vec against the pivot rows, inserting it if independent."""
    while vec:
        lead = vec.bit_length() - 1
        if lead in pivots:
            vec ^= pivots[lead]
        else:
            pivots[lead] = vec
            break
    return vec


def _reduce_against(pivots: dict[int, int], vec: int) -> int:
    while vec:
        lead = vec.bit_length() - 1
        if lead not in pivots:
            break
        vec ^= pivots[lead]
    return vec


@dataclass(frozen=True)
class SelmerGroup:
    curve: CurveE2
    generators: tuple[int, ...]
    elements: tuple[GlobalClass, ...]
    dimension: int
    torsion_image: tuple[GlobalClass, ...]
    points: tuple[tuple[Fraction, Fraction], ...]
    point_image: tuple[GlobalClass, ...]

    def __contains__(self, item) -> bool:
        if isinstance(item, tuple):
            item = GlobalClass(item[0], item[1])
        return item in set(self.elements)


def class_generators(E: CurveE2) -> tuple[int, ...]:
    return (-1,) + E.bad_primes


def _pair_vec(cls: GlobalClass, gens) -> int:
    g = len(gens)
    return _class_to_vec(cls.d1, gens) | (_class_to_vec(cls.d2, gens) << g)


def _vec_pair(vec: int, gens) -> GlobalClass:
    g = len(gens)
    mask = (1 << g) - 1
    return GlobalClass(_vec_to_class(vec & mask, gens), _vec_to_class(vec >> g, gens))


def _local_key_int(key) -> int:
    bits = _sc_bits(key[0]) + _sc_bits(key[1])
    return _bits_to_int(bits)


def selmer2(E: CurveE2, point_bound: int = POINT_SEARCH_BOUND) -> SelmerGroup:
    """The 2-Selmer group as an F2-vector space of global class pairs.

    Classes supported on the bad set are unramified at every good place,
    where they consequently lie in the local image; only the bad places
    impose conditions.  The local conditions are linear, so the group is
    computed as a nullspace and then enumerated.
    """
    gens = class_generators(E)
    g = len(gens)
    nvars = 2 * g

    # columns: generator bits of (d1, d2); rows: parity checks at each place
    rows = []
    for v in E.places:
        image = local_image(E, v)
        image_pivots: dict[int, int] = {}
        for key in image:
            _echelon_insert(image_pivots, _local_key_int(key))
        keyspace_dim = 2 * len(_sc_bits(square_class(1, v)))
        # parity checks: nullspace of the image basis viewed as row vectors
        checks = _nullspace(list(image_pivots.values()), keyspace_dim)
        # generator key contributions at this place
        gen_keys = []
        for j in range(nvars):
            d = gens[j % g]
            if j < g:
                key = (square_class(d, v), square_class(1, v))
            else:
                key = (square_class(1, v), square_class(d, v))
            gen_keys.append(_local_key_int(key))
        for h in checks:
            row = 0
            for j in range(nvars):
                if bin(h & gen_keys[j]).count("1") % 2:
                    row |= 1 << j
            rows.append(row)

    kernel = _nullspace(rows, nvars)
    elements = sorted(
        (_vec_pair(vec, gens) for vec in _span_vectors(kernel)),
        key=lambda c: c.as_tuple(),
    )
    torsion = torsion_image_set(E)
    points = search_points(E, point_bound)
    span_pivots: dict[int, int] = {}
    for t in torsion:
        _echelon_insert(span_pivots, _pair_vec(t, gens))
    for x, y in points:
        _echelon_insert(span_pivots, _pair_vec(delta_of_point(E, (x, y)), gens))
    point_image = sorted(
        (_vec_pair(vec, gens) for vec in _span_vectors(list(span_pivots.values()))),
        key=lambda c: c.as_tuple(),
    )
    return SelmerGroup(
        curve=E,
        generators=gens,
        elements=tuple(elements),
        dimension=len(kernel),
        torsion_image=torsion,
        points=points,
        point_image=tuple(point_image),
    )


def _nullspace(rows: list[int], ncols: int) -> list[int]:
    """Basis of the right nullspace of the F2 matrix given as row bitmasks."""
    rows = [r for r in rows if r]
    pivots = {}
    for r in rows:
        while r:
            lead = r.bit_length() - 1
            if lead in pivots:
                r ^= pivots[lead]
            else:
                pivots[lead] = r
                break
    basis = []
    pivot_cols = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    for fc in free_cols:
        vec = 1 << fc
        # pivot rows only involve lower bits, so resolve in ascending order
        for lead in sorted(pivots):
            row = pivots[lead]
            if bin(row & vec).count("1") % 2:
                vec ^= 1 << lead
        basis.append(vec)
    return basis


def _span_vectors(basis: list[int]):
    for mask in range(1 << len(basis)):
        vec = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                vec ^= basis[i]
            m >>= 1
            i += 1
        yield vec


def selmer2_enumerate(E: CurveE2) -> tuple[GlobalClass, ...]:
    """Direct enumeration route: filter every pair supported on the bad set.

    Independent of the linear-algebra path; used for cross-checks and
    certificates.
    """
    gens = class_generators(E)
    images = {v: local_image(E, v) for v in E.places}
    ds = [_vec_to_class(m, gens) for m in range(1 << len(gens))]
    out = []
    for d1 in ds:
        for d2 in ds:
            ok = True
            for v in E.places:
                key = (square_class(d1, v), square_class(d2, v))
                if key not in images[v]:
                    ok = False
                    break
            if ok:
                out.append(GlobalClass(d1, d2))
    return tuple(sorted(out, key=lambda c: c.as_tuple()))


@dataclass(frozen=True)
class ShaQuotient:
    """Sel_2 modulo the image of the found rational points."""

    selmer: SelmerGroup
    cosets: tuple[tuple[GlobalClass, ...], ...]

    @property
    def nontrivial_cosets(self) -> tuple[tuple[GlobalClass, ...], ...]:
        return tuple(c for c in self.cosets if GlobalClass(1, 1) not in c)


def sha2_classes(E: CurveE2, point_bound: int = POINT_SEARCH_BOUND) -> ShaQuotient:
    """Cosets of the point-search image inside the 2-Selmer group.

    Each nontrivial coset is a candidate Sha[2] element; exact when the
    curve's rank-0 hypothesis is certified analytically.
    """
    sel = selmer2(E, point_bound)
    gens = sel.generators
    span = {_pair_vec(c, gens) for c in sel.point_image}
    seen = set()
    cosets = []
    for c in sel.elements:
        vec = _pair_vec(c, gens)
        coset = frozenset(vec ^ s for s in span)
        if coset not in seen:
            seen.add(coset)
            cosets.append(
                tuple(
                    sorted(
                        (_vec_pair(w, gens) for w in coset), key=lambda x: x.as_tuple()
                    )
                )
            )
    # trivial coset first, rest in lexicographic order
    cosets.sort(key=lambda co: (GlobalClass(1, 1) not in co, co[0].as_tuple()))
    return ShaQuotient(selmer=sel, cosets=tuple(cosets))
