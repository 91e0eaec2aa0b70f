"""Acceptance gate: the ten headline checks with their runtime budgets."""

import random
import time
from fractions import Fraction

import pytest
import sympy

from shadiv.arith import jacobi
from shadiv.certificates import replay, save, to_json
from shadiv.cli import execute
from shadiv.cyclic import (
    KummerFamily,
    admissible,
    genus,
    local_factor_scan,
    obstruction_conditions,
    obstruction_prime_search,
    tau_parity,
    xi_local_triviality,
)
from shadiv.descent import (
    CurveE2,
    GlobalClass,
    delta_of_point,
    local_image,
    selmer2,
    sha2_classes,
)
from shadiv.divisibility import (
    classify_sha_lifts,
    l_value_approx,
    search_4div,
    verify_everywhere,
)
from shadiv.homspaces import QuarticCover, quartic_els
from shadiv.localfields import Place, REAL, square_class

E1025 = CurveE2.from_ab(80, 205)

TORSORS = {
    "T1": ((31, -67, 11), (-1, -3, -1)),
    "T2": ((19, -34, 11), (4, 6, 1)),
    "T3": ((-11, -89, 11), (1, -1, -1)),
}


class Timer:
    def __enter__(self):
        self.t0 = time.monotonic()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.monotonic() - self.t0


def test_criterion_01_delta_table():
    with Timer() as t:
        assert delta_of_point(E1025, (0, 0)).as_tuple() == (41, 5)
        assert delta_of_point(E1025, (-80, 0)).as_tuple() == (-5, -1)
        assert delta_of_point(E1025, None).as_tuple() == (1, 1)
        assert delta_of_point(E1025, (-205, 0)).as_tuple() == (-205, -5)
    assert t.elapsed < 0.001


def test_criterion_02_everywhere_certificate():
    with Timer() as t:
        report = verify_everywhere(E1025, GlobalClass(1, 5))
        assert report.verified
        # direct bad-place checks at {real, 2, 5, 41}
        checked = {str(c.place) for c in report.bad_checks}
        assert {"real", "2", "5", "41"} <= checked
        assert all(c.ok for c in report.bad_checks)
        # the four sign cases on (5, 41): all matched, each with a realized
        # witness prime below 10^4
        assert report.generators == (-1, 5, 41)
        cases = set()
        for case in report.patterns:
            assert case.admits_match
            assert case.witness_prime is not None and case.witness_prime <= 10**4
            s5 = case.signs[report.generators.index(5)]
            s41 = case.signs[report.generators.index(41)]
            cases.add((s5, s41))
            p = case.witness_prime
            assert (jacobi(5, p), jacobi(41, p)) == (s5, s41)
        assert cases == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
    assert t.elapsed < 10


def test_criterion_03_selmer_structure():
    with Timer() as t:
        sel = selmer2(E1025)
        assert sel.dimension == 4
        assert (1, 5) in sel
        sha = sha2_classes(E1025)
        assert len(sha.nontrivial_cosets) == 3
    assert t.elapsed < 60


def test_criterion_04_torsor_els():
    with Timer() as t:
        for name, (q1, q2) in TORSORS.items():
            report = quartic_els(QuarticCover.from_factors(q1, q2))
            assert report.els, name
            for verdict in report.verdicts:
                assert verdict.solvable and verdict.witness is not None
    assert t.elapsed < 30


def test_criterion_05_lift_classification():
    with Timer() as t:
        result = classify_sha_lifts(E1025, find_witnesses=False)
        assert len(result.cosets) == 3
        verified = result.verified_cosets
        assert len(verified) == 1
        got = {c.as_tuple() for c in verified[0].verified_lifts}
        assert got == {(1, 5), (41, 1), (-5, -5), (-205, -1)}
        for verdict in result.cosets:
            if verdict.verified:
                continue
            for report in verdict.reports:
                assert not report.verified
                assert report.failing is not None
                assert report.failing.place is not None
    assert t.elapsed < 60


def test_criterion_06_analytic_input():
    with Timer() as t:
        approx = l_value_approx(E1025, terms=4000)
        assert abs(approx.value) > 0.05
        assert approx.stability < 1e-3
    assert t.elapsed < 60


def test_criterion_07_cyclic_p2_q17():
    with Timer() as t:
        fam = KummerFamily(2, 17)
        scan = local_factor_scan(fam, 1000)
        assert scan.complete
        places = {w.place for w in scan.witnesses}
        assert {2, 17, "real"} <= places
        hits = obstruction_prime_search(fam, 50)
        rs = [c.r for c in hits]
        assert rs and 3 in rs and 7 in rs
        for cert in hits:
            again = obstruction_conditions(fam, cert.r)
            assert again.holds and again.r == cert.r
    assert t.elapsed < 30


def test_criterion_08_cyclic_p3_p5():
    with Timer() as t:
        for p, q, g in [(3, 19, 10), (5, 101, 56)]:
            assert admissible(p, q)
            assert genus(p) == g
            fam = KummerFamily(p, q)
            assert local_factor_scan(fam, 1000).complete
            hits = obstruction_prime_search(fam, 1000)
            assert hits
            assert obstruction_conditions(fam, hits[0].r).holds
    assert t.elapsed < 300


def test_criterion_09_property_suites(tmp_path):
    # pigeonhole sampling: 500 random primes, zero failures
    fam = KummerFamily(3, 19)
    sampled = 0
    while sampled < 500:
        r = sympy.randprime(5, 10**6)
        if r in (fam.p, fam.q):
            continue
        assert xi_local_triviality(fam, r)
        sampled += 1

    # tau mutual exclusion: each tau_i verdict is one of the two parities
    for s in [3, 5, 7, 11, 13, 23, 29, 31]:
        if s in (fam.p, fam.q):
            continue
        for i in (1, 2, 3):
            assert tau_parity(i, s, fam) in ("prime-to-p", "divisible-by-p")

    # delta homomorphism on a rank-1 curve
    E = CurveE2(0, 5, -5)

    def add(P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = map(Fraction, P)
        x2, y2 = map(Fraction, Q)
        if x1 == x2 and y1 == -y2:
            return None
        if P == Q:
            lam = (3 * x1 * x1 - 25) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - x1 - x2
        return (x3, lam * (x1 - x3) - y1)

    G = (Fraction(-4), Fraction(6))
    pts = [None, G, add(G, G)]
    torsion = [None, (Fraction(0), Fraction(0)), (Fraction(5), Fraction(0))]
    rng = random.Random(3)
    for _ in range(12):
        P, Q = rng.choice(pts), rng.choice(torsion)
        assert delta_of_point(E, add(P, Q)) == delta_of_point(E, P) * delta_of_point(
            E, Q
        )

    # local image oracle equivalence at small primes
    for p in (2, 3, 5):
        v = Place.finite(p)
        img = local_image(E1025, v)
        k = 1
        while p ** (k + 1) <= 10**5:
            k += 1
        mod = p**k
        for x in range(mod):
            us = [x - e for e in E1025.roots]
            if any(u % mod == 0 for u in us):
                continue
            vals = [(u & -u).bit_length() - 1 if p == 2 else 0 for u in us]
            if p != 2:
                vals = []
                for u in us:
                    t, w = abs(u), 0
                    while t % p == 0:
                        t //= p
                        w += 1
                    vals.append(w)
            if max(vals) * 3 >= k:
                continue
            if square_class(us[0] * us[1] * us[2], v) == square_class(1, v):
                key = (square_class(us[0], v), square_class(us[1], v))
                assert key in img

    # certificate replay determinism
    cert = execute("selmer", {"curve": "80 205"})
    path = tmp_path / "cert.json"
    save(cert, str(path))
    assert replay(str(path), execute)
    assert to_json(execute("selmer", {"curve": "80 205"})) == to_json(cert)


def test_criterion_10_search_rediscovery():
    with Timer() as t:
        hits = search_4div(amax=300, bmax=300)
        assert any(h.a == 80 and h.b == 205 for h in hits)
    assert t.elapsed < 1800
