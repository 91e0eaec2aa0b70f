"""Everywhere-local E[4]-kernel membership and the nondivisibility certificate."""

import pytest
import sympy

from shadiv.descent import CurveE2, GlobalClass
from shadiv.divisibility import (
    NondivisibilityCertificate,
    certify_nondivisibility,
    classify_sha_lifts,
    direct_check_places,
    e4_kernel_set,
    l_value_approx,
    local_e4_match,
    locally_in_e4_kernel,
    nondivisible_witness_classes,
    pattern_generators,
    verify_everywhere,
)
from shadiv.errors import NoWitnessClass
from shadiv.localfields import Place, REAL

E1025 = CurveE2.from_ab(80, 205)
XI = GlobalClass(1, 5)


class TestLocalMatch:
    def test_bad_place_matches(self):
        # xi = (1, 5) matches a torsion pair at every bad place
        expected = {
            REAL: (1, 1),
            Place.finite(2): (41, 5),
            Place.finite(5): (41, 5),
            Place.finite(41): (1, 1),
        }
        for v, t in expected.items():
            m = local_e4_match(E1025, XI, v)
            assert m is not None and m.as_tuple() == t

    def test_v3_matched(self):
        m = local_e4_match(E1025, XI, Place.finite(3))
        assert m is not None and m.as_tuple() == (-5, -1)

    def test_failing_lift_at_two(self):
        assert not locally_in_e4_kernel(E1025, GlobalClass(-1, -1), Place.finite(2))

    def test_kernel_set_is_torsion_image(self):
        assert [c.as_tuple() for c in e4_kernel_set(E1025)] == [
            (1, 1),
            (41, 5),
            (-5, -1),
            (-205, -5),
        ]


class TestVerifyEverywhere:
    def test_xi_verified(self):
        report = verify_everywhere(E1025, XI)
        assert report.verified
        assert report.failing is None
        assert report.unwitnessed_patterns == ()

    def test_generators_and_places(self):
        assert pattern_generators(E1025, XI) == (-1, 5, 41)
        places = direct_check_places(E1025, XI)
        assert REAL in places
        assert {v.prime for v in places if v.prime} == {2, 5, 41}

    def test_all_patterns_matched_with_witnesses(self):
        report = verify_everywhere(E1025, XI)
        assert len(report.patterns) == 8
        for case in report.patterns:
            assert case.admits_match
            assert case.witness_prime is not None
            assert sympy.isprime(case.witness_prime)

    def test_pattern_soundness_sampling(self):
        # at each good odd prime the pattern verdict must equal the direct one
        report = verify_everywhere(E1025, XI)
        excluded = {2, 5, 41}
        for p in sympy.primerange(3, 500):
            if p in excluded:
                continue
            case = report.pattern_for_prime(p)
            direct = local_e4_match(E1025, XI, Place.finite(p))
            assert case.admits_match == (direct is not None)
            if direct is not None:
                # the matched torsion pair localizes the same way
                assert locally_in_e4_kernel(E1025, XI, Place.finite(p))

    def test_witness_primes_realize_their_pattern(self):
        report = verify_everywhere(E1025, XI)
        for case in report.patterns:
            p = case.witness_prime
            assert report.pattern_for_prime(p).signs == case.signs

    def test_lift_set_invariance(self):
        from shadiv.descent import torsion_image_set

        base = verify_everywhere(E1025, XI, find_witnesses=False).verified
        for t in torsion_image_set(E1025):
            lifted = verify_everywhere(E1025, XI * t, find_witnesses=False)
            assert lifted.verified == base

    def test_failing_class(self):
        report = verify_everywhere(E1025, GlobalClass(-41, -5), find_witnesses=False)
        assert not report.verified
        assert report.failing is not None
        assert report.failing.place == Place.finite(2)


@pytest.fixture(scope="module")
def classification():
    return classify_sha_lifts(E1025, find_witnesses=False)


class TestClassification:
    def test_three_cosets_one_verified(self, classification):
        assert len(classification.cosets) == 3
        assert len(classification.verified_cosets) == 1

    def test_verified_coset_contents(self, classification):
        (winner,) = classification.verified_cosets
        got = {c.as_tuple() for c in winner.verified_lifts}
        assert got == {(1, 5), (41, 1), (-5, -5), (-205, -1)}

    def test_refuted_cosets_fail_at_two(self, classification):
        for verdict in classification.cosets:
            if verdict.verified:
                continue
            for report in verdict.reports:
                assert not report.verified
                assert report.failing.place == Place.finite(2)


class TestCertificate:
    def test_l_value_evidence(self):
        approx = l_value_approx(E1025, terms=2000)
        assert abs(approx.value) > 0.05
        assert approx.stability < 1e-3
        assert approx.conductor == 1025

    def test_witness_classes(self):
        sel, witnesses = nondivisible_witness_classes(E1025)
        assert sel.dimension == 4
        assert GlobalClass(1, 5) in witnesses

    def test_certify_1025b2(self):
        cert = certify_nondivisibility(E1025)
        assert isinstance(cert, NondivisibilityCertificate)
        assert cert.verified
        assert cert.analytic_rank_zero_evidence

    def test_no_witness_for_trivial_sha(self):
        with pytest.raises(NoWitnessClass):
            certify_nondivisibility(CurveE2.from_ab(1, 2))
