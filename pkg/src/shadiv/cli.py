"""Command-line front end: runs a verification command, writes a JSON
certificate, and exits 0 (verified/complete), 1 (refuted), 2 (undecided),
or 3 (usage error)."""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from typing import Optional

import sympy

from . import certificates as certs
from .certificates import (
    STATUS_ANALYTIC,
    STATUS_AXIOM,
    STATUS_REFUTED,
    STATUS_VERIFIED,
    step,
)
from .cyclic import (
    KummerFamily,
    genus,
    local_factor_scan,
    obstruction_prime_search,
)
from .descent import CurveE2, GlobalClass, selmer2, sha2_classes
from .divisibility import (
    EverywhereReport,
    classify_sha_lifts,
    certify_nondivisibility,
    search_4div,
)
from .errors import (
    ConductorUnavailable,
    NoWitnessClass,
    PrecisionExhausted,
    ShadivError,
)
from .homspaces import QuarticCover, quartic_els
from .localfields import Place


class UsageError(Exception):
    pass


def _parse_curve(text: str) -> CurveE2:
    try:
        parts = [int(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"curve must be integers: {exc}") from exc
    if len(parts) == 2:
        return CurveE2.from_ab(*parts)
    if len(parts) == 3:
        return CurveE2(*parts)
    raise UsageError('curve must be "a b" or "e1 e2 e3"')


def _parse_quartic(coeffs: Optional[str], factors: Optional[str]) -> QuarticCover:
    if (coeffs is None) == (factors is None):
        raise UsageError("give exactly one of --coeffs or --factors")
    if coeffs is not None:
        try:
            desc = [int(x) for x in coeffs.strip("[] ").replace(",", " ").split()]
        except ValueError as exc:
            raise UsageError(f"coefficients must be integers: {exc}") from exc
        return QuarticCover(tuple(reversed(desc)))
    x = sympy.Symbol("x")
    try:
        expr = sympy.sympify(factors, rational=True)
        polys = sympy.factor_list(expr)  # noqa: F841  (validates input)
        parts = expr.as_ordered_factors()
        if len(parts) != 2:
            raise UsageError("factored form must be a product of two quadratics")
        q1, q2 = (
            tuple(int(c) for c in reversed(sympy.Poly(part, x).all_coeffs()))
            for part in parts
        )
    except sympy.SympifyError as exc:
        raise UsageError(f"cannot parse factored quartic: {exc}") from exc
    return QuarticCover.from_factors(q1, q2)


def _place_ev(v: Place) -> str:
    return "real" if v.is_real else str(v.prime)


def _class_ev(cls: Optional[GlobalClass]):
    return None if cls is None else [cls.d1, cls.d2]


def _frac_ev(x) -> str:
    return str(Fraction(x))


def _report_ev(report: EverywhereReport) -> dict:
    return {
        "xi": _class_ev(report.xi),
        "generators": list(report.generators),
        "bad_places": [
            {"place": _place_ev(c.place), "matched": _class_ev(c.matched)}
            for c in report.bad_checks
        ],
        "patterns": [
            {
                "signs": list(p.signs),
                "xi_signs": list(p.xi_signs),
                "matched": _class_ev(p.matched),
                "witness_prime": p.witness_prime,
            }
            for p in report.patterns
        ],
        "verified": report.verified,
    }


def _selmer_steps(curve: CurveE2, point_bound=None) -> tuple[list[dict], object]:
    kwargs = {} if point_bound is None else {"point_bound": point_bound}
    sel = selmer2(curve, **kwargs)
    steps = [
        step(
            "2-Selmer group computed from local images at all bad places",
            {
                "curve": list(curve.roots),
                "class_generators": list(sel.generators),
                "dimension": sel.dimension,
                "elements": [_class_ev(c) for c in sel.elements],
            },
            STATUS_VERIFIED,
        ),
        step(
            "rational point search image under the connecting map",
            {
                "points_found": len(sel.points),
                "image": [_class_ev(c) for c in sel.point_image],
                "torsion_convention":
                    "delta((e3,0)) = (e3-e1, e3-e2) for the third 2-torsion point",
            },
            STATUS_VERIFIED,
        ),
    ]
    return steps, sel


def build_verify_4div(inputs: dict) -> dict:
    curve = _parse_curve(inputs["curve"])
    terms = int(inputs.get("terms", "4000"))
    conductor = int(inputs["conductor"]) if "conductor" in inputs else None
    steps, _sel = _selmer_steps(curve)
    verdict = "VERIFIED"
    try:
        cert = certify_nondivisibility(
            curve, terms=terms, conductor_hint=conductor
        )
    except NoWitnessClass as exc:
        steps.append(
            step(
                "a Selmer class outside the point image that is everywhere"
                " locally in the E[4]-kernel",
                {"error": "NoWitnessClass", "detail": str(exc)},
                STATUS_REFUTED,
            )
        )
        return certs.make_certificate("verify-4div", inputs, steps, "REFUTED")
    except ConductorUnavailable as exc:
        steps.append(
            step(
                "conductor for the L-value estimate",
                {"error": "ConductorUnavailable", "detail": str(exc)},
                STATUS_ANALYTIC,
            )
        )
        return certs.make_certificate("verify-4div", inputs, steps, "UNDECIDED")
    steps.append(
        step(
            "witness class is in the Selmer group, outside the point image,"
            " and everywhere locally in the E[4]-kernel",
            _report_ev(cert.report),
            STATUS_VERIFIED,
        )
    )
    steps.append(
        step(
            "remaining good places covered by the sign-pattern case analysis",
            {"witness_classes": [_class_ev(c) for c in cert.witness_classes]},
            STATUS_AXIOM,
        )
    )
    steps.append(
        step(
            "analytic rank 0 evidence: L(E,1) estimate nonzero and stable",
            {
                "value": cert.l_value.value,
                "value_half_terms": cert.l_value.value_half_terms,
                "stability": cert.l_value.stability,
                "tail_bound": cert.l_value.tail_bound,
                "conductor": cert.l_value.conductor,
                "terms": cert.l_value.terms,
            },
            STATUS_ANALYTIC,
        )
    )
    if not cert.verified:
        verdict = "UNDECIDED"
    return certs.make_certificate("verify-4div", inputs, steps, verdict)


def build_search_4div(inputs: dict) -> dict:
    amax = int(inputs.get("amax", "300"))
    bmax = int(inputs.get("bmax", "300"))
    hits = search_4div(amax, bmax)
    steps = [
        step(
            "grid scan of y^2 = x(x+a)(x+b), 1 <= a < b, for Selmer classes"
            " outside the point image lying everywhere locally in the"
            " E[4]-kernel (analytic rank not evaluated)",
            {
                "amax": amax,
                "bmax": bmax,
                "hits": [
                    {
                        "a": h.a,
                        "b": h.b,
                        "witness_classes": [_class_ev(c) for c in h.witness_classes],
                    }
                    for h in hits
                ],
            },
            STATUS_VERIFIED,
        )
    ]
    return certs.make_certificate("search-4div", inputs, steps, "VERIFIED")


def build_classify_sha(inputs: dict) -> dict:
    curve = _parse_curve(inputs["curve"])
    steps, _sel = _selmer_steps(curve)
    result = classify_sha_lifts(curve)
    steps.append(
        step(
            "quotient of the Selmer group by the point-search image",
            {
                "nontrivial_cosets": [
                    [_class_ev(c) for c in coset]
                    for coset in result.quotient.nontrivial_cosets
                ]
            },
            STATUS_VERIFIED,
        )
    )
    for verdict in result.cosets:
        evidence = {
            "representative": _class_ev(verdict.representative),
            "lifts": [_class_ev(c) for c in verdict.lifts],
            "verified_lifts": [_class_ev(c) for c in verdict.verified_lifts],
            "reports": [_report_ev(r) for r in verdict.reports],
        }
        steps.append(
            step(
                "coset lift test: some torsion lift is everywhere locally"
                " in the E[4]-kernel",
                evidence,
                STATUS_VERIFIED if verdict.verified else STATUS_REFUTED,
            )
        )
    return certs.make_certificate("classify-sha", inputs, steps, "VERIFIED")


def build_selmer(inputs: dict) -> dict:
    curve = _parse_curve(inputs["curve"])
    steps, sel = _selmer_steps(curve)
    quotient = sha2_classes(curve)
    steps.append(
        step(
            "Selmer/point-image quotient (Sha[2] upper bound)",
            {
                "cosets": [
                    [_class_ev(c) for c in coset] for coset in quotient.cosets
                ]
            },
            STATUS_VERIFIED,
        )
    )
    return certs.make_certificate("selmer", inputs, steps, "VERIFIED")


def build_quartic_els(inputs: dict) -> dict:
    cover = _parse_quartic(inputs.get("coeffs"), inputs.get("factors"))
    try:
        report = quartic_els(cover)
    except PrecisionExhausted as exc:
        steps = [
            step(
                "local solvability decision",
                {"error": "PrecisionExhausted", "detail": str(exc)},
                STATUS_AXIOM,
            )
        ]
        return certs.make_certificate("quartic-els", inputs, steps, "UNDECIDED")
    steps = []
    for verdict in report.verdicts:
        evidence = {
            "place": _place_ev(verdict.place),
            "witness": certs.stringify(verdict.witness),
            "reason": verdict.reason,
        }
        steps.append(
            step(
                "local point on y^2 = g(x)",
                evidence,
                STATUS_VERIFIED if verdict.solvable else STATUS_REFUTED,
            )
        )
    steps.append(step("large good primes", report.axiom, STATUS_AXIOM))
    verdict = "VERIFIED" if report.els else "REFUTED"
    return certs.make_certificate("quartic-els", inputs, steps, verdict)


def build_cyclic_verify(inputs: dict) -> dict:
    p, q = int(inputs["p"]), int(inputs["q"])
    bound = int(inputs.get("bound", "1000"))
    try:
        family = KummerFamily(p, q)
    except ValueError as exc:
        steps = [
            step("admissibility q = 1 mod p^2 (mod 8 if p = 2)", str(exc),
                 STATUS_REFUTED)
        ]
        return certs.make_certificate("cyclic-verify", inputs, steps, "REFUTED")
    steps = [
        step(
            "admissible family",
            {"p": p, "q": q, "degree": family.degree, "genus": genus(p)},
            STATUS_VERIFIED,
        ),
        step(
            "irreducibility of x^p - zeta^i q over k: any prime above q"
            " divides zeta^i q exactly once, so it is not a p-th power",
            {"factors": [list(f) for f in family.factor_exponents]},
            STATUS_AXIOM,
        ),
    ]
    scan = local_factor_scan(family, bound)
    steps.append(
        step(
            "certified linear factor of f over every scanned completion",
            {
                "bound": bound,
                "witnesses": [
                    {
                        "place": w.place,
                        "factor": list(w.factor),
                        "root": certs.stringify(w.root),
                        "detail": w.detail,
                    }
                    for w in scan.witnesses
                ],
            },
            STATUS_VERIFIED,
        )
    )
    steps.append(step("all remaining primes", scan.axiom, STATUS_AXIOM))
    return certs.make_certificate("cyclic-verify", inputs, steps, "VERIFIED")


def build_cyclic_search(inputs: dict) -> dict:
    p, q = int(inputs["p"]), int(inputs["q"])
    bound = int(inputs.get("bound", "50"))
    family = KummerFamily(p, q)
    hits = obstruction_prime_search(family, bound)
    steps = []
    for cert in hits:
        steps.append(
            step(
                "obstruction prime: r not a p-th power mod p^2, some"
                " zeta^i q a p-th power at r, zeta not a p-th power at r",
                {
                    "r": cert.r,
                    "condition_a": cert.condition_a,
                    "condition_b_index": cert.condition_b_index,
                    "condition_c": cert.condition_c,
                    "conclusion": cert.conclusion,
                },
                STATUS_VERIFIED,
            )
        )
    steps.append(
        step(
            "norm-obstruction deduction for each r above",
            "r splits in the extension cut out by x^p - zeta^i q and is inert"
            " in the one cut out by x^p - zeta, while every norm from L is a"
            " p-th power mod p^2 at such r",
            STATUS_AXIOM,
        )
    )
    verdict = "VERIFIED" if hits else "UNDECIDED"
    return certs.make_certificate("cyclic-search-c", inputs, steps, verdict)


BUILDERS = {
    "verify-4div": build_verify_4div,
    "search-4div": build_search_4div,
    "classify-sha": build_classify_sha,
    "selmer": build_selmer,
    "quartic-els": build_quartic_els,
    "cyclic-verify": build_cyclic_verify,
    "cyclic-search-c": build_cyclic_search,
}


def execute(command: str, inputs: dict) -> dict:
    if command not in BUILDERS:
        raise UsageError(f"unknown command {command!r}")
    return BUILDERS[command](inputs)


_EXIT_BY_VERDICT = {"VERIFIED": 0, "REFUTED": 1, "UNDECIDED": 2}


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shadiv",
        description="Certified search and verification of non-divisible"
        " Tate-Shafarevich elements",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", help="write the JSON certificate to this path")

    p = sub.add_parser("verify-4div", help="certify Sha(E) not inside 4H^1(E)")
    p.add_argument("--curve", required=True, help='"a b" or "e1 e2 e3"')
    p.add_argument("--terms", type=int, default=4000)
    p.add_argument("--conductor", type=int)
    add_out(p)

    p = sub.add_parser("search-4div", help="grid search for witness curves")
    p.add_argument("--amax", type=int, default=300)
    p.add_argument("--bmax", type=int, default=300)
    add_out(p)

    p = sub.add_parser("classify-sha", help="classify torsion lifts per Sha coset")
    p.add_argument("--curve", required=True)
    add_out(p)

    p = sub.add_parser("selmer", help="2-Selmer group and Sha[2] quotient")
    p.add_argument("--curve", required=True)
    add_out(p)

    p = sub.add_parser("quartic-els", help="everywhere-local solvability of y^2 = g(x)")
    p.add_argument("--coeffs", help='descending coefficients "[a4,a3,a2,a1,a0]"')
    p.add_argument("--factors", help='factored form "(q1)*(q2)"')
    add_out(p)

    p = sub.add_parser("cyclic", help="cyclic cover commands")
    cyc = p.add_subparsers(dest="cyclic_command", required=True)
    for name in ("verify", "search-c"):
        cp = cyc.add_parser(name)
        cp.add_argument("--p", type=int, required=True)
        cp.add_argument("--q", type=int, required=True)
        cp.add_argument("--bound", type=int, default=1000 if name == "verify" else 50)
        add_out(cp)

    p = sub.add_parser("replay", help="re-run a certificate and compare")
    p.add_argument("path")
    return parser


def _inputs_from_args(args) -> tuple[str, dict]:
    command = args.command
    if command == "cyclic":
        command = f"cyclic-{args.cyclic_command}"
        inputs = {"p": str(args.p), "q": str(args.q), "bound": str(args.bound)}
    elif command == "verify-4div":
        inputs = {"curve": args.curve, "terms": str(args.terms)}
        if args.conductor is not None:
            inputs["conductor"] = str(args.conductor)
    elif command == "search-4div":
        inputs = {"amax": str(args.amax), "bmax": str(args.bmax)}
    elif command in ("classify-sha", "selmer"):
        inputs = {"curve": args.curve}
    elif command == "quartic-els":
        inputs = {}
        if args.coeffs is not None:
            inputs["coeffs"] = args.coeffs
        if args.factors is not None:
            inputs["factors"] = args.factors
    else:
        inputs = {}
    return command, inputs


def main(argv=None) -> int:
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 3 if exc.code not in (0, None) else 0
    if args.command == "replay":
        try:
            ok = certs.replay(args.path, execute)
        except (ShadivError, OSError, UsageError) as exc:
            print(f"replay failed: {exc}", file=sys.stderr)
            return 3
        print("replay: certificate reproduces" if ok else "replay: MISMATCH")
        return 0 if ok else 1
    command, inputs = _inputs_from_args(args)
    start = time.perf_counter()
    try:
        cert = execute(command, inputs)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3
    except ShadivError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    cert["timing"] = repr(time.perf_counter() - start)
    text = certs.to_json(cert)
    if getattr(args, "out", None):
        certs.save(cert, args.out)
        print(f"{cert['verdict']} (certificate written to {args.out})")
    else:
        print(text)
    return _EXIT_BY_VERDICT[cert["verdict"]]


if __name__ == "__main__":
    sys.exit(main())
