#!/usr/bin/env python3
"""
Domain Classifier Tests

Membership verdicts for the maximal domains, the domain of A, the four
descriptions of the domain of A^2, the ELM conditions and the power domains.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from legendre_core import Verdict, classify, classify_corpus, classify_power, parse
from legendre_core.classify import (
    CORPUS,
    DOMAINS,
    agree,
    combine,
    elm_consistency,
    endpoint_slope,
    integrability,
)

MEMBER = Verdict.MEMBER
NON_MEMBER = Verdict.NON_MEMBER


def test_verdict_algebra():
    assert combine([MEMBER, MEMBER]) == MEMBER
    assert combine([MEMBER, Verdict.INCONCLUSIVE]) == Verdict.INCONCLUSIVE
    assert combine([Verdict.INCONCLUSIVE, NON_MEMBER]) == NON_MEMBER
    assert agree([MEMBER, Verdict.INCONCLUSIVE, MEMBER])
    assert not agree([MEMBER, NON_MEMBER])


def test_integrability_evidence():
    assert abs(endpoint_slope(lambda x: (1.0 - x) ** -0.25, 1) + 0.25) < 1e-6
    assert integrability(parse("(1-x)^(-1/4)")).verdict == MEMBER
    assert integrability(parse("(1-x)^(-3/4)")).verdict == NON_MEMBER
    assert integrability(parse("(1+x)^(-1/2)")).verdict == NON_MEMBER
    assert integrability(parse("(1+x)^(-1/2)"), power=1).verdict == MEMBER


def test_polynomial_is_everywhere():
    report = classify(parse("x^3"))
    for domain in DOMAINS:
        assert report.verdict(domain) == MEMBER, (domain, report.reasons[domain])
    assert report.agreement
    assert report.elm.applicable and report.elm.agreement
    assert report.smoothness_ok and report.smoothness


def test_logarithm():
    report = classify(parse("ln(1-x)"))
    assert report.verdict("Delta1max") == MEMBER
    assert report.verdict("D(A)") == NON_MEMBER
    assert report.verdict("Delta2max") == MEMBER
    assert report.verdict("D(S)") == NON_MEMBER
    assert report.verdict("D") == NON_MEMBER
    assert report.agreement
    assert report.elm.applicable and report.elm.agreement
    assert report.elm.conditions["ii"] == NON_MEMBER
    assert "B1" in report.reasons["D(A)"]


def test_singular_power_outside_l2():
    report = classify(parse("(1-x)^(-3/4)"))
    assert report.verdict("Delta1max") == NON_MEMBER
    assert not report.elm.applicable


def test_elm_consistency_matches_full_report():
    for text in ("x^3", "ln(1-x)", "(1-x)^(3/4)", "(1-x)^(-3/4)"):
        f = parse(text)
        direct = elm_consistency(f)
        assert direct.to_dict() == classify(f).elm.to_dict(), text
    assert not elm_consistency(parse("(1-x)^(-3/4)")).applicable


def test_log_companions_between_domains():
    for text in ("ln(1+x)", "(1-x)*ln(1-x)", "(1+x)*ln(1+x)"):
        report = classify(parse(text), text=text)
        assert report.verdict("Delta2max") == MEMBER, text
        assert report.verdict("D(S)") == NON_MEMBER, text
        assert report.agreement, text


def test_corpus_agreement():
    texts = ["1", "x^3", "(1-x)^(5/2)", "ln(1-x)", "(1+x)*ln(1+x)"]
    reports = classify_corpus(texts, jobs=2)
    assert [r.expression for r in reports] == texts
    for report in reports:
        assert report.agreement, report.expression
        assert report.smoothness_ok, report.expression
    assert reports[2].verdict("D(A^2)") == MEMBER
    json.dumps([r.to_dict() for r in reports])


def test_full_corpus_equivalence():
    reports = classify_corpus(CORPUS, jobs=4)
    for report in reports:
        assert report.agreement, (report.expression, report.verdicts)
        assert report.elm is None or report.elm.agreement, report.expression
        assert report.smoothness_ok, report.expression
        if report.verdict("D(S)") == MEMBER:
            assert report.smoothness["f'' in L2"] == MEMBER, report.expression


def test_power_domains():
    for n, text in ((1, "3/2*x^2 - 1/2"), (2, "5/2*x^3 - 3/2*x")):
        report = classify_power(parse(text), n, text=text)
        assert report.verdicts["B"] == MEMBER
        assert report.verdicts["D"] == MEMBER
        assert report.agreement
        assert report.derivative_check == MEMBER
    report = classify_power(parse("ln(1-x)"), 1)
    assert report.verdicts["D"] == NON_MEMBER
    assert report.agreement
    try:
        classify_power(parse("x"), 5)
    except ValueError:
        pass
    else:
        raise AssertionError("power 5 accepted")


def main():
    """Run all tests"""
    tests = [
        test_verdict_algebra,
        test_integrability_evidence,
        test_polynomial_is_everywhere,
        test_logarithm,
        test_singular_power_outside_l2,
        test_elm_consistency_matches_full_report,
        test_log_companions_between_domains,
        test_corpus_agreement,
        test_full_corpus_equivalence,
        test_power_domains,
    ]
    for test in tests:
        test()
        print(f"  ✓ {test.__name__}")
    print(f"\n{len(tests)} classifier tests passed")


if __name__ == "__main__":
    main()
