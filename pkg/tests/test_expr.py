#!/usr/bin/env python3
"""
Expression Tests

Parsing, evaluation, exact differentiation and normalization of the
function syntax.
"""

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from legendre_core import (
    EvaluationError,
    ParseError,
    as_polynomial,
    derivative_ladder,
    differentiate,
    evaluate,
    normalize,
    parse,
    to_text,
)
from legendre_core.classify import CORPUS


def test_parse_and_evaluate():
    assert evaluate(parse("x^2 + 1"), 2.0) == 5.0
    assert evaluate(parse("-x^2"), 3.0) == -9.0
    assert abs(evaluate(parse("(1-x)^(3/2)"), 0.75) - 0.125) < 1e-15
    assert abs(evaluate(parse("ln(1+x)"), 0.0)) < 1e-15
    assert abs(evaluate(parse("1/(1-x^2)^2"), 0.5) - 16.0 / 9.0) < 1e-14
    values = evaluate(parse("3/8 + x"), np.array([0.0, 1.0]))
    assert np.allclose(values, [0.375, 1.375])
    assert evaluate(parse("2.5*x"), 2.0) == 5.0


def test_parse_errors_carry_position():
    cases = {
        "x +": 2,
        "ln(x^2)": 3,
        "(x^2+1)^(1/2)": 0,
        "x * y": 4,
        "x^(1/0)": 5,
    }
    for text, position in cases.items():
        try:
            parse(text)
        except ParseError as e:
            assert e.position == position, (text, e.position)
            assert "^" in e.caret()
        else:
            raise AssertionError(f"{text!r} parsed")
    try:
        parse("")
    except ParseError as e:
        assert e.position == 0
    else:
        raise AssertionError("empty input parsed")


def test_evaluation_domain_errors():
    for text, x in (("ln(1-x)", 1.0), ("ln(1-x)", 2.0), ("(1-x)^(1/2)", 1.5), ("1/x", 0.0)):
        try:
            evaluate(parse(text), x)
        except EvaluationError:
            continue
        raise AssertionError(f"{text} at {x} evaluated")


def test_exact_derivatives():
    d = differentiate(parse("ln(1-x)"))
    assert abs(evaluate(d, 0.5) + 2.0) < 1e-14
    ladder = derivative_ladder(parse("x^4"), 5)
    assert as_polynomial(ladder[4]) == (Fraction(24),)
    assert as_polynomial(ladder[5]) == (Fraction(0),)
    d = differentiate(parse("(1-x)^(3/2)"))
    assert abs(evaluate(d, 0.75) + 0.75) < 1e-14


def test_normalization_cancels():
    assert as_polynomial(parse("(1-x^2)^2")) == (1, 0, -2, 0, 1)
    assert as_polynomial(parse("(x^2-1)/(x-1)")) == (1, 1)
    assert as_polynomial(parse("ln(1-x)")) is None
    assert as_polynomial(parse("(1-x)^(1/2)*(1-x)^(1/2)")) == (1, -1)
    e = normalize(parse("(1-x)*ln(1-x) - ln(1-x)*(1-x)"))
    assert to_text(e) == "0"


def test_print_then_parse_rebuilds_normalized_expressions():
    texts = list(CORPUS) + ["x/(1+x^2)", "-3/8*x^2 + 1/2", "1/(1-x^2)^2", "(2*x+3)^(1/2)", "ln(3+x)*x"]
    expressions = []
    for text in texts:
        e = parse(text)
        expressions += [e, normalize(e), differentiate(e), differentiate(differentiate(e))]
    # negated sum times a log, as the normal form renders -(1-x)*ln(1-x)
    expressions.append(normalize(parse("(x-1)*ln(1-x)")))
    assert len(expressions) >= 50
    for e in expressions:
        text = to_text(e)
        assert parse(text) == e, text


def test_derivatives_match_central_differences():
    texts = list(CORPUS) + ["x^5 - x", "1/(2-x)", "(2*x+3)^(1/2)", "ln(3+x)*x", "x/(1+x^2)"]
    assert len(texts) >= 30
    rng = np.random.default_rng(3)
    points = rng.uniform(-0.9, 0.9, 10)
    h = 1e-5
    for text in texts:
        e = parse(text)
        d = differentiate(e)
        for x in points:
            exact = evaluate(d, x)
            approx = (evaluate(e, x + h) - evaluate(e, x - h)) / (2.0 * h)
            assert abs(exact - approx) <= 1e-6 * max(1.0, abs(exact)), (text, x)


def test_factored_rendering_is_accurate_near_endpoints():
    # (1-x^2) * d/dx ln(1-x) = -(1+x); the cancelled form has no 1/(1-x)
    e = normalize(parse("(1-x^2)") * differentiate(parse("ln(1-x)")))
    x = 1.0 - 2.0**-40
    assert abs(evaluate(e, x) + (1.0 + x)) < 1e-14


def main():
    """Run all tests"""
    tests = [
        test_parse_and_evaluate,
        test_parse_errors_carry_position,
        test_evaluation_domain_errors,
        test_exact_derivatives,
        test_normalization_cancels,
        test_print_then_parse_rebuilds_normalized_expressions,
        test_derivatives_match_central_differences,
        test_factored_rendering_is_accurate_near_endpoints,
    ]
    for test in tests:
        test()
        print(f"  ✓ {test.__name__}")
    print(f"\n{len(tests)} expression tests passed")


if __name__ == "__main__":
    main()
