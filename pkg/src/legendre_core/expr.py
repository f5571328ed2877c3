"""
Legendre Lab Core Library - Expression Module

Closed-form test functions on (-1, 1): a small AST, a recursive-descent
parser for the input syntax, text rendering, symbolic differentiation and
vectorized evaluation.

Syntax:
    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := '-' factor | base ('^' exponent)?
    base     := number | 'x' | '(' expr ')' | 'ln' '(' expr ')'
    exponent := integer | '(' ['-'] number ['/' number] ')'

ln(...) and non-integer powers only accept affine arguments c0 + c1*x.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .polynomial import Polynomial
from .utils import get_logger, EvaluationError, ParseError

logger = get_logger("expr")

Number = Union[int, Fraction]


class Expr:
    """Base class of expression nodes; supports arithmetic operators"""

    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __sub__(self, other):
        return sub(self, _lift(other))

    def __rsub__(self, other):
        return sub(_lift(other), self)

    def __mul__(self, other):
        return mul(self, _lift(other))

    def __rmul__(self, other):
        return mul(_lift(other), self)

    def __truediv__(self, other):
        return div(self, _lift(other))

    def __rtruediv__(self, other):
        return div(_lift(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent: int):
        return power(self, exponent)

    def __str__(self) -> str:
        return to_text(self)

    def evaluate(self, x):
        return evaluate(self, x)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Add(Expr):
    terms: Tuple[Expr, ...]


@dataclass(frozen=True)
class Mul(Expr):
    factors: Tuple[Expr, ...]


@dataclass(frozen=True)
class Div(Expr):
    num: Expr
    den: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class AffinePow(Expr):
    """(c0 + c1 x)^q with q not an integer"""

    c0: Fraction
    c1: Fraction
    exponent: Fraction


@dataclass(frozen=True)
class Log(Expr):
    """ln(c0 + c1 x)"""

    c0: Fraction
    c1: Fraction


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))
X = Var()


def _lift(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Const(Fraction(value))
    return NotImplemented


# Smart constructors


def add(*terms: Expr) -> Expr:
    """Flattened sum with constants folded into the first constant's slot"""
    flat: List[Expr] = []
    for term in terms:
        if isinstance(term, Add):
            flat.extend(term.terms)
        else:
            flat.append(term)

    total = Fraction(0)
    const_slot: Optional[int] = None
    kept: List[Expr] = []
    for term in flat:
        if isinstance(term, Const):
            total += term.value
            if const_slot is None:
                const_slot = len(kept)
                kept.append(term)
        else:
            kept.append(term)

    if const_slot is not None:
        if total == 0:
            kept.pop(const_slot)
        else:
            kept[const_slot] = Const(total)

    if not kept:
        return ZERO
    if len(kept) == 1:
        return kept[0]
    return Add(tuple(kept))


def mul(*factors: Expr) -> Expr:
    """Flattened product with one leading constant"""
    flat: List[Expr] = []
    for factor in factors:
        if isinstance(factor, Mul):
            flat.extend(factor.factors)
        else:
            flat.append(factor)

    coefficient = Fraction(1)
    kept: List[Expr] = []
    for factor in flat:
        if isinstance(factor, Const):
            coefficient *= factor.value
        else:
            kept.append(factor)

    if coefficient == 0:
        return ZERO
    if not kept:
        return Const(coefficient)
    if coefficient != 1:
        kept.insert(0, Const(coefficient))
    if len(kept) == 1:
        return kept[0]
    return Mul(tuple(kept))


def neg(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(-e.value)
    if isinstance(e, Div):
        return Div(neg(e.num), e.den)
    if isinstance(e, Mul) and isinstance(e.factors[0], Const):
        return mul(Const(-e.factors[0].value), *e.factors[1:])
    if isinstance(e, Add):
        return add(*(neg(t) for t in e.terms))
    return mul(Const(Fraction(-1)), e)


def sub(a: Expr, b: Expr) -> Expr:
    return add(a, neg(b))


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(b, Const):
        if b.value == 0:
            raise EvaluationError(b, "division by zero")
        if isinstance(a, Const):
            return Const(a.value / b.value)
        return mul(Const(1 / b.value), a)
    if isinstance(a, Const) and a.value == 0:
        return ZERO
    return Div(a, b)


def power(base: Expr, exponent: int) -> Expr:
    exponent = int(exponent)
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Const):
        if base.value == 0 and exponent < 0:
            raise EvaluationError(base, "division by zero")
        return Const(base.value**exponent)
    if isinstance(base, Pow):
        return power(base.base, base.exponent * exponent)
    if isinstance(base, AffinePow):
        return affine_power(base.c0, base.c1, base.exponent * exponent)
    return Pow(base, exponent)


def affine_expr(c0: Number, c1: Number) -> Expr:
    """c0 + c1*x as an ordinary sum"""
    return add(Const(Fraction(c0)), mul(Const(Fraction(c1)), X))


def affine_power(c0: Number, c1: Number, exponent: Number) -> Expr:
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        return power(affine_expr(c0, c1), int(exponent))
    return AffinePow(Fraction(c0), Fraction(c1), exponent)


def log(c0: Number, c1: Number) -> Expr:
    return Log(Fraction(c0), Fraction(c1))


def poly_expr(poly: Union[Polynomial, Sequence[Number]]) -> Expr:
    """Descending-order sum of monomials"""
    coeffs = poly.coeffs if isinstance(poly, Polynomial) else Polynomial(tuple(poly)).coeffs
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c != 0:
            terms.append(mul(Const(c), power(X, k)))
    return add(*terms) if terms else ZERO


# Tokenizer and parser


@dataclass(frozen=True)
class Token:
    kind: str  # number | x | ln | op | end
    text: str
    position: int
    value: Optional[Fraction] = None


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < len(text) and text[i + 1].isdigit()):
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            if i < len(text) and text[i] == ".":
                i += 1
                while i < len(text) and text[i].isdigit():
                    i += 1
            literal = text[start:i]
            tokens.append(Token("number", literal, start, Fraction(literal)))
            continue
        if text.startswith("ln", i):
            tokens.append(Token("ln", "ln", i))
            i += 2
            continue
        if c == "x":
            tokens.append(Token("x", "x", i))
            i += 1
            continue
        if c in "+-*/^()":
            tokens.append(Token("op", c, i))
            i += 1
            continue
        raise ParseError(i, f"unexpected character {c!r}", text)
    tokens.append(Token("end", "", len(text)))
    return tokens


class Parser:
    """Recursive-descent parser producing Expr trees"""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    def error(self, position: int, message: str) -> ParseError:
        limit = max(len(self.text) - 1, 0)
        return ParseError(min(position, limit), message, self.text)

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def accept(self, text: str) -> bool:
        token = self.current
        if token.kind == "op" and token.text == text:
            self.index += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            token = self.current
            found = token.text or "end of input"
            raise self.error(token.position, f"expected {text!r}, found {found!r}")

    def parse(self) -> Expr:
        if self.current.kind == "end":
            raise self.error(0, "empty expression")
        result = self.expression()
        token = self.current
        if token.kind != "end":
            raise self.error(token.position, f"unexpected {token.text!r}")
        return result

    def expression(self) -> Expr:
        result = self.term()
        while True:
            if self.accept("+"):
                result = add(result, self.term())
            elif self.accept("-"):
                result = sub(result, self.term())
            else:
                return result

    def term(self) -> Expr:
        result = self.factor()
        while True:
            if self.accept("*"):
                result = mul(result, self.factor())
            elif self.accept("/"):
                token = self.current
                divisor = self.factor()
                if isinstance(divisor, Const) and divisor.value == 0:
                    raise self.error(token.position, "division by zero")
                result = div(result, divisor)
            else:
                return result

    def factor(self) -> Expr:
        if self.accept("-"):
            return neg(self.factor())
        if self.accept("+"):
            return self.factor()

        start = self.current.position
        base = self.base()
        if not self.accept("^"):
            return base

        exponent = self.exponent()
        if exponent.denominator == 1:
            if isinstance(base, Const) and base.value == 0 and exponent < 0:
                raise self.error(start, "division by zero")
            return power(base, int(exponent))

        affine = affine_coefficients(base)
        if affine is None:
            raise self.error(start, "non-integer power of a non-affine expression")
        return affine_power(affine[0], affine[1], exponent)

    def base(self) -> Expr:
        token = self.current
        if token.kind == "number":
            self.index += 1
            return Const(token.value)
        if token.kind == "x":
            self.index += 1
            return X
        if token.kind == "ln":
            self.index += 1
            self.expect("(")
            argument_start = self.current.position
            argument = self.expression()
            self.expect(")")
            affine = affine_coefficients(argument)
            if affine is None:
                raise self.error(argument_start, "logarithm of a non-affine expression")
            return log(affine[0], affine[1])
        if self.accept("("):
            inner = self.expression()
            self.expect(")")
            return inner
        found = token.text or "end of input"
        raise self.error(token.position, f"expected a number, 'x', 'ln' or '(', found {found!r}")

    def exponent(self) -> Fraction:
        token = self.current
        if token.kind == "number":
            self.index += 1
            if token.value.denominator != 1:
                raise self.error(token.position, "bare exponents must be integers")
            return token.value
        if self.accept("("):
            sign = -1 if self.accept("-") else 1
            numerator = self.current
            if numerator.kind != "number":
                raise self.error(numerator.position, "expected a rational exponent")
            self.index += 1
            value = numerator.value
            if self.accept("/"):
                denominator = self.current
                if denominator.kind != "number":
                    raise self.error(denominator.position, "expected a denominator")
                if denominator.value == 0:
                    raise self.error(denominator.position, "zero denominator in exponent")
                self.index += 1
                value = value / denominator.value
            self.expect(")")
            return sign * value
        raise self.error(token.position, "expected an exponent")


def parse(text: str) -> Expr:
    """Parse the expression syntax into an Expr; raises ParseError"""
    return Parser(text).parse()


def affine_coefficients(e: Expr) -> Optional[Tuple[Fraction, Fraction]]:
    """(c0, c1) when e is structurally a polynomial of degree at most one"""
    poly = _structural_polynomial(e)
    if poly is None or poly.degree > 1:
        return None
    return poly.coefficient(0), poly.coefficient(1)


def _structural_polynomial(e: Expr) -> Optional[Polynomial]:
    if isinstance(e, Const):
        return Polynomial.constant(e.value)
    if isinstance(e, Var):
        return Polynomial.x()
    if isinstance(e, Add):
        total = Polynomial()
        for t in e.terms:
            p = _structural_polynomial(t)
            if p is None:
                return None
            total = total + p
        return total
    if isinstance(e, Mul):
        product = Polynomial.constant(1)
        for f in e.factors:
            p = _structural_polynomial(f)
            if p is None:
                return None
            product = product * p
        return product
    if isinstance(e, Pow) and e.exponent >= 0:
        p = _structural_polynomial(e.base)
        return None if p is None else p**e.exponent
    return None


# Text rendering


def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _is_negative(e: Expr) -> bool:
    if isinstance(e, Const):
        return e.value < 0
    if isinstance(e, Mul):
        return isinstance(e.factors[0], Const) and e.factors[0].value < 0
    if isinstance(e, Div):
        return _is_negative(e.num)
    return False


def to_text(e: Expr) -> str:
    """Render in the input syntax; parse(to_text(e)) rebuilds e"""
    if isinstance(e, Const):
        return _format_rational(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Add):
        parts = [to_text(e.terms[0])]
        for term in e.terms[1:]:
            if _is_negative(term):
                parts.append(f" - {to_text(neg(term))}")
            else:
                parts.append(f" + {to_text(term)}")
        return "".join(parts)
    if isinstance(e, Mul):
        factors = list(e.factors)
        prefix = ""
        if isinstance(factors[0], Const):
            value = factors.pop(0).value
            # a bare minus before a sum or quotient would be distributed on reparse
            if value == -1 and not isinstance(factors[0], (Add, Div)):
                prefix = "-"
            elif value == -1:
                prefix = "-1*"
            else:
                prefix = _format_rational(value) + "*"
        return prefix + "*".join(_factor_text(f) for f in factors)
    if isinstance(e, Div):
        num = to_text(e.num)
        if isinstance(e.num, Add):
            num = f"({num})"
        den = to_text(e.den)
        if isinstance(e.den, (Add, Mul, Div)) or (isinstance(e.den, Const) and e.den.value < 0):
            den = f"({den})"
        return f"{num}/{den}"
    if isinstance(e, Pow):
        base = to_text(e.base)
        if not isinstance(e.base, (Var, Log)):
            base = f"({base})"
        if e.exponent < 0:
            return f"{base}^({e.exponent})"
        return f"{base}^{e.exponent}"
    if isinstance(e, AffinePow):
        inner = affine_expr(e.c0, e.c1)
        base = to_text(inner)
        if not isinstance(inner, Var):
            base = f"({base})"
        return f"{base}^({_format_rational(e.exponent)})"
    if isinstance(e, Log):
        return f"ln({to_text(affine_expr(e.c0, e.c1))})"
    raise TypeError(f"Unknown expression node {e!r}")


def _factor_text(e: Expr) -> str:
    text = to_text(e)
    if isinstance(e, (Add, Div)) or _is_negative(e):
        return f"({text})"
    return text


# Evaluation


def evaluate(e: Expr, x):
    """
    Evaluate e at a point or array of points.

    Raises:
        EvaluationError: log of a non-positive value, division by zero, or a
            negative base under a non-integer power
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        value = _evaluate(e, x)
    value = np.broadcast_to(value, x.shape)
    if x.ndim == 0:
        return float(value)
    return np.array(value, dtype=float)


def _evaluate(e: Expr, x: np.ndarray):
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Var):
        return x
    if isinstance(e, Add):
        total = _evaluate(e.terms[0], x)
        for t in e.terms[1:]:
            total = total + _evaluate(t, x)
        return total
    if isinstance(e, Mul):
        product = _evaluate(e.factors[0], x)
        for f in e.factors[1:]:
            product = product * _evaluate(f, x)
        return product
    if isinstance(e, Div):
        den = _evaluate(e.den, x)
        if np.any(np.asarray(den) == 0):
            raise EvaluationError(e.den, "division by zero")
        return _evaluate(e.num, x) / den
    if isinstance(e, Pow):
        base = _evaluate(e.base, x)
        if e.exponent < 0:
            if np.any(np.asarray(base) == 0):
                raise EvaluationError(e.base, "division by zero")
            return 1.0 / np.asarray(base, dtype=float) ** (-e.exponent)
        return np.asarray(base, dtype=float) ** e.exponent
    if isinstance(e, AffinePow):
        base = float(e.c0) + float(e.c1) * x
        if np.any(base < 0):
            raise EvaluationError(e, "negative base under a non-integer power")
        if e.exponent < 0 and np.any(base == 0):
            raise EvaluationError(e, "division by zero")
        return base ** float(e.exponent)
    if isinstance(e, Log):
        argument = float(e.c0) + float(e.c1) * x
        if np.any(argument <= 0):
            raise EvaluationError(e, "logarithm of a non-positive value")
        return np.log(argument)
    raise TypeError(f"Unknown expression node {e!r}")


# Calculus


def structural_derivative(e: Expr) -> Expr:
    """Derivative by the usual rules, without normalization"""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Add):
        return add(*(structural_derivative(t) for t in e.terms))
    if isinstance(e, Mul):
        terms = []
        for i, f in enumerate(e.factors):
            d = structural_derivative(f)
            if d == ZERO:
                continue
            terms.append(mul(*e.factors[:i], d, *e.factors[i + 1 :]))
        return add(*terms)
    if isinstance(e, Div):
        dn = structural_derivative(e.num)
        dd = structural_derivative(e.den)
        return div(sub(mul(dn, e.den), mul(e.num, dd)), power(e.den, 2))
    if isinstance(e, Pow):
        return mul(Const(Fraction(e.exponent)), power(e.base, e.exponent - 1), structural_derivative(e.base))
    if isinstance(e, AffinePow):
        return mul(Const(e.exponent * e.c1), affine_power(e.c0, e.c1, e.exponent - 1))
    if isinstance(e, Log):
        if e.c1 == 0:
            return ZERO
        return div(Const(e.c1), affine_expr(e.c0, e.c1))
    raise TypeError(f"Unknown expression node {e!r}")


def differentiate(e: Expr) -> Expr:
    """Exact derivative, normalized when the expression has a normal form"""
    from .normal import to_normal, from_normal

    form = to_normal(e)
    if form is None:
        logger.debug(f"No normal form for {to_text(e)}; using structural rules")
        return structural_derivative(e)
    return from_normal(form.derivative())


def derivative_ladder(e: Expr, order: int) -> List[Expr]:
    """[e, e', ..., e^(order)], each normalized when possible"""
    from .normal import to_normal, from_normal

    form = to_normal(e)
    if form is None:
        ladder = [e]
        for _ in range(order):
            ladder.append(structural_derivative(ladder[-1]))
        return ladder

    ladder = [from_normal(form)]
    for _ in range(order):
        form = form.derivative()
        ladder.append(from_normal(form))
    return ladder


def normalize(e: Expr) -> Expr:
    """Canonical factored form; expressions without one are returned as is"""
    from .normal import to_normal, from_normal

    form = to_normal(e)
    return e if form is None else from_normal(form)


def as_polynomial(e: Expr) -> Optional[Tuple[Fraction, ...]]:
    """Exact ascending coefficients when e simplifies to a polynomial, else None"""
    from .normal import to_normal

    form = to_normal(e)
    if form is None:
        return None
    poly = form.as_polynomial()
    if poly is None:
        return None
    return poly.coeffs if poly.coeffs else (Fraction(0),)
