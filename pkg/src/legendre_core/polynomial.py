"""
Legendre Lab Core Library - Polynomial Module

Exact-rational polynomials and rational functions in x, plus the Legendre
polynomials built by their three-term recurrence.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

Number = Union[int, Fraction]

# Largest integer whose divisors the rational-root search will enumerate
DIVISOR_LIMIT = 10**10


def _trim(coeffs: Iterable[Number]) -> Tuple[Fraction, ...]:
    values = [Fraction(c) for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with exact rational coefficients, lowest degree first"""

    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def constant(cls, value: Number) -> "Polynomial":
        return cls((value,))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def linear(cls, c0: Number, c1: Number) -> "Polynomial":
        """c0 + c1*x"""
        return cls((c0, c1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    # Arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        size = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            tuple(self.coefficient(k) + other.coefficient(k) for k in range(size))
        )

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("Polynomial powers must be non-negative")
        result = Polynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, factor: Number) -> "Polynomial":
        factor = Fraction(factor)
        return Polynomial(tuple(c * factor for c in self.coeffs))

    def __divmod__(self, other: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        remainder = list(self.coeffs)
        quotient = [Fraction(0)] * max(len(self.coeffs) - len(other.coeffs) + 1, 0)
        lead = other.leading
        d = other.degree
        for k in range(len(quotient) - 1, -1, -1):
            factor = remainder[k + d] / lead
            quotient[k] = factor
            if factor:
                for i, c in enumerate(other.coeffs):
                    remainder[k + i] -= factor * c
        return Polynomial(tuple(quotient)), Polynomial(tuple(remainder[:d]))

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    # Calculus

    def derivative(self, k: int = 1) -> "Polynomial":
        coeffs = self.coeffs
        for _ in range(k):
            coeffs = tuple(i * c for i, c in enumerate(coeffs))[1:]
        return Polynomial(coeffs)

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """self(inner(x)) by Horner's scheme"""
        result = Polynomial()
        for c in reversed(self.coeffs):
            result = result * inner + c
        return result

    def shift(self, a: Number, b: Number) -> "Polynomial":
        """self(a + b*x)"""
        return self.compose(Polynomial.linear(a, b))

    # Evaluation

    def __call__(self, x: Number) -> Fraction:
        """Exact evaluation at a rational point"""
        result = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def evaluate(self, x):
        """Floating evaluation at a point or array"""
        if self.is_zero():
            return np.zeros_like(np.asarray(x, dtype=float))
        return np.polynomial.polynomial.polyval(
            np.asarray(x, dtype=float), [float(c) for c in self.coeffs]
        )

    # Algebra

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading)

    def content_integer(self) -> "Polynomial":
        """Scale to integer coefficients with gcd 1 and positive leading term"""
        if self.is_zero():
            return self
        lcm = 1
        for c in self.coeffs:
            lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in self.coeffs]
        g = 0
        for v in ints:
            g = _gcd(g, abs(v))
        sign = 1 if ints[-1] > 0 else -1
        return Polynomial(tuple(Fraction(sign * v, g) for v in ints))

    def divide_root(self, r: Number) -> Tuple["Polynomial", int]:
        """Strip every factor (x - r); return the quotient and the multiplicity"""
        poly = self
        multiplicity = 0
        if poly.is_zero():
            return poly, 0
        linear = Polynomial.linear(-Fraction(r), 1)
        while poly.degree >= 1 and poly(r) == 0:
            poly = divmod(poly, linear)[0]
            multiplicity += 1
        return poly, multiplicity

    def rational_roots(self) -> List[Tuple[Fraction, int]]:
        """
        Rational roots with multiplicity, ascending.

        Uses the rational root theorem on the integer-content form. Divisors
        are only enumerated for coefficients up to DIVISOR_LIMIT, so very
        large coefficients may hide some roots.
        """
        if self.degree < 1:
            return []

        roots: List[Tuple[Fraction, int]] = []
        poly, zero_mult = self.divide_root(0)
        if zero_mult:
            roots.append((Fraction(0), zero_mult))

        if poly.degree >= 1:
            ints = poly.content_integer()
            a0 = abs(int(ints.coeffs[0]))
            an = abs(int(ints.coeffs[-1]))
            if a0 <= DIVISOR_LIMIT and an <= DIVISOR_LIMIT:
                candidates = set()
                for p in _divisors(a0):
                    for q in _divisors(an):
                        candidates.add(Fraction(p, q))
                        candidates.add(Fraction(-p, q))
                for r in sorted(candidates):
                    if poly.degree < 1:
                        break
                    poly, mult = poly.divide_root(r)
                    if mult:
                        roots.append((r, mult))

        return sorted(roots)

    def __str__(self) -> str:
        return format_polynomial(self.coeffs)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n: int) -> List[int]:
    if n == 0:
        return [1]
    small = []
    large = []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def polynomial_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor by Euclid's algorithm"""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else Polynomial.constant(1)


def format_coefficient_term(c: Fraction, k: int) -> str:
    """Text for |c| x^k without sign"""
    magnitude = abs(c)
    if k == 0:
        return _format_fraction(magnitude)
    power = "x" if k == 1 else f"x^{k}"
    if magnitude == 1:
        return power
    return f"{_format_fraction(magnitude)}*{power}"


def format_polynomial(coeffs: Sequence[Fraction]) -> str:
    """Descending-order text, e.g. 'x^2 - 1' or '3/2*x^2 - 1/2'"""
    terms = [(k, Fraction(c)) for k, c in enumerate(coeffs) if c != 0]
    if not terms:
        return "0"
    parts = []
    for index, (k, c) in enumerate(reversed(terms)):
        text = format_coefficient_term(c, k)
        if index == 0:
            parts.append(f"-{text}" if c < 0 else text)
        else:
            parts.append(f" - {text}" if c < 0 else f" + {text}")
    return "".join(parts)


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@lru_cache(maxsize=None)
def legendre_polynomial(n: int) -> Polynomial:
    """P_n from (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}"""
    if n < 0:
        raise ValueError("Legendre degree must be non-negative")
    previous = Polynomial.constant(1)
    if n == 0:
        return previous
    current = Polynomial.x()
    x = Polynomial.x()
    for k in range(1, n):
        following = (x * current).scale(Fraction(2 * k + 1, k + 1)) - previous.scale(
            Fraction(k, k + 1)
        )
        previous, current = current, following
    return current


ONE_MINUS_X2 = Polynomial((1, 0, -1))


@dataclass(frozen=True)
class RationalFunction:
    """num/den in lowest terms with a monic denominator"""

    num: Polynomial
    den: Polynomial = Polynomial((1,))

    def __post_init__(self):
        num, den = self.num, self.den
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            object.__setattr__(self, "num", Polynomial())
            object.__setattr__(self, "den", Polynomial.constant(1))
            return
        if den.degree >= 1:
            g = polynomial_gcd(num, den)
            if g.degree >= 1:
                num = num // g
                den = den // g
        lead = den.leading
        if lead != 1:
            num = num.scale(1 / lead)
            den = den.scale(1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def constant(cls, value: Number) -> "RationalFunction":
        return cls(Polynomial.constant(value))

    @classmethod
    def of(cls, poly: Polynomial) -> "RationalFunction":
        return cls(poly)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def evaluate(self, x):
        return self.num.evaluate(x) / self.den.evaluate(x)

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"
