"""
Legendre Lab Core Library - Normal Form Module

Canonical form for the expression class: a finite sum of groups
R(x) * prod (c0 + c1 x)^e * prod ln(c0 + c1 x)^m with R an exact rational
function, 0 < e < 1 and m a nonzero integer. The class is closed under
differentiation, so derivative ladders stay exact.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .polynomial import Polynomial, RationalFunction
from . import expr as E

Affine = Tuple[Fraction, Fraction]


def _affine_polynomial(base: Affine) -> Polynomial:
    return Polynomial.linear(base[0], base[1])


@dataclass(frozen=True, order=True)
class Signature:
    """Transcendental factors of a group"""

    powers: Tuple[Tuple[Affine, Fraction], ...] = ()
    logs: Tuple[Tuple[Affine, int], ...] = ()

    def is_empty(self) -> bool:
        return not self.powers and not self.logs


EMPTY = Signature()


def _signature(powers: Dict[Affine, Fraction], logs: Dict[Affine, int]) -> Signature:
    return Signature(
        tuple(sorted((b, e) for b, e in powers.items() if e != 0)),
        tuple(sorted((b, m) for b, m in logs.items() if m != 0)),
    )


def _multiply_signatures(a: Signature, b: Signature) -> Tuple[Signature, RationalFunction]:
    """Product of two signatures and the rational factor split off the powers"""
    powers = dict(a.powers)
    factor = RationalFunction.constant(1)
    for base, e in b.powers:
        total = powers.get(base, Fraction(0)) + e
        if total >= 1:
            total -= 1
            factor = factor * _affine_polynomial(base)
        powers[base] = total
    logs = dict(a.logs)
    for base, m in b.logs:
        logs[base] = logs.get(base, 0) + m
    return _signature(powers, logs), factor


class NormalForm:
    """Sum of groups keyed by signature"""

    def __init__(self, groups: Optional[Dict[Signature, RationalFunction]] = None):
        self.groups: Dict[Signature, RationalFunction] = {
            s: r for s, r in (groups or {}).items() if not r.is_zero()
        }

    @classmethod
    def constant(cls, value) -> "NormalForm":
        return cls({EMPTY: RationalFunction.constant(value)})

    @classmethod
    def rational(cls, r: RationalFunction) -> "NormalForm":
        return cls({EMPTY: r})

    @classmethod
    def polynomial(cls, p: Polynomial) -> "NormalForm":
        return cls({EMPTY: RationalFunction(p)})

    @classmethod
    def affine_power(cls, base: Affine, exponent: Fraction) -> "NormalForm":
        whole = exponent.numerator // exponent.denominator
        fractional = exponent - whole
        poly = _affine_polynomial(base)
        if whole >= 0:
            r = RationalFunction(poly**whole)
        else:
            r = RationalFunction(Polynomial.constant(1), poly ** (-whole))
        signature = _signature({base: fractional}, {})
        return cls({signature: r})

    @classmethod
    def log(cls, base: Affine) -> "NormalForm":
        return cls({_signature({}, {base: 1}): RationalFunction.constant(1)})

    def items(self) -> List[Tuple[Signature, RationalFunction]]:
        return sorted(self.groups.items(), key=lambda item: item[0])

    def is_zero(self) -> bool:
        return not self.groups

    def __add__(self, other: "NormalForm") -> "NormalForm":
        groups = dict(self.groups)
        for s, r in other.groups.items():
            groups[s] = groups[s] + r if s in groups else r
        return NormalForm(groups)

    def __neg__(self) -> "NormalForm":
        return NormalForm({s: -r for s, r in self.groups.items()})

    def __sub__(self, other: "NormalForm") -> "NormalForm":
        return self + (-other)

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        result = NormalForm()
        for sa, ra in self.groups.items():
            for sb, rb in other.groups.items():
                signature, factor = _multiply_signatures(sa, sb)
                result = result + NormalForm({signature: ra * rb * factor})
        return result

    def scale(self, r: RationalFunction) -> "NormalForm":
        return NormalForm({s: v * r for s, v in self.groups.items()})

    def inverse(self) -> Optional["NormalForm"]:
        """Reciprocal of a single group; sums have no inverse in this class"""
        if len(self.groups) != 1:
            return None
        (signature, r), = self.groups.items()
        factor = r.inverse()
        powers = {}
        for base, e in signature.powers:
            powers[base] = 1 - e
            factor = factor / _affine_polynomial(base)
        logs = {base: -m for base, m in signature.logs}
        return NormalForm({_signature(powers, logs): factor})

    def power(self, n: int) -> Optional["NormalForm"]:
        if n < 0:
            inverse = self.inverse()
            return None if inverse is None else inverse.power(-n)
        result = NormalForm.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def derivative(self) -> "NormalForm":
        result = NormalForm()
        for signature, r in self.groups.items():
            result = result + NormalForm({signature: r.derivative()})
            for base, e in signature.powers:
                if base[1] == 0:
                    continue
                term = r * RationalFunction(Polynomial.constant(e * base[1]), _affine_polynomial(base))
                result = result + NormalForm({signature: term})
            for base, m in signature.logs:
                if base[1] == 0:
                    continue
                logs = dict(signature.logs)
                logs[base] = m - 1
                lowered = _signature(dict(signature.powers), logs)
                term = r * RationalFunction(Polynomial.constant(m * base[1]), _affine_polynomial(base))
                result = result + NormalForm({lowered: term})
        return result

    def derivatives(self, order: int) -> List["NormalForm"]:
        ladder = [self]
        for _ in range(order):
            ladder.append(ladder[-1].derivative())
        return ladder

    def as_polynomial(self) -> Optional[Polynomial]:
        if self.is_zero():
            return Polynomial()
        if len(self.groups) != 1 or EMPTY not in self.groups:
            return None
        r = self.groups[EMPTY]
        return r.num if r.is_polynomial() else None

    def __eq__(self, other) -> bool:
        return isinstance(other, NormalForm) and self.groups == other.groups

    def __repr__(self) -> str:
        return f"NormalForm({self.items()!r})"


def to_normal(e: "E.Expr") -> Optional[NormalForm]:
    """Normal form of an expression, or None when a quotient has no inverse"""
    try:
        return _to_normal(e)
    except ZeroDivisionError:
        return None


def _to_normal(e) -> Optional[NormalForm]:
    if isinstance(e, E.Const):
        return NormalForm.constant(e.value)
    if isinstance(e, E.Var):
        return NormalForm.polynomial(Polynomial.x())
    if isinstance(e, E.Add):
        total = NormalForm()
        for t in e.terms:
            part = _to_normal(t)
            if part is None:
                return None
            total = total + part
        return total
    if isinstance(e, E.Mul):
        product = NormalForm.constant(1)
        for f in e.factors:
            part = _to_normal(f)
            if part is None:
                return None
            product = product * part
        return product
    if isinstance(e, E.Div):
        num = _to_normal(e.num)
        den = _to_normal(e.den)
        if num is None or den is None:
            return None
        inverse = den.inverse()
        return None if inverse is None else num * inverse
    if isinstance(e, E.Pow):
        base = _to_normal(e.base)
        return None if base is None else base.power(e.exponent)
    if isinstance(e, E.AffinePow):
        return NormalForm.affine_power((e.c0, e.c1), e.exponent)
    if isinstance(e, E.Log):
        return NormalForm.log((e.c0, e.c1))
    return None


# Rendering


def _default_affine(root: Fraction) -> Tuple["E.Expr", Fraction]:
    """Affine expression vanishing at root and its x-coefficient"""
    if root == 1:
        return E.affine_expr(1, -1), Fraction(-1)
    if root == -1:
        return E.affine_expr(1, 1), Fraction(1)
    if root == 0:
        return E.X, Fraction(1)
    return E.add(E.X, E.Const(-root)), Fraction(1)


def _render_group(signature: Signature, r: RationalFunction) -> "E.Expr":
    if signature.is_empty():
        if r.is_polynomial():
            return E.poly_expr(r.num)

    num, den = r.num, r.den
    keys: Dict[Fraction, Tuple[Affine, Fraction]] = {}
    loose_powers: List[Tuple[Affine, Fraction]] = []
    for base, e in signature.powers:
        c0, c1 = base
        root = -c0 / c1 if c1 != 0 else None
        if root is None or root in keys:
            loose_powers.append((base, e))
        else:
            keys[root] = (base, e)

    candidates = {Fraction(1), Fraction(-1)} | set(keys)
    candidates |= {root for root, _ in den.rational_roots()}

    coefficient = Fraction(1)
    num_factors: List[E.Expr] = []
    den_factors: List[E.Expr] = []
    for root in sorted(candidates):
        num, k_num = num.divide_root(root)
        den, k_den = den.divide_root(root)
        k = k_num - k_den
        if root in keys:
            (c0, c1), e = keys[root]
            coefficient *= c1 ** (-k)
            num_factors.append(E.affine_power(c0, c1, e + k))
            continue
        if k == 0:
            continue
        affine, c1 = _default_affine(root)
        coefficient *= c1 ** (-k)
        if k > 0:
            num_factors.append(E.power(affine, k))
        else:
            den_factors.append(E.power(affine, -k))

    for (c0, c1), e in loose_powers:
        num_factors.append(E.AffinePow(c0, c1, e))

    for (c0, c1), m in signature.logs:
        if m > 0:
            num_factors.append(E.power(E.log(c0, c1), m))
        else:
            den_factors.append(E.power(E.log(c0, c1), -m))

    # den stays monic, so the residual constant lives in the numerator
    numerator = E.mul(E.poly_expr(num.scale(coefficient)), *num_factors)
    if not den.is_constant():
        den_factors.insert(0, E.poly_expr(den))
    if not den_factors:
        return numerator
    return E.div(numerator, E.mul(*den_factors))


def from_normal(form: NormalForm) -> "E.Expr":
    """Expression rendering of a normal form, factored at the key points"""
    if form.is_zero():
        return E.ZERO
    return E.add(*(_render_group(s, r) for s, r in form.items()))
