"""Exact rational functions and their expansion along a direction eps = (x1 t, x2 t)."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import mpmath
from sympy.polys.fields import FracElement

from utils.errors import AlgebraError, ResonantDirectionError

from .symbols import DIRECTION_NAME, Direction, SymbolTable, to_qq

RatFunc = FracElement

_OPS = ("add", "sub", "mul", "div")


def ratfunc_arith(lhs: RatFunc, rhs: RatFunc, op: str) -> RatFunc:
    """Exact field arithmetic; the result is reduced by sympy's gcd cancellation."""
    if op not in _OPS:
        raise AlgebraError(f"unknown operation {op!r}, expected one of {_OPS}")
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if not rhs:
        raise AlgebraError("division by the zero rational function")
    return lhs / rhs


def as_direction(direction: Sequence) -> Direction:
    x1, x2 = (Fraction(x) for x in direction)
    if x1 == 0 and x2 == 0:
        raise AlgebraError("direction (0, 0) is not allowed")
    return (x1, x2)


def substitute_direction(f: RatFunc, table: SymbolTable, direction: Sequence) -> RatFunc:
    """Replace eps1 -> x1*t and eps2 -> x2*t."""
    x1, x2 = as_direction(direction)
    t = table.poly_gen(DIRECTION_NAME)
    replacements = [
        (table.poly_gen("eps1"), t * to_qq(x1)),
        (table.poly_gen("eps2"), t * to_qq(x2)),
    ]
    numer = f.numer.compose(replacements)
    denom = f.denom.compose(replacements)
    if not denom:
        raise ResonantDirectionError((x1, x2))
    return table.field.new(numer, denom)


@dataclass(frozen=True)
class DirectionSeries:
    """Laurent expansion in t: coefficients[i] multiplies t**(valuation + i)."""

    valuation: Optional[int]
    coefficients: Tuple[RatFunc, ...]
    order: int
    direction: Optional[Direction] = None

    @property
    def is_zero(self) -> bool:
        return self.valuation is None

    @property
    def analytic(self) -> bool:
        return self.is_zero or self.valuation >= 0

    def coefficient(self, exponent: int, zero: RatFunc) -> RatFunc:
        if self.is_zero:
            return zero
        index = exponent - self.valuation
        if 0 <= index < len(self.coefficients):
            return self.coefficients[index]
        if exponent > self.order:
            raise AlgebraError(f"t^{exponent} lies beyond the expansion order {self.order}")
        return zero


def _split_by_t(poly, t_index: int) -> Dict[int, object]:
    ring = poly.ring
    buckets: Dict[int, dict] = {}
    for monom, coeff in poly.iterterms():
        degree = monom[t_index]
        rest = list(monom)
        rest[t_index] = 0
        buckets.setdefault(degree, {})[tuple(rest)] = coeff
    return {degree: ring.from_dict(terms) for degree, terms in buckets.items()}


def laurent_at_zero(f: RatFunc, table: SymbolTable, order: int) -> DirectionSeries:
    """Expand a rational function of t (and the non-eps symbols) at t = 0 up to t**order."""
    K = table.field
    if not f:
        return DirectionSeries(None, (), order)

    t_index = table.index(DIRECTION_NAME)
    num_parts = _split_by_t(f.numer, t_index)
    den_parts = _split_by_t(f.denom, t_index)
    v_num, v_den = min(num_parts), min(den_parts)
    valuation = v_num - v_den

    def part(parts, base, k):
        poly = parts.get(base + k)
        return K.zero if poly is None else K.new(poly)

    d0 = part(den_parts, v_den, 0)
    coefficients: List[RatFunc] = []
    for k in range(0, max(order - valuation + 1, 0)):
        acc = part(num_parts, v_num, k)
        for j in range(1, k + 1):
            dj = part(den_parts, v_den, j)
            if dj:
                acc -= dj * coefficients[k - j]
        coefficients.append(acc / d0)
    return DirectionSeries(valuation, tuple(coefficients), order)


def evaluate_numeric(f: RatFunc, table: SymbolTable, point: Mapping[str, object]):
    """Evaluate at an mpmath point keyed by symbol name."""
    names = table.names

    def poly_value(poly):
        total = mpmath.mpf(0)
        for monom, coeff in poly.iterterms():
            term = mpmath.mpf(int(coeff.numerator)) / int(coeff.denominator)
            for index, power in enumerate(monom):
                if power:
                    name = names[index]
                    if name not in point:
                        raise AlgebraError(f"no numeric value assigned to {name}")
                    term *= point[name] ** power
            total += term
        return total

    denominator = poly_value(f.denom)
    if denominator == 0:
        raise AlgebraError("rational function has a pole at the requested point")
    return poly_value(f.numer) / denominator


def _poly_to_json(poly) -> list:
    out = []
    for monom, coeff in poly.terms():
        out.append([f"{int(coeff.numerator)}/{int(coeff.denominator)}", list(monom)])
    return out


def _poly_from_json(ring, data) -> object:
    terms = {}
    for coeff, monom in data:
        terms[tuple(int(e) for e in monom)] = to_qq(Fraction(coeff))
    return ring.from_dict(terms)


def ratfunc_to_json(f: RatFunc) -> dict:
    return {"num": _poly_to_json(f.numer), "den": _poly_to_json(f.denom)}


def ratfunc_from_json(data: Mapping, table: SymbolTable) -> RatFunc:
    ring = table.ring
    numer = _poly_from_json(ring, data["num"])
    denom = _poly_from_json(ring, data["den"])
    if not denom:
        raise AlgebraError("serialized rational function has a zero denominator")
    return table.field.new(numer, denom)
