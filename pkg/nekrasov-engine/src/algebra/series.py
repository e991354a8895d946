"""Truncated power series in Lambda, optionally graded by Q-exponents over the edges.

Coefficients are either sympy field elements (exact mode) or mpmath numbers
(numeric mode).  A series never mixes the two.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import mpmath
from sympy.polys.fields import FracElement

from utils.errors import SeriesError

from .ratfunc import ratfunc_from_json, ratfunc_to_json
from .symbols import to_qq

Key = Tuple[int, Tuple[int, ...]]


def scale_rational(coeff, value: Fraction):
    """Multiply a coefficient of either mode by an exact rational."""
    value = Fraction(value)
    if isinstance(coeff, FracElement):
        return coeff * to_qq(value)
    return coeff * value.numerator / value.denominator


def _is_zero(coeff) -> bool:
    return not coeff


@dataclass(frozen=True)
class LambdaSeries:
    order: int
    terms: Dict[Key, object] = field(default_factory=dict)
    one: object = 1
    grading: int = 0

    def __post_init__(self):
        if self.order < 0:
            raise SeriesError("truncation order must be nonnegative")
        for (exponent, qdeg), _ in self.terms.items():
            if exponent < 0 or exponent > self.order:
                raise SeriesError(f"Lambda exponent {exponent} outside [0, {self.order}]")
            if len(qdeg) != self.grading:
                raise SeriesError("Q-multidegree length does not match the grading")

    # construction

    @classmethod
    def from_coefficients(cls, order: int, coeffs: Dict[int, object], one, grading: int = 0):
        qzero = (0,) * grading
        terms = {
            (e, qzero): c for e, c in coeffs.items() if e <= order and not _is_zero(c)
        }
        return cls(order, terms, one, grading)

    @classmethod
    def constant(cls, order: int, value, one, grading: int = 0):
        return cls.from_coefficients(order, {0: value}, one, grading)

    @property
    def zero_value(self):
        return self.one - self.one

    # access

    def coefficient(self, exponent: int, qdeg: Optional[Tuple[int, ...]] = None):
        qdeg = (0,) * self.grading if qdeg is None else tuple(qdeg)
        return self.terms.get((exponent, qdeg), self.zero_value)

    def constant_term(self):
        return self.coefficient(0)

    def exponents(self) -> List[int]:
        return sorted({e for e, _ in self.terms})

    def items(self) -> Iterator[Tuple[Key, object]]:
        for key in sorted(self.terms):
            yield key, self.terms[key]

    def lambda_coefficients(self) -> Dict[int, object]:
        """Coefficients of an ungraded series keyed by Lambda exponent."""
        if self.grading:
            raise SeriesError("series is Q-graded; use coefficient(exponent, qdeg)")
        return {e: c for (e, _), c in self.items()}

    # arithmetic

    def _check(self, other: "LambdaSeries"):
        if self.grading != other.grading:
            raise SeriesError("cannot combine series with different Q-gradings")

    def _new(self, order: int, terms: Dict[Key, object]) -> "LambdaSeries":
        cleaned = {k: v for k, v in terms.items() if not _is_zero(v) and k[0] <= order}
        return LambdaSeries(order, cleaned, self.one, self.grading)

    def __add__(self, other: "LambdaSeries") -> "LambdaSeries":
        self._check(other)
        order = min(self.order, other.order)
        terms = dict((k, v) for k, v in self.terms.items() if k[0] <= order)
        for key in sorted(other.terms):
            if key[0] > order:
                continue
            value = other.terms[key]
            terms[key] = terms[key] + value if key in terms else value
        return self._new(order, terms)

    def __neg__(self) -> "LambdaSeries":
        return self._new(self.order, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "LambdaSeries") -> "LambdaSeries":
        return self + (-other)

    def __mul__(self, other: "LambdaSeries") -> "LambdaSeries":
        self._check(other)
        order = min(self.order, other.order)
        terms: Dict[Key, object] = {}
        for (e1, q1), c1 in self.items():
            if e1 > order:
                break
            for (e2, q2), c2 in other.items():
                exponent = e1 + e2
                if exponent > order:
                    continue
                key = (exponent, tuple(a + b for a, b in zip(q1, q2)))
                product = c1 * c2
                terms[key] = terms[key] + product if key in terms else product
        return self._new(order, terms)

    def scale(self, value) -> "LambdaSeries":
        """Multiply every coefficient by a scalar of the coefficient domain."""
        return self._new(self.order, {k: v * value for k, v in self.terms.items()})

    def scale_rational(self, value: Fraction) -> "LambdaSeries":
        return self._new(self.order, {k: scale_rational(v, value) for k, v in self.terms.items()})

    def shift(self, exponent: int, qdeg: Optional[Tuple[int, ...]] = None) -> "LambdaSeries":
        """Multiply by Lambda**exponent * Q**qdeg, dropping terms past the order."""
        qdeg = (0,) * self.grading if qdeg is None else tuple(qdeg)
        terms = {
            (e + exponent, tuple(a + b for a, b in zip(q, qdeg))): v
            for (e, q), v in self.terms.items()
        }
        return self._new(self.order, terms)

    def truncate(self, order: int) -> "LambdaSeries":
        return self._new(min(order, self.order), dict(self.terms))

    def with_order(self, order: int) -> "LambdaSeries":
        """Re-declare the truncation order (only lowering is exact)."""
        return LambdaSeries(order, {k: v for k, v in self.terms.items() if k[0] <= order},
                            self.one, self.grading)

    def map_coefficients(self, fn: Callable[[object], object], one=None) -> "LambdaSeries":
        one = self.one if one is None else one
        terms = {k: fn(v) for k, v in self.terms.items()}
        return LambdaSeries(self.order, {k: v for k, v in terms.items() if not _is_zero(v)},
                            one, self.grading)

    def regrade(self, grading: int, qdeg: Tuple[int, ...]) -> "LambdaSeries":
        """Attach a Q-multidegree to an ungraded series."""
        if self.grading:
            raise SeriesError("series is already Q-graded")
        terms = {(e, tuple(qdeg)): v for (e, _), v in self.terms.items()}
        return LambdaSeries(self.order, terms, self.one, grading)

    def power(self, n: int) -> "LambdaSeries":
        result = LambdaSeries.constant(self.order, self.one, self.one, self.grading)
        for _ in range(n):
            result = result * self
        return result


def _unit_split(z: LambdaSeries, what: str) -> LambdaSeries:
    for (exponent, qdeg) in z.terms:
        if exponent == 0 and any(qdeg):
            raise SeriesError(f"{what} needs every Q-graded term to carry a positive Lambda power")
    return z - LambdaSeries.constant(z.order, z.constant_term(), z.one, z.grading)


def series_log(z: LambdaSeries) -> LambdaSeries:
    """log(1 + s) = s - s^2/2 + ... truncated at the order of z."""
    if z.constant_term() != z.one:
        raise SeriesError("series_log requires constant term 1")
    s = _unit_split(z, "series_log")
    exps = s.exponents()
    if not exps:
        return LambdaSeries(z.order, {}, z.one, z.grading)
    steps = z.order // exps[0]
    result = LambdaSeries(z.order, {}, z.one, z.grading)
    power = s
    for k in range(1, steps + 1):
        sign = 1 if k % 2 else -1
        result = result + power.scale_rational(Fraction(sign, k))
        power = power * s
    return result


def series_exp(s: LambdaSeries) -> LambdaSeries:
    """exp(s) for a series without constant term."""
    if s.constant_term() != s.zero_value:
        raise SeriesError("series_exp requires a vanishing constant term")
    _unit_split(s, "series_exp")
    result = LambdaSeries.constant(s.order, s.one, s.one, s.grading)
    exps = s.exponents()
    if not exps:
        return result
    steps = s.order // exps[0]
    power = LambdaSeries.constant(s.order, s.one, s.one, s.grading)
    factorial = 1
    for k in range(1, steps + 1):
        power = power * s
        factorial *= k
        result = result + power.scale_rational(Fraction(1, factorial))
    return result


def series_to_json(z: LambdaSeries) -> List[dict]:
    """[{lambda_exp, q_exp, coeff}] with exact coefficients as num/den monomial lists."""
    out = []
    for (exponent, qdeg), coeff in z.items():
        if isinstance(coeff, FracElement):
            value = ratfunc_to_json(coeff)
        else:
            value = {"numeric": mpmath.nstr(coeff, 30)}
        out.append({"lambda_exp": exponent, "q_exp": list(qdeg), "coeff": value})
    return out


def series_from_json(data: List[dict], table, order: int, grading: int = 0) -> LambdaSeries:
    terms = {}
    for entry in data:
        coeff = entry["coeff"]
        if "numeric" in coeff:
            raise SeriesError("numeric series cannot be restored exactly")
        key = (int(entry["lambda_exp"]), tuple(int(q) for q in entry["q_exp"]))
        terms[key] = ratfunc_from_json(coeff, table)
    return LambdaSeries(order, terms, table.one(), grading)
