"""Symbol bookkeeping and equivariant linear forms.

A :class:`SymbolTable` fixes the generators of the rational function field
QQ(eps1, eps2, a1..ar, m1..mNf, m, t) used by a run.  The trailing generator
``t`` is the direction variable of the eps -> 0 limit machinery.

A :class:`LinearForm` is an exact-rational combination of symbol names with
no constant term.  Forms are independent of any table so that surface data
can be built before the rank of a computation is known.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

import mpmath
from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement, field
from sympy.polys.orderings import grlex

from utils.errors import AlgebraError

Rational = Union[int, Fraction]
Direction = Tuple[Fraction, Fraction]

EPS_NAMES = ("eps1", "eps2")
DIRECTION_NAME = "t"

_NAME_PATTERN = re.compile(r"^(eps[12]|a[1-9][0-9]*|m[1-9][0-9]*|m|t)$")


def _symbol_key(name: str) -> Tuple[int, int]:
    """Canonical order: eps1 < eps2 < a1 < ... < m1 < ... < m < t"""
    if name == "eps1":
        return (0, 1)
    if name == "eps2":
        return (0, 2)
    if name.startswith("a"):
        return (1, int(name[1:]))
    if name == "m":
        return (3, 0)
    if name.startswith("m"):
        return (2, int(name[1:]))
    return (4, 0)


@lru_cache(maxsize=None)
def _field_for(names: Tuple[str, ...]):
    K, *gens = field(",".join(names), QQ, grlex)
    return K, tuple(gens)


@dataclass(frozen=True)
class SymbolTable:
    """Ordered generators for one run."""

    rank: int
    n_fundamental: int = 0
    adjoint: bool = False

    def __post_init__(self):
        if self.rank < 1:
            raise AlgebraError(f"rank must be at least 1, got {self.rank}")
        if self.n_fundamental < 0:
            raise AlgebraError("number of fundamental masses must be nonnegative")

    @property
    def a_names(self) -> Tuple[str, ...]:
        return tuple(f"a{i}" for i in range(1, self.rank + 1))

    @property
    def mass_names(self) -> Tuple[str, ...]:
        names = [f"m{f}" for f in range(1, self.n_fundamental + 1)]
        if self.adjoint:
            names.append("m")
        return tuple(names)

    @property
    def names(self) -> Tuple[str, ...]:
        return EPS_NAMES + self.a_names + self.mass_names + (DIRECTION_NAME,)

    @property
    def field(self):
        return _field_for(self.names)[0]

    @property
    def ring(self):
        return self.field.ring

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise AlgebraError(f"symbol {name} is not part of this table") from None

    def gen(self, name: str) -> FracElement:
        return _field_for(self.names)[1][self.index(name)]

    def poly_gen(self, name: str):
        return self.ring.gens[self.index(name)]

    def one(self) -> FracElement:
        return self.field.one

    def zero(self) -> FracElement:
        return self.field.zero

    def constant(self, value: Rational) -> FracElement:
        value = Fraction(value)
        return self.field.one * QQ(value.numerator, value.denominator)


def to_qq(value: Rational):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


@dataclass(frozen=True)
class LinearForm:
    """Exact linear combination of symbols, stored as sorted (name, coefficient) pairs."""

    terms: Tuple[Tuple[str, Fraction], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[str, Rational]) -> "LinearForm":
        cleaned: Dict[str, Fraction] = {}
        for name, coeff in mapping.items():
            if not _NAME_PATTERN.match(name):
                raise AlgebraError(f"invalid symbol name {name!r}")
            coeff = Fraction(coeff)
            if coeff:
                cleaned[name] = cleaned.get(name, Fraction(0)) + coeff
        items = sorted(
            ((n, c) for n, c in cleaned.items() if c), key=lambda item: _symbol_key(item[0])
        )
        return cls(tuple(items))

    @classmethod
    def zero(cls) -> "LinearForm":
        return cls(())

    @classmethod
    def symbol(cls, name: str, coeff: Rational = 1) -> "LinearForm":
        return cls.of({name: coeff})

    @classmethod
    def eps(cls, i: Rational, j: Rational) -> "LinearForm":
        """i*eps1 + j*eps2"""
        return cls.of({"eps1": i, "eps2": j})

    @classmethod
    def from_pair(cls, pair: Iterable[int]) -> "LinearForm":
        i, j = pair
        return cls.eps(i, j)

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(self.terms)

    def coefficient(self, name: str) -> Fraction:
        return self.as_dict().get(name, Fraction(0))

    def symbols(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LinearForm") -> "LinearForm":
        if not isinstance(other, LinearForm):
            return NotImplemented
        merged = self.as_dict()
        for name, coeff in other.terms:
            merged[name] = merged.get(name, Fraction(0)) + coeff
        return LinearForm.of(merged)

    def __neg__(self) -> "LinearForm":
        return LinearForm(tuple((n, -c) for n, c in self.terms))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Rational) -> "LinearForm":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return LinearForm.of({n: c * scalar for n, c in self.terms})

    __rmul__ = __mul__

    def eps_pair(self) -> Tuple[int, int]:
        """Integer coefficients (i, j) of a pure eps form."""
        extra = [n for n in self.symbols() if n not in EPS_NAMES]
        if extra:
            raise AlgebraError(f"{self} is not a pure eps weight")
        i, j = self.coefficient("eps1"), self.coefficient("eps2")
        if i.denominator != 1 or j.denominator != 1:
            raise AlgebraError(f"{self} has non-integer eps coefficients")
        return int(i), int(j)

    def to_field(self, table: SymbolTable, direction: Optional[Direction] = None) -> FracElement:
        return _form_to_field(self, table, direction)

    def evaluate(self, point: Mapping[str, object]):
        """Numeric value at a point mapping symbol names to mpmath numbers."""
        total = mpmath.mpf(0)
        for name, coeff in self.terms:
            if name not in point:
                raise AlgebraError(f"no numeric value assigned to {name}")
            total += mpmath.mpf(coeff.numerator) / coeff.denominator * point[name]
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for name, coeff in self.terms:
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            body = name if mag == 1 else f"{mag}*{name}"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text


@lru_cache(maxsize=65536)
def _form_to_field(form: LinearForm, table: SymbolTable, direction: Optional[Direction]):
    K = table.field
    value = K.zero
    for name, coeff in form.terms:
        if direction is not None and name in EPS_NAMES:
            x = direction[EPS_NAMES.index(name)]
            value += table.gen(DIRECTION_NAME) * to_qq(Fraction(x) * coeff)
        else:
            value += table.gen(name) * to_qq(coeff)
    return value
