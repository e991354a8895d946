"""Multiplicative characteristic classes evaluated on weight multisets.

A class is fixed by a one-variable function f and evaluates to the product
of f over the Chern roots.  Polynomial classes work in both the exact and the
numeric evaluator; transcendental ones only in the numeric evaluator.
"""

import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import mpmath

from algebra.symbols import Direction, LinearForm, SymbolTable
from utils.errors import ClassEvaluationError

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


class Evaluator(ABC):
    """Turns linear forms into values of one coefficient domain"""

    exact: bool = False

    @abstractmethod
    def value(self, form: LinearForm):
        """Value of a linear form"""
        pass

    @abstractmethod
    def one(self):
        pass

    def zero(self):
        return self.one() - self.one()

    @abstractmethod
    def constant(self, value: Number):
        pass


class ExactEvaluator(Evaluator):
    """Values in the rational function field of a symbol table, optionally along a direction."""

    exact = True

    def __init__(self, table: SymbolTable, direction: Optional[Direction] = None):
        self.table = table
        self.direction = None if direction is None else tuple(Fraction(x) for x in direction)

    def value(self, form: LinearForm):
        return form.to_field(self.table, self.direction)

    def one(self):
        return self.table.one()

    def constant(self, value: Number):
        return self.table.constant(value)


class NumericEvaluator(Evaluator):
    """mpmath values at a point mapping symbol names to numbers."""

    def __init__(self, point: Mapping[str, object], dps: int = 40):
        self.dps = dps
        self.point = {name: mpmath.mpmathify(value) for name, value in point.items()}

    def value(self, form: LinearForm):
        return form.evaluate(self.point)

    def one(self):
        return mpmath.mpf(1)

    def constant(self, value: Number):
        value = Fraction(value)
        return mpmath.mpf(value.numerator) / value.denominator


def get_evaluator(
    table: Optional[SymbolTable] = None,
    point: Optional[Mapping[str, object]] = None,
    direction: Optional[Direction] = None,
    dps: int = 40,
) -> Evaluator:
    """Exact evaluator when no numeric point is given, numeric otherwise."""
    if point is not None:
        return NumericEvaluator(point, dps)
    if table is None:
        raise ClassEvaluationError("an exact evaluator needs a symbol table")
    return ExactEvaluator(table, direction)


class MultClass(ABC):
    """A multiplicative class c(E) = f(x_1) ... f(x_r)"""

    name = "class"
    exact_ok = True

    @abstractmethod
    def factor(self, form: LinearForm, evaluator: Evaluator):
        """f at one Chern root"""
        pass

    def evaluate(self, weights: Iterable[LinearForm], evaluator: Evaluator):
        if evaluator.exact and not self.exact_ok:
            raise ClassEvaluationError(f"{self.name} is transcendental; use a numeric evaluator")
        result = evaluator.one()
        for form in weights:
            result = result * self.factor(form, evaluator)
        return result

    def describe(self) -> Dict[str, object]:
        return {"class": self.name}


class OneClass(MultClass):
    name = "one"

    def factor(self, form, evaluator):
        return evaluator.one()

    def evaluate(self, weights, evaluator):
        return evaluator.one()


class EulerClass(MultClass):
    """Top Chern class, f(x) = x"""

    name = "euler"

    def factor(self, form, evaluator):
        return evaluator.value(form)


class LinearShiftClass(MultClass):
    """f(x) = prod_i (x + s_i); one shift is the equivariant Euler class E_m."""

    name = "shift"

    def __init__(self, shifts: Sequence[Union[LinearForm, Number]]):
        self.shifts: Tuple = tuple(shifts)

    def factor(self, form, evaluator):
        result = evaluator.one()
        for shift in self.shifts:
            if isinstance(shift, LinearForm):
                result = result * evaluator.value(form + shift)
            else:
                result = result * (evaluator.value(form) + evaluator.constant(shift))
        return result

    def describe(self):
        return {"class": self.name, "shifts": [str(s) for s in self.shifts]}


class _NumericClass(MultClass):
    exact_ok = False

    def factor(self, form, evaluator):
        x = evaluator.value(form)
        try:
            return self.kernel(x)
        except ZeroDivisionError as exc:
            raise ClassEvaluationError(f"{self.name} has a pole at x = {x}") from exc

    @abstractmethod
    def kernel(self, x):
        pass


def _todd_kernel(x):
    """x / (1 - e^{-x}), equal to 1 at x = 0."""
    if x == 0:
        return mpmath.mpf(1)
    return x / -mpmath.expm1(-x)


class AhatBetaClass(_NumericClass):
    """f(x) = (beta x / 2) / sinh(beta x / 2), the five-dimensional class."""

    name = "ahat"

    def __init__(self, beta: Number):
        if Fraction(beta) <= 0:
            raise ClassEvaluationError("beta must be positive")
        self.beta = Fraction(beta)

    def kernel(self, x):
        if x == 0:
            return mpmath.mpf(1)
        half = mpmath.mpf(self.beta.numerator) / self.beta.denominator * x / 2
        denominator = mpmath.sinh(half)
        if denominator == 0:
            raise ZeroDivisionError
        return half / denominator

    def describe(self):
        return {"class": self.name, "beta": str(self.beta)}


class ChiYClass(_NumericClass):
    """f(x) = x (1 - y e^{-x}) / (1 - e^{-x})"""

    name = "chiy"

    def __init__(self, y: Number):
        self.y = Fraction(y)

    def kernel(self, x):
        y = mpmath.mpf(self.y.numerator) / self.y.denominator
        return _todd_kernel(x) * (1 - y * mpmath.exp(-x))

    def describe(self):
        return {"class": self.name, "y": str(self.y)}


class ToddClass(_NumericClass):
    name = "todd"

    def kernel(self, x):
        return _todd_kernel(x)


class EllipticClass(_NumericClass):
    """Elliptic genus class with the q-product truncated after `terms` factors."""

    name = "elliptic"

    def __init__(self, y: Number, q: Number, terms: int = 8):
        self.y = Fraction(y)
        self.q = Fraction(q)
        if self.y == 0:
            raise ClassEvaluationError("elliptic genus needs y != 0")
        if not 0 <= self.q < 1:
            raise ClassEvaluationError("elliptic genus needs 0 <= q < 1")
        if terms < 1:
            raise ClassEvaluationError("at least one q-factor is required")
        self.terms = terms

    def _yq(self):
        y = mpmath.mpf(self.y.numerator) / self.y.denominator
        q = mpmath.mpf(self.q.numerator) / self.q.denominator
        return y, q

    def _factor_ratio(self, n: int, x):
        y, q = self._yq()
        numerator = (1 - y * q ** (n - 1) * mpmath.exp(-x)) * (1 - q**n * mpmath.exp(x) / y)
        denominator = (1 - q ** (n - 1) * mpmath.exp(-x)) * (1 - q**n * mpmath.exp(x))
        if denominator == 0:
            raise ZeroDivisionError
        return numerator / denominator

    def kernel(self, x):
        y, q = self._yq()
        # n = 1 carries the 1/(1 - e^{-x}) pole cancelled by x
        value = _todd_kernel(x) * (1 - y * mpmath.exp(-x)) * (1 - q * mpmath.exp(x) / y)
        tail = 1 - q * mpmath.exp(x)
        if tail == 0:
            raise ZeroDivisionError
        value /= tail
        for n in range(2, self.terms + 1):
            value *= self._factor_ratio(n, x)
        return value / mpmath.sqrt(y)

    def truncation_estimate(self, x) -> mpmath.mpf:
        """|first omitted factor - 1|"""
        return abs(self._factor_ratio(self.terms + 1, mpmath.mpmathify(x)) - 1)

    def describe(self):
        return {"class": self.name, "y": str(self.y), "q": str(self.q), "terms": self.terms}


# Registry of available multiplicative classes
AVAILABLE_CLASSES: Dict[str, Dict[str, str]] = {
    "one": {"name": "One", "description": "f(x) = 1"},
    "euler": {"name": "Euler", "description": "f(x) = x, the top Chern class"},
    "shift": {"name": "Linear shift", "description": "f(x) = prod_i (x + s_i)"},
    "ahat": {"name": "A-hat beta", "description": "f(x) = (beta x/2)/sinh(beta x/2), numeric only"},
    "chiy": {"name": "chi_y genus", "description": "f(x) = x(1 - y e^-x)/(1 - e^-x), numeric only"},
    "todd": {"name": "Todd", "description": "f(x) = x/(1 - e^-x), numeric only"},
    "elliptic": {"name": "Elliptic genus", "description": "truncated q-product, numeric only"},
}


def get_mult_class(name: str, **params) -> MultClass:
    """Factory for the registered classes"""
    key = name.lower()
    if key == "one":
        return OneClass()
    if key == "euler":
        return EulerClass()
    if key == "shift":
        return LinearShiftClass(params.get("shifts", ()))
    if key == "ahat":
        return AhatBetaClass(params["beta"])
    if key == "chiy":
        return ChiYClass(params["y"])
    if key == "todd":
        return ToddClass()
    if key == "elliptic":
        return EllipticClass(params["y"], params["q"], params.get("terms", 8))
    raise ClassEvaluationError(f"unknown class {name!r}; available: {', '.join(AVAILABLE_CLASSES)}")


def list_available_classes() -> List[Dict[str, str]]:
    return [{"id": key, **value} for key, value in AVAILABLE_CLASSES.items()]


def eval_class(mult_class: MultClass, weights: Iterable[LinearForm], evaluator: Evaluator):
    return mult_class.evaluate(weights, evaluator)


def ahat_limit_check(
    weights: Iterable[LinearForm], point: Mapping[str, object], beta: Number = Fraction(1, 1000), dps: int = 40
):
    """A-hat_beta at a small beta; tends to 1 like 1 - beta^2 x^2 / 24 per root."""
    with mpmath.workdps(dps):
        return AhatBetaClass(beta).evaluate(weights, NumericEvaluator(point, dps))
