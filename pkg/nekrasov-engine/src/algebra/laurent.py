"""Two-variable Laurent polynomials t1, t2 realised inside sympy's field ZZ(t1, t2)."""

from functools import lru_cache
from typing import Dict, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.fields import FracElement, field

from utils.errors import AlgebraError

TwoVarLaurent = Dict[Tuple[int, int], int]


@lru_cache(maxsize=1)
def laurent_field():
    K, t1, t2 = field("t1,t2", ZZ)
    return K, t1, t2


def character_monomial(i: int, j: int) -> FracElement:
    """t1**i * t2**j, exponents of either sign."""
    _, t1, t2 = laurent_field()
    return t1**i * t2**j


def laurent_terms(f: FracElement) -> TwoVarLaurent:
    """Exponent map of f; raises when f is not a Laurent polynomial with integer coefficients."""
    if not f:
        return {}
    if len(f.denom) != 1:
        raise AlgebraError(f"not a Laurent polynomial, denominator {f.denom}")
    (d1, d2), dcoeff = next(iter(f.denom.items()))
    terms: TwoVarLaurent = {}
    for (e1, e2), coeff in f.numer.items():
        if coeff % dcoeff:
            raise AlgebraError(f"non-integer coefficient {coeff}/{dcoeff}")
        terms[(e1 - d1, e2 - d2)] = int(coeff // dcoeff)
    return terms


def laurent_from_terms(terms: TwoVarLaurent) -> FracElement:
    K, _, _ = laurent_field()
    total = K.zero
    for (i, j), coeff in sorted(terms.items()):
        total += character_monomial(i, j) * coeff
    return total
