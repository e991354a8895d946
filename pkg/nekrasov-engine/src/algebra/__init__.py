"""Exact symbolic kernel: symbols, linear forms, rational functions, Lambda series."""

from .ratfunc import (
    DirectionSeries,
    RatFunc,
    as_direction,
    evaluate_numeric,
    laurent_at_zero,
    ratfunc_arith,
    ratfunc_from_json,
    ratfunc_to_json,
    substitute_direction,
)
from .series import (
    LambdaSeries,
    scale_rational,
    series_exp,
    series_from_json,
    series_log,
    series_to_json,
)
from .laurent import (
    TwoVarLaurent,
    character_monomial,
    laurent_field,
    laurent_from_terms,
    laurent_terms,
)
from .symbols import DIRECTION_NAME, EPS_NAMES, LinearForm, SymbolTable, to_qq

__all__ = [
    "DirectionSeries",
    "RatFunc",
    "as_direction",
    "evaluate_numeric",
    "laurent_at_zero",
    "ratfunc_arith",
    "ratfunc_from_json",
    "ratfunc_to_json",
    "substitute_direction",
    "LambdaSeries",
    "scale_rational",
    "series_exp",
    "series_log",
    "series_from_json",
    "series_to_json",
    "TwoVarLaurent",
    "character_monomial",
    "laurent_field",
    "laurent_from_terms",
    "laurent_terms",
    "DIRECTION_NAME",
    "EPS_NAMES",
    "LinearForm",
    "SymbolTable",
    "to_qq",
]
