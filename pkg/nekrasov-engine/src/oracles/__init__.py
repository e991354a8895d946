"""Independent numeric oracles: perturbative gamma functions and the Seiberg-Witten curve."""

from .perturbative import (
    GammaEval,
    PertResult,
    check_gamma_limit,
    check_pert_limit,
    check_pert_limit_5d,
    f_pert,
    f_pert_limit,
    gamma4d,
    gamma4d_limit_target,
    gamma5d,
)
from .selftest import run_selftest
from .sworacle import (
    PrepotentialFit,
    SWComparison,
    SWPoint,
    check_monodromy,
    check_tau_positive,
    compare_with_localization,
    prepotential_derivative_check,
    sw_monodromy,
    sw_periods,
    sw_prepotential_coeffs,
    sw_tau,
)

__all__ = [
    "GammaEval",
    "PertResult",
    "check_gamma_limit",
    "check_pert_limit",
    "check_pert_limit_5d",
    "f_pert",
    "f_pert_limit",
    "gamma4d",
    "gamma4d_limit_target",
    "gamma5d",
    "PrepotentialFit",
    "SWComparison",
    "SWPoint",
    "check_monodromy",
    "check_tau_positive",
    "compare_with_localization",
    "prepotential_derivative_check",
    "sw_monodromy",
    "sw_periods",
    "sw_prepotential_coeffs",
    "sw_tau",
    "run_selftest",
]
