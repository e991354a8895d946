"""The invariant battery behind `check selftest`."""

import logging
from fractions import Fraction
from typing import List

import numpy as np

from algebra.symbols import LinearForm
from localization.characters import (
    edge_character_closed_form_Fk,
    expected_dimension,
    expected_rank,
    h1_weights,
    natural_character,
    random_fixed_point,
    tangent_character,
)
from localization.classes import ExactEvaluator
from localization.geometry import builtin_surface
from localization.partition_function import (
    CheckEntry,
    TheorySpec,
    check_degenerations,
    check_instanton_conjecture,
    f_inst,
    parse_theory,
    rank_one_product,
    sample_points,
    z_c2,
    z_master,
)
from localization.partitions import (
    enumerate_partitions,
    hilbert_tangent_character_oracle,
    natural_character_oracle,
    ns_weights,
    nst_weights,
    weights_as_character,
)

from .perturbative import check_gamma_limit, check_pert_limit
from .sworacle import (
    check_chart_agreement,
    check_monodromy,
    check_tau_positive,
    check_wronskian,
    compare_with_localization,
)

logger = logging.getLogger(__name__)

EPS1 = LinearForm.symbol("eps1")
EPS2 = LinearForm.symbol("eps2")
PURE = TheorySpec("pure")


def check_vertex_characters(max_size: int = 4) -> CheckEntry:
    """Arm/leg weights against the Laurent character for every pair with |S|, |T| <= max_size."""
    diagrams = [y for n in range(max_size + 1) for y in enumerate_partitions(n)]
    failures = []
    for s in diagrams:
        if weights_as_character(ns_weights(s, EPS1, EPS2)) != natural_character_oracle(s):
            failures.append(f"natural {s}")
        for t in diagrams:
            if weights_as_character(nst_weights(s, t, EPS1, EPS2)) != hilbert_tangent_character_oracle(s, t):
                failures.append(f"pair {s} {t}")
    return CheckEntry(
        "vertex characters",
        not failures,
        {"diagrams": len(diagrams), "failures": failures[:10]},
    )


def check_edge_characters(ks=(1, 2, 3), bound: int = 4) -> CheckEntry:
    """H^1 characters on F_k against the closed form for |d_alpha - d_beta| <= bound."""
    failures = []
    for k in ks:
        chain = builtin_surface(f"F{k}")
        for d_diff in range(-bound, bound + 1):
            computed = h1_weights(chain, (-d_diff,)).character()
            if computed != edge_character_closed_form_Fk(k, d_diff):
                failures.append(f"F{k} d_diff={d_diff}")
    return CheckEntry("edge characters", not failures, {"surfaces": [f"F{k}" for k in ks], "failures": failures})


def check_dimension_laws(count: int = 200, seed: int = 20240601, r_values=(1, 2, 3)) -> CheckEntry:
    """Tangent and natural weight counts of random fixed points against the dimension and rank formulas."""
    rng = np.random.default_rng(seed)
    failures = []
    for index in range(count):
        chain = builtin_surface("F1" if index % 2 == 0 else "F2")
        r = int(r_values[index % len(r_values)])
        config = random_fixed_point(chain, r, rng)
        if len(tangent_character(chain, config)) != expected_dimension(chain, config):
            failures.append(f"dimension {chain.name} {config.divisors}")
        if len(natural_character(chain, config)) != expected_rank(chain, config):
            failures.append(f"rank {chain.name} {config.divisors}")
    return CheckEntry("dimension and rank laws", not failures, {"samples": count, "failures": failures[:10]})


def check_rank_one(order: int = 12) -> CheckEntry:
    """Rank-one C^2: F_inst = -Lambda^2 exactly."""
    c2 = builtin_surface("C2")
    table = PURE.symbol_table(1)
    evaluator = ExactEvaluator(table)
    f = f_inst(c2, z_c2(1, PURE, order, evaluator), evaluator)
    coefficients = f.lambda_coefficients()
    expected = {2: table.constant(-1)}
    wrong = [e for e in range(1, order + 1) if coefficients.get(e, table.zero()) != expected.get(e, table.zero())]
    return CheckEntry("rank-one F_inst on C^2", not wrong, {"order": order, "wrong_exponents": wrong})


def check_rank_one_factorization(order: int = 4) -> CheckEntry:
    """z_master at r = 1 against the product of vertex series."""
    failures = []
    for name, d in (("F1", (0,)), ("F1", (1,)), ("F2", (1,))):
        chain = builtin_surface(name)
        table = PURE.symbol_table(1)
        evaluator = ExactEvaluator(table)
        lhs = z_master(chain, 1, d, PURE, order, evaluator)
        rhs = rank_one_product(chain, d, PURE, order, evaluator)
        if (lhs - rhs).lambda_coefficients():
            failures.append(f"{name} d={list(d)}")
    return CheckEntry("rank-one factorization", not failures, {"order": order, "failures": failures})


def run_selftest(threads: int = 1, seed: int = 20240601, dps: int = 40) -> List[CheckEntry]:
    entries: List[CheckEntry] = [
        check_vertex_characters(),
        check_edge_characters(),
        check_dimension_laws(seed=seed),
        check_rank_one(),
        check_rank_one_factorization(),
    ]
    for name in ("F1", "F2"):
        for d in ((0,), (1,)):
            for theory in ("pure", "fund:1", "fund:2", "adjoint"):
                logger.info("conjecture battery: %s d=%s %s", name, d, theory)
                entries.extend(
                    check_instanton_conjecture(builtin_surface(name), 2, d, parse_theory(theory), 4, threads=threads)
                )
    entries.extend(check_instanton_conjecture(builtin_surface("F1"), 2, (0,), PURE, 8, threads=threads))

    entries.append(check_gamma_limit(1, dps=dps))
    for k in (1, 2, 3):
        entries.append(check_pert_limit(k, 1, dps=dps))

    points = sample_points(PURE.symbol_table(2), 3, seed)
    entries.extend(check_degenerations(2, 4, points, dps=dps))

    entries.extend(compare_with_localization(order=2, a_values=(Fraction(1), Fraction(3, 2)), ks=(1, 2)).entries)
    entries.append(check_chart_agreement(-3, 1))
    entries.append(check_tau_positive([(-3, 1), (Fraction(-5, 2), Fraction(1, 2)), (0, 1), (5, 1)]))
    entries.append(check_wronskian([(0, 1), (1, 1), (5, 1)]))
    entries.append(check_monodromy())
    return entries
