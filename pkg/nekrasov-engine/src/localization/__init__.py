"""Fixed-point localization on toric surfaces: geometry, characters, classes and partition functions."""

from .characters import (
    FixedPointConfig,
    WeightMultiset,
    check_edge_count_law,
    edge_character_closed_form_Fk,
    expected_dimension,
    expected_rank,
    fixed_point_configs,
    h1_count,
    h1_weights,
    natural_character,
    random_fixed_point,
    tangent_character,
    tangent_euler_sum,
)
from .classes import (
    AVAILABLE_CLASSES,
    Evaluator,
    ExactEvaluator,
    MultClass,
    NumericEvaluator,
    ahat_limit_check,
    eval_class,
    get_evaluator,
    get_mult_class,
    list_available_classes,
)
from .geometry import (
    AVAILABLE_SURFACES,
    ToricChain,
    builtin_surface,
    divisor_classes,
    enumerate_divisor_tuples,
    fixed_points,
    instanton_number,
    list_available_surfaces,
    load_surface,
    moduli_dimension,
    resolve_surface,
    save_surface,
    validate_chain,
)
from .partition_function import (
    DEFAULT_DIRECTIONS,
    CheckEntry,
    TheorySpec,
    check_degenerations,
    check_instanton_conjecture,
    check_instanton_conjecture_numeric,
    eps_limit,
    f_inst,
    instanton_limits,
    l_factors,
    m_factors,
    parse_theory,
    rank_one_product,
    z_c2,
    z_generating,
    z_master,
)
from .partitions import Partition, arm_leg, enumerate_partitions, enumerate_tuples, ns_weights, nst_weights

__all__ = [
    "FixedPointConfig",
    "WeightMultiset",
    "check_edge_count_law",
    "edge_character_closed_form_Fk",
    "expected_dimension",
    "expected_rank",
    "fixed_point_configs",
    "h1_count",
    "h1_weights",
    "natural_character",
    "random_fixed_point",
    "tangent_character",
    "tangent_euler_sum",
    "AVAILABLE_CLASSES",
    "Evaluator",
    "ExactEvaluator",
    "MultClass",
    "NumericEvaluator",
    "ahat_limit_check",
    "eval_class",
    "get_evaluator",
    "get_mult_class",
    "list_available_classes",
    "AVAILABLE_SURFACES",
    "ToricChain",
    "builtin_surface",
    "divisor_classes",
    "enumerate_divisor_tuples",
    "fixed_points",
    "instanton_number",
    "list_available_surfaces",
    "load_surface",
    "moduli_dimension",
    "resolve_surface",
    "save_surface",
    "validate_chain",
    "DEFAULT_DIRECTIONS",
    "CheckEntry",
    "TheorySpec",
    "check_degenerations",
    "check_instanton_conjecture",
    "check_instanton_conjecture_numeric",
    "eps_limit",
    "f_inst",
    "instanton_limits",
    "l_factors",
    "m_factors",
    "parse_theory",
    "rank_one_product",
    "z_c2",
    "z_generating",
    "z_master",
    "Partition",
    "arm_leg",
    "enumerate_partitions",
    "enumerate_tuples",
    "ns_weights",
    "nst_weights",
]
