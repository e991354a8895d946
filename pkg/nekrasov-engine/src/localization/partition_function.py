"""Instanton partition functions: the C^2 sum, the master formula and the eps -> 0 checks."""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from algebra.ratfunc import DirectionSeries, as_direction, laurent_at_zero, substitute_direction
from algebra.series import LambdaSeries, series_log
from algebra.symbols import Direction, LinearForm, SymbolTable
from utils.errors import ClassEvaluationError, ResonantDirectionError, TheoryError
from utils.parallel import parallel_map

from .classes import (
    AhatBetaClass,
    ChiYClass,
    EllipticClass,
    EulerClass,
    Evaluator,
    ExactEvaluator,
    LinearShiftClass,
    MultClass,
    NumericEvaluator,
    OneClass,
)
from .characters import h1_weights
from .geometry import (
    ToricChain,
    builtin_surface,
    divisor_classes,
    dsq_norm,
    enumerate_divisor_tuples,
    intersection,
    q_degree,
)
from .partitions import Partition, enumerate_partitions, ns_weights, nst_weights, tuples_up_to

logger = logging.getLogger(__name__)

DEFAULT_DIRECTIONS: Tuple[Direction, ...] = tuple(
    (Fraction(n), Fraction(-(2 * n + 1))) for n in range(1, 9)
)

EPS1 = LinearForm.symbol("eps1")
EPS2 = LinearForm.symbol("eps2")

_EULER = EulerClass()


@dataclass(frozen=True)
class TheorySpec:
    """Gauge theory content, fixing the pair of classes (A, B)."""

    kind: str = "pure"
    n_fundamental: int = 0
    beta: Optional[Fraction] = None
    y: Optional[Fraction] = None
    q: Optional[Fraction] = None
    elliptic_terms: int = 8

    @property
    def adjoint(self) -> bool:
        return self.kind == "adjoint"

    @property
    def exact_ok(self) -> bool:
        return self.kind in ("pure", "fund", "adjoint")

    def symbol_table(self, rank: int) -> SymbolTable:
        return SymbolTable(rank, self.n_fundamental, self.adjoint)

    def classes(self) -> Tuple[MultClass, MultClass]:
        if self.kind == "pure":
            return OneClass(), OneClass()
        if self.kind == "fund":
            masses = [LinearForm.symbol(f"m{f}") for f in range(1, self.n_fundamental + 1)]
            return OneClass(), LinearShiftClass(masses)
        if self.kind == "adjoint":
            return LinearShiftClass([LinearForm.symbol("m")]), OneClass()
        if self.kind == "5d":
            return AhatBetaClass(self.beta), OneClass()
        if self.kind == "chiy":
            return ChiYClass(self.y), OneClass()
        if self.kind == "elliptic":
            return EllipticClass(self.y, self.q, self.elliptic_terms), OneClass()
        raise TheoryError(f"unknown theory kind {self.kind!r}")

    def describe(self) -> Dict[str, object]:
        a_class, b_class = self.classes()
        return {"kind": self.kind, "A": a_class.describe(), "B": b_class.describe()}

    def __str__(self) -> str:
        if self.kind == "fund":
            return f"fund:{self.n_fundamental}"
        if self.kind == "5d":
            return f"5d:{self.beta}"
        if self.kind == "chiy":
            return f"chiy:{self.y}"
        if self.kind == "elliptic":
            return f"elliptic:{self.y},{self.q}"
        return self.kind


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise TheoryError(f"cannot read {text!r} as a rational number") from exc


def parse_theory(text: str, elliptic_terms: int = 8) -> TheorySpec:
    """pure | fund:NF | adjoint | 5d:BETA | chiy:Y | elliptic:Y,Q"""
    kind, _, arg = text.strip().lower().partition(":")
    if kind == "pure" and not arg:
        return TheorySpec("pure")
    if kind == "adjoint" and not arg:
        return TheorySpec("adjoint")
    if kind == "fund":
        if not arg.isdigit() or int(arg) < 1:
            raise TheoryError(f"fund needs a positive flavour count, got {arg!r}")
        return TheorySpec("fund", n_fundamental=int(arg))
    if kind == "5d":
        beta = _fraction(arg)
        if beta <= 0:
            raise TheoryError("5d theory needs beta > 0")
        return TheorySpec("5d", beta=beta)
    if kind == "chiy":
        return TheorySpec("chiy", y=_fraction(arg))
    if kind == "elliptic":
        parts = arg.split(",")
        if len(parts) != 2:
            raise TheoryError("elliptic needs Y,Q")
        spec = TheorySpec(
            "elliptic", y=_fraction(parts[0]), q=_fraction(parts[1]), elliptic_terms=elliptic_terms
        )
        spec.classes()
        return spec
    raise TheoryError(f"unknown theory {text!r}; expected pure, fund:N, adjoint, 5d:B, chiy:Y, elliptic:Y,Q")


def _a_forms(r: int) -> Tuple[LinearForm, ...]:
    return tuple(LinearForm.symbol(f"a{alpha}") for alpha in range(1, r + 1))


def _divide(numerator, denominator, evaluator: Evaluator):
    if not denominator:
        direction = getattr(evaluator, "direction", None)
        if direction is not None:
            raise ResonantDirectionError(direction)
        raise TheoryError("zero Euler weight at an isolated fixed point")
    return numerator / denominator


def m_factors(
    partitions: Sequence[Partition],
    mult_class: MultClass,
    kind: str,
    alpha: int,
    beta: int,
    evaluator: Evaluator,
    w1: LinearForm = EPS1,
    w2: LinearForm = EPS2,
    a_forms: Optional[Sequence[LinearForm]] = None,
):
    """Vertex factor of one pair (alpha, beta) or one color beta."""
    a_forms = _a_forms(len(partitions)) if a_forms is None else tuple(a_forms)
    if kind == "beta":
        weights = [w + a_forms[beta] for w in ns_weights(partitions[beta], w1, w2)]
        return mult_class.evaluate(weights, evaluator)
    shift = a_forms[beta] - a_forms[alpha]
    weights = [w + shift for w in nst_weights(partitions[alpha], partitions[beta], w1, w2)]
    if kind == "pair":
        return mult_class.evaluate(weights, evaluator)
    if kind == "euler_pair":
        if any(w.is_zero for w in weights):
            raise TheoryError(f"zero tangent weight for the pair ({alpha}, {beta})")
        return _EULER.evaluate(weights, evaluator)
    raise TheoryError(f"unknown factor kind {kind!r}")


def _vertex_term(ys, a_class, b_class, evaluator, w1, w2, a_forms):
    r = len(ys)
    numerator = evaluator.one()
    denominator = evaluator.one()
    for alpha, beta in itertools.product(range(r), repeat=2):
        numerator = numerator * m_factors(ys, a_class, "pair", alpha, beta, evaluator, w1, w2, a_forms)
        denominator = denominator * m_factors(ys, _EULER, "euler_pair", alpha, beta, evaluator, w1, w2, a_forms)
    for beta in range(r):
        numerator = numerator * m_factors(ys, b_class, "beta", beta, beta, evaluator, w1, w2, a_forms)
    return _divide(numerator, denominator, evaluator)


def z_c2(
    r: int,
    theory: TheorySpec,
    order: int,
    evaluator: Optional[Evaluator] = None,
    w1: LinearForm = EPS1,
    w2: LinearForm = EPS2,
    a_forms: Optional[Sequence[LinearForm]] = None,
    threads: int = 1,
) -> LambdaSeries:
    """Sum over r-tuples of Young diagrams of Lambda^{2r|Y|} m_A/m_ctop * m_B."""
    if order < 0:
        raise TheoryError("truncation order must be nonnegative")
    evaluator = ExactEvaluator(theory.symbol_table(r)) if evaluator is None else evaluator
    a_forms = _a_forms(r) if a_forms is None else tuple(a_forms)
    a_class, b_class = theory.classes()
    configs = tuples_up_to(r, order // (2 * r))

    def term(ys):
        return 2 * r * sum(y.size for y in ys), _vertex_term(ys, a_class, b_class, evaluator, w1, w2, a_forms)

    workers = threads if evaluator.exact else 1
    coefficients: Dict[int, object] = {}
    for exponent, value in parallel_map(term, configs, workers):
        coefficients[exponent] = coefficients[exponent] + value if exponent in coefficients else value
    return LambdaSeries.from_coefficients(order, coefficients, evaluator.one())


def l_factors(chain: ToricChain, divisors, theory: TheorySpec, evaluator: Evaluator):
    """Edge factor prod_{a != b} A/e on H^1(D_b - D_a) times prod_b B on H^1(D_b)."""
    r = len(divisors)
    a_class, b_class = theory.classes()
    a_forms = _a_forms(r)
    numerator = evaluator.one()
    denominator = evaluator.one()
    for alpha, beta in itertools.permutations(range(r), 2):
        ddiff = tuple(b - a for a, b in zip(divisors[alpha], divisors[beta]))
        weights = h1_weights(chain, ddiff).shifted(a_forms[beta] - a_forms[alpha]).forms()
        if not weights:
            continue
        numerator = numerator * a_class.evaluate(weights, evaluator)
        denominator = denominator * _EULER.evaluate(weights, evaluator)
    for beta in range(r):
        weights = h1_weights(chain, tuple(divisors[beta])).shifted(a_forms[beta]).forms()
        if weights:
            numerator = numerator * b_class.evaluate(weights, evaluator)
    return _divide(numerator, denominator, evaluator)


def _embed(series: LambdaSeries, order: int, exponent: int, factor) -> LambdaSeries:
    """factor * Lambda^exponent * series inside a series of the given order."""
    return series.with_order(order).shift(exponent).scale(factor)


def z_master(
    chain: ToricChain,
    r: int,
    d: Sequence[int],
    theory: TheorySpec,
    order: int,
    evaluator: Optional[Evaluator] = None,
    threads: int = 1,
) -> LambdaSeries:
    """Master formula: sum over divisor tuples of edge factors times vertex C^2 series."""
    evaluator = ExactEvaluator(theory.symbol_table(r)) if evaluator is None else evaluator
    a_forms = _a_forms(r)
    tuples = enumerate_divisor_tuples(chain, r, d, order)
    logger.debug("%s r=%d d=%s: %d divisor tuples up to order %d", chain.name, r, tuple(d), len(tuples), order)

    def term(divisors):
        norm = dsq_norm(chain, divisors)
        remaining = order - norm
        vertices = LambdaSeries.constant(remaining, evaluator.one(), evaluator.one())
        for v, vertex in enumerate(chain.vertices):
            shifted = [a + chain.vertex_weight(v, divisors[alpha]) for alpha, a in enumerate(a_forms)]
            vertices = vertices * z_c2(r, theory, remaining, evaluator, vertex.w1, vertex.w2, shifted)
        return _embed(vertices, order, norm, l_factors(chain, divisors, theory, evaluator))

    total = LambdaSeries(order, {}, evaluator.one())
    workers = threads if evaluator.exact else 1
    for piece in parallel_map(term, tuples, workers):
        total = total + piece
    return total


def z_generating(
    chain: ToricChain,
    r: int,
    theory: TheorySpec,
    order: int,
    dbound: int,
    evaluator: Optional[Evaluator] = None,
    threads: int = 1,
) -> LambdaSeries:
    """Sum over classes d of Q^d z_master(d); Q-degree d.l_e per edge."""
    evaluator = ExactEvaluator(theory.symbol_table(r)) if evaluator is None else evaluator
    grading = chain.n_edges
    total = LambdaSeries(order, {}, evaluator.one(), grading)
    for d in divisor_classes(chain, dbound):
        piece = z_master(chain, r, d, theory, order, evaluator, threads)
        total = total + piece.regrade(grading, q_degree(chain, d))
    return total


def rank_one_product(
    chain: ToricChain, d: Sequence[int], theory: TheorySpec, order: int, evaluator: Optional[Evaluator] = None
) -> LambdaSeries:
    """Rank-one factorization: B edge factor times prod_v z_c2 at a1 + w_d^v."""
    evaluator = ExactEvaluator(theory.symbol_table(1)) if evaluator is None else evaluator
    a1 = LinearForm.symbol("a1")
    product = LambdaSeries.constant(order, evaluator.one(), evaluator.one())
    for v, vertex in enumerate(chain.vertices):
        shifted = [a1 + chain.vertex_weight(v, d)]
        product = product * z_c2(1, theory, order, evaluator, vertex.w1, vertex.w2, shifted)
    return product.scale(l_factors(chain, (tuple(d),), theory, evaluator))


def _negligible(value, scale) -> bool:
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return abs(value) <= mpmath.mpf(10) ** (-(mpmath.mp.dps // 2)) * scale
    return not value


def leading_normalization(z: LambdaSeries) -> Tuple[int, object, LambdaSeries]:
    """Split Z = c Lambda^e0 (1 + s); returns (e0, c, 1 + s)."""
    if z.grading:
        raise TheoryError("leading normalization needs an ungraded series")
    coefficients = z.lambda_coefficients()
    numeric = [abs(c) for c in coefficients.values() if isinstance(c, (mpmath.mpf, mpmath.mpc))]
    scale = max([mpmath.mpf(1)] + numeric) if numeric else 1
    leading = [(e, c) for e, c in sorted(coefficients.items()) if not _negligible(c, scale)]
    if not leading:
        raise TheoryError("the partition function vanishes to the requested order")
    e0, c = leading[0]
    unit = {e - e0: value / c for e, value in leading}
    return e0, c, LambdaSeries.from_coefficients(z.order - e0, unit, z.one)


def z_master_through(
    chain: ToricChain,
    r: int,
    d: Sequence[int],
    theory: TheorySpec,
    order: int,
    evaluator: Evaluator,
    threads: int = 1,
) -> Tuple[int, LambdaSeries]:
    """z_master computed far enough that Z / (c Lambda^e0) is known through Lambda^order."""
    dd = intersection(chain, d, d)
    extra = max(0, (1 - r) * dd)
    while True:
        z = z_master(chain, r, d, theory, order + extra, evaluator, threads)
        try:
            e0, _, _ = leading_normalization(z)
        except TheoryError:
            # everything up to order + extra cancelled
            extra += 2 * r
            if extra > 4 * (order + 2 * r) + abs(dd):
                raise
            continue
        if e0 <= extra:
            return e0, z
        extra = e0


def ell_inf_prefactor(chain: ToricChain, evaluator: Evaluator):
    """-u (u - k w)"""
    return -(evaluator.value(chain.linf.u) * evaluator.value(chain.linf.v))


def f_inst(chain: ToricChain, z: LambdaSeries, evaluator: Evaluator) -> LambdaSeries:
    """-u(u - kw) log Z, for Z with constant term 1."""
    return series_log(z).scale(ell_inf_prefactor(chain, evaluator))


def f_inst_normalized(chain: ToricChain, z: LambdaSeries, evaluator: Evaluator):
    """-u(u - kw) log(1 + s) with Z = c Lambda^e0 (1 + s); also returns e0."""
    e0, _, unit = leading_normalization(z)
    return e0, series_log(unit).scale(ell_inf_prefactor(chain, evaluator))


# eps -> 0 limits


@dataclass
class EpsLimitReport:
    limits: Dict[int, object] = field(default_factory=dict)
    valuations: Dict[int, Dict[str, Optional[int]]] = field(default_factory=dict)
    analytic: bool = True
    consistent: bool = True
    skipped: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            "limits": {str(e): str(v.as_expr()) if hasattr(v, "as_expr") else str(v) for e, v in self.limits.items()},
            "valuations": {str(e): v for e, v in self.valuations.items()},
            "analytic": self.analytic,
            "consistent": self.consistent,
            "skipped_directions": self.skipped,
        }


def _direction_label(direction: Direction) -> str:
    return f"({direction[0]},{direction[1]})"


def _expand_along(coeff, table: SymbolTable, direction: Direction) -> DirectionSeries:
    try:
        specialized = substitute_direction(coeff, table, direction)
    except ZeroDivisionError as exc:
        raise ResonantDirectionError(direction) from exc
    return laurent_at_zero(specialized, table, 0)


def eps_limit(
    series: LambdaSeries,
    table: SymbolTable,
    directions: Optional[Sequence] = None,
    count: int = 2,
) -> EpsLimitReport:
    """Valuation and t^0 coefficient of every Lambda coefficient along `count` directions."""
    requested = [as_direction(x) for x in (directions or DEFAULT_DIRECTIONS[:count])]
    fallback = [x for x in DEFAULT_DIRECTIONS if x not in requested]
    report = EpsLimitReport()
    zero = table.zero()
    for exponent, coeff in series.lambda_coefficients().items():
        candidates = requested + fallback
        used = 0
        limits = []
        report.valuations[exponent] = {}
        while used < max(count, len(requested)) and candidates:
            direction = candidates.pop(0)
            try:
                expansion = _expand_along(coeff, table, direction)
            except ResonantDirectionError:
                logger.info("direction %s is resonant for Lambda^%d, trying the next one", direction, exponent)
                report.skipped.append(_direction_label(direction))
                continue
            used += 1
            report.valuations[exponent][_direction_label(direction)] = expansion.valuation
            if not expansion.analytic:
                report.analytic = False
            limits.append(expansion.coefficient(0, zero) if expansion.analytic else None)
        if used < 2:
            raise ResonantDirectionError(requested[0], "fewer than two usable directions")
        if all(limit is not None for limit in limits):
            report.limits[exponent] = limits[0]
            if any(limit != limits[0] for limit in limits[1:]):
                report.consistent = False
    return report


@dataclass
class CheckEntry:
    name: str
    passed: bool
    details: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {"name": self.name, "pass": self.passed, **self.details}


def _limit_along(series: LambdaSeries, table: SymbolTable) -> Dict[int, DirectionSeries]:
    return {e: laurent_at_zero(c, table, 0) for e, c in series.lambda_coefficients().items()}


def instanton_limits(
    chain: ToricChain,
    r: int,
    d: Sequence[int],
    theory: TheorySpec,
    order: int,
    direction: Optional[Sequence] = None,
    threads: int = 1,
) -> Dict[int, object]:
    """eps -> 0 limits of the Lambda coefficients of the normalized F_inst along one direction."""
    direction = as_direction(direction or DEFAULT_DIRECTIONS[0])
    table = theory.symbol_table(r)
    evaluator = ExactEvaluator(table, direction)
    _, z = z_master_through(chain, r, tuple(int(m) for m in d), theory, order, evaluator, threads)
    _, f = f_inst_normalized(chain, z, evaluator)
    limits = {}
    for exponent, expansion in _limit_along(f.truncate(order), table).items():
        if not expansion.analytic:
            raise TheoryError(f"the Lambda^{exponent} coefficient of F_inst on {chain.name} is singular at eps = 0")
        limits[exponent] = expansion.coefficient(0, table.zero())
    return limits


def _text(value) -> str:
    return str(value.as_expr()) if hasattr(value, "as_expr") else str(value)


def _exact_conjecture_run(chain, r, d, theory, order, direction, threads):
    table = theory.symbol_table(r)
    evaluator = ExactEvaluator(table, direction)
    c2 = builtin_surface("C2")

    e0, z_x0 = z_master_through(chain, r, d, theory, order, evaluator, threads)
    _, f_x0 = f_inst_normalized(chain, z_x0, evaluator)
    f_x0 = f_x0.truncate(order)
    z_ref = z_c2(r, theory, order, evaluator, threads=threads)
    f_c2 = f_inst(c2, z_ref, evaluator)

    # log(Z_X0 Z_C2(w, u) Z_C2(-w, u - kw))
    linf = chain.linf
    compact = z_x0
    compact = compact * z_c2(r, theory, order, evaluator, linf.w, linf.u, threads=threads)
    compact = compact * z_c2(r, theory, order, evaluator, -linf.w, linf.v, threads=threads)
    _, _, compact_unit = leading_normalization(compact)
    log_compact = series_log(compact_unit)

    return {
        "e0": e0,
        "x0": _limit_along(f_x0, table),
        "c2": _limit_along(f_c2, table),
        "compact": _limit_along(log_compact, table),
        "zero": table.zero(),
        "k": table.constant(chain.k),
    }


def check_instanton_conjecture(
    chain: ToricChain,
    r: int,
    d: Sequence[int],
    theory: TheorySpec,
    order: int,
    directions: Optional[Sequence] = None,
    threads: int = 1,
    count: int = 2,
) -> List[CheckEntry]:
    """Analyticity of F_X0, the k-scaling of its limit, and analyticity of the compact combination."""
    if not theory.exact_ok:
        raise TheoryError(f"{theory} needs the numeric conjecture check")
    d = tuple(int(m) for m in d)
    dd = intersection(chain, d, d)
    requested = [as_direction(x) for x in (directions or DEFAULT_DIRECTIONS[:count])]
    candidates = requested + [x for x in DEFAULT_DIRECTIONS if x not in requested]

    runs = []
    skipped = []
    while len(runs) < max(count, len(requested)) and candidates:
        direction = candidates.pop(0)
        try:
            runs.append((direction, _exact_conjecture_run(chain, r, d, theory, order, direction, threads)))
        except (ResonantDirectionError, ZeroDivisionError):
            logger.info("direction %s is resonant on %s, trying the next one", direction, chain.name)
            skipped.append(_direction_label(direction))
    if len(runs) < 2:
        raise ResonantDirectionError(requested[0], "fewer than two usable directions")

    label = f"{chain.name} r={r} d={list(d)} {theory}"
    common = {"surface": chain.name, "rank": r, "d": list(d), "theory": str(theory), "order": order}
    entries: List[CheckEntry] = []

    valuations = {}
    analytic = True
    for direction, run in runs:
        for exponent, expansion in run["x0"].items():
            valuations.setdefault(str(exponent), {})[_direction_label(direction)] = expansion.valuation
            analytic = analytic and expansion.analytic
    entries.append(
        CheckEntry(
            f"analytic F_inst {label}",
            analytic,
            {**common, "valuations": valuations, "skipped_directions": skipped},
        )
    )

    scaling = {}
    scaling_ok = analytic
    for direction, run in runs:
        for exponent, expansion in run["x0"].items():
            if exponent == 0:
                continue
            reference = run["c2"].get(exponent)
            lhs = expansion.coefficient(0, run["zero"]) if expansion.analytic else None
            rhs = run["k"] * reference.coefficient(0, run["zero"]) if reference is not None else run["zero"]
            same = lhs is not None and lhs == rhs
            scaling_ok = scaling_ok and same
            scaling.setdefault(str(exponent), {})[_direction_label(direction)] = {
                "limit": _text(lhs) if lhs is not None else None,
                "k_times_c2": _text(rhs),
                "equal": same,
            }
        for exponent, reference in run["c2"].items():
            if exponent not in run["x0"] and reference.coefficient(0, run["zero"]):
                scaling_ok = False
    offsets = {"leading_exponent": runs[0][1]["e0"], "dimension_offset": (1 - r) * dd}
    entries.append(
        CheckEntry(f"k-scaling of the limit {label}", scaling_ok, {**common, "k": chain.k, **offsets, "coefficients": scaling})
    )

    compact_ok = all(exp.analytic for _, run in runs for exp in run["compact"].values())
    entries.append(CheckEntry(f"analytic compact combination {label}", compact_ok, common))
    return entries


# numeric mode


def sample_points(table: SymbolTable, count: int = 3, seed: int = 20240601) -> List[Dict[str, Fraction]]:
    """Rational points with |a_alpha - a_beta| in [1, 3], eps in +-[1/5, 1/2], masses in [1/2, 2]."""
    rng = np.random.default_rng(seed)
    denominator = 97
    step_max = Fraction(3, max(table.rank - 1, 1))
    points = []
    for _ in range(count):
        point: Dict[str, Fraction] = {}
        for name in ("eps1", "eps2"):
            magnitude = Fraction(int(rng.integers(denominator // 5 + 1, denominator // 2 + 1)), denominator)
            point[name] = magnitude if rng.integers(0, 2) else -magnitude
        current = Fraction(0)
        for index, name in enumerate(table.a_names):
            if index:
                low, high = denominator, int(step_max * denominator)
                current += Fraction(int(rng.integers(low, max(high, low) + 1)), denominator)
            point[name] = current
        for name in table.mass_names:
            point[name] = Fraction(int(rng.integers(denominator // 2, 2 * denominator + 1)), denominator)
        points.append(point)
    return points


def richardson(values: Sequence) -> object:
    """Two Richardson steps for samples at t, t/10, t/100 of an analytic function."""
    first = [(10 * values[i + 1] - values[i]) / 9 for i in range(len(values) - 1)]
    if len(first) < 2:
        return first[-1]
    return (100 * first[1] - first[0]) / 99


def _numeric_f_coefficients(chain, r, d, theory, order, point, dps):
    evaluator = NumericEvaluator(point, dps)
    _, z = z_master_through(chain, r, d, theory, order, evaluator)
    _, f = f_inst_normalized(chain, z, evaluator)
    f = f.truncate(order)
    reference = f_inst(builtin_surface("C2"), z_c2(r, theory, order, evaluator), evaluator)
    return f.lambda_coefficients(), reference.lambda_coefficients()


def check_instanton_conjecture_numeric(
    chain: ToricChain,
    r: int,
    d: Sequence[int],
    theory: TheorySpec,
    order: int,
    points: Sequence[Dict[str, Fraction]],
    tolerance: float = 1e-6,
    dps: int = 40,
    scales: Sequence[Fraction] = (Fraction(1, 10**3), Fraction(1, 10**4), Fraction(1, 10**5)),
    directions: Sequence[Direction] = DEFAULT_DIRECTIONS[:2],
) -> List[CheckEntry]:
    """Sampled-point k-scaling for transcendental classes by Richardson extrapolation in t."""
    d = tuple(int(m) for m in d)
    label = f"{chain.name} r={r} d={list(d)} {theory}"
    entries = []
    work = dps + 10 * len(scales)
    with mpmath.workdps(work):
        for index, point in enumerate(points):
            worst = mpmath.mpf(0)
            limits = {}
            for direction in directions:
                x1, x2 = as_direction(direction)
                samples_x0: Dict[int, list] = {}
                samples_c2: Dict[int, list] = {}
                for t in scales:
                    sample = dict(point)
                    sample["eps1"], sample["eps2"] = x1 * t, x2 * t
                    try:
                        fx0, fc2 = _numeric_f_coefficients(chain, r, d, theory, order, sample, work)
                    except ClassEvaluationError as exc:
                        raise TheoryError(f"numeric evaluation failed at sample {index}: {exc}") from exc
                    for e in set(fx0) | set(fc2):
                        samples_x0.setdefault(e, []).append(fx0.get(e, mpmath.mpf(0)))
                        samples_c2.setdefault(e, []).append(fc2.get(e, mpmath.mpf(0)))
                for e in sorted(samples_x0):
                    if e == 0 or len(samples_x0[e]) < len(scales):
                        continue
                    lhs = richardson(samples_x0[e])
                    rhs = chain.k * richardson(samples_c2[e])
                    deviation = abs(lhs - rhs) / max(abs(rhs), mpmath.mpf(1))
                    worst = max(worst, deviation)
                    limits[f"{e}@{_direction_label(direction)}"] = {
                        "limit": mpmath.nstr(lhs, 20),
                        "k_times_c2": mpmath.nstr(rhs, 20),
                    }
            entries.append(
                CheckEntry(
                    f"numeric k-scaling {label} point {index}",
                    bool(worst < tolerance),
                    {
                        "point": {name: str(value) for name, value in point.items()},
                        "max_rel_deviation": mpmath.nstr(worst, 6),
                        "tolerance": tolerance,
                        "coefficients": limits,
                    },
                )
            )
    return entries


def fixed_point_count(r: int, n: int) -> int:
    """Number of r-tuples of partitions with n boxes in total."""
    counts = [len(enumerate_partitions(k)) for k in range(n + 1)]
    total = [1] + [0] * n
    for _ in range(r):
        total = [sum(total[j] * counts[i - j] for j in range(i + 1)) for i in range(n + 1)]
    return total[n]


def check_degenerations(
    r: int, order: int, points: Sequence[Dict[str, Fraction]], dps: int = 40, threads: int = 1
) -> List[CheckEntry]:
    """5d at beta = 1e-3 against pure, and chi_y at y = 1 against the Euler-class count."""
    entries = []
    pure = TheorySpec("pure")
    fived = TheorySpec("5d", beta=Fraction(1, 1000))
    chiy = TheorySpec("chiy", y=Fraction(1))
    with mpmath.workdps(dps):
        for index, point in enumerate(points):
            evaluator = NumericEvaluator(point, dps)
            reference = z_c2(r, pure, order, evaluator).lambda_coefficients()
            five = z_c2(r, fived, order, evaluator).lambda_coefficients()
            worst = max(
                (abs(five.get(e, 0) - c) / abs(c) for e, c in reference.items()), default=mpmath.mpf(0)
            )
            entries.append(
                CheckEntry(
                    f"5d beta=1e-3 vs pure, point {index}",
                    bool(worst < 1e-4),
                    {"max_rel_deviation": mpmath.nstr(worst, 6), "tolerance": 1e-4},
                )
            )
            counted = z_c2(r, chiy, order, evaluator).lambda_coefficients()
            worst = mpmath.mpf(0)
            for n in range(order // (2 * r) + 1):
                expected = fixed_point_count(r, n)
                value = counted.get(2 * r * n, mpmath.mpf(0))
                worst = max(worst, abs(value - expected) / expected)
            entries.append(
                CheckEntry(
                    f"chi_y y=1 vs Euler-class count, point {index}",
                    bool(worst < 1e-20),
                    {"max_rel_deviation": mpmath.nstr(worst, 6), "tolerance": 1e-20},
                )
            )
    return entries
