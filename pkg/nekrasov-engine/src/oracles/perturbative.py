"""Zeta-regularized gamma functions and the perturbative prepotentials built from them.

The 4d gamma function is evaluated with a subtracted Mellin integral: the
Laurent head of the kernel at t = 0 is integrated in closed form and the rest
goes to mpmath quadrature.  The 5d function is a polynomial plus an
exponentially convergent series.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import mpmath

from algebra.symbols import LinearForm
from localization.geometry import ToricChain
from localization.partition_function import CheckEntry, TheorySpec, richardson
from utils.errors import PerturbativeDomainError, QuadratureError, TheoryError

logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction, mpmath.mpf]

# extra digits for the cancelling head subtraction near t = 0
GUARD_DPS = 30
HEAD_TERMS = 40

PERT_DIRECTIONS: Tuple[Tuple[Fraction, Fraction], ...] = (
    (Fraction(1), Fraction(3, 10)),
    (Fraction(-1), Fraction(2, 7)),
)
GAMMA_DIRECTIONS: Tuple[Tuple[Fraction, Fraction], ...] = (
    (Fraction(1), Fraction(-21, 10)),
    (Fraction(-1), Fraction(-3, 2)),
)
LIMIT_SCALES: Tuple[Fraction, ...] = (Fraction(1, 10**2), Fraction(1, 10**3), Fraction(1, 10**4))


def _mp(value) -> mpmath.mpf:
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpmathify(value)


@dataclass(frozen=True)
class GammaEval:
    """A gamma-function value with an absolute error estimate."""

    value: mpmath.mpf
    error: mpmath.mpf
    params: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {"value": mpmath.nstr(self.value, 25), "error": mpmath.nstr(self.error, 3), **self.params}


def _check_eps(eps1, eps2):
    if eps1 == 0 or eps2 == 0:
        raise PerturbativeDomainError(f"gamma needs nonzero eps, got ({eps1}, {eps2})")
    if mpmath.im(eps1) != 0 or mpmath.im(eps2) != 0:
        raise PerturbativeDomainError("gamma is evaluated for real eps only")


def kernel_laurent(x, eps1, eps2, count: int) -> List[mpmath.mpf]:
    """Coefficients c_{-2}, c_{-1}, ... of e^{-tx} / ((e^{eps1 t} - 1)(e^{eps2 t} - 1)) at t = 0."""
    x, eps1, eps2 = _mp(x), _mp(eps1), _mp(eps2)
    bern = [mpmath.bernoulli(j) / mpmath.factorial(j) for j in range(count)]
    exp_part = [(-x) ** i / mpmath.factorial(i) for i in range(count)]
    first = [bern[j] * eps1**j for j in range(count)]
    second = [bern[j] * eps2**j for j in range(count)]
    pair = [mpmath.fsum(first[j] * second[n - j] for j in range(n + 1)) for n in range(count)]
    scale = 1 / (eps1 * eps2)
    return [scale * mpmath.fsum(exp_part[i] * pair[n - i] for i in range(n + 1)) for n in range(count)]


def _kernel(x, eps1, eps2) -> Callable:
    def h(t):
        return mpmath.exp(-t * x) / (mpmath.expm1(eps1 * t) * mpmath.expm1(eps2 * t))

    return h


def gamma4d(x: Number, eps1: Number, eps2: Number, lam: Number = 1, dps: Optional[int] = None) -> GammaEval:
    """gamma_{eps1,eps2}(x; Lambda) for x > 0, with Lambda entering as Lambda^s."""
    dps = dps or mpmath.mp.dps
    with mpmath.workdps(dps):
        x, eps1, eps2, lam = _mp(x), _mp(eps1), _mp(eps2), _mp(lam)
        if x <= 0:
            raise PerturbativeDomainError(f"gamma4d needs x > 0, got {mpmath.nstr(x, 10)}")
        if lam <= 0:
            raise PerturbativeDomainError("gamma4d needs Lambda > 0")
        _check_eps(eps1, eps2)

        coeffs = kernel_laurent(x, eps1, eps2, HEAD_TERMS + 3)
        c_m2, c_m1, c_0 = coeffs[0], coeffs[1], coeffs[2]
        split = min(mpmath.mpf(1) / 20, 1 / (1 + max(abs(x), abs(eps1), abs(eps2))))

        # int_0^split R(t) dt / t, termwise
        head = mpmath.fsum(coeffs[m + 2] * split**m / m for m in range(1, HEAD_TERMS + 1))
        head_error = abs(coeffs[HEAD_TERMS + 2]) * split ** (HEAD_TERMS + 1)

        h = _kernel(x, eps1, eps2)

        def remainder(t):
            with mpmath.workdps(dps + GUARD_DPS):
                return (h(t) - c_m2 / t**2 - c_m1 / t - c_0) / t

        try:
            middle, middle_error = mpmath.quad(remainder, [split, 1], error=True)
            tail, tail_error = mpmath.quad(lambda t: h(t) / t, [1, mpmath.inf], error=True)
        except (ZeroDivisionError, ValueError) as exc:
            raise QuadratureError(f"gamma4d quadrature failed at x={mpmath.nstr(x, 10)}: {exc}") from exc

        value = -c_m2 / 2 - c_m1 + c_0 * (mpmath.euler + mpmath.log(lam)) + head + middle + tail
        error = head_error + abs(middle_error) + abs(tail_error)
        if not mpmath.isfinite(value) or error > mpmath.mpf(10) ** (-(dps // 2)) * max(1, abs(value)):
            raise QuadratureError(
                f"gamma4d did not converge at x={mpmath.nstr(x, 10)}, eps=({mpmath.nstr(eps1, 6)}, "
                f"{mpmath.nstr(eps2, 6)}): error estimate {mpmath.nstr(error, 3)}"
            )
        params = {"x": mpmath.nstr(x, 20), "eps1": mpmath.nstr(eps1, 20), "eps2": mpmath.nstr(eps2, 20), "Lambda": mpmath.nstr(lam, 20)}
        return GammaEval(value, error, params)


def gamma5d_polynomial(x: Number, beta: Number, eps1: Number, eps2: Number, lam: Number = 1):
    """(-(beta/6)(x + (eps1 + eps2)/2)^3 + x^2 log(beta Lambda)) / (2 eps1 eps2)"""
    x, beta, eps1, eps2, lam = (_mp(v) for v in (x, beta, eps1, eps2, lam))
    shifted = x + (eps1 + eps2) / 2
    return (-(beta / 6) * shifted**3 + x**2 * mpmath.log(beta * lam)) / (2 * eps1 * eps2)


def gamma5d_series_term(n: int, x: Number, beta: Number, eps1: Number, eps2: Number):
    x, beta, eps1, eps2 = (_mp(v) for v in (x, beta, eps1, eps2))
    return mpmath.exp(-beta * n * x) / (n * mpmath.expm1(beta * n * eps1) * mpmath.expm1(beta * n * eps2))


def gamma5d_series(
    x: Number, beta: Number, eps1: Number, eps2: Number, max_terms: int = 100000
) -> Tuple[mpmath.mpf, mpmath.mpf, int]:
    """The n-series; returns (sum, tail bound, terms used)."""
    x, beta, eps1, eps2 = (_mp(v) for v in (x, beta, eps1, eps2))
    ratio = mpmath.exp(-beta * (x + max(eps1, 0) + max(eps2, 0)))
    if ratio >= 1:
        raise PerturbativeDomainError("the 5d series diverges for these parameters")
    target = mpmath.mpf(10) ** (-mpmath.mp.dps)
    total = mpmath.mpf(0)
    for n in range(1, max_terms + 1):
        term = gamma5d_series_term(n, x, beta, eps1, eps2)
        total += term
        bound = abs(term) * ratio / (1 - ratio)
        if n >= 2 and bound <= target * max(1, abs(total)):
            return total, bound, n
    raise PerturbativeDomainError(f"the 5d series did not converge in {max_terms} terms")


def gamma5d(
    x: Number, beta: Number, eps1: Number, eps2: Number, lam: Number = 1, dps: Optional[int] = None
) -> GammaEval:
    """gamma_{eps1,eps2}(x | beta; Lambda) for x > 0, beta > 0."""
    dps = dps or mpmath.mp.dps
    with mpmath.workdps(dps):
        x, beta, eps1, eps2, lam = (_mp(v) for v in (x, beta, eps1, eps2, lam))
        if beta <= 0 or x <= 0:
            raise PerturbativeDomainError("gamma5d needs beta > 0 and x > 0")
        if lam <= 0:
            raise PerturbativeDomainError("gamma5d needs Lambda > 0")
        _check_eps(eps1, eps2)
        series, bound, used = gamma5d_series(x, beta, eps1, eps2)
        value = gamma5d_polynomial(x, beta, eps1, eps2, lam) + series
        params = {
            "x": mpmath.nstr(x, 20),
            "beta": mpmath.nstr(beta, 20),
            "eps1": mpmath.nstr(eps1, 20),
            "eps2": mpmath.nstr(eps2, 20),
            "Lambda": mpmath.nstr(lam, 20),
            "series_terms": str(used),
        }
        return GammaEval(value, bound, params)


# perturbative prepotential


@dataclass
class PertResult:
    value: mpmath.mpf
    error: mpmath.mpf
    terms: List[Dict[str, str]] = field(default_factory=list)
    skipped: List[Dict[str, str]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.skipped

    def to_dict(self) -> Dict[str, object]:
        return {
            "value": mpmath.nstr(self.value, 25),
            "error": mpmath.nstr(self.error, 3),
            "complete": self.complete,
            "terms": self.terms,
            "skipped": self.skipped,
        }


def _rank_of(params: Mapping[str, object]) -> int:
    indices = [int(name[1:]) for name in params if re.fullmatch(r"a[1-9][0-9]*", name)]
    if not indices or sorted(indices) != list(range(1, len(indices) + 1)):
        raise TheoryError("parameters must assign a1..ar")
    return len(indices)


def gamma_arguments(theory: TheorySpec, r: int) -> List[Tuple[int, LinearForm]]:
    """(sign, argument) pairs entering F^pert for the theory."""
    a = [LinearForm.symbol(f"a{alpha}") for alpha in range(1, r + 1)]
    terms = []
    for alpha in range(r):
        for beta in range(r):
            terms.append((1, a[beta] - a[alpha]))
    if theory.kind == "fund":
        for beta in range(r):
            for f in range(1, theory.n_fundamental + 1):
                terms.append((-1, a[beta] + LinearForm.symbol(f"m{f}")))
    elif theory.kind == "adjoint":
        for alpha in range(r):
            for beta in range(r):
                terms.append((-1, LinearForm.symbol("m") + a[beta] - a[alpha]))
    elif theory.kind not in ("pure", "5d"):
        raise TheoryError(f"no perturbative part is defined for {theory}")
    return terms


def _gamma_for(theory: TheorySpec, dps: int) -> Callable:
    if theory.kind == "5d":
        return lambda x, e1, e2, lam: gamma5d(x, theory.beta, e1, e2, lam, dps)
    return lambda x, e1, e2, lam: gamma4d(x, e1, e2, lam, dps)


def f_pert(
    chain: ToricChain, theory: TheorySpec, params: Mapping[str, object], dps: Optional[int] = None
) -> PertResult:
    """u(u - kw) sum sign (gamma_{-w,u}(x) + gamma_{w,u-kw}(x)); x <= 0 terms are skipped and reported."""
    dps = dps or mpmath.mp.dps
    r = _rank_of(params)
    with mpmath.workdps(dps):
        point = {name: _mp(value) for name, value in params.items() if name != "Lambda"}
        lam = _mp(params.get("Lambda", 1))
        w = chain.linf.w.evaluate(point)
        u = chain.linf.u.evaluate(point)
        v = chain.linf.v.evaluate(point)
        charts = ((-w, u), (w, v))
        gamma = _gamma_for(theory, dps)

        total = mpmath.mpf(0)
        error = mpmath.mpf(0)
        result = PertResult(total, error)
        for sign, argument in gamma_arguments(theory, r):
            x = argument.evaluate(point)
            entry = {"sign": str(sign), "argument": str(argument), "x": mpmath.nstr(x, 15)}
            if x <= 0:
                logger.info("skipping gamma term at %s = %s: outside x > 0", argument, mpmath.nstr(x, 10))
                result.skipped.append(entry)
                continue
            for e1, e2 in charts:
                piece = gamma(x, e1, e2, lam)
                total += sign * piece.value
                error += piece.error
            result.terms.append(entry)
        prefactor = u * v
        result.value = prefactor * total
        result.error = abs(prefactor) * error
        return result


def gamma4d_limit_target(x: Number, lam: Number = 1):
    """-x^2 log(x / Lambda) / 2 + 3 x^2 / 4; complex principal branch for x < 0."""
    x, lam = _mp(x), _mp(lam)
    if x == 0:
        return mpmath.mpf(0)
    return -x**2 * mpmath.log(x / lam) / 2 + 3 * x**2 / 4


def gamma5d_limit_target(x: Number, beta: Number, lam: Number = 1):
    """-(beta/12) x^3 + x^2 log(beta Lambda) / 2 + Li_3(e^{-beta x}) / beta^2"""
    x, beta, lam = _mp(x), _mp(beta), _mp(lam)
    return -(beta / 12) * x**3 + x**2 * mpmath.log(beta * lam) / 2 + mpmath.polylog(3, mpmath.exp(-beta * x)) / beta**2


def f_pert_limit(
    theory: TheorySpec,
    a: Sequence[Number],
    m: Union[Number, Sequence[Number], None] = None,
    lam: Number = 1,
):
    """Closed-form eps -> 0 limit of F^pert on C^2; multiply by k for a toric surface."""
    a = [_mp(x) for x in a]
    pairs = [(alpha, beta) for alpha in range(len(a)) for beta in range(len(a)) if alpha != beta]
    if theory.kind == "5d":
        beta_len = _mp(theory.beta)
        return mpmath.fsum(
            -(beta_len / 12) * (a[p] - a[q]) ** 3 + (a[p] - a[q]) ** 2 * mpmath.log(beta_len * _mp(lam)) / 2
            for p, q in pairs
        )
    total = mpmath.fsum(gamma4d_limit_target(a[alpha] - a[beta], lam) for alpha, beta in pairs)
    if theory.kind == "pure":
        return total
    if theory.kind == "fund":
        masses = [_mp(x) for x in (m if isinstance(m, (list, tuple)) else [m])]
        if len(masses) != theory.n_fundamental:
            raise TheoryError(f"expected {theory.n_fundamental} masses, got {len(masses)}")
        return total - mpmath.fsum(gamma4d_limit_target(x + mf, lam) for x in a for mf in masses)
    if theory.kind == "adjoint":
        if m is None:
            raise TheoryError("the adjoint theory needs a mass m")
        m = _mp(m)
        return total - mpmath.fsum(gamma4d_limit_target(a[alpha] - a[beta] + m, lam) for alpha, beta in pairs)
    raise TheoryError(f"no perturbative limit is defined for {theory}")


# limit checks


def f_k(k: int, u, w, x, lam=1, gamma: Callable = None):
    """u(u - kw)(gamma_{-w,u}(x) + gamma_{w,u-kw}(x))"""
    gamma = gamma or (lambda x, e1, e2, lam: gamma4d(x, e1, e2, lam))
    v = u - k * w
    return u * v * (gamma(x, -w, u, lam).value + gamma(x, w, v, lam).value)


def _relative(value, target):
    return abs(value - target) / max(abs(target), mpmath.mpf(1))


def _extrapolated(sample: Callable, scales: Sequence[Fraction]):
    values = [sample(_mp(t)) for t in scales]
    return richardson(values), values


def _limit_entry(name, inputs, per_direction, target, tolerance) -> CheckEntry:
    worst = max(d["rel_error"] for d in per_direction.values())
    limits = [d["value"] for d in per_direction.values()]
    spread = max(_relative(lhs, limits[0]) for lhs in limits)
    passed = bool(worst < tolerance and spread < tolerance)
    return CheckEntry(
        name,
        passed,
        {
            "inputs": inputs,
            "target": mpmath.nstr(target, 20),
            "value": mpmath.nstr(limits[0], 20),
            "rel_error": mpmath.nstr(worst, 6),
            "direction_spread": mpmath.nstr(spread, 6),
            "tolerance": tolerance,
            "directions": {
                label: {"value": mpmath.nstr(d["value"], 20), "rel_error": mpmath.nstr(d["rel_error"], 6)}
                for label, d in per_direction.items()
            },
        },
    )


def check_gamma_limit(
    x: Number,
    lam: Number = 1,
    directions: Sequence[Tuple[Fraction, Fraction]] = GAMMA_DIRECTIONS,
    scales: Sequence[Fraction] = LIMIT_SCALES,
    tolerance: float = 1e-6,
    dps: int = 40,
) -> CheckEntry:
    """eps1 eps2 gamma(x) along eps = t (x1, x2), extrapolated to t = 0, against the closed form."""
    with mpmath.workdps(dps):
        target = gamma4d_limit_target(x, lam)
        per_direction = {}
        for x1, x2 in directions:

            def sample(t, x1=x1, x2=x2):
                e1, e2 = _mp(x1) * t, _mp(x2) * t
                return e1 * e2 * gamma4d(x, e1, e2, lam, dps).value

            value, _ = _extrapolated(sample, scales)
            per_direction[f"({x1},{x2})"] = {"value": value, "rel_error": _relative(value, target)}
        inputs = {"x": str(x), "Lambda": str(lam)}
        return _limit_entry(f"gamma limit x={x} Lambda={lam}", inputs, per_direction, target, tolerance)


def check_pert_limit(
    k: int,
    x: Number,
    lam: Number = 1,
    directions: Sequence[Tuple[Fraction, Fraction]] = PERT_DIRECTIONS,
    scales: Sequence[Fraction] = LIMIT_SCALES,
    tolerance: float = 1e-5,
    dps: int = 40,
) -> CheckEntry:
    """f_k along (u, w) = t (u0, w0) extrapolated to t = 0, against k times the gamma limit."""
    if k < 1:
        raise TheoryError(f"k must be positive, got {k}")
    with mpmath.workdps(dps):
        target = k * gamma4d_limit_target(x, lam)
        gamma = lambda y, e1, e2, l: gamma4d(y, e1, e2, l, dps)  # noqa: E731
        per_direction = {}
        for u0, w0 in directions:

            def sample(t, u0=u0, w0=w0):
                return f_k(k, _mp(u0) * t, _mp(w0) * t, _mp(x), _mp(lam), gamma)

            value, _ = _extrapolated(sample, scales)
            per_direction[f"({u0},{w0})"] = {"value": value, "rel_error": _relative(value, target)}
        inputs = {"k": k, "x": str(x), "Lambda": str(lam)}
        return _limit_entry(f"perturbative limit k={k} x={x}", inputs, per_direction, target, tolerance)


def check_pert_limit_5d(
    k: int,
    x: Number,
    beta: Number,
    lam: Number = 1,
    directions: Sequence[Tuple[Fraction, Fraction]] = PERT_DIRECTIONS,
    scales: Sequence[Fraction] = LIMIT_SCALES,
    tolerance: float = 1e-5,
    dps: int = 40,
) -> CheckEntry:
    """Five-dimensional f_k limit against k times the rescaled polynomial-plus-polylog target."""
    if k < 1:
        raise TheoryError(f"k must be positive, got {k}")
    with mpmath.workdps(dps):
        target = k * gamma5d_limit_target(x, beta, lam)
        gamma = lambda y, e1, e2, l: gamma5d(y, beta, e1, e2, l, dps)  # noqa: E731
        per_direction = {}
        for u0, w0 in directions:

            def sample(t, u0=u0, w0=w0):
                return f_k(k, _mp(u0) * t, _mp(w0) * t, _mp(x), _mp(lam), gamma)

            value, _ = _extrapolated(sample, scales)
            per_direction[f"({u0},{w0})"] = {"value": value, "rel_error": _relative(value, target)}
        inputs = {"k": k, "x": str(x), "beta": str(beta), "Lambda": str(lam)}
        return _limit_entry(f"5d perturbative limit k={k} x={x} beta={beta}", inputs, per_direction, target, tolerance)
