from fractions import Fraction

import mpmath
import pytest

from algebra.symbols import LinearForm, SymbolTable
from localization.classes import (
    AhatBetaClass,
    ChiYClass,
    EllipticClass,
    EulerClass,
    ExactEvaluator,
    LinearShiftClass,
    NumericEvaluator,
    OneClass,
    ToddClass,
    ahat_limit_check,
    eval_class,
    get_evaluator,
    get_mult_class,
    list_available_classes,
)
from utils.errors import ClassEvaluationError

E1, E2 = LinearForm.symbol("eps1"), LinearForm.symbol("eps2")
A1, M1 = LinearForm.symbol("a1"), LinearForm.symbol("m1")


def test_one_class(exact1):
    assert OneClass().evaluate([E1, E2, E1 + E2], exact1) == exact1.one()


def test_euler_class(exact1, table1):
    assert EulerClass().evaluate([E1, E2], exact1) == table1.gen("eps1") * table1.gen("eps2")
    assert eval_class(EulerClass(), [E1, E2], exact1) == table1.gen("eps1") * table1.gen("eps2")


def test_linear_shift():
    table = SymbolTable(rank=1, n_fundamental=1)
    evaluator = ExactEvaluator(table)
    assert LinearShiftClass([M1]).evaluate([A1], evaluator) == table.gen("m1") + table.gen("a1")


def test_transcendental_needs_numeric(exact1):
    with pytest.raises(ClassEvaluationError):
        AhatBetaClass(1).evaluate([E1], exact1)


def test_ahat_small_beta():
    value = ahat_limit_check([E1], {"eps1": 1}, beta=Fraction(1, 1000))
    assert float(value) == pytest.approx(1 - 1e-6 / 24, abs=1e-12)
    assert AhatBetaClass(Fraction(1, 1000)).evaluate([], NumericEvaluator({})) == 1


def test_chiy_at_one_is_euler():
    with mpmath.workdps(30):
        evaluator = NumericEvaluator({"eps1": mpmath.mpf("0.37"), "eps2": mpmath.mpf("-1.2")})
        value = ChiYClass(1).evaluate([E1, E2], evaluator)
        assert mpmath.almosteq(value, mpmath.mpf("0.37") * mpmath.mpf("-1.2"), 1e-25)


def test_todd_regular_at_zero():
    assert ToddClass().kernel(mpmath.mpf(0)) == 1
    assert ToddClass().kernel(mpmath.mpf("1e-20")) == pytest.approx(1)


def test_elliptic_at_q_zero_is_chiy_up_to_normalization():
    x = mpmath.mpf("0.4")
    y = Fraction(1, 3)
    elliptic = EllipticClass(y, 0).kernel(x)
    chiy = ChiYClass(y).kernel(x)
    assert mpmath.almosteq(elliptic, chiy / mpmath.sqrt(mpmath.mpf(1) / 3), 1e-12)


def _elliptic_product(x, y, q, terms):
    value = x / mpmath.sqrt(y)
    for n in range(1, terms + 1):
        value *= (1 - y * q ** (n - 1) * mpmath.exp(-x)) * (1 - q**n * mpmath.exp(x) / y)
        value /= (1 - q ** (n - 1) * mpmath.exp(-x)) * (1 - q**n * mpmath.exp(x))
    return value


@pytest.mark.parametrize("terms", [1, 4, 12])
@pytest.mark.parametrize("x", ["0.4", "-1.3"])
def test_elliptic_matches_truncated_product(terms, x):
    with mpmath.workdps(30):
        x = mpmath.mpf(x)
        y, q = mpmath.mpf(1) / 3, mpmath.mpf(1) / 5
        kernel = EllipticClass(Fraction(1, 3), Fraction(1, 5), terms=terms).kernel(x)
        assert mpmath.almosteq(kernel, _elliptic_product(x, y, q, terms), 1e-25)


def test_elliptic_truncation_estimate_bounds_the_next_factor():
    with mpmath.workdps(30):
        x = mpmath.mpf("0.4")
        short = EllipticClass(Fraction(1, 3), Fraction(1, 5), terms=6)
        longer = EllipticClass(Fraction(1, 3), Fraction(1, 5), terms=7)
        change = abs(longer.kernel(x) / short.kernel(x) - 1)
        assert mpmath.almosteq(change, short.truncation_estimate(x), 1e-20)
        assert short.truncation_estimate(x) < mpmath.mpf(10) ** -4


def test_elliptic_rejects_bad_nome():
    with pytest.raises(ClassEvaluationError):
        EllipticClass(1, 1)
    with pytest.raises(ClassEvaluationError):
        EllipticClass(0, Fraction(1, 10))


def test_factory():
    assert isinstance(get_mult_class("euler"), EulerClass)
    assert isinstance(get_mult_class("ahat", beta=2), AhatBetaClass)
    with pytest.raises(ClassEvaluationError):
        get_mult_class("pontryagin")
    assert {entry["id"] for entry in list_available_classes()} >= {"one", "euler", "ahat", "chiy", "elliptic"}


def test_evaluator_factory(table1):
    assert get_evaluator(table1).exact
    assert not get_evaluator(point={"eps1": 1}).exact
    with pytest.raises(ClassEvaluationError):
        get_evaluator()
