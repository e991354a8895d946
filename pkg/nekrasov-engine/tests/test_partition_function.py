from fractions import Fraction

import mpmath
import pytest

from algebra.series import LambdaSeries
from algebra.symbols import SymbolTable
from localization.characters import tangent_euler_sum
from localization.classes import ExactEvaluator, LinearShiftClass, NumericEvaluator, OneClass
from localization.geometry import builtin_surface, q_degree
from localization.partition_function import (
    TheorySpec,
    check_degenerations,
    check_instanton_conjecture,
    eps_limit,
    f_inst,
    fixed_point_count,
    instanton_limits,
    l_factors,
    leading_normalization,
    m_factors,
    parse_theory,
    rank_one_product,
    richardson,
    sample_points,
    z_c2,
    z_generating,
    z_master,
)
from localization.partitions import EMPTY, Partition
from utils.errors import TheoryError

PURE = TheorySpec("pure")
ONE = Partition((1,))


def _gens(table, *names):
    return [table.gen(name) for name in names]


@pytest.mark.parametrize(
    "text, expected",
    [
        ("pure", "pure"),
        ("fund:2", "fund:2"),
        ("adjoint", "adjoint"),
        ("5d:1/2", "5d:1/2"),
        ("chiy:3", "chiy:3"),
        ("elliptic:2,1/10", "elliptic:2,1/10"),
    ],
)
def test_parse_theory(text, expected):
    assert str(parse_theory(text)) == expected


@pytest.mark.parametrize("text", ["fund:0", "5d:-1", "elliptic:2", "elliptic:2,3", "sugra", "chiy:x"])
def test_parse_theory_rejects(text):
    with pytest.raises(TheoryError):
        parse_theory(text)


def test_exact_ok():
    assert PURE.exact_ok and parse_theory("fund:1").exact_ok
    assert not parse_theory("5d:1").exact_ok


def test_m_factors(exact1, exact2, table1, table2):
    assert m_factors((EMPTY,), OneClass(), "pair", 0, 0, exact1) == exact1.one()
    e1, e2 = _gens(table1, "eps1", "eps2")
    assert m_factors((ONE,), OneClass(), "euler_pair", 0, 0, exact1) == e1 * e2
    e1, e2, a1, a2 = _gens(table2, "eps1", "eps2", "a1", "a2")
    assert m_factors((ONE, EMPTY), OneClass(), "euler_pair", 0, 1, exact2) == a2 - a1 + e1 + e2


def test_m_factors_unknown_kind(exact1):
    with pytest.raises(TheoryError):
        m_factors((ONE,), OneClass(), "triple", 0, 0, exact1)


def test_z_c2_rank_one(table1):
    e1, e2 = _gens(table1, "eps1", "eps2")
    z = z_c2(1, PURE, 4).lambda_coefficients()
    assert z[0] == table1.one()
    assert z[2] == 1 / (e1 * e2)
    assert z[4] == 1 / (2 * e1**2 * e2**2)


def test_z_c2_rank_two_leading(table2):
    e1, e2, a1, a2 = _gens(table2, "eps1", "eps2", "a1", "a2")
    z = z_c2(2, PURE, 4).lambda_coefficients()
    assert set(z) == {0, 4}
    expected = 1 / (e1 * e2 * (a2 - a1 + e1 + e2) * (a1 - a2)) + 1 / (e1 * e2 * (a1 - a2 + e1 + e2) * (a2 - a1))
    assert z[4] == expected


def test_z_c2_negative_order():
    with pytest.raises(TheoryError):
        z_c2(1, PURE, -1)


def test_l_factors(table2):
    f1 = builtin_surface("F1")
    a1, a2 = _gens(table2, "a1", "a2")
    assert l_factors(f1, ((0,), (0,)), PURE, ExactEvaluator(table2)) == table2.one()
    assert l_factors(f1, ((-1,), (0,)), PURE, ExactEvaluator(table2)) == 1 / (a1 - a2)


def test_l_factors_fundamental():
    table = SymbolTable(rank=1, n_fundamental=1)
    e1, e2, a1, m1 = _gens(table, "eps1", "eps2", "a1", "m1")
    factor = l_factors(builtin_surface("F2"), ((1,),), parse_theory("fund:1"), ExactEvaluator(table))
    assert factor == m1 + a1 + e1 + e2


@pytest.mark.parametrize("k", [1, 2, 3])
def test_z_master_rank_one(table1, k):
    e1, e2 = _gens(table1, "eps1", "eps2")
    z = z_master(builtin_surface(f"F{k}"), 1, (0,), PURE, 2).lambda_coefficients()
    assert z[2] == 1 / (e1 * e2) + 1 / (-e1 * (e2 + k * e1))


def test_z_master_order_zero(table2):
    z = z_master(builtin_surface("F1"), 2, (0,), PURE, 0)
    assert z.lambda_coefficients() == {0: table2.one()}


def test_z_master_matches_fixed_point_sum(table2):
    f1 = builtin_surface("F1")
    lhs = z_master(f1, 2, (0,), PURE, 4)
    rhs = tangent_euler_sum(f1, 2, (0,), 4, table2)
    assert (lhs - rhs).lambda_coefficients() == {}


@pytest.mark.parametrize("name, d", [("F1", (0,)), ("F1", (1,)), ("F2", (1,)), ("F3", (-1,))])
def test_rank_one_factorization(name, d):
    chain = builtin_surface(name)
    lhs = z_master(chain, 1, d, PURE, 4)
    rhs = rank_one_product(chain, d, PURE, 4)
    assert (lhs - rhs).lambda_coefficients() == {}


def test_z_generating(table1):
    f2 = builtin_surface("F2")
    z = z_generating(f2, 1, PURE, 2, dbound=2)
    assert z.coefficient(0, q_degree(f2, (1,))) == table1.one()
    assert z.coefficient(0, q_degree(f2, (0,))) == table1.one()


def test_z_generating_dbound_zero():
    f2 = builtin_surface("F2")
    z = z_generating(f2, 1, PURE, 4, dbound=0)
    plain = z_master(f2, 1, (0,), PURE, 4)
    assert {e: c for (e, _), c in z.items()} == plain.lambda_coefficients()


def test_f_inst_rank_one_c2(exact1, table1):
    c2 = builtin_surface("C2")
    f = f_inst(c2, z_c2(1, PURE, 8, exact1), exact1)
    assert f.lambda_coefficients() == {2: table1.constant(-1)}


def test_f_inst_of_one(exact1):
    one = LambdaSeries.constant(6, exact1.one(), exact1.one())
    assert f_inst(builtin_surface("F1"), one, exact1).lambda_coefficients() == {}


def test_f_inst_f1(exact1, table1):
    e1, e2 = _gens(table1, "eps1", "eps2")
    f1 = builtin_surface("F1")
    f = f_inst(f1, z_master(f1, 1, (0,), PURE, 2, exact1), exact1)
    expected = -(-e2) * (-e2 - e1) * (1 / (e1 * e2) - 1 / (e1 * (e2 + e1)))
    assert f.lambda_coefficients()[2] == expected


def test_leading_normalization(table1):
    z = LambdaSeries.from_coefficients(6, {2: table1.constant(3), 4: table1.constant(6)}, table1.one())
    e0, c, unit = leading_normalization(z)
    assert e0 == 2
    assert c == table1.constant(3)
    assert unit.lambda_coefficients() == {0: table1.one(), 2: table1.constant(2)}


def test_leading_normalization_of_zero(table1):
    with pytest.raises(TheoryError):
        leading_normalization(LambdaSeries(4, {}, table1.one()))


def test_eps_limit_rank_one(exact1, table1):
    f = f_inst(builtin_surface("C2"), z_c2(1, PURE, 6, exact1), exact1)
    report = eps_limit(f, table1)
    assert report.analytic and report.consistent
    assert report.limits == {2: table1.constant(-1)}


def test_eps_limit_singular(table1):
    e1, e2 = _gens(table1, "eps1", "eps2")
    series = LambdaSeries.from_coefficients(2, {2: 1 / (e1 * e2)}, table1.one())
    report = eps_limit(series, table1)
    assert not report.analytic
    assert set(report.valuations[2].values()) == {-2}


def test_eps_limit_vanishing(table2):
    e1, e2, a1, a2 = _gens(table2, "eps1", "eps2", "a1", "a2")
    series = LambdaSeries.from_coefficients(4, {4: (e1 + e2) / (a1 - a2)}, table2.one())
    report = eps_limit(series, table2)
    assert report.analytic
    assert report.limits[4] == table2.zero()


def test_eps_limit_skips_resonant(table1):
    e1, e2 = _gens(table1, "eps1", "eps2")
    # vanishes along the first default direction (1, -3)
    resonant = 3 * e1 + e2
    series = LambdaSeries.from_coefficients(2, {2: e1 / resonant}, table1.one())
    report = eps_limit(series, table1)
    assert report.skipped == ["(1,-3)"]


@pytest.mark.parametrize("name, k", [("F1", 1), ("F2", 2)])
def test_instanton_conjecture_rank_two(name, k):
    entries = check_instanton_conjecture(builtin_surface(name), 2, (0,), PURE, 4)
    assert [entry.passed for entry in entries] == [True, True, True]
    assert entries[1].details["k"] == k


def test_instanton_conjecture_rank_one_constants(table1):
    limits = instanton_limits(builtin_surface("F1"), 1, (0,), PURE, 6)
    assert limits == {2: table1.constant(-1)}


@pytest.mark.parametrize("name, k", [("F1", 1), ("F2", 2)])
@pytest.mark.parametrize("d", [(0,), (1,)])
@pytest.mark.parametrize("theory", ["pure", "fund:1", "fund:2", "adjoint"])
def test_instanton_conjecture_theories(name, k, d, theory):
    entries = check_instanton_conjecture(builtin_surface(name), 2, d, parse_theory(theory), 4)
    assert all(entry.passed for entry in entries), [entry.to_dict() for entry in entries]
    assert entries[1].details["k"] == k


def test_instanton_conjecture_pure_order_eight():
    entries = check_instanton_conjecture(builtin_surface("F1"), 2, (0,), PURE, 8)
    assert all(entry.passed for entry in entries), [entry.to_dict() for entry in entries]


def test_instanton_limits_scale_with_k(table2):
    c2 = instanton_limits(builtin_surface("C2"), 2, (), PURE, 4)
    f2 = instanton_limits(builtin_surface("F2"), 2, (0,), PURE, 4)
    assert f2[4] == 2 * c2[4]


def test_numeric_mode_needs_no_exact_theory():
    with pytest.raises(TheoryError):
        check_instanton_conjecture(builtin_surface("F1"), 1, (0,), parse_theory("5d:1"), 2)


def test_sample_points_reproducible():
    table = SymbolTable(rank=3, n_fundamental=1)
    first, second = sample_points(table, 2, seed=5), sample_points(table, 2, seed=5)
    assert first == second
    for point in first:
        assert Fraction(1, 5) <= abs(point["eps1"]) <= Fraction(1, 2)
        assert 1 <= point["a2"] - point["a1"] <= 3
        assert 0 < point["m1"] <= 2


def test_richardson_removes_linear_and_quadratic_terms():
    values = [mpmath.mpf(2) + 3 * t + 5 * t**2 for t in (mpmath.mpf("1e-2"), mpmath.mpf("1e-3"), mpmath.mpf("1e-4"))]
    assert mpmath.almosteq(richardson(values), 2, 1e-12)


def test_fixed_point_count():
    assert [fixed_point_count(1, n) for n in range(5)] == [1, 1, 2, 3, 5]
    assert fixed_point_count(2, 3) == 10


def test_degenerations():
    points = sample_points(PURE.symbol_table(1), 2, seed=11)
    entries = check_degenerations(1, 4, points)
    assert len(entries) == 4
    assert all(entry.passed for entry in entries)


def test_numeric_evaluator_agrees_with_exact(table1):
    point = {"eps1": Fraction(1, 3), "eps2": Fraction(-2, 7), "a1": Fraction(0)}
    exact = z_c2(1, PURE, 4).lambda_coefficients()
    with mpmath.workdps(30):
        numeric = z_c2(1, PURE, 4, NumericEvaluator(point, 30)).lambda_coefficients()
        e1, e2 = mpmath.mpf(1) / 3, mpmath.mpf(-2) / 7
        assert mpmath.almosteq(numeric[4], 1 / (2 * e1**2 * e2**2), 1e-25)
    assert set(exact) == set(numeric)


def test_shift_class_fundamental_series():
    theory = parse_theory("fund:1")
    table = theory.symbol_table(1)
    e1, e2, a1, m1 = _gens(table, "eps1", "eps2", "a1", "m1")
    z = z_c2(1, theory, 2).lambda_coefficients()
    assert z[2] == (m1 + a1) / (e1 * e2)
    assert isinstance(theory.classes()[1], LinearShiftClass)
