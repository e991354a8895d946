import numpy as np
import pytest

from algebra.symbols import LinearForm, SymbolTable
from localization.characters import (
    FixedPointConfig,
    edge_character_closed_form_Fk,
    expected_dimension,
    expected_rank,
    h1_weights,
    natural_character,
    random_fixed_point,
    tangent_character,
    tangent_euler_sum,
)
from localization.geometry import builtin_surface
from localization.partitions import EMPTY, Partition
from utils.errors import CharacterError

A1 = LinearForm.symbol("a1")


def test_h1_f1():
    f1 = builtin_surface("F1")
    weights = h1_weights(f1, (-1,)).forms()
    assert len(weights) == 1 and weights[0].is_zero
    assert h1_weights(f1, (1,)).forms() == []


def test_h1_f2():
    assert h1_weights(builtin_surface("F2"), (1,)).forms() == [LinearForm.eps(1, 1)]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("d_diff", [-3, -2, -1, 0, 1, 2, 3])
def test_h1_matches_closed_form(k, d_diff):
    chain = builtin_surface(f"F{k}")
    assert h1_weights(chain, (-d_diff,)).character() == edge_character_closed_form_Fk(k, d_diff)


def test_closed_form_examples():
    assert edge_character_closed_form_Fk(1, 1) == {(0, 0): 1}
    assert edge_character_closed_form_Fk(3, -1) == {(1, 1): 1, (2, 1): 1}
    assert edge_character_closed_form_Fk(5, 0) == {}
    with pytest.raises(CharacterError):
        edge_character_closed_form_Fk(0, 1)


def test_tangent_c2_single_box():
    c2 = builtin_surface("C2")
    config = FixedPointConfig(((),), ((Partition((1,)),),))
    weights = tangent_character(c2, config).forms()
    assert sorted(map(str, weights)) == sorted([str(LinearForm.eps(1, 0)), str(LinearForm.eps(0, 1))])


def test_tangent_empty_config():
    fk = builtin_surface("F2")
    config = FixedPointConfig(((0,),), ((EMPTY,), (EMPTY,)))
    assert tangent_character(fk, config).forms() == []
    assert natural_character(fk, config).forms() == []


def test_tangent_f1_rank_two():
    f1 = builtin_surface("F1")
    config = FixedPointConfig(((1,), (-1,)), ((EMPTY, EMPTY), (EMPTY, EMPTY)))
    assert len(tangent_character(f1, config)) == 4 == expected_dimension(f1, config)


def test_natural_examples():
    c2 = builtin_surface("C2")
    config = FixedPointConfig(((),), ((Partition((1,)),),))
    assert natural_character(c2, config).forms() == [A1]

    f2 = builtin_surface("F2")
    config = FixedPointConfig(((1,),), ((EMPTY,), (EMPTY,)))
    assert natural_character(f2, config).forms() == [A1 + LinearForm.eps(1, 1)]
    assert expected_rank(f2, config) == 1


@pytest.mark.parametrize("name", ["F1", "F2", "F3"])
def test_random_fixed_points_obey_dimension_laws(name):
    rng = np.random.default_rng(7)
    chain = builtin_surface(name)
    for r in (1, 2, 3):
        for _ in range(20):
            config = random_fixed_point(chain, r, rng)
            assert len(tangent_character(chain, config)) == expected_dimension(chain, config)
            assert len(natural_character(chain, config)) == expected_rank(chain, config)


def test_euler_sum_rank_one_c2():
    table = SymbolTable(rank=1)
    e1, e2 = table.gen("eps1"), table.gen("eps2")
    series = tangent_euler_sum(builtin_surface("C2"), 1, (), 4, table)
    assert series.lambda_coefficients()[2] == 1 / (e1 * e2)
    assert series.lambda_coefficients()[4] == 1 / (2 * e1**2 * e2**2)
