import json

import pytest

from algebra.symbols import LinearForm, SymbolTable
from localization.geometry import (
    builtin_surface,
    chain_to_dict,
    divisor_classes,
    dsq_norm,
    enumerate_divisor_tuples,
    equivariant_integral,
    first_chern_pairing,
    fixed_points,
    instanton_number,
    list_available_surfaces,
    load_surface,
    moduli_dimension,
    q_degree,
    resolve_surface,
    save_surface,
    weight_table,
)
from localization.partitions import EMPTY, Partition
from utils.errors import SurfaceError, SurfaceValidationError


def test_f2_weight_table():
    f2 = builtin_surface("F2")
    weights = [(v.w1, v.w2) for v in f2.vertices]
    assert weights == [
        (LinearForm.eps(1, 0), LinearForm.eps(0, 1)),
        (LinearForm.eps(-1, 0), LinearForm.eps(2, 1)),
    ]
    assert f2.linf.u == LinearForm.eps(0, -1)
    assert f2.linf.w == LinearForm.eps(1, 0)
    assert f2.k == 2
    assert f2.edges[0].weights_at == (LinearForm.eps(0, 1), LinearForm.eps(2, 1))


def test_f1_edge():
    f1 = builtin_surface("F1")
    assert f1.intersections == ((-1,),)
    assert first_chern_pairing(f1, (1,)) == 1


def test_c2():
    c2 = builtin_surface("C2")
    assert len(c2.vertices) == 1
    assert c2.n_edges == 0
    assert c2.linf.v == c2.linf.u - c2.linf.w


def test_unknown_surface():
    with pytest.raises(SurfaceError):
        builtin_surface("P3")
    with pytest.raises(SurfaceError):
        builtin_surface("F0")


def test_registry():
    ids = [entry["id"] for entry in list_available_surfaces()]
    assert ids[:2] == ["C2", "F1"]


def test_divisor_tuples():
    f1, f2 = builtin_surface("F1"), builtin_surface("F2")
    assert enumerate_divisor_tuples(f1, 2, (0,), 0) == [((0,), (0,))]
    assert enumerate_divisor_tuples(f1, 2, (0,), 1) == [((0,), (0,))]
    assert enumerate_divisor_tuples(f1, 2, (0,), 4) == [((0,), (0,)), ((-1,), (1,)), ((1,), (-1,))]
    assert enumerate_divisor_tuples(f2, 1, (3,), 10) == [((3,),)]


def test_divisor_tuples_sum_to_d():
    f2 = builtin_surface("F2")
    for divisors in enumerate_divisor_tuples(f2, 3, (1,), 8):
        assert sum(m for (m,) in divisors) == 1
        assert dsq_norm(f2, divisors) <= 8


def test_dsq_norm():
    f1, f2 = builtin_surface("F1"), builtin_surface("F2")
    assert dsq_norm(f1, ((0,), (0,))) == 0
    assert dsq_norm(f1, ((1,), (-1,))) == 4
    assert dsq_norm(f2, ((1,), (0,))) == 2


def test_q_degree_and_classes():
    f2 = builtin_surface("F2")
    assert q_degree(f2, (1,)) == (-2,)
    assert (0,) in divisor_classes(f2, 2)
    assert (1,) in divisor_classes(f2, 2)


def test_localization_integrals():
    table = SymbolTable(rank=1)
    e1, e2 = table.gen("eps1"), table.gen("eps2")

    def one(index, weights):
        return table.one()

    c2 = builtin_surface("C2")
    assert equivariant_integral(c2, one, table, compact=True) == table.zero()
    assert equivariant_integral(c2, one, table) == 1 / (e1 * e2)
    for k in (1, 2, 3):
        fk = builtin_surface(f"F{k}")
        assert equivariant_integral(fk, one, table) == 1 / (e1 * e2) + 1 / (-e1 * (e2 + k * e1))
        assert equivariant_integral(fk, one, table, compact=True) == table.zero()


def test_moduli_dimension():
    assert moduli_dimension(2, 0, -4) == 4
    assert moduli_dimension(1, 3, -2) == 6


def test_shipped_fixture(surfaces_dir):
    assert load_surface(surfaces_dir / "F3.json") == builtin_surface("F3")
    assert resolve_surface(str(surfaces_dir / "F3.json")) == builtin_surface("F3")


def test_broken_fixture(fixtures_dir):
    with pytest.raises(SurfaceValidationError) as err:
        load_surface(fixtures_dir / "broken.json")
    assert err.value.invariant == "normal weight relation violated"


def test_empty_vertex_list(tmp_path):
    data = chain_to_dict(builtin_surface("C2"))
    data["vertices"] = []
    path = tmp_path / "empty.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(SurfaceValidationError):
        load_surface(path)


def test_positive_definite_rejected(tmp_path):
    data = chain_to_dict(builtin_surface("F1"))
    data["intersections"] = [[1]]
    data["edges"][0]["self_intersection"] = 1
    path = tmp_path / "positive.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(SurfaceValidationError):
        load_surface(path)


def test_unreadable_file(tmp_path):
    path = tmp_path / "garbage.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(SurfaceError):
        load_surface(path)


def test_save_then_load(tmp_path):
    f2 = builtin_surface("F2")
    assert load_surface(save_surface(f2, tmp_path / "F2.json")) == f2


def test_weight_table():
    table = weight_table(builtin_surface("F2"))
    assert list(table.columns) == ["vertex", "w1", "w2", "w_l0"]
    assert len(table) == 2


def test_fixed_points():
    f1 = builtin_surface("F1")
    assert fixed_points(f1) == [v.weights for v in f1.vertices]
    compact = fixed_points(f1, compact=True)
    assert len(compact) == 4
    assert compact[2] == (f1.linf.w, f1.linf.u)
    assert compact[3] == (-f1.linf.w, f1.linf.v)


def test_instanton_number():
    f1 = builtin_surface("F1")
    one = Partition((1,))
    partitions = ((one, EMPTY), (EMPTY, EMPTY))
    assert instanton_number(f1, ((0,), (0,)), partitions) == 1
    # D_1.D_2 = (l)(-l) = 1 on F1
    assert instanton_number(f1, ((1,), (-1,)), partitions) == 2
