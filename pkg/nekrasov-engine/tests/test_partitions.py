import pytest

from localization.partitions import (
    EMPTY,
    Partition,
    arm_leg,
    arm_length,
    enumerate_partitions,
    enumerate_tuples,
    hilbert_tangent_character_oracle,
    leg_length,
    natural_character_oracle,
    ns_weights,
    nst_weights,
    tuples_up_to,
    weights_as_character,
)
from utils.errors import PartitionError


def test_arm_and_leg():
    assert arm_length(Partition((1,)), (0, 0)) == 0
    assert leg_length(EMPTY, (0, 0)) == -1
    assert arm_leg(Partition((3, 1)), Partition((3, 1)), (0, 0)) == (2, 1)


def test_arm_leg_needs_cell_of_s():
    with pytest.raises(PartitionError):
        arm_leg(Partition((1,)), Partition((2,)), (0, 1))


def test_invalid_rows():
    with pytest.raises(PartitionError):
        Partition((1, 2))
    with pytest.raises(PartitionError):
        Partition((2, 0))


def test_transpose():
    assert Partition((3, 1)).transpose() == Partition((2, 1, 1))
    assert Partition((2, 2)).column_heights == (2, 2)


def test_tangent_weights(eps):
    e1, e2 = eps
    assert nst_weights(EMPTY, EMPTY, e1, e2) == []
    assert sorted(map(str, nst_weights(Partition((1,)), Partition((1,)), e1, e2))) == sorted([str(e2), str(e1)])
    assert nst_weights(Partition((1,)), EMPTY, e1, e2) == [e1 + e2]


def test_natural_weights(eps):
    e1, e2 = eps
    assert ns_weights(EMPTY, e1, e2) == []
    assert [w.is_zero for w in ns_weights(Partition((1,)), e1, e2)] == [True]
    assert weights_as_character(ns_weights(Partition((2, 1)), e1, e2)) == {(0, 0): 1, (0, -1): 1, (-1, 0): 1}


@pytest.mark.parametrize("size", [0, 1, 2, 3])
def test_weights_match_character_oracle(eps, size):
    e1, e2 = eps
    diagrams = [y for n in range(size + 1) for y in enumerate_partitions(n)]
    for s in diagrams:
        assert weights_as_character(ns_weights(s, e1, e2)) == natural_character_oracle(s)
        for t in diagrams:
            assert weights_as_character(nst_weights(s, t, e1, e2)) == hilbert_tangent_character_oracle(s, t)


def test_partition_counts():
    assert [len(enumerate_partitions(n)) for n in range(7)] == [1, 1, 2, 3, 5, 7, 11]


def test_tuples():
    assert enumerate_tuples(1, 2) == [(Partition((2,)),), (Partition((1, 1)),)]
    assert sorted(enumerate_tuples(2, 1), key=str) == sorted([(Partition((1,)), EMPTY), (EMPTY, Partition((1,)))], key=str)
    assert len(enumerate_tuples(2, 3)) == 10
    assert len(tuples_up_to(2, 2)) == 1 + 2 + 5
