import pytest

from oracles.selftest import (
    check_dimension_laws,
    check_edge_characters,
    check_rank_one,
    check_rank_one_factorization,
    check_vertex_characters,
    run_selftest,
)


def test_vertex_characters():
    entry = check_vertex_characters(max_size=3)
    assert entry.passed, entry.details["failures"]
    assert entry.details["diagrams"] == 7


def test_edge_characters():
    entry = check_edge_characters(ks=(1, 2), bound=3)
    assert entry.passed, entry.details["failures"]


def test_dimension_laws():
    entry = check_dimension_laws(count=40, seed=7)
    assert entry.passed, entry.details["failures"]


def test_rank_one():
    entry = check_rank_one(order=8)
    assert entry.passed, entry.details
    assert entry.to_dict()["name"] == "rank-one F_inst on C^2"


def test_rank_one_factorization():
    assert check_rank_one_factorization(order=4).passed


@pytest.mark.slow
def test_full_battery():
    entries = run_selftest()
    assert [entry.name for entry in entries if not entry.passed] == []
