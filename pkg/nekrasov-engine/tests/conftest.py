import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from algebra.symbols import LinearForm, SymbolTable  # noqa: E402
from localization.classes import ExactEvaluator  # noqa: E402

FIXTURES = Path(__file__).resolve().parent / "fixtures"
SURFACES = ROOT / "surfaces"


@pytest.fixture
def table1():
    return SymbolTable(rank=1)


@pytest.fixture
def table2():
    return SymbolTable(rank=2)


@pytest.fixture
def exact1(table1):
    return ExactEvaluator(table1)


@pytest.fixture
def exact2(table2):
    return ExactEvaluator(table2)


@pytest.fixture
def eps():
    return LinearForm.symbol("eps1"), LinearForm.symbol("eps2")


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def surfaces_dir():
    return SURFACES
