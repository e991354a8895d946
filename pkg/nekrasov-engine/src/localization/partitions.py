"""Young diagrams, arm/leg statistics and the vertex weight multisets."""

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Generator, Iterable, List, Tuple

from algebra.laurent import TwoVarLaurent, character_monomial, laurent_field, laurent_terms
from algebra.symbols import LinearForm
from utils.errors import PartitionError

Cell = Tuple[int, int]


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing positive row lengths; cells are (row, col), 0-based."""

    rows: Tuple[int, ...] = ()

    def __post_init__(self):
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        if any(r <= 0 for r in rows):
            raise PartitionError(f"rows must be positive: {rows}")
        if any(a < b for a, b in zip(rows, rows[1:])):
            raise PartitionError(f"rows must be weakly decreasing: {rows}")

    @property
    def size(self) -> int:
        return sum(self.rows)

    def __len__(self) -> int:
        return self.size

    def row_length(self, i: int) -> int:
        return self.rows[i] if 0 <= i < len(self.rows) else 0

    @cached_property
    def column_heights(self) -> Tuple[int, ...]:
        if not self.rows:
            return ()
        return tuple(sum(1 for r in self.rows if r > j) for j in range(self.rows[0]))

    def column_height(self, j: int) -> int:
        heights = self.column_heights
        return heights[j] if 0 <= j < len(heights) else 0

    def transpose(self) -> "Partition":
        return Partition(self.column_heights)

    @cached_property
    def cells(self) -> Tuple[Cell, ...]:
        return tuple((i, j) for i, r in enumerate(self.rows) for j in range(r))

    def __contains__(self, cell: Cell) -> bool:
        i, j = cell
        return 0 <= i and 0 <= j < self.row_length(i)

    def __str__(self) -> str:
        return "(" + ",".join(str(r) for r in self.rows) + ")" if self.rows else "()"


EMPTY = Partition(())


def arm_length(S: Partition, cell: Cell) -> int:
    i, j = cell
    return S.row_length(i) - j - 1


def leg_length(T: Partition, cell: Cell) -> int:
    i, j = cell
    return T.column_height(j) - i - 1


def arm_leg(S: Partition, T: Partition, cell: Cell) -> Tuple[int, int]:
    """(a_S(s), l_T(s)); the cell must lie in S, l_T may be negative."""
    if cell not in S:
        raise PartitionError(f"cell {cell} is not in {S}")
    return arm_length(S, cell), leg_length(T, cell)


def nst_weights(S: Partition, T: Partition, w1: LinearForm, w2: LinearForm) -> List[LinearForm]:
    weights = [
        w1 * (-leg_length(T, s)) + w2 * (arm_length(S, s) + 1) for s in S.cells
    ]
    weights += [
        w1 * (leg_length(S, t) + 1) - w2 * arm_length(T, t) for t in T.cells
    ]
    return weights


def ns_weights(S: Partition, w1: LinearForm, w2: LinearForm) -> List[LinearForm]:
    # (row, col) are the leg- and arm-colengths of the cell
    return [w1 * (-i) - w2 * j for i, j in S.cells]


def hilbert_tangent_character_oracle(S: Partition, T: Partition) -> TwoVarLaurent:
    """Q_S t1 t2 + Q_T(1/t1, 1/t2) - Q_S Q_T(1/t1, 1/t2) (1 - t1)(1 - t2)."""
    K, t1, t2 = laurent_field()
    q_s = sum((character_monomial(i, j) for i, j in S.cells), K.zero)
    q_t = sum((character_monomial(-i, -j) for i, j in T.cells), K.zero)
    chi = q_s * t1 * t2 + q_t - q_s * q_t * (1 - t1) * (1 - t2)
    return {k: v for k, v in laurent_terms(chi).items() if v}


def natural_character_oracle(S: Partition) -> TwoVarLaurent:
    K, _, _ = laurent_field()
    q_s = sum((character_monomial(-i, -j) for i, j in S.cells), K.zero)
    return {k: v for k, v in laurent_terms(q_s).items() if v}


def weights_as_character(weights: Iterable[LinearForm]) -> TwoVarLaurent:
    """Multiset of pure eps weights as an exponent -> multiplicity map."""
    return dict(Counter(w.eps_pair() for w in weights))


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> Tuple[Partition, ...]:
    if n == 0:
        return (EMPTY,)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append(Partition((first,) + rest.rows))
    return tuple(out)


def enumerate_partitions(n: int) -> Tuple[Partition, ...]:
    """Partitions of n, reverse-lexicographic: (n), (n-1,1), ..."""
    if n < 0:
        raise PartitionError("cannot enumerate partitions of a negative integer")
    return _partitions(n, n)


def weak_compositions(n: int, parts: int) -> Generator[Tuple[int, ...], None, None]:
    """Ordered splits of n into `parts` nonnegative sizes, largest first part first."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in weak_compositions(n - first, parts - 1):
            yield (first,) + rest


def enumerate_tuples(r: int, n: int) -> List[Tuple[Partition, ...]]:
    """All r-tuples of partitions of total size n, deterministic order."""
    if r < 1 or n < 0:
        raise PartitionError(f"need r >= 1 and n >= 0, got r={r}, n={n}")
    result = []
    for sizes in weak_compositions(n, r):
        pools = [enumerate_partitions(k) for k in sizes]
        result.extend(itertools.product(*pools))
    return result


def tuples_up_to(r: int, n_max: int) -> List[Tuple[Partition, ...]]:
    out = []
    for n in range(n_max + 1):
        out.extend(enumerate_tuples(r, n))
    return out
