"""Equivariant characters at the fixed points of the framed moduli space.

Vertex pieces come from Young-diagram arm/leg data, edge pieces from H^1 of
line bundles on X, computed by exact division in ZZ(t1, t2).
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from algebra.laurent import TwoVarLaurent, character_monomial, laurent_field, laurent_terms
from algebra.series import LambdaSeries
from algebra.symbols import LinearForm, SymbolTable
from utils.errors import AlgebraError, CharacterError, SurfaceValidationError

from .geometry import (
    DivisorTuple,
    ToricChain,
    divisor_sum,
    dsq_norm,
    enumerate_divisor_tuples,
    first_chern_pairing,
    instanton_number,
    intersection,
    moduli_dimension,
)
from .partitions import Partition, enumerate_partitions, enumerate_tuples, nst_weights, ns_weights

logger = logging.getLogger(__name__)

EDGE_TAG = "edge"


@dataclass(frozen=True)
class WeightMultiset:
    """Weights with multiplicity, each entry tagged with where it came from."""

    entries: Tuple[Tuple[LinearForm, str], ...] = ()

    @classmethod
    def from_forms(cls, forms: Iterable[LinearForm], tag: str) -> "WeightMultiset":
        return cls(tuple((form, tag) for form in forms))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[LinearForm]:
        return (form for form, _ in self.entries)

    def __add__(self, other: "WeightMultiset") -> "WeightMultiset":
        return WeightMultiset(self.entries + other.entries)

    def shifted(self, by: LinearForm) -> "WeightMultiset":
        return WeightMultiset(tuple((form + by, tag) for form, tag in self.entries))

    def forms(self) -> List[LinearForm]:
        return [form for form, _ in self.entries]

    def counts(self) -> Counter:
        return Counter(self.forms())

    def character(self) -> TwoVarLaurent:
        """Exponent map for pure eps weights."""
        return dict(Counter(form.eps_pair() for form in self.forms()))

    def tagged(self, tag: str) -> "WeightMultiset":
        return WeightMultiset(tuple(entry for entry in self.entries if entry[1] == tag))

    def zero_weights(self) -> List[Tuple[LinearForm, str]]:
        return [entry for entry in self.entries if entry[0].is_zero]


@dataclass(frozen=True)
class FixedPointConfig:
    """(D, Y): divisors per color, partitions[v][alpha] per vertex and color."""

    divisors: DivisorTuple
    partitions: Tuple[Tuple[Partition, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.divisors)

    @property
    def boxes(self) -> int:
        return sum(y.size for per_vertex in self.partitions for y in per_vertex)


def _a(alpha: int) -> LinearForm:
    return LinearForm.symbol(f"a{alpha + 1}")


def _monomial(form: LinearForm):
    i, j = form.eps_pair()
    return character_monomial(i, j)


@lru_cache(maxsize=4096)
def h1_weights(chain: ToricChain, ddiff: Tuple[int, ...]) -> WeightMultiset:
    """Weights of H^1(X, O(D - l_inf)) for an edge-supported D."""
    ddiff = tuple(int(m) for m in ddiff)
    K, _, _ = laurent_field()
    total = K.zero
    for v, vertex in enumerate(chain.vertices):
        w_d = chain.vertex_weight(v, ddiff)
        total -= _monomial(w_d) / ((1 - _monomial(-vertex.w1)) * (1 - _monomial(-vertex.w2)))
    w, u, k = chain.linf.w, chain.linf.u, chain.linf.k
    total += 1 / ((1 - _monomial(-w)) * (1 - _monomial(u)))
    total += 1 / ((1 - _monomial(w)) * (1 - _monomial(u - w * k)))

    try:
        terms = laurent_terms(total)
    except AlgebraError as exc:
        raise CharacterError(f"H^1 character of {ddiff} on {chain.name} is not a Laurent polynomial: {exc}") from exc
    negative = {e: c for e, c in terms.items() if c < 0}
    if negative:
        raise CharacterError(f"H^1 character of {ddiff} on {chain.name} has negative terms {negative}")

    forms: List[LinearForm] = []
    for (i, j), count in sorted(terms.items()):
        forms.extend([LinearForm.eps(i, j)] * count)

    expected = h1_count(chain, ddiff)
    if len(forms) != expected:
        raise CharacterError(
            f"H^1 of {ddiff} on {chain.name} has {len(forms)} weights, expected {expected}"
        )
    return WeightMultiset.from_forms(forms, EDGE_TAG)


def h1_count(chain: ToricChain, divisor: Sequence[int]) -> int:
    """-(D.D + c1.D)/2"""
    twice = intersection(chain, divisor, divisor) + first_chern_pairing(chain, divisor)
    return -twice // 2


def check_edge_count_law(chain: ToricChain) -> None:
    """Every unit edge divisor and its negative has a valid H^1 character."""
    for e in range(chain.n_edges):
        for sign in (1, -1):
            unit = tuple(sign if i == e else 0 for i in range(chain.n_edges))
            try:
                h1_weights(chain, unit)
            except CharacterError as exc:
                raise SurfaceValidationError("edge count law", str(exc)) from exc


def edge_character_closed_form_Fk(k: int, d_diff: int) -> TwoVarLaurent:
    """Closed form of the F_k edge character with d_diff = d_alpha - d_beta."""
    if k < 1:
        raise CharacterError(f"F_k needs k >= 1, got {k}")
    terms: TwoVarLaurent = {}
    if d_diff > 0:
        for j in range(0, d_diff):
            for i in range(0, k * j + 1):
                terms[(-i, -j)] = terms.get((-i, -j), 0) + 1
    elif d_diff < 0:
        for j in range(1, -d_diff + 1):
            for i in range(1, k * j):
                terms[(i, j)] = terms.get((i, j), 0) + 1
    return terms


def tangent_character(chain: ToricChain, config: FixedPointConfig) -> WeightMultiset:
    r = config.rank
    entries = WeightMultiset()
    for v, vertex in enumerate(chain.vertices):
        ys = config.partitions[v]
        tag = f"vertex {v}"
        for alpha, beta in itertools.product(range(r), repeat=2):
            shift = (
                _a(beta)
                - _a(alpha)
                + chain.vertex_weight(v, config.divisors[beta])
                - chain.vertex_weight(v, config.divisors[alpha])
            )
            pair = nst_weights(ys[alpha], ys[beta], vertex.w1, vertex.w2)
            entries = entries + WeightMultiset.from_forms(pair, tag).shifted(shift)
    for alpha, beta in itertools.permutations(range(r), 2):
        ddiff = tuple(b - a for a, b in zip(config.divisors[alpha], config.divisors[beta]))
        entries = entries + h1_weights(chain, ddiff).shifted(_a(beta) - _a(alpha))
    return entries


def natural_character(chain: ToricChain, config: FixedPointConfig) -> WeightMultiset:
    entries = WeightMultiset()
    for v, vertex in enumerate(chain.vertices):
        for beta in range(config.rank):
            shift = _a(beta) + chain.vertex_weight(v, config.divisors[beta])
            boxes = ns_weights(config.partitions[v][beta], vertex.w1, vertex.w2)
            entries = entries + WeightMultiset.from_forms(boxes, f"vertex {v}").shifted(shift)
    for beta in range(config.rank):
        entries = entries + h1_weights(chain, tuple(config.divisors[beta])).shifted(_a(beta))
    return entries


def expected_dimension(chain: ToricChain, config: FixedPointConfig) -> int:
    d = divisor_sum(config.divisors, chain.n_edges)
    n = instanton_number(chain, config.divisors, config.partitions)
    return moduli_dimension(config.rank, n, intersection(chain, d, d))


def expected_rank(chain: ToricChain, config: FixedPointConfig) -> int:
    d = divisor_sum(config.divisors, chain.n_edges)
    n = instanton_number(chain, config.divisors, config.partitions)
    return n - (intersection(chain, d, d) + first_chern_pairing(chain, d)) // 2


def _split_vertices(flat: Sequence[Partition], n_vertices: int, r: int):
    return tuple(tuple(flat[v * r:(v + 1) * r]) for v in range(n_vertices))


def fixed_point_configs(
    chain: ToricChain, r: int, d: Sequence[int], order: int
) -> Iterator[Tuple[int, FixedPointConfig]]:
    """Every (D, Y) with Lambda exponent |D|^2 + 2r|Y| <= order, with that exponent."""
    n_vertices = len(chain.vertices)
    for divisors in enumerate_divisor_tuples(chain, r, d, order):
        norm = dsq_norm(chain, divisors)
        boxes = 0
        while norm + 2 * r * boxes <= order:
            for flat in enumerate_tuples(r * n_vertices, boxes):
                yield norm + 2 * r * boxes, FixedPointConfig(divisors, _split_vertices(flat, n_vertices, r))
            boxes += 1


def tangent_euler_sum(
    chain: ToricChain, r: int, d: Sequence[int], order: int, table: SymbolTable
) -> LambdaSeries:
    """Brute-force sum of Lambda^exp / e(T) over all fixed points, for the pure theory."""
    coefficients = {}
    for exponent, config in fixed_point_configs(chain, r, d, order):
        euler = table.one()
        for form in tangent_character(chain, config):
            if form.is_zero:
                raise CharacterError(f"zero tangent weight at {config}")
            euler *= form.to_field(table)
        coefficients[exponent] = coefficients.get(exponent, table.zero()) + 1 / euler
    return LambdaSeries.from_coefficients(order, coefficients, table.one())


def random_fixed_point(
    chain: ToricChain, r: int, rng: np.random.Generator, max_coefficient: int = 2, max_boxes: int = 3
) -> FixedPointConfig:
    """A random (D, Y) with small divisor coefficients and few boxes per diagram."""
    divisors = tuple(
        tuple(int(m) for m in rng.integers(-max_coefficient, max_coefficient + 1, size=chain.n_edges))
        for _ in range(r)
    )
    partitions = []
    for _ in chain.vertices:
        per_vertex = []
        for _ in range(r):
            pool = enumerate_partitions(int(rng.integers(0, max_boxes + 1)))
            per_vertex.append(pool[int(rng.integers(0, len(pool)))])
        partitions.append(tuple(per_vertex))
    return FixedPointConfig(divisors, tuple(partitions))
