"""Toric surface data: the chain of fixed points of X0, edge divisors and the line at infinity.

A surface is stored as a :class:`ToricChain`.  Divisors supported on the
compact edges are integer vectors ``m`` meaning ``D = sum_e m_e l_e``.
"""

import itertools
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Sequence, Tuple

import networkx as nx
import numpy as np
import pandas as pd
from sympy import Matrix

from algebra.symbols import EPS_NAMES, LinearForm, SymbolTable
from utils.errors import SurfaceError, SurfaceValidationError

logger = logging.getLogger(__name__)

DivisorVector = Tuple[int, ...]
DivisorTuple = Tuple[DivisorVector, ...]
WeightPair = Tuple[LinearForm, LinearForm]


@dataclass(frozen=True)
class Vertex:
    """Torus-fixed point of X0 with its tangent weights."""

    w1: LinearForm
    w2: LinearForm

    @property
    def weights(self) -> WeightPair:
        return (self.w1, self.w2)


@dataclass(frozen=True)
class Edge:
    """Compact invariant curve l_e; weights_at[v] is the weight of O(l_e) at vertex v."""

    self_intersection: int
    weights_at: Tuple[LinearForm, ...]


@dataclass(frozen=True)
class LineAtInfinity:
    w: LinearForm
    u: LinearForm
    k: int

    @property
    def v(self) -> LinearForm:
        return self.u - self.w * self.k


@dataclass(frozen=True)
class ToricChain:
    name: str
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]
    intersections: Tuple[Tuple[int, ...], ...]
    linf: LineAtInfinity

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def k(self) -> int:
        return self.linf.k

    def intersection_matrix(self) -> np.ndarray:
        return np.array(self.intersections, dtype=np.int64).reshape(self.n_edges, self.n_edges)

    def zero_divisor(self) -> DivisorVector:
        return (0,) * self.n_edges

    def vertex_weight(self, v: int, divisor: Sequence[int]) -> LinearForm:
        """Weight w_D^v of O(D) at vertex v."""
        total = LinearForm.zero()
        for m, edge in zip(divisor, self.edges):
            if m:
                total = total + edge.weights_at[v] * int(m)
        return total

    def edge_chern_pairings(self) -> Tuple[int, ...]:
        # adjunction on rational curves
        return tuple(2 + e.self_intersection for e in self.edges)


def _pair(i: int, j: int) -> LinearForm:
    return LinearForm.eps(i, j)


def _c2_surface() -> ToricChain:
    return ToricChain(
        name="C2",
        vertices=(Vertex(_pair(1, 0), _pair(0, 1)),),
        edges=(),
        intersections=(),
        linf=LineAtInfinity(w=_pair(1, -1), u=_pair(0, -1), k=1),
    )


def hirzebruch_surface(k: int) -> ToricChain:
    """F_k minus its section at infinity; one compact edge l0 with l0.l0 = -k."""
    if k < 1:
        raise SurfaceError(f"F_k needs k >= 1, got {k}")
    return ToricChain(
        name=f"F{k}",
        vertices=(
            Vertex(_pair(1, 0), _pair(0, 1)),
            Vertex(_pair(-1, 0), _pair(k, 1)),
        ),
        edges=(Edge(-k, (_pair(0, 1), _pair(k, 1))),),
        intersections=((-k,),),
        linf=LineAtInfinity(w=_pair(1, 0), u=_pair(0, -1), k=k),
    )


# Registry of built-in surfaces
AVAILABLE_SURFACES: Dict[str, Dict[str, str]] = {
    "C2": {
        "name": "Affine plane",
        "description": "P^2 minus a line; one vertex, no compact edges, k = 1",
    },
    "F1": {"name": "Hirzebruch F1", "description": "F_1 minus the section at infinity, k = 1"},
    "F2": {"name": "Hirzebruch F2", "description": "F_2 minus the section at infinity, k = 2"},
    "F3": {"name": "Hirzebruch F3", "description": "F_3 minus the section at infinity, k = 3"},
    # Any "Fk" with k >= 1 is accepted by builtin_surface
}


def builtin_surface(name: str) -> ToricChain:
    """Look up a shipped surface by name ("C2", "F1", "F2", ... "Fk")."""
    key = name.strip()
    if key.upper() == "C2":
        return _c2_surface()
    if key[:1].upper() == "F" and key[1:].isdigit():
        return hirzebruch_surface(int(key[1:]))
    raise SurfaceError(f"unknown surface {name!r}; available: {', '.join(AVAILABLE_SURFACES)}")


def list_available_surfaces() -> List[Dict[str, str]]:
    return [{"id": key, **value} for key, value in AVAILABLE_SURFACES.items()]


# intersection theory


def intersection(chain: ToricChain, lhs: Sequence[int], rhs: Sequence[int]) -> int:
    if chain.n_edges == 0:
        return 0
    matrix = chain.intersection_matrix()
    return int(np.asarray(lhs, dtype=np.int64) @ matrix @ np.asarray(rhs, dtype=np.int64))


def first_chern_pairing(chain: ToricChain, divisor: Sequence[int]) -> int:
    """c1(X).D from adjunction on each edge."""
    return sum(int(m) * c for m, c in zip(divisor, chain.edge_chern_pairings()))


def _difference(lhs: Sequence[int], rhs: Sequence[int]) -> DivisorVector:
    return tuple(int(a) - int(b) for a, b in zip(lhs, rhs))


def divisor_sum(divisors: Sequence[Sequence[int]], n_edges: int) -> DivisorVector:
    total = [0] * n_edges
    for divisor in divisors:
        for e, m in enumerate(divisor):
            total[e] += int(m)
    return tuple(total)


def dsq_norm(chain: ToricChain, divisors: Sequence[Sequence[int]]) -> int:
    """|D|^2 = -sum_{a<b} (D_a - D_b)^2, nonnegative on a negative definite chain."""
    total = 0
    for alpha, beta in itertools.combinations(range(len(divisors)), 2):
        diff = _difference(divisors[alpha], divisors[beta])
        total -= intersection(chain, diff, diff)
    return total


def q_degree(chain: ToricChain, divisor: Sequence[int]) -> Tuple[int, ...]:
    """Exponent of Q^d = prod_e Q_e^{d.l_e}."""
    if chain.n_edges == 0:
        return ()
    return tuple(int(x) for x in chain.intersection_matrix() @ np.asarray(divisor, dtype=np.int64))


def _definiteness_margin(chain: ToricChain) -> float:
    """Smallest eigenvalue of minus the intersection form."""
    if chain.n_edges == 0:
        return math.inf
    return float(np.linalg.eigvalsh(-chain.intersection_matrix().astype(float)).min())


def enumerate_divisor_tuples(
    chain: ToricChain, r: int, d: Sequence[int], bound: int
) -> List[DivisorTuple]:
    """All (D_1..D_r) with sum d and |D|^2 <= bound, sorted by (|D|^2, tuple)."""
    d = tuple(int(m) for m in d)
    if len(d) != chain.n_edges:
        raise SurfaceError(f"divisor {d} has {len(d)} entries, surface has {chain.n_edges} edges")
    if r < 1:
        raise SurfaceError("rank must be at least 1")
    if chain.n_edges == 0:
        return [((),) * r] if bound >= 0 else []
    if r == 1:
        return [(d,)] if bound >= 0 else []

    margin = _definiteness_margin(chain)
    if margin <= 0:
        raise SurfaceError("intersection form is not negative definite; the sum is not finite")
    # each pair (alpha, r) alone contributes at least margin * |D_alpha - D_r|^2
    reach = int(math.floor(math.sqrt(max(bound, 0) / margin) + 1e-9))

    box = list(itertools.product(range(-reach, reach + 1), repeat=chain.n_edges))
    found = []
    for offsets in itertools.product(box, repeat=r - 1):
        shifted = divisor_sum(offsets, chain.n_edges)
        last = []
        for total, shift in zip(d, shifted):
            rest = total - shift
            if rest % r:
                break
            last.append(rest // r)
        else:
            base = tuple(last)
            divisors = tuple(tuple(o + b for o, b in zip(off, base)) for off in offsets) + (base,)
            norm = dsq_norm(chain, divisors)
            if norm <= bound:
                found.append((norm, divisors))
    found.sort()
    return [divisors for _, divisors in found]


def divisor_classes(chain: ToricChain, bound: int) -> List[DivisorVector]:
    """Edge-supported classes d with |d.l_e| <= bound for every edge, sorted."""
    if chain.n_edges == 0:
        return [()]
    inverse = Matrix(chain.intersections).inv()
    classes = []
    for pairing in itertools.product(range(-bound, bound + 1), repeat=chain.n_edges):
        m = inverse * Matrix(pairing)
        if all(entry.is_integer for entry in m):
            classes.append(tuple(int(entry) for entry in m))
    return sorted(classes, key=lambda c: (sum(abs(x) for x in c), c))


# fixed points and localization


def fixed_points(chain: ToricChain, compact: bool = False) -> List[WeightPair]:
    """Tangent weight pairs of X0, plus q0 (w, u) and q1 (-w, u - kw) when compact."""
    points = [v.weights for v in chain.vertices]
    if compact:
        points.append((chain.linf.w, chain.linf.u))
        points.append((-chain.linf.w, chain.linf.v))
    return points


def equivariant_integral(
    chain: ToricChain,
    integrand: Callable[[int, WeightPair], object],
    table,
    compact: bool = False,
):
    """Atiyah-Bott sum of integrand(index, weights) / (w1 w2) over the fixed points."""
    total = table.zero()
    for index, (w1, w2) in enumerate(fixed_points(chain, compact)):
        if w1.is_zero or w2.is_zero:
            raise SurfaceError(f"zero tangent weight at fixed point {index}")
        euler = w1.to_field(table) * w2.to_field(table)
        total += integrand(index, (w1, w2)) / euler
    return total


def moduli_dimension(r: int, n: int, dd: int) -> int:
    return 2 * r * n + (1 - r) * dd


def instanton_number(chain: ToricChain, divisors: Sequence[Sequence[int]], partitions) -> int:
    """n = sum |Y| + sum_{a<b} D_a.D_b, partitions given per color and vertex."""
    boxes = sum(y.size for per_color in partitions for y in per_color)
    pairings = sum(
        intersection(chain, divisors[alpha], divisors[beta])
        for alpha, beta in itertools.combinations(range(len(divisors)), 2)
    )
    return boxes + pairings


# loading and validation


def _weight_from_json(raw, where: str) -> LinearForm:
    if (
        not isinstance(raw, (list, tuple))
        or len(raw) != 2
        or not all(isinstance(x, int) and not isinstance(x, bool) for x in raw)
    ):
        raise SurfaceValidationError("integer weights", f"{where} must be a pair of integers, got {raw!r}")
    return LinearForm.eps(raw[0], raw[1])


def _weight_to_json(weight: LinearForm) -> List[int]:
    return list(weight.eps_pair())


def _check_integral_eps(weight: LinearForm, where: str):
    extra = [name for name in weight.symbols() if name not in EPS_NAMES]
    if extra:
        raise SurfaceValidationError("integer weights", f"{where} involves {extra}")


def _chain_graph(chain: ToricChain) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(len(chain.vertices)))
    for e, edge in enumerate(chain.edges):
        incident = [v for v, weight in enumerate(edge.weights_at) if not weight.is_zero]
        if len(incident) != 2:
            raise SurfaceValidationError(
                "chain", f"edge {e} meets {len(incident)} fixed points, expected 2"
            )
        graph.add_edge(*incident, index=e)
    return graph


def validate_chain(chain: ToricChain) -> ToricChain:
    """Check every structural invariant; the first violation raises SurfaceValidationError."""
    n_v, n_e = len(chain.vertices), len(chain.edges)
    if n_v == 0:
        raise SurfaceValidationError("non-empty vertex list", "a surface needs at least one fixed point")
    if n_v - n_e != 1:
        raise SurfaceValidationError("chain", f"#V - #E must be 1, got {n_v} - {n_e}")
    if chain.linf.k < 1:
        raise SurfaceValidationError("positive self-intersection at infinity", f"k = {chain.linf.k}")
    for index, vertex in enumerate(chain.vertices):
        for weight in vertex.weights:
            _check_integral_eps(weight, f"vertex {index}")
            if weight.is_zero:
                raise SurfaceValidationError("nonzero tangent weights", f"vertex {index}")
    for e, edge in enumerate(chain.edges):
        if len(edge.weights_at) != n_v:
            raise SurfaceValidationError("edge weights", f"edge {e} lists {len(edge.weights_at)} vertex weights")

    matrix = np.array(chain.intersections, dtype=np.int64)
    if n_e and matrix.shape != (n_e, n_e):
        raise SurfaceValidationError("intersection matrix", f"expected {n_e}x{n_e}, got {matrix.shape}")
    if n_e and not np.array_equal(matrix, matrix.T):
        raise SurfaceValidationError("intersection matrix", "matrix is not symmetric")
    for e, edge in enumerate(chain.edges):
        if matrix[e, e] != edge.self_intersection:
            raise SurfaceValidationError(
                "intersection matrix", f"diagonal entry {e} differs from the edge self-intersection"
            )

    graph = _chain_graph(chain)
    if not nx.is_tree(graph) or max((deg for _, deg in graph.degree()), default=0) > 2:
        raise SurfaceValidationError("chain", "fixed-point graph is not a path")
    for e, edge in enumerate(chain.edges):
        for v, weight in enumerate(edge.weights_at):
            if not weight.is_zero and weight not in chain.vertices[v].weights:
                raise SurfaceValidationError(
                    "edge weights", f"weight of edge {e} at vertex {v} is not a tangent weight there"
                )

    if n_e and _definiteness_margin(chain) <= 0:
        raise SurfaceValidationError("negative definite", "intersection form on the edges is not negative definite")

    for weight in (chain.linf.w, chain.linf.u, chain.linf.v):
        _check_integral_eps(weight, "line at infinity")
        if weight.is_zero:
            raise SurfaceValidationError("nonzero tangent weights", "line at infinity")

    if _compact_volume(chain):
        raise SurfaceValidationError(
            "compact localization", "sum of 1/(w1 w2) over the compactified surface is not 0"
        )
    return chain


def _compact_volume(chain: ToricChain):
    table = SymbolTable(rank=1)
    return equivariant_integral(chain, lambda index, weights: table.one(), table, compact=True)


def chain_from_dict(data: dict, name: str = "custom") -> ToricChain:
    """Build (without validation) a chain from the fixture document structure."""
    try:
        vertices = tuple(
            Vertex(_weight_from_json(v["w1"], f"vertex {i} w1"), _weight_from_json(v["w2"], f"vertex {i} w2"))
            for i, v in enumerate(data["vertices"])
        )
        edges = tuple(
            Edge(
                int(edge["self_intersection"]),
                tuple(_weight_from_json(w, f"edge {e}") for w in edge["weights_at"]),
            )
            for e, edge in enumerate(data.get("edges", []))
        )
        intersections = tuple(tuple(int(x) for x in row) for row in data.get("intersections", []))
        linf_raw = data["linf"]
        linf = LineAtInfinity(
            w=_weight_from_json(linf_raw["w"], "linf w"),
            u=_weight_from_json(linf_raw["u"], "linf u"),
            k=int(linf_raw["k"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SurfaceError(f"malformed surface document: {exc}") from exc

    if "v" in linf_raw:
        declared = _weight_from_json(linf_raw["v"], "linf v")
        if declared != linf.v:
            raise SurfaceValidationError(
                "normal weight relation violated", f"v = {declared} but u - k w = {linf.v}"
            )
    return ToricChain(data.get("name", name), vertices, edges, intersections, linf)


def chain_to_dict(chain: ToricChain) -> dict:
    return {
        "name": chain.name,
        "vertices": [{"w1": _weight_to_json(v.w1), "w2": _weight_to_json(v.w2)} for v in chain.vertices],
        "edges": [
            {
                "self_intersection": e.self_intersection,
                "weights_at": [_weight_to_json(w) for w in e.weights_at],
            }
            for e in chain.edges
        ],
        "intersections": [list(row) for row in chain.intersections],
        "linf": {
            "w": _weight_to_json(chain.linf.w),
            "u": _weight_to_json(chain.linf.u),
            "v": _weight_to_json(chain.linf.v),
            "k": chain.linf.k,
        },
    }


def load_surface(path) -> ToricChain:
    """Read and fully validate a JSON surface fixture."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise SurfaceError(f"surface file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise SurfaceError(f"cannot parse {path}: {exc}") from exc

    chain = validate_chain(chain_from_dict(data, name=path.stem))

    # edge count law needs the character machinery
    from .characters import check_edge_count_law

    check_edge_count_law(chain)
    logger.debug("loaded surface %s from %s", chain.name, path)
    return chain


def save_surface(chain: ToricChain, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(chain_to_dict(chain), indent=2) + "\n", encoding="utf-8")
    return path


def resolve_surface(name_or_path: str) -> ToricChain:
    """A built-in name, or a path to a fixture file."""
    candidate = Path(name_or_path)
    if candidate.suffix == ".json" or candidate.exists():
        return load_surface(candidate)
    return builtin_surface(name_or_path)


def weight_table(chain: ToricChain) -> pd.DataFrame:
    """Fixed-point weight table (vertices, then edge weights per vertex)."""
    rows = []
    for index, vertex in enumerate(chain.vertices):
        row = {"vertex": index, "w1": str(vertex.w1), "w2": str(vertex.w2)}
        for e, edge in enumerate(chain.edges):
            row[f"w_l{e}"] = str(edge.weights_at[index])
        rows.append(row)
    return pd.DataFrame(rows)


def surface_summary(chain: ToricChain) -> Dict[str, object]:
    return {
        "name": chain.name,
        "vertices": len(chain.vertices),
        "edges": chain.n_edges,
        "self_intersections": [e.self_intersection for e in chain.edges],
        "c1_pairings": list(chain.edge_chern_pairings()),
        "linf": {"w": str(chain.linf.w), "u": str(chain.linf.u), "v": str(chain.linf.v), "k": chain.k},
    }
