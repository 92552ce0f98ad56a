"""Labeled simple undirected graphs stored as packed upper-triangle bit vectors.

Vertices are numbered ``1..n`` in the JSON formats and ``0..n-1`` internally.
The pair ``(i, j)`` with ``0 <= i < j < n`` lives at bit

    i*n - i*(i+1)/2 + (j - i - 1)

of a Python ``int``, i.e. row-major order over the strict upper triangle.
Bit ``k`` of the integer is the ``k``-th pair in that order, which makes
``range(2**m)`` an enumeration of every graph on ``n`` vertices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import sqrt
from typing import Iterable, Iterator, Sequence

import numpy as np


class GraphError(ValueError):
    """Base class for invalid graph input."""


class GraphParseError(GraphError):
    """Text could not be read as a graph or sample."""


class MalformedGraphError(GraphParseError):
    pass


class VertexRangeError(GraphParseError):
    pass


class SelfLoopError(GraphParseError):
    pass


class DuplicateEdgeError(GraphParseError):
    pass


class DimensionError(GraphError):
    """Graphs with different vertex counts were combined."""


class EmptySampleError(GraphError):
    pass


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(i: int, j: int, n: int) -> int:
    """Bit index of the 0-based pair ``(i, j)``; order of ``i, j`` is irrelevant."""
    if i > j:
        i, j = j, i
    if i == j or i < 0 or j >= n:
        raise IndexError(f"invalid vertex pair ({i}, {j}) for n={n}")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


@lru_cache(maxsize=None)
def pair_table(n: int) -> tuple[tuple[int, int], ...]:
    """All 0-based pairs ``(i, j)``, ``i < j``, in bit order."""
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@lru_cache(maxsize=64)
def _triu(n: int) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = np.triu_indices(n, k=1)
    return rows, cols


@dataclass(frozen=True)
class Graph:
    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError(f"vertex count must be positive, got {self.n}")
        if self.bits < 0 or self.bits >> num_pairs(self.n):
            raise GraphError(f"bit vector does not fit {num_pairs(self.n)} pairs")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        """Build from 1-based edges. Repeated edges are merged."""
        bits = 0
        for i, j in edges:
            bits |= 1 << pair_index(i - 1, j - 1, n)
        return cls(n, bits)

    @classmethod
    def from_dense(cls, a: np.ndarray) -> Graph:
        a = np.asarray(a)
        n = a.shape[0]
        rows, cols = _triu(n)
        return cls.from_bitarray(n, a[rows, cols] != 0)

    @classmethod
    def from_bitarray(cls, n: int, flags: Sequence[bool] | np.ndarray) -> Graph:
        flags = np.asarray(flags, dtype=bool)
        if flags.shape != (num_pairs(n),):
            raise GraphError(f"expected {num_pairs(n)} flags, got shape {flags.shape}")
        bits = int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")
        return cls(n, bits)

    @property
    def num_pairs(self) -> int:
        return num_pairs(self.n)

    def has_edge(self, i: int, j: int) -> bool:
        """1-based edge lookup."""
        return bool(self.bits >> pair_index(i - 1, j - 1, self.n) & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        """1-based edges in lexicographic order."""
        bits = self.bits
        for k, (i, j) in enumerate(pair_table(self.n)):
            if bits >> k & 1:
                yield i + 1, j + 1

    def bitarray(self) -> np.ndarray:
        m = self.num_pairs
        raw = np.frombuffer(self.bits.to_bytes((m + 7) // 8, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little", count=m).astype(bool)

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        rows, cols = _triu(self.n)
        flags = self.bitarray()
        a[rows[flags], cols[flags]] = 1.0
        return a + a.T

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Image under the 0-based vertex map ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("perm must be a permutation of range(n)")
        bits = 0
        for i, j in ((i - 1, j - 1) for i, j in self.edges()):
            bits |= 1 << pair_index(perm[i], perm[j], self.n)
        return Graph(self.n, bits)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edges())})"


def edge_count(g: Graph) -> int:
    return g.bits.bit_count()


def complete_graph(n: int) -> Graph:
    return Graph(n, (1 << num_pairs(n)) - 1)


def empty_graph(n: int) -> Graph:
    return Graph(n, 0)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((v, v + 1) for v in range(1, n)))


@dataclass(frozen=True)
class GraphSample:
    graphs: tuple[Graph, ...]

    def __init__(self, graphs: Iterable[Graph]) -> None:
        graphs = tuple(graphs)
        if not graphs:
            raise EmptySampleError("a graph sample needs at least one graph")
        n = graphs[0].n
        if any(g.n != n for g in graphs):
            raise DimensionError("all graphs in a sample must share the vertex count")
        object.__setattr__(self, "graphs", graphs)

    @property
    def n(self) -> int:
        return self.graphs[0].n

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self) -> Iterator[Graph]:
        return iter(self.graphs)

    def __getitem__(self, k: int) -> Graph:
        return self.graphs[k]

    def edge_counts(self) -> list[int]:
        return [edge_count(g) for g in self.graphs]

    def bit_matrix(self) -> np.ndarray:
        """``N x m`` boolean matrix, one row per graph."""
        return np.stack([g.bitarray() for g in self.graphs])


@dataclass(frozen=True)
class EdgeStats:
    """Sample mean and (biased) variance of edge counts.

    ``e_bar_exact`` and ``sigma2_exact`` hold the same values as fractions;
    the float fields are rounded once from them.
    """

    e_bar: float
    sigma2: float
    sigma: float
    e_bar_exact: Fraction
    sigma2_exact: Fraction
    num_graphs: int


def sample_edge_stats(s: GraphSample | Sequence[Graph]) -> EdgeStats:
    counts = [edge_count(g) for g in s]
    if not counts:
        raise EmptySampleError("edge statistics of an empty sample are undefined")
    N = len(counts)
    total = sum(counts)
    total_sq = sum(c * c for c in counts)
    e_bar = Fraction(total, N)
    sigma2 = Fraction(total_sq, N) - e_bar * e_bar
    return EdgeStats(
        e_bar=float(e_bar),
        sigma2=float(sigma2),
        sigma=sqrt(sigma2),
        e_bar_exact=e_bar,
        sigma2_exact=sigma2,
        num_graphs=N,
    )


# ---------------------------------------------------------------- JSON I/O


def graph_to_obj(g: Graph) -> dict:
    return {"n": g.n, "edges": [[i, j] for i, j in g.edges()]}


def graph_from_obj(obj: object) -> Graph:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise MalformedGraphError('graph must be an object with "n" and "edges"')
    n, edges = obj["n"], obj["edges"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MalformedGraphError(f'"n" must be a positive integer, got {n!r}')
    if not isinstance(edges, list):
        raise MalformedGraphError('"edges" must be a list')
    bits = 0
    for e in edges:
        if (
            not isinstance(e, list)
            or len(e) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in e)
        ):
            raise MalformedGraphError(f"edge must be a pair of integers, got {e!r}")
        i, j = e
        if not (1 <= i <= n and 1 <= j <= n):
            raise VertexRangeError(f"edge {e} has a vertex outside [1, {n}]")
        if i == j:
            raise SelfLoopError(f"self-loop at vertex {i}")
        bit = 1 << pair_index(i - 1, j - 1, n)
        if bits & bit:
            raise DuplicateEdgeError(f"duplicate edge {sorted(e)}")
        bits |= bit
    return Graph(n, bits)


def _loads(text: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedGraphError(f"invalid JSON: {exc}") from exc


def parse_graph(text: str) -> Graph:
    return graph_from_obj(_loads(text))


def serialize_graph(g: Graph) -> str:
    return json.dumps(graph_to_obj(g), separators=(",", ":"))


def sample_to_obj(s: GraphSample) -> dict:
    return {"graphs": [graph_to_obj(g) for g in s]}


def sample_from_obj(obj: object) -> GraphSample:
    if not isinstance(obj, dict) or not isinstance(obj.get("graphs"), list):
        raise MalformedGraphError('sample must be an object with a "graphs" list')
    graphs = [graph_from_obj(g) for g in obj["graphs"]]
    if not graphs:
        raise MalformedGraphError("sample contains no graphs")
    try:
        return GraphSample(graphs)
    except DimensionError as exc:
        raise MalformedGraphError(str(exc)) from exc


def parse_sample(text: str) -> GraphSample:
    return sample_from_obj(_loads(text))


def serialize_sample(s: GraphSample) -> str:
    return json.dumps(sample_to_obj(s), separators=(",", ":"))
