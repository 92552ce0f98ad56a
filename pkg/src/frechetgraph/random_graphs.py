"""Inhomogeneous Erdős–Rényi sampling and population-level Fréchet quantities.

Random streams: a graph drawn with ``seed`` uses one uniform variate per
vertex pair, taken in bit order from ``numpy.random.PCG64(seed)``; edge ``e``
is present when its variate is below ``p[e]``. Samples of many graphs give
graph ``k`` the seed sequence ``(seed, k)``, so draws never depend on how a
campaign is split across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .graph import (
    DimensionError,
    Graph,
    GraphSample,
    MalformedGraphError,
    VertexRangeError,
    num_pairs,
    pair_index,
)


@dataclass(frozen=True, eq=False)
class EdgeProbabilityMatrix:
    n: int
    p: np.ndarray

    def __post_init__(self) -> None:
        p = np.array(self.p, dtype=float)
        if self.n < 1:
            raise ValueError("n must be positive")
        if p.shape != (num_pairs(self.n),):
            raise ValueError(f"expected {num_pairs(self.n)} probabilities, got shape {p.shape}")
        if np.any((p < 0) | (p > 1)) or np.any(np.isnan(p)):
            raise ValueError("edge probabilities must lie in [0, 1]")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def constant(cls, n: int, p: float) -> EdgeProbabilityMatrix:
        return cls(n, np.full(num_pairs(n), float(p)))

    @classmethod
    def from_dense(cls, mat) -> EdgeProbabilityMatrix:
        mat = np.asarray(mat, dtype=float)
        n = mat.shape[0]
        return cls(n, mat[np.triu_indices(n, k=1)])

    def prob(self, i: int, j: int) -> float:
        """1-based lookup."""
        return float(self.p[pair_index(i - 1, j - 1, self.n)])


def parse_model(text: str) -> EdgeProbabilityMatrix:
    """Read ``{"n": n, "default_p": x, "p": [[i, j, p_ij], ...]}``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedGraphError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or not isinstance(obj.get("n"), int) or obj["n"] < 1:
        raise MalformedGraphError('model must be an object with a positive integer "n"')
    n = obj["n"]
    default = obj.get("default_p", 0.0)
    entries = obj.get("p", [])
    if not isinstance(default, (int, float)) or not isinstance(entries, list):
        raise MalformedGraphError('"default_p" must be a number and "p" a list')
    p = np.full(num_pairs(n), float(default))
    for entry in entries:
        if not (isinstance(entry, list) and len(entry) == 3):
            raise MalformedGraphError(f"probability entry must be [i, j, p], got {entry!r}")
        i, j, pij = entry
        if not (isinstance(i, int) and isinstance(j, int) and isinstance(pij, (int, float))):
            raise MalformedGraphError(f"bad probability entry {entry!r}")
        if not (1 <= i <= n and 1 <= j <= n) or i == j:
            raise VertexRangeError(f"pair ({i}, {j}) is not a valid vertex pair for n={n}")
        p[pair_index(i - 1, j - 1, n)] = pij
    try:
        return EdgeProbabilityMatrix(n, p)
    except ValueError as exc:
        raise MalformedGraphError(str(exc)) from exc


def serialize_model(P: EdgeProbabilityMatrix) -> str:
    pairs = [(i + 1, j + 1) for i in range(P.n) for j in range(i + 1, P.n)]
    return json.dumps(
        {"n": P.n, "default_p": 0.0, "p": [[i, j, float(x)] for (i, j), x in zip(pairs, P.p)]},
        separators=(",", ":"),
    )


def _draw(P: EdgeProbabilityMatrix, rng: np.random.Generator) -> Graph:
    return Graph.from_bitarray(P.n, rng.random(P.p.size) < P.p)


def sample_ier(P: EdgeProbabilityMatrix, seed: int) -> Graph:
    return _draw(P, np.random.Generator(np.random.PCG64(seed)))


def sample_ier_many(P: EdgeProbabilityMatrix, count: int, seed: int) -> GraphSample:
    return GraphSample(
        _draw(P, np.random.Generator(np.random.PCG64([seed, k]))) for k in range(count)
    )


def population_mean_graph(P: EdgeProbabilityMatrix) -> Graph:
    """Edge iff ``p_ij > 1/2``; the boundary ``p_ij = 1/2`` gives no edge."""
    return Graph.from_bitarray(P.n, P.p > 0.5)


def population_frechet_f2(P: EdgeProbabilityMatrix, g: Graph) -> float:
    """Population Fréchet function F2 under the Hamming distance, evaluated at ``g``.

    ``(sum p - sum_{(i,j) in E(g)} (2p - 1))**2 + sum p (1 - p)``.
    """
    if g.n != P.n:
        raise DimensionError(f"graph has n={g.n}, model has n={P.n}")
    in_g = g.bitarray()
    first = P.p.sum() - (2.0 * P.p[in_g] - 1.0).sum()
    return float(first**2 + (P.p * (1.0 - P.p)).sum())


def population_f2_bound(P: EdgeProbabilityMatrix) -> float:
    """``E[e]**2 + Var(e)`` for the edge count of a draw from ``P``."""
    mean = P.p.sum()
    var = (P.p * (1.0 - P.p)).sum()
    return float(mean**2 + var)


def uniform_random_graph(n: int, rng: np.random.Generator) -> Graph:
    """Uniform over all labeled graphs on ``n`` vertices."""
    return Graph.from_bitarray(n, rng.random(num_pairs(n)) < 0.5)
