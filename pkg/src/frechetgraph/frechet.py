"""Sample Fréchet mean and median graphs.

Three solvers share one report type:

* ``median_majority_rule`` -- closed form for the Hamming median.
* ``exhaustive_frechet`` -- brute force over every graph on ``n <= cap``
  vertices; returns the whole argmin set.
* ``local_search_frechet`` -- steepest descent over single edge flips for
  larger ``n``. Not guaranteed optimal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .graph import DimensionError, Graph, GraphSample, num_pairs
from .metrics import (
    Spectrum,
    adjacency_spectrum,
    hamming_distance,
    spectrum_distance,
    symmetric_eigenvalues_batch,
)

EXHAUSTIVE_CAP = 6
SPECTRAL_RTOL = 1e-9


class Metric(str, enum.Enum):
    HAMMING = "hamming"
    SPECTRAL = "spectral"


class Order(enum.IntEnum):
    MEDIAN = 1
    MEAN = 2


class Method(str, enum.Enum):
    MAJORITY_RULE = "majority_rule"
    EXHAUSTIVE = "exhaustive"
    LOCAL_SEARCH = "local_search"


class CapExceededError(RuntimeError):
    def __init__(self, n: int, cap: int) -> None:
        super().__init__(
            f"exhaustive search refused: n={n} exceeds the cap of {cap} vertices "
            f"(2^{num_pairs(cap)} candidates)"
        )
        self.n = n
        self.cap = cap


@dataclass(frozen=True)
class SolverReport:
    minimizers: tuple[Graph, ...]
    f_value: float
    method: Method
    evaluations: int
    exact: bool
    metric: Metric
    q: Order
    # exact rational value of the Fréchet function, Hamming only
    f_exact: Fraction | None = field(default=None, compare=False)

    def to_obj(self) -> dict:
        from .graph import graph_to_obj

        obj = {
            "method": self.method.value,
            "metric": self.metric.value,
            "q": int(self.q),
            "exact": self.exact,
            "f_value": self.f_value,
            "evaluations": self.evaluations,
            "minimizers": [graph_to_obj(g) for g in self.minimizers],
        }
        if self.f_exact is not None:
            obj["f_exact"] = str(self.f_exact)
        return obj


def _check_n(candidate: Graph, s: GraphSample) -> None:
    if candidate.n != s.n:
        raise DimensionError(f"candidate has n={candidate.n}, sample has n={s.n}")


@lru_cache(maxsize=4096)
def _spectrum(g: Graph) -> Spectrum:
    return adjacency_spectrum(g)


def sample_spectra(s: GraphSample) -> np.ndarray:
    """``N x n`` array of descending adjacency spectra."""
    return np.stack([_spectrum(g).values for g in s])


@lru_cache(maxsize=None)
def candidate_spectra(n: int) -> np.ndarray:
    """Spectra of all ``2**(n(n-1)/2)`` graphs on ``n`` vertices, row ``k`` for bits ``k``."""
    m = num_pairs(n)
    rows, cols = np.triu_indices(n, k=1)
    flags = (np.arange(1 << m)[:, None] >> np.arange(m)) & 1
    dense = np.zeros((1 << m, n, n))
    dense[:, rows, cols] = flags
    dense[:, cols, rows] = flags
    table = symmetric_eigenvalues_batch(dense)
    table.setflags(write=False)
    return table


def frechet_sum(candidate: Graph, s: GraphSample, metric: Metric, q: Order | int):
    """``sum_k d(candidate, G_k)**q``; an exact ``int`` for the Hamming metric."""
    _check_n(candidate, s)
    q = int(q)
    if Metric(metric) is Metric.HAMMING:
        return sum(hamming_distance(candidate, g) ** q for g in s)
    lam = _spectrum(candidate)
    return float(sum(spectrum_distance(lam, _spectrum(g)) ** q for g in s))


def frechet_function(candidate: Graph, s: GraphSample, metric: Metric, q: Order | int) -> float:
    total = frechet_sum(candidate, s, metric, q)
    if Metric(metric) is Metric.HAMMING:
        return float(Fraction(total, len(s)))
    return total / len(s)


def frechet_exact(candidate: Graph, s: GraphSample, q: Order | int) -> Fraction:
    """Hamming Fréchet function as an exact fraction."""
    return Fraction(frechet_sum(candidate, s, Metric.HAMMING, q), len(s))


def median_majority_rule(s: GraphSample) -> SolverReport:
    """Keep edge ``(i, j)`` unless fewer than half of the sample graphs contain it.

    A tie at exactly ``N/2`` keeps the edge.
    """
    N = len(s)
    counts = s.bit_matrix().sum(axis=0)
    median = Graph.from_bitarray(s.n, 2 * counts >= N)
    f = frechet_exact(median, s, Order.MEDIAN)
    return SolverReport(
        minimizers=(median,),
        f_value=float(f),
        method=Method.MAJORITY_RULE,
        evaluations=1,
        exact=True,
        metric=Metric.HAMMING,
        q=Order.MEDIAN,
        f_exact=f,
    )


def _spectral_totals(table: np.ndarray, spectra: np.ndarray, q: int) -> np.ndarray:
    diff = table[:, None, :] - spectra[None, :, :]
    d2 = np.einsum("cki,cki->ck", diff, diff)
    if q == 2:
        return d2.sum(axis=1)
    return np.sqrt(d2).sum(axis=1)


def _near_min(totals: np.ndarray, best: float) -> np.ndarray:
    return totals <= best + SPECTRAL_RTOL * max(1.0, abs(best))


def exhaustive_frechet(
    s: GraphSample, metric: Metric, q: Order | int, *, cap: int = EXHAUSTIVE_CAP
) -> SolverReport:
    """Evaluate every graph on ``s.n`` vertices and return the full argmin set.

    Minimizers are listed by increasing bit vector. Under the spectral
    pseudometric, candidates within a relative ``1e-9`` of the minimum count
    as minimizers, so isospectral graphs are reported together.
    """
    n, N, q, metric = s.n, len(s), int(q), Metric(metric)
    if n > cap:
        raise CapExceededError(n, cap)
    count = 1 << num_pairs(n)
    if metric is Metric.HAMMING:
        cands = np.arange(count, dtype=np.int64)
        totals = np.zeros(count, dtype=np.int64)
        for g in s:
            totals += np.bitwise_count(cands ^ g.bits).astype(np.int64) ** q
        best = int(totals.min())
        idx = np.flatnonzero(totals == best)
        f_exact = Fraction(best, N)
        f_value = float(f_exact)
    else:
        totals = _spectral_totals(candidate_spectra(n), sample_spectra(s), q)
        best = float(totals.min())
        idx = np.flatnonzero(_near_min(totals, best))
        f_exact = None
        f_value = best / N
    return SolverReport(
        minimizers=tuple(Graph(n, int(b)) for b in idx),
        f_value=f_value,
        method=Method.EXHAUSTIVE,
        evaluations=count,
        exact=True,
        metric=metric,
        q=Order(q),
        f_exact=f_exact,
    )


class _HammingObjective:
    def __init__(self, s: GraphSample, q: int) -> None:
        self.q = q
        self.rows = s.bit_matrix()
        self.evaluations = 0

    def total(self, flags: np.ndarray) -> int:
        self.evaluations += 1
        d = np.count_nonzero(self.rows != flags, axis=1)
        return int(np.sum(d ** self.q))

    def neighbour_totals(self, flags: np.ndarray) -> np.ndarray:
        same = self.rows == flags
        d = np.count_nonzero(~same, axis=1)
        new_d = d[:, None] + np.where(same, 1, -1)
        self.evaluations += flags.size
        return np.sum(new_d ** self.q, axis=0)

    def improves(self, new, old) -> bool:
        return new < old


class _SpectralObjective:
    def __init__(self, s: GraphSample, q: int) -> None:
        self.n = s.n
        self.q = q
        self.spectra = sample_spectra(s)
        self.evaluations = 0
        self._cache: dict[int, float] = {}

    def _total_bits(self, bits: int) -> float:
        self.evaluations += 1
        cached = self._cache.get(bits)
        if cached is None:
            lam = adjacency_spectrum(Graph(self.n, bits)).values
            cached = float(_spectral_totals(lam[None, :], self.spectra, self.q)[0])
            self._cache[bits] = cached
        return cached

    def total(self, flags: np.ndarray) -> float:
        return self._total_bits(Graph.from_bitarray(self.n, flags).bits)

    def neighbour_totals(self, flags: np.ndarray) -> np.ndarray:
        bits = Graph.from_bitarray(self.n, flags).bits
        return np.array([self._total_bits(bits ^ (1 << e)) for e in range(flags.size)])

    def improves(self, new, old) -> bool:
        return new < old - SPECTRAL_RTOL * max(1.0, abs(old))


def _descend(objective, flags: np.ndarray, max_iters: int):
    flags = flags.copy()
    current = objective.total(flags)
    for _ in range(max_iters):
        if flags.size == 0:
            break
        totals = objective.neighbour_totals(flags)
        e = int(np.argmin(totals))
        if not objective.improves(totals[e], current):
            break
        flags[e] = ~flags[e]
        current = totals[e]
    return flags, current


def local_search_frechet(
    s: GraphSample,
    metric: Metric,
    q: Order | int,
    *,
    restarts: int = 8,
    max_iters: int = 1000,
    seed: int = 0,
) -> SolverReport:
    """Best-improvement edge-flip descent from several starting graphs.

    Starts are the majority-rule graph, the sample member with the smallest
    Fréchet function, then ``restarts`` uniform random graphs where restart
    ``r`` draws from a generator seeded with ``seed + r``.
    """
    n, N, q, metric = s.n, len(s), int(q), Metric(metric)
    m = num_pairs(n)
    objective = _HammingObjective(s, q) if metric is Metric.HAMMING else _SpectralObjective(s, q)

    starts = [median_majority_rule(s).minimizers[0].bitarray()]
    rows = s.bit_matrix()
    member_totals = [objective.total(rows[k]) for k in range(N)]
    starts.append(rows[int(np.argmin(member_totals))])
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        starts.append(rng.random(m) < 0.5)

    optima = [_descend(objective, flags, max_iters) for flags in starts]
    best = min(total for _, total in optima)
    if metric is Metric.HAMMING:
        keep = [flags for flags, total in optima if total == best]
    else:
        keep = [flags for flags, total in optima if _near_min(np.array([total]), best)[0]]
    minimizers = sorted({Graph.from_bitarray(n, f) for f in keep}, key=lambda g: g.bits)

    f_exact = Fraction(int(best), N) if metric is Metric.HAMMING else None
    return SolverReport(
        minimizers=tuple(minimizers),
        f_value=float(f_exact) if f_exact is not None else float(best) / N,
        method=Method.LOCAL_SEARCH,
        evaluations=objective.evaluations,
        exact=False,
        metric=metric,
        q=Order(q),
        f_exact=f_exact,
    )


def solve(
    s: GraphSample,
    metric: Metric,
    q: Order | int,
    *,
    heuristic: bool = False,
    cap: int = EXHAUSTIVE_CAP,
    restarts: int = 8,
    max_iters: int = 1000,
    seed: int = 0,
) -> SolverReport:
    """Pick a solver: majority rule for the Hamming median, otherwise
    exhaustive search unless ``heuristic`` is set."""
    metric, q = Metric(metric), Order(q)
    if metric is Metric.HAMMING and q is Order.MEDIAN:
        return median_majority_rule(s)
    if heuristic:
        return local_search_frechet(s, metric, q, restarts=restarts, max_iters=max_iters, seed=seed)
    return exhaustive_frechet(s, metric, q, cap=cap)

