"""Numerical verification of the edge-count bounds for Fréchet mean and median graphs.

Every check stores both sides of its inequality. Hamming checks are decided
in exact rational arithmetic with zero tolerance; checks that consume
eigenvalues allow ``SPECTRAL_TOL``.
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import frechet
from .frechet import Metric, Order, SolverReport
from .graph import (
    EdgeStats,
    GraphSample,
    complete_graph,
    edge_count,
    empty_graph,
    sample_edge_stats,
)
from .metrics import hamming_distance
from .random_graphs import EdgeProbabilityMatrix, sample_ier_many, uniform_random_graph

HAMMING_TOL = 0
SPECTRAL_TOL = 1e-6
DEFAULT_SEED = 20221


class SolverPolicy(str, enum.Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"


@dataclass(frozen=True)
class Check:
    name: str
    lhs: float
    rhs: float
    slack: float
    strict: bool
    passed: bool
    tol: float

    def to_obj(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "strict": self.strict,
            "pass": self.passed,
        }


def _rational(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def make_check(name: str, lhs, rhs, tol: float, *, decided: tuple[bool, bool] | None = None) -> Check:
    """Build a record for ``lhs <= rhs + tol``.

    Rational sides are compared exactly. ``decided`` supplies an exact
    ``(passed, strict)`` verdict when a side is irrational.
    """
    if decided is not None:
        passed, strict = decided
    elif _rational(lhs) and _rational(rhs):
        passed = lhs <= rhs + Fraction(tol)
        strict = lhs < rhs
    else:
        passed = float(lhs) <= float(rhs) + tol
        strict = float(lhs) < float(rhs)
    lo, hi = float(lhs), float(rhs)
    rounding = 4 * np.finfo(float).eps * max(1.0, abs(lo), abs(hi))
    assert not (passed and lo > hi + tol + rounding), f"{name}: pass recorded with lhs {lo} > rhs {hi}"
    return Check(name, lo, hi, hi - lo, bool(strict), bool(passed), float(tol))


@dataclass
class BoundReport:
    meta: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def find(self, prefix: str) -> list[Check]:
        return [c for c in self.checks if c.name.startswith(prefix)]

    def to_obj(self) -> dict:
        return {
            "meta": self.meta,
            "checks": [c.to_obj() for c in self.checks],
            "all_pass": self.all_pass,
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_obj(), indent=indent, sort_keys=False)


# ---------------------------------------------------------------- solutions


@dataclass(frozen=True)
class Solutions:
    """Minimizer sets for one sample; ``None`` where a metric was skipped."""

    hamming_mean: SolverReport | None
    hamming_median: SolverReport | None
    spectral_mean: SolverReport | None
    spectral_median: SolverReport | None

    @property
    def exact(self) -> bool:
        return all(r.exact for r in self.reports())

    def reports(self) -> list[SolverReport]:
        return [
            r
            for r in (self.hamming_mean, self.hamming_median, self.spectral_mean, self.spectral_median)
            if r is not None
        ]


def solve_all(
    s: GraphSample,
    policy: SolverPolicy = SolverPolicy.EXACT,
    *,
    metrics: Sequence[Metric] = (Metric.HAMMING, Metric.SPECTRAL),
    seed: int = DEFAULT_SEED,
    restarts: int = 8,
) -> Solutions:
    """Compute the mean and median sets the checks run against.

    Under ``EXACT`` every set is the exhaustive argmin set and ``n`` must not
    exceed the exhaustive cap. ``HEURISTIC`` uses the majority rule for the
    Hamming median and local search elsewhere.
    """
    policy = SolverPolicy(policy)
    metrics = {Metric(m) for m in metrics}

    def run(metric: Metric, q: Order) -> SolverReport | None:
        if metric not in metrics:
            return None
        if policy is SolverPolicy.EXACT:
            return frechet.exhaustive_frechet(s, metric, q)
        if metric is Metric.HAMMING and q is Order.MEDIAN:
            return frechet.median_majority_rule(s)
        return frechet.local_search_frechet(s, metric, q, restarts=restarts, seed=seed)

    return Solutions(
        hamming_mean=run(Metric.HAMMING, Order.MEAN),
        hamming_median=run(Metric.HAMMING, Order.MEDIAN),
        spectral_mean=run(Metric.SPECTRAL, Order.MEAN),
        spectral_median=run(Metric.SPECTRAL, Order.MEDIAN),
    )


# ---------------------------------------------------------------- individual checks


def hamming_mean_edges_check(name: str, edges: int, stats: EdgeStats) -> Check:
    """``e(mean) <= 2 ebar + sigma / sqrt(2)``, decided without rounding."""
    gap = edges - 2 * stats.e_bar_exact  # compared against sigma / sqrt(2)
    half_var = stats.sigma2_exact / 2
    if gap <= 0:
        decided = (True, gap < 0 or half_var > 0)
    else:
        decided = (gap * gap <= half_var, gap * gap < half_var)
    rhs = 2 * stats.e_bar + stats.sigma / math.sqrt(2)
    return make_check(name, edges, rhs, HAMMING_TOL, decided=decided)


def hamming_median_edges_check(name: str, edges: int, stats: EdgeStats) -> Check:
    return make_check(name, edges, 2 * stats.e_bar_exact, HAMMING_TOL)


def spectral_edges_check(name: str, edges: int, stats: EdgeStats) -> Check:
    return make_check(name, edges, 9 * stats.e_bar_exact, SPECTRAL_TOL)


def _theorem1_checks(prefix: str, sol: Solutions, stats: EdgeStats) -> list[Check]:
    checks = []
    if sol.hamming_mean is not None:
        for i, g in enumerate(sol.hamming_mean.minimizers):
            checks.append(hamming_mean_edges_check(f"{prefix}hamming_mean_edges/{i}", edge_count(g), stats))
    if sol.hamming_median is not None:
        for i, g in enumerate(sol.hamming_median.minimizers):
            checks.append(hamming_median_edges_check(f"{prefix}hamming_median_edges/{i}", edge_count(g), stats))
    if sol.spectral_mean is not None:
        for i, g in enumerate(sol.spectral_mean.minimizers):
            checks.append(spectral_edges_check(f"{prefix}spectral_mean_edges/{i}", edge_count(g), stats))
    if sol.spectral_median is not None:
        for i, g in enumerate(sol.spectral_median.minimizers):
            checks.append(spectral_edges_check(f"{prefix}spectral_median_edges/{i}", edge_count(g), stats))
    return checks


def _meta(s: GraphSample, sol: Solutions, policy: SolverPolicy, seed: int | None) -> dict:
    return {
        "n": s.n,
        "N": len(s),
        "metrics": sorted({r.metric.value for r in sol.reports()}),
        "methods": {
            key: getattr(sol, key).method.value
            for key in ("hamming_mean", "hamming_median", "spectral_mean", "spectral_median")
            if getattr(sol, key) is not None
        },
        "policy": SolverPolicy(policy).value,
        "exact": sol.exact,
        "seed": seed,
        "tol": {"hamming": HAMMING_TOL, "spectral": SPECTRAL_TOL},
    }


def verify_theorem1(
    s: GraphSample,
    policy: SolverPolicy = SolverPolicy.EXACT,
    *,
    solutions: Solutions | None = None,
    metrics: Sequence[Metric] = (Metric.HAMMING, Metric.SPECTRAL),
    seed: int = DEFAULT_SEED,
) -> BoundReport:
    """Edge-count bounds for every returned mean and median graph.

    Hamming: ``e(mean) <= 2 ebar + sigma/sqrt(2)`` and ``e(median) <= 2 ebar``.
    Spectral: ``e <= 9 ebar`` for means and medians.
    """
    sol = solutions if solutions is not None else solve_all(s, policy, metrics=metrics, seed=seed)
    stats = sample_edge_stats(s)
    return BoundReport(_meta(s, sol, policy, seed), _theorem1_checks("theorem1/", sol, stats))


def verify_lemma_chain(
    s: GraphSample,
    policy: SolverPolicy = SolverPolicy.EXACT,
    *,
    solutions: Solutions | None = None,
    metrics: Sequence[Metric] = (Metric.HAMMING, Metric.SPECTRAL),
    seed: int = DEFAULT_SEED,
) -> BoundReport:
    """Intermediate inequalities (a)-(i) behind the edge-count bounds.

    ``lemma_e/center_of_mass`` asks for a sample graph whose spectrum is no
    longer than the mean spectrum. It fails on some inputs, e.g. the star
    ``K_{1,3}`` with the path ``P_4``. ``lemma_e/smallest_norm`` records the
    weaker fact the later spectral bounds need: the shortest sample spectrum
    has norm at most ``sqrt(2 ebar)``.
    """
    sol = solutions if solutions is not None else solve_all(s, policy, metrics=metrics, seed=seed)
    stats = sample_edge_stats(s)
    ebar = stats.e_bar_exact
    checks: list[Check] = []

    if sol.hamming_mean is not None or sol.hamming_median is not None:
        counts = s.edge_counts()
        for k, l in combinations(range(len(s)), 2):
            checks.append(
                make_check(
                    f"lemma_a/edge_gap/{k},{l}",
                    abs(counts[k] - counts[l]),
                    hamming_distance(s[k], s[l]),
                    HAMMING_TOL,
                )
            )
    if sol.hamming_mean is not None:
        for i, g in enumerate(sol.hamming_mean.minimizers):
            checks.append(
                make_check(
                    f"lemma_b/mean_deviation/{i}",
                    (edge_count(g) - ebar) ** 2,
                    frechet.frechet_exact(g, s, Order.MEAN),
                    HAMMING_TOL,
                )
            )
    if sol.hamming_median is not None:
        for i, g in enumerate(sol.hamming_median.minimizers):
            checks.append(
                make_check(
                    f"lemma_c/f2_at_median/{i}",
                    frechet.frechet_exact(g, s, Order.MEAN),
                    2 * ebar**2 + stats.sigma2_exact,
                    HAMMING_TOL,
                )
            )
    hamming_only = Solutions(sol.hamming_mean, sol.hamming_median, None, None)
    checks.extend(_theorem1_checks("lemma_d/", hamming_only, stats))

    if sol.spectral_mean is not None or sol.spectral_median is not None:
        spectra = frechet.sample_spectra(s)
        norms = np.linalg.norm(spectra, axis=1)
        mean_norm = float(np.linalg.norm(spectra.mean(axis=0)))
        root = math.sqrt(2 * stats.e_bar)
        checks.append(make_check("lemma_e/center_of_mass", float(norms.min()), mean_norm, SPECTRAL_TOL))
        checks.append(make_check("lemma_e/smallest_norm", float(norms.min()), root, SPECTRAL_TOL))
        checks.append(make_check("lemma_f/mean_spectrum_norm", mean_norm**2 / 2, stats.e_bar, SPECTRAL_TOL))
        spectral_edges = []
        for tag, rep in (("lemma_g/spectral_mean_norm", sol.spectral_mean), ("lemma_h/spectral_median_norm", sol.spectral_median)):
            if rep is None:
                continue
            for i, g in enumerate(rep.minimizers):
                checks.append(make_check(f"{tag}/{i}", frechet._spectrum(g).norm(), 3 * root, SPECTRAL_TOL))
                spectral_edges.append(edge_count(g))
        checks.append(make_check("lemma_i/spectral_max_edges", max(spectral_edges), 9 * ebar, SPECTRAL_TOL))

    return BoundReport(_meta(s, sol, policy, seed), checks)


# ---------------------------------------------------------------- tightness


@dataclass(frozen=True)
class TightnessResult:
    ratio: Fraction
    e_bar: Fraction
    median_edges: int
    report: BoundReport


def tightness_experiment(n: int, N: int) -> TightnessResult:
    """Sample of ``N + 1`` complete graphs and ``N - 1`` empty graphs.

    The majority-rule median is ``K_n`` and ``e(median) / ebar = 2N / (N + 1)``.
    """
    if n < 2 or N < 1:
        raise ValueError("tightness experiment needs n >= 2 and N >= 1")
    s = GraphSample([complete_graph(n)] * (N + 1) + [empty_graph(n)] * (N - 1))
    median = frechet.median_majority_rule(s).minimizers[0]
    stats = sample_edge_stats(s)
    e_med = edge_count(median)
    ebar = stats.e_bar_exact
    ratio = Fraction(e_med) / ebar
    identity = Fraction(e_med, 2) + Fraction(e_med, 2 * N)
    closed_form = Fraction(2 * N, N + 1)
    assert ebar == identity, f"ebar {ebar} != e/2 + e/(2N) = {identity}"
    checks = [
        hamming_median_edges_check("median_edges", e_med, stats),
        make_check("ebar_identity/le", ebar, identity, HAMMING_TOL),
        make_check("ebar_identity/ge", identity, ebar, HAMMING_TOL),
        make_check("ratio_closed_form/le", ratio, closed_form, HAMMING_TOL),
        make_check("ratio_closed_form/ge", closed_form, ratio, HAMMING_TOL),
    ]
    meta = {
        "n": n,
        "N": N,
        "sample_size": 2 * N,
        "median_is_complete": median == complete_graph(n),
        "ratio": str(ratio),
        "ratio_float": float(ratio),
        "e_bar": str(ebar),
    }
    return TightnessResult(ratio, ebar, e_med, BoundReport(meta, checks))


# ---------------------------------------------------------------- sparsity


@dataclass(frozen=True)
class SparsityResult:
    rows: list[dict]
    sparse_input: bool
    report: BoundReport


def ier_growth_sequence(
    ns: Iterable[int] = (8, 16, 32), *, exponent: float = 0.5, N: int = 20, seed: int = DEFAULT_SEED
) -> list[GraphSample]:
    """IER samples with ``p_ij = n**-exponent`` for each ``n``."""
    return [
        sample_ier_many(EdgeProbabilityMatrix.constant(n, n**-exponent), N, seed + n) for n in ns
    ]


def verify_corollary_sparsity(
    samples: Iterable[GraphSample], *, seed: int = DEFAULT_SEED, restarts: int = 4
) -> SparsityResult:
    """Edge densities ``e / n**2`` of Hamming medians and means along a size sequence.

    Means are exhaustive for ``n`` within the cap and found by local search
    otherwise. ``sparse_input`` is true when the sample edge density
    ``ebar / C(n, 2)`` strictly decreases along the sequence.
    """
    rows, checks = [], []
    densities = []
    exact = True
    for s in samples:
        n = s.n
        stats = sample_edge_stats(s)
        median = frechet.median_majority_rule(s).minimizers[0]
        if n <= frechet.EXHAUSTIVE_CAP:
            mean_rep = frechet.exhaustive_frechet(s, Metric.HAMMING, Order.MEAN)
        else:
            mean_rep = frechet.local_search_frechet(s, Metric.HAMMING, Order.MEAN, restarts=restarts, seed=seed)
            exact = False
        mean = mean_rep.minimizers[0]
        sq = n * n
        pairs = n * (n - 1) // 2
        densities.append(stats.e_bar / pairs if pairs else 0.0)
        rows.append(
            {
                "n": n,
                "N": len(s),
                "e_bar": stats.e_bar,
                "sample_density": densities[-1],
                "median_edges_per_n2": edge_count(median) / sq,
                "mean_edges_per_n2": edge_count(mean) / sq,
                "median_bound_per_n2": 2 * stats.e_bar / sq,
                "mean_bound_per_n2": (2 * stats.e_bar + stats.sigma / math.sqrt(2)) / sq,
                "spectral_bound_per_n2": 9 * stats.e_bar / sq,
                "mean_method": mean_rep.method.value,
            }
        )
        checks.append(hamming_median_edges_check(f"sparsity/n={n}/median_edges", edge_count(median), stats))
        checks.append(hamming_mean_edges_check(f"sparsity/n={n}/mean_edges", edge_count(mean), stats))
    sparse = len(densities) > 1 and all(b < a for a, b in zip(densities, densities[1:]))
    meta = {"seed": seed, "exact": exact, "sparse_input": sparse, "rows": rows}
    return SparsityResult(rows, sparse, BoundReport(meta, checks))


# ---------------------------------------------------------------- campaigns


def _pick(rng: np.random.Generator, spec) -> int:
    if isinstance(spec, int):
        return spec
    lo, hi = spec
    return int(rng.integers(lo, hi + 1))


def random_trial_sample(trial: int, n, N, seed: int) -> GraphSample:
    """Sample for trial ``trial``: ``N`` uniform random graphs on ``n`` vertices.

    ``n`` and ``N`` are ints or inclusive ``(lo, hi)`` ranges drawn per trial.
    The generator is seeded with ``(seed, trial)``.
    """
    rng = np.random.default_rng([seed, trial])
    n_t = _pick(rng, n)
    N_t = _pick(rng, N)
    return GraphSample(uniform_random_graph(n_t, rng) for _ in range(N_t))


def _run_trial(args) -> tuple[list[Check], dict]:
    trial, n, N, seed, policy, metrics, suites = args
    s = random_trial_sample(trial, n, N, seed)
    sol = solve_all(s, policy, metrics=metrics, seed=seed + trial)
    checks: list[Check] = []
    prefix = f"trial{trial}/"
    if "theorem1" in suites:
        checks += [prefixed_check(c, prefix) for c in verify_theorem1(s, policy, solutions=sol).checks]
    if "lemmas" in suites:
        checks += [prefixed_check(c, prefix) for c in verify_lemma_chain(s, policy, solutions=sol).checks]
    stats = sample_edge_stats(s)
    info = {"n": s.n, "N": len(s), "exact": sol.exact}
    spectral = [r for r in (sol.spectral_mean, sol.spectral_median) if r is not None]
    if spectral and stats.e_bar > 0:
        info["spectral_edge_ratio"] = max(edge_count(g) for r in spectral for g in r.minimizers) / stats.e_bar
    return checks, info


def prefixed_check(c: Check, prefix: str) -> Check:
    return Check(prefix + c.name, c.lhs, c.rhs, c.slack, c.strict, c.passed, c.tol)


def run_campaign(
    trials: int,
    n,
    N,
    *,
    seed: int = DEFAULT_SEED,
    policy: SolverPolicy = SolverPolicy.EXACT,
    metrics: Sequence[Metric] = (Metric.HAMMING, Metric.SPECTRAL),
    suites: Sequence[str] = ("theorem1", "lemmas"),
    jobs: int = 1,
) -> BoundReport:
    """Run independent random trials and merge their checks in trial order."""
    metrics = tuple(Metric(m).value for m in metrics)
    args = [(t, n, N, seed, SolverPolicy(policy), metrics, tuple(suites)) for t in range(trials)]
    if jobs > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_trial, args, chunksize=max(1, trials // (4 * jobs))))
    else:
        results = [_run_trial(a) for a in args]
    checks = [c for trial_checks, _ in results for c in trial_checks]
    ratios = [info["spectral_edge_ratio"] for _, info in results if "spectral_edge_ratio" in info]
    meta = {
        "suites": list(suites),
        "trials": trials,
        "n": n if isinstance(n, int) else list(n),
        "N": N if isinstance(N, int) else list(N),
        "seed": seed,
        "policy": SolverPolicy(policy).value,
        "metrics": list(metrics),
        "exact": all(info["exact"] for _, info in results),
        "tol": {"hamming": HAMMING_TOL, "spectral": SPECTRAL_TOL},
        "max_spectral_edge_ratio": max(ratios) if ratios else None,
        "failed_checks": sum(not c.passed for c in checks),
    }
    return BoundReport(meta, checks)
