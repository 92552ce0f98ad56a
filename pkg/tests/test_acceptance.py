"""Acceptance criteria, one test each.

Every test prints a single ``CRITERION k: PASS|FAIL`` line (visible with or
without ``-s``) and then asserts. Run on its own with::

    pytest tests/test_acceptance.py -v
"""

import os
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from frechetgraph.bounds import random_trial_sample, run_campaign, tightness_experiment
from frechetgraph.frechet import Metric, exhaustive_frechet, frechet_exact, median_majority_rule
from frechetgraph.graph import edge_count
from frechetgraph.metrics import adjacency_spectrum, symmetric_eigenvalues
from frechetgraph.random_graphs import (
    EdgeProbabilityMatrix,
    population_f2_bound,
    population_frechet_f2,
    population_mean_graph,
    sample_ier_many,
    uniform_random_graph,
)

SEED = 20221


@pytest.fixture
def verdict(capsys):
    def emit(k: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nCRITERION {k}: {'PASS' if ok else 'FAIL'} -- {detail}")

    return emit


def test_criterion_1_majority_rule_exact(verdict):
    start = time.perf_counter()
    trials, bad = 500, []
    for t in range(trials):
        s = random_trial_sample(t, (2, 5), (1, 9), SEED)
        mr = frechet_exact(median_majority_rule(s).minimizers[0], s, 1)
        ex = exhaustive_frechet(s, Metric.HAMMING, 1).f_exact
        if mr != ex:
            bad.append((t, mr, ex))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    verdict(1, ok, f"{trials} samples, {len(bad)} mismatches, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 60


def test_criterion_2_hamming_bounds(verdict):
    rep = run_campaign(500, (2, 5), (1, 9), seed=SEED, metrics=(Metric.HAMMING,), suites=("theorem1",))
    fails = rep.failures()
    mean_checks = [c for c in rep.checks if "hamming_mean" in c.name]
    median_checks = [c for c in rep.checks if "hamming_median" in c.name]
    ok = not fails and mean_checks and median_checks
    verdict(
        2,
        ok,
        f"{len(mean_checks)} mean-minimizer and {len(median_checks)} median checks, {len(fails)} failures",
    )
    assert mean_checks and median_checks
    assert not fails, [c.name for c in fails[:10]]


def test_criterion_3_spectral_bound(verdict):
    start = time.perf_counter()
    rep = run_campaign(200, (3, 5), (2, 7), seed=SEED, metrics=(Metric.SPECTRAL,), suites=("theorem1",))
    elapsed = time.perf_counter() - start
    checks = [c for c in rep.checks if "spectral" in c.name]
    fails = [c for c in checks if not c.passed]
    ok = checks and not fails and elapsed < 600
    verdict(
        3,
        ok,
        f"{len(checks)} minimizer checks, {len(fails)} failures, "
        f"max e/ebar {rep.meta['max_spectral_edge_ratio']:.3f}, {elapsed:.1f}s",
    )
    assert checks
    assert not fails, [c.name for c in fails[:10]]
    assert elapsed < 600


def test_criterion_4_lemma_chain(verdict):
    rep = run_campaign(200, (3, 5), (2, 7), seed=SEED, suites=("lemmas",))
    fails = rep.failures()
    for c in rep.checks:
        assert c.lhs is not None and c.rhs is not None
    names = sorted({c.name.split("/", 2)[1] for c in fails})
    verdict(4, not fails, f"{len(rep.checks)} checks, {len(fails)} failures {names}")
    assert not fails, [(c.name, c.lhs, c.rhs) for c in fails[:10]]


def test_criterion_5_tightness(verdict):
    ratios = {}
    for N in (1, 10, 100, 1000):
        res = tightness_experiment(10, N)
        assert res.report.all_pass
        ratios[N] = res.ratio
    exact = all(ratios[N] == Fraction(2 * N, N + 1) for N in ratios)
    limit = float(ratios[1000]) > 1.998
    verdict(5, exact and limit, f"ratios {[str(r) for r in ratios.values()]}, N=1000 -> {float(ratios[1000]):.6f}")
    assert exact
    assert limit


def test_criterion_6_eigensolver(verdict):
    rng = np.random.default_rng(SEED)
    worst_planted = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 33))
        q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        lam = np.sort(rng.uniform(-10, 10, n))[::-1]
        m = q @ np.diag(lam) @ q.T
        m = (m + m.T) / 2
        worst_planted = max(worst_planted, float(np.max(np.abs(symmetric_eigenvalues(m).values - lam))))

    worst_trace = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 33))
        g = uniform_random_graph(n, rng)
        lam = adjacency_spectrum(g).values
        worst_trace = max(worst_trace, abs(float(lam @ lam) - 2 * edge_count(g)) / n**2)

    ok = worst_planted < 1e-8 and worst_trace <= 1e-8
    verdict(6, ok, f"planted max err {worst_planted:.2e}, trace identity max err/n^2 {worst_trace:.2e}")
    assert worst_planted < 1e-8
    assert worst_trace <= 1e-8


def test_criterion_7_population_consistency(verdict):
    n, N, trials = 8, 200, 100
    hits = 0
    for t in range(trials):
        rng = np.random.default_rng([SEED, t])
        m = n * (n - 1) // 2
        p = 0.5 + rng.choice([-1.0, 1.0], m) * rng.uniform(0.2, 0.5, m)
        P = EdgeProbabilityMatrix(n, p)
        s = sample_ier_many(P, N, seed=SEED + t)
        hits += median_majority_rule(s).minimizers[0] == population_mean_graph(P)

    rng = np.random.default_rng(SEED)
    bound_fails = 0
    for _ in range(100):
        n_p = int(rng.integers(2, 13))
        P = EdgeProbabilityMatrix(n_p, rng.random(n_p * (n_p - 1) // 2))
        if population_frechet_f2(P, population_mean_graph(P)) > population_f2_bound(P) + 1e-9:
            bound_fails += 1

    ok = hits >= 99 and bound_fails == 0
    verdict(7, ok, f"median == population mean in {hits}/{trials} trials, {bound_fails} F2 bound failures")
    assert hits >= 99
    assert bound_fails == 0


def _verify(jobs: int) -> bytes:
    cmd = [
        sys.executable, "-m", "frechetgraph", "verify", "--suite", "all",
        "--trials", "24", "--n", "4", "--N", "5", "--seed", "7", "--jobs", str(jobs),
    ]
    proc = subprocess.run(cmd, capture_output=True, env={**os.environ, "PYTHONHASHSEED": str(jobs)})
    assert proc.returncode in (0, 1), proc.stderr.decode()
    return proc.stdout


def test_criterion_8_cli_determinism(verdict):
    first, second, parallel = _verify(1), _verify(1), _verify(8)
    ok = first == second == parallel and len(first) > 0
    verdict(8, ok, f"{len(first)} bytes; rerun identical {first == second}, jobs 1 vs 8 identical {first == parallel}")
    assert first == second
    assert first == parallel
