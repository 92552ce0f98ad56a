import math
from fractions import Fraction

import numpy as np
import pytest

from frechetgraph.bounds import (
    HAMMING_TOL,
    SPECTRAL_TOL,
    Check,
    SolverPolicy,
    hamming_mean_edges_check,
    ier_growth_sequence,
    make_check,
    run_campaign,
    solve_all,
    tightness_experiment,
    verify_corollary_sparsity,
    verify_lemma_chain,
    verify_theorem1,
)
from frechetgraph.frechet import CapExceededError
from frechetgraph.graph import (
    Graph,
    GraphSample,
    complete_graph,
    edge_count,
    empty_graph,
    path_graph,
    sample_edge_stats,
)

from conftest import random_graph

STAR4 = Graph.from_edges(4, [(1, 2), (1, 3), (1, 4)])


def by_name(report):
    return {c.name: c for c in report.checks}


# ---------------------------------------------------------------- check records


def test_make_check_exact_rationals():
    c = make_check("x", Fraction(1, 3), Fraction(1, 3), HAMMING_TOL)
    assert c.passed and not c.strict and c.slack == 0.0
    c = make_check("x", 3, Fraction(5, 2), HAMMING_TOL)
    assert not c.passed and c.lhs == 3.0 and c.rhs == 2.5


def test_make_check_float_tolerance():
    assert make_check("x", 1.0 + 5e-7, 1.0, SPECTRAL_TOL).passed
    assert not make_check("x", 1.0 + 2e-6, 1.0, SPECTRAL_TOL).passed


def test_pass_with_violated_sides_is_impossible():
    with pytest.raises(AssertionError):
        make_check("x", 2.0, 1.0, 0.0, decided=(True, False))


def test_check_json_fields():
    assert set(make_check("x", 1, 2, 0).to_obj()) == {"name", "lhs", "rhs", "slack", "strict", "pass"}


def test_hamming_mean_check_boundary_cases():
    # gap equal to sigma / sqrt(2): e = 2 ebar + 1 needs sigma^2 = 2
    g = GraphSample([empty_graph(4), Graph.from_edges(4, [(1, 2), (1, 3)])])
    stats = sample_edge_stats(g)  # ebar 1, sigma^2 1
    assert hamming_mean_edges_check("x", 2, stats).passed
    assert hamming_mean_edges_check("x", 2, stats).strict
    assert not hamming_mean_edges_check("x", 3, stats).passed
    flat = sample_edge_stats(GraphSample([empty_graph(3)]))
    c = hamming_mean_edges_check("x", 0, flat)
    assert c.passed and not c.strict
    assert not hamming_mean_edges_check("x", 1, flat).passed


# ---------------------------------------------------------------- theorem 1


def test_theorem1_toy(K3, E3):
    rep = verify_theorem1(GraphSample([K3, K3, E3]))
    checks = by_name(rep)
    median = checks["theorem1/hamming_median_edges/0"]
    assert (median.lhs, median.rhs) == (3.0, 4.0)
    assert median.passed and median.strict
    assert rep.all_pass
    assert rep.meta["exact"] and rep.meta["n"] == 3 and rep.meta["N"] == 3


@pytest.mark.parametrize("g", [path_graph(4), STAR4, complete_graph(4), empty_graph(3)])
def test_theorem1_singleton(g):
    rep = verify_theorem1(GraphSample([g]))
    assert rep.all_pass
    for c in rep.checks:
        assert c.lhs == edge_count(g)
        assert c.rhs in (2 * edge_count(g), 9 * edge_count(g))


def test_theorem1_random_campaign():
    rep = run_campaign(60, 5, (3, 7), seed=3, suites=("theorem1",))
    assert rep.all_pass
    assert rep.meta["exact"] is True


def test_theorem1_heuristic_policy_beyond_cap():
    rng = np.random.default_rng(0)
    s = GraphSample(random_graph(8, rng, 0.3) for _ in range(5))
    with pytest.raises(CapExceededError):
        verify_theorem1(s, SolverPolicy.EXACT, metrics=["hamming"])
    rep = verify_theorem1(s, SolverPolicy.HEURISTIC, metrics=["hamming"])
    assert rep.all_pass and rep.meta["exact"] is False
    assert rep.meta["methods"]["hamming_median"] == "majority_rule"


# ---------------------------------------------------------------- lemma chain


def test_lemma_chain_identical_graphs():
    rep = verify_lemma_chain(GraphSample([path_graph(4)] * 3))
    com = by_name(rep)["lemma_e/center_of_mass"]
    assert com.passed and com.lhs == pytest.approx(com.rhs, abs=1e-12)


def test_lemma_chain_k3_empty(K3, E3):
    rep = verify_lemma_chain(GraphSample([K3, E3]))
    f = by_name(rep)["lemma_f/mean_spectrum_norm"]
    assert f.lhs == pytest.approx(0.75, abs=1e-12)
    assert f.rhs == 1.5 and f.passed
    assert rep.all_pass


def test_lemma_chain_records_every_family(K3, E3, P3):
    rep = verify_lemma_chain(GraphSample([K3, E3, P3]))
    families = {c.name.split("/")[0] for c in rep.checks}
    assert families == {f"lemma_{x}" for x in "abcdefghi"}


def test_center_of_mass_counterexample():
    # star and path on 4 vertices both have ||lambda||^2 = 6, their mean spectrum is shorter
    rep = verify_lemma_chain(GraphSample([STAR4, path_graph(4)]))
    checks = by_name(rep)
    com = checks["lemma_e/center_of_mass"]
    assert com.lhs == pytest.approx(math.sqrt(6), abs=1e-12)
    assert com.rhs == pytest.approx(2.4088414, abs=1e-6)
    assert not com.passed
    assert checks["lemma_e/smallest_norm"].passed
    assert [c.name for c in rep.failures()] == ["lemma_e/center_of_mass"]


def test_shared_checks_agree_between_theorem_and_lemmas():
    rng = np.random.default_rng(8)
    for _ in range(5):
        s = GraphSample(random_graph(5, rng) for _ in range(4))
        sol = solve_all(s, metrics=["hamming"])
        t = verify_theorem1(s, solutions=sol)
        l = verify_lemma_chain(s, solutions=sol)
        t_map = {c.name.removeprefix("theorem1/"): c for c in t.checks}
        l_map = {c.name.removeprefix("lemma_d/"): c for c in l.find("lemma_d/")}
        assert t_map.keys() == l_map.keys()
        for key in t_map:
            assert (t_map[key].lhs, t_map[key].rhs, t_map[key].passed) == (l_map[key].lhs, l_map[key].rhs, l_map[key].passed)


def test_lemma_campaign_only_center_of_mass_can_fail():
    rep = run_campaign(80, (3, 5), (2, 7), seed=11)
    failing = {c.name.split("/", 2)[1] for c in rep.failures()}
    assert failing <= {"lemma_e"}
    assert all(c.name.endswith("center_of_mass") for c in rep.failures())


# ---------------------------------------------------------------- tightness


def test_tightness_small():
    res = tightness_experiment(3, 2)
    assert res.ratio == Fraction(4, 3)
    assert res.e_bar == Fraction(9, 4)
    assert res.median_edges == 3
    assert res.report.all_pass and res.report.meta["median_is_complete"]


def test_tightness_large():
    res = tightness_experiment(10, 1000)
    assert res.ratio == Fraction(2000, 1001)
    assert float(res.ratio) == pytest.approx(1.998002, abs=1e-6)


def test_tightness_degenerate():
    res = tightness_experiment(2, 1)
    assert res.ratio == 1 and res.report.meta["sample_size"] == 2


def test_tightness_ratio_increases_to_two():
    ratios = [tightness_experiment(4, N).ratio for N in range(1, 30)]
    assert all(a < b < 2 for a, b in zip(ratios, ratios[1:]))


def test_tightness_rejects_bad_sizes():
    with pytest.raises(ValueError):
        tightness_experiment(1, 3)


# ---------------------------------------------------------------- sparsity


def test_sparsity_ier_sequence():
    res = verify_corollary_sparsity(ier_growth_sequence((8, 16, 32), N=15, seed=5))
    dens = [r["median_edges_per_n2"] for r in res.rows]
    assert all(b <= a for a, b in zip(dens, dens[1:]))
    for r in res.rows:
        assert r["median_edges_per_n2"] <= r["median_bound_per_n2"]
        assert r["mean_edges_per_n2"] <= r["mean_bound_per_n2"]
    assert res.sparse_input and res.report.all_pass


def test_sparsity_complete_and_empty():
    full = verify_corollary_sparsity([GraphSample([complete_graph(n)] * 3) for n in (4, 8, 12)])
    assert not full.sparse_input
    assert all(r["sample_density"] == 1.0 for r in full.rows)
    empty = verify_corollary_sparsity([GraphSample([empty_graph(n)] * 3) for n in (4, 8, 12)])
    assert all(r["median_edges_per_n2"] == r["mean_edges_per_n2"] == r["sample_density"] == 0 for r in empty.rows)


# ---------------------------------------------------------------- campaigns


def test_campaign_independent_of_jobs():
    a = run_campaign(12, 4, 5, seed=7, jobs=1)
    b = run_campaign(12, 4, 5, seed=7, jobs=3)
    assert a.to_json() == b.to_json()


def test_campaign_checks_are_ordered_by_trial():
    rep = run_campaign(5, 3, 3, seed=1, suites=("theorem1",))
    trials = [int(c.name.split("/")[0].removeprefix("trial")) for c in rep.checks]
    assert trials == sorted(trials)
    assert isinstance(rep.checks[0], Check)
