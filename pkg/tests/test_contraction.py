from fractions import Fraction
from math import comb

import numpy as np
import pytest

from kcut import families
from kcut.contraction import (AnalysisParams, Rng, contraction_process, estimate_survival,
                              final_random_k_cut, random_k_labellings, run_contraction,
                              sample_edge, survived)
from kcut.multigraph import GraphError, KCut, WeightedMultigraph, crossing_edges
from kcut.oracle import enumerate_k_partitions, exact_lambda_k


def chi_square(counts, probs):
    counts = np.asarray(counts, float)
    exp = counts.sum() * np.asarray(probs, float)
    return float(((counts - exp) ** 2 / exp).sum())


# critical values at p = 0.001
CHI2_CRIT = {1: 10.83, 2: 13.82, 5: 20.52, 6: 22.46}


def test_rng_paths_reproducible():
    a = Rng(3).child(1, 2).gen.random(4)
    b = Rng(3).child(1).child(2).gen.random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, Rng(3).child(2, 1).gen.random(4))


def test_sample_edge_proportional():
    g = WeightedMultigraph.from_edge_list(3, [(0, 1, 1), (1, 2, 3)])
    rng = Rng(1)
    counts = {(0, 1): 0, (1, 2): 0}
    for _ in range(20000):
        counts[sample_edge(g, rng)] += 1
    assert chi_square([counts[(0, 1)], counts[(1, 2)]], [0.25, 0.75]) < CHI2_CRIT[1]


def test_sample_edge_with_exclusion(triangle):
    rng = Rng(2)
    counts = {(0, 1): 0, (1, 2): 0, (0, 2): 0}
    for _ in range(20000):
        counts[sample_edge(triangle, rng, {(0, 2): 5})] += 1
    assert counts[(0, 2)] == 0
    assert chi_square([counts[(0, 1)], counts[(1, 2)]], [0.4, 0.6]) < CHI2_CRIT[1]


def test_sample_edge_single_and_exhausted():
    g = WeightedMultigraph.from_edge_list(2, [(0, 1, 4)])
    assert sample_edge(g, Rng(0)) == (0, 1)
    with pytest.raises(GraphError):
        sample_edge(g, Rng(0), {(0, 1): 4})


def test_run_contraction_cases():
    c8 = families.cycle(8)
    assert run_contraction(c8, 8, Rng(0)) is c8
    for s in range(30):
        h = run_contraction(c8, 2, Rng(s))
        assert h.n_super == 2 and list(h.edges.values()) == [2]
    k4 = families.clique(4)
    for s in range(30):
        assert sorted(run_contraction(k4, 3, Rng(s)).edges.values()) == [1, 2, 2]


def test_run_contraction_disconnected():
    g = WeightedMultigraph.from_edge_list(4, [(0, 1, 1), (2, 3, 1)])
    with pytest.raises(GraphError, match="disconnected"):
        run_contraction(g, 1, Rng(0))


def test_same_seed_same_result():
    g = families.random_multigraph(12, seed=1)
    a = run_contraction(g, 4, Rng(9))
    b = run_contraction(g, 4, Rng(9))
    assert a.members == b.members


def test_final_cut_trivial():
    g = families.cycle(3)
    cut = final_random_k_cut(g, 3, Rng(0))
    assert cut.blocks == ((0,), (1,), (2,))
    with pytest.raises(GraphError):
        final_random_k_cut(families.path(2), 3, Rng(0))


@pytest.mark.parametrize("k,nparts", [(3, 6), (2, 7)])
def test_final_cut_uniform(k, nparts):
    g = families.path(4)
    keys = [p for p in enumerate_k_partitions(4, k)]
    assert len(keys) == nparts
    counts = dict.fromkeys(keys, 0)
    rng = Rng(11)
    for i in range(6000):
        counts[final_random_k_cut(g, k, rng).blocks] += 1
    assert chi_square(list(counts.values()), [1 / nparts] * nparts) < CHI2_CRIT[nparts - 1]


def test_random_labellings_are_surjective():
    lab = random_k_labellings(6, 4, 500, np.random.default_rng(0))
    assert lab.shape == (500, 6)
    assert all(len(set(row)) == 4 for row in lab)


def test_analysis_params_defaults():
    p = AnalysisParams.make(3, 3, 3)
    assert p.epsilon == Fraction(4, 18)
    assert p.delta == Fraction(1, 6)
    assert p.beta == 3 + 2 * 1 * 3 / Fraction(4, 18)
    assert p.lambda_bar == 1
    with pytest.raises(GraphError):
        AnalysisParams.make(3, 3, 0, epsilon=Fraction(1, 3))


def test_process_on_cycle():
    g = families.cycle(6)
    J = crossing_edges(g, [[0, 1], [2, 3], [4, 5]])
    tr = contraction_process(g, J, 3, AnalysisParams.make(3, 3, 3), Rng(0), track_good_cuts=True)
    assert tr.m_values == [6, 5, 4]
    assert tr.r_value == Fraction(37, 60)
    assert tr.lines()[0] == "stage 6 6"
    assert all(dropped == 0 for *_, dropped in tr.stages)
    assert len(tr.good_cut_counts) == 4


def test_process_trivial_stops():
    g = families.random_multigraph(8, seed=0)
    p = AnalysisParams.make(3, 4, 0)
    tr = contraction_process(g, {}, g.n, p, Rng(0))
    assert tr.stages == [] and tr.r_value == 0
    tr = contraction_process(g, {}, g.n - 1, p, Rng(0))
    assert tr.r_value == Fraction(4, 3) / g.total_weight


def test_process_r_matches_recorded_m():
    g = families.random_multigraph(10, seed=7)
    lam = exact_lambda_k(g, 3).lambda_k
    cut = exact_lambda_k(g, 3).cuts[0]
    J = crossing_edges(g, cut.blocks)
    p = AnalysisParams.make(3, lam, sum(J.values()))
    for s in range(10):
        tr = contraction_process(g, J, 3, p, Rng(s))
        assert tr.r_value == p.lambda_bar * sum(Fraction(1, m) for m in tr.m_values)
        # with J = ∂K the protected weight is never contracted
        assert all(d == 0 for *_, d in tr.stages)
        # edge-count bound along the trace, using the original λ̄
        for j, m, _, _ in tr.stages:
            assert m >= Fraction(j * 3, 2 * 2) * p.lambda_bar


def test_process_exhaustion():
    g = families.path(4)
    J = dict(g.edges)
    with pytest.raises(GraphError, match="exhausted"):
        contraction_process(g, J, 2, AnalysisParams.make(2, 1, 3), Rng(0))


def test_survival_trivial_cases():
    g = families.cycle(6)
    cut = exact_lambda_k(g, 2).cuts[0]
    assert estimate_survival(g, cut, 6, 10, Rng(0)).frequency == 1.0
    all_cut = KCut.from_blocks([[v] for v in range(6)], 6)
    assert estimate_survival(g, all_cut, 5, 50, Rng(0)).frequency == 0.0


@pytest.mark.slow
def test_survival_positive_on_small_graphs():
    g = families.random_multigraph(6, seed=1)
    cut = exact_lambda_k(g, 3).cuts[0]
    est = estimate_survival(g, cut, 3, 10 ** 4 * comb(6, 2), Rng(1))
    assert est.survived > 0


def test_survived_helper():
    g = families.cycle(4)
    h = g.contract_edge((0, 1))
    assert survived(h, KCut.from_blocks([[0, 1], [2, 3]], 2))
    assert not survived(h, KCut.from_blocks([[0, 3], [1, 2]], 2))
