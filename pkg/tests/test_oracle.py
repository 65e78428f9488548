import itertools
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from kcut import families
from kcut.multigraph import GraphError, WeightedMultigraph, weight_of_cut, boundary_weight
from kcut.oracle import (EXACT_MAX_N, all_k_cuts, census_slope_spread, check_extremal_predicates,
                         classify_two_cuts, enumerate_k_partitions, exact_lambda_k,
                         exact_survival_probability, iter_rgs_chunks, medium_cut_census,
                         stirling2)


@pytest.mark.parametrize("n,k,count", [(4, 3, 6), (4, 2, 7), (5, 5, 1), (6, 3, 90), (12, 3, 86526)])
def test_partition_counts(n, k, count):
    parts = list(enumerate_k_partitions(n, k))
    assert len(parts) == count == stirling2(n, k)
    assert len(set(parts)) == count


def test_partitions_are_canonical():
    for p in enumerate_k_partitions(5, 3):
        assert all(len(b) > 0 for b in p)
        assert list(p) == sorted(p, key=min)
        assert sorted(v for b in p for v in b) == list(range(5))


def test_rgs_chunks_match_generator():
    rows = np.vstack(list(iter_rgs_chunks(7, 3, chunk_rows=50)))
    assert len(rows) == stirling2(7, 3)
    assert len({tuple(r) for r in rows}) == len(rows)


def test_partition_guard():
    with pytest.raises(GraphError, match="randomized solver"):
        next(enumerate_k_partitions(EXACT_MAX_N + 1, 2))


def test_exact_examples():
    r = exact_lambda_k(families.cycle(6), 3)
    assert (r.lambda_k, r.count) == (3, 20)
    r = exact_lambda_k(families.clique(5), 3)
    assert r.lambda_k == 7
    assert r.count == 10  # frozen from the enumeration: every pair of singletons
    g = WeightedMultigraph.from_edge_list(
        6, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1), (2, 3, 1)])
    r = exact_lambda_k(g, 2)
    assert (r.lambda_k, r.count) == (1, 1)


def test_exact_cuts_recompute():
    g = families.random_multigraph(7, seed=2)
    r = exact_lambda_k(g, 3)
    for c in r.cuts:
        assert weight_of_cut(g, c.blocks) == c.weight == r.lambda_k


def test_all_k_cuts_bound():
    cuts = all_k_cuts(families.cycle(6), 3, max_weight=4)
    assert {c.weight for c in cuts} == {3, 4}
    assert sum(c.weight == 3 for c in cuts) == 20


def test_trees_have_lambda_k_minus_one():
    for seed in range(5):
        g = families.random_multigraph(7, seed=seed, extra_edges=0, max_weight=1)
        for k in (2, 3, 4):
            assert exact_lambda_k(g, k).lambda_k == k - 1


def test_disconnected_oracle_allows_zero():
    g = WeightedMultigraph.from_edge_list(4, [(0, 1, 1), (2, 3, 1)])
    assert exact_lambda_k(g, 2).lambda_k == 0


def test_cycle_has_no_small_or_medium_cuts(c6):
    st = classify_two_cuts(c6, 3)
    assert (st.n_small, st.n_medium) == (0, 0)
    assert st.total == 2 ** 5 - 1


def test_k6_classification():
    # λ_3(K_6) = 9: singletons weigh 5, so λ/(k-1) = 4.5 <= 5 < 6 = 2λ/k
    st = classify_two_cuts(families.clique(6), 3)
    assert st.lambda_k == 9
    assert (st.n_small, st.n_medium, st.n_large) == (0, 6, 25)
    assert st.n_small < 2 ** (3 - 2)


def test_good_cuts_vanish_when_J_is_everything():
    g = families.clique(6)
    st = classify_two_cuts(g, 3, J=dict(g.edges), epsilon=Fraction(1, 10))
    assert st.n_good == 0


def test_shore_symmetry():
    g = families.random_multigraph(8, seed=1)
    st = classify_two_cuts(g, 3)
    for t in st.shores("medium"):
        assert boundary_weight(g, t.shore) == boundary_weight(g, set(range(8)) - t.shore) == t.weight


@pytest.mark.parametrize("g,k", [(families.cycle(6), 3), (families.clique(5), 3)])
def test_extremal_predicates_pass(g, k):
    checks = check_extremal_predicates(g, k)
    assert all(c.ok for c in checks), [c.line() for c in checks]


def test_edge_count_equality_case():
    g = WeightedMultigraph.from_edge_list(2, [(0, 1, 1)])
    c = {c.name: c for c in check_extremal_predicates(g, 2)}["edge_count_bound"]
    assert c.status == "pass" and "m=1 bound=1" in c.witness


def test_census_rows():
    rows = medium_cut_census("clique", [5, 6, 7, 8], 3, constant=1.0)
    assert [r.count for r in rows] == [5, 6, 7, 8]
    assert census_slope_spread(rows) == pytest.approx(1.0)
    cyc = medium_cut_census("cycle", range(8, 13), 8)
    assert all(r.count == 0 for r in cyc)
    assert "\t" in rows[0].line()


def test_census_constant_enforced():
    with pytest.raises(AssertionError):
        medium_cut_census("clique", [6], 3, constant=0.5)


def test_exact_survival_cycle_product():
    # survival of a fixed minimum cut on C_n equals ∏ (1 - k/j) = C(τ,k)/C(n,k)
    for n in range(4, 9):
        for k in (2, 3):
            if k >= n:
                continue
            g = families.cycle(n)
            cut = exact_lambda_k(g, k).cuts[0]
            for tau in range(k, n + 1):
                p = exact_survival_probability(g, cut, tau)
                assert p == Fraction(comb(tau, k), comb(n, k))
