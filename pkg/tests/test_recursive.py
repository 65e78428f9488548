import math
from fractions import Fraction

import pytest

from kcut import families
from kcut.multigraph import DisconnectedGraphError, GraphError, KCut, WeightedMultigraph, weight_of_cut
from kcut.oracle import all_k_cuts, exact_lambda_k
from kcut.recursive import (CutFamily, SolverConfig, build_schedule, canonical_rows,
                            default_repetitions, enumerate_near_min_cuts, plan_schedule,
                            recursive_contract, solve_min_k_cut)
from kcut.contraction import Rng


def test_schedule_examples():
    assert build_schedule(100, 3, 1, 180).levels == (100,)
    s = build_schedule(4096, 4, 1, 8)
    assert s.levels == (4096, 64, 8)
    assert s.trials == (64 ** 4, 8 ** 4)
    assert build_schedule(50, 3, 1, 50).T == 0


def test_schedule_invariants():
    for n in (30, 200, 5000):
        for k in (3, 4, 5):
            for alpha in (1, 1.5, 2):
                floor = k + 1
                s = build_schedule(n, k, alpha, floor)
                assert s.levels[0] == n and s.levels[-1] == math.ceil(floor)
                assert all(a > b for a, b in zip(s.levels, s.levels[1:]))
                assert s.T <= 64
                tele = 2 ** s.T * (n / s.levels[-1]) ** (alpha * k)
                assert math.prod(s.trials) <= tele * (1 + 1e-9)


def test_two_cut_schedule_shrinks_by_root_two():
    s = build_schedule(64, 2, 1, 2)
    assert s.kind == "ks"
    for a, b in zip(s.levels, s.levels[1:]):
        assert b == max(math.ceil(a / math.sqrt(2)), 2) or b == a - 1
    assert set(s.trials[:-1]) == {2}


def test_schedule_rejects_bad_input():
    with pytest.raises(GraphError):
        build_schedule(10, 3, 0.5, 4)
    with pytest.raises(GraphError):
        build_schedule(10, 3, 1, 2)


def test_trial_cap_flags():
    s = build_schedule(4096, 4, 1, 8, max_trials=1000)
    assert s.capped and max(s.trials) == 1000


def test_plan_branches():
    assert plan_schedule(12, SolverConfig(3)).levels == (12,)
    assert plan_schedule(7, SolverConfig(3)).kind == "direct"
    assert plan_schedule(12, SolverConfig(3, floor_override=3)).levels == (12, 6, 4, 3)
    big = plan_schedule(400, SolverConfig(3))
    assert big.levels == (400, 180)


def test_default_repetitions_scale():
    s = plan_schedule(12, SolverConfig(3))
    amp = max(math.ceil(9 * math.log(3) * math.log(12)), math.ceil(3 * math.log2(12)) + 10)
    assert amp == 25
    assert default_repetitions(s) % amp == 0
    assert default_repetitions(s) >= amp


def test_cut_family_dedup_and_min():
    fam = CutFamily(keep_min=True)
    a = KCut.from_blocks([[0, 1], [2]], 3)
    assert fam.insert(a)
    assert not fam.insert(KCut.from_blocks([[2], [1, 0]], 3))
    assert len(fam) == 1
    fam.insert(KCut.from_blocks([[0], [1, 2]], 2))
    assert fam.min_weight == 2 and len(fam) == 1
    assert not fam.insert(KCut.from_blocks([[1], [0, 2]], 5))
    bounded = CutFamily(max_weight=3)
    bounded.insert(a)
    assert not bounded.insert(KCut.from_blocks([[1], [0, 2]], 4))


def test_cut_family_merge_commutes():
    cuts = [KCut.from_blocks([[i], [j for j in range(5) if j != i]], i + 1) for i in range(5)]
    a, b = CutFamily(), CutFamily()
    for c in cuts[:3]:
        a.insert(c)
    for c in cuts[2:]:
        b.insert(c)
    ab = CutFamily().merge(a).merge(b)
    ba = CutFamily().merge(b).merge(a)
    assert ab.cuts() == ba.cuts() and len(ab) == 5


def test_canonical_rows():
    import numpy as np
    rows = np.array([[2, 2, 0, 1], [0, 0, 1, 2]], dtype=np.int8)
    out = canonical_rows(rows, 3)
    assert out.tolist() == [[0, 0, 1, 2], [0, 0, 1, 2]]


def test_leaf_inserts_one_cut():
    g = families.cycle(6)
    sched = build_schedule(6, 3, 1, 6)
    sink = CutFamily()
    recursive_contract(g, 0, sched, SolverConfig(3), Rng(0), sink)
    assert len(sink) == 1
    cut = sink.cuts()[0]
    assert weight_of_cut(g, cut.blocks) == cut.weight


def test_degenerate_leaf_counted():
    g = families.cycle(6)
    sched = build_schedule(6, 3, 1, 3)
    sink, stats = CutFamily(), {}
    # a leaf with fewer than k super-vertices is skipped and counted
    recursive_contract(families.path(2), 0, build_schedule(2, 2, 1, 2), SolverConfig(3), Rng(0),
                       sink, stats=stats)
    assert len(sink) == 0 and stats["degenerate_leaves"] == 1


def test_cycle8_all_min_two_cuts():
    res = solve_min_k_cut(families.cycle(8), SolverConfig(2, floor_override=2, seed=3))
    assert res.lambda_k == 2 and res.count == 28


def test_k4_singletons():
    res = solve_min_k_cut(families.clique(4), SolverConfig(2, seed=1))
    assert res.lambda_k == 3
    want = {KCut.from_blocks([[v], [u for u in range(4) if u != v]], 3).blocks for v in range(4)}
    assert {c.blocks for c in res.cuts} == want


@pytest.mark.parametrize("seed", [0, 1])
def test_cycle12(seed):
    res = solve_min_k_cut(families.cycle(12), SolverConfig(3, seed=seed))
    assert res.lambda_k == 3 and res.count == 220 and not res.capped


def test_k6():
    assert solve_min_k_cut(families.clique(6), SolverConfig(3)).lambda_k == 9


def test_trees():
    for seed in range(4):
        g = families.random_multigraph(7, seed=seed, extra_edges=0, max_weight=1)
        for k in (2, 3):
            assert solve_min_k_cut(g, SolverConfig(k, seed=seed)).lambda_k == k - 1


def test_multi_level_recursion_finds_everything():
    g = families.cycle(12)
    res = solve_min_k_cut(g, SolverConfig(3, floor_override=3, seed=5))
    assert res.schedule.T == 3
    assert res.count == 220
    for c in res.cuts:
        assert weight_of_cut(g, c.blocks) == c.weight


def test_enumerate_cycle6():
    g = families.cycle(6)
    res = enumerate_near_min_cuts(g, SolverConfig(3, alpha=1))
    assert res.count == 20
    res = enumerate_near_min_cuts(g, SolverConfig(3, alpha=Fraction(4, 3)))
    assert {c.key for c in res.cuts} == {c.key for c in all_k_cuts(g, 3, max_weight=4)}


def test_enumerate_n_equals_k():
    g = families.random_multigraph(4, seed=2)
    res = enumerate_near_min_cuts(g, SolverConfig(4, alpha=2))
    assert res.count == 1 and res.cuts.cuts()[0].weight == g.total_weight


def test_solver_errors():
    with pytest.raises(GraphError):
        solve_min_k_cut(families.path(3), SolverConfig(4))
    g = WeightedMultigraph.from_edge_list(4, [(0, 1, 1), (2, 3, 1)])
    with pytest.raises(DisconnectedGraphError):
        solve_min_k_cut(g, SolverConfig(2))
    with pytest.raises(GraphError):
        SolverConfig(3, alpha=0.5)
    with pytest.raises(GraphError):
        SolverConfig(3, repetitions=0)


def test_reproducible_and_thread_independent():
    g = families.random_multigraph(10, seed=4)
    cfg = SolverConfig(3, floor_override=4, repetitions=20, seed=7)
    a = enumerate_near_min_cuts(g, cfg, lambda_k=exact_lambda_k(g, 3).lambda_k)
    b = enumerate_near_min_cuts(g, cfg, lambda_k=exact_lambda_k(g, 3).lambda_k)
    c = enumerate_near_min_cuts(g, SolverConfig(3, floor_override=4, repetitions=20, seed=7,
                                                threads=2),
                                lambda_k=exact_lambda_k(g, 3).lambda_k)
    assert a.cuts.cuts() == b.cuts.cuts() == c.cuts.cuts()


def test_repetition_cap_flags():
    res = solve_min_k_cut(families.cycle(12), SolverConfig(3, max_repetitions=100))
    assert res.capped and res.repetitions == 100


def test_time_limit_flags():
    res = solve_min_k_cut(families.cycle(12), SolverConfig(3, floor_override=3, max_seconds=0.0))
    assert res.capped
