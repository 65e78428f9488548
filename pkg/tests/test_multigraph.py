import itertools

import numpy as np
import pytest

from kcut import families
from kcut.contraction import Rng, run_contraction
from kcut.multigraph import (GraphError, KCut, TwoCut, WeightedMultigraph, atoms, boundary_weight,
                             contract_edge, crossing_edges, from_edge_list, generated_cut,
                             weight_of_cut)


def test_triangle_total(triangle):
    assert triangle.total_weight == 10
    assert triangle.n_super == 3


def test_parallel_edges_aggregate():
    g = from_edge_list(3, [(0, 1, 1), (0, 1, 1)])
    assert g.edges == {(0, 1): 2}
    assert g.total_weight == 2


def test_cycle_degrees(c6):
    assert c6.total_weight == 6
    assert all(c6.degree(v) == 2 for v in range(6))


@pytest.mark.parametrize("edges,msg", [
    ([(0, 1, 1), (1, 1, 2)], "edge 2"),
    ([(0, 1, 0)], "edge 1"),
    ([(0, 5, 1)], "edge 1"),
])
def test_bad_edges_named(edges, msg):
    with pytest.raises(GraphError, match=msg):
        from_edge_list(3, edges)


def test_contract_triangle(triangle):
    h = contract_edge(triangle, (0, 1))
    assert h.n_super == 2
    assert list(h.edges.values()) == [8]
    assert h.total_weight == 8
    assert triangle.total_weight == 10  # original untouched


def test_contract_cycle_gives_cycle(c6):
    h = c6.contract_edge((0, 1))
    assert h.n_super == 5
    assert sorted(h.edges.values()) == [1] * 5
    assert all(h.degree(v) == 2 for v in h.super_vertices())


def test_contract_path():
    g = families.path(3)
    h = g.contract_edge((0, 1))
    assert list(h.edges.values()) == [1]


def test_contract_missing_pair(c6):
    with pytest.raises(GraphError):
        c6.contract_edge((0, 3))


def test_membership_partitions(c6):
    h = c6.contract_edge((0, 1))
    h = h.contract_edge((h.owner()[2], h.owner()[3]))
    members = sorted(v for m in h.members.values() for v in m)
    assert members == list(range(6))
    assert h.owner()[0] == h.owner()[1]


def test_weight_of_cut_examples(c6):
    assert weight_of_cut(c6, [[0, 1], [2, 3], [4, 5]]) == 3
    k5 = families.clique(5)
    assert weight_of_cut(k5, [[0], [1], [2, 3, 4]]) == 7
    assert weight_of_cut(c6, [range(6)]) == 0


@pytest.mark.parametrize("blocks", [[[0, 1], [1, 2, 3, 4, 5]], [[0, 1], [2]], [[0, 1, 2, 3, 4, 5], []]])
def test_weight_of_cut_rejects_non_partition(c6, blocks):
    with pytest.raises(GraphError):
        weight_of_cut(c6, blocks)


def test_atoms_examples():
    assert len(atoms([{1}], 3)) == 2
    assert atoms([{0, 1}, {0, 1}], 4) == atoms([{0, 1}], 4)
    got = atoms([{1, 2}, {2, 3}], 5)  # vertex 0 and 4 share the empty membership vector
    assert sorted(map(sorted, got)) == [[0, 4], [1], [2], [3]]
    got = atoms([{0, 1}, {1, 2}], 4)
    assert sorted(map(sorted, got)) == [[0], [1], [2], [3]]


def test_generated_cut_examples(k4):
    cut = generated_cut(k4, [{0}, {1}])
    assert cut.blocks == ((0,), (1,), (2, 3))
    assert cut.weight == 5
    c = families.cycle(8)
    s = generated_cut(c, [{0, 1, 2}])
    assert s.weight == boundary_weight(c, {0, 1, 2}) == 2


def test_generated_cut_four_shifted_arcs():
    # four 2-cuts of C_8 whose Venn diagram has 2*4 atoms
    c8 = families.cycle(8)
    shores = [{0, 1, 2, 3}, {1, 2, 3, 4}, {2, 3, 4, 5}, {3, 4, 5, 6}]
    cut = generated_cut(c8, shores)
    assert cut.k == 8
    assert cut.weight == 8 == sum(boundary_weight(c8, s) for s in shores)


def test_generated_cut_single_atom(c6):
    with pytest.raises(GraphError):
        generated_cut(c6, [set(range(6))])


def test_kcut_canonical():
    a = KCut.from_blocks([[3, 2], [1, 0]], 2)
    b = KCut.from_blocks([[0, 1], [2, 3]], 2)
    assert a == b and a.blocks == ((0, 1), (2, 3))
    assert KCut.from_labels([1, 1, 0, 0], 2) == a


def test_twocut_shore_rules():
    assert TwoCut.from_side({0, 1, 2}, 4, 1).shore == {3}
    assert TwoCut.from_side({2, 3}, 4, 1).shore == {0, 1}
    assert TwoCut.from_side({0, 3}, 4, 1).shore == {0, 3}


def test_crossing_edges(c6):
    assert crossing_edges(c6, [[0, 1, 2], [3, 4, 5]]) == {(2, 3): 1, (0, 5): 1}


def test_contraction_soundness_random():
    rng = np.random.default_rng(5)
    for trial in range(40):
        n = int(rng.integers(3, 9))
        g = families.random_multigraph(n, seed=trial, extra_edges=n)
        h = run_contraction(g, int(rng.integers(2, n + 1)), Rng(trial))
        verts = h.super_vertices()
        for bits in itertools.product([0, 1], repeat=len(verts)):
            if len(set(bits)) < 2:
                continue
            labels = dict(zip(verts, bits))
            blocks = h.lift(labels)
            assert h.crossing_weight(labels) == weight_of_cut(g, blocks)


def test_total_weight_drops_by_pair_weight():
    g = families.random_multigraph(7, seed=3)
    for (a, b), w in list(g.edges.items())[:5]:
        assert g.contract_edge((a, b)).total_weight == g.total_weight - w


def test_disconnected_detection():
    g = WeightedMultigraph.from_edge_list(4, [(0, 1, 1), (2, 3, 1)])
    assert not g.is_connected()
    assert families.cycle(5).is_connected()
