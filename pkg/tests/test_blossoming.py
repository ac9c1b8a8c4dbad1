import random

import networkx as nx
import pytest

from mapforge.blossoming import (
    LEFT,
    RIGHT,
    BlossomingTree,
    FourAryPair,
    check_xi,
    close_all,
    count_blossoming_trees,
    enumerate_blossoming_trees,
    enumerate_pairs,
    grafted_buds,
    grow_pair,
    join_pair,
    remove_bud,
    split_blossoming,
    xi,
    xi_build,
)
from mapforge.blossoming import _flatten
from mapforge.coupling import count_simple_triangulations
from mapforge.errors import InvalidArgument
from mapforge.plane_trees import CompleteTree, count_complete_trees

WORKED_TREE = "((**(**))*(**)(*(**)*))"


def test_worked_tree_closure():
    t = BlossomingTree.from_word(WORKED_TREE)
    assert t.size == 6
    pc = close_all(t)
    assert pc.closures == [(4, 0), (7, 4)]
    assert pc.left == [2, 3, 5, 6, 8, 9]
    assert pc.right == [10, 11, 0, 1]
    assert check_xi(t, 1).ok and check_xi(t, -1).ok


def test_closure_order_is_irrelevant():
    t = BlossomingTree.from_word(WORKED_TREE)
    ref = close_all(t)
    rng = random.Random(3)
    for _ in range(20):
        pc = close_all(t, rng)
        assert sorted(pc.closures) == sorted(ref.closures)
        assert (pc.left, pc.right) == (ref.left, ref.right)


def test_smallest_trees():
    (t,) = enumerate_blossoming_trees(1)
    assert t.word == "(*)"
    m = xi(t, 1)
    assert (m.num_vertices, m.num_edges, m.num_faces) == (3, 3, 2)
    two = enumerate_blossoming_trees(2)
    assert len(two) == 2
    assert len({xi(s, e).code for s in two for e in (1, -1)}) == 1


@pytest.mark.parametrize("n", range(1, 7))
def test_counts(n):
    assert len(enumerate_blossoming_trees(n)) == count_blossoming_trees(n)
    assert count_blossoming_trees(n) == sum(
        count_complete_trees(4, a) * count_complete_trees(4, n - 1 - a) for a in range(n))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_xi_is_2n_to_1(n):
    mult = {}
    for t in enumerate_blossoming_trees(n):
        for e in (1, -1):
            c = xi(t, e).code
            mult[c] = mult.get(c, 0) + 1
    assert len(mult) == count_simple_triangulations(n)
    assert set(mult.values()) == {2 * n}


@pytest.mark.parametrize("n", range(1, 6))
def test_split_and_join(n):
    for t in enumerate_blossoming_trees(n):
        pr = split_blossoming(t)
        assert pr.size == n
        assert join_pair(pr) == t
    assert len(enumerate_pairs(n - 1)) == count_blossoming_trees(n)


def test_grow_pair_adds_one_bud():
    for pr in enumerate_pairs(2):
        small = join_pair(pr)
        for side in (LEFT, RIGHT):
            for leaf in pr.side(side).leaves():
                big = join_pair(grow_pair(pr, side, leaf))
                assert big.size == small.size + 1
                buds = grafted_buds(small, big)
                assert buds
                assert all(remove_bud(big, x) == small for x in buds)


def test_errors():
    with pytest.raises(InvalidArgument):
        BlossomingTree.from_word("(**)")
    with pytest.raises(InvalidArgument):
        BlossomingTree.from_word("(*")
    with pytest.raises(InvalidArgument):
        FourAryPair(CompleteTree(3, ()), CompleteTree(4, ()))
    with pytest.raises(InvalidArgument):
        grow_pair(enumerate_pairs(0)[0], "middle", 0)
    with pytest.raises(InvalidArgument):
        remove_bud(BlossomingTree.from_word(WORKED_TREE), 1)
    with pytest.raises(InvalidArgument):
        xi(BlossomingTree.from_word("(*)"), 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_tree_edges_span_the_inner_vertices(n):
    for t in enumerate_blossoming_trees(n):
        fl = _flatten(t)
        for eps in (1, -1):
            info = xi_build(t, eps)
            m = info.map
            poles = {m.vertex_of[info.left_dart], m.vertex_of[info.right_dart]}
            inner = {m.vertex_of[d] for d in info.node_dart}
            assert len(inner) == n and inner.isdisjoint(poles)
            assert inner | poles == set(range(m.num_vertices))
            g = nx.MultiGraph()
            g.add_nodes_from(inner)
            for x, kind in enumerate(fl.kind):
                if kind == "n" and x >= 2 and fl.kind[fl.parent[x]] == "n":
                    g.add_edge(m.vertex_of[2 * (x - 1)], m.vertex_of[2 * (x - 1) + 1])
            assert nx.is_tree(g)
