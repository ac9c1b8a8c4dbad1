import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from mapforge.errors import InvalidArgument, ResourceLimit
from mapforge.plane_trees import (
    CompleteTree,
    count_complete_trees,
    degenerate,
    enumerate_complete_trees,
    grow_tree,
    growths,
    lukasiewicz_decode,
    uniform_tree_oracle,
)
from oracles import fuss_catalan_by_words


@pytest.mark.parametrize("d,n,want", [(4, 0, 1), (4, 2, 4), (4, 5, 969), (3, 2, 3), (4, 3, 22)])
def test_counts(d, n, want):
    assert count_complete_trees(d, n) == want


@pytest.mark.parametrize("d", [2, 3, 4])
def test_counts_match_word_oracle(d):
    for n in range(6):
        assert count_complete_trees(d, n) == fuss_catalan_by_words(d, n)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_enumeration_sizes(d):
    top = 8 if d == 2 else 6
    for n in range(top + 1):
        trees = enumerate_complete_trees(d, n)
        assert len(trees) == count_complete_trees(d, n)
        assert len({t.code for t in trees}) == len(trees)
        assert [t.code for t in trees] == sorted(t.code for t in trees)


def test_bad_arity():
    with pytest.raises(InvalidArgument):
        count_complete_trees(1, 3)


def test_guard():
    with pytest.raises(ResourceLimit):
        enumerate_complete_trees(4, 6, guard=100)


def test_small_enumerations():
    assert len(enumerate_complete_trees(2, 1)) == 1
    assert len(enumerate_complete_trees(3, 2)) == 3


def test_degenerate_grows_to_star():
    t = grow_tree(degenerate(4), 0)
    assert t == enumerate_complete_trees(4, 1)[0]


def test_grow_ct2_2():
    grown = {T.code for t in enumerate_complete_trees(2, 2) for _, T in growths(t)}
    assert grown == {t.code for t in enumerate_complete_trees(2, 3)}


def test_grow_rejects_internal_vertex():
    t = enumerate_complete_trees(3, 2)[0]
    with pytest.raises(InvalidArgument):
        grow_tree(t, 0)
    with pytest.raises(InvalidArgument):
        grow_tree(t, 99)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_every_tree_is_grown(d):
    for n in range(5):
        grown = {T.code for t in enumerate_complete_trees(d, n) for _, T in growths(t)}
        assert grown == {t.code for t in enumerate_complete_trees(d, n + 1)}


def test_distinct_leaves_give_distinct_trees():
    for t in enumerate_complete_trees(3, 4):
        out = [T.code for _, T in growths(t)]
        assert len(out) == len(set(out)) == 2 * 4 + 1


@st.composite
def trees(draw):
    d = draw(st.integers(2, 4))
    n = draw(st.integers(0, 7))
    return uniform_tree_oracle(d, n, random.Random(draw(st.integers(0, 2**32))))


@given(trees())
@settings(max_examples=200, deadline=None)
def test_tree_invariants(t):
    d, n = t.d, t.n
    t.check()
    assert len(t.vertices()) == d * n + 1
    assert len(t.leaves()) == (d - 1) * n + 1
    assert CompleteTree.from_code(d, t.code) == t
    assert CompleteTree.from_json(t.to_json()) == t


@given(trees(), st.data())
@settings(max_examples=100, deadline=None)
def test_grow_adds_leaves(t, data):
    leaf = data.draw(st.sampled_from(t.leaves()))
    T = grow_tree(t, leaf)
    assert T.n == t.n + 1
    assert len(T.leaves()) == (t.d - 1) * (t.n + 1) + 1


def test_oracle_small_cases():
    rng = random.Random(5)
    assert uniform_tree_oracle(2, 1, rng) == enumerate_complete_trees(2, 1)[0]
    assert uniform_tree_oracle(4, 0, rng) == degenerate(4)


def test_oracle_is_uniform():
    support = [t.code for t in enumerate_complete_trees(3, 2)]
    counts = Counter(uniform_tree_oracle(3, 2, random.Random(s)).code for s in range(100_000))
    assert set(counts) == set(support)
    assert chisquare([counts[c] for c in support]).pvalue > 1e-3


def test_lukasiewicz_decode_star():
    assert lukasiewicz_decode(3, [2, -1, -1, -1]).n == 1


def test_code_examples():
    assert degenerate(2).code == "()"
    assert CompleteTree.from_code(2, "(()())").n == 1
    with pytest.raises(InvalidArgument):
        CompleteTree.from_code(2, "(()()())")
