from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mapforge.errors import InvalidArgument
from mapforge.mobiles import (
    LabelledMobile,
    Mobile,
    corner_for_leaf,
    degenerate_mobile,
    enumerate_labelled_mobiles,
    enumerate_labels,
    enumerate_mobiles,
    grow_mobile,
    grow_unlabelled,
    label_str,
    parse_label,
    phi,
    phi_inverse,
    phi_leaf_whites,
    rank_label,
    unrank_label,
)
from mapforge.plane_trees import count_complete_trees, enumerate_complete_trees, grow_tree

STAR = ((), (), ())


def _worked_mobile(last_white):
    w39 = (STAR, STAR)
    b48 = ((((), (), w39),), (), ())
    return Mobile(4, (b48, ((), (), (((), (), last_white),))))


WORKED = _worked_mobile((STAR, STAR))
WORKED_BEFORE_GROWTH = _worked_mobile((STAR,))


def _node(*kids):
    return tuple(kids)


LEAF = ()
DRAWN_TREE = _node(
    _node(LEAF, _node(LEAF, LEAF, LEAF, _node(_node(LEAF, LEAF, LEAF, LEAF), LEAF, LEAF, LEAF)), LEAF, LEAF),
    LEAF,
    LEAF,
    _node(LEAF, LEAF, LEAF, _node(_node(LEAF, LEAF, LEAF, LEAF), LEAF, LEAF, LEAF)),
)


def test_labels_p2():
    assert [label_str(x) for x in enumerate_labels(2)] == ["++-", "+-+", "-++"]


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_label_count(p):
    labels = enumerate_labels(p)
    assert len(labels) == comb(2 * p - 1, p)
    assert all(sum(x) == 1 for x in labels)
    assert [rank_label(x) for x in labels] == list(range(1, len(labels) + 1))
    assert unrank_label(p, 1) == labels[0]


def test_label_errors():
    with pytest.raises(InvalidArgument):
        parse_label("+x-")
    with pytest.raises(InvalidArgument):
        unrank_label(2, 4)
    with pytest.raises(InvalidArgument):
        LabelledMobile(degenerate_mobile(2), ((1, 1, 1),))


@pytest.mark.parametrize("p,n", [(2, 3), (3, 3), (4, 2), (2, 6)])
def test_mobile_counts(p, n):
    mobiles = enumerate_mobiles(p, n)
    assert len(mobiles) == count_complete_trees(p, n)
    assert len(set(mobiles)) == len(mobiles)


def test_labelled_counts():
    assert len(enumerate_labelled_mobiles(2, 2)) == 2 * 9
    assert len(enumerate_labelled_mobiles(3, 1)) == 10


@pytest.mark.parametrize("p,n", [(2, 4), (3, 3), (4, 3)])
def test_phi_is_a_bijection(p, n):
    images = {phi(m).code for m in enumerate_mobiles(p, n)}
    assert images == {t.code for t in enumerate_complete_trees(p, n)}
    for t in enumerate_complete_trees(p, n):
        assert phi(phi_inverse(t)).code == t.code


def test_worked_mobile_decomposition():
    assert WORKED.size == 8
    sizes = []
    for child in phi(WORKED).root:
        stack, k = [child], 0
        while stack:
            x = stack.pop()
            if x:
                k += 1
                stack.extend(x)
        sizes.append(k)
    assert sizes == [4, 0, 0, 3]
    assert phi(WORKED).root == DRAWN_TREE


def test_worked_mobile_growth():
    ix = WORKED_BEFORE_GROWTH.index()
    grown = [c for c in range(len(ix.corners)) if grow_unlabelled(WORKED_BEFORE_GROWTH, c) == WORKED]
    # the two corners of the white vertex that carries the remaining star
    assert [ix.corners[c] for c in grown] == [(18, 0), (18, 1)]
    assert ix.first_corner(18) == grown[0]


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (3, 3), (4, 2)])
def test_leaf_growth_is_first_corner_growth(p, n):
    for m in enumerate_mobiles(p, n):
        t = phi(m)
        for leaf in t.leaves():
            c = corner_for_leaf(m, t, leaf)
            assert phi(grow_unlabelled(m, c)).code == grow_tree(t, leaf).code


def test_all_corners_of_small_p3_mobiles_reach_leaf_growths():
    for m in enumerate_mobiles(3, 2):
        t = phi(m)
        by_leaf = {grow_tree(t, leaf).code for leaf in t.leaves()}
        by_corner = {phi(grow_unlabelled(m, c)).code for c in range(len(m.index().corners))}
        assert by_corner == by_leaf


@pytest.mark.parametrize("p,n,extra", [(2, 3, 2), (3, 3, 6)])
def test_corner_growths_can_exceed_leaf_growths(p, n, extra):
    # a mobile has pn corners but (p-1)n+1 leaves; some corner growths are new
    over = 0
    for m in enumerate_mobiles(p, n):
        distinct = {grow_unlabelled(m, c) for c in range(len(m.index().corners))}
        if len(distinct) > (p - 1) * n + 1:
            over += 1
    assert over == extra


def test_corner_for_leaf_rejects_internal_vertex():
    m = enumerate_mobiles(2, 2)[0]
    with pytest.raises(InvalidArgument):
        corner_for_leaf(m, phi(m), 0)


def test_grow_bad_corner():
    with pytest.raises(InvalidArgument):
        grow_unlabelled(degenerate_mobile(3), 1)


@st.composite
def grown_mobiles(draw):
    p = draw(st.integers(2, 4))
    m = LabelledMobile(degenerate_mobile(p), ())
    for _ in range(draw(st.integers(0, 6))):
        corners = len(m.mobile.index().corners)
        c = draw(st.integers(0, corners - 1))
        lab = draw(st.sampled_from(enumerate_labels(p)))
        m = grow_mobile(m, c, lab)
    return m


@settings(max_examples=80, deadline=None)
@given(grown_mobiles())
def test_mobile_invariants(lm):
    m, p, n = lm.mobile, lm.p, lm.size
    ix = m.index()
    m.check()
    assert len(ix.black_nodes) == n
    assert len(ix.white_nodes) == (p - 1) * n + 1
    edges = sum(len(c) for c in ix.white_children) + sum(len(c) for c in ix.black_children)
    assert edges == p * n
    assert len(ix.corners) == max(1, p * n)
    assert len(phi_leaf_whites(m)) == (p - 1) * n + 1
    assert phi_inverse(phi(m)) == m
    assert LabelledMobile.from_json(lm.to_json()) == lm
