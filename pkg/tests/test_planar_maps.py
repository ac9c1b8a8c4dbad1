import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mapforge.bdfg import psi
from mapforge.blossoming import enumerate_blossoming_trees, xi
from mapforge.errors import InvalidArgument
from mapforge.mobiles import enumerate_labelled_mobiles
from mapforge.planar_maps import (
    ANGULATION,
    SIMPLE_TRIANGULATION,
    RootedMap,
    canonical_code,
    collapse_edge_pair,
    collapse_face,
    cycle_map,
    face_cycle,
    is_simple,
    path_map,
    relabel,
    single_edge,
    validate,
)
from oracles import glued_polygon_count


def _kinds(rep):
    return {v.kind for v in rep.violations}


def test_single_edge():
    m = single_edge()
    assert (m.num_vertices, m.num_edges, m.num_faces) == (2, 1, 1)
    assert validate(m, ANGULATION, 1).ok


def test_triangle_is_the_smallest_simple_triangulation():
    m = cycle_map(3)
    assert [len(f) for f in m.faces()] == [3, 3]
    assert validate(m, SIMPLE_TRIANGULATION).ok


def test_path_of_two_edges_is_a_quadrangulation():
    assert validate(path_map(2), ANGULATION, 2).ok
    assert not validate(path_map(3), ANGULATION, 2).ok


def test_loop_and_double_edge_are_not_simple():
    loop = RootedMap((1, 0), 0)
    assert "loop" in _kinds(validate(loop, SIMPLE_TRIANGULATION))
    digon = cycle_map(2)
    rep = validate(digon, SIMPLE_TRIANGULATION)
    assert {"multi-edge", "face-degree"} <= _kinds(rep)
    assert not is_simple(digon)


def test_malformed_inputs_are_reported():
    assert "sigma" in _kinds(validate(RootedMap((0, 0), 0)))
    assert "darts" in _kinds(validate(RootedMap((0,), 0)))
    assert "connectivity" in _kinds(validate(RootedMap((0, 1, 2, 3), 0)))
    assert "root" in _kinds(validate(RootedMap((0, 1), 5)))


def test_json_round_trip_and_dot():
    m = psi(enumerate_labelled_mobiles(2, 2)[5], 1)
    back = RootedMap.from_json(m.to_json())
    assert back.code == m.code
    assert back.pointed_vertex == m.pointed_vertex
    assert "color=red" in m.to_dot()
    assert m.to_json()["alpha"] == [d ^ 1 for d in range(m.num_darts)]


def _maps():
    out = [psi(lm, e) for lm in enumerate_labelled_mobiles(2, 2) for e in (1, -1)]
    out += [xi(t, 1) for t in enumerate_blossoming_trees(3)]
    return out


MAPS = _maps()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, len(MAPS) - 1), st.randoms(use_true_random=False))
def test_code_is_invariant_under_relabelling(i, rnd):
    m = MAPS[i]
    E = m.num_edges
    perm = list(range(E))
    rnd.shuffle(perm)
    flips = [rnd.random() < 0.5 for _ in range(E)]
    other = relabel(m, perm, flips)
    assert validate(other, ANGULATION).ok
    assert canonical_code(other) == canonical_code(m)
    assert other.pointed_vertex is None or other.num_vertices == m.num_vertices


def test_codes_separate_roots():
    m = cycle_map(4)
    assert len({RootedMap(m.sigma, r).code for r in range(8)}) == 1
    tri = xi(enumerate_blossoming_trees(2)[0], 1)
    assert len({RootedMap(tri.sigma, r).code for r in range(tri.num_darts)}) == 1  # K4 is symmetric
    q = path_map(2)
    assert len({RootedMap(q.sigma, r).code for r in range(4)}) == 2


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_psi_images_match_gluing_counts(p, n):
    pointed = {psi(lm, e).code for lm in enumerate_labelled_mobiles(p, n) for e in (1, -1)}
    plain = {psi(lm, e).forget_point().code for lm in enumerate_labelled_mobiles(p, n) for e in (1, -1)}
    assert len(pointed) == glued_polygon_count(2 * p, n, pointed=True)
    assert len(plain) == glued_polygon_count(2 * p, n)


@pytest.mark.parametrize("n", [1, 2])
def test_xi_images_match_gluing_counts(n):
    codes = {xi(t, e).code for t in enumerate_blossoming_trees(n) for e in (1, -1)}
    assert len(codes) == glued_polygon_count(3, 2 * n, simple=True)


def test_collapse_edge_pair_on_k4():
    k4 = xi(enumerate_blossoming_trees(2)[0], 1)
    root_edge = k4.root // 2
    with pytest.raises(InvalidArgument):
        collapse_edge_pair(k4, root_edge)
    for e in range(k4.num_edges):
        if e == root_edge:
            continue
        small, simple = collapse_edge_pair(k4, e)
        assert simple
        assert (small.num_vertices, small.num_edges, small.num_faces) == (3, 3, 2)


def test_collapse_edge_pair_can_leave_a_multi_edge():
    seen = set()
    for t in enumerate_blossoming_trees(3):
        T = xi(t, 1)
        for e in range(T.num_edges):
            if e != T.root // 2:
                small, simple = collapse_edge_pair(T, e)
                assert small.num_faces == T.num_faces - 2
                assert validate(small, ANGULATION).ok
                seen.add(simple)
    assert seen == {True, False}


def test_collapse_face_zips_a_square():
    m = cycle_map(4)
    cycle = face_cycle(m, 0)
    v = m.vertex_of[cycle[0]]
    out = collapse_face(m, cycle, v)
    assert (out.num_vertices, out.num_edges, out.num_faces) == (3, 2, 1)
    assert validate(out, ANGULATION, 2).ok


def test_collapse_face_errors():
    m = cycle_map(4)
    cycle = face_cycle(m, 0)
    with pytest.raises(InvalidArgument):
        collapse_face(m, cycle[:3], 0)
    with pytest.raises(InvalidArgument):
        collapse_face(m, cycle, 99)
    with pytest.raises(InvalidArgument):
        collapse_face(path_map(2), face_cycle(path_map(2), 0), 0)


def test_collapse_face_with_a_pendant_edge():
    # a hexagon whose inner face also holds a pendant edge: degree 8, boundary 6
    sigma = list(cycle_map(6).sigma) + [0, 13]
    sigma[0], sigma[12], sigma[11] = 12, 11, 0
    m = RootedMap(tuple(sigma), 2)
    assert sorted(len(f) for f in m.faces()) == [6, 8]
    cycle = face_cycle(m, 12)
    assert len(cycle) == 6
    out = collapse_face(m, cycle, m.vertex_of[cycle[0]])
    assert (out.num_vertices, out.num_edges, out.num_faces) == (4, 3, 1)
    degrees = sorted(sum(1 for d in range(out.num_darts) if out.vertex_of[d] == v) for v in range(4))
    assert degrees == [1, 1, 2, 2]


def test_pointed_vertex_inside_a_collapsed_face_moves_to_the_cycle():
    sigma = list(cycle_map(6).sigma) + [0, 13]
    sigma[0], sigma[12], sigma[11] = 12, 11, 0
    m = RootedMap(tuple(sigma), 2, 13)
    cycle = face_cycle(m, 12)
    out = collapse_face(m, cycle, m.vertex_of[cycle[0]])
    assert out.pointed is not None


def test_edge_pair_collapse_statistics():
    # growing a pair and collapsing one edge recovers the smaller map except
    # in a few cases where only the root-reversed map is reached
    from mapforge.verify import pair_lemma_stats

    st = pair_lemma_stats(2)
    assert (st.cases, st.any_hits, st.reversed_only) == (168, 166, 2)
