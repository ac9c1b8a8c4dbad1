from itertools import product

import pytest

from mapforge.bdfg import check_psi, grown_face_collapse, propagate_white_labels, psi, psi_build
from mapforge.errors import InvalidArgument
from mapforge.mobiles import LabelledMobile, degenerate_mobile, enumerate_labelled_mobiles, enumerate_labels
from mapforge.planar_maps import ANGULATION, validate
from mapforge.verify import SAMPLE_MOBILE_P3, SAMPLE_WHITE_LABELS


def test_white_labels_of_sample_mobile():
    assert tuple(propagate_white_labels(SAMPLE_MOBILE_P3)) == SAMPLE_WHITE_LABELS


def test_sample_mobile_gives_a_hexangulation():
    for eps in (1, -1):
        m = psi(SAMPLE_MOBILE_P3, eps)
        assert validate(m, ANGULATION, 3).ok
        assert (m.num_faces, m.num_edges, m.num_vertices) == (4, 12, 10)
        # the pointed vertex sits one below the smallest white label
        assert m.pointed_vertex is not None
    assert psi(SAMPLE_MOBILE_P3, 1).code != psi(SAMPLE_MOBILE_P3, -1).code


def test_single_black_p2():
    images = {psi(lm, e).code for lm in enumerate_labelled_mobiles(2, 1) for e in (1, -1)}
    assert len(images) == 6


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (4, 1)])
def test_psi_is_injective_and_valid(p, n):
    seen = set()
    for lm, eps in product(enumerate_labelled_mobiles(p, n), (1, -1)):
        assert check_psi(lm, eps).ok
        seen.add(psi(lm, eps).code)
    assert len(seen) == 2 * len(enumerate_labelled_mobiles(p, n))


def test_degenerate_and_bad_epsilon():
    with pytest.raises(InvalidArgument):
        psi(LabelledMobile(degenerate_mobile(2), ()), 1)
    with pytest.raises(InvalidArgument):
        psi(enumerate_labelled_mobiles(2, 1)[0], 0)


def test_black_faces_have_degree_2p():
    info = psi_build(SAMPLE_MOBILE_P3, 1)
    faces = {tuple(sorted(info.map.face_of(d))) for d in info.black_face}
    assert len(faces) == 4
    assert all(len(f) == 6 for f in faces)


@pytest.mark.parametrize("p,top", [(2, 2), (3, 1)])
def test_collapsing_the_grown_face_undoes_growth(p, top):
    for n in range(1, top + 1):
        for m in enumerate_labelled_mobiles(p, n):
            for corner in range(len(m.mobile.index().corners)):
                for lab, eps in product(enumerate_labels(p), (1, -1)):
                    got, want = grown_face_collapse(m, corner, lab, eps)
                    assert got.code == want.code
