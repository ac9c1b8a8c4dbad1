"""Labelled mobiles to pointed 2p-angulations.

Every white corner sends a chord to the next corner (cyclically, along the
clockwise contour) whose label is one less, or to the extra vertex ``delta``
when it carries the minimum label.  Chords are non-crossing, so the rotation
at a corner follows from the circle order of the far endpoints: a chord whose
far end comes soon after the corner sits late in clockwise order.  ``delta``
is a point on the circle just after the first minimum-label corner.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidArgument
from .mobiles import LabelledMobile
from .planar_maps import ANGULATION, RootedMap, validate


def propagate_white_labels(m: LabelledMobile) -> list[int]:
    """Integer label of each white vertex (index order); the origin gets 0."""
    ix = m.mobile.index()
    lab = [0] * len(ix.white_nodes)
    # black ids are DFS preorder, so parents are labelled before their children
    for b, parent in enumerate(ix.black_parent):
        a = lab[parent]
        minus = [i + 1 for i, x in enumerate(m.labels[b]) if x < 0]
        for j, (u, i_j) in enumerate(zip(ix.black_children[b], minus), start=1):
            lab[u] = a + i_j - 2 * j
    return lab


@dataclass(frozen=True)
class PsiBuild:
    map: RootedMap
    white_dart: tuple  # a dart at each white vertex
    delta_dart: int
    corner_dart: tuple  # outgoing chord dart of each contour corner
    black_face: tuple  # a dart of the face holding each black vertex


@lru_cache(maxsize=1 << 14)
def psi_build(m: LabelledMobile, epsilon: int) -> PsiBuild:
    if epsilon not in (1, -1):
        raise InvalidArgument("epsilon must be +1 or -1")
    if m.size == 0:
        raise InvalidArgument("the degenerate mobile has no image")
    ix = m.mobile.index()
    wl = propagate_white_labels(m)
    corners = ix.corners
    K = len(corners)
    lab = [wl[w] for w, _ in corners]
    low = min(lab)
    m0 = lab.index(low)
    N = K + 1
    delta = m0 + 1  # extended position of delta

    def ext(i: int) -> int:
        return i if i <= m0 else i + 1

    # chord i: dart 2i at corner i, dart 2i+1 at its target
    ends: dict[int, list[tuple[int, int]]] = {q: [] for q in range(N)}
    for i in range(K):
        target = delta
        for step in range(1, K):
            j = (i + step) % K
            if lab[j] == lab[i] - 1:
                target = ext(j)
                break
        src = ext(i)
        ends[src].append(((target - src) % N, 2 * i))
        ends[target].append(((src - target) % N, 2 * i + 1))
    cw = {q: [d for _, d in sorted(v, key=lambda t: -t[0])] for q, v in ends.items()}

    # clockwise rotation of a white vertex: its corners in contour order
    by_white: dict[int, list[int]] = {}
    for i, (w, _) in enumerate(corners):
        by_white.setdefault(w, []).extend(cw[ext(i)])
    rotations = list(by_white.values()) + [cw[delta]]
    sigma = [0] * (2 * K)
    for rot in rotations:
        for a, b in zip(rot, rot[1:] + rot[:1]):
            sigma[b] = a  # counterclockwise = reverse of clockwise
    root = 0 if epsilon == 1 else 1
    rm = RootedMap(tuple(sigma), root, cw[delta][0])

    white_dart = tuple(by_white[w][0] for w in range(len(ix.white_nodes)))
    black_face = []
    for b, parent in enumerate(ix.black_parent):
        slot = ix.white_children[parent].index(b)
        black_face.append(2 * corners.index((parent, slot)))
    return PsiBuild(rm, white_dart, cw[delta][0], tuple(2 * i for i in range(K)), tuple(black_face))


def psi(m: LabelledMobile, epsilon: int) -> RootedMap:
    """Pointed rooted 2p-angulation; the pointed vertex is delta."""
    return psi_build(m, epsilon).map


def check_psi(m: LabelledMobile, epsilon: int):
    rm = psi(m, epsilon)
    rep = validate(rm, ANGULATION, m.p)
    p, n = m.p, m.size
    counts = (rm.num_faces, rm.num_edges, rm.num_vertices)
    if counts != (n, p * n, (p - 1) * n + 2):
        rep.ok = False
    return rep


def grown_face_collapse(m: LabelledMobile, corner: int, label, epsilon: int) -> tuple[RootedMap, RootedMap]:
    """Return (collapse of the new face in Psi(grow(m)), Psi(m)); the two agree."""
    from .mobiles import grow_mobile_tracked
    from .planar_maps import collapse_face, face_cycle

    big, b = grow_mobile_tracked(m, corner, label)
    info = psi_build(big, epsilon)
    ix = big.mobile.index()
    v1 = ix.black_parent[b]
    cycle = face_cycle(info.map, info.black_face[b])
    w = info.map.vertex_of[info.white_dart[v1]]
    return collapse_face(info.map, cycle, w), psi(m, epsilon)
