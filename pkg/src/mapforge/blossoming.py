"""Blossoming trees, their closure into simple triangulations, and the
correspondence with ordered pairs of complete 4-ary trees.

A blossoming tree is stored from the single child ``v`` of the root blossom
``rho``: a non-blossom vertex is the tuple of its children, left to right, and
a blossom is ``BLOSSOM``.  ``v`` carries exactly one blossom child, every other
non-blossom exactly two.

Rotation convention for the closure: each vertex lists its parent and then its
children counterclockwise, so that walking faces with ``sigma o alpha`` visits
the tree left to right starting from the root corner at ``rho``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator, Sequence

from .errors import DEFAULT_GUARD, InvalidArgument, ResourceLimit
from .plane_trees import CompleteTree, count_complete_trees, grow_tree
from .planar_maps import SIMPLE_TRIANGULATION, RootedMap, validate

BLOSSOM = None
LEFT, RIGHT = "left", "right"


@dataclass(frozen=True)
class BlossomingTree:
    root: tuple = (BLOSSOM,)

    @cached_property
    def size(self) -> int:
        return sum(1 for k in _flatten(self).kind if k == "n")

    @property
    def n(self) -> int:
        return self.size

    @cached_property
    def word(self) -> str:
        return _word(self.root)

    def check(self) -> None:
        fl = _flatten(self)
        for x, kind in enumerate(fl.kind):
            if kind != "n":
                continue
            want = 1 if x == 1 else 2
            if sum(1 for c in fl.children[x] if fl.kind[c] == "b") != want:
                raise InvalidArgument(f"non-blossom {x} has the wrong number of blossoms")

    def to_json(self) -> dict:
        return {"n": self.size, "tree": self.word}

    @classmethod
    def from_word(cls, word: str) -> "BlossomingTree":
        t = cls(_parse(word))
        t.check()
        return t


def _word(node) -> str:
    if node is BLOSSOM:
        return "*"
    return "(" + "".join(_word(c) for c in node) + ")"


def _parse(word: str):
    stack: list[list] = [[]]
    for ch in word:
        if ch == "(":
            stack.append([])
        elif ch == ")":
            if len(stack) < 2:
                raise InvalidArgument(f"malformed blossoming word {word!r}")
            kids = stack.pop()
            stack[-1].append(tuple(kids))
        elif ch == "*":
            stack[-1].append(BLOSSOM)
        else:
            raise InvalidArgument(f"bad character {ch!r}")
    if len(stack) != 1 or len(stack[0]) != 1 or stack[0][0] is BLOSSOM:
        raise InvalidArgument(f"malformed blossoming word {word!r}")
    return stack[0][0]


@dataclass
class _Flat:
    kind: list = field(default_factory=list)  # "b" / "n" per vertex, preorder with rho = 0
    parent: list = field(default_factory=list)
    children: list = field(default_factory=list)
    blossom_id: dict = field(default_factory=dict)  # vertex -> preorder rank among blossoms
    node_id: dict = field(default_factory=dict)  # vertex -> preorder rank among non-blossoms


@lru_cache(maxsize=4096)
def _flatten(t: BlossomingTree) -> _Flat:
    fl = _Flat()
    fl.kind.append("b")
    fl.parent.append(None)
    fl.children.append([1])
    fl.blossom_id[0] = 0
    stack = [(t.root, 0)]
    while stack:
        node, par = stack.pop()
        x = len(fl.kind)
        fl.parent.append(par)
        fl.children.append([])
        if par != 0:
            fl.children[par].append(x)
        if node is BLOSSOM:
            fl.kind.append("b")
            fl.blossom_id[x] = len(fl.blossom_id)
        else:
            fl.kind.append("n")
            fl.node_id[x] = len(fl.node_id)
            stack.extend((c, x) for c in reversed(node))
    return fl


# ---------------------------------------------------------------- enumeration

@lru_cache(maxsize=None)
def _nodes(k: int) -> tuple:
    """Non-blossom subtrees with k non-blossoms, each carrying two blossoms."""
    out = []
    for x in range(k):
        for y in range(k - x):
            z = k - 1 - x - y
            for X, Y, Z in product(_forests(x), _forests(y), _forests(z)):
                out.append(X + (BLOSSOM,) + Y + (BLOSSOM,) + Z)
    return tuple(out)


@lru_cache(maxsize=None)
def _forests(k: int) -> tuple:
    if k == 0:
        return ((),)
    out = []
    for first in range(1, k + 1):
        for a in _nodes(first):
            for rest in _forests(k - first):
                out.append((a,) + rest)
    return tuple(out)


def count_blossoming_trees(n: int) -> int:
    return sum(count_complete_trees(4, a) * count_complete_trees(4, n - 1 - a) for a in range(n))


def enumerate_blossoming_trees(n: int, guard: int = DEFAULT_GUARD) -> list[BlossomingTree]:
    if n < 1:
        raise InvalidArgument("blossoming trees have size >= 1")
    total = count_blossoming_trees(n)
    if total > guard:
        raise ResourceLimit(f"|BT_{n}| = {total} exceeds guard {guard}")
    out = []
    for a in range(n):
        for F1, F2 in product(_forests(a), _forests(n - 1 - a)):
            out.append(BlossomingTree(F1 + (BLOSSOM,) + F2))
    return sorted(out, key=lambda t: t.word)


# ---------------------------------------------------------------- pairs of 4-ary trees

@dataclass(frozen=True)
class FourAryPair:
    l: CompleteTree
    r: CompleteTree

    def __post_init__(self):
        if self.l.d != 4 or self.r.d != 4:
            raise InvalidArgument("pairs are made of complete 4-ary trees")

    @property
    def size(self) -> int:
        """Size of the corresponding blossoming tree."""
        return self.l.size + self.r.size + 1

    def side(self, side: str) -> CompleteTree:
        return self.l if side == LEFT else self.r

    def to_json(self) -> dict:
        return {"l": self.l.code, "r": self.r.code}


def _children_to_tree(children: tuple) -> tuple:
    if not children:
        return ()
    *rest, z = children
    i = z.index(BLOSSOM)
    j = z.index(BLOSSOM, i + 1)
    return (
        _children_to_tree(tuple(rest)),
        _children_to_tree(z[:i]),
        _children_to_tree(z[i + 1:j]),
        _children_to_tree(z[j + 1:]),
    )


def _tree_to_children(node: tuple) -> tuple:
    if not node:
        return ()
    a, b, c, d = node
    z = _tree_to_children(b) + (BLOSSOM,) + _tree_to_children(c) + (BLOSSOM,) + _tree_to_children(d)
    return _tree_to_children(a) + (z,)


def split_blossoming(t: BlossomingTree) -> FourAryPair:
    """Cut ``v`` at its blossom into the left and right multi-type trees, then re-read them as 4-ary trees."""
    i = t.root.index(BLOSSOM)
    return FourAryPair(
        CompleteTree(4, _children_to_tree(t.root[:i])),
        CompleteTree(4, _children_to_tree(t.root[i + 1:])),
    )


def join_pair(p: FourAryPair) -> BlossomingTree:
    return BlossomingTree(_tree_to_children(p.l.root) + (BLOSSOM,) + _tree_to_children(p.r.root))


def enumerate_pairs(total: int) -> list[FourAryPair]:
    """All pairs with |l| + |r| = total."""
    from .plane_trees import enumerate_complete_trees

    return [
        FourAryPair(l, r)
        for a in range(total + 1)
        for l in enumerate_complete_trees(4, a)
        for r in enumerate_complete_trees(4, total - a)
    ]


def grow_pair(p: FourAryPair, side: str, leaf: int) -> FourAryPair:
    if side == LEFT:
        return FourAryPair(grow_tree(p.l, leaf), p.r)
    if side == RIGHT:
        return FourAryPair(p.l, grow_tree(p.r, leaf))
    raise InvalidArgument(f"side must be {LEFT!r} or {RIGHT!r}")


def remove_bud(t: BlossomingTree, vertex: int) -> BlossomingTree:
    """Delete a non-blossom (other than v) whose only children are its two blossoms."""
    fl = _flatten(t)
    if vertex < 2 or fl.kind[vertex] != "n" or len(fl.children[vertex]) != 2 or any(
        fl.kind[c] != "b" for c in fl.children[vertex]
    ):
        raise InvalidArgument(f"vertex {vertex} is not a bare non-blossom")

    def rebuild(x: int):
        if fl.kind[x] == "b":
            return BLOSSOM
        return tuple(rebuild(c) for c in fl.children[x] if c != vertex)

    return BlossomingTree(rebuild(1))


def grafted_buds(small: BlossomingTree, big: BlossomingTree) -> list[int]:
    """Vertices of ``big`` whose removal (with their two blossoms) yields ``small``."""
    fl = _flatten(big)
    out = []
    for x, kind in enumerate(fl.kind):
        if kind == "n" and x >= 2 and len(fl.children[x]) == 2 and all(fl.kind[c] == "b" for c in fl.children[x]):
            if remove_bud(big, x) == small:
                out.append(x)
    return out


# ---------------------------------------------------------------- closure

@dataclass
class PartialClosure:
    sigma: list
    tail: list
    contour: list  # darts of the infinite face, in walking order
    closures: list  # (blossom id, non-blossom id) in the order performed
    stem: dict  # blossom id -> dart from its owner towards it
    left: list = field(default_factory=list)  # blossom ids L_1..L_k
    right: list = field(default_factory=list)  # blossom ids R_1..R_h
    node_of_vertex: dict = field(default_factory=dict)


def _initial(t: BlossomingTree) -> tuple[_Flat, list, list]:
    fl = _flatten(t)
    V = len(fl.kind)
    sigma = [0] * (2 * (V - 1))
    tail = [0] * (2 * (V - 1))
    for x in range(V):
        darts = []
        if x:
            darts.append(2 * (x - 1) + 1)  # towards the parent
            tail[2 * (x - 1) + 1] = x
        for c in fl.children[x]:
            darts.append(2 * (c - 1))
            tail[2 * (c - 1)] = x
        for a, b in zip(darts, darts[1:] + darts[:1]):
            sigma[a] = b
    return fl, sigma, tail


def _closable(contour: list, is_bud) -> list[int]:
    m = len(contour)
    if m < 4:
        return []
    return [
        i for i in range(m)
        if is_bud(contour[i]) and not any(is_bud(contour[(i + s) % m]) for s in (1, 2, 3))
    ]


def close_all(t: BlossomingTree, rng: random.Random | None = None) -> PartialClosure:
    """Close blossoms until none is closable, then name the survivors L and R.

    With ``rng`` the closable blossom is picked at random at every step; the
    outcome does not depend on the choice.
    """
    fl, sigma, tail = _initial(t)
    blossom_vertex = [k == "b" for k in fl.kind]

    def head(d: int) -> int:
        return tail[d ^ 1]

    def is_bud(d: int) -> bool:
        return blossom_vertex[head(d)]

    contour = [1]
    d = sigma[0]
    while d != 1:
        contour.append(d)
        d = sigma[d ^ 1]
    stem = {fl.blossom_id[head(d)]: d for d in contour if is_bud(d)}
    closures = []
    while True:
        cands = _closable(contour, is_bud)
        if not cands:
            break
        i = rng.choice(cands) if rng is not None else cands[0]
        m = len(contour)
        a, d3 = contour[i], contour[(i + 3) % m]
        b = fl.blossom_id[head(a)]
        z = head(d3)
        # hang the stem's far dart in the corner of z entered by d3
        far, at = a ^ 1, d3 ^ 1
        sigma[far], sigma[at] = sigma[at], far
        blossom_vertex[tail[far]] = False
        tail[far] = z
        closures.append((b, fl.node_id[z]))
        drop = {(i + s) % m for s in (1, 2, 3)}
        contour = [x for j, x in enumerate(contour) if j not in drop]

    pc = PartialClosure(sigma, tail, contour, closures, stem, node_of_vertex=dict(fl.node_id))
    _name_survivors(pc, fl, is_bud)
    return pc


def _name_survivors(pc: PartialClosure, fl: _Flat, is_bud) -> None:
    buds = [fl.blossom_id[pc.tail[d ^ 1]] for d in pc.contour if is_bud(d)]
    owner = [pc.tail[pc.stem[b]] for b in buds]
    m = len(buds)
    pairs = [j for j in range(m) if owner[j] == owner[(j + 1) % m]]
    if len(pairs) != 2:
        raise InvalidArgument(f"expected two doubled boundary vertices, found {len(pairs)}")
    ja, jb = pairs

    def run(start: int, stop: int) -> list[int]:
        out, j = [], start
        while True:
            out.append(buds[j % m])
            if j % m == stop % m:
                return out
            j += 1

    def backward_key(b: int) -> float:
        return float("-inf") if b == 0 else -b

    # L runs from the second stem of one double vertex to the first stem of the other
    a2, b2 = buds[(ja + 1) % m], buds[(jb + 1) % m]
    if backward_key(b2) < backward_key(a2):
        pc.left, pc.right = run(ja + 1, jb), run(jb + 1, ja)
    else:
        pc.left, pc.right = run(jb + 1, ja), run(ja + 1, jb)


@dataclass(frozen=True)
class XiBuild:
    map: RootedMap
    blossom_edge: tuple  # map edge created from each blossom (by blossom id)
    node_dart: tuple  # a dart at each non-blossom (by non-blossom id)
    left_dart: int
    right_dart: int


@lru_cache(maxsize=1 << 14)
def xi_build(t: BlossomingTree, epsilon: int) -> XiBuild:
    if epsilon not in (1, -1):
        raise InvalidArgument("epsilon must be +1 or -1")
    pc = close_all(t)
    sigma = list(pc.sigma)
    E = len(sigma) // 2
    rL, rR = 2 * E, 2 * E + 1
    sigma += [0, 0]
    for side, r in ((pc.left, rL), (pc.right, rR)):
        ring = [pc.stem[b] ^ 1 for b in reversed(side)] + [r]
        for a, b in zip(ring, ring[1:] + ring[:1]):
            sigma[a] = b
    rm = RootedMap(tuple(sigma), rL if epsilon == 1 else rR)
    fl = _flatten(t)
    blossom_edge = [0] * len(fl.blossom_id)
    for b, d in pc.stem.items():
        blossom_edge[b] = d // 2
    node_dart = [0] * len(fl.node_id)
    for x, k in fl.node_id.items():
        node_dart[k] = 2 * (x - 1) + 1
    return XiBuild(rm, tuple(blossom_edge), tuple(node_dart), rL, rR)


def xi(t: BlossomingTree, epsilon: int) -> RootedMap:
    return xi_build(t, epsilon).map


def check_xi(t: BlossomingTree, epsilon: int):
    rm = xi(t, epsilon)
    rep = validate(rm, SIMPLE_TRIANGULATION)
    n = t.size
    if (rm.num_edges, rm.num_vertices, rm.num_faces) != (3 * n, n + 2, 2 * n):
        rep.ok = False
    return rep


def beta_edge(small: BlossomingTree, big: BlossomingTree, epsilon: int) -> list[int]:
    """Map edges of ``xi(big)`` made from the right blossom of each grafted bud."""
    fl = _flatten(big)
    info = xi_build(big, epsilon)
    return [info.blossom_edge[fl.blossom_id[fl.children[x][1]]] for x in grafted_buds(small, big)]
