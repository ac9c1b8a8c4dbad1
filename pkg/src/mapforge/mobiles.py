"""p-mobiles, their labels, the bijection with complete p-ary trees, and growth.

Nested-tuple form: a white vertex is the tuple of its black children, a black
vertex is the tuple of its ``p - 1`` white children, both left to right in
clockwise order.  Labels live beside the structure, indexed by the preorder
rank of black vertices.

The contour runs clockwise around the tree starting at the root corner.  A
corner is ``(white, slot)``: grafting there inserts the new black vertex as
child number ``slot``.  The origin has one corner per black child (slot 0 is
the root corner); any other white vertex with ``k`` children has ``k + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterator, Sequence

from .errors import DEFAULT_GUARD, InvalidArgument, ResourceLimit
from .plane_trees import CompleteTree, count_complete_trees

LabelString = tuple  # of +1 / -1 entries


# ---------------------------------------------------------------- labels

@lru_cache(maxsize=None)
def enumerate_labels(p: int) -> tuple[LabelString, ...]:
    """All +-1 strings of length 2p-1 summing to 1, lexicographic in '+' < '-'."""
    if p < 2:
        raise InvalidArgument("p must be >= 2")
    m = 2 * p - 1
    out = []
    for minus in combinations(range(m), p - 1):
        s = [1] * m
        for i in minus:
            s[i] = -1
        out.append(tuple(s))
    out.sort(key=label_str)
    return tuple(out)


def label_str(label: Sequence[int]) -> str:
    return "".join("+" if x > 0 else "-" for x in label)


def parse_label(s: str) -> LabelString:
    if set(s) - {"+", "-"}:
        raise InvalidArgument(f"bad label {s!r}")
    return tuple(1 if c == "+" else -1 for c in s)


def rank_label(label: LabelString) -> int:
    """1-based rank among ``enumerate_labels(p)``."""
    p = (len(label) + 1) // 2
    return enumerate_labels(p).index(tuple(label)) + 1


def unrank_label(p: int, rank: int) -> LabelString:
    labels = enumerate_labels(p)
    if not 1 <= rank <= len(labels):
        raise InvalidArgument(f"label rank {rank} out of range")
    return labels[rank - 1]


def check_label(p: int, label: Sequence[int]) -> None:
    if len(label) != 2 * p - 1 or any(x not in (1, -1) for x in label) or sum(label) != 1:
        raise InvalidArgument(f"{tuple(label)!r} is not a label for p={p}")


# ---------------------------------------------------------------- structures

@dataclass(frozen=True)
class Mobile:
    p: int
    root: tuple = ()

    @cached_property
    def size(self) -> int:
        return len(self.index().black_parent)

    @property
    def n(self) -> int:
        return self.size

    def index(self) -> "MobileIndex":
        return _index_of(self)

    @cached_property
    def word(self) -> str:
        return _word(self.root)

    def check(self) -> None:
        for b in self.index().black_nodes:
            if len(b) != self.p - 1:
                raise InvalidArgument("black vertex with wrong degree")

    def to_json(self) -> dict:
        return {"p": self.p, "tree": self.word, "labels": None}

    @classmethod
    def from_word(cls, p: int, word: str) -> "Mobile":
        m = cls(p, _parse_word(word))
        m.check()
        return m


@dataclass(frozen=True)
class LabelledMobile:
    mobile: Mobile
    labels: tuple = ()

    def __post_init__(self):
        if len(self.labels) != self.mobile.size:
            raise InvalidArgument("one label per black vertex is required")
        for lab in self.labels:
            check_label(self.mobile.p, lab)

    @property
    def p(self) -> int:
        return self.mobile.p

    @property
    def size(self) -> int:
        return self.mobile.size

    def to_json(self) -> dict:
        return {"p": self.p, "tree": self.mobile.word, "labels": [list(x) for x in self.labels]}

    @classmethod
    def from_json(cls, obj: dict) -> "LabelledMobile":
        m = Mobile.from_word(obj["p"], obj["tree"])
        return cls(m, tuple(tuple(x) for x in obj["labels"] or ()))


def _word(white: tuple) -> str:
    return "(" + "".join("[" + "".join(_word(u) for u in b) + "]" for b in white) + ")"


def _parse_word(word: str) -> tuple:
    stack: list[list] = [[]]
    kinds: list[str] = []
    for ch in word:
        if ch in "([":
            stack.append([])
            kinds.append(ch)
        elif ch in ")]":
            if not kinds or {"(": ")", "[": "]"}[kinds[-1]] != ch:
                raise InvalidArgument(f"malformed mobile word {word!r}")
            kinds.pop()
            kids = stack.pop()
            stack[-1].append(tuple(kids))
        else:
            raise InvalidArgument(f"bad character {ch!r} in mobile word")
    if len(stack) != 1 or len(stack[0]) != 1 or not word.startswith("("):
        raise InvalidArgument(f"malformed mobile word {word!r}")
    return stack[0][0]


@dataclass
class MobileIndex:
    """Array view of a mobile: white and black vertices numbered in DFS preorder."""

    white_nodes: list = field(default_factory=list)
    black_nodes: list = field(default_factory=list)
    white_children: list = field(default_factory=list)
    black_children: list = field(default_factory=list)
    white_parent: list = field(default_factory=list)
    black_parent: list = field(default_factory=list)
    corners: list = field(default_factory=list)  # (white, slot) in contour order

    def first_corner(self, w: int) -> int:
        return self.corners.index((w, 0))


@lru_cache(maxsize=4096)
def _index_of(m: Mobile) -> MobileIndex:
    ix = MobileIndex()

    def new_white(node, parent):
        ix.white_nodes.append(node)
        ix.white_children.append([])
        ix.white_parent.append(parent)
        return len(ix.white_nodes) - 1

    # explicit stack: ('w', node, parent) visits, ('c', white, slot) corner emissions
    stack: list = [("w", m.root, None)]
    while stack:
        kind, a, b = stack.pop()
        if kind == "c":
            ix.corners.append((a, b))
            continue
        if kind == "b":
            node, parent = a, b
            ix.black_nodes.append(node)
            ix.black_parent.append(parent)
            bid = len(ix.black_nodes) - 1
            ix.white_children[parent].append(bid)
            ix.black_children.append([])
            todo = []
            for u in node:
                todo.append(("w", u, bid))
            stack.extend(reversed(todo))
            continue
        w = new_white(a, b)
        if b is not None:
            ix.black_children[b].append(w)
        todo: list = [("c", w, 0)]
        k = len(a)
        for i, blk in enumerate(a):
            todo.append(("b", blk, w))
            if b is not None or i + 1 < k:
                todo.append(("c", w, i + 1))
        stack.extend(reversed(todo))
    return ix


def _rebuild(ix: MobileIndex, w: int = 0) -> tuple:
    return tuple(tuple(_rebuild(ix, u) for u in ix.black_children[b]) for b in ix.white_children[w])


def _black_preorder(ix: MobileIndex) -> list[int]:
    out: list[int] = []
    stack = [("w", 0)]
    while stack:
        kind, x = stack.pop()
        if kind == "w":
            stack.extend(("b", b) for b in reversed(ix.white_children[x]))
        else:
            out.append(x)
            stack.extend(("w", u) for u in reversed(ix.black_children[x]))
    return out


def degenerate_mobile(p: int) -> Mobile:
    return Mobile(p, ())


def white_corners(m: Mobile) -> list[tuple[int, int]]:
    return list(m.index().corners)


# ---------------------------------------------------------------- enumeration

@lru_cache(maxsize=None)
def _whites(p: int, n: int) -> tuple:
    if n == 0:
        return ((),)
    out = []
    for k in range(1, n + 1):
        for b in _blacks(p, k):
            for rest in _whites(p, n - k):
                out.append((b,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _blacks(p: int, n: int) -> tuple:
    out = []
    for sizes in _parts(n - 1, p - 1):
        for kids in product(*(_whites(p, s) for s in sizes)):
            out.append(tuple(kids))
    return tuple(out)


def _parts(total: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _parts(total - first, k - 1):
            yield (first,) + rest


def enumerate_mobiles(p: int, n: int, guard: int = DEFAULT_GUARD) -> list[Mobile]:
    total = count_complete_trees(p, n)
    if total > guard:
        raise ResourceLimit(f"|Mob^{p}_{n}| = {total} exceeds guard {guard}")
    return sorted((Mobile(p, w) for w in _whites(p, n)), key=lambda m: m.word)


def enumerate_labelled_mobiles(p: int, n: int, guard: int = DEFAULT_GUARD) -> list[LabelledMobile]:
    total = count_complete_trees(p, n) * len(enumerate_labels(p)) ** n
    if total > guard:
        raise ResourceLimit(f"|LMob^{p}_{n}| = {total} exceeds guard {guard}")
    labels = enumerate_labels(p)
    return [LabelledMobile(m, labs) for m in enumerate_mobiles(p, n) for labs in product(labels, repeat=n)]


# ---------------------------------------------------------------- Phi

def _phi_white(white: tuple) -> tuple:
    if not white:
        return ()
    *rest, last = white
    return (_phi_white(tuple(rest)),) + tuple(_phi_white(u) for u in last)


def phi(m: Mobile) -> CompleteTree:
    """Decompose at the rightmost black child of the origin, recursively."""
    return CompleteTree(m.p, _phi_white(m.root))


def _phi_inv(node: tuple) -> tuple:
    if not node:
        return ()
    first, *others = node
    return _phi_inv(first) + (tuple(_phi_inv(c) for c in others),)


def phi_inverse(t: CompleteTree) -> Mobile:
    return Mobile(t.d, _phi_inv(t.root))


def phi_leaf_whites(m: Mobile) -> list[int]:
    """White vertex id attached to each leaf of ``phi(m)``, leaves in preorder.

    Growing the tree at leaf j is the same as grafting a star at the first
    corner of white ``phi_leaf_whites(m)[j]``.
    """
    ix = m.index()

    def rec(w: int, k: int) -> list[int]:
        if k == 0:
            return [w]
        b = ix.white_children[w][k - 1]
        out = rec(w, k - 1)
        for u in ix.black_children[b]:
            out.extend(rec(u, len(ix.white_children[u])))
        return out

    return rec(0, len(ix.white_children[0]))


def corner_for_leaf(m: Mobile, t: CompleteTree, leaf: int) -> int:
    """Contour index of the corner matching the preorder leaf ``leaf`` of ``t = phi(m)``."""
    leaves = t.leaves()
    try:
        j = leaves.index(leaf)
    except ValueError:
        raise InvalidArgument(f"vertex {leaf} is not a leaf") from None
    return m.index().first_corner(phi_leaf_whites(m)[j])


# ---------------------------------------------------------------- growth

def _graft(m: Mobile, corner: int) -> tuple[Mobile, int]:
    """Graft a bare black star at a corner; returns the new mobile and the black's preorder rank."""
    ix = m.index()
    if not 0 <= corner < len(ix.corners):
        raise InvalidArgument(f"corner {corner} is not a white corner (mobile has {len(ix.corners)})")
    w, slot = ix.corners[corner]
    new_b = len(ix.black_nodes)
    children = [list(c) for c in ix.white_children]
    bkids = [list(c) for c in ix.black_children]
    first_new_white = len(ix.white_nodes)
    children[w].insert(slot, new_b)
    bkids.append(list(range(first_new_white, first_new_white + m.p - 1)))
    children.extend([] for _ in range(m.p - 1))
    view = MobileIndex(white_children=children, black_children=bkids)
    order = _black_preorder(view)
    return Mobile(m.p, _rebuild(view)), order.index(new_b)


def grow_unlabelled(m: Mobile, corner: int) -> Mobile:
    return _graft(m, corner)[0]


def grow_mobile_tracked(m: LabelledMobile, corner: int, label: LabelString) -> tuple[LabelledMobile, int]:
    """Like ``grow_mobile``, also returning the preorder id of the new black vertex."""
    check_label(m.p, label)
    new, pos = _graft(m.mobile, corner)
    labels = m.labels[:pos] + (tuple(label),) + m.labels[pos:]
    return LabelledMobile(new, labels), pos


def grow_mobile(m: LabelledMobile, corner: int, label: LabelString) -> LabelledMobile:
    return grow_mobile_tracked(m, corner, label)[0]
