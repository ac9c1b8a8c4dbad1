"""Complete d-ary trees.

A tree is stored as nested tuples: a leaf is ``()`` and an internal vertex is
the tuple of its ``d`` subtrees, left to right.  The degenerate tree of size 0
is the single vertex ``()``.  Vertex ids are preorder indices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from math import comb
from typing import Iterator

from .errors import DEFAULT_GUARD, InvalidArgument, ResourceLimit

Node = tuple


def _check_arity(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise InvalidArgument(f"arity must be an integer >= 2, got {d!r}")


def count_complete_trees(d: int, n: int) -> int:
    _check_arity(d)
    if n < 0:
        raise InvalidArgument("size must be non-negative")
    return comb(d * n, n) // ((d - 1) * n + 1)


def node_size(node: Node) -> int:
    """Number of internal vertices below and including ``node``."""
    size, stack = 0, [node]
    while stack:
        x = stack.pop()
        if x:
            size += 1
            stack.extend(x)
    return size


def node_code(node: Node) -> str:
    out: list[str] = []
    stack: list = [node]
    while stack:
        x = stack.pop()
        if isinstance(x, str):
            out.append(x)
            continue
        out.append("(")
        stack.append(")")
        stack.extend(reversed(x))
    return "".join(out)


@dataclass(frozen=True)
class CompleteTree:
    d: int
    root: Node = ()

    @cached_property
    def size(self) -> int:
        return node_size(self.root)

    @cached_property
    def code(self) -> str:
        return node_code(self.root)

    @property
    def n(self) -> int:
        return self.size

    def vertices(self) -> list[Node]:
        """Subtrees in preorder; index = vertex id."""
        out, stack = [], [self.root]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(reversed(x))
        return out

    def leaves(self) -> list[int]:
        return [i for i, x in enumerate(self.vertices()) if not x]

    def check(self) -> None:
        for x in self.vertices():
            if x and len(x) != self.d:
                raise InvalidArgument(f"vertex with {len(x)} children in a {self.d}-ary tree")

    def to_json(self) -> dict:
        return {"d": self.d, "n": self.size, "code": self.code}

    @classmethod
    def from_code(cls, d: int, code: str) -> "CompleteTree":
        _check_arity(d)
        stack: list[list] = [[]]
        for ch in code:
            if ch == "(":
                stack.append([])
            elif ch == ")":
                if len(stack) < 2:
                    raise InvalidArgument(f"unbalanced tree code {code!r}")
                kids = stack.pop()
                stack[-1].append(tuple(kids))
            else:
                raise InvalidArgument(f"bad character {ch!r} in tree code")
        if len(stack) != 1 or len(stack[0]) != 1:
            raise InvalidArgument(f"tree code {code!r} is not a single tree")
        t = cls(d, stack[0][0])
        t.check()
        return t

    @classmethod
    def from_json(cls, obj: dict) -> "CompleteTree":
        return cls.from_code(obj["d"], obj["code"])

    def __lt__(self, other: "CompleteTree") -> bool:
        return (self.d, self.code) < (other.d, other.code)


def degenerate(d: int) -> CompleteTree:
    _check_arity(d)
    return CompleteTree(d, ())


def _replace_vertex(node: Node, target: int, fn) -> Node:
    """Rebuild ``node`` with the subtree at preorder index ``target`` replaced by fn(subtree)."""
    # iterative descent keeps deep combs away from the recursion limit
    path: list[tuple[Node, int]] = []
    cur, idx = node, 0
    while idx != target:
        skip = idx + 1
        for j, child in enumerate(cur):
            sz = _vertex_count(child)
            if skip + sz > target:
                path.append((cur, j))
                cur, idx = child, skip
                break
            skip += sz
        else:
            raise InvalidArgument(f"vertex {target} out of range")
    new = fn(cur)
    for parent, j in reversed(path):
        new = parent[:j] + (new,) + parent[j + 1:]
    return new


def _vertex_count(node: Node) -> int:
    """Vertex count of a subtree."""
    return len(node) * node_size(node) + 1 if node else 1


def grow_tree(t: CompleteTree, leaf: int) -> CompleteTree:
    """Graft ``d`` new leaves onto the leaf with preorder id ``leaf``."""
    if not 0 <= leaf < t.d * t.size + 1:
        raise InvalidArgument(f"vertex {leaf} out of range")

    def graft(x: Node) -> Node:
        if x:
            raise InvalidArgument(f"vertex {leaf} is not a leaf")
        return ((),) * t.d

    return CompleteTree(t.d, _replace_vertex(t.root, leaf, graft))


def growths(t: CompleteTree) -> Iterator[tuple[int, CompleteTree]]:
    for leaf in t.leaves():
        yield leaf, grow_tree(t, leaf)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _nodes(d: int, n: int) -> tuple[Node, ...]:
    if n == 0:
        return ((),)
    out = []
    for sizes in _compositions(n - 1, d):
        for kids in product(*(_nodes(d, s) for s in sizes)):
            out.append(tuple(kids))
    return tuple(out)


def enumerate_complete_trees(d: int, n: int, guard: int = DEFAULT_GUARD) -> list[CompleteTree]:
    """All of CT^d_n, sorted by tree code."""
    total = count_complete_trees(d, n)
    if total > guard:
        raise ResourceLimit(f"|CT^{d}_{n}| = {total} exceeds guard {guard}")
    trees = [CompleteTree(d, x) for x in _nodes(d, n)]
    trees.sort(key=lambda t: t.code)
    return trees


def lukasiewicz_decode(d: int, steps: list[int]) -> CompleteTree:
    """Decode a preorder word of (outdegree - 1) steps into a tree."""
    pos = 0

    def build() -> Node:
        nonlocal pos
        s = steps[pos]
        pos += 1
        if s == -1:
            return ()
        return tuple(build() for _ in range(d))

    root = build()
    if pos != len(steps):
        raise InvalidArgument("word is longer than its tree")
    return CompleteTree(d, root)


def uniform_tree_oracle(d: int, n: int, rng: random.Random) -> CompleteTree:
    """Exactly uniform sample from CT^d_n by the cycle lemma (non-incremental)."""
    _check_arity(d)
    if n == 0:
        return degenerate(d)
    steps = [d - 1] * n + [-1] * ((d - 1) * n + 1)
    rng.shuffle(steps)
    s, best, arg = 0, 0, -1
    for i, x in enumerate(steps):
        s += x
        if s < best:
            best, arg = s, i
    k = arg + 1
    return lukasiewicz_decode(d, steps[k:] + steps[:k])
