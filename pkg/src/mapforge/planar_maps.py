"""Rooted (optionally pointed) planar maps as rotation systems.

Darts are ``0 .. 2E-1`` and the two darts of edge ``e`` are ``2e`` and
``2e+1``, so the edge involution is ``d ^ 1``.  ``sigma[d]`` is the next dart
counterclockwise around the tail of ``d``; faces are orbits of
``phi = sigma o alpha``, which keeps each face on the left.  Clockwise
contours are walked with the inverse rotation.

The pointed vertex is carried by a representative dart so that it survives
renumbering; its vertex id (orbits of sigma numbered by smallest dart) is
derived on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InvalidArgument

ANGULATION = "angulation"
SIMPLE_TRIANGULATION = "simple-triangulation"


def alpha(d: int) -> int:
    return d ^ 1


@dataclass(frozen=True)
class RootedMap:
    sigma: tuple
    root: int = 0
    pointed: int | None = None  # a dart incident to the pointed vertex

    @property
    def num_darts(self) -> int:
        return len(self.sigma)

    @property
    def num_edges(self) -> int:
        return len(self.sigma) // 2

    @cached_property
    def vertex_of(self) -> tuple:
        """Vertex id of the tail of each dart."""
        vid = [-1] * len(self.sigma)
        count = 0
        for d in range(len(self.sigma)):
            if vid[d] < 0:
                x = d
                while vid[x] < 0:
                    vid[x] = count
                    x = self.sigma[x]
                count += 1
        return tuple(vid)

    def vertices(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for d in range(len(self.sigma)):
            if not out[self.vertex_of[d]]:
                x = d
                while True:
                    out[self.vertex_of[d]].append(x)
                    x = self.sigma[x]
                    if x == d:
                        break
        return out

    @cached_property
    def num_vertices(self) -> int:
        return max(self.vertex_of, default=-1) + 1 if self.sigma else 1

    def phi(self, d: int) -> int:
        return self.sigma[d ^ 1]

    def faces(self) -> list[list[int]]:
        seen = [False] * len(self.sigma)
        out = []
        for d in range(len(self.sigma)):
            if not seen[d]:
                cyc, x = [], d
                while not seen[x]:
                    seen[x] = True
                    cyc.append(x)
                    x = self.sigma[x ^ 1]
                out.append(cyc)
        return out

    def face_of(self, d: int) -> list[int]:
        cyc, x = [d], self.sigma[d ^ 1]
        while x != d:
            cyc.append(x)
            x = self.sigma[x ^ 1]
        return cyc

    @property
    def num_faces(self) -> int:
        return len(self.faces())

    @property
    def pointed_vertex(self) -> int | None:
        return None if self.pointed is None else self.vertex_of[self.pointed]

    def head(self, d: int) -> int:
        return self.vertex_of[d ^ 1]

    def tail(self, d: int) -> int:
        return self.vertex_of[d]

    def forget_point(self) -> "RootedMap":
        return RootedMap(self.sigma, self.root, None)

    def edges(self) -> list[tuple[int, int]]:
        return [(self.vertex_of[2 * e], self.vertex_of[2 * e + 1]) for e in range(self.num_edges)]

    @cached_property
    def code(self) -> tuple:
        return canonical_code(self)

    @property
    def code_str(self) -> str:
        return ".".join(map(str, self.code))

    def to_json(self) -> dict:
        return {
            "darts": len(self.sigma),
            "sigma": list(self.sigma),
            "alpha": [d ^ 1 for d in range(len(self.sigma))],
            "root": self.root,
            "pointed": self.pointed_vertex,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RootedMap":
        sigma = tuple(obj["sigma"])
        if list(obj.get("alpha", [d ^ 1 for d in range(len(sigma))])) != [d ^ 1 for d in range(len(sigma))]:
            raise InvalidArgument("only the paired-dart involution d^1 is supported")
        m = cls(sigma, obj["root"], None)
        v = obj.get("pointed")
        if v is not None:
            m = cls(sigma, obj["root"], m.vertex_of.index(v))
        return m

    def to_dot(self, name: str = "map") -> str:
        lines = [f"graph {name} {{"]
        for e, (u, v) in enumerate(self.edges()):
            attrs = ""
            if e == self.root // 2:
                a, b = (u, v) if self.root % 2 == 0 else (v, u)
                lines.append(f"  {a} -- {b} [color=red, penwidth=2, dir=forward];")
                continue
            lines.append(f"  {u} -- {v}{attrs};")
        if self.pointed is not None:
            lines.append(f"  {self.pointed_vertex} [shape=doublecircle];")
        lines.append("}")
        return "\n".join(lines)


def from_permutations(sigma: Sequence[int], root: int, pointed: int | None = None) -> RootedMap:
    return RootedMap(tuple(sigma), root, pointed)


# ---------------------------------------------------------------- canonical codes

def canonical_code(m: RootedMap, with_point: bool = True) -> tuple:
    """Relabel darts breadth-first from the root along (sigma, alpha)."""
    n = len(m.sigma)
    if n == 0:
        return (0, -1)
    lab = [-1] * n
    order = [m.root]
    lab[m.root] = 0
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        for x in (m.sigma[d], d ^ 1):
            if lab[x] < 0:
                lab[x] = len(order)
                order.append(x)
    if len(order) != n:
        raise InvalidArgument("map is not connected")
    ptd = -1
    if with_point and m.pointed is not None:
        v = m.vertex_of[m.pointed]
        ptd = min(lab[d] for d in range(n) if m.vertex_of[d] == v)
    return (n // 2, ptd, *(lab[m.sigma[d]] for d in order), *(lab[d ^ 1] for d in order))


def relabel(m: RootedMap, edge_perm: Sequence[int], flips: Sequence[bool]) -> RootedMap:
    """Isomorphic copy: edge e becomes edge_perm[e], its darts swapped when flips[e]."""
    def f(d: int) -> int:
        e, s = divmod(d, 2)
        return 2 * edge_perm[e] + (s ^ int(flips[e]))

    sigma = [0] * len(m.sigma)
    for d, s in enumerate(m.sigma):
        sigma[f(d)] = f(s)
    return RootedMap(tuple(sigma), f(m.root), None if m.pointed is None else f(m.pointed))


# ---------------------------------------------------------------- validation

@dataclass
class Violation:
    kind: str
    detail: str
    where: tuple = ()


@dataclass
class ValidationReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate(m: RootedMap, kind: str = ANGULATION, p: int | None = None) -> ValidationReport:
    """Structured check; never raises."""
    vs: list[Violation] = []
    try:
        n = len(m.sigma)
        if n == 0 or n % 2:
            vs.append(Violation("darts", f"need a positive even number of darts, got {n}"))
            return ValidationReport(False, vs)
        if sorted(m.sigma) != list(range(n)):
            vs.append(Violation("sigma", "rotation is not a permutation of the darts"))
            return ValidationReport(False, vs)
        if not 0 <= m.root < n:
            vs.append(Violation("root", f"root dart {m.root} out of range"))
            return ValidationReport(False, vs)
        if m.pointed is not None and not 0 <= m.pointed < n:
            vs.append(Violation("pointed", "pointed dart out of range"))
        try:
            canonical_code(m, with_point=False)
        except InvalidArgument:
            vs.append(Violation("connectivity", "sigma and alpha do not act transitively"))
            return ValidationReport(False, vs)
        V, E, faces = m.num_vertices, n // 2, m.faces()
        if V - E + len(faces) != 2:
            vs.append(Violation("genus", f"V-E+F = {V}-{E}+{len(faces)} != 2"))
        want = 3 if kind == SIMPLE_TRIANGULATION else (2 * p if p else None)
        if kind not in (ANGULATION, SIMPLE_TRIANGULATION):
            vs.append(Violation("class", f"unknown class {kind!r}"))
        if want is not None:
            for f in faces:
                if len(f) != want:
                    vs.append(Violation("face-degree", f"face of degree {len(f)}, expected {want}", tuple(f)))
        if kind == SIMPLE_TRIANGULATION:
            vs.extend(_simplicity(m))
    except Exception as exc:  # report, never raise
        vs.append(Violation("internal", repr(exc)))
    return ValidationReport(not vs, vs)


def _simplicity(m: RootedMap) -> list[Violation]:
    vs = []
    seen: dict[tuple[int, int], int] = {}
    for e, (u, v) in enumerate(m.edges()):
        if u == v:
            vs.append(Violation("loop", f"edge {e} is a loop at vertex {u}", (e,)))
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            vs.append(Violation("multi-edge", f"edges {seen[key]} and {e} are parallel", (seen[key], e)))
        else:
            seen[key] = e
    return vs


def is_simple(m: RootedMap) -> bool:
    return not _simplicity(m)


# ---------------------------------------------------------------- editing

class MapEditor:
    """Mutable rotation system used by the collapse operations."""

    def __init__(self, m: RootedMap):
        self.sigma = dict(enumerate(m.sigma))
        self.inv = {s: d for d, s in self.sigma.items()}
        self.root = m.root
        self.pointed = m.pointed

    def alive(self, d: int) -> bool:
        return d in self.sigma

    def swap(self, x: int, y: int) -> None:
        """Exchange the successors of x and y: merges two vertices or splits one."""
        sx, sy = self.sigma[x], self.sigma[y]
        self.sigma[x], self.sigma[y] = sy, sx
        self.inv[sy], self.inv[sx] = x, y

    def _remove_dart(self, x: int) -> None:
        s, pr = self.sigma.pop(x), self.inv.pop(x)
        if s != x:
            self.sigma[pr] = s
            self.inv[s] = pr
        if self.pointed == x:
            if s == x:
                raise InvalidArgument("operation would delete the pointed vertex")
            self.pointed = s

    def delete_edge(self, e: int) -> None:
        self._remove_dart(2 * e)
        self._remove_dart(2 * e + 1)

    def contract_edge(self, e: int) -> None:
        self.swap(2 * e, 2 * e + 1)
        self.delete_edge(e)

    def build(self) -> RootedMap:
        edges = sorted({d // 2 for d in self.sigma})
        new = {e: i for i, e in enumerate(edges)}

        def f(d: int) -> int:
            return 2 * new[d // 2] + d % 2

        sigma = [0] * (2 * len(edges))
        for d, s in self.sigma.items():
            sigma[f(d)] = f(s)
        if self.root not in self.sigma:
            raise InvalidArgument("root edge was deleted")
        return RootedMap(tuple(sigma), f(self.root), None if self.pointed is None else f(self.pointed))


# ---------------------------------------------------------------- collapses

def face_cycle(m: RootedMap, d: int) -> list[int]:
    """Boundary darts of the face containing ``d`` that lie on edges seen once."""
    face = m.face_of(d)
    s = set(face)
    return [x for x in face if (x ^ 1) not in s]


def collapse_face(m: RootedMap, cycle: Sequence[int], v: int) -> RootedMap:
    """Erase the single face enclosed by ``cycle`` and zip the cycle into a path from ``v``.

    ``cycle`` lists the boundary darts in face order (face on the left).  Edges
    with both darts in that face lie inside the cycle and are erased.  The
    root, when on a zipped edge, moves to its partner keeping its direction.
    A pointed vertex strictly inside the cycle moves to the cycle vertex its
    erased component hangs from.
    """
    cycle = list(cycle)
    L = len(cycle)
    if L == 0 or L % 2:
        raise InvalidArgument("cycle must have positive even length")
    face = m.face_of(cycle[0])
    fs = set(face)
    if not set(cycle) <= fs:
        raise InvalidArgument("cycle does not bound a single face")
    if sorted(cycle) != sorted(x for x in face if (x ^ 1) not in fs):
        raise InvalidArgument("cycle encloses more than one face")
    tails = [m.vertex_of[x] for x in cycle]
    if len(set(tails)) != L:
        raise InvalidArgument("cycle is not simple")
    for i in range(L):
        if m.vertex_of[cycle[i] ^ 1] != tails[(i + 1) % L]:
            raise InvalidArgument("cycle darts are not consecutive")
    if v not in tails:
        raise InvalidArgument(f"vertex {v} is not on the cycle")
    s = tails.index(v)
    d = cycle[s:] + cycle[:s]
    k = L // 2
    interior = {x // 2 for x in face if (x ^ 1) in fs}
    if m.root // 2 in interior:
        raise InvalidArgument("root edge lies inside the collapsed face")
    ed = MapEditor(m)
    if m.pointed is not None:
        ed.pointed = _pointed_after_erasing(m, interior, d)
    for e in sorted(interior):
        ed.delete_edge(e)
    # d[i] here is d_{i+1} in 1-based notation
    for i in range(1, k + 1):
        kept, gone = d[i - 1], d[2 * k - i]
        if i < k:
            ed.swap(kept ^ 1, d[2 * k - i - 1] ^ 1)
        if ed.root == gone:
            ed.root = kept ^ 1
        elif ed.root == gone ^ 1:
            ed.root = kept
        if ed.pointed in (gone, gone ^ 1):
            ed.pointed = kept ^ 1 if ed.pointed == gone else kept
        ed.delete_edge(gone // 2)
    return ed.build()


def _pointed_after_erasing(m: RootedMap, interior: set, cycle: list[int]) -> int:
    """A pointed vertex strictly inside the cycle hands its mark to the cycle
    vertex its erased component hangs from."""
    pv = m.vertex_of[m.pointed]
    at_pv = [x for x in range(len(m.sigma)) if m.vertex_of[x] == pv]
    if not all(x // 2 in interior for x in at_pv):
        return m.pointed
    on_cycle = {m.vertex_of[x]: x for x in cycle}
    adj: dict[int, list[int]] = {}
    for e in interior:
        a, b = m.vertex_of[2 * e], m.vertex_of[2 * e + 1]
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen, queue = {pv}, [pv]
    while queue:
        x = queue.pop(0)
        if x in on_cycle:
            return on_cycle[x]
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    raise InvalidArgument("pointed vertex is cut off from the cycle")


def collapse_edge_pair(T: RootedMap, e: int) -> tuple[RootedMap, bool]:
    """Contract edge ``e`` and flatten the two resulting 2-gons.

    Returns the collapsed map and whether it is still a simple triangulation.
    """
    if not 0 <= e < T.num_edges:
        raise InvalidArgument(f"edge {e} out of range")
    if T.root // 2 == e:
        raise InvalidArgument("cannot collapse the root edge")
    a, b = 2 * e, 2 * e + 1
    pa, pb = T.phi(a), T.phi(b)
    ppa, ppb = T.phi(pa), T.phi(pb)
    if T.phi(ppa) != a or T.phi(ppb) != b:
        raise InvalidArgument("edge is not between two triangles")
    ed = MapEditor(T)
    ed.contract_edge(e)
    for keep, gone in ((pa, ppa), (pb, ppb)):
        if not ed.alive(gone) or gone // 2 == keep // 2:
            continue
        # gone runs x -> merged, its partner keep ^ 1 runs x -> merged too
        if ed.root == gone:
            ed.root = keep ^ 1
        elif ed.root == gone ^ 1:
            ed.root = keep
        if ed.pointed in (gone, gone ^ 1):
            ed.pointed = keep ^ 1 if ed.pointed == gone else keep
        ed.delete_edge(gone // 2)
    out = ed.build()
    return out, validate(out, SIMPLE_TRIANGULATION).ok


# ---------------------------------------------------------------- small constructors

def single_edge() -> RootedMap:
    return RootedMap((0, 1), 0)


def cycle_map(k: int, root: int = 0) -> RootedMap:
    """A k-cycle: vertex i has darts 2i (to i+1) and 2(i-1)+1 (to i-1)."""
    sigma = [0] * (2 * k)
    for i in range(k):
        out_d, in_d = 2 * i, 2 * ((i - 1) % k) + 1
        sigma[out_d], sigma[in_d] = in_d, out_d
    return RootedMap(tuple(sigma), root)


def path_map(k: int, root: int = 0) -> RootedMap:
    """Path with k edges; edge i joins vertex i to vertex i+1 via dart 2i."""
    sigma = list(range(2 * k))
    for i in range(1, k):
        sigma[2 * i], sigma[2 * i - 1] = 2 * i - 1, 2 * i
    return RootedMap(tuple(sigma), root)


def distinct_codes(maps: Iterable[RootedMap]) -> set:
    return {m.code for m in maps}
