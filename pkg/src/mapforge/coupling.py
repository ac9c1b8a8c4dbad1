"""Exact couplings between consecutive sizes.

The flow networks ``G_n`` give the splitting function ``h`` that decides which
tree of a 4-ary pair grows; transport plans between ``CT^d_n`` and
``CT^d_{n+1}`` are computed by an integer max-flow on the grow graph.  The
two chain samplers compose these, and ``verify_uniformity_exact`` pushes the
exact law of each chain forward onto canonical map codes.
"""

from __future__ import annotations

import json
import os
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, lcm
from pathlib import Path
from typing import Callable, Iterable

import networkx as nx

from .blossoming import LEFT, RIGHT, FourAryPair, enumerate_pairs, grow_pair, join_pair, xi
from .errors import DEFAULT_GUARD, InvalidArgument, MapforgeError, ResourceLimit
from .mobiles import (
    LabelledMobile,
    corner_for_leaf,
    degenerate_mobile,
    enumerate_labels,
    grow_mobile,
    label_str,
    phi,
)
from .bdfg import psi
from .plane_trees import CompleteTree, count_complete_trees, degenerate, enumerate_complete_trees, growths
from .planar_maps import RootedMap, canonical_code


# ---------------------------------------------------------------- counting

def count_simple_triangulations(n: int) -> int:
    if n < 1:
        raise InvalidArgument("triangulation size must be >= 1")
    return 2 * factorial(4 * n - 3) // (factorial(n) * factorial(3 * n - 1))


def count_angulations(p: int, n: int) -> int:
    """Rooted 2p-angulations with n faces."""
    if p < 2 or n < 1:
        raise InvalidArgument("need p >= 2 and n >= 1")
    num = 2 * comb(2 * p - 1, p) ** n * count_complete_trees(p, n)
    return num // ((p - 1) * n + 2)


def _ct4(k: int) -> int:
    return count_complete_trees(4, k)


def tree_ratio(k: int) -> Fraction:
    """|CT^4_{k+1}| / |CT^4_k|."""
    return Fraction(_ct4(k + 1), _ct4(k))


def pair_count(total: int) -> int:
    """Pairs (l, r) with |l| + |r| = total, i.e. (total+1)|STr_{total+1}|."""
    return (total + 1) * count_simple_triangulations(total + 1)


# ---------------------------------------------------------------- flow networks

Pair = tuple[int, int]


@dataclass(frozen=True)
class FlowNetwork:
    n: int
    source: dict  # (a, b) with a + b = n -> capacity of s -> (a, b)
    sink: dict  # (a, b) with a + b = n + 1 -> capacity of (a, b) -> t

    def middle_edges(self) -> Iterable[tuple[Pair, Pair]]:
        for a, b in self.source:
            yield (a, b), (a + 1, b)
            yield (a, b), (a, b + 1)

    def cut_capacity(self, K: Iterable[Pair]) -> Fraction | None:
        """Capacity of the cut represented by ``K``; ``None`` when infinite.

        ``K`` holds the left pairs on the sink side and the right pairs on
        the source side.
        """
        K = set(K)
        for v, w in self.middle_edges():
            if v not in K and w not in K:
                return None
        total = Fraction(0)
        for v in K:
            total += self.source.get(v, 0) + self.sink.get(v, 0)
        return total

    def cut_k(self, i: int) -> frozenset:
        n = self.n
        if not -1 <= i < n:
            raise InvalidArgument(f"cut index must lie in [-1, {n})")
        return frozenset({(n - j, j) for j in range(i + 1)} | {(n + 1 - j, j) for j in range(i + 1, n + 2)})

    def left_layer(self) -> frozenset:
        return frozenset(self.source)


def build_flow_network(n: int) -> FlowNetwork:
    if n < 0:
        raise InvalidArgument("network index must be >= 0")
    d_src = (n + 1) * count_simple_triangulations(n + 1)
    d_snk = (n + 2) * count_simple_triangulations(n + 2)
    source = {(a, n - a): Fraction(_ct4(a) * _ct4(n - a), d_src) for a in range(n + 1)}
    sink = {(a, n + 1 - a): Fraction(_ct4(a) * _ct4(n + 1 - a), d_snk) for a in range(n + 2)}
    return FlowNetwork(n, source, sink)


@dataclass(frozen=True)
class FlowResult:
    value: Fraction
    flow: dict  # (u, v) -> Fraction, u and v are "s", "t" or pairs


def _integer_max_flow(g: nx.DiGraph, s, t) -> tuple[int, dict]:
    value, flow = nx.maximum_flow(g, s, t, flow_func=nx.algorithms.flow.edmonds_karp)
    return value, flow


def max_flow(net: FlowNetwork) -> FlowResult:
    """Exact max-flow; capacities are scaled to integers by their common denominator."""
    caps = list(net.source.values()) + list(net.sink.values())
    scale = lcm(*(c.denominator for c in caps))
    g = nx.DiGraph()
    for v, c in sorted(net.source.items()):
        g.add_edge("s", v, capacity=int(c * scale))
    for v, w in sorted(net.middle_edges()):
        g.add_edge(v, w)  # no capacity attribute: unbounded
    for v, c in sorted(net.sink.items()):
        g.add_edge(v, "t", capacity=int(c * scale))
    value, raw = _integer_max_flow(g, "s", "t")
    flow = {(u, v): Fraction(x, scale) for u, nbrs in raw.items() for v, x in nbrs.items() if g.has_edge(u, v)}
    return FlowResult(Fraction(value, scale), flow)


def check_flow(net: FlowNetwork, res: FlowResult) -> list[str]:
    """Feasibility and conservation problems of a flow, empty when fine."""
    bad = []
    for v, c in net.source.items():
        if not 0 <= res.flow[("s", v)] <= c:
            bad.append(f"source edge {v} out of bounds")
    for v, c in net.sink.items():
        if not 0 <= res.flow[(v, "t")] <= c:
            bad.append(f"sink edge {v} out of bounds")
    net_in: dict = defaultdict(Fraction)
    for (u, v), x in res.flow.items():
        if x < 0:
            bad.append(f"negative flow on {u}->{v}")
        net_in[v] += x
        net_in[u] -= x
    for v, x in net_in.items():
        if v not in ("s", "t") and x != 0:
            bad.append(f"conservation fails at {v}")
    if net_in["t"] != res.value:
        bad.append("value mismatch")
    return bad


# ---------------------------------------------------------------- h

@dataclass(frozen=True)
class HTable:
    n: int
    values: dict  # (a, b) with a + b = n + 1 -> Fraction

    def __getitem__(self, key: Pair) -> Fraction:
        return self.values[key]

    def rows(self) -> list[str]:
        return [f"({a},{b}) {v.numerator}/{v.denominator}" for (a, b), v in sorted(self.values.items())]


@lru_cache(maxsize=None)
def compute_h(n: int) -> HTable:
    """h on the layer a + b = n + 1, from the symmetrized max-flow of ``G_n``."""
    net = build_flow_network(n)
    res = max_flow(net)
    if res.value != 1:
        raise MapforgeError(f"G_{n} has max-flow {res.value}, not 1")
    f = res.flow
    values = {}
    for a, b in net.sink:
        if a == 0:
            values[(a, b)] = Fraction(0)
            continue
        fwd = f[((a - 1, b), (a, b))]
        mirror = f[((b, a - 1), (b, a))]
        values[(a, b)] = (fwd + mirror) / 2 / net.sink[(a, b)]
    return HTable(n, values)


def h(a: int, b: int) -> Fraction:
    if a < 0 or b < 0:
        raise InvalidArgument("h takes non-negative arguments")
    if a + b == 0:
        raise InvalidArgument("h(0, 0) is not defined")
    return compute_h(a + b - 1)[(a, b)]


def check_h_table(table: HTable) -> list[str]:
    """Both defining identities of h on one layer, plus range and boundary values."""
    n, bad = table.n, []
    for (a, b), v in table.values.items():
        if not 0 <= v <= 1:
            bad.append(f"h({a},{b}) = {v} outside [0,1]")
        if v + table[(b, a)] != 1:
            bad.append(f"h({a},{b}) + h({b},{a}) != 1")
        if a == 0 and v != 0 or b == 0 and a > 0 and v != 1:
            bad.append(f"boundary value h({a},{b}) = {v}")
    rhs = Fraction(count_simple_triangulations(n + 2) * (n + 2), count_simple_triangulations(n + 1) * (n + 1))
    for a in range(n + 1):
        b = n - a
        lhs = table[(a + 1, b)] * tree_ratio(a) + table[(b + 1, a)] * tree_ratio(b)
        if lhs != rhs:
            bad.append(f"second identity fails at ({a},{b}): {lhs} != {rhs}")
    return bad


# ---------------------------------------------------------------- tree transport plans

@dataclass(frozen=True)
class TransportPlan:
    d: int
    n: int
    moves: dict  # tree code of t -> tuple of (leaf, code of T, mass)

    def mass(self, T: str, t: str) -> Fraction:
        return sum((m for _, code, m in self.moves.get(t, ()) if code == T), Fraction(0))

    def entries(self) -> Iterable[tuple[str, int, str, Fraction]]:
        for t, row in self.moves.items():
            for leaf, T, m in row:
                yield t, leaf, T, m


def tree_transport_plan(d: int, n: int, guard: int = DEFAULT_GUARD) -> TransportPlan:
    """Growth scheme ``g_n`` between ``CT^d_n`` and ``CT^d_{n+1}`` by integer max-flow.

    Each small tree sends ``|CT_{n+1}|`` units along grow edges and each big
    tree absorbs ``|CT_n|``; dividing by ``|CT_n|`` gives row sums equal to the
    size ratio and column sums equal to one.
    """
    small_count, big_count = count_complete_trees(d, n), count_complete_trees(d, n + 1)
    if small_count * d * big_count > guard * 50:
        raise ResourceLimit(f"transport plan for CT^{d}_{n} -> CT^{d}_{n+1} exceeds guard")
    small = enumerate_complete_trees(d, n, guard)
    g = nx.DiGraph()
    leaf_of = {}
    for t in small:
        g.add_edge("s", ("t", t.code), capacity=big_count)
    for t in small:
        for leaf, T in growths(t):
            g.add_edge(("t", t.code), ("T", T.code))
            leaf_of[(t.code, T.code)] = leaf
    for T in enumerate_complete_trees(d, n + 1, guard):
        g.add_edge(("T", T.code), "z", capacity=small_count)
    value, raw = _integer_max_flow(g, "s", "z")
    if value != small_count * big_count:
        raise MapforgeError(f"grow graph of CT^{d}_{n} is infeasible (flow {value})")
    moves = {}
    for t in small:
        row = []
        for (_, T), x in raw[("t", t.code)].items():
            if x:
                row.append((leaf_of[(t.code, T)], T, Fraction(x, small_count)))
        moves[t.code] = tuple(sorted(row))
    return TransportPlan(d, n, moves)


def check_plan(plan: TransportPlan) -> list[str]:
    d, n, bad = plan.d, plan.n, []
    ratio = Fraction(count_complete_trees(d, n + 1), count_complete_trees(d, n))
    col: dict = defaultdict(Fraction)
    for t in enumerate_complete_trees(d, n):
        row = plan.moves.get(t.code, ())
        grown = {T.code: leaf for leaf, T in growths(t)}
        for leaf, T, m in row:
            if grown.get(T) != leaf:
                bad.append(f"{T} is not grown from {t.code} at leaf {leaf}")
            if m <= 0:
                bad.append("non-positive mass")
            col[T] += m
        if sum((m for *_, m in row), Fraction(0)) != ratio:
            bad.append(f"row sum of {t.code} differs from {ratio}")
    for T in enumerate_complete_trees(d, n + 1):
        if col[T.code] != 1:
            bad.append(f"column sum of {T.code} is {col[T.code]}")
    return bad


def _default_cache_dir() -> Path | None:
    env = os.environ.get("MAPFORGE_CACHE")
    if env == "":
        return None
    return Path(env) if env else Path.home() / ".cache" / "mapforge"


@dataclass
class PlanStore:
    """Plans memoized in memory and, when a directory is set, on disk as JSON."""

    directory: Path | None = field(default_factory=_default_cache_dir)
    guard: int = DEFAULT_GUARD
    _plans: dict = field(default_factory=dict, repr=False)

    def _path(self, d: int, n: int) -> Path | None:
        return None if self.directory is None else Path(self.directory) / f"plan-d{d}-n{n}.json"

    def get(self, d: int, n: int) -> TransportPlan:
        key = (d, n)
        if key in self._plans:
            return self._plans[key]
        path = self._path(d, n)
        plan = None
        if path is not None and path.exists():
            try:
                plan = load_plan(path)
            except (ValueError, KeyError):
                plan = None  # stale or corrupt file: recompute
        if plan is None or (plan.d, plan.n) != key:
            plan = tree_transport_plan(d, n, self.guard)
            if path is not None:
                try:
                    save_plan(plan, path)
                except OSError:
                    pass
        self._plans[key] = plan
        return plan


_STORES: dict = {}


def default_store() -> PlanStore:
    """Process-wide store for the current cache directory."""
    key = _default_cache_dir()
    if key not in _STORES:
        _STORES[key] = PlanStore(key)
    return _STORES[key]


def save_plan(plan: TransportPlan, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    obj = {
        "format": 1,
        "d": plan.d,
        "n": plan.n,
        "entries": [[t, leaf, T, f"{m.numerator}/{m.denominator}"] for t, leaf, T, m in plan.entries()],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(obj))
    tmp.replace(path)


def load_plan(path: Path) -> TransportPlan:
    obj = json.loads(Path(path).read_text())
    if obj.get("format") != 1:
        raise ValueError("unsupported plan format")
    moves: dict = defaultdict(list)
    for t, leaf, T, m in obj["entries"]:
        moves[t].append((leaf, T, Fraction(m)))
    return TransportPlan(obj["d"], obj["n"], {t: tuple(sorted(r)) for t, r in moves.items()})


# ---------------------------------------------------------------- sampling helpers

def pick(weights: list[Fraction], rng: random.Random) -> int:
    """Index drawn with probability proportional to exact rational weights."""
    den = lcm(*(w.denominator for w in weights))
    ints = [int(w * den) for w in weights]
    x = rng.randrange(sum(ints))
    for i, w in enumerate(ints):
        if x < w:
            return i
        x -= w
    raise AssertionError("unreachable")


def grow_step_tree(t: CompleteTree, plan: TransportPlan, rng: random.Random) -> tuple[int, CompleteTree]:
    """One tree step; returns the leaf used and the grown tree."""
    if t.d != plan.d or t.n != plan.n:
        raise InvalidArgument(f"tree of size {t.n} does not match a plan for size {plan.n}")
    row = plan.moves.get(t.code)
    if not row:
        raise InvalidArgument(f"tree {t.code} is not in the plan support")
    leaf, code, _ = row[pick([m for *_, m in row], rng)]
    return leaf, CompleteTree.from_code(t.d, code)


def step_law(t: CompleteTree, plan: TransportPlan) -> list[tuple[int, str, Fraction]]:
    """Conditional law of one tree step: (leaf, code, probability)."""
    row = plan.moves[t.code]
    total = sum((m for *_, m in row), Fraction(0))
    return [(leaf, code, m / total) for leaf, code, m in row]


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


Trace = Callable[[dict], None] | None


# ---------------------------------------------------------------- angulation chain

@dataclass(frozen=True)
class AngulationChain:
    p: int
    mobile: LabelledMobile
    epsilon: int


def angulation_step(state: AngulationChain, store: PlanStore, rng: random.Random) -> tuple[AngulationChain, dict]:
    m = state.mobile
    t = phi(m.mobile)
    leaf, _ = grow_step_tree(t, store.get(state.p, t.n), rng)
    corner = corner_for_leaf(m.mobile, t, leaf)
    labels = enumerate_labels(state.p)
    label = labels[rng.randrange(len(labels))]
    new = AngulationChain(state.p, grow_mobile(m, corner, label), state.epsilon)
    return new, {"leaf": leaf, "corner": corner, "label": label_str(label)}


def chain_sample_angulation(p: int, n_target: int, seed, store: PlanStore | None = None, trace: Trace = None) -> RootedMap:
    """Rooted 2p-angulation with ``n_target`` faces, exactly uniform."""
    if p < 2 or n_target < 1:
        raise InvalidArgument("need p >= 2 and n >= 1")
    store = store or default_store()
    rng = _rng(seed)
    eps = 1 if rng.randrange(2) else -1
    state = AngulationChain(p, LabelledMobile(degenerate_mobile(p), ()), eps)
    for size in range(1, n_target + 1):
        state, info = angulation_step(state, store, rng)
        if trace is not None:
            trace({"size": size, "epsilon": eps, **info, "code": psi(state.mobile, eps).forget_point().code_str})
    return psi(state.mobile, eps).forget_point()


# ---------------------------------------------------------------- triangulation chain

@dataclass(frozen=True)
class TriangulationChain:
    pair: FourAryPair
    epsilon: int


def side_probability(a: int, b: int) -> Fraction:
    """Probability that the left tree grows when |l| = a and |r| = b."""
    m = a + b + 1  # current triangulation size
    K = Fraction((m + 1) * count_simple_triangulations(m + 1), m * count_simple_triangulations(m))
    return h(a + 1, b) * tree_ratio(a) / K


def triangulation_step(state: TriangulationChain, store: PlanStore, rng: random.Random) -> tuple[TriangulationChain, dict]:
    pr = state.pair
    q = side_probability(pr.l.n, pr.r.n)
    side = LEFT if pick([q, 1 - q], rng) == 0 else RIGHT
    tree = pr.side(side)
    leaf, _ = grow_step_tree(tree, store.get(4, tree.n), rng)
    new = TriangulationChain(grow_pair(pr, side, leaf), state.epsilon)
    return new, {"side": side, "leaf": leaf}


def initial_pair() -> FourAryPair:
    return FourAryPair(degenerate(4), degenerate(4))


def chain_sample_triangulation(n_target: int, seed, store: PlanStore | None = None, trace: Trace = None) -> RootedMap:
    """Simple triangulation with ``2 n_target`` faces, exactly uniform."""
    if n_target < 1:
        raise InvalidArgument("triangulation size must be >= 1")
    store = store or default_store()
    rng = _rng(seed)
    eps = 1 if rng.randrange(2) else -1
    state = TriangulationChain(initial_pair(), eps)
    for size in range(2, n_target + 1):
        state, info = triangulation_step(state, store, rng)
        if trace is not None:
            trace({"size": size, "epsilon": eps, **info, "code": pair_map(state.pair, eps).code_str})
    return pair_map(state.pair, eps)


@lru_cache(maxsize=1 << 16)
def pair_map(pair: FourAryPair, epsilon: int) -> RootedMap:
    return xi(join_pair(pair), epsilon)


# ---------------------------------------------------------------- exact verification

@dataclass
class LevelReport:
    n: int
    support: int
    expected: int
    uniform: bool
    mass: Fraction
    extremes: tuple = ()


@dataclass
class UniformityReport:
    kind: str
    levels: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(lv.uniform for lv in self.levels)

    def first_failure(self) -> LevelReport | None:
        return next((lv for lv in self.levels if not lv.uniform), None)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "ok": self.ok,
            "levels": [
                {"n": lv.n, "support": lv.support, "expected": lv.expected, "uniform": lv.uniform,
                 "extremes": [str(x) for x in lv.extremes]}
                for lv in self.levels
            ],
        }


def _level(n: int, law: Counter, expected: int) -> LevelReport:
    values = set(law.values())
    total = sum(law.values(), Fraction(0))
    uniform = len(law) == expected and len(values) == 1 and total == 1
    return LevelReport(n, len(law), expected, uniform, total, (min(values), max(values)) if values else ())


def verify_uniformity_exact(kind: str, n_max: int, p: int = 2, store: PlanStore | None = None) -> UniformityReport:
    """Propagate the chain's exact law level by level and compare with the uniform law on map codes."""
    store = store or default_store()
    if kind == "angulation":
        return _verify_angulation(p, n_max, store)
    if kind == "triangulation":
        return _verify_triangulation(n_max, store)
    raise InvalidArgument(f"unknown chain kind {kind!r}")


def _verify_angulation(p: int, n_max: int, store: PlanStore) -> UniformityReport:
    rep = UniformityReport(f"angulation p={p}")
    labels = enumerate_labels(p)
    u = Fraction(1, len(labels))
    law = {LabelledMobile(degenerate_mobile(p), ()): Fraction(1)}
    for n in range(1, n_max + 1):
        nxt: dict = defaultdict(Fraction)
        for m, pm in law.items():
            t = phi(m.mobile)
            for leaf, _, q in step_law(t, store.get(p, t.n)):
                corner = corner_for_leaf(m.mobile, t, leaf)
                for lab in labels:
                    nxt[grow_mobile(m, corner, lab)] += pm * q * u
        law = nxt
        maps: Counter = Counter()
        for m, pm in law.items():
            for eps in (1, -1):
                maps[canonical_code(psi(m, eps), with_point=False)] += pm / 2
        rep.levels.append(_level(n, maps, count_angulations(p, n)))
    return rep


def _verify_triangulation(n_max: int, store: PlanStore) -> UniformityReport:
    rep = UniformityReport("triangulation")
    law = {initial_pair(): Fraction(1)}
    for n in range(1, n_max + 1):
        if n > 1:
            nxt: dict = defaultdict(Fraction)
            for pr, pm in law.items():
                q = side_probability(pr.l.n, pr.r.n)
                for side, qs in ((LEFT, q), (RIGHT, 1 - q)):
                    if qs == 0:
                        continue
                    tree = pr.side(side)
                    for leaf, _, g in step_law(tree, store.get(4, tree.n)):
                        nxt[grow_pair(pr, side, leaf)] += pm * qs * g
            law = nxt
        maps: Counter = Counter()
        for pr, pm in law.items():
            for eps in (1, -1):
                maps[pair_map(pr, eps).code] += pm / 2
        rep.levels.append(_level(n, maps, count_simple_triangulations(n)))
    return rep


def pair_law_is_uniform(total: int, store: PlanStore | None = None) -> bool:
    """The chain's law on pairs at the given total is uniform over all pairs."""
    store = store or default_store()
    law = {initial_pair(): Fraction(1)}
    for _ in range(total):
        nxt: dict = defaultdict(Fraction)
        for pr, pm in law.items():
            q = side_probability(pr.l.n, pr.r.n)
            for side, qs in ((LEFT, q), (RIGHT, 1 - q)):
                if qs:
                    tree = pr.side(side)
                    for leaf, _, g in step_law(tree, store.get(4, tree.n)):
                        nxt[grow_pair(pr, side, leaf)] += pm * qs * g
        law = nxt
    return set(law) == set(enumerate_pairs(total)) and set(law.values()) == {Fraction(1, pair_count(total))}


# ---------------------------------------------------------------- chi-square

@dataclass(frozen=True)
class ChiSquare:
    statistic: float
    dof: int
    p_value: float


def chi_square_check(samples: Iterable, support: Iterable) -> ChiSquare:
    """Pearson test of ``samples`` against the uniform law on ``support``."""
    from scipy.stats import chi2

    support = list(dict.fromkeys(support))
    index = {c: i for i, c in enumerate(support)}
    counts = [0] * len(support)
    for s in samples:
        if s not in index:
            raise MapforgeError(f"sample {s!r} lies outside the support")
        counts[index[s]] += 1
    total = sum(counts)
    if total == 0 or not support:
        raise InvalidArgument("need at least one sample and a non-empty support")
    k = len(support)
    # exact rational statistic, converted once at the end
    stat = Fraction(sum((c * k - total) ** 2 for c in counts), total * k)
    dof = k - 1
    pv = float(chi2.sf(float(stat), dof)) if dof > 0 else 1.0
    return ChiSquare(float(stat), dof, pv)


def triangulation_support(n: int) -> list:
    """Canonical codes of all simple triangulations of size n, through the pair bijection."""
    codes = {pair_map(pr, eps).code for pr in enumerate_pairs(n - 1) for eps in (1, -1)}
    return sorted(codes)


# ---------------------------------------------------------------- materialized schemes

@dataclass
class SchemeReport:
    n: int
    column_ok: bool
    row_ok: bool
    support_failures: list  # (T code, t code) with positive mass but no collapsing edge
    checked: int

    @property
    def ok(self) -> bool:
        return self.column_ok and self.row_ok and not self.support_failures


def triangulation_scheme(n: int, store: PlanStore | None = None) -> dict:
    """``f_n(T, t)`` on map codes, from pairs, ``h`` and the 4-ary plans."""
    store = store or default_store()
    f: dict = defaultdict(Fraction)
    for eps in (1, -1):
        for pr in enumerate_pairs(n - 1):
            t_code = pair_map(pr, eps).code
            q = side_probability(pr.l.n, pr.r.n)
            K = Fraction((n + 1) * count_simple_triangulations(n + 1), n * count_simple_triangulations(n))
            for side, qs in ((LEFT, q), (RIGHT, 1 - q)):
                if not qs:
                    continue
                tree = pr.side(side)
                for leaf, _, g in step_law(tree, store.get(4, tree.n)):
                    big = grow_pair(pr, side, leaf)
                    # q * g is the chain kernel; times K it is h * g_n, the summand of f_n
                    f[(pair_map(big, eps).code, t_code)] += qs * g * K / (2 * n + 2)
    return dict(f)


def check_triangulation_scheme(n: int, store: PlanStore | None = None) -> SchemeReport:
    from .planar_maps import collapse_edge_pair

    f = triangulation_scheme(n, store)
    col: dict = defaultdict(Fraction)
    row: dict = defaultdict(Fraction)
    for (T, t), v in f.items():
        col[T] += v
        row[t] += v
    big = triangulation_support(n + 1)
    small = triangulation_support(n)
    ratio = Fraction(count_simple_triangulations(n + 1), count_simple_triangulations(n))
    maps = {pair_map(pr, eps).code: pair_map(pr, eps) for pr in enumerate_pairs(n) for eps in (1, -1)}
    failures = []
    for T, t in sorted(f):
        m = maps[T]
        hit = False
        for e in range(m.num_edges):
            if e == m.root // 2:
                continue
            try:
                out, _ = collapse_edge_pair(m, e)
            except InvalidArgument:
                continue
            if out.code == t:
                hit = True
                break
        if not hit:
            failures.append((T, t))
    return SchemeReport(
        n,
        all(col[T] == 1 for T in big),
        all(row[t] == ratio for t in small),
        failures,
        len(f),
    )


def angulation_scheme(p: int, n: int, compatible: bool = True, store: PlanStore | None = None) -> dict:
    """``f_n(M, m)`` on unpointed map codes for 2p-angulations.

    With ``compatible`` the big mobile must carry the small mobile's labels
    plus one new label, which is what the chain does.  Without it every
    labelling of the small mobile is paired with every labelling of the big
    one, weighted by ``1/C^n`` with ``C`` the number of black labels.
    """
    from .mobiles import enumerate_labelled_mobiles

    store = store or default_store()
    labels = enumerate_labels(p)
    V = Fraction(1, (p - 1) * (n + 1) + 2)
    f: dict = defaultdict(Fraction)
    small = enumerate_labelled_mobiles(p, n)
    by_shape: dict = defaultdict(list)
    if not compatible:
        for M in enumerate_labelled_mobiles(p, n + 1):
            by_shape[M.mobile].append(M)
    for m in small:
        t = phi(m.mobile)
        for leaf, T_code, g in store.get(p, t.n).moves[t.code]:
            if compatible:
                corner = corner_for_leaf(m.mobile, t, leaf)
                bigs = [(grow_mobile(m, corner, lab), g * V) for lab in labels]
            else:
                shape = grow_mobile(m, corner_for_leaf(m.mobile, t, leaf), labels[0]).mobile
                w = g * V / Fraction(len(labels)) ** n
                bigs = [(M, w) for M in by_shape[shape]]
            for M, w in bigs:
                for eps in (1, -1):
                    key = (canonical_code(psi(M, eps), with_point=False), canonical_code(psi(m, eps), with_point=False))
                    f[key] += w
    return dict(f)


def face_collapses(M: RootedMap) -> set:
    """Codes of all maps obtained from ``M`` by collapsing one face from one of its vertices."""
    from .planar_maps import collapse_face, face_cycle

    M = M.forget_point()
    out = set()
    for face in M.faces():
        cycle = face_cycle(M, face[0])
        for v in {M.vertex_of[d] for d in cycle}:
            try:
                out.add(collapse_face(M, cycle, v).code)
            except InvalidArgument:
                pass
    return out


def check_angulation_scheme(p: int, n: int, compatible: bool = True, store: PlanStore | None = None) -> SchemeReport:
    from .mobiles import enumerate_labelled_mobiles

    f = angulation_scheme(p, n, compatible, store)
    col: dict = defaultdict(Fraction)
    row: dict = defaultdict(Fraction)
    for (M, m), v in f.items():
        col[M] += v
        row[m] += v
    maps = {}
    for lm in enumerate_labelled_mobiles(p, n + 1):
        for eps in (1, -1):
            mp = psi(lm, eps).forget_point()
            maps.setdefault(mp.code, mp)
    ratio = Fraction(count_angulations(p, n + 1), count_angulations(p, n))
    collapses = {}
    failures = []
    for M, m in sorted(f):
        if M not in collapses:
            collapses[M] = face_collapses(maps[M])
        if m not in collapses[M]:
            failures.append((M, m))
    return SchemeReport(
        n,
        len(col) == count_angulations(p, n + 1) and all(v == 1 for v in col.values()),
        len(row) == count_angulations(p, n) and all(v == ratio for v in row.values()),
        failures,
        len(f),
    )
