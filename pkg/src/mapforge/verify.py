"""Exhaustive checks at small sizes, grouped into suites.

Each check returns a ``Check``; a suite is a list of them.  The command line
``verify`` subcommand and the acceptance tests both run these.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import coupling as cp
from .bdfg import check_psi, grown_face_collapse, propagate_white_labels, psi
from .blossoming import (
    LEFT,
    RIGHT,
    BlossomingTree,
    beta_edge,
    check_xi,
    close_all,
    count_blossoming_trees,
    enumerate_blossoming_trees,
    enumerate_pairs,
    grow_pair,
    join_pair,
    split_blossoming,
    xi,
)
from .errors import InvalidArgument
from .mobiles import (
    LabelledMobile,
    Mobile,
    corner_for_leaf,
    enumerate_labelled_mobiles,
    enumerate_labels,
    enumerate_mobiles,
    grow_unlabelled,
    parse_label,
    phi,
    phi_inverse,
)
from .planar_maps import canonical_code, collapse_edge_pair
from .plane_trees import count_complete_trees, enumerate_complete_trees, grow_tree

SUITES = ("counts", "bijections", "growth-lemmas", "flow", "uniformity")


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    counterexample: object = None

    def to_json(self) -> dict:
        out = {"name": self.name, "ok": self.ok, "detail": self.detail}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class SuiteReport:
    suite: str
    max_n: int
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {"suite": self.suite, "max_n": self.max_n, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}


# labelled 3-mobile with four black vertices used as a worked example
SAMPLE_MOBILE_P3 = LabelledMobile(
    Mobile(3, (((), (((), ()), ((), (((), ()),)))),)),
    tuple(parse_label(s) for s in ("--+++", "+++--", "+++--", "++-+-")),
)
SAMPLE_WHITE_LABELS = (0, -1, -2, 0, -1, 0, -1, 0, 0)


# ---------------------------------------------------------------- counts

def tree_counts(max_n: int) -> Check:
    for d, n in product((2, 3, 4), range(min(max_n, 6) + 1)):
        got = len(enumerate_complete_trees(d, n))
        if got != count_complete_trees(d, n):
            return Check("tree enumeration", False, f"d={d} n={n}", {"d": d, "n": n, "enumerated": got})
    return Check("tree enumeration", True, "d in 2..4, n <= %d" % min(max_n, 6))


def mobile_counts(max_n: int) -> Check:
    for p, n in product((2, 3, 4), range(min(max_n, 5) + 1)):
        got = len(enumerate_mobiles(p, n))
        if got != count_complete_trees(p, n):
            return Check("mobile enumeration", False, f"p={p} n={n}", {"p": p, "n": n, "enumerated": got})
    return Check("mobile enumeration", True, "p in 2..4, n <= %d" % min(max_n, 5))


def convolution_identity(max_n: int) -> Check:
    for N in range(max(10, max_n) + 1):
        lhs = sum(count_complete_trees(4, k) * count_complete_trees(4, N - k) for k in range(N + 1))
        if lhs != (N + 1) * cp.count_simple_triangulations(N + 1):
            return Check("convolution identity", False, f"N={N}", {"N": N})
    return Check("convolution identity", True, "N <= %d" % max(10, max_n))


def blossoming_counts(max_n: int) -> Check:
    for n in range(1, max_n + 1):
        if count_blossoming_trees(n) != n * cp.count_simple_triangulations(n):
            return Check("blossoming count", False, f"n={n}", {"n": n})
    return Check("blossoming count", True, "n <= %d" % max_n)


def triangulation_counts(max_n: int) -> Check:
    top = min(max_n, 5)
    for n in range(1, top + 1):
        codes = {xi(t, eps).code for t in enumerate_blossoming_trees(n) for eps in (1, -1)}
        if len(codes) != cp.count_simple_triangulations(n):
            return Check("triangulation count", False, f"n={n}", {"n": n, "distinct": len(codes)})
    return Check("triangulation count", True, "distinct images, n <= %d" % top)


def run_counts(max_n: int) -> list[Check]:
    return [tree_counts(max_n), mobile_counts(max_n), convolution_identity(max_n),
            blossoming_counts(max_n), triangulation_counts(max_n)]


# ---------------------------------------------------------------- bijections

def phi_round_trip(max_n: int) -> Check:
    top = min(max_n, 5)
    for p, n in product((2, 3, 4), range(top + 1)):
        for m in enumerate_mobiles(p, n):
            if phi_inverse(phi(m)) != m:
                return Check("phi round trip", False, f"p={p}", {"mobile": m.word})
        for t in enumerate_complete_trees(p, n):
            if phi(phi_inverse(t)) != t:
                return Check("phi round trip", False, f"p={p}", {"tree": t.code})
    return Check("phi round trip", True, "p in 2..4, n <= %d" % top)


def phi_growth(max_n: int) -> Check:
    """Growing the tree at any leaf is growing the mobile at the matching corner."""
    top = min(max_n, 4)
    cases = 0
    for p, n in product((2, 3, 4), range(top)):
        for m in enumerate_mobiles(p, n):
            t = phi(m)
            for leaf in t.leaves():
                cases += 1
                if phi(grow_unlabelled(m, corner_for_leaf(m, t, leaf))) != grow_tree(t, leaf):
                    return Check("phi growth", False, "", {"mobile": m.word, "leaf": leaf})
    return Check("phi growth", True, f"{cases} leaf growths")


def psi_bijection(max_n: int) -> Check:
    checked = 0
    for p, top in ((2, min(max_n, 4)), (3, min(max_n, 2))):
        for n in range(1, top + 1):
            seen = {}
            for m in enumerate_labelled_mobiles(p, n):
                for eps in (1, -1):
                    checked += 1
                    if not check_psi(m, eps):
                        return Check("psi bijection", False, "invalid output", {"mobile": m.to_json(), "epsilon": eps})
                    code = psi(m, eps).code
                    if code in seen:
                        return Check("psi bijection", False, "collision", {"mobile": m.to_json(), "epsilon": eps})
                    seen[code] = m
            expected = 2 * len(enumerate_labels(p)) ** n * count_complete_trees(p, n)
            if len(seen) != expected:
                return Check("psi bijection", False, f"p={p} n={n}: {len(seen)} != {expected}")
    return Check("psi bijection", True, f"{checked} outputs valid and distinct")


def sample_labels() -> Check:
    got = tuple(propagate_white_labels(SAMPLE_MOBILE_P3))
    return Check("white label propagation", got == SAMPLE_WHITE_LABELS, str(got))


def xi_multiplicity(max_n: int, orders: int = 20, seed: int = 0) -> Check:
    top = min(max_n, 4)
    rng = random.Random(seed)
    for n in range(1, top + 1):
        mult: Counter = Counter()
        for t in enumerate_blossoming_trees(n):
            base = close_all(t)
            ref = (sorted(base.closures), base.left, base.right)
            for _ in range(orders):
                pc = close_all(t, rng)
                if (sorted(pc.closures), pc.left, pc.right) != ref:
                    return Check("xi multiplicity", False, "closure order matters", {"tree": t.word})
            for eps in (1, -1):
                if not check_xi(t, eps):
                    return Check("xi multiplicity", False, "invalid output", {"tree": t.word, "epsilon": eps})
                mult[xi(t, eps).code] += 1
        if len(mult) != cp.count_simple_triangulations(n) or set(mult.values()) != {2 * n}:
            return Check("xi multiplicity", False, f"n={n}", {"n": n, "multiplicities": sorted(set(mult.values()))})
    return Check("xi multiplicity", True, f"n <= {top}, {orders} closure orders per tree")


def split_join(max_n: int) -> Check:
    top = min(max_n, 5)
    for n in range(1, top + 1):
        for t in enumerate_blossoming_trees(n):
            if join_pair(split_blossoming(t)) != t:
                return Check("split/join", False, "", {"tree": t.word})
    return Check("split/join", True, f"n <= {top}")


def run_bijections(max_n: int) -> list[Check]:
    return [phi_round_trip(max_n), phi_growth(max_n), psi_bijection(max_n), sample_labels(),
            xi_multiplicity(max_n), split_join(max_n)]


# ---------------------------------------------------------------- growth lemmas

def face_lemma(max_n: int) -> Check:
    cases = 0
    for p, top in ((2, min(max_n, 3)), (3, min(max_n, 2))):
        labels = enumerate_labels(p)
        for n in range(1, top + 1):
            for m in enumerate_labelled_mobiles(p, n):
                for corner in range(len(m.mobile.index().corners)):
                    for lab, eps in product(labels, (1, -1)):
                        cases += 1
                        got, want = grown_face_collapse(m, corner, lab, eps)
                        if got.code != want.code:
                            return Check("face collapse lemma", False, "",
                                         {"mobile": m.to_json(), "corner": corner, "label": list(lab), "epsilon": eps})
    return Check("face collapse lemma", True, f"{cases} cases")


@dataclass
class PairLemmaStats:
    cases: int = 0
    beta_hits: int = 0
    any_hits: int = 0
    reversed_only: int = 0
    first_failure: dict | None = None


def pair_lemma_stats(max_total: int) -> PairLemmaStats:
    """Collapse-of-grow for 4-ary pairs: does some edge of the grown map collapse back?"""
    st = PairLemmaStats()
    for total in range(max_total + 1):
        for pr in enumerate_pairs(total):
            small_t = join_pair(pr)
            for side in (LEFT, RIGHT):
                tree = pr.side(side)
                for leaf in tree.leaves():
                    big_t = join_pair(grow_pair(pr, side, leaf))
                    for eps in (1, -1):
                        st.cases += 1
                        big = xi(big_t, eps)
                        want = xi(small_t, eps).code
                        other = xi(small_t, -eps).code
                        outs = {}
                        for e in range(big.num_edges):
                            if e == big.root // 2:
                                continue
                            try:
                                outs[e] = collapse_edge_pair(big, e)[0].code
                            except InvalidArgument:
                                pass
                        if any(outs.get(e) == want for e in beta_edge(small_t, big_t, eps)):
                            st.beta_hits += 1
                        if want in outs.values():
                            st.any_hits += 1
                        else:
                            if other in outs.values():
                                st.reversed_only += 1
                            if st.first_failure is None:
                                st.first_failure = {"pair": pr.to_json(), "side": side, "leaf": leaf, "epsilon": eps}
    return st


def pair_lemma(max_n: int) -> Check:
    top = min(max_n, 4)
    st = pair_lemma_stats(top)
    detail = (f"{st.any_hits}/{st.cases} cases have a collapsing edge; "
              f"{st.reversed_only} others match with the root reversed")
    return Check("pair collapse lemma", st.any_hits == st.cases, detail, st.first_failure)


def run_growth_lemmas(max_n: int) -> list[Check]:
    return [face_lemma(max_n), pair_lemma(max_n)]


# ---------------------------------------------------------------- flow

def sample_capacities() -> Check:
    net = cp.build_flow_network(5)
    got = (net.source[(5, 0)], net.source[(4, 1)], net.source[(3, 2)])
    want = (Fraction(17, 42), Fraction(10, 171), Fraction(44, 1197))
    return Check("G_5 source capacities", got == want, " ".join(map(str, got)))


def unit_flows(max_n: int) -> Check:
    for n in range(1, max_n + 1):
        net = cp.build_flow_network(n)
        if sum(net.source.values()) != 1 or sum(net.sink.values()) != 1:
            return Check("unit flows", False, f"capacity totals differ from 1 at n={n}", {"n": n})
        res = cp.max_flow(net)
        problems = cp.check_flow(net, res)
        if res.value != 1 or problems:
            return Check("unit flows", False, f"n={n}: value {res.value}", {"n": n, "problems": problems[:5]})
    return Check("unit flows", True, f"n <= {max_n}")


def cut_ordering(max_n: int) -> Check:
    for n in range(1, max_n + 1):
        net = cp.build_flow_network(n)
        caps = [net.cut_capacity(net.cut_k(i)) for i in range(-1, n)]
        if any(c is None for c in caps) or any(b <= a for a, b in zip(caps, caps[1:])):
            return Check("cut ordering", False, f"n={n}", {"n": n, "caps": [str(c) for c in caps]})
        if caps[0] != 1 or net.cut_capacity(net.left_layer()) != 1:
            return Check("cut ordering", False, f"n={n}: minimal cuts do not have capacity 1", {"n": n})
    return Check("cut ordering", True, f"n <= {max_n}")


def brute_force_min_cut(max_n: int) -> Check:
    """Every cut of G_n for small n: the minimum is 1, attained only by the two layers."""
    top = min(max_n, 5)
    for n in range(1, top + 1):
        net = cp.build_flow_network(n)
        verts = sorted(net.source) + sorted(net.sink)
        best, argbest = None, []
        for mask in range(1 << len(verts)):
            K = [v for i, v in enumerate(verts) if mask >> i & 1]
            c = net.cut_capacity(K)
            if c is None:
                continue
            if best is None or c < best:
                best, argbest = c, [frozenset(K)]
            elif c == best:
                argbest.append(frozenset(K))
        if best != 1 or set(argbest) != {net.cut_k(-1), net.left_layer()}:
            return Check("min cut", False, f"n={n}", {"n": n, "min": str(best)})
    return Check("min cut", True, f"exhaustive for n <= {top}")


def h_tables(max_n: int) -> Check:
    for n in range(0, max_n + 1):
        problems = cp.check_h_table(cp.compute_h(n))
        if problems:
            return Check("h identities", False, f"n={n}", {"n": n, "problems": problems[:5]})
    ok = cp.h(1, 1) == Fraction(1, 2) and (max_n < 3 or cp.h(3, 1) == Fraction(118, 143))
    return Check("h identities", ok, f"n <= {max_n}; h(1,1)={cp.h(1, 1)}")


def run_flow(max_n: int) -> list[Check]:
    return [sample_capacities(), unit_flows(max_n), cut_ordering(max_n), brute_force_min_cut(max_n), h_tables(max_n)]


# ---------------------------------------------------------------- uniformity

def plan_checks(max_n: int, store: cp.PlanStore) -> Check:
    for d, top in ((2, min(max_n, 6)), (3, min(max_n, 4)), (4, min(max_n, 4))):
        for n in range(top):
            problems = cp.check_plan(store.get(d, n))
            if problems:
                return Check("transport plans", False, f"d={d} n={n}", {"d": d, "n": n, "problems": problems[:5]})
    return Check("transport plans", True, "support, row and column sums exact")


def chain_uniformity(kind: str, top: int, store: cp.PlanStore, p: int = 2) -> Check:
    rep = cp.verify_uniformity_exact(kind, top, p=p, store=store)
    bad = rep.first_failure()
    name = f"{rep.kind} chain uniform"
    if bad:
        return Check(name, False, f"level {bad.n}", rep.to_json())
    return Check(name, True, ", ".join(f"n={lv.n}:{lv.support}" for lv in rep.levels))


def run_uniformity(max_n: int, store: cp.PlanStore | None = None) -> list[Check]:
    store = store or cp.PlanStore()
    return [
        plan_checks(max_n, store),
        chain_uniformity("triangulation", min(max_n, 5), store),
        chain_uniformity("angulation", min(max_n, 4), store, p=2),
        chain_uniformity("angulation", min(max_n, 2), store, p=3),
    ]


RUNNERS = {
    "counts": run_counts,
    "bijections": run_bijections,
    "growth-lemmas": run_growth_lemmas,
    "flow": run_flow,
    "uniformity": run_uniformity,
}


def run_suite(suite: str, max_n: int) -> SuiteReport:
    if suite not in RUNNERS:
        raise InvalidArgument(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if max_n < 1:
        raise InvalidArgument("max-n must be >= 1")
    return SuiteReport(suite, max_n, RUNNERS[suite](max_n))
