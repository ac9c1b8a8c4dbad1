"""Command line front end.

Exit codes: 0 success, 1 failed verification, 2 usage error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import coupling as cp
from .blossoming import count_blossoming_trees, enumerate_blossoming_trees
from .errors import DEFAULT_GUARD, InvalidArgument, ResourceLimit
from .mobiles import enumerate_labelled_mobiles, enumerate_labels, enumerate_mobiles
from .planar_maps import RootedMap
from .plane_trees import count_complete_trees, enumerate_complete_trees

CLASSES = ("dary", "mobile", "blossoming", "triangulation", "angulation")
FORMATS = ("json", "dot", "code")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


@dataclass
class CommandConfig:
    subcommand: str
    cls: str | None = None
    d: int | None = None
    p: int | None = None
    n: int | None = None
    seed: int = 0
    count: int = 1
    workers: int = 1
    fmt: str = "json"
    labelled: bool = False
    trace: bool = False
    suite: str | None = None
    max_n: int = 3
    what: str | None = None
    out: Path | None = None
    guard: int = DEFAULT_GUARD
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.cls == "dary" and self.d is None:
            raise InvalidArgument("--class dary requires --d")
        if self.cls in ("mobile", "angulation") and self.p is None:
            raise InvalidArgument(f"--class {self.cls} requires --p")
        if self.subcommand in ("count", "enumerate", "sample", "grow-chain") and self.n is None:
            raise InvalidArgument("--n is required")
        if self.n is not None and self.n < 0:
            raise InvalidArgument("--n must be non-negative")
        if self.d is not None and self.d < 2 or self.p is not None and self.p < 2:
            raise InvalidArgument("--d and --p must be >= 2")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidArgument("--seed must be a 64-bit unsigned integer")
        if self.count < 1 or self.workers < 1:
            raise InvalidArgument("--count and --workers must be positive")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mapforge", description="Uniform random planar maps grown face by face.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(sp, classes=CLASSES):
        sp.add_argument("--class", dest="cls", choices=classes, required=True)
        sp.add_argument("--d", type=int)
        sp.add_argument("--p", type=int)
        sp.add_argument("--n", type=int)

    sp = sub.add_parser("count", help="exact size of a class")
    common(sp)
    sp.add_argument("--labelled", action="store_true", help="count labelled mobiles")

    sp = sub.add_parser("enumerate", help="list every object of a class, one JSON per line")
    common(sp)
    sp.add_argument("--labelled", action="store_true")
    sp.add_argument("--guard", type=int, default=DEFAULT_GUARD)

    for name, hlp in (("sample", "uniform random maps"), ("grow-chain", "run one growth chain")):
        sp = sub.add_parser(name, help=hlp)
        common(sp, ("triangulation", "angulation"))
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
        if name == "sample":
            sp.add_argument("--count", type=int, default=1)
            sp.add_argument("--workers", type=int, default=1)
        else:
            sp.add_argument("--trace", action="store_true", help="one JSON event per growth step")

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", choices=("counts", "bijections", "growth-lemmas", "flow", "uniformity"), required=True)
    sp.add_argument("--max-n", dest="max_n", type=int, default=3)

    sp = sub.add_parser("h-table", help="rows (a,b) h(a,b) for a+b = n+1")
    sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("export", help="write a transport plan or h table as JSON")
    sp.add_argument("--what", choices=("plan", "h"), required=True)
    sp.add_argument("--d", type=int, default=4)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", type=Path)
    return ap


def _config(ns: argparse.Namespace) -> CommandConfig:
    known = {k: v for k, v in vars(ns).items() if k in CommandConfig.__dataclass_fields__ and v is not None}
    return CommandConfig(**known)


# ---------------------------------------------------------------- commands

def cmd_count(cfg: CommandConfig) -> int:
    n = cfg.n
    if cfg.cls == "dary":
        value = count_complete_trees(cfg.d, n)
    elif cfg.cls == "mobile":
        value = count_complete_trees(cfg.p, n) * (len(enumerate_labels(cfg.p)) ** n if cfg.labelled else 1)
    elif cfg.cls == "blossoming":
        value = count_blossoming_trees(n) if n else 0
    elif cfg.cls == "triangulation":
        value = cp.count_simple_triangulations(n)
    else:
        value = cp.count_angulations(cfg.p, n)
    print(value)
    return EXIT_OK


def cmd_enumerate(cfg: CommandConfig) -> int:
    n, g = cfg.n, cfg.guard
    if cfg.cls == "dary":
        items = (t.to_json() for t in enumerate_complete_trees(cfg.d, n, g))
    elif cfg.cls == "mobile":
        items = (m.to_json() for m in (enumerate_labelled_mobiles(cfg.p, n, g) if cfg.labelled else enumerate_mobiles(cfg.p, n, g)))
    elif cfg.cls == "blossoming":
        items = (t.to_json() for t in enumerate_blossoming_trees(n, g))
    elif cfg.cls == "triangulation":
        items = ({"code": ".".join(map(str, c))} for c in cp.triangulation_support(n))
    else:
        codes = sorted({cp.psi(m, e).forget_point().code for m in enumerate_labelled_mobiles(cfg.p, n, g) for e in (1, -1)})
        items = ({"code": ".".join(map(str, c))} for c in codes)
    for item in items:
        print(json.dumps(item))
    return EXIT_OK


def render(m: RootedMap, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(m.to_json())
    if fmt == "dot":
        return m.to_dot()
    return m.code_str


def _sample_one(args: tuple) -> str:
    cls, p, n, seed, index, fmt = args
    key = f"{seed}/{index}"
    if cls == "triangulation":
        m = cp.chain_sample_triangulation(n, key)
    else:
        m = cp.chain_sample_angulation(p, n, key)
    return render(m, fmt)


def _check_sampling_target(cfg: CommandConfig) -> None:
    if cfg.n < 1:
        raise InvalidArgument("--n must be >= 1 for sampling")
    biggest = count_complete_trees(4 if cfg.cls == "triangulation" else cfg.p, cfg.n)
    if biggest > cfg.guard:
        raise ResourceLimit(f"transport plans up to size {cfg.n} exceed the guard; lower --n")


def cmd_sample(cfg: CommandConfig) -> int:
    _check_sampling_target(cfg)
    jobs = [(cfg.cls, cfg.p, cfg.n, cfg.seed, i, cfg.fmt) for i in range(cfg.count)]
    if cfg.workers > 1 and cfg.count > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            outputs = ex.map(_sample_one, jobs, chunksize=max(1, cfg.count // (4 * cfg.workers)))
            for out in outputs:
                print(out)
    else:
        for job in jobs:
            print(_sample_one(job))
    return EXIT_OK


def cmd_grow_chain(cfg: CommandConfig) -> int:
    _check_sampling_target(cfg)

    def emit(event: dict) -> None:
        print(json.dumps({"event": "step", **event}))

    trace = emit if cfg.trace else None
    if cfg.cls == "triangulation":
        m = cp.chain_sample_triangulation(cfg.n, cfg.seed, trace=trace)
    else:
        m = cp.chain_sample_angulation(cfg.p, cfg.n, cfg.seed, trace=trace)
    print(render(m, cfg.fmt))
    return EXIT_OK


def cmd_verify(cfg: CommandConfig) -> int:
    from .verify import run_suite

    rep = run_suite(cfg.suite, cfg.max_n)
    for c in rep.checks:
        print(f"{'PASS' if c.ok else 'FAIL'} {c.name}: {c.detail}", file=sys.stderr)
    print(json.dumps(rep.to_json()))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_h_table(cfg: CommandConfig) -> int:
    if cfg.n < 1:
        raise InvalidArgument("--n must be >= 1")
    for row in cp.compute_h(cfg.n).rows():
        print(row)
    return EXIT_OK


def cmd_export(cfg: CommandConfig) -> int:
    if cfg.what == "plan":
        plan = cp.tree_transport_plan(cfg.d, cfg.n, cfg.guard)
        if cfg.out:
            cp.save_plan(plan, cfg.out)
            return EXIT_OK
        obj = {"format": 1, "d": plan.d, "n": plan.n,
               "entries": [[t, leaf, T, f"{m.numerator}/{m.denominator}"] for t, leaf, T, m in plan.entries()]}
    else:
        table = cp.compute_h(cfg.n)
        obj = {"format": 1, "n": table.n,
               "h": {f"{a},{b}": f"{v.numerator}/{v.denominator}" for (a, b), v in sorted(table.values.items())}}
    text = json.dumps(obj)
    if cfg.out:
        cfg.out.write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


COMMANDS = {
    "count": cmd_count,
    "enumerate": cmd_enumerate,
    "sample": cmd_sample,
    "grow-chain": cmd_grow_chain,
    "verify": cmd_verify,
    "h-table": cmd_h_table,
    "export": cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    try:
        ns = _parser().parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = _config(ns)
    try:
        cfg.validate()
        return COMMANDS[cfg.subcommand](cfg)
    except InvalidArgument as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"error: {exc}; try a smaller size or raise --guard", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
