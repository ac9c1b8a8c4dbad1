"""Exact law of both growth chains, level by level, against the uniform law."""

import argparse
import json
from dataclasses import dataclass

from mapforge import coupling as cp


@dataclass
class Config:
    triangulation_n: int = 5
    angulation: tuple = ((2, 4), (3, 2), (4, 2))
    as_json: bool = False


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--triangulation-n", type=int, default=Config.triangulation_n)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    cfg = Config(triangulation_n=args.triangulation_n, as_json=args.json)

    store = cp.default_store()
    reports = [cp.verify_uniformity_exact("triangulation", cfg.triangulation_n, store=store)]
    reports += [cp.verify_uniformity_exact("angulation", n, p=p, store=store) for p, n in cfg.angulation]
    if cfg.as_json:
        print(json.dumps([r.to_json() for r in reports], indent=2))
        return
    for rep in reports:
        print(rep.kind)
        for lv in rep.levels:
            lo, hi = lv.extremes
            print(f"  n={lv.n:<2} maps={lv.support:<5} expected={lv.expected:<5} "
                  f"min={lo} max={hi} {'uniform' if lv.uniform else 'NOT uniform'}")


if __name__ == "__main__":
    main()
