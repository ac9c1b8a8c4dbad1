"""How often growing a map and collapsing it back recovers the original.

Reports the edge-pair statistics for triangulations and the support property
of the materialized growth schemes for both families.
"""

import argparse
from dataclasses import dataclass

from mapforge import coupling as cp
from mapforge.verify import pair_lemma_stats


@dataclass
class Config:
    max_total: int = 3
    scheme_n: int = 4


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-total", type=int, default=Config.max_total)
    ap.add_argument("--scheme-n", type=int, default=Config.scheme_n)
    args = ap.parse_args()
    cfg = Config(args.max_total, args.scheme_n)

    for total in range(cfg.max_total + 1):
        st = pair_lemma_stats(total)
        print(f"pairs with |l|+|r| <= {total}: {st.cases} growths, {st.any_hits} collapse back, "
              f"{st.beta_hits} through the new blossom's edge, {st.reversed_only} only with the root reversed")

    store = cp.default_store()
    for n in range(1, cfg.scheme_n + 1):
        rep = cp.check_triangulation_scheme(n, store)
        print(f"triangulation scheme n={n}: columns {rep.column_ok}, rows {rep.row_ok}, "
              f"{len(rep.support_failures)}/{rep.checked} positive entries without a collapsing edge")
    for p, n in ((2, 1), (2, 2), (3, 1)):
        for compatible in (True, False):
            rep = cp.check_angulation_scheme(p, n, compatible, store)
            kind = "label-compatible" if compatible else "unrelated labels"
            print(f"angulation scheme p={p} n={n} ({kind}): columns {rep.column_ok}, rows {rep.row_ok}, "
                  f"{len(rep.support_failures)}/{rep.checked} entries without a collapsing face")


if __name__ == "__main__":
    main()
