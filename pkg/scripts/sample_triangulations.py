"""Draw seeded triangulations from the growth chain and test them against the uniform law."""

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass

from mapforge import coupling as cp


@dataclass
class Config:
    n: int = 4
    samples: int = 100_000
    seed: int = 20240607


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--seed", type=int, default=Config.seed)
    cfg = Config(**vars(ap.parse_args()))

    support = cp.triangulation_support(cfg.n)
    rng = random.Random(cfg.seed)
    store = cp.default_store()
    start = time.perf_counter()
    samples = [cp.chain_sample_triangulation(cfg.n, rng, store).code for _ in range(cfg.samples)]
    elapsed = time.perf_counter() - start
    res = cp.chi_square_check(samples, support)
    counts = Counter(samples)
    print(f"n={cfg.n} support={len(support)} samples={cfg.samples} ({elapsed:.1f}s)")
    print(f"chi2={res.statistic:.3f} dof={res.dof} p-value={res.p_value:.4f}")
    expected = cfg.samples / len(support)
    for i, code in enumerate(support):
        print(f"  map {i:>3}: {counts[code]:>7}  ({counts[code] / expected:.3f} of expected)")


if __name__ == "__main__":
    main()
