"""Capacities, cut values and h tables of the flow networks G_n."""

import argparse
from dataclasses import dataclass

from mapforge import coupling as cp


@dataclass
class Config:
    max_n: int = 6


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    cfg = Config(max_n=ap.parse_args().max_n)

    for n in range(cfg.max_n + 1):
        net = cp.build_flow_network(n)
        res = cp.max_flow(net)
        print(f"G_{n}: max-flow {res.value}")
        print("  source " + "  ".join(f"{k}:{v}" for k, v in sorted(net.source.items())))
        print("  sink   " + "  ".join(f"{k}:{v}" for k, v in sorted(net.sink.items())))
        cuts = [net.cut_capacity(net.cut_k(i)) for i in range(-1, n)]
        print("  cuts K_-1..K_{n-1}: " + ", ".join(str(c) for c in cuts))
        print("  h      " + "  ".join(cp.compute_h(n).rows()))


if __name__ == "__main__":
    main()
