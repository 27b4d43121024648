"""Relation residuals of the truncated model as q0 and the cut K vary.

On interior vectors the truncated series act exactly, so residuals sit at
rounding level for every cut.  The last column is the vacuum truncation bound,
which is what limits the Haar and trace checks instead.
"""

import argparse
from dataclasses import dataclass, field

from qsu2.oracle import TruncationSpec, relation_check_num


@dataclass
class Config:
    qs: list = field(default_factory=lambda: [0.3, 0.5, 0.7, 0.9])
    ks: list = field(default_factory=lambda: [10, 20, 40, 60])
    n: int = 4


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--qs", type=float, nargs="+", default=Config().qs)
    p.add_argument("--ks", type=int, nargs="+", default=Config().ks)
    p.add_argument("--n", type=int, default=Config.n)
    cfg = Config(**vars(p.parse_args()))
    print(f"{'q0':>5} {'K':>4} {'max residual':>13} {'q0^(2K)':>10}")
    for q0 in cfg.qs:
        for K in cfg.ks:
            reps = relation_check_num(TruncationSpec(K, cfg.n, q0), tol=1.0)
            worst = max(r.residual for r in reps)
            print(f"{q0:5.2f} {K:4d} {worst:13.2e} {q0 ** (2 * K):10.2e}")


if __name__ == "__main__":
    main()
