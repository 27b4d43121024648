"""Zeta residues at r = 1/2 of the graded traces of A(k,k) and B(k,0,k).

Prints the exact residue next to the numeric estimate from the truncated model.
"""

import argparse
from dataclasses import dataclass

from qsu2.algebra import A, B, Element
from qsu2.graded import TraceKind, build_seq, residue_half
from qsu2.oracle import TruncationSpec, residue_num
from qsu2.qfield import eval_at


@dataclass
class Config:
    kmax: int = 6
    q: float = 0.5
    trunc_k: int = 40
    trunc_n: int = 2


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--kmax", type=int, default=Config.kmax)
    p.add_argument("--q", type=float, default=Config.q)
    p.add_argument("--trunc-k", type=int, default=Config.trunc_k)
    p.add_argument("--trunc-n", type=int, default=Config.trunc_n)
    cfg = Config(**vars(p.parse_args()))
    t = TruncationSpec(cfg.trunc_k, cfg.trunc_n, cfg.q)
    print(f"{'element':10} {'kind':6} {'exact':>12} {'numeric':>12} {'est. err':>9}  residue")
    for k in range(cfg.kmax + 1):
        for mono in (A(k, k), B(k, 0, k)):
            x = Element.of(mono)
            for kind in TraceKind:
                r = residue_half(build_seq(x, kind))
                est = residue_num(x, kind, t)
                print(f"{str(mono):10} {kind.value:6} {eval_at(r, cfg.q):12.8f} {est.value:12.8f}"
                      f" {est.error:9.1e}  {r.pretty()}")


if __name__ == "__main__":
    main()
