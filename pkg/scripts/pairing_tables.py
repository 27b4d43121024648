"""Tabulate semifinite and modular spectral flow for both generator families.

    python3 scripts/pairing_tables.py --kmax 12 --q 0.5
"""

import argparse
from dataclasses import dataclass

from qsu2.qfield import eval_at
from qsu2.spectral_flow import make_modular_unitary, modular_terms, partial_iso, semifinite_terms


@dataclass
class Config:
    kmax: int = 12
    q: float = 0.5


def rows(cfg: Config):
    for fam in ("T", "Ttilde"):
        for k in range(1, cfg.kmax + 1):
            v = partial_iso(fam, k)
            for mode, terms in (("semifinite", semifinite_terms(v)),
                                ("modular", modular_terms(make_modular_unitary(v)))):
                yield fam, k, mode, terms


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--kmax", type=int, default=Config.kmax)
    p.add_argument("--q", type=float, default=Config.q)
    cfg = Config(**vars(p.parse_args()))
    print(f"{'gen':7} {'k':>2}  {'mode':10} {'total':>12}  exact")
    for fam, k, mode, t in rows(cfg):
        print(f"{fam:7} {k:2d}  {mode:10} {eval_at(t.total, cfg.q):12.8f}  {t.total.pretty()}")


if __name__ == "__main__":
    main()
