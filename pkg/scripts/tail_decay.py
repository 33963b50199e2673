"""Diagonal decay of the n = 1 projective generators against q^{-2j}.

Usage: python scripts/tail_decay.py [--dim 16] [--qs 1.3 2 3]
"""
import argparse
import math

import numpy as np

from qpg.reps import projective_generators
from qpg.suites import decay_fit


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dim", type=int, default=16)
    ap.add_argument("--qs", type=float, nargs="+", default=[1.3, 2.0, 3.0])
    args = ap.parse_args()
    for q in args.qs:
        fit = decay_fit(q, args.dim)
        Z = projective_generators(1, q, args.dim)
        off = np.abs(Z[0][1].matrix(()).toarray().diagonal(-1))[: args.dim - 3]
        off_rate = np.polyfit(np.arange(off.size), np.log(off), 1)[0]
        print(f"q={q:g}: target {-2 * math.log(q):+.4f}  z11 {fit['z11']['rate']:+.4f}  "
              f"1-z22 {fit['1-z22']['rate']:+.4f}  z12 subdiagonal {off_rate:+.4f} "
              f"(log q^-1 = {-math.log(q):+.4f})")


if __name__ == "__main__":
    main()
