"""Rank and smallest kept singular value of the monomial families across q and D.

Usage: python scripts/independence_table.py [--dims 12 16] [--qs 1.3 2 3] [--tol 1e-12]
"""
import argparse

from qpg.suites import independence_runs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--dims", type=int, nargs="+", default=[12, 16])
    ap.add_argument("--qs", type=float, nargs="+", default=[1.3, 2.0, 3.0])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--tol", type=float, default=1e-12)
    args = ap.parse_args()
    print(f"{'n':>2} {'D':>3} {'q':>4} {'family':>6} {'rank':>6} {'count':>6} {'margin':>6} {'smallest sv':>12}")
    for n in args.n:
        for D in args.dims:
            for q in args.qs:
                for fam, (count, rank, smin, margin) in independence_runs(n, q, D, 2, args.tol).items():
                    print(f"{n:>2} {D:>3} {q:>4g} {fam:>6} {rank:>6} {count:>6} {margin:>6} {smin:>12.3e}")


if __name__ == "__main__":
    main()
