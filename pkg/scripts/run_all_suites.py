"""Run every verification suite at its default configuration and summarize.

Usage: python scripts/run_all_suites.py [--n N] [--out DIR]
Writes one JSON report per suite to DIR (default: reports/).
"""
import argparse
import sys
from pathlib import Path

from qpg.suites import SUITES, SuiteConfig, run_suite


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--out", default="reports")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    failed = []
    for name in SUITES:
        rep = run_suite(SuiteConfig(suite=name, n=args.n, report=str(out / f"{name}.json")))
        total = sum(c.elapsed for c in rep.checks)
        print(f"{name:<13} {rep.status:4}  {len(rep.checks):3d} checks  {total:6.2f}s")
        if not rep.passed:
            failed.append(name)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
