"""Command-line entry point: ``qpg <suite> [options]``.

Exit codes: 0 all checks passed, 1 some check failed, 2 bad configuration,
3 a groupoid truncation cap or translation bound was exceeded.
"""
from __future__ import annotations

import argparse
import sys

from .bundle import BundleError
from .groupoid import BoundOverflowError, EnumerationCapError
from .suites import SUITES, ConfigError, SuiteConfig, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_CAP = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qpg", description="Desk-scale checks for quantum projective spaces.")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--dim", type=int, default=None, help="Fock cutoff D per factor (suite default if omitted)")
    p.add_argument("--levels", type=int, default=3, help="groupoid level cutoff K")
    p.add_argument("--xbound", type=int, default=2, help="groupoid translation bound B")
    p.add_argument("--margin", type=int, default=None, help="interior margin (check default if omitted)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--report", default=None, help="write the report to this path")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--bundle", default=None, help="directory for generator bundles")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = SuiteConfig(suite=args.suite, n=args.n, q=args.q, c=args.c, D=args.dim, K=args.levels,
                             B=args.xbound, margin=args.margin, tol=args.tol, report=args.report,
                             format=args.format, bundle=args.bundle)
        report = run_suite(config)
    except ConfigError as exc:
        print(f"qpg: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BoundOverflowError as exc:
        print(f"qpg: {exc}; rerun with a larger --xbound", file=sys.stderr)
        return EXIT_CAP
    except EnumerationCapError as exc:
        print(f"qpg: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (BundleError, OSError) as exc:
        print(f"qpg: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(report.to_json() if args.format == "json" else report.to_text(), end="")
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
