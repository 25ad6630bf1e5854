#!/usr/bin/env python3
"""Run the full verification suite and print the per-check report.

Exit status 0 when all checks pass, 4 otherwise (same as `geomwave verify`).
"""

import argparse
import sys

from geomwave.experiments import parse_config, verify_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="key = value structured-text config file")
    args = ap.parse_args()
    config = None
    if args.config:
        with open(args.config) as fh:
            config = parse_config(fh.read())
    report = verify_suite(config)
    for line in report.lines():
        print(line)
    print("all checks passed" if report.passed else "some checks FAILED")
    return 0 if report.passed else 4


if __name__ == "__main__":
    sys.exit(main())
