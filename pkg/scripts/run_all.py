#!/usr/bin/env python3
"""Run every experiment suite in sequence and summarize exit status.

Each suite writes its CSVs and manifest into the output directory; the
summary line per suite mirrors the CLI exit code (0 window passed,
1 failed). Usage:

    python3 scripts/run_all.py --out runs/full [--config cfg.json] [--jobs 2]
"""

import argparse
import sys
import time

from pfio.cli import main as pfio_main

SUITES = ("verify", "kernel-decay", "l2", "atoms", "sharpness", "roi", "pdo")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=None)
    ap.add_argument("--out", default="runs/full")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--suites", nargs="*", default=list(SUITES))
    args = ap.parse_args()

    worst = 0
    for suite in args.suites:
        argv = [suite, "--out", args.out, "--jobs", str(args.jobs)]
        if args.config:
            argv += ["--config", args.config]
        started = time.monotonic()
        rc = pfio_main(argv)
        worst = max(worst, rc)
        status = {0: "pass", 1: "FAIL", 2: "usage error"}[rc]
        print(f"{suite:<14} {status:<12} {time.monotonic() - started:7.1f}s")
    return worst


if __name__ == "__main__":
    sys.exit(main())
