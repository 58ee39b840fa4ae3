#!/usr/bin/env python3
"""Regenerate the resource-hierarchy and paradox-comparison tables.

Everything is recomputed from scratch: the classical entry by exhaustive
enumeration, the local-measurement entry by seeded multistart optimization,
the entangled-measurement entry by exact evaluation of the ququart
construction, and the comparison rows by the respective optimizers.

    python scripts/reproduce_tables.py [--restarts N] [--seed S]

Larger restart counts tighten the optimization entries; the defaults keep
the run around a minute.
"""

import argparse
import sys

from exclusivity.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--restarts", type=int, default=60)
    parser.add_argument("--seed", type=int, default=20240)
    parser.add_argument("--out", type=str, default=None)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()

    argv = ["tables", "--restarts", str(args.restarts), "--seed", str(args.seed)]
    if args.out:
        argv += ["--out", args.out]
    if args.json:
        argv += ["--json"]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
