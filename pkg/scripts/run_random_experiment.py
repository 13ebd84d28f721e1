#!/usr/bin/env python
"""Random CPS tensor efficiency table (rank-one rate and mean CPU per cell).

Desk-scale sizes by default; pass --sizes 4,6,8,12,15 to include the large
rows, which are reported informationally (runtimes grow steeply with n and
the certification rate is known to drop at n >= 12).
"""

import argparse
import sys

from cpstensor.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="4,6,8")
    parser.add_argument("--instances", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--output", default=None)
    args = parser.parse_args()
    argv = []
    if args.output:
        argv += ["--output", args.output]
    argv += [
        "experiment", "random",
        "--sizes", args.sizes,
        "--instances", str(args.instances),
        "--seed", str(args.seed),
        "--jobs", str(args.jobs),
    ]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
