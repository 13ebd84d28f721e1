#!/usr/bin/env python
"""Radar waveform design efficiency table on the built-in two-patch scenario."""

import argparse
import sys

from cpstensor.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="5", help="code lengths, e.g. 5,10")
    parser.add_argument("--instances", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--output", default=None)
    args = parser.parse_args()
    argv = []
    if args.output:
        argv += ["--output", args.output]
    argv += [
        "experiment", "radar",
        "--sizes", args.sizes,
        "--instances", str(args.instances),
        "--seed", str(args.seed),
        "--jobs", str(args.jobs),
    ]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
