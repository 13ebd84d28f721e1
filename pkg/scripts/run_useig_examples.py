#!/usr/bin/env python
"""Largest US-eigenvalues of the two bundled benchmark tensors.

The first certifies directly (lambda ~ 2.3547); the second needs the
perturb-and-retry path with ||E|| = 1e-4 (lambda ~ 3.1623).
"""

import sys

from cpstensor.cli import main as cli_main


if __name__ == "__main__":
    sys.exit(cli_main(["experiment", "useig"]))
