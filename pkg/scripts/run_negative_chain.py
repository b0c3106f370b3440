#!/usr/bin/env python3
"""Reproduce the unboundedness chain for the monomial outer weight.

Runs the negative-chain experiment at the reference parameters (Gevrey order
d=2 inside, degree k=1 composition, target order d'=3.5) and writes the row
table to CSV plus a JSON summary next to it.  Pass extra CLI flags after the
script name to override any parameter, e.g. ``--jmax 100`` or ``--dprime 3``.
"""
import sys

from gsbench.cli import main

DEFAULTS = [
    "experiment", "negative",
    "--d", "2", "--k", "1", "--dprime", "3.5",
    "--jmax", "400",
    "--out", "negative_chain.csv", "--format", "both",
]

if __name__ == "__main__":
    argv = DEFAULTS + sys.argv[1:]
    sys.exit(main(argv))
