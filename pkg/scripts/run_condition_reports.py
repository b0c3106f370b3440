#!/usr/bin/env python3
"""Print the weight-function and weight-sequence condition reports.

Defaults to the Gevrey family of order 2; pass ``--d`` to change the order.
"""
import argparse
import sys

from gsbench.cli import main as gsbench_main

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=float, default=2.0)
    d = ap.parse_args().d
    code_w = gsbench_main(["weight-check", "--weight", f"gevrey:d={d:g}"])
    code_s = gsbench_main(["sequence-check", "--sequence",
                           f"gevreyseq:d={d:g}"])
    sys.exit(max(code_w, code_s))
