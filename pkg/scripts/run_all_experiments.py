#!/usr/bin/env python3
"""Run every inequality-chain experiment once with reference parameters.

Each experiment writes its artifacts into ``--outdir`` (default ``./runs``)
and the script prints a one-line verdict per experiment, exiting nonzero if
any of them fails its chain.  Artifacts are byte-identical across runs.
"""
import argparse
import pathlib
import sys

from gsbench.cli import main as gsbench_main

RUNS = [
    ("negative", ["experiment", "negative", "--d", "2", "--k", "1",
                  "--dprime", "3.5", "--jmax", "400"]),
    ("bounded", ["experiment", "bounded", "--d", "2",
                 "--psi", "poly:0,0,0,1", "--mmax", "12"]),
    ("compactness", ["experiment", "compactness", "--psi", "poly:0,2,0,1",
                     "--x0", "0", "--p", "1", "--weight", "gevrey:d=2",
                     "--nmax", "25"]),
    ("sufficient", ["experiment", "sufficient", "--psi", "poly:0,0,1",
                    "--weight", "gevrey:d=2", "--a", "1.5",
                    "--m", "1,2,4", "--jmax", "15"]),
    ("necessary", ["experiment", "necessary", "--psi", "poly:0,0,1",
                   "--sigma", "gevrey:d=2", "--omega", "gevrey:d=2"]),
    ("nuclear", ["experiment", "nuclear", "--weight", "gevrey:d=2",
                 "--m", "1", "--L", "2", "--jmax", "50"]),
    ("equicont", ["experiment", "equicont", "--weight", "gevrey:d=2",
                  "--x-seq", "2,4,8,16,32,64,128,256",
                  "--lam-seq", "1,2,3,4,5,6,7,8",
                  "--n", "1", "--K", "2", "--function", "gaussian"]),
    ("cauchy", ["experiment", "cauchy", "--psi", "sqrt1px2",
                "--delta", "0.5", "--jmax", "10"]),
]


def run(outdir: pathlib.Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name, argv in RUNS:
        out = outdir / f"{name}.csv"
        code = gsbench_main(argv + ["--out", str(out), "--format", "both"])
        print(f"{name}: {'PASS' if code == 0 else f'FAIL (exit {code})'}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="runs", type=pathlib.Path)
    sys.exit(run(ap.parse_args().outdir))
