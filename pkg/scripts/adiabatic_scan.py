#!/usr/bin/env python3
"""Scan the moving-wall speed ratio and tabulate the invariant violation.

Writes scan.csv next to this script unless --out is given.
"""

import argparse
from pathlib import Path

import numpy as np

from cpdq_lab import adiabatic_scan, natural_units
from cpdq_lab.cli import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ratios", type=float, nargs="+",
                    default=[1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1])
    ap.add_argument("--expansion", type=float, default=2.0)
    ap.add_argument("--threshold", type=float, default=1e-2)
    ap.add_argument("--out", type=Path,
                    default=Path(__file__).parent / "scan.csv")
    args = ap.parse_args()

    scan = adiabatic_scan(args.ratios, natural_units(),
                          expansion=args.expansion, threshold=args.threshold)
    print(f"{'u/v':>10s} {'|d ln pL|':>12s} {'dS/k':>12s}")
    for r, v, s in zip(scan.ratios, scan.delta_ln_pl, scan.delta_s_over_k):
        print(f"{r:10.1e} {v:12.4e} {s:+12.4e}")
    print(f"largest ratio with violation < {scan.threshold:g}: "
          f"{scan.largest_adiabatic_ratio}")
    write_csv(args.out, ["ratio", "delta_ln_pL", "delta_S_over_k"],
              [scan.ratios, scan.delta_ln_pl, scan.delta_s_over_k])
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
