#!/usr/bin/env python3
"""Measure whole-string coefficient generation against the per-symbol path.

Prints a CSV over a range of angular momentum caps; report-only, nothing is
asserted.

Usage:
    python scripts/gaunt_speedup.py --lmax-list 5,10,20,40
"""

import argparse
import csv
import sys

from stgo_kit.bench import bench_gaunt_strings


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lmax-list", default="5,10,20,40")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    writer = csv.writer(sys.stdout)
    writer.writerow(["l_max", "entries", "string_ns_per_entry", "racah_ns_per_entry", "speedup"])
    for text in args.lmax_list.split(","):
        l_max = int(text)
        res = bench_gaunt_strings(l_max, seed=args.seed)
        row = res.to_row()
        writer.writerow(
            [
                l_max,
                row["n_items"],
                f"{row['ns_per_item']:.0f}",
                f"{row['racah_total_ns'] / max(row['n_items'], 1):.0f}",
                f"{row['speedup']:.2f}",
            ]
        )


if __name__ == "__main__":
    main()
