#!/usr/bin/env python3
"""Convergence study of the two-range power expansion.

Sweeps the radius ratio and tabulates, per outer shell, the partial value
and the running error estimate.  Writes one CSV per ratio next to this
script (or to --outdir) and prints a compact summary.

Usage:
    python scripts/addition_convergence.py --nu -1 --l 1 --m 0 --ratios 0.3,0.5,0.8
"""

import argparse
import csv
import math
from pathlib import Path

import numpy as np

from stgo_kit.addition import SplitPair, TruncationSpec, power_solid_addition
from stgo_kit.harmonics import regular_solid


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nu", type=float, default=-1.0)
    ap.add_argument("--l", type=int, default=1)
    ap.add_argument("--m", type=int, default=0)
    ap.add_argument("--ratios", default="0.3,0.5,0.8")
    ap.add_argument("--lmax", type=int, default=60)
    ap.add_argument("--tol", type=float, default=1e-12)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", default=None)
    args = ap.parse_args()

    outdir = Path(args.outdir) if args.outdir else Path(__file__).parent
    rng = np.random.default_rng(args.seed)
    d1 = rng.normal(size=3)
    d1 /= np.linalg.norm(d1)
    d2 = rng.normal(size=3)
    d2 /= np.linalg.norm(d2)

    for ratio_text in args.ratios.split(","):
        ratio = float(ratio_text)
        pair = SplitPair.from_vectors(d1 * ratio, d2)
        total = pair.r_lt + pair.r_gt
        direct = np.linalg.norm(total) ** args.nu * regular_solid((args.l, args.m), total)
        shells = []
        res = power_solid_addition(
            args.nu, (args.l, args.m), pair, TruncationSpec(args.lmax, args.tol), shells=shells
        )
        path = outdir / f"addition_nu{args.nu}_l{args.l}_ratio{ratio}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["shell_l1", "partial_re", "partial_im", "shell_contrib", "est_error", "true_rel_err"])
            for (l1, partial, contrib, est) in shells:
                rel = abs(partial - direct) / abs(direct)
                w.writerow(
                    [l1, f"{partial.real:.17g}", f"{partial.imag:.17g}", f"{contrib:.17g}",
                     f"{est:.17g}" if math.isfinite(est) else "inf", f"{rel:.17g}"]
                )
        rel = abs(res.value - direct) / abs(direct)
        print(
            f"ratio {ratio:4.2f}: shells used {res.outer_l_used:3d}, converged {res.converged}, "
            f"true rel err {rel:.2e}  ->  {path.name}"
        )


if __name__ == "__main__":
    main()
