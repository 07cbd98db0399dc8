#!/usr/bin/env python3
"""Thickness sweep: per-sample rows and per-bucket medians as two CSV files."""

import argparse
import csv

from lacunar import mcstats
from lacunar.mcstats import McConfig


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmin", type=int, default=100)
    ap.add_argument("--nmax", type=int, default=3000)
    ap.add_argument("--runs", type=int, default=48)
    ap.add_argument("--buckets", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--prefix", default="thickness")
    args = ap.parse_args()

    summ = mcstats.thickness_experiment(McConfig("classB", n_max=args.nmax, runs=args.runs, seed=args.seed), args.nmin, args.buckets)
    with open(f"{args.prefix}_rows.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "m_s", "s", "delta", "summit_distance"])
        for r in summ.rows:
            w.writerow([r.n, r.degree, r.s, repr(r.delta), repr(r.summit_distance)])
    with open(f"{args.prefix}_buckets.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n_median", "delta_median", "summit_ratio_median", "size"])
        w.writerows(summ.buckets)
    print(f"slope {summ.slope:.3f}  summit ratio {summ.summit_ratio_median:.3f}  failures {summ.failures}")


if __name__ == "__main__":
    main()
