#!/usr/bin/env python3
"""Irreducibility proportions for every family, one CSV row per (family, scheme).

    python scripts/table1.py --runs 4000 --seed 0 > table1.csv
"""

import argparse
import csv
import sys

from lacunar import mcstats
from lacunar.mcstats import McConfig


def rows(args):
    yield "classB", "", McConfig("classB", args.nmax, args.runs, args.seed, args.workers)
    for s in (1, 2):
        yield f"classB_s{s}", "uniform", McConfig("classB_s", args.nmax, args.runs, args.seed, args.workers, s=s)
    yield "trinomial", "", McConfig("trinomial", args.nmax, args.runs, args.seed, args.workers)
    for fam in ("newman_OP", "almost_newman_variant_OP"):
        for scheme in ("uniform", "nested"):
            yield fam, scheme, McConfig(fam, args.nmax, args.op_runs, args.seed, args.workers, degree_scheme=scheme)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=3000)
    ap.add_argument("--runs", type=int, default=4000)
    ap.add_argument("--op-runs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["family", "scheme", "runs", "proportion", "ci90_half_width", "irreducible", "reducible", "undecided", "bracket_low", "bracket_high", "seconds"])
    for fam, scheme, cfg in rows(args):
        rep = mcstats.run_mc(cfg)
        w.writerow([fam, scheme, cfg.runs, f"{rep.proportion:.4f}", f"{rep.ci90_half_width:.4f}", *rep.counts, f"{rep.bracket[0]:.4f}", f"{rep.bracket[1]:.4f}", f"{rep.runtime_seconds:.0f}"])
        sys.stdout.flush()
    exact = mcstats.trinomial_proportion_exact(args.nmax)
    w.writerow(["trinomial_exact", "", "", f"{float(exact):.4f}", "", exact.numerator, exact.denominator - exact.numerator, 0, "", "", ""])


if __name__ == "__main__":
    main()
