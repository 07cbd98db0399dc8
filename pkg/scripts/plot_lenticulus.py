#!/usr/bin/env python3
"""Scatter plot of the roots of a class-B polynomial, lenticular roots highlighted.

Reads the CSV written by ``lacunar roots``:

    lacunar roots --poly "n=37;m=81,140,184,232,285,350,389,450,590,649" > r.csv
    python scripts/plot_lenticulus.py r.csv roots.png

Needs matplotlib.
"""

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def main(src: str, dest: str) -> None:
    with open(src) as fh:
        rows = list(csv.DictReader(fh))
    z = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    lent = np.array([r["lenticular"] == "1" for r in rows])
    fig, ax = plt.subplots(figsize=(6, 6))
    t = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(t), np.sin(t), "k--", lw=0.5)
    for sgn in (1, -1):
        ax.plot([0, 1.2 * np.cos(np.pi / 18)], [0, sgn * 1.2 * np.sin(np.pi / 18)], "k:", lw=0.5)
    ax.scatter(z[~lent].real, z[~lent].imag, s=4, c="tab:blue")
    ax.scatter(z[lent].real, z[lent].imag, s=16, c="tab:red")
    ax.set_aspect("equal")
    fig.savefig(dest, dpi=150, bbox_inches="tight")


if __name__ == "__main__":
    main(*sys.argv[1:3])
