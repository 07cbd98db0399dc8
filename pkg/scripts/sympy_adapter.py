#!/usr/bin/env python3
"""External-factorizer adapter backed by sympy.

Reads one line ``e0,c0;e1,c1;...`` on stdin and prints ``irreducible`` or
``reducible``.  Use with ``lacunar mc --adapter "python scripts/sympy_adapter.py"``.
"""

import sys

import sympy


def main() -> None:
    line = sys.stdin.readline().strip()
    if not line:
        print("unknown")
        return
    x = sympy.Symbol("x")
    expr = sum(int(c) * x ** int(e) for e, c in (t.split(",") for t in line.split(";")))
    content, factors = sympy.factor_list(expr)
    nontrivial = sum(k for _, k in factors) + (abs(content) != 1)
    print("irreducible" if nontrivial == 1 else "reducible")


if __name__ == "__main__":
    main()
