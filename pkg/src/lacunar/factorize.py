"""Cyclotomic / reciprocal / nonreciprocal splitting of class-B polynomials.

For f in B with s >= 1, write f = A*B*C with A cyclotomic, B reciprocal without
cyclotomic factors and C nonreciprocal.  Every irreducible factor of A*B also
divides f*, and C is claimed irreducible, so ``gcd(f, f*)`` is the whole
reciprocal part and irreducibility of f reduces to that gcd being trivial.
No general factorization over Z is performed anywhere in this module.

Caveat: the gcd criterion relies on C being irreducible.  Exhaustive search
finds rare class-B polynomials where C splits into two nonreciprocal
factors (for example n = 3, m = (10, 13, 15, 18, 21)); on those inputs
:func:`is_irreducible` answers True for a reducible polynomial.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import classb
from .classb import ClassBPoly
from .polycore import (
    IntPoly,
    PolyDomainError,
    cyclotomic,
    divexact,
    divides_cyclotomic,
    gcd_primitive,
    reciprocal,
)


@dataclass(frozen=True)
class FactorSplit:
    A: tuple[tuple[int, int], ...]
    B_part: IntPoly
    C_part: IntPoly
    degC_conjecture_ok: bool

    def cyclotomic_product(self) -> IntPoly:
        out = IntPoly.one()
        for m, mult in self.A:
            out = out * cyclotomic(m) ** mult
        return out

    def product(self) -> IntPoly:
        return self.cyclotomic_product() * self.B_part * self.C_part

    @property
    def irreducible(self) -> bool:
        return not self.A and self.B_part.degree == 0

    def to_json_obj(self) -> dict:
        from .polycore import to_json_obj

        return {
            "A": [[m, k] for m, k in self.A],
            "B": to_json_obj(self.B_part),
            "C": to_json_obj(self.C_part),
            "irreducible": self.irreducible,
            "degC_conjecture_ok": self.degC_conjecture_ok,
        }


def _ensure_classb(f) -> ClassBPoly:
    if isinstance(f, IntPoly):
        return classb.from_intpoly(f)
    return classb.make(f.n, f.exps)


def reciprocal_part(f: IntPoly) -> IntPoly:
    return gcd_primitive(f, reciprocal(f))


def split_abc(f: ClassBPoly) -> FactorSplit:
    f = _ensure_classb(f)
    fp = f.to_intpoly()
    r = reciprocal_part(fp)
    c_part = divexact(fp, r)
    a, b_part = cyclotomic_part(r, s=f.s)
    deg_c_ok = c_part.degree >= (f.degree - 1) // 2
    return FactorSplit(tuple(a), b_part, c_part, deg_c_ok)


def is_irreducible(f: ClassBPoly) -> bool:
    f = _ensure_classb(f)
    if f.s == 0:
        return classb.selmer_classify(f.n).irreducible
    fp = f.to_intpoly()
    return reciprocal_part(fp).degree == 0


# ---------------------------------------------------------------------------
# cyclotomic part


def _totients_upto(m: int) -> np.ndarray:
    phi = np.arange(m + 1, dtype=np.int64)
    for p in range(2, m + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return phi


def _index_bound(d: int) -> int:
    """An M with phi(m) > d for every m > M (Rosser-Schoenfeld lower bound)."""
    if d < 1:
        return 2
    m = max(30, 2 * d)
    while True:
        ll = math.log(math.log(m))
        if m / (math.exp(0.5772156649015329) * ll + 3.0 / ll) > d:
            return m
        m *= 2


def _prime_factors(m: int) -> list[int]:
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def _maybe_vanishes_at_root_of_unity(r: IntPoly, m: int) -> bool:
    """Cheap floating filter: False only when r(e^{2πi/m}) is certainly nonzero."""
    z = cmath.exp(2j * math.pi / m)
    val = sum(c * z ** (e % m) for e, c in r.terms)
    l1 = sum(abs(c) for _, c in r.terms)
    return abs(val) <= 1e-9 * l1 * max(len(r.terms), 1) + 1e-12


def cyclotomic_part(r: IntPoly, s: int | None = None):
    """Exact cyclotomic factorization of ``r``: ``([(m, mult), ...], residual)``.

    Every index with totient at most deg(r) is tried.  When ``s`` is given,
    indices whose prime factors are all <= s + 3 go first.
    """
    if r.is_zero:
        raise PolyDomainError("cyclotomic part of the zero polynomial")
    residual = r
    if residual.lc < 0:
        residual = -residual
    found: list[tuple[int, int]] = []
    d0 = residual.degree
    if d0 < 1:
        return found, residual
    bound = _index_bound(d0)
    phi = _totients_upto(bound)
    cands = [m for m in range(1, bound + 1) if phi[m] <= d0]
    if s is not None:
        smooth = [m for m in cands if all(p <= s + 3 for p in _prime_factors(m))]
        rest = [m for m in cands if m not in set(smooth)]
        cands = smooth + rest
    for m in cands:
        if phi[m] > residual.degree:
            continue
        if not _maybe_vanishes_at_root_of_unity(residual, m):
            continue
        mult = 0
        while residual.degree >= phi[m] and divides_cyclotomic(residual, m):
            residual = divexact(residual, cyclotomic(m))
            mult += 1
        if mult:
            found.append((m, mult))
    found.sort()
    return found, residual


# ---------------------------------------------------------------------------
# divisibility by Φ_p


def boyd_divides(f: IntPoly, p: int) -> bool:
    """Φ_p | f iff the coefficient sums over residue classes mod p all agree."""
    if isinstance(f, ClassBPoly):
        f = f.to_intpoly()
    c = classb.residue_counts(f, p)
    return all(v == c[0] for v in c)


def phi_p_necessary(s: int, p: int) -> bool:
    return (s + 1) % p == 0


# ---------------------------------------------------------------------------
# bounds


def mignotte_root_bound(f: IntPoly, k: int | None = None) -> float:
    """(|a_0| + ... + |a_{q-k}|)^(1/k) for a monic f of degree q with no terms in (q-k, q).

    ``k`` defaults to the actual top gap; a larger ``k`` is rejected.
    """
    if isinstance(f, ClassBPoly):
        f = f.to_intpoly()
    if abs(f.lc) != 1:
        raise PolyDomainError("bound requires a monic polynomial")
    if len(f.terms) < 2:
        return 0.0
    q = f.degree
    gap = q - f.terms[-2][0]
    if k is None:
        k = gap
    if k <= 0:
        raise PolyDomainError("k must be positive")
    if k > gap:
        raise PolyDomainError(f"k={k} exceeds the top gap {gap}")
    total = sum(abs(c) for e, c in f.terms if e <= q - k)
    return total ** (1.0 / k)


def reciprocal_factor_bounds(n: int, c: float) -> tuple[float, float]:
    """Minimal monomial count and degree for a reciprocal noncyclotomic factor.

    Returns ``(s + 3 lower bound, m_s lower bound)`` for dynamical degree n and
    lenticular fraction c.
    """
    from .rootgeom import kappa

    if not 0.0 <= c <= 1.0:
        raise PolyDomainError("c must lie in [0, 1]")
    if n < 260:
        raise PolyDomainError("bounds hold for n >= 260")
    kap = float(kappa())
    base = 1.0 + (c * math.log(n) - (1.0 - c) * math.log(kap)) / n
    power = base ** (n - 1)
    return power + 1.0, (power - 1.0) * (n - 1) + 1.0
