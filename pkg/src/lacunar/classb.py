"""The class B of almost Newman lacunary polynomials.

A member is ``-1 + x + x^n + x^m_1 + ... + x^m_s`` with ``m_1 - n >= n - 1`` and
``m_{q+1} - m_q >= n - 1``.  This module validates members, draws them with
the Monte-Carlo sampler, and carries the closed-form results for trinomials
and quadrinomials together with the constructive Φ_p-multiple generator.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from math import comb, gcd
from typing import Sequence

import numpy as np

from .polycore import (
    IntPoly,
    PolyDomainError,
    cyclotomic,
    divexact,
    divides_cyclotomic,
    gcd_primitive,
    reciprocal,
)


class ClassBError(ValueError):
    """Invalid class-B data (bad dynamical degree or a gap violation)."""


@dataclass(frozen=True)
class ClassBPoly:
    n: int
    exps: tuple[int, ...] = ()

    @property
    def s(self) -> int:
        return len(self.exps)

    @property
    def degree(self) -> int:
        return self.exps[-1] if self.exps else self.n

    @property
    def exponents(self) -> tuple[int, ...]:
        return (0, 1, self.n) + self.exps

    def to_intpoly(self) -> IntPoly:
        return IntPoly(((0, -1), (1, 1), (self.n, 1)) + tuple((m, 1) for m in self.exps))

    def to_json_obj(self) -> dict:
        return {"n": self.n, "m": list(self.exps)}

    def __str__(self) -> str:
        return f"n={self.n};m=" + ",".join(map(str, self.exps))


def check_gaps(n: int, exps: Sequence[int]) -> None:
    if n < 2:
        raise ClassBError("bad dynamical degree: n must be >= 2")
    prev = n
    for q, m in enumerate(exps, start=1):
        if m - prev < n - 1:
            raise ClassBError(f"gap violation at index {q}: {m} - {prev} < {n - 1}")
        prev = m


def make(n: int, exps: Sequence[int] = ()) -> ClassBPoly:
    """Validated constructor."""
    exps = tuple(int(m) for m in exps)
    check_gaps(int(n), exps)
    return ClassBPoly(int(n), exps)


def _unchecked(n: int, exps: Sequence[int]) -> ClassBPoly:
    # test hook for negative controls; bypasses the gap conditions
    return ClassBPoly(int(n), tuple(exps))


def from_json_obj(obj: dict) -> ClassBPoly:
    return make(obj["n"], obj.get("m", []))


def dumps(f: ClassBPoly) -> str:
    return json.dumps(f.to_json_obj())


def loads(s: str) -> ClassBPoly:
    return from_json_obj(json.loads(s))


_INLINE = re.compile(r"^\s*n\s*=\s*(\d+)\s*(?:;\s*m\s*=\s*([\d,\s]*))?\s*$")


def parse_inline(s: str) -> ClassBPoly:
    """Parse the CLI form ``"n=5;m=9,15"`` (``m`` may be empty or absent)."""
    mt = _INLINE.match(s)
    if mt is None:
        raise ClassBError(f"cannot parse class-B polynomial {s!r}")
    ms = [int(t) for t in (mt.group(2) or "").split(",") if t.strip()]
    return make(int(mt.group(1)), ms)


def from_intpoly(f: IntPoly) -> ClassBPoly:
    """Recognize an IntPoly as a class-B member."""
    t = f.terms
    if len(t) < 3 or t[0] != (0, -1) or t[1] != (1, 1) or any(c != 1 for _, c in t[2:]):
        raise ClassBError(f"{f} is not of the form -1 + x + x^n + ...")
    return make(t[2][0], [e for e, _ in t[3:]])


# ---------------------------------------------------------------------------
# random streams and the Monte-Carlo sampler


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based substream: Philox4x64 keyed by ``seed``, counter offset by ``index``.

    Each index owns a disjoint 2^128-block segment of the counter space, so
    draws do not depend on how runs are partitioned across workers.
    """
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    bg = np.random.Philox(key=seed, counter=[0, 0, index, 0])
    return np.random.Generator(bg)


def _rand(rng: np.random.Generator, lo: int, hi: int) -> int:
    """Uniform integer in the inclusive range ``lo..hi``."""
    return int(rng.integers(lo, hi, endpoint=True))


@dataclass(frozen=True)
class SamplerConfig:
    n_max: int
    seed: int = 0
    s_filter: int | None = None
    s_scheme: str = "uniform"

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")
        if self.s_scheme not in ("uniform", "rejection"):
            raise ValueError(f"unknown s_scheme {self.s_scheme!r}")


def sample_algorithm1(n_max: int, rng: np.random.Generator) -> ClassBPoly:
    """One draw of the Monte-Carlo pseudo-code: N, then n <= N, then the gap loop."""
    big_n = _rand(rng, 2, n_max)
    n = _rand(rng, 2, big_n)
    return sample_in_bn(n, big_n, rng)


def sample_in_bn(n: int, big_n: int, rng: np.random.Generator) -> ClassBPoly:
    """The gap loop of the sampler with n and the degree cap N held fixed."""
    if n < 2 or big_n < n:
        raise ValueError("need 2 <= n <= N")
    exps = []
    m = 2 * n - 1
    while m <= big_n:
        dm = _rand(rng, 0, big_n - m)
        exps.append(m + dm)
        m = m + dm + n - 1
    return ClassBPoly(n, tuple(exps))


def count_fixed_s(n: int, s: int, big_n: int) -> int:
    """#{f in B_n with exactly s extra exponents and degree <= big_n}."""
    if s == 0:
        return 1 if n <= big_n else 0
    slots = big_n - 2 * n + 2 - (s - 1) * (n - 2)
    return comb(slots, s) if slots >= s else 0


def sample_uniform_fixed_s(n_max: int, s: int, rng: np.random.Generator) -> ClassBPoly:
    """Uniform draw from the finite set of class-B polynomials with s extra terms, deg <= n_max."""
    if s < 1:
        raise ValueError("uniform fixed-s sampling needs s >= 1")
    weights = [count_fixed_s(n, s, n_max) for n in range(2, n_max + 1)]
    total = sum(weights)
    if total == 0:
        raise ValueError(f"no class-B polynomial with s={s} and degree <= {n_max}")
    target = _rand(rng, 0, total - 1)
    n = 2
    for w in weights:
        if target < w:
            break
        target -= w
        n += 1
    # shifted exponents u_q = m_q - (q-1)(n-2) form a plain s-subset of [2n-1, top]
    top = n_max - (s - 1) * (n - 2)
    pool = top - (2 * n - 1) + 1
    picks = sorted(int(v) for v in rng.choice(pool, size=s, replace=False))
    exps = tuple(2 * n - 1 + u + q * (n - 2) for q, u in enumerate(picks))
    return ClassBPoly(n, exps)


def sample(cfg: SamplerConfig, rng: np.random.Generator) -> ClassBPoly:
    if cfg.s_filter is None:
        return sample_algorithm1(cfg.n_max, rng)
    if cfg.s_scheme == "uniform" and cfg.s_filter >= 1:
        return sample_uniform_fixed_s(cfg.n_max, cfg.s_filter, rng)
    while True:
        f = sample_algorithm1(cfg.n_max, rng)
        if f.s == cfg.s_filter:
            return f


# ---------------------------------------------------------------------------
# closed forms for trinomials and quadrinomials


@dataclass(frozen=True)
class SelmerSplit:
    irreducible: bool
    factors: tuple[IntPoly, ...]


def trinomial(n: int) -> IntPoly:
    return IntPoly(((0, -1), (1, 1), (n, 1)))


def selmer_classify(n: int) -> SelmerSplit:
    """Trinomial -1 + x + x^n: irreducible unless n ≡ 5 (mod 6)."""
    if n < 2:
        raise PolyDomainError("n must be >= 2")
    g = trinomial(n)
    if n % 6 != 5:
        return SelmerSplit(True, (g,))
    phi6 = cyclotomic(6)
    q = divexact(g, phi6)
    assert q.degree == n - 2
    assert gcd_primitive(q, reciprocal(q)).degree == 0, "quotient must be nonreciprocal"
    return SelmerSplit(False, (phi6, q))


def finch_jones_irreducible(n: int, m1: int) -> bool:
    """Irreducibility of -1 + x + x^n + x^m1 by the gcd congruence criterion."""
    if m1 <= n:
        raise PolyDomainError("need m1 > n")
    e1 = gcd(m1, n - 1)
    e2 = gcd(n, m1 - 1)
    return m1 % (2 * e1) != 0 and n % (2 * e2) != 0


@dataclass(frozen=True)
class MillsFactors:
    factors: tuple[IntPoly, IntPoly, IntPoly]
    product: IntPoly
    in_class_b: bool = field(default=False)


def mills_special_factorization(r: int) -> MillsFactors:
    """(x^2r + 1)(x^3r + x^2r - 1)(x^3r - x^r + 1) = -1 + x^r + x^7r + x^8r.

    The product never satisfies the class-B gap condition (8r - 7r < 7r - 1),
    which ``in_class_b`` records.
    """
    if r < 1:
        raise PolyDomainError("r must be >= 1")
    a = IntPoly(((0, 1), (2 * r, 1)))
    b = IntPoly(((0, -1), (2 * r, 1), (3 * r, 1)))
    c = IntPoly(((0, 1), (r, -1), (3 * r, 1)))
    prod = a * b * c
    expected = IntPoly(((0, -1), (r, 1), (7 * r, 1), (8 * r, 1)))
    if prod != expected:
        raise AssertionError("Mills identity failed")
    in_b = r == 1 and (8 * r - 7 * r) >= 7 * r - 1
    return MillsFactors((a, b, c), prod, in_b)


# ---------------------------------------------------------------------------
# Φ_p multiples by residue balancing


def residue_counts(f: IntPoly, p: int) -> list[int]:
    """Coefficient sums over exponent classes mod p."""
    c = [0] * p
    for e, a in f.terms:
        c[e % p] += a
    return c


def construct_phi_p_multiple(p: int, n: int, rounds: int = 0, rng: np.random.Generator | None = None) -> ClassBPoly:
    """A class-B polynomial divisible by Φ_p, built by balancing residues mod p.

    Fixed terms contribute -1 to class 0, +1 to class 1 and +1 to class n mod p.
    Extra exponents are placed greedily, each the smallest admissible value
    (gap exactly n - 1 when possible) landing in a class still below target.
    Each extra round appends p exponents with pairwise distinct residues.
    ``rng`` optionally randomizes the slack inserted before each placement.
    """
    if p < 3 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise PolyDomainError("p must be an odd prime")
    if n < 2:
        raise PolyDomainError("n must be >= 2")
    counts = [0] * p
    counts[0] -= 1
    counts[1] += 1
    counts[n % p] += 1
    target = max(counts)
    need = [target - c for c in counts]  # need[0] >= 1, so s >= 1
    exps: list[int] = []
    last = n

    def place(need: list[int]) -> None:
        nonlocal last
        while any(need):
            m = last + n - 1
            if rng is not None:
                m += int(rng.integers(0, p))
            while need[m % p] == 0:
                m += 1
            exps.append(m)
            need[m % p] -= 1
            last = m

    place(need)
    for _ in range(rounds):
        place([1] * p)
    f = make(n, exps)
    assert divides_cyclotomic(f.to_intpoly(), p)
    return f
