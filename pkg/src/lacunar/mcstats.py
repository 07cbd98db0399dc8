"""Monte-Carlo experiments on irreducibility and root thickness.

Each run i draws from its own counter-based substream ``stream(seed, i)``,
so reports are identical for any number of workers.  Class-B families use
the exact gcd oracle.  Newman families use a sound heuristic oracle that
may answer ``undecided``, or an external factorizer behind a one-line
text protocol.
"""

from __future__ import annotations

import math
import shlex
import subprocess
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import classb, factorize, rootgeom
from .polycore import (
    BadPrime,
    IntPoly,
    _is_prime,
    degree_profile_mod_p,
    gcd_primitive,
    is_reciprocal,
    reciprocal,
)

FAMILIES = ("classB", "classB_s", "trinomial", "newman_OP", "almost_newman_variant_OP")
Z90 = 1.645


class Verdict(str, Enum):
    IRREDUCIBLE = "irreducible"
    REDUCIBLE = "reducible"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class McConfig:
    family: str = "classB"
    n_max: int = 3000
    runs: int = 4000
    seed: int = 0
    workers: int = 1
    s: int | None = None
    s_scheme: str = "uniform"
    degree_scheme: str = "uniform"
    adapter: str | None = None
    max_ddf_degree: int = 400

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")
        if self.family == "classB_s" and (self.s is None or self.s < 0):
            raise ValueError("classB_s needs s >= 0")
        if self.degree_scheme not in ("nested", "uniform"):
            raise ValueError(f"unknown degree scheme {self.degree_scheme!r}")


@dataclass(frozen=True)
class McReport:
    proportion: float
    sample_std: float
    ci90_half_width: float
    counts: tuple[int, int, int]
    runtime_seconds: float
    config: dict
    bracket: tuple[float, float]

    def to_json_obj(self, with_runtime: bool = True) -> dict:
        obj = {
            "proportion": self.proportion,
            "sample_std": self.sample_std,
            "ci90_half_width": self.ci90_half_width,
            "counts": {"irreducible": self.counts[0], "reducible": self.counts[1], "undecided": self.counts[2]},
            "bracket": list(self.bracket),
            "config": self.config,
        }
        if with_runtime:
            obj["runtime_seconds"] = self.runtime_seconds
        return obj


def script_statistics(xs: Sequence[float]) -> tuple[float, float, float]:
    """Mean, sample deviation with an M - 1 denominator, and 1.645 * dev / sqrt(M)."""
    m = len(xs)
    if m == 0:
        raise ValueError("no samples")
    mean = sum(xs) / m
    if m == 1:
        return mean, 0.0, 0.0
    var = math.sqrt(sum((x - mean) ** 2 for x in xs) / (m - 1))
    return mean, var, Z90 * var / math.sqrt(m)


# ---------------------------------------------------------------------------
# exact trinomial law


def trinomial_proportion_exact(N: int) -> Fraction:
    """#{2 <= n <= N : n ≢ 5 (mod 6)} / (N - 1)."""
    if N < 2:
        raise ValueError("N must be >= 2")
    reducible = (N + 1) // 6  # n = 5, 11, ..., n <= N
    return Fraction(N - 1 - reducible, N - 1)


# ---------------------------------------------------------------------------
# Newman polynomials and the heuristic oracle


def sample_newman(d: int, variant: bool, rng: np.random.Generator) -> IntPoly:
    """Uniform member of P_{d,+} (or P_{d,-} with ``variant``)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    mid = rng.integers(0, 2, size=d - 1) if d > 1 else np.zeros(0, dtype=int)
    coeffs = [-1 if variant else 1] + [int(a) for a in mid] + [1]
    return IntPoly.from_dense(coeffs)


def oracle_primes(count: int = 8, start: int = 10**6) -> tuple[int, ...]:
    out, p = [], start + 1
    while len(out) < count:
        if _is_prime(p):
            out.append(p)
        p += 1
    return tuple(out)


DEFAULT_PRIMES = oracle_primes()


def _subset_sums(degrees: Sequence[int]) -> set[int]:
    sums = {0}
    for k in degrees:
        sums |= {s + k for s in sums}
    return sums


def certify_irreducible_heuristic(
    f: IntPoly, primes: Sequence[int] = DEFAULT_PRIMES, max_ddf_degree: int = 400
) -> Verdict:
    """Sound three-way verdict for an integer polynomial with f(0) != 0.

    Reducible when gcd(f, f*) is a proper factor, or (for reciprocal f) a
    cyclotomic factor is found.  Irreducible when the factor-degree profiles
    modulo good primes leave no proper subset sum common to all of them.
    Anything else is undecided.
    """
    if f.coeff(0) == 0:
        raise ValueError("need f(0) != 0")
    d = f.degree
    if d <= 1:
        return Verdict.IRREDUCIBLE if f.content == 1 else Verdict.REDUCIBLE
    if f.content != 1:
        return Verdict.REDUCIBLE
    r = gcd_primitive(f, reciprocal(f))
    if 0 < r.degree < d:
        return Verdict.REDUCIBLE
    if is_reciprocal(f) and d <= max_ddf_degree:
        found, residual = factorize.cyclotomic_part(f)
        if found:
            single = len(found) == 1 and found[0][1] == 1 and residual.degree == 0
            return Verdict.IRREDUCIBLE if single else Verdict.REDUCIBLE
    if d > max_ddf_degree:
        return Verdict.UNDECIDED
    common = None
    for p in primes:
        try:
            prof = degree_profile_mod_p(f, p)
        except (BadPrime, ValueError):
            continue
        if not prof.squarefree_mod_p or sum(prof.degrees) != d:
            continue
        sums = _subset_sums(prof.degrees)
        common = sums if common is None else common & sums
        if common == {0, d}:
            return Verdict.IRREDUCIBLE
    return Verdict.UNDECIDED


def _format_terms(f: IntPoly) -> str:
    return ";".join(f"{e},{c}" for e, c in f.terms)


def external_verdict(cmd: str, f: IntPoly, timeout: float = 600.0) -> Verdict:
    """One round of the adapter protocol: write ``e0,c0;e1,c1;...``, read a verdict line."""
    try:
        res = subprocess.run(
            shlex.split(cmd), input=_format_terms(f) + "\n", capture_output=True, text=True, timeout=timeout
        )
    except (OSError, subprocess.SubprocessError):
        return Verdict.UNDECIDED
    if res.returncode != 0:
        return Verdict.UNDECIDED
    line = res.stdout.strip().splitlines()[0].strip().lower() if res.stdout.strip() else ""
    return {"irreducible": Verdict.IRREDUCIBLE, "reducible": Verdict.REDUCIBLE}.get(line, Verdict.UNDECIDED)


# ---------------------------------------------------------------------------
# the driver


def _newman_degree(cfg: McConfig, rng: np.random.Generator) -> int:
    if cfg.degree_scheme == "nested":
        big_n = classb._rand(rng, 2, cfg.n_max)
        return classb._rand(rng, 2, big_n)
    return classb._rand(rng, 2, cfg.n_max)


def draw(cfg: McConfig, index: int):
    """The polynomial used by run ``index``."""
    rng = classb.stream(cfg.seed, index)
    fam = cfg.family
    if fam == "classB":
        return classb.sample_algorithm1(cfg.n_max, rng)
    if fam == "classB_s":
        sc = classb.SamplerConfig(cfg.n_max, cfg.seed, cfg.s, cfg.s_scheme)
        return classb.sample(sc, rng)
    if fam == "trinomial":
        return classb.make(classb._rand(rng, 2, cfg.n_max), [])
    d = _newman_degree(cfg, rng)
    return sample_newman(d, fam == "almost_newman_variant_OP", rng)


def run_one(cfg: McConfig, index: int) -> Verdict:
    f = draw(cfg, index)
    if isinstance(f, classb.ClassBPoly):
        return Verdict.IRREDUCIBLE if factorize.is_irreducible(f) else Verdict.REDUCIBLE
    if cfg.adapter:
        return external_verdict(cfg.adapter, f)
    return certify_irreducible_heuristic(f, max_ddf_degree=cfg.max_ddf_degree)


def _run_range(cfg: McConfig, lo: int, hi: int) -> list[str]:
    return [run_one(cfg, i).value for i in range(lo, hi)]


def run_verdicts(cfg: McConfig) -> list[Verdict]:
    if cfg.workers <= 1:
        return [Verdict(v) for v in _run_range(cfg, 0, cfg.runs)]
    step = max(1, cfg.runs // (8 * cfg.workers))
    bounds = [(lo, min(cfg.runs, lo + step)) for lo in range(0, cfg.runs, step)]
    with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
        parts = list(ex.map(_run_range, [cfg] * len(bounds), *zip(*bounds)))
    return [Verdict(v) for part in parts for v in part]


def run_mc(cfg: McConfig) -> McReport:
    """Irreducible proportion with the script's 90% half-width.

    For Newman families ``proportion`` is the certified-irreducible fraction
    and ``bracket`` is [certified irreducible, 1 - certified reducible].
    """
    t0 = time.perf_counter()
    verdicts = run_verdicts(cfg)
    irr = sum(v is Verdict.IRREDUCIBLE for v in verdicts)
    red = sum(v is Verdict.REDUCIBLE for v in verdicts)
    und = len(verdicts) - irr - red
    xs = [1.0 if v is Verdict.IRREDUCIBLE else 0.0 for v in verdicts]
    mean, std, half = script_statistics(xs)
    m = len(verdicts)
    return McReport(
        proportion=mean,
        sample_std=std,
        ci90_half_width=half,
        counts=(irr, red, und),
        runtime_seconds=time.perf_counter() - t0,
        config=asdict(cfg),
        bracket=(irr / m, 1 - red / m),
    )


# ---------------------------------------------------------------------------
# thickness sweep


@dataclass(frozen=True)
class ThicknessRow:
    n: int
    degree: int
    s: int
    delta: float
    summit_distance: float


@dataclass(frozen=True)
class ThicknessSummary:
    rows: tuple[ThicknessRow, ...]
    buckets: tuple[tuple[float, float, float, int], ...]  # (median n, median δ, median summit ratio, size)
    slope: float
    summit_ratio_median: float
    failures: int


def thickness_draw(cfg: McConfig, index: int, n_min: int = 100) -> classb.ClassBPoly:
    """f in B_n with n log-uniform in [n_min, n_max] and degree cap uniform in [2n - 1, 3n]."""
    rng = classb.stream(cfg.seed, index)
    lo, hi = math.log(n_min), math.log(cfg.n_max)
    n = int(round(math.exp(lo + (hi - lo) * rng.random())))
    cap = classb._rand(rng, 2 * n - 1, 3 * n)
    return classb.sample_in_bn(n, cap, rng)


def thickness_experiment(cfg: McConfig, n_min: int = 100, buckets: int = 6, precision_bits: int = 53) -> ThicknessSummary:
    rows, failures = [], 0
    for i in range(cfg.runs):
        f = thickness_draw(cfg, i, n_min)
        try:
            rs = rootgeom.all_roots(f.to_intpoly(), precision_bits)
            lent = rootgeom.lenticulus(f, rs)
        except (rootgeom.RootCertificationError, rootgeom.ThresholdAmbiguous):
            failures += 1
            continue
        th = rootgeom.thickness_measure(f, rs, lent)
        rows.append(ThicknessRow(f.n, f.degree, f.s, th.delta, th.summit_distance))
    edges = np.exp(np.linspace(math.log(n_min), math.log(cfg.n_max), buckets + 1))
    agg = []
    for a, b in zip(edges[:-1], edges[1:]):
        sel = [r for r in rows if a <= r.n < b or (b == edges[-1] and r.n == b)]
        if not sel:
            continue
        ns = np.array([r.n for r in sel], float)
        agg.append(
            (
                float(np.median(ns)),
                float(np.median([r.delta for r in sel])),
                float(np.median([r.summit_distance * r.n / math.log(r.n) for r in sel])),
                len(sel),
            )
        )
    if len(agg) >= 2:
        x = np.log([a[0] for a in agg])
        y = np.log([a[1] for a in agg])
        slope = float(np.polyfit(x, y, 1)[0])
    else:
        slope = float("nan")
    ratios = [r.summit_distance * r.n / math.log(r.n) for r in rows]
    return ThicknessSummary(
        tuple(rows), tuple(agg), slope, float(np.median(ratios)) if ratios else float("nan"), failures
    )
