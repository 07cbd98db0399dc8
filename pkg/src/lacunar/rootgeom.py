"""Root geometry of class-B polynomials.

All complex roots come from a vectorized Aberth iteration in double precision,
polished by Newton steps in mpmath and enclosed in Weierstrass inclusion
disks.  On top of that sit θ_n and its asymptotic expansion, the constant κ
and the threshold c_n, lenticulus extraction, the annulus bounds for the
non-lenticular roots and the locus export.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np

from . import classb
from .classb import ClassBPoly, SamplerConfig
from .polycore import IntPoly, PolyDomainError, eval_complex

SECTOR = math.pi / 18
MAX_BITS = 1024


class RootCertificationError(RuntimeError):
    """Roots could not be certified within the precision ladder."""

    def __init__(self, msg: str, partial: "RootSet | None" = None):
        super().__init__(msg)
        self.partial = partial


class ThresholdAmbiguous(RuntimeError):
    """A sector root sits within its error radius of the lenticular cut."""


class BracketViolation(AssertionError):
    pass


@dataclass(frozen=True)
class RootSet:
    roots: tuple
    radii: tuple[float, ...]
    degree: int
    precision_bits: int

    def as_complex(self) -> np.ndarray:
        return np.array([complex(z) for z in self.roots])

    def moduli(self) -> np.ndarray:
        return np.abs(self.as_complex())

    def max_radius(self) -> float:
        return max(self.radii, default=0.0)

    def __len__(self) -> int:
        return len(self.roots)


# ---------------------------------------------------------------------------
# simultaneous iteration in double precision


def _newton_ratio(z: np.ndarray, exps: np.ndarray, coefs: np.ndarray) -> np.ndarray:
    """p(z)/p'(z) for sparse p; outside the unit disk both are scaled by z^(-deg)."""
    shift = np.where(np.abs(z) > 1, exps[-1], 0.0)
    with np.errstate(all="ignore"):
        logz = np.log(z)
        pw = np.exp(logz[:, None] * (exps[None, :] - shift[:, None]))
        val = pw @ coefs
        dval = (pw * (coefs * exps)[None, :]).sum(axis=1) / z
        return val / dval


def _initial_guesses(d: int, inner: tuple[float, int, float] | None, outer_radius: float) -> np.ndarray:
    """Points on two circles: ``inner = (radius, count, half_angle)`` plus the rest on ``outer_radius``."""
    pts = []
    k = 0
    if inner is not None:
        r_in, k, half = inner
        k = min(k, d)
        if k:
            ang = np.linspace(-half, half, k + 2)[1:-1] + 0.37 / max(d, 1)
            pts.append(r_in * np.exp(1j * ang))
    rest = d - k
    if rest:
        ang = 2 * np.pi * (np.arange(rest) + 0.25) / rest + 0.4
        pts.append(outer_radius * np.exp(1j * ang))
    return np.concatenate(pts)


def aberth_double(f: IntPoly, z0: np.ndarray, maxiter: int = 800, tol: float = 4e-15, chunk: int = 1024) -> tuple[np.ndarray, bool]:
    """Aberth-Ehrlich iteration for sparse f with nonzero constant term."""
    exps = np.array([e for e, _ in f.terms], dtype=float)
    coefs = np.array([float(c) for _, c in f.terms])
    z = z0.astype(complex).copy()
    d = len(z)
    active = np.ones(d, dtype=bool)
    for _ in range(maxiter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            return z, True
        for lo in range(0, idx.size, chunk):
            sub = idx[lo : lo + chunk]
            za = z[sub]
            diff = za[:, None] - z[None, :]
            diff[np.arange(sub.size), sub] = np.inf
            with np.errstate(all="ignore"):
                sigma = (1.0 / diff).sum(axis=1)
                ratio = _newton_ratio(za, exps, coefs)
                w = ratio / (1.0 - ratio * sigma)
            bad = ~np.isfinite(w)
            w[bad] = 1e-3 * (1 + 1j)
            z[sub] = za - w
            active[sub] = np.abs(w) > tol * np.maximum(1.0, np.abs(za))
    return z, not active.any()


# ---------------------------------------------------------------------------
# multiprecision polishing and inclusion disks


def _newton_mp(terms, z, prec: int, maxit: int = 60):
    dterms = [(e - 1, c * e) for e, c in terms if e]
    with mpmath.workprec(prec + 16):
        z = mpmath.mpc(z)
        eps = mpmath.ldexp(1, -prec)
        for _ in range(maxit):
            v = mpmath.fsum(c * z**e for e, c in terms)
            dv = mpmath.fsum(c * z**e for e, c in dterms)
            if dv == 0:
                break
            step = v / dv
            z -= step
            if abs(step) <= eps * max(1, abs(z)):
                break
    return z


def _log_separation(zd: np.ndarray, chunk: int = 1024) -> np.ndarray:
    """Lower bound of log prod_{j != i} |z_i - z_j| for the exact centers.

    ``zd`` are the centers rounded to double; each difference is shrunk by
    the rounding of both endpoints before taking logs.  Returns -inf when a
    difference cannot be bounded away from zero.
    """
    d = zd.size
    out = np.empty(d)
    mag = np.abs(zd)
    for lo in range(0, d, chunk):
        hi = min(d, lo + chunk)
        diff = np.abs(zd[lo:hi, None] - zd[None, :])
        slack = 2.3e-16 * (mag[lo:hi, None] + mag[None, :])
        lb = diff * (1 - 2.3e-16) - slack
        lb[np.arange(hi - lo), np.arange(lo, hi)] = 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.where(lb > 0, np.log(np.maximum(lb, 1e-300)), -np.inf)
        out[lo:hi] = logs.sum(axis=1)
    return out - 1e-13 * d - 1e-12 * np.abs(out)


def _cluster_radii(zd: np.ndarray, rad: np.ndarray) -> np.ndarray:
    """Inflate disk radii so each covers its whole connected component."""
    d = zd.size
    order = np.argsort(zd.real)
    parent = list(range(d))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    finite = np.isfinite(rad)
    if not finite.all():
        return np.full(d, np.inf)
    # sweep in real part; disks can only touch when real parts are within r_i + r_j
    rmax = rad.max()
    for a_pos, a in enumerate(order):
        for b in order[a_pos + 1 :]:
            if zd[b].real - zd[a].real > rad[a] + rmax:
                break
            if abs(zd[a] - zd[b]) <= rad[a] + rad[b]:
                parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for i in range(d):
        groups.setdefault(find(i), []).append(i)
    out = rad.copy()
    for members in groups.values():
        if len(members) == 1:
            continue
        for i in members:
            out[i] = max(abs(zd[i] - zd[c]) + rad[c] for c in members) * (1 + 1e-12)
    return out


def _certify(f: IntPoly, roots: list, prec: int) -> np.ndarray:
    d = len(roots)
    zd = np.array([complex(z) for z in roots])
    logsep = _log_separation(zd)
    lc = abs(f.lc)
    rad = np.empty(d)
    for i, z in enumerate(roots):
        v, err = eval_complex(f, z, prec)
        num = float(abs(v) + err) * (1 + 1e-12)
        if num == 0.0:
            rad[i] = 0.0
        elif not np.isfinite(logsep[i]):
            rad[i] = np.inf
        else:
            rad[i] = d * num / lc * math.exp(-logsep[i])
    return _cluster_radii(zd, rad)


def _class_b_inner_guess(f: IntPoly):
    try:
        g = classb.from_intpoly(f)
    except classb.ClassBError:
        return None
    n = g.n
    th = float(theta_n(n).value) if n >= 2 else 0.5
    return th, 1 + 2 * (n // 6), math.pi / 3


def all_roots(f: IntPoly, precision_bits: int = 128, max_bits: int = MAX_BITS) -> RootSet:
    """Certified approximations of all complex roots of f.

    Each root carries a radius r such that the disk of radius r around it
    contains a true root; overlapping disks are merged into clusters holding
    exactly as many roots as disks.  Precision doubles until every radius is
    below 2^(-bits/2).  An exact multiple root never separates, so it ends in
    :class:`RootCertificationError` carrying the last partial result.
    """
    if f.degree < 1:
        raise PolyDomainError("need deg f >= 1")
    v = f.valuation
    g = IntPoly(tuple((e - v, c) for e, c in f.terms)) if v else f
    zero_roots = [mpmath.mpc(0)] * v
    d = g.degree
    if d == 0:
        return RootSet(tuple(zero_roots), (0.0,) * v, f.degree, precision_bits)

    outer = (abs(g.coeff(0)) / abs(g.lc)) ** (1.0 / d)
    inner = _class_b_inner_guess(g)
    z0 = _initial_guesses(d, inner, outer)
    zd, _ = aberth_double(g, z0)

    prec = max(53, precision_bits)
    last = None
    while True:
        polished = [_newton_mp(g.terms, z, prec) for z in zd]
        rad = _certify(g, polished, prec)
        with mpmath.workprec(prec):
            polished = [+z for z in polished]
        last = RootSet(tuple(zero_roots + polished), (0.0,) * v + tuple(float(r) for r in rad), f.degree, prec)
        if np.all(rad < 2.0 ** (-prec / 2)):
            return last
        if prec >= max_bits:
            raise RootCertificationError(
                f"radii up to {float(np.max(rad)):.3g} at {prec} bits", partial=last
            )
        prec = min(max(2 * prec, 128), max_bits)
        zd = np.array([complex(z) for z in polished])


# ---------------------------------------------------------------------------
# θ_n and its expansion


@dataclass(frozen=True)
class ThetaN:
    n: int
    value: mpmath.mpf
    expansion: float | None
    tail: float | None
    pre_asymptotic: bool


def _root_in_unit_interval(terms, lo, hi, prec: int) -> mpmath.mpf:
    """Root of an increasing function on [lo, hi] given by sparse integer terms.

    Newton steps are kept inside a shrinking bisection bracket.
    """
    dterms = [(e - 1, c * e) for e, c in terms if e]
    with mpmath.workprec(prec + 20):
        a, b = mpmath.mpf(lo), mpmath.mpf(hi)
        fa = mpmath.fsum(c * a**e for e, c in terms)
        fb = mpmath.fsum(c * b**e for e, c in terms)
        if not (fa < 0 < fb):
            raise PolyDomainError("root not bracketed")
        x = (a + b) / 2
        eps = mpmath.ldexp(1, -prec)
        for _ in range(20 * prec):
            fx = mpmath.fsum(c * x**e for e, c in terms)
            if fx == 0:
                return +x
            if fx < 0:
                a = x
            else:
                b = x
            dfx = mpmath.fsum(c * x**e for e, c in dterms)
            nx = x - fx / dfx if dfx > 0 else (a + b) / 2
            if not (a < nx < b):
                nx = (a + b) / 2
            if abs(nx - x) <= eps or b - a <= eps:
                x = nx
                break
            x = nx
        return +x


def _prec_for_tol(tol: float) -> int:
    if tol <= 0:
        raise PolyDomainError("tol must be positive")
    return max(64, int(math.ceil(-math.log2(tol))) + 32)


def theta_n_asymptotic(n: int, full: bool = False) -> float:
    """D(θ_n): the simplified expansion, or the full one with ``full=True``."""
    if n <= math.e:
        raise PolyDomainError("expansion needs n >= 3 (log log n undefined or negative)")
    L = math.log(n)
    LL = math.log(L)
    if full:
        if n <= L:
            raise PolyDomainError("n too small for the full expansion")
        inner = LL - n * math.log1p(-L / n) - L
        return 1.0 - (L / n) * (1.0 - ((n - L) / (n * L + n - L)) * inner)
    return 1.0 - (L - LL + LL / L) / n


def tail_envelope(n: int, constant: float = 2.0) -> float:
    L = math.log(n)
    return constant / n * (math.log(L) / L) ** 2


def theta_n(n: int, tol: float = 1e-30) -> ThetaN:
    """Unique root of -1 + x + x^n in (0, 1)."""
    if n < 2:
        raise PolyDomainError("n must be >= 2")
    value = _theta_cached(n, _prec_for_tol(tol))
    if n >= 3:
        exp_ = theta_n_asymptotic(n)
        tail = float(value) - exp_
    else:
        exp_ = tail = None
    return ThetaN(n, value, exp_, tail, n < 16)


@lru_cache(maxsize=4096)
def _theta_cached(n: int, prec: int) -> mpmath.mpf:
    if n == 1:
        with mpmath.workprec(prec):
            return mpmath.mpf(1) / 2
    return _root_in_unit_interval(((0, -1), (1, 1), (n, 1)), 0, 1, prec)


def _theta_value(n: int, prec: int) -> mpmath.mpf:
    return _theta_cached(n, prec)


# ---------------------------------------------------------------------------
# κ and c_n


def _kappa_objective(y):
    t = mpmath.pi / y
    return (1 - mpmath.exp(-t)) / (2 * mpmath.exp(t) - 1)


@lru_cache(maxsize=1)
def _kappa_pair():
    with mpmath.workprec(128):
        a, b = mpmath.mpf("0.5"), mpmath.mpf(50)
        g = (mpmath.sqrt(5) - 1) / 2
        c, d = b - g * (b - a), a + g * (b - a)
        fc, fd = _kappa_objective(c), _kappa_objective(d)
        tol = mpmath.ldexp(1, -120)
        while b - a > tol * (abs(a) + abs(b)):
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - g * (b - a)
                fc = _kappa_objective(c)
            else:
                a, c, fc = c, d, fd
                d = a + g * (b - a)
                fd = _kappa_objective(d)
        y = (a + b) / 2
        return y, _kappa_objective(y)


def kappa() -> mpmath.mpf:
    """Maximum over y > 0 of (1 - e^(-π/y)) / (2 e^(π/y) - 1), by golden-section search."""
    return _kappa_pair()[1]


def kappa_argmax() -> mpmath.mpf:
    return _kappa_pair()[0]


def c_n(n: int, first_order: bool = False) -> float:
    """Lenticular threshold constant; -log κ, or -(1 + 1/n) log κ with ``first_order``."""
    if n < 3:
        raise PolyDomainError("c_n needs n >= 3")
    base = -float(mpmath.log(kappa()))
    return base * (1 + 1 / n) if first_order else base


# ---------------------------------------------------------------------------
# lenticulus


def trinomial_lenticulus_count(n: int) -> int:
    if n < 2:
        raise PolyDomainError("n must be >= 2")
    return 1 + 2 * (n // 6)


def expected_lenticulus_count(n: int) -> tuple[int, int]:
    if n < 3:
        raise PolyDomainError("n must be >= 3")
    center = 1 + (n // 6) // 3
    return center - 1, center + 1


@dataclass(frozen=True)
class Lenticulus:
    members: tuple
    member_index: tuple[int, ...]
    c_n_used: float
    threshold: float
    rule: str
    summit: mpmath.mpf
    expected_count_range: tuple[int, int]
    strict_count: int
    gap: tuple[float, float]
    example_mode: bool

    @property
    def count(self) -> int:
        return len(self.members)

    @property
    def gap_width(self) -> float:
        return self.gap[0] - self.gap[1]


def sector_roots(rs: RootSet) -> list[int]:
    """Indices of roots with |z| < 1 and |arg z| <= π/18."""
    zs = rs.as_complex()
    return [i for i, z in enumerate(zs) if abs(z) < 1 and abs(np.angle(z)) <= SECTOR]


def lenticulus(f: ClassBPoly, rs: RootSet, rule: str = "gap", first_order: bool = False) -> Lenticulus:
    """Lenticular roots of f.

    ``rule="threshold"`` keeps sector roots with 1 - |z| >= c_n/n.
    ``rule="gap"`` (default) ranks the sector roots by n(1 - |z|), appends a
    sentinel 0, and cuts at the widest drop between consecutive values; the
    c_n/n count is still reported as ``strict_count``.
    """
    if rule not in ("gap", "threshold"):
        raise ValueError(f"unknown rule {rule!r}")
    n = f.n
    cn = c_n(max(n, 3), first_order)
    thr = cn / n
    zs = rs.as_complex()
    idx = sector_roots(rs)
    scaled = {i: n * (1 - abs(zs[i])) for i in idx}
    strict = [i for i in idx if 1 - abs(zs[i]) >= thr]
    for i in idx:
        if abs((1 - abs(zs[i])) - thr) <= rs.radii[i]:
            if rule == "threshold":
                raise ThresholdAmbiguous(f"root {zs[i]} within {rs.radii[i]:.3g} of the threshold")
    ranked = sorted(idx, key=lambda i: -scaled[i])
    vals = [scaled[i] for i in ranked] + [0.0]
    if rule == "threshold":
        chosen = strict
        above = [scaled[i] for i in chosen]
        below = [scaled[i] for i in idx if i not in set(chosen)]
        gap = (min(above, default=float("nan")), max(below, default=0.0))
        eff = thr
    else:
        drops = [vals[k] - vals[k + 1] for k in range(len(ranked))]
        if not drops:
            chosen, gap = [], (float("nan"), 0.0)
        else:
            k = int(np.argmax(drops))
            chosen = ranked[: k + 1]
            gap = (vals[k], vals[k + 1])
            worst = max(rs.radii[i] for i in ranked[: k + 2] if i in scaled) if len(ranked) else 0.0
            if gap[0] - gap[1] <= 2 * n * worst:
                raise ThresholdAmbiguous("gap narrower than the root error radii")
        eff = thr
    chosen = sorted(chosen, key=lambda i: (abs(np.angle(zs[i])), np.angle(zs[i])))
    summit = _summit(f)
    return Lenticulus(
        members=tuple(rs.roots[i] for i in chosen),
        member_index=tuple(chosen),
        c_n_used=cn,
        threshold=eff,
        rule=rule,
        summit=summit,
        expected_count_range=expected_lenticulus_count(max(n, 3)),
        strict_count=len(strict),
        gap=(float(gap[0]), float(gap[1])),
        example_mode=n < 260,
    )


def _summit(f: ClassBPoly) -> mpmath.mpf:
    if not f.s:
        return _theta_value(f.n, 132)
    with mpmath.workprec(132):
        return 1 / beta_of(f, precision_bits=132)


# ---------------------------------------------------------------------------
# β and the annulus bounds


def beta_of(f: ClassBPoly, tol: float = 1e-30, precision_bits: int | None = None) -> mpmath.mpf:
    """β > 1 with 1/β the unique root of f in (0, 1), bracket-checked against θ_{n-1}, θ_n.

    ``precision_bits`` overrides the working precision derived from ``tol``.
    The gaps 1/β - θ_{n-1} and θ_n - 1/β can be as small as roughly
    θ_{n-1}^deg, so when the strict bracket is not resolved the computation is
    repeated once at a precision large enough to separate it.
    """
    prec = precision_bits or _prec_for_tol(tol)
    if f.s == 0:
        with mpmath.workprec(prec):
            return 1 / _theta_value(f.n, prec)
    terms = f.to_intpoly().terms
    sep = int(math.ceil(f.degree * -math.log2(float(_theta_value(f.n - 1, 64))))) + 64
    for p in (prec, max(prec, sep)):
        r = _root_in_unit_interval(terms, 0, 1, p)
        lo = _theta_value(f.n - 1, p)
        hi = _theta_value(f.n, p)
        if lo < r < hi:
            with mpmath.workprec(prec):
                return 1 / r
    raise BracketViolation(f"1/beta={mpmath.nstr(r, 15)} outside ({mpmath.nstr(lo, 15)}, {mpmath.nstr(hi, 15)})")


def annulus_bounds(n: int, s: int, m: Sequence[int], delta_n: float, method: str = "majorant") -> tuple[float, float]:
    """(e_inf, e_sup) bracketing the root r of sum_j r^(m_j) = delta_n.

    e_sup comes from the tangent line of Y at 1.  For s >= 2 the gap
    conditions give the majorant Y(u) <= u^(2n-1) (1 - u^((n-1)(s-1))) / (1 - u^(n-1)) + u^(m_s);
    ``method="majorant"`` returns its exact root in (0, 1), which is a true
    lower bound.  ``method="first_order"`` returns the closed form
    (1 - eps)^(1/(n-1)) from linearizing in H = u^(n-1), which is only an
    approximation and can exceed r.
    """
    if not 0 < delta_n < 1:
        raise PolyDomainError("delta_n must lie in (0, 1)")
    if s < 1 or len(m) != s:
        raise PolyDomainError("need s >= 1 exponents")
    if method not in ("majorant", "first_order"):
        raise ValueError(f"unknown method {method!r}")
    e_sup = 1.0 - (s - delta_n) / sum(m)
    if s == 1:
        # delta_n^(1/(2n-1)), by the same bisection as annulus_radius so ties compare equal
        return _increasing_root(lambda u: u ** (2 * n - 1), delta_n), e_sup
    ms = m[-1]
    if method == "first_order":
        eps = 2.0 * (n * s - delta_n * n + delta_n - s) / (n * s * s + n * s - s * s + 2 * ms - 2 * n - s)
        if eps >= 1:
            raise PolyDomainError("first-order epsilon >= 1; bound is void")
        return (1.0 - eps) ** (1.0 / (n - 1)), e_sup

    def majorant(u: float) -> float:
        h = u ** (n - 1)
        geo = float(s - 1) if h == 1 else (1 - h ** (s - 1)) / (1 - h)
        return u ** (2 * n - 1) * geo + u**ms

    return _increasing_root(majorant, delta_n), e_sup


def _increasing_root(g, target: float) -> float:
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if g(mid) < target:
            lo = mid
        else:
            hi = mid
    return lo


def annulus_radius(m: Sequence[int], delta_n: float) -> float:
    """The true r in (0, 1) with sum_j r^(m_j) = delta_n (bisection)."""
    return _increasing_root(lambda u: sum(u**e for e in m), delta_n)


@dataclass(frozen=True)
class Thickness:
    delta: float
    summit_distance: float


def thickness_measure(f: ClassBPoly, rs: RootSet, lent: Lenticulus) -> Thickness:
    """Max of 1 - |z| over non-lenticular roots inside the unit disk, and 1 - 1/β."""
    members = set(lent.member_index)
    zs = rs.as_complex()
    inside = [1 - abs(z) for i, z in enumerate(zs) if i not in members and abs(z) < 1]
    return Thickness(max(inside, default=0.0), float(1 - lent.summit))


# ---------------------------------------------------------------------------
# locus export


@dataclass(frozen=True)
class LocusPoint:
    n: int
    rank: int
    arg: float
    modulus: float
    poly: str


def lenticular_locus_curves(
    n_values: Iterable[int],
    cfg: SamplerConfig | None = None,
    ranks: int = 3,
    trinomials: bool = False,
    precision_bits: int = 64,
) -> list[LocusPoint]:
    """Upper-half lenticular roots by rank (rank 1 is the summit) for one f per n.

    With ``trinomials`` the companion G_n is used; otherwise f is drawn from
    B_n with degree cap max(cfg.n_max, 3n) by the sampler's gap loop.
    """
    out: list[LocusPoint] = []
    seed = cfg.seed if cfg is not None else 0
    for k, n in enumerate(n_values):
        if trinomials:
            f = classb.make(n, [])
        else:
            cap = max(cfg.n_max if cfg is not None else 0, 3 * n)
            f = classb.sample_in_bn(n, cap, classb.stream(seed, k))
        rs = all_roots(f.to_intpoly(), precision_bits)
        lent = lenticulus(f, rs)
        upper = [z for z in lent.members if complex(z).imag >= -1e-30]
        upper = sorted(upper, key=lambda z: abs(np.angle(complex(z))))
        for r, z in enumerate(upper[:ranks], start=1):
            zc = complex(z)
            out.append(LocusPoint(n, r, float(abs(np.angle(zc))), abs(zc), str(f)))
    return out
