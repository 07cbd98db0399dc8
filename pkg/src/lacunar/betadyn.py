"""β-transformation orbits and the Parry-function view of class B.

For 1 < β < 2 the map T(x) = βx - ⌊βx⌋ produces the Rényi digits
t_i = ⌊β T^(i-1)(1)⌋ of 1.  When 1/β is the real root of f in B the expansion
is finite and its digits are the coefficients of f + 1.  Orbits are run in
fixed multiprecision with a running error bound, so any digit whose value
is not certified is reported instead of guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .classb import ClassBPoly
from .rootgeom import beta_of


class DigitUncertain(RuntimeError):
    def __init__(self, index: int, prefix: tuple[int, ...]):
        super().__init__(f"digit {index} is within the error band of a discontinuity")
        self.index = index
        self.prefix = prefix


@dataclass(frozen=True)
class BetaExpansion:
    beta: mpmath.mpf
    digits: tuple[int, ...]
    orbit: tuple
    orbit_err: tuple
    precision_bits: int
    terminated_at: int | None
    assumed_termination: bool

    def digit_string(self) -> str:
        return "".join(map(str, self.digits))


def orbit_precision(beta, k: int) -> int:
    return 64 + k * math.ceil(math.log2(float(beta)) + 2)


def beta_orbit(beta, k: int, precision_bits: int | None = None, beta_err=0, boundary: str = "terminal") -> BetaExpansion:
    """First k digits and orbit points of 1 under T(x) = βx mod 1.

    ``beta_err`` bounds the error of ``beta`` itself.  A digit is certified
    when βx stays more than four error bounds away from an integer.  An
    uncertain step is handled by ``boundary``: ``"raise"`` always raises
    :class:`DigitUncertain`; ``"terminal"`` (default) accepts it only at step
    k, read as the orbit landing exactly on 0; ``"terminate"`` accepts it at
    any step.  Accepted terminations set ``assumed_termination``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if boundary not in ("raise", "terminal", "terminate"):
        raise ValueError(f"unknown boundary policy {boundary!r}")
    need = orbit_precision(beta, k)
    prec = max(need, precision_bits or 0)
    with mpmath.workprec(prec):
        b = mpmath.mpf(beta)
        if b <= 1:
            raise ValueError("beta must exceed 1")
        eb = mpmath.mpf(beta_err)
        u = mpmath.ldexp(1, 1 - prec)
        x, ex = mpmath.mpf(1), mpmath.mpf(0)
        digits, orbit, errs = [], [x], [ex]
        term_at, assumed = None, False
        for i in range(1, k + 1):
            if term_at is not None:
                digits.append(0)
                orbit.append(mpmath.mpf(0))
                errs.append(mpmath.mpf(0))
                continue
            y = b * x
            ey = b * ex + x * eb + abs(y) * u
            t = int(mpmath.floor(y))
            frac = y - t
            near = min(frac, 1 - frac)
            if near <= 4 * ey:
                ok = boundary == "terminate" or (boundary == "terminal" and i == k)
                if not ok:
                    raise DigitUncertain(i, tuple(digits))
                t = int(mpmath.nint(y))
                digits.append(t)
                orbit.append(mpmath.mpf(0))
                errs.append(mpmath.mpf(0))
                term_at, assumed = i, True
                continue
            x = frac
            ex = ey + abs(x) * u
            digits.append(t)
            orbit.append(x)
            errs.append(ex)
        return BetaExpansion(b, tuple(digits), tuple(orbit), tuple(errs), prec, term_at, assumed)


def digits_of_classb(f: ClassBPoly) -> str:
    """The digit string 1 0^(n-2) 1 0^(m_1-n-1) 1 ... of length deg f."""
    ones = {1, f.n, *f.exps}
    return "".join("1" if i in ones else "0" for i in range(1, f.degree + 1))


def trinomial_digits(n: int) -> str:
    return "1" + "0" * (n - 2) + "1"


def _lex_le(a: str, b: str) -> bool:
    """a ≼ b for finite digit strings padded with zeros."""
    w = max(len(a), len(b))
    return a.ljust(w, "0") <= b.ljust(w, "0")


def is_parry_admissible(d: str) -> bool:
    """Every proper shift of d is lexicographically below d (zero padded)."""
    for j in range(1, len(d)):
        if d[j] == "1" and d[j:].ljust(len(d), "0") >= d:
            return False
    return True


def lex_bracket_check(f: ClassBPoly) -> bool:
    """d_{θ_n^-1}(1) ≼ digits(f) ≼ d_{θ_{n-1}^-1}(1) and the digits are Parry admissible."""
    d = digits_of_classb(f)
    lower = trinomial_digits(f.n)
    # θ_1 = 1/2, and the expansion of 1 in base 2 is the single digit 2
    upper = trinomial_digits(f.n - 1) if f.n >= 3 else "2"
    return _lex_le(lower, d) and _lex_le(d, upper) and is_parry_admissible(d)


def classb_expansion(f: ClassBPoly, precision_bits: int | None = None) -> BetaExpansion:
    """Orbit of 1 under β of f, out to deg f, with β computed to matching precision."""
    k = f.degree
    prec = max(orbit_precision(2, k), precision_bits or 0)
    beta = beta_of(f, precision_bits=prec - 8)
    return beta_orbit(beta, k, prec, beta_err=mpmath.ldexp(1, -(prec - 42)))


def series_factorization_check(f: ClassBPoly, K: int | None = None, precision_bits: int = 256) -> float:
    """Max over degrees <= min(K, deg f) of |[-(1 - βx)(1 + Σ T^i(1) x^i)]_i - a_i(f)|."""
    K = f.degree if K is None else K
    if K < f.degree:
        raise ValueError("K must be >= deg f")
    exp = classb_expansion(f, precision_bits)
    coeffs = dict(f.to_intpoly().terms)
    with mpmath.workprec(exp.precision_bits):
        b = exp.beta
        orbit = list(exp.orbit)
        worst = abs(-orbit[0] - coeffs.get(0, 0))
        for i in range(1, min(K, f.degree) + 1):
            c = b * orbit[i - 1] - orbit[i]
            worst = max(worst, abs(c - coeffs.get(i, 0)))
        return float(worst)
