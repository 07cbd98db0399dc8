"""Exact arithmetic on sparse integer polynomials.

Polynomials are stored as a tuple of ``(exponent, coefficient)`` pairs with
strictly increasing exponents and no zero coefficients.  Class-B inputs have a
handful of terms but degrees in the thousands, so everything that can stay
sparse does; gcd and division kernels switch to dense arrays internally.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence

import mpmath
import numpy as np


class PolyDomainError(ValueError):
    """Raised when an operation is called outside its mathematical domain."""


class InexactDivision(ArithmeticError):
    """Raised by :func:`divexact` when the divisor does not divide exactly."""


class BadPrime(ValueError):
    """Raised when a prime divides the leading coefficient."""


@dataclass(frozen=True)
class IntPoly:
    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        last = -1
        for e, c in self.terms:
            if e <= last or c == 0:
                raise ValueError(f"malformed term list: {self.terms!r}")
            last = e

    # -- construction -----------------------------------------------------
    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "IntPoly":
        return cls(tuple((e, c) for e, c in sorted(d.items()) if c != 0))

    @classmethod
    def from_dense(cls, coeffs: Sequence[int]) -> "IntPoly":
        """Build from ascending coefficient list ``[a_0, a_1, ...]``."""
        return cls(tuple((i, int(c)) for i, c in enumerate(coeffs) if c != 0))

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> "IntPoly":
        return cls(((e, c),)) if c else cls()

    @classmethod
    def one(cls) -> "IntPoly":
        return cls(((0, 1),))

    # -- basic properties --------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        if not self.terms:
            return -1
        return self.terms[-1][0]

    @property
    def valuation(self) -> int:
        if not self.terms:
            return -1
        return self.terms[0][0]

    @property
    def lc(self) -> int:
        return self.terms[-1][1] if self.terms else 0

    @property
    def content(self) -> int:
        return reduce(math.gcd, (abs(c) for _, c in self.terms), 0)

    def coeff(self, e: int) -> int:
        for ee, c in self.terms:
            if ee == e:
                return c
            if ee > e:
                break
        return 0

    def __len__(self) -> int:
        return len(self.terms)

    def to_dense(self) -> list[int]:
        out = [0] * (self.degree + 1)
        for e, c in self.terms:
            out[e] = c
        return out

    def __call__(self, x: int) -> int:
        return sum(c * x**e for e, c in self.terms)

    # -- ring operations -----------------------------------------------------
    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple((e, -c) for e, c in self.terms))

    def __add__(self, other: "IntPoly") -> "IntPoly":
        d = dict(self.terms)
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return IntPoly.from_dict(d)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly | int") -> "IntPoly":
        if isinstance(other, int):
            if other == 0:
                return IntPoly()
            return IntPoly(tuple((e, c * other) for e, c in self.terms))
        if not self.terms or not other.terms:
            return IntPoly()
        if len(self) * len(other) <= 4096:
            d: dict[int, int] = {}
            for e1, c1 in self.terms:
                for e2, c2 in other.terms:
                    d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
            return IntPoly.from_dict(d)
        return IntPoly.from_dense(_kronecker_mul(self.to_dense(), other.to_dense()))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPoly":
        out = IntPoly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "IntPoly":
        """Multiply by ``x**k``; negative ``k`` divides out a power of ``x``."""
        if k < 0 and self.terms and self.valuation < -k:
            raise PolyDomainError("shift would create negative exponents")
        return IntPoly(tuple((e + k, c) for e, c in self.terms))

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple((e - 1, e * c) for e, c in self.terms if e > 0))

    def primitive(self) -> "IntPoly":
        """Primitive part with positive leading coefficient."""
        if not self.terms:
            return self
        g = self.content
        if self.lc < 0:
            g = -g
        return IntPoly(tuple((e, c // g) for e, c in self.terms))

    # -- text / json -----------------------------------------------------------
    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"IntPoly({to_text(self)!r})"


def _kronecker_mul(a: list[int], b: list[int]) -> list[int]:
    """Dense product via Kronecker substitution into one big integer."""
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    bits = bound.bit_length() + 2
    half = 1 << (bits - 1)
    mask = (1 << bits) - 1

    def pack(v):
        acc = 0
        for c in reversed(v):
            acc = (acc << bits) + c
        return acc

    prod = pack(a) * pack(b)
    out = []
    for _ in range(len(a) + len(b) - 1):
        c = prod & mask
        if c >= half:
            c -= 1 << bits
        out.append(c)
        prod = (prod - c) >> bits
    return out


# ---------------------------------------------------------------------------
# canonical text and JSON forms

_TERM_RE = re.compile(r"^([+-]?\d+)(?:\*x(?:\^(\d+))?)?$")


def to_text(f: IntPoly) -> str:
    if f.is_zero:
        return "0"
    parts = []
    for e, c in f.terms:
        mono = f"{abs(c)}*x^{e}"
        if not parts:
            parts.append(("-" if c < 0 else "") + mono)
        else:
            parts.append(("- " if c < 0 else "+ ") + mono)
    return " ".join(parts)


def from_text(s: str) -> IntPoly:
    """Parse ``c0*x^e0 + c1*x^e1 + ...`` (also accepts bare constants and ``c*x``)."""
    s = s.replace(" ", "")
    if s in ("", "0"):
        return IntPoly()
    s = re.sub(r"(?<=[^+\-^])-", "+-", s)
    d: dict[int, int] = {}
    for tok in s.split("+"):
        if not tok:
            continue
        m = _TERM_RE.match(tok)
        if m is None:
            raise ValueError(f"cannot parse term {tok!r}")
        c = int(m.group(1))
        if "*x" in tok:
            e = int(m.group(2)) if m.group(2) is not None else 1
        else:
            e = 0
        d[e] = d.get(e, 0) + c
    return IntPoly.from_dict(d)


def to_json_obj(f: IntPoly) -> dict:
    return {"terms": [[e, str(c)] for e, c in f.terms]}


def from_json_obj(obj: dict) -> IntPoly:
    return IntPoly(tuple((int(e), int(c)) for e, c in obj["terms"]))


def dumps(f: IntPoly) -> str:
    return json.dumps(to_json_obj(f))


def loads(s: str) -> IntPoly:
    return from_json_obj(json.loads(s))


# ---------------------------------------------------------------------------
# structural operations


def reciprocal(f: IntPoly) -> IntPoly:
    """``x**deg(f) * f(1/x)``."""
    if f.is_zero:
        raise PolyDomainError("reciprocal of the zero polynomial")
    d = f.degree
    return IntPoly(tuple((d - e, c) for e, c in reversed(f.terms)))


def is_reciprocal(f: IntPoly) -> bool:
    """True when ``f == ±f*`` (and ``f(0) != 0``)."""
    if f.is_zero or f.valuation != 0:
        return False
    r = reciprocal(f)
    return r == f or r == -f


def euclid_norm_sq(f: IntPoly) -> int:
    return sum(c * c for _, c in f.terms)


def divmod_poly(f: IntPoly, g: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Division over the integers; requires each step to divide exactly by lc(g).

    Raises :class:`InexactDivision` if a quotient coefficient is not integral.
    """
    if g.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    dg = g.degree
    lg = g.lc
    rem = f.to_dense() if not f.is_zero else []
    lower = [(e, c) for e, c in g.terms[:-1]]
    q: dict[int, int] = {}
    for top in range(len(rem) - 1, dg - 1, -1):
        c = rem[top]
        if c == 0:
            continue
        k, r = divmod(c, lg)
        if r:
            raise InexactDivision(f"non-integral quotient coefficient {c}/{lg}")
        shift = top - dg
        q[shift] = k
        rem[top] = 0
        for e, gc in lower:
            rem[e + shift] -= k * gc
    return IntPoly.from_dict(q), IntPoly.from_dense(rem[:dg] if dg > 0 else [])


def divexact(f: IntPoly, g: IntPoly) -> IntPoly:
    q, r = divmod_poly(f, g)
    if not r.is_zero:
        raise InexactDivision(f"{g} does not divide {f}")
    return q


def divides(g: IntPoly, f: IntPoly) -> bool:
    try:
        _, r = divmod_poly(f, g)
    except InexactDivision:
        return False
    return r.is_zero


# ---------------------------------------------------------------------------
# modular gcd

# Primes just below 2**31 keep every product of two residues inside int64.
_GCD_PRIMES_START = 2**31 - 1


def _prev_prime(n: int) -> int:
    n -= 1
    while not _is_prime(n):
        n -= 1
    return n


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _gcd_prime_stream():
    p = _GCD_PRIMES_START + 1
    while True:
        p = _prev_prime(p)
        yield p


def _to_modp(f: IntPoly, p: int) -> np.ndarray:
    """Dense descending int64 array of ``f mod p`` (leading zeros stripped)."""
    arr = np.zeros(f.degree + 1, dtype=np.int64)
    d = f.degree
    for e, c in f.terms:
        arr[d - e] = c % p
    return _strip(arr)


def _strip(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    if nz.size == 0:
        return a[:0]
    return a[nz[0]:]


def _rem_modp(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    db = len(b)
    if len(a) < db:
        return a
    a = a.copy()
    inv = pow(int(b[0]), p - 2, p)
    bb = b
    for i in range(len(a) - db + 1):
        c = int(a[i])
        if c:
            k = c * inv % p
            a[i:i + db] = (a[i:i + db] - k * bb) % p
    return _strip(a[len(a) - db + 1:])


def _monic_modp(a: np.ndarray, p: int) -> np.ndarray:
    inv = pow(int(a[0]), p - 2, p)
    return a * inv % p


def gcd_modp(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Monic gcd of two descending int64 residue arrays."""
    a, b = _strip(a % p), _strip(b % p)
    while b.size:
        a, b = b, _rem_modp(a, b, p)
    if a.size == 0:
        return a
    return _monic_modp(a, p)


def _symmetric(v: int, m: int) -> int:
    v %= m
    return v - m if v > m // 2 else v


def gcd_primitive(f: IntPoly, g: IntPoly) -> IntPoly:
    """Primitive gcd over Z with positive leading coefficient.

    Multi-prime modular algorithm: gcds modulo word-size primes are combined
    by CRT; a candidate is accepted once it has the modular degree and
    divides both inputs exactly.
    """
    if f.is_zero and g.is_zero:
        raise PolyDomainError("gcd(0, 0) is undefined")
    if f.is_zero:
        return g.primitive()
    if g.is_zero:
        return f.primitive()
    v = min(f.valuation, g.valuation)
    fp = f.shift(-f.valuation).primitive()
    gp = g.shift(-g.valuation).primitive()
    if fp.degree == 0 or gp.degree == 0:
        return IntPoly.monomial(v)
    h = math.gcd(fp.lc, gp.lc)
    best_deg = min(fp.degree, gp.degree) + 1
    acc: list[int] = []
    modulus = 1
    for p in _gcd_prime_stream():
        if fp.lc % p == 0 or gp.lc % p == 0:
            continue
        gm = gcd_modp(_to_modp(fp, p), _to_modp(gp, p), p)
        dg = len(gm) - 1
        if dg > best_deg:
            continue  # unlucky prime
        if dg == 0:
            return IntPoly.monomial(v)
        img = [int(c) * h % p for c in gm[::-1]]  # ascending
        if dg < best_deg:
            best_deg, acc, modulus = dg, img, p
        else:
            acc = _crt_vec(acc, modulus, img, p)
            modulus *= p
        cand = IntPoly.from_dense([_symmetric(c, modulus) for c in acc]).primitive()
        if cand.degree == dg and divides(cand, fp) and divides(cand, gp):
            return cand.shift(v)
    raise AssertionError("unreachable")


def _crt_vec(a: list[int], m: int, b: list[int], p: int) -> list[int]:
    inv = pow(m, -1, p)
    out = []
    for x, y in zip(a, b):
        t = (y - x) * inv % p
        out.append(x + m * t)
    return out


# ---------------------------------------------------------------------------
# cyclotomic polynomials


@lru_cache(maxsize=4096)
def cyclotomic(m: int) -> IntPoly:
    """m-th cyclotomic polynomial: ``x^m - 1`` divided by Φ_d for proper divisors d."""
    if m < 1:
        raise PolyDomainError("cyclotomic index must be >= 1")
    q = IntPoly(((0, -1), (m, 1)))
    for d in divisors(m)[:-1]:
        q = divexact(q, cyclotomic(d))
    return q


def divisors(m: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= m:
        if m % i == 0:
            small.append(i)
            if i * i != m:
                large.append(m // i)
        i += 1
    return small + large[::-1]


def totient(m: int) -> int:
    out, k, p = m, m, 2
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            out -= out // p
        p += 1
    if k > 1:
        out -= out // k
    return out


def fold_exponents(f: IntPoly, m: int) -> IntPoly:
    """Reduce f modulo ``x^m - 1``."""
    d: dict[int, int] = {}
    for e, c in f.terms:
        d[e % m] = d.get(e % m, 0) + c
    return IntPoly.from_dict(d)


def divides_cyclotomic(f: IntPoly, m: int) -> bool:
    """True iff Φ_m divides f, via exponent folding then an exact remainder."""
    if m < 1:
        raise PolyDomainError("cyclotomic index must be >= 1")
    if f.is_zero:
        return True
    phi = cyclotomic(m)
    if phi.degree > f.degree:
        return False
    g = fold_exponents(f, m)
    if g.is_zero:
        return True
    _, r = divmod_poly(g, phi)  # Φ_m is monic, so this never raises
    return r.is_zero


# ---------------------------------------------------------------------------
# multiprecision evaluation with a running error bound


def eval_complex(f: IntPoly, z, precision_bits: int = 128):
    """Evaluate f at z by sparse Horner; returns ``(value, error_bound)``.

    ``z`` is taken as exact.  The bound accounts for the binary powering of
    each gap, the multiply and the add at every Horner step, with a unit
    roundoff ``u = 2^(1-prec)`` and a complex-multiply factor of 4u.
    """
    if precision_bits < 53:
        raise PolyDomainError("precision_bits must be >= 53")
    with mpmath.workprec(precision_bits):
        z = mpmath.mpc(z)
        if f.is_zero:
            return mpmath.mpc(0), mpmath.mpf(0)
        u = mpmath.ldexp(1, 1 - precision_bits)
        cmul = 4 * u
        terms = f.terms
        acc = mpmath.mpc(terms[-1][1])
        err = mpmath.mpf(0)
        az = abs(z)
        for i in range(len(terms) - 2, -2, -1):
            e_hi = terms[i + 1][0]
            e_lo = terms[i][0] if i >= 0 else 0
            gap = e_hi - e_lo
            if gap:
                w = z**gap
                nmul = 2 * max(gap.bit_length(), 1)
                rho = (1 + cmul) ** nmul - 1
                abs_w = az**gap * (1 + rho)
                prod = acc * w
                err = err * abs_w + abs(acc) * abs_w * (rho + cmul) + abs(prod) * cmul
                acc = prod
            if i >= 0:
                acc = acc + terms[i][1]
                err = err + abs(acc) * 2 * u
        err = err * (1 + mpmath.ldexp(1, -20))
        return acc, err


# ---------------------------------------------------------------------------
# factor-degree profiles modulo a prime


@dataclass(frozen=True)
class DegreeProfile:
    prime: int
    degrees: tuple[int, ...]
    squarefree_mod_p: bool


def _poly_mulmod(a: np.ndarray, b: np.ndarray, red: np.ndarray, d: int, p: int) -> np.ndarray:
    """a*b mod f for ascending residue arrays of length d.

    ``red`` holds the ascending images of ``x^(d+j)`` mod f, one per row.
    """
    prod = np.convolve(a, b) % p
    low = prod[:d].copy()
    high = prod[d:]
    if high.size:
        low = (low + (high @ red[: high.size]) % p) % p
    return low


def _reduction_table(f_asc: np.ndarray, p: int) -> np.ndarray:
    d = len(f_asc) - 1
    inv = pow(int(f_asc[-1]), p - 2, p)
    mon = (-f_asc[:d] * inv) % p  # x^d ≡ mon
    rows = np.zeros((max(d - 1, 1), d), dtype=np.int64)
    cur = mon.copy()
    for j in range(d - 1):
        rows[j] = cur
        top = cur[-1]
        cur = np.concatenate(([0], cur[:-1]))
        if top:
            cur = (cur + top * mon) % p
    return rows


def _asc_to_desc(a: np.ndarray) -> np.ndarray:
    return _strip(a[::-1].copy())


def _desc_to_asc(a: np.ndarray, d: int) -> np.ndarray:
    out = np.zeros(d, dtype=np.int64)
    out[: len(a)] = a[::-1]
    return out


def _div_modp(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact quotient a/b for descending residue arrays."""
    a = a.copy()
    db = len(b)
    nq = len(a) - db + 1
    q = np.zeros(max(nq, 0), dtype=np.int64)
    inv = pow(int(b[0]), p - 2, p)
    for i in range(nq):
        c = int(a[i])
        if c:
            k = c * inv % p
            q[i] = k
            a[i:i + db] = (a[i:i + db] - k * b) % p
    return q


def _deriv_desc(a: np.ndarray, p: int) -> np.ndarray:
    d = len(a) - 1
    if d <= 0:
        return a[:0]
    exps = np.arange(d, 0, -1, dtype=np.int64)
    return _strip((a[:-1] * exps) % p)


def degree_profile_mod_p(f: IntPoly, p: int) -> DegreeProfile:
    """Factor degrees of the squarefree part of f mod p (distinct-degree factorization)."""
    if p < 2 or not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if f.is_zero or f.lc % p == 0:
        raise BadPrime(f"bad prime {p}: divides the leading coefficient")
    if (p - 1) ** 2 * (f.degree + 1) >= 2**63:
        raise ValueError("prime too large for int64 residue products at this degree")
    fd = _to_modp(f, p)
    degrees: list[int] = []
    squarefree = True
    val = int(np.flatnonzero(fd[::-1])[0])
    if val:
        degrees.append(1)
        squarefree = val == 1
        fd = fd[: len(fd) - val]
    if len(fd) > 1:
        df = _deriv_desc(fd, p)
        if df.size == 0:
            raise ValueError(f"reduction mod {p} is a p-th power; squarefree part not computed")
        g = gcd_modp(fd, df, p)
        if len(g) > 1:
            squarefree = False
            fd = _div_modp(fd, g, p)
        degrees.extend(_ddf(_monic_modp(fd, p), p))
    return DegreeProfile(p, tuple(sorted(degrees)), squarefree)


def _ddf(fd: np.ndarray, p: int) -> list[int]:
    """Distinct-degree factorization of a squarefree monic descending array."""
    out: list[int] = []
    d = len(fd) - 1
    f_asc = fd[::-1].copy()
    red = _reduction_table(f_asc, p)
    # Frobenius matrix rows: x^(p*i) mod f
    xp = _powmod_x(p, f_asc, red, d, p)
    frob = np.zeros((d, d), dtype=np.int64)
    row = np.zeros(d, dtype=np.int64)
    row[0] = 1
    for i in range(d):
        frob[i] = row
        row = _poly_mulmod(row, xp, red, d, p)
    x_asc = np.zeros(d, dtype=np.int64)
    if d > 1:
        x_asc[1] = 1
    else:
        x_asc[0] = (-f_asc[0]) % p
    h = x_asc.copy()
    rem = fd
    k = 0
    # blocks of consecutive k share one gcd against the product of (x^(p^k) - x)
    block = 16
    while len(rem) - 1 >= 2 * (k + 1):
        hs = []
        acc = None
        for _ in range(block):
            if len(rem) - 1 < 2 * (k + len(hs) + 1):
                break
            h = (h @ frob) % p
            diff = (h - x_asc) % p
            hs.append(diff)
            acc = diff if acc is None else _poly_mulmod(acc, diff, red, d, p)
        if not hs:
            break
        g = gcd_modp(rem, _asc_to_desc(acc), p)
        if len(g) > 1:
            for j, diff in enumerate(hs, start=k + 1):
                if len(g) <= 1:
                    break
                gj = gcd_modp(g, _asc_to_desc(diff), p)
                gd = len(gj) - 1
                if gd > 0:
                    out.extend([j] * (gd // j))
                    rem = _monic_modp(_div_modp(rem, gj, p), p)
                    g = _monic_modp(_div_modp(g, gj, p), p)
        k += len(hs)
    if len(rem) - 1 > 0:
        out.append(len(rem) - 1)
    return out


def _powmod_x(e: int, f_asc: np.ndarray, red: np.ndarray, d: int, p: int) -> np.ndarray:
    result = np.zeros(d, dtype=np.int64)
    result[0] = 1
    base = np.zeros(d, dtype=np.int64)
    if d > 1:
        base[1] = 1
    else:
        base[0] = (-f_asc[0]) % p
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, red, d, p)
        e >>= 1
        if e:
            base = _poly_mulmod(base, base, red, d, p)
    return result
