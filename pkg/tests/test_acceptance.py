"""End-to-end acceptance checks, one test per criterion.

Each test prints ``ACCEPTANCE <k> PASS|FAIL <detail>`` (visible in ``pytest -v``
output) before asserting.  Tolerances and sample sizes are the contractual
ones; nothing is relaxed here.  Select with ``pytest -m acceptance``.
"""

import subprocess
import sys
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from conftest import F1, F2, GOLDEN, N37, N81, N121, N481
from lacunar import betadyn, classb, factorize, mcstats, polycore, rootgeom
from lacunar.mcstats import McConfig

pytestmark = pytest.mark.acceptance

SEED = 0  # fixed before any run; never tuned


@pytest.fixture
def report(capsys):
    def emit(k: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {k:2d} {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return emit


def test_01_class_b_proportion(report):
    rep = mcstats.run_mc(McConfig("classB", n_max=3000, runs=4000, seed=SEED))
    ok = 0.726 <= rep.proportion <= 0.786 and rep.runtime_seconds <= 1800
    report(1, ok, f"p={rep.proportion:.4f} ci90=±{rep.ci90_half_width:.4f} in [0.726, 0.786], {rep.runtime_seconds:.0f}s")


def test_02_fixed_s_slices(report):
    r1 = mcstats.run_mc(McConfig("classB_s", n_max=3000, runs=4000, seed=SEED, s=1))
    r2 = mcstats.run_mc(McConfig("classB_s", n_max=3000, runs=4000, seed=SEED, s=2))
    ok = 0.545 <= r1.proportion <= 0.605 and 0.796 <= r2.proportion <= 0.856
    t = r1.runtime_seconds + r2.runtime_seconds
    ok = ok and t <= 1800
    report(2, ok, f"s=1 p={r1.proportion:.4f} in [0.545, 0.605]; s=2 p={r2.proportion:.4f} in [0.796, 0.856]; {t:.0f}s")


def test_03_trinomial_law(report):
    t0 = time.perf_counter()
    count, ok = 0, True
    for N in range(2, 10**6 + 1):
        count += N % 6 != 5
        q = mcstats.trinomial_proportion_exact(N)
        if q.numerator * (N - 1) != count * q.denominator:
            ok = False
            break
    big = mcstats.trinomial_proportion_exact(6 * 10**12 + 1)
    limit_ok = abs(big - Fraction(5, 6)) < Fraction(1, 10**12)
    dt = time.perf_counter() - t0
    single = time.perf_counter()
    mcstats.trinomial_proportion_exact(10**6)
    single = time.perf_counter() - single
    ok = ok and limit_ok and single < 1
    report(3, ok, f"Selmer count matched for all N <= 1e6 ({dt:.1f}s sweep, {single * 1e6:.0f}us per N); limit 5/6")


def test_04_golden_factorizations(report):
    t0 = time.perf_counter()
    s1, s2 = factorize.split_abc(F1), factorize.split_abc(F2)
    c1 = polycore.from_text("-1 + 2*x - 1*x^2 - 1*x^3 + 2*x^4 - 2*x^6 + 2*x^7 - 1*x^9 + 1*x^10 - 1*x^12 + 1*x^13")
    c2 = polycore.from_text("-1 + 1*x + 1*x^2 - 1*x^3 + 1*x^5 - 1*x^6 + 1*x^8 - 1*x^12 + 1*x^14")
    mills = classb.mills_special_factorization(1)
    x2p1 = polycore.from_text("1 + 1*x^2")
    b = polycore.from_text("-1 + 1*x^2 + 1*x^3")
    c = polycore.from_text("1 - 1*x + 1*x^3")
    ok = (
        s1.A == ((3, 1),)
        and s1.C_part == c1
        and s1.B_part == polycore.IntPoly.one()
        and s2.A == ((3, 1), (6, 1))
        and s2.C_part == c2
        and x2p1 * b * c == polycore.from_text("-1 + 1*x + 1*x^7 + 1*x^8")
        and mills.product == x2p1 * b * c
    )
    dt = time.perf_counter() - t0
    report(4, ok and dt < 1, f"f1 = Phi3*C1, f2 = Phi3*Phi6*C2, Mills r=1 identity; {dt * 1000:.0f}ms")


def test_05_lenticulus_counts(report):
    t0 = time.perf_counter()
    got = []
    bits = []
    for f in (N37, N81, N121, N481):
        rs = rootgeom.all_roots(f.to_intpoly(), 128, max_bits=512)
        got.append(rootgeom.lenticulus(f, rs).count)
        bits.append(rs.precision_bits)
    dt = time.perf_counter() - t0
    ok = got == [3, 5, 7, 27] and max(bits) <= 512 and dt <= 600
    report(5, ok, f"counts {got} (want [3, 5, 7, 27]) at bits {bits}, {dt:.1f}s")


def test_06_beta_bracket(report):
    beta = rootgeom.beta_of(N481)
    in_bracket = mpmath.mpf("1.00970357") < beta < mpmath.mpf("1.0097202")
    close = abs(beta - mpmath.mpf("1.0097168")) <= 1e-6
    violations = 0
    for i in range(1000):
        f = classb.sample_algorithm1(3000, classb.stream(SEED, i))
        if f.s == 0:
            f = classb.make(f.n, [2 * f.n - 1])
        try:
            rootgeom.beta_of(f)
        except rootgeom.BracketViolation:
            violations += 1
    ok = in_bracket and close and violations == 0
    report(6, ok, f"beta={mpmath.nstr(beta, 12)}, |beta-1.0097168|={float(abs(beta - mpmath.mpf('1.0097168'))):.1e}, violations {violations}/1000")


def test_07_theta_envelope(report):
    t0 = time.perf_counter()
    worst, worst_n = 0.0, None
    for n in range(100, 3001):
        th = rootgeom.theta_n(n, tol=1e-20)
        ratio = abs(th.tail) / rootgeom.tail_envelope(n, 2.0)
        if ratio > worst:
            worst, worst_n = ratio, n
    dt = time.perf_counter() - t0
    report(7, worst <= 1 and dt < 60, f"max |theta_n - D|/envelope = {worst:.3f} at n={worst_n}, {dt:.1f}s")


def test_08_constants(report):
    k = float(rootgeom.kappa())
    mlk = -float(mpmath.log(rootgeom.kappa()))
    ok = abs(k - 0.171573) <= 1e-6 and abs(mlk - 1.76274) <= 1e-5
    report(8, ok, f"kappa={k:.9f}, -log kappa={mlk:.8f}")


def test_09_cross_oracles(report):
    t0 = time.perf_counter()
    quad = mismatch = 0
    for n in range(2, 31):
        for m1 in range(2 * n - 1, 61):
            f = classb.make(n, [m1])
            gcd_irr = factorize.reciprocal_part(f.to_intpoly()).degree == 0
            quad += 1
            mismatch += gcd_irr != classb.finch_jones_irreducible(n, m1)
    tri_mismatch = 0
    for n in range(2, 1001):
        gcd_irr = factorize.reciprocal_part(classb.trinomial(n)).degree == 0
        tri_mismatch += gcd_irr != classb.selmer_classify(n).irreducible
    dt = time.perf_counter() - t0
    ok = mismatch == 0 and tri_mismatch == 0 and dt < 60
    report(9, ok, f"quadrinomials {quad - mismatch}/{quad}, trinomials {999 - tri_mismatch}/999, {dt:.1f}s")


def test_10_cyclotomic_suite(report):
    primes = [p for p in range(2, 51) if polycore._is_prime(p)]
    disagree = implication = 0
    for i in range(500):
        f = classb.sample_algorithm1(80, classb.stream(SEED + 1, i))
        fp = f.to_intpoly()
        for p in primes:
            boyd = factorize.boyd_divides(fp, p)
            disagree += boyd != polycore.divides_cyclotomic(fp, p)
            if boyd and f.s >= 1:
                implication += not factorize.phi_p_necessary(f.s, p)
    built = 0
    rng = classb.stream(SEED + 2)
    odd = [p for p in primes if p > 2]
    for i in range(200):
        p = odd[i % len(odd)]
        n = 2 + i % 23
        f = classb.construct_phi_p_multiple(p, n, rounds=i % 3, rng=rng)
        built += polycore.divides_cyclotomic(f.to_intpoly(), p)
    ok = disagree == 0 and implication == 0 and built == 200
    report(10, ok, f"boyd/exact disagreements {disagree}, p|(s+1) violations {implication}, constructions {built}/200")


def test_11_reciprocal_factor_bound(report):
    _, deg = factorize.reciprocal_factor_bounds(400, 0.95)
    rel = abs(deg - 121786) / 121786
    report(11, rel <= 1e-3, f"degree bound {deg:.1f} vs 121786 (rel {rel:.2e})")


def test_12_annulus_bracket(report):
    rng = np.random.default_rng(SEED)
    outside, tried, i = 0, 0, 0
    while tried < 100:
        f = classb.sample_algorithm1(600, classb.stream(SEED + 3, i))
        i += 1
        if f.s < 1:
            continue
        delta = float(rng.uniform(0.01, 0.99))
        e_inf, e_sup = rootgeom.annulus_bounds(f.n, f.s, list(f.exps), delta)
        r = rootgeom.annulus_radius(list(f.exps), delta)
        outside += not (e_inf <= r < e_sup)
        tried += 1
    monotone = True
    for n, s in ((12, 5), (30, 2), (7, 8)):
        base = [2 * n - 1 + q * (n - 1) for q in range(s - 1)]
        top0 = base[-1] + n - 1 if base else 2 * n - 1
        vals = [rootgeom.annulus_bounds(n, s, base + [ms], 0.2)[0] for ms in range(top0, top0 + 40 * n, n)]
        # strict while u^(m_s) is above double resolution, then flat at the s - 1 term limit
        monotone &= all(a <= b for a, b in zip(vals, vals[1:])) and all(a < b for a, b in zip(vals[:10], vals[1:11]))
    report(12, outside == 0 and monotone, f"e_inf <= r < e_sup on {tried - outside}/{tried}; e_inf increasing in m_s: {monotone}")


def test_13_beta_round_trip(report):
    mismatches, admissible_mismatch, admissible = [], 0, 0
    for i in range(1000):
        f = classb.sample_algorithm1(500, classb.stream(SEED + 4, i))
        want = betadyn.digits_of_classb(f)
        try:
            got = betadyn.classb_expansion(f).digit_string()
        except betadyn.DigitUncertain:
            got = None
        adm = betadyn.is_parry_admissible(want)
        admissible += adm
        if got != want:
            mismatches.append(str(f))
            admissible_mismatch += adm
    defects = {str(f): betadyn.series_factorization_check(f, precision_bits=256) for f in (F1, F2, N37, N81, N121, N481)}
    ok = not mismatches and max(defects.values()) <= 1e-20
    report(
        13,
        ok,
        f"round-trip mismatches {len(mismatches)}/1000 (all outside the Parry-admissible set: {admissible_mismatch == 0}; "
        f"admissible {admissible}); max series defect {max(defects.values()):.1e}; first mismatches {mismatches[:3]}",
    )


def _conjugate_closed(zs: np.ndarray, tol: float) -> bool:
    return all(np.min(np.abs(np.conj(z) - zs)) <= tol for z in zs)


def test_14_root_soundness(report):
    problems = []
    for f in GOLDEN:
        fp = f.to_intpoly()
        rs = rootgeom.all_roots(fp, 128)
        zs = rs.as_complex()
        if len(rs) != fp.degree:
            problems.append(f"{f}: count")
        if not _conjugate_closed(zs, 2 * rs.max_radius() + 1e-300):
            problems.append(f"{f}: conjugates")
        if np.max(np.abs(zs)) > factorize.mignotte_root_bound(fp):
            problems.append(f"{f}: Mignotte")
        c = factorize.split_abc(f).C_part
        rc = rs if c == fp else rootgeom.all_roots(c, 128)
        with mpmath.workprec(rc.precision_bits):
            gaps = [abs(abs(z) - 1) - rad for z, rad in zip(rc.roots, rc.radii)]
        if min(gaps) <= 0:
            problems.append(f"{f}: C root on unit circle")
    report(14, not problems, f"{len(GOLDEN)} golden polynomials; problems {problems}")


THICKNESS_RUNS = 48


def test_15_thickness_trend(report):
    summ = mcstats.thickness_experiment(McConfig("classB", n_max=3000, runs=THICKNESS_RUNS, seed=SEED), n_min=100, buckets=6)
    ok = -1.2 <= summ.slope <= -0.8 and 0.7 <= summ.summit_ratio_median <= 1.3
    report(
        15,
        ok,
        f"slope {summ.slope:.3f} in [-1.2, -0.8]; median (1-1/beta) n/log n = {summ.summit_ratio_median:.3f} in [0.7, 1.3]; "
        f"{len(summ.rows)} samples, {summ.failures} failures",
    )


def test_16_op_brackets(report):
    lines, ok = [], True
    for fam, target in (("newman_OP", 0.967), ("almost_newman_variant_OP", 0.967)):
        rep = mcstats.run_mc(McConfig(fam, n_max=3000, runs=1000, seed=SEED, degree_scheme="uniform"))
        lo, hi = rep.bracket
        ok &= lo <= target <= hi
        lines.append(f"{fam}: [{lo:.3f}, {hi:.3f}] undecided {rep.counts[2] / 1000:.3f}")
    report(16, ok, "; ".join(lines) + " (must contain 0.967)")


CLI_COMMANDS = [
    ["mc", "--family", "classB", "--runs", "10", "--seed", "1"],
    ["mc", "--family", "classB_s", "--s", "2", "--runs", "10", "--seed", "4", "--format", "csv"],
    ["mc", "--family", "newman_OP", "--nmax", "200", "--runs", "6", "--seed", "2"],
    ["sample", "--nmax", "300", "--count", "20", "--seed", "7"],
    ["thickness", "--nmax", "160", "--runs", "3", "--seed", "1", "--format", "json"],
    ["locus", "--n-values", "20:40:10", "--seed", "3"],
    ["roots", "--poly", "n=12;m=23,35"],
    ["lenticulus", "--poly", "n=81;m=165,250"],
    ["beta", "--poly", "n=5;m=9,15", "--digits", "30"],
    ["factor", "--poly", "n=5;m=9,18"],
    ["theta", "--n", "481", "--format", "json"],
    ["bounds", "--n", "400", "--c", "0.95"],
]


def test_17_cli_determinism(report):
    differing = []
    for argv in CLI_COMMANDS:
        outs = [
            subprocess.run([sys.executable, "-m", "lacunar.cli", *argv], capture_output=True, check=True).stdout
            for _ in range(2)
        ]
        if outs[0] != outs[1] or not outs[0]:
            differing.append(" ".join(argv))
    report(17, not differing, f"{len(CLI_COMMANDS) - len(differing)}/{len(CLI_COMMANDS)} commands byte-identical; differing {differing}")
