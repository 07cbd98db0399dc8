"""Command-line entry point ``lacunar``.

Exit codes: 0 success, 2 domain or usage error, 3 numerical certification
failure.  Machine output goes to stdout unless ``--output`` is given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Callable

import mpmath

from . import betadyn, classb, factorize, mcstats, polycore, rootgeom

EXIT_DOMAIN = 2
EXIT_CERT = 3

DOMAIN_ERRORS = (polycore.PolyDomainError, classb.ClassBError, ValueError)
CERT_ERRORS = (
    rootgeom.RootCertificationError,
    rootgeom.ThresholdAmbiguous,
    rootgeom.BracketViolation,
    betadyn.DigitUncertain,
)


def _num(x, digits: int) -> str:
    return mpmath.nstr(x, digits, strip_zeros=False) if isinstance(x, (mpmath.mpf, mpmath.mpc)) else repr(x)


def _digits_for(bits: int) -> int:
    return max(15, int(bits * 0.30103) - 2)


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _poly(args) -> classb.ClassBPoly:
    if args.poly.strip().startswith("{"):
        return classb.loads(args.poly)
    return classb.parse_inline(args.poly)


# ---------------------------------------------------------------------------
# subcommands; each returns the text to emit


def cmd_factor(args) -> str:
    f = _poly(args)
    split = factorize.split_abc(f)
    obj = split.to_json_obj()
    obj["irreducible"] = factorize.is_irreducible(f)
    obj["poly"] = f.to_json_obj()
    if args.format == "json":
        return _json(obj)
    lines = [
        f"f = {polycore.to_text(f.to_intpoly())}",
        "A = " + (" * ".join(f"Phi_{m}^{k}" for m, k in split.A) or "1"),
        f"B = {polycore.to_text(split.B_part)}",
        f"C = {polycore.to_text(split.C_part)}",
        f"irreducible = {str(obj['irreducible']).lower()}",
    ]
    return "\n".join(lines) + "\n"


def _roots_with_flags(f, bits: int, rule: str):
    rs = rootgeom.all_roots(f.to_intpoly(), bits)
    lent = rootgeom.lenticulus(f, rs, rule=rule)
    return rs, lent


def cmd_roots(args) -> str:
    f = _poly(args)
    rs, lent = _roots_with_flags(f, args.precision, args.rule)
    members = set(lent.member_index)
    digs = _digits_for(rs.precision_bits)
    rows = []
    with mpmath.workprec(rs.precision_bits):
        for i, z in enumerate(rs.roots):
            rows.append(
                [
                    _num(z.real, digs),
                    _num(z.imag, digs),
                    _num(abs(z), digs),
                    _num(mpmath.arg(z), digs),
                    int(i in members),
                    f"{rs.radii[i]:.3e}",
                ]
            )
    if args.format == "csv":
        return _csv(rows, ["re", "im", "modulus", "arg", "lenticular", "err_radius"])
    return _json(
        {
            "degree": rs.degree,
            "precision_bits": rs.precision_bits,
            "roots": [dict(zip(["re", "im", "modulus", "arg", "lenticular", "err_radius"], r)) for r in rows],
        }
    )


def cmd_lenticulus(args) -> str:
    f = _poly(args)
    rs, lent = _roots_with_flags(f, args.precision, args.rule)
    digs = _digits_for(rs.precision_bits)
    obj = {
        "poly": f.to_json_obj(),
        "count": lent.count,
        "rule": lent.rule,
        "strict_threshold_count": lent.strict_count,
        "c_n": lent.c_n_used,
        "threshold": lent.threshold,
        "gap_scaled": list(lent.gap),
        "expected_count_range": list(lent.expected_count_range),
        "example_mode": lent.example_mode,
        "summit": _num(lent.summit, digs),
        "precision_bits": rs.precision_bits,
        "members": [[_num(z.real, digs), _num(z.imag, digs)] for z in lent.members],
    }
    if args.format == "json":
        return _json(obj)
    with mpmath.workprec(rs.precision_bits):
        rows = [[_num(z.real, digs), _num(z.imag, digs), _num(abs(z), digs), _num(mpmath.arg(z), digs)] for z in lent.members]
    return _csv(rows, ["re", "im", "modulus", "arg"])


def cmd_theta(args) -> str:
    th = rootgeom.theta_n(args.n, args.tol)
    digs = 30
    obj = {
        "n": args.n,
        "theta": _num(th.value, digs),
        "theta_inverse": _num(1 / th.value, digs),
        "expansion": th.expansion,
        "tail": th.tail,
        "envelope": rootgeom.tail_envelope(args.n) if args.n >= 3 else None,
        "pre_asymptotic": th.pre_asymptotic,
        "digits": digs,
    }
    if args.format == "json":
        return _json(obj)
    return obj["theta"] + "\n"


def cmd_beta(args) -> str:
    f = _poly(args)
    k = args.digits or f.degree
    prec = max(betadyn.orbit_precision(2, max(k, f.degree)), args.precision)
    beta = rootgeom.beta_of(f, precision_bits=prec - 8)
    # past deg f the orbit sits at 0, so a near-integer step is read as termination
    boundary = "terminate" if k > f.degree else "terminal"
    exp = betadyn.beta_orbit(beta, k, prec, beta_err=mpmath.ldexp(1, -(prec - 42)), boundary=boundary)
    if args.format == "json":
        return _json(
            {
                "poly": f.to_json_obj(),
                "beta": _num(beta, 30),
                "digits": exp.digit_string(),
                "expected_digits": betadyn.digits_of_classb(f)[:k],
                "terminated_at": exp.terminated_at,
                "precision_bits": exp.precision_bits,
            }
        )
    rows = [[i, d, _num(x, 20), f"{float(e):.3e}"] for i, (d, x, e) in enumerate(zip(exp.digits, exp.orbit[1:], exp.orbit_err[1:]), start=1)]
    return f"# digits {exp.digit_string()}\n" + _csv(rows, ["i", "digit", "orbit", "err"])


def cmd_sample(args) -> str:
    cfg = classb.SamplerConfig(args.nmax, args.seed, args.s, args.s_scheme)
    polys = [classb.sample(cfg, classb.stream(args.seed, i)) for i in range(args.count)]
    if args.format == "json":
        return _json([p.to_json_obj() for p in polys])
    return _csv([[p.n, p.s, p.degree, " ".join(map(str, p.exps))] for p in polys], ["n", "s", "degree", "m"])


def _mc_config(args) -> mcstats.McConfig:
    return mcstats.McConfig(
        family=args.family,
        n_max=args.nmax,
        runs=args.runs,
        seed=args.seed,
        workers=args.workers,
        s=args.s,
        s_scheme=args.s_scheme,
        degree_scheme=args.degree_scheme,
        adapter=args.adapter,
    )


def cmd_mc(args) -> str:
    rep = mcstats.run_mc(_mc_config(args))
    obj = rep.to_json_obj(with_runtime=args.timing)
    if args.format == "json":
        return _json(obj)
    header = ["family", "n_max", "runs", "seed", "proportion", "sample_std", "ci90_half_width", "irreducible", "reducible", "undecided", "bracket_low", "bracket_high"]
    row = [args.family, args.nmax, args.runs, args.seed, rep.proportion, rep.sample_std, rep.ci90_half_width, *rep.counts, *rep.bracket]
    return _csv([row], header)


def cmd_thickness(args) -> str:
    cfg = mcstats.McConfig("classB", n_max=args.nmax, runs=args.runs, seed=args.seed)
    summ = mcstats.thickness_experiment(cfg, n_min=args.nmin, buckets=args.buckets)
    if args.format == "json":
        return _json(
            {
                "slope": summ.slope,
                "summit_ratio_median": summ.summit_ratio_median,
                "failures": summ.failures,
                "buckets": [dict(zip(["n_median", "delta_median", "summit_ratio_median", "size"], b)) for b in summ.buckets],
                "rows": [[r.n, r.degree, r.s, r.delta, r.summit_distance] for r in summ.rows],
            }
        )
    return _csv([[r.n, r.degree, r.s, r.delta, r.summit_distance] for r in summ.rows], ["n", "m_s", "s", "delta", "summit_distance"])


def _n_values(spec: str) -> list[int]:
    if not spec:
        return []
    if ":" in spec:
        parts = [int(t) for t in spec.split(":")]
        lo, hi = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return list(range(lo, hi + 1, step))
    return [int(t) for t in spec.split(",") if t.strip()]


def cmd_locus(args) -> str:
    cfg = classb.SamplerConfig(max(args.nmax, 2), args.seed)
    pts = rootgeom.lenticular_locus_curves(_n_values(args.n_values), cfg, ranks=args.ranks, trinomials=args.trinomials)
    return _csv([[p.n, p.rank, repr(p.arg), repr(p.modulus), p.poly] for p in pts], ["n", "rank", "arg", "modulus", "poly"])


def cmd_bounds(args) -> str:
    obj = {}
    if args.n is not None:
        mono, deg = factorize.reciprocal_factor_bounds(args.n, args.c)
        obj.update({"n": args.n, "c": args.c, "min_monomials": mono, "min_degree": deg})
    if args.poly:
        f = _poly(args)
        obj["mignotte_root_bound"] = factorize.mignotte_root_bound(f.to_intpoly(), args.k)
        obj["poly"] = f.to_json_obj()
    if not obj:
        raise ValueError("give --n/--c or --poly")
    return _json(obj)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lacunar", description="Class-B almost-Newman polynomials: factorization, roots, statistics.")
    ap.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, formats=("json", "text"), help_: str = ""):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--format", choices=formats, default=formats[0])
        return p

    p = add("factor", cmd_factor, help_="A*B*C split and irreducibility")
    p.add_argument("--poly", required=True, help='"n=5;m=9,15" or JSON {"n":5,"m":[9,15]}')

    for name, fn, fmts in (("roots", cmd_roots, ("csv", "json")), ("lenticulus", cmd_lenticulus, ("json", "csv"))):
        p = add(name, fn, fmts)
        p.add_argument("--poly", required=True)
        p.add_argument("--precision", type=int, default=128)
        p.add_argument("--rule", choices=("gap", "threshold"), default="gap")

    p = add("theta", cmd_theta, ("text", "json"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-30)

    p = add("beta", cmd_beta, ("csv", "json"))
    p.add_argument("--poly", required=True)
    p.add_argument("--digits", type=int, default=0, help="number of digits (default deg f)")
    p.add_argument("--precision", type=int, default=256)

    p = add("sample", cmd_sample, ("json", "csv"))
    p.add_argument("--nmax", type=int, default=3000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--s-scheme", choices=("uniform", "rejection"), default="uniform")

    p = add("mc", cmd_mc, ("json", "csv"))
    p.add_argument("--family", choices=mcstats.FAMILIES, default="classB")
    p.add_argument("--nmax", type=int, default=3000)
    p.add_argument("--runs", type=int, default=4000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--s-scheme", choices=("uniform", "rejection"), default="uniform")
    p.add_argument("--degree-scheme", choices=("uniform", "nested"), default="uniform")
    p.add_argument("--adapter", default=None, help="external factorizer command")
    p.add_argument("--timing", action="store_true", help="include runtime_seconds")

    p = add("thickness", cmd_thickness, ("csv", "json"))
    p.add_argument("--nmax", type=int, default=3000)
    p.add_argument("--nmin", type=int, default=100)
    p.add_argument("--runs", type=int, default=60)
    p.add_argument("--buckets", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)

    p = add("locus", cmd_locus, ("csv",))
    p.add_argument("--n-values", default="", help="comma list or lo:hi[:step]")
    p.add_argument("--nmax", type=int, default=0, help="degree cap (at least 3n)")
    p.add_argument("--ranks", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trinomials", action="store_true")

    p = add("bounds", cmd_bounds, ("json",))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--c", type=float, default=0.95)
    p.add_argument("--poly", default=None)
    p.add_argument("--k", type=int, default=None)
    return ap


def dispatch(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        text = args.func(args)
    except CERT_ERRORS as e:
        print(f"certification failure: {e}", file=sys.stderr)
        return EXIT_CERT
    except DOMAIN_ERRORS as e:
        print(f"domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
