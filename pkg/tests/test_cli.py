import csv
import io
import json

import pytest

from lacunar import betadyn, classb, cli, polycore, rootgeom


def run(capsys, *argv):
    code = cli.dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_factor_json_round_trips(capsys):
    code, out, _ = run(capsys, "factor", "--poly", "n=5;m=9,15", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["A"] == [[3, 1]] and obj["irreducible"] is False
    c = polycore.from_json_obj(obj["C"])
    assert polycore.cyclotomic(3) * c == classb.from_json_obj(obj["poly"]).to_intpoly()


def test_factor_accepts_json_poly(capsys):
    code, out, _ = run(capsys, "factor", "--poly", '{"n": 12, "m": [23, 35]}')
    assert code == 0 and json.loads(out)["irreducible"] is True


def test_theta_text(capsys):
    code, out, _ = run(capsys, "theta", "--n", "481")
    assert code == 0 and out.startswith("0.99038968")


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "factor", "--poly", "n=5;m=6")
    assert code == cli.EXIT_DOMAIN and "gap violation" in err
    code, _, _ = run(capsys, "theta", "--n", "1")
    assert code == cli.EXIT_DOMAIN


@pytest.mark.parametrize(
    "exc",
    [
        rootgeom.RootCertificationError("radii too large"),
        rootgeom.ThresholdAmbiguous("root on the threshold"),
        betadyn.DigitUncertain(3, (1, 0)),
    ],
)
def test_certification_failure_exit_code(capsys, monkeypatch, exc):
    def boom(*a, **k):
        raise exc

    monkeypatch.setattr(rootgeom, "all_roots", boom)
    monkeypatch.setattr(betadyn, "beta_orbit", boom)
    assert run(capsys, "roots", "--poly", "n=5;m=9,15")[0] == cli.EXIT_CERT
    assert run(capsys, "beta", "--poly", "n=5;m=9,15")[0] == cli.EXIT_CERT


def test_unknown_flag_rejected(capsys):
    assert run(capsys, "theta", "--n", "5", "--bogus")[0] == 2


def test_roots_csv_schema(capsys):
    code, out, _ = run(capsys, "roots", "--poly", "n=5;m=9,15")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 15
    assert list(rows[0]) == ["re", "im", "modulus", "arg", "lenticular", "err_radius"]
    assert sum(int(r["lenticular"]) for r in rows) == 1


def test_lenticulus_json(capsys):
    code, out, _ = run(capsys, "lenticulus", "--poly", "n=12;m=23,35")
    obj = json.loads(out)
    assert code == 0 and obj["count"] == 1 and obj["precision_bits"] >= 128


def test_beta_digits(capsys):
    code, out, _ = run(capsys, "beta", "--poly", "n=5;m=9,15", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["digits"] == obj["expected_digits"] == "100010001000001"
    code, out, _ = run(capsys, "beta", "--poly", "n=5;m=9,15", "--digits", "20")
    assert out.splitlines()[0] == "# digits 10001000100000100000"


def test_sample_json_round_trips(capsys):
    code, out, _ = run(capsys, "sample", "--nmax", "80", "--count", "5", "--seed", "2")
    polys = [classb.from_json_obj(o) for o in json.loads(out)]
    assert code == 0 and len(polys) == 5


def test_mc_deterministic_and_timing_opt_in(capsys):
    argv = ("mc", "--family", "classB", "--runs", "10", "--seed", "1")
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b and "runtime_seconds" not in json.loads(a)
    timed = json.loads(run(capsys, *argv, "--timing")[1])
    assert "runtime_seconds" in timed


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "t.json"
    code = cli.dispatch(["--output", str(dest), "theta", "--n", "12", "--format", "json"])
    assert code == 0 and json.loads(dest.read_text())["n"] == 12


def test_bounds(capsys):
    obj = json.loads(run(capsys, "bounds", "--n", "400", "--c", "0.95")[1])
    assert obj["min_degree"] == pytest.approx(121786, rel=1e-3)
    assert run(capsys, "bounds")[0] == cli.EXIT_DOMAIN


def test_locus_csv(capsys):
    code, out, _ = run(capsys, "locus", "--n-values", "12:14", "--ranks", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [int(r["n"]) for r in rows] == [12, 13, 14]
