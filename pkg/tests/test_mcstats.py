import sys
from fractions import Fraction

import numpy as np
import pytest
import sympy

from lacunar import classb, factorize, mcstats
from lacunar.mcstats import McConfig, Verdict
from lacunar.polycore import IntPoly

X = sympy.Symbol("x")


def test_script_statistics_formula():
    xs = [1, 0, 1, 1]
    mean, std, half = mcstats.script_statistics(xs)
    assert mean == 0.75
    assert std == pytest.approx(np.std(xs, ddof=1))
    assert half == pytest.approx(1.645 * std / 2)
    assert mcstats.script_statistics([1.0]) == (1.0, 0.0, 0.0)


def test_trinomial_proportion_exact():
    assert mcstats.trinomial_proportion_exact(2) == 1
    assert mcstats.trinomial_proportion_exact(7) == Fraction(5, 6)
    for N in range(2, 200):
        count = sum(classb.selmer_classify(n).irreducible for n in range(2, N + 1))
        assert mcstats.trinomial_proportion_exact(N) == Fraction(count, N - 1)


def test_sample_newman_shape():
    rng = np.random.default_rng(0)
    for variant in (False, True):
        f = mcstats.sample_newman(30, variant, rng)
        assert f.degree == 30 and f.coeff(30) == 1
        assert f.coeff(0) == (-1 if variant else 1)
    mean = np.mean([len(mcstats.sample_newman(100, False, rng)) for _ in range(4000)])
    assert abs(mean - 51.5) < 1


def test_heuristic_examples():
    assert mcstats.certify_irreducible_heuristic(IntPoly.from_dense([1, 1, 1])) is Verdict.IRREDUCIBLE
    prod = IntPoly.from_dense([1, 0, 1]) * IntPoly.from_dense([-1, 0, 1, 1])
    assert mcstats.certify_irreducible_heuristic(prod) is Verdict.REDUCIBLE


def test_heuristic_never_lies_on_class_b():
    cfg = McConfig("classB", n_max=60, runs=300, seed=5)
    wrong = 0
    for i in range(cfg.runs):
        f = mcstats.draw(cfg, i)
        v = mcstats.certify_irreducible_heuristic(f.to_intpoly())
        if v is Verdict.UNDECIDED:
            continue
        truth = len(sympy.factor_list(sum(c * X**e for e, c in f.to_intpoly().terms))[1]) == 1
        wrong += (v is Verdict.IRREDUCIBLE) != truth
    assert wrong == 0


def test_class_b_family_never_undecided_and_matches_exact_split():
    cfg = McConfig("classB", n_max=200, runs=100, seed=3)
    rep = mcstats.run_mc(cfg)
    assert rep.counts[2] == 0
    irr = sum(factorize.is_irreducible(mcstats.draw(cfg, i)) for i in range(cfg.runs))
    assert rep.counts[0] == irr


def test_runs_one_is_degenerate_safe():
    rep = mcstats.run_mc(McConfig("classB", n_max=50, runs=1, seed=0))
    assert rep.proportion in (0.0, 1.0) and rep.sample_std == 0.0


def test_workers_do_not_change_results():
    a = mcstats.run_mc(McConfig("classB", n_max=300, runs=40, seed=9, workers=1))
    b = mcstats.run_mc(McConfig("classB", n_max=300, runs=40, seed=9, workers=3))
    assert a.to_json_obj(with_runtime=False) | {"config": None} == b.to_json_obj(with_runtime=False) | {"config": None}


def test_trinomial_family_close_to_law():
    rep = mcstats.run_mc(McConfig("trinomial", n_max=3000, runs=600, seed=2))
    assert abs(rep.proportion - 5 / 6) < 0.05


def test_bad_config():
    with pytest.raises(ValueError):
        McConfig("nope")
    with pytest.raises(ValueError):
        McConfig("classB_s")
    with pytest.raises(ValueError):
        McConfig(runs=0)


def test_external_adapter_protocol(tmp_path):
    script = tmp_path / "adapter.py"
    script.write_text(
        "import sys\n"
        "terms = [tuple(map(int, t.split(','))) for t in sys.stdin.readline().strip().split(';')]\n"
        "print('reducible' if len(terms) % 2 == 0 else 'irreducible')\n"
    )
    cmd = f"{sys.executable} {script}"
    assert mcstats.external_verdict(cmd, IntPoly.from_dense([1, 1, 1])) is Verdict.IRREDUCIBLE
    assert mcstats.external_verdict(cmd, IntPoly.from_dense([1, 0, 1])) is Verdict.REDUCIBLE
    assert mcstats.external_verdict("/nonexistent/binary", IntPoly.one()) is Verdict.UNDECIDED


def test_thickness_small_run():
    summ = mcstats.thickness_experiment(McConfig("classB", n_max=160, runs=8, seed=4), n_min=100, buckets=2)
    assert summ.failures == 0 and len(summ.rows) == 8
    assert all(0 < r.delta < 0.1 for r in summ.rows)
