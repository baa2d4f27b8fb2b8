import json
from fractions import Fraction

import pytest

from asymcoh.core import FunctionModel
from asymcoh.suites import SUITES, run_suites
from make_golden import GOLDEN, lipschitz_golden
from shipped import shipped_models

MODELS = shipped_models()


@pytest.mark.parametrize("name", sorted(MODELS))
def test_all_suites_pass(name):
    results = run_suites(MODELS[name], "all", seed=11, samples=40)
    assert set(results) == set(SUITES)
    for suite, r in results.items():
        assert r["passed"], (suite, r.get("witness"))


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suites(MODELS["flag-A1"], "volume")


def test_walls_note_when_none_enumerated():
    r = run_suites(MODELS["exe-product"], "walls")["walls"]
    assert r["passed"] and r["walls"] == 0 and r["note"]


def test_homogeneity_suite_reports_witness():
    bad = FunctionModel(lambda x: abs(x[0]) ** 3, 1, 2)
    r = run_suites(bad, "homogeneity", samples=5)["homogeneity"]
    assert not r["passed"] and r["witness"]["m"] == 2


def test_lipschitz_golden_file():
    golden = json.loads(GOLDEN.read_text())
    fresh = json.loads(json.dumps(lipschitz_golden(), default=str))
    assert set(golden["models"]) == set(MODELS)
    for name, entry in golden["models"].items():
        a, b = Fraction(entry["constant"]), Fraction(entry["constant_second_sample"])
        assert a > 0 and b > 0
        assert max(a, b) <= 2 * min(a, b)
        assert Fraction(fresh["models"][name]["constant"]) == a
        assert Fraction(fresh["models"][name]["constant_second_sample"]) == b
