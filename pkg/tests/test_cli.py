import json
import subprocess
import sys
from fractions import Fraction

import pytest

from asymcoh import cli, suites
from asymcoh.documents import load_report, preset_path


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def report(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    return load_report(out)


def write(tmp_path, doc, name="model.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


# --- flag -----------------------------------------------------------------------


def test_flag_class(capsys):
    doc = report(["flag", "--type", "A2", "--class", "1,1"], capsys)
    assert doc["h"]["exact"] == [6, 0, 0, 0]
    assert doc["certificates"]["index"] == 0
    assert doc["chamber"] == "+++"


def test_flag_chambers(capsys):
    doc = report(["flag", "--type", "A2", "--chambers"], capsys)
    assert len(doc["chambers"]) == 6
    assert sorted(c["index"] for c in doc["chambers"]) == [0, 1, 1, 2, 2, 3]


def test_flag_wall(capsys):
    doc = report(["flag", "--type", "A1", "--class", "0"], capsys)
    assert doc["chamber"] == "WALL"
    assert doc["h"]["exact"] == [0, 0]


def test_flag_oracle(capsys):
    doc = report(["flag", "--type", "A2", "--class", "2,-1", "--oracle", "60"], capsys)
    assert doc["oracle"]["index"] == 1
    assert Fraction(doc["oracle"]["relative_gap"]) <= Fraction(5, 60)


@pytest.mark.parametrize("token", ["H3", "E9", "A0"])
def test_flag_unsupported_type(token, capsys):
    code, _, err = run(["flag", "--type", token, "--class", "1"], capsys)
    assert code == 3 and err


@pytest.mark.parametrize("cls", ["1", "1,x", "1, 2", "1/0,1", ""])
def test_flag_bad_class(cls, capsys):
    assert run(["flag", "--type", "A2", "--class", cls], capsys)[0] == 2


def test_missing_arguments(capsys):
    assert run(["flag"], capsys)[0] == 2
    assert run(["flag", "--type", "A2"], capsys)[0] == 2
    assert run([], capsys)[0] == 2


# --- surface --------------------------------------------------------------------


def test_surface_examples(capsys):
    path = str(preset_path("bl1p2"))
    doc = report(["surface", "--data", path, "--class", "3,1"], capsys)
    cert = doc["certificates"]
    assert cert["P"] == ["3", "0"] and cert["N"] == ["0", "1"]
    assert doc["h"]["exact"] == [9, 1, 0]
    doc = report(["surface", "--data", path, "--class", "1,-3"], capsys)
    assert doc["certificates"]["case"] == "neither"
    assert doc["h"]["exact"] == [0, 8, 0]
    doc = report(["surface", "--data", path, "--chambers"], capsys)
    assert [c["support"] for c in doc["chambers"]] == [[], ["E"]]


def test_surface_zariski_chamber(capsys):
    doc = report(["surface", "--preset", "bl2p2", "--class", "2,1,1", "--zariski-chamber"], capsys)
    assert doc["zariski_chamber"] == ["E1", "E2"]
    assert run(["surface", "--preset", "bl1p2", "--class", "1,-3", "--zariski-chamber"], capsys)[0] == 5
    assert run(["surface", "--preset", "bl1p2", "--class", "1,-1", "--zariski-chamber"], capsys)[0] == 5


def test_surface_quadric_chambers_refused(capsys):
    assert run(["surface", "--preset", "exe", "--chambers"], capsys)[0] == 4


def test_surface_parse_errors(tmp_path, capsys):
    assert run(["surface", "--data", write(tmp_path, "{not json"), "--class", "1,1"], capsys)[0] == 2
    assert run(["surface", "--data", str(tmp_path / "missing.json"), "--class", "1"], capsys)[0] == 2
    bad = {"kind": "surface", "rank": 2, "gram": [[1, 0], [0, "x"]], "curves": [],
           "cone": {"mode": "quadric"}, "ample": [1, 0]}
    assert run(["surface", "--data", write(tmp_path, bad), "--class", "1,1"], capsys)[0] == 2
    assert run(["surface", "--data", write(tmp_path, {"kind": "torus"}), "--class", "1"], capsys)[0] == 2


def test_surface_validation_errors(tmp_path, capsys):
    positive = {"kind": "surface", "rank": 2, "gram": [[1, 0], [0, 1]], "curves": [],
                "cone": {"mode": "quadric"}, "ample": [1, 0]}
    assert run(["surface", "--data", write(tmp_path, positive), "--class", "1,0"], capsys)[0] == 4
    bad_ample = {"kind": "surface", "rank": 2, "gram": [[1, 0], [0, -1]],
                 "curves": [{"name": "E", "coords": [0, 1]}],
                 "cone": {"mode": "polyhedral", "mori": [[0, 1], [1, -1]]}, "ample": ["1/2", 1]}
    assert run(["surface", "--data", write(tmp_path, bad_ample), "--class", "1,0"], capsys)[0] == 4


def test_surface_rational_coordinates(capsys):
    doc = report(["surface", "--preset", "bl1p2", "--class", "7/3,5/2"], capsys)
    assert doc["h"]["exact"] == [Fraction(49, 9), Fraction(25, 4), 0]
    assert doc["h"]["decimal"][0] == "5.44444"


# --- abelian --------------------------------------------------------------------


def test_abelian_exe(capsys):
    assert report(["abelian", "--exe", "1,1,1"], capsys)["h"]["exact"] == [6, 0, 0]
    assert report(["abelian", "--exe", "1,1,-1"], capsys)["h"]["exact"] == [0, 2, 0]
    doc = report(["abelian", "--exe", "1,0,0"], capsys)
    assert doc["chamber"] == "Degenerate"


def test_abelian_elliptic_file(capsys):
    doc = report(["abelian", "--data", str(preset_path("elliptic")), "--class", "1"], capsys)
    assert doc["h"]["exact"] == [2, 0]
    assert doc["certificates"]["pfaffian"] == "2"


def test_abelian_errors(tmp_path, capsys):
    assert run(["abelian"], capsys)[0] == 2
    assert run(["abelian", "--exe", "1,1"], capsys)[0] == 2
    not_integral = {"kind": "abelian", "g": 1, "basis_forms": [{"re": [["1/3"]]}],
                    "lattice": [[1, 0], [0, 1]]}
    assert run(["abelian", "--data", write(tmp_path, not_integral), "--class", "1"], capsys)[0] == 4
    assert run(["abelian", "--data", str(preset_path("bl1p2")), "--class", "1,1"], capsys)[0] == 2


# --- check ----------------------------------------------------------------------


def test_check_examples(capsys):
    assert report(["check", "--type", "A2", "--suite", "homogeneity"], capsys)["passed"]
    assert report(["check", "--data", str(preset_path("bl2p2")), "--suite", "euler"], capsys)["passed"]
    doc = report(["check", "--type", "A2", "--suite", "walls"], capsys)
    assert doc["passed"] and doc["suites"]["walls"]["walls"] == 3


def test_check_reports_lipschitz_constant(capsys):
    doc = report(["check", "--preset", "bl1p2", "--suite", "lipschitz", "--samples", "50"], capsys)
    assert Fraction(doc["lipschitz_constant"]) > 0


def test_check_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv("ASYMCOH_SEED", "7")
    doc = report(["check", "--exe", "--suite", "euler", "--seed", "1", "--samples", "20"], capsys)
    assert doc["seed"] == 7
    monkeypatch.setenv("ASYMCOH_SEED", "seven")
    assert run(["check", "--exe", "--suite", "euler"], capsys)[0] == 2


def test_check_failure_exit_code(capsys, monkeypatch):
    def broken(model, seed, samples):
        return {"passed": False, "witness": {"class": [Fraction(1, 2)]}}

    monkeypatch.setitem(suites.RUNNERS, "euler", broken)
    code, out, err = run(["check", "--type", "A1", "--suite", "euler"], capsys)
    assert code == 1
    assert "witness" in err and "1/2" in err
    assert json.loads(out)["passed"] is False


def test_check_target_required(capsys):
    assert run(["check", "--suite", "euler"], capsys)[0] == 2
    assert run(["check", "--type", "A2", "--exe"], capsys)[0] == 2


# --- documents ------------------------------------------------------------------


def test_determinism_and_atomic_out(tmp_path, capsys):
    argv = ["check", "--preset", "bl1p2", "--suite", "all", "--samples", "30", "--seed", "3"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second
    out = tmp_path / "report.json"
    assert cli.main(argv + ["--out", str(out)]) == 0
    assert out.read_text() == first
    assert [p.name for p in tmp_path.iterdir()] == ["report.json"]


def test_round_trip_exact(capsys):
    _, out, _ = run(["surface", "--preset", "bl2p2", "--class", "5/7,-1/3,2/9"], capsys)
    doc = load_report(out)
    assert doc["class"] == [Fraction(5, 7), Fraction(-1, 3), Fraction(2, 9)]
    assert all(isinstance(a, Fraction) for a in doc["h"]["exact"])
    assert json.loads(out)["h"]["exact"] == [str(a) for a in doc["h"]["exact"]]


def test_console_script():
    res = subprocess.run(
        [sys.executable, "-m", "asymcoh.cli", "abelian", "--exe", "1,1,1"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["h"]["exact"] == ["6", "0", "0"]
