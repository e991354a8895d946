import json
from fractions import Fraction

import pytest
import sympy

from algebra.series import series_from_json
from app import (
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_USAGE,
    RunManifest,
    main,
    parse_directions,
    parse_divisor,
    parse_mode,
    parse_rational,
)
from localization.characters import tangent_euler_sum
from localization.geometry import builtin_surface, load_surface
from utils.errors import EngineError
from utils.settings import EngineSettings


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_parse_divisor():
    assert parse_divisor(None, 2) == (0, 0)
    assert parse_divisor("0", 1) == (0,)
    assert parse_divisor("1:2,0:-1", 3) == (-1, 2, 0)
    assert parse_divisor("1,-2", 2) == (1, -2)
    with pytest.raises(EngineError):
        parse_divisor("3:1", 2)
    with pytest.raises(EngineError):
        parse_divisor("1,2,3", 2)
    with pytest.raises(EngineError):
        parse_divisor("a:b", 1)


def test_parse_directions():
    assert parse_directions("1:-3,2:-5") == [(Fraction(1), Fraction(-3)), (Fraction(2), Fraction(-5))]
    assert parse_directions(None) == []
    with pytest.raises(EngineError):
        parse_directions("1:0")
    with pytest.raises(EngineError):
        parse_directions("1-3")


def test_parse_mode():
    settings = EngineSettings(dps=40)
    assert parse_mode("exact", settings) == ("exact", 40)
    assert parse_mode("numeric:30", settings) == ("numeric", 30)
    with pytest.raises(EngineError):
        parse_mode("numeric:5", settings)
    with pytest.raises(EngineError):
        parse_mode("fast", settings)


def test_parse_rational():
    assert parse_rational(None, "--x") == 1
    assert parse_rational("3/2", "--x") == Fraction(3, 2)
    assert parse_rational("0.25", "--lambda") == Fraction(1, 4)
    for text in ("abc", "1/0", ""):
        with pytest.raises(EngineError, match="--x"):
            parse_rational(text, "--x")


@pytest.mark.parametrize("flag, value", [("--x", "abc"), ("--lambda", "1/0"), ("--x", "-1")])
def test_check_pert_bad_numbers(capsys, flag, value):
    assert main(["check", "pert", flag, value]) == EXIT_USAGE


def test_manifest_dict():
    manifest = RunManifest(d=(1, 0), directions=[("1", "-3")])
    data = manifest.to_dict()
    assert data["d"] == [1, 0]
    assert data["directions"] == [["1", "-3"]]


def test_surface_list(capsys):
    code, out = _run(capsys, "surface", "list")
    assert code == EXIT_PASS
    assert "C2" in out and "F1" in out


def test_surface_show(capsys):
    code, out = _run(capsys, "surface", "show", "F2")
    assert code == EXIT_PASS
    assert "w_l0" in out
    assert '"edges": 1' in out


def test_surface_validate_broken(capsys, fixtures_dir):
    code, out = _run(capsys, "surface", "validate", str(fixtures_dir / "broken.json"))
    assert code == EXIT_FAIL
    report = json.loads(out)
    assert report["pass"] is False
    assert report["invariant"] == "normal weight relation violated"


def test_surface_validate_shipped(capsys, surfaces_dir):
    code, out = _run(capsys, "surface", "validate", str(surfaces_dir / "F3.json"))
    assert code == EXIT_PASS
    assert json.loads(out)["surface"]["name"] == "F3"


def test_surface_validate_missing(capsys, tmp_path):
    code, _ = _run(capsys, "surface", "validate", str(tmp_path / "nowhere.json"))
    assert code == EXIT_USAGE


def test_surface_export(capsys, tmp_path):
    path = tmp_path / "F2.json"
    code, _ = _run(capsys, "surface", "export", "F2", str(path))
    assert code == EXIT_PASS
    assert load_surface(path) == builtin_surface("F2")


def test_zinst_c2(capsys):
    code, out = _run(capsys, "zinst", "--surface", "C2", "--rank", "1", "--theory", "pure", "--order", "4")
    assert code == EXIT_PASS
    report = json.loads(out)
    assert [entry["lambda_exp"] for entry in report["series"]] == [0, 2, 4]
    assert set(report["display"]) == {"0", "2", "4"}
    assert report["display"]["0"] == "1"
    assert report["manifest"]["surface"] == "C2"


def _golden(fixtures_dir, table):
    golden = json.loads((fixtures_dir / "zinst_F1_r2_d0_order4.json").read_text())
    coefficients = {entry["lambda_exp"]: table.field.from_expr(sympy.sympify(entry["coeff"])) for entry in golden["series"]}
    return golden, coefficients


def test_zinst_matches_golden_fixture(tmp_path, fixtures_dir, table2):
    golden, expected = _golden(fixtures_dir, table2)
    out = tmp_path / "z.json"
    assert main(golden["argv"] + ["--out", str(out)]) == EXIT_PASS
    report = json.loads(out.read_text())
    assert {key: report["manifest"][key] for key in golden["manifest"]} == golden["manifest"]
    assert [(e["lambda_exp"], e["q_exp"]) for e in report["series"]] == [
        (e["lambda_exp"], e["q_exp"]) for e in golden["series"]
    ]
    produced = series_from_json(report["series"], table2, 4).lambda_coefficients()
    assert sorted(produced) == sorted(expected)
    assert all(produced[e] - expected[e] == table2.zero() for e in expected)


def test_golden_fixture_matches_fixed_point_sum(fixtures_dir, table2):
    _, expected = _golden(fixtures_dir, table2)
    brute = tangent_euler_sum(builtin_surface("F1"), 2, (0,), 4, table2).lambda_coefficients()
    assert sorted(brute) == sorted(expected)
    assert all(brute[e] - expected[e] == table2.zero() for e in expected)


def test_zinst_order_zero(capsys):
    code, out = _run(capsys, "zinst", "--surface", "F1", "--rank", "2", "--d", "0", "--order", "0")
    assert code == EXIT_PASS
    assert [entry["lambda_exp"] for entry in json.loads(out)["series"]] == [0]


def test_zinst_is_reproducible(capsys, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["zinst", "--surface", "F1", "--rank", "2", "--order", "4"]
    assert main(argv + ["--out", str(first)]) == EXIT_PASS
    assert main(argv + ["--out", str(second), "--threads", "2"]) == EXIT_PASS
    first_report, second_report = json.loads(first.read_text()), json.loads(second.read_text())
    assert first_report == second_report
    assert "threads" not in first_report["manifest"]


def test_zinst_numeric(capsys):
    code, out = _run(
        capsys, "zinst", "--surface", "C2", "--rank", "1", "--theory", "5d:1/10", "--order", "2", "--mode", "numeric:30"
    )
    assert code == EXIT_PASS
    report = json.loads(out)
    assert "numeric" in report["series"][-1]["coeff"]
    assert set(report["manifest"]["point"]) >= {"eps1", "eps2", "a1"}


def test_zinst_transcendental_needs_numeric(capsys):
    code, _ = _run(capsys, "zinst", "--theory", "5d:1")
    assert code == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["zinst", "--mode", "numeric:4"],
        ["zinst", "--surface", "F1", "--d", "7:1"],
        ["zinst", "--surface", "nowhere"],
        ["zinst", "--rank", "0"],
        ["zinst", "--theory", "fund:0"],
    ],
)
def test_precondition_failures(capsys, argv):
    assert main(argv) == EXIT_USAGE


def test_check_pert(capsys):
    code, out = _run(capsys, "check", "pert", "--k", "2", "--x", "1")
    assert code == EXIT_PASS
    report = json.loads(out)
    assert report["schema"] == 1 and report["pass"] is True
    assert report["command"] == "check pert"
    assert report["checks"][1]["target"].startswith("1.5")


def test_check_conjecture(capsys):
    code, out = _run(capsys, "check", "conjecture", "--surface", "F1", "--rank", "2", "--order", "4")
    assert code == EXIT_PASS
    report = json.loads(out)
    assert len(report["checks"]) == 3
    assert report["manifest"]["rank"] == 2


def test_check_conjecture_report_is_stable(capsys, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["check", "conjecture", "--surface", "F2", "--rank", "1", "--order", "4"]
    assert main(argv + ["--out", str(first)]) == EXIT_PASS
    assert main(argv + ["--out", str(second)]) == EXIT_PASS
    assert first.read_bytes() == second.read_bytes()


def test_check_degeneration(capsys):
    code, out = _run(capsys, "check", "degeneration", "--rank", "1", "--order", "4")
    assert code == EXIT_PASS
    assert json.loads(out)["pass"] is True


@pytest.mark.slow
def test_check_conjecture_numeric(capsys):
    code, out = _run(
        capsys, "check", "conjecture", "--surface", "F1", "--rank", "1", "--theory", "5d:1/2",
        "--order", "2", "--mode", "numeric:30",
    )
    assert code == EXIT_PASS, out


@pytest.mark.slow
def test_check_selftest(capsys):
    code, out = _run(capsys, "check", "selftest")
    report = json.loads(out)
    assert code == EXIT_PASS, [c["name"] for c in report["checks"] if not c["pass"]]
