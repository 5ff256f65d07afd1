import json

import pytest
from click.testing import CliRunner

from affshuffle import cli, suites


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli.main, list(args), catch_exceptions=False)


@pytest.mark.parametrize("suite", ["ybe", "unitarity"])
def test_verify_passes_and_prints_one_line_per_check(runner, suite):
    result = invoke(runner, "verify", "--suite", suite, "--deterministic")
    assert result.exit_code == 0
    lines = [line for line in result.output.splitlines() if line.startswith(("PASS", "FAIL"))]
    assert lines and all(line.startswith("PASS") for line in lines)
    assert "checks passed; convention K1=constant K2=E_ij" in result.output


def test_report_schema(runner, tmp_path):
    out = tmp_path / "report.json"
    result = invoke(runner, "verify", "--suite", "ybe", "--json-out", str(out))
    assert result.exit_code == 0
    report = json.loads(out.read_text())
    assert set(report) == {"suite", "n", "params", "checks", "convention", "wall_time"}
    assert report["suite"] == "ybe" and report["n"] == 2
    assert report["params"] == {"kmax": 3, "mu": []}
    for row in report["checks"]:
        assert set(row) == {"id", "anchor", "status", "witness"}
        assert row["status"] == "pass"


def test_deterministic_reports_are_byte_identical(runner, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert invoke(runner, "verify", "--suite", "ybe", "--deterministic", "--json-out", str(p)).exit_code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert "wall_time" not in json.loads(paths[0].read_text())


def test_failing_check_exits_one_with_counterexample(runner, tmp_path, monkeypatch):
    checks = [
        suites.Check("good", "anchor-a", lambda: (True, {})),
        suites.Check("bad", "anchor-b", lambda: (False, {"lhs": "1", "rhs": "2"})),
        suites.Check("later", "anchor-b", lambda: (True, {})),
    ]
    monkeypatch.setattr(suites, "build", lambda *a, **k: list(checks))
    out = tmp_path / "r.json"
    result = invoke(runner, "verify", "--suite", "ybe", "--fail-fast", "--deterministic", "--json-out", str(out))
    assert result.exit_code == 1
    report = json.loads(out.read_text())
    assert [r["id"] for r in report["checks"]] == ["good", "bad"]
    assert report["counterexample"]["id"] == "bad"


def test_raising_check_is_reported_as_failure(runner, monkeypatch):
    def boom():
        raise ZeroDivisionError("pole")

    monkeypatch.setattr(suites, "build", lambda *a, **k: [suites.Check("boom", "x", boom)])
    result = invoke(runner, "verify", "--suite", "ybe", "--deterministic")
    assert result.exit_code == 1
    assert "FAIL\tboom" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "--suite", "nope"],
        ["verify", "--n", "5"],
        ["verify", "--kmax", "9"],
        ["verify", "--mu", "1/0"],
        ["element", "P", "--i", "1", "--j", "3", "--k", "2"],
        ["residue", "--lambda", "1", "--of", "F:+:1:3:2"],
        ["pair", "--left", "F:+:1:2", "--right", "F:-:1:2:1"],
    ],
)
def test_usage_errors_exit_two(runner, args):
    assert runner.invoke(cli.main, args).exit_code == 2


def test_config_supplies_defaults_and_flags_win(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"suite": "unitarity", "kmax": 2}))
    out = tmp_path / "r.json"
    assert invoke(runner, "verify", "--config", str(cfg), "--deterministic", "--json-out", str(out)).exit_code == 0
    report = json.loads(out.read_text())
    assert (report["suite"], report["params"]["kmax"]) == ("unitarity", 2)
    invoke(runner, "verify", "--config", str(cfg), "--suite", "ybe", "--deterministic", "--json-out", str(out))
    assert json.loads(out.read_text())["suite"] == "ybe"


def test_figures_are_written(runner, tmp_path):
    result = invoke(runner, "verify", "--suite", "unitarity", "--figures", str(tmp_path / "figs"))
    assert result.exit_code == 0
    for name in ("unitarity-status.png", "unitarity-timing.png"):
        data = (tmp_path / "figs" / name).read_bytes()
        assert data.startswith(b"\x89PNG")


def test_element_single_factor(runner):
    result = invoke(runner, "element", "F", "--sign", "+", "--i", "1", "--j", "2", "--k", "1")
    data = json.loads(result.output)
    assert data["element"]["entries"] == [[[2], [1], "v^2", "1"]]


def test_pair_value(runner):
    result = invoke(runner, "pair", "--left", "P:+:1:2:1", "--right", "F:-:1:2:1")
    data = json.loads(result.output)
    assert data["value"] == "-v^-1"
    assert data["convention"] == {"K1": "constant", "K2": "E_ij"}


def test_alpha_value(runner):
    result = invoke(runner, "alpha", "--i", "1", "--j", "2", "--of", "F:+:1:2:1")
    assert "-q^2*v + v" in result.output


def test_coproduct_terms(runner):
    data = json.loads(invoke(runner, "coproduct", "--mu", "1", "--of", "F:+:1:3:2", "--split", "1").output)
    assert data["split"] == 1
    assert [tuple(t["psi"]) for t in data["terms"]] == [(1, -1)]


def test_residue_and_classic(runner):
    data = json.loads(invoke(runner, "residue", "--lambda", "2", "--of", "F:+:1:3:2").output)
    assert data["lambda"] == [2]
    data = json.loads(invoke(runner, "classic", "A", "--mu", "1", "--i", "1", "--j", "3").output)
    assert data["symmetric"] and data["wheel"]
    assert data["element"]["d"] == [1, 1]
