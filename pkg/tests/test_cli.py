"""Command-line interface: outputs, configuration files, caching and exit codes."""

import json

import pytest

from orbitoda.cli import EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_USAGE, run


@pytest.fixture(autouse=True)
def _cache(monkeypatch, tmp_path):
    monkeypatch.setenv("ORBITODA_CACHE_DIR", str(tmp_path / "cache"))


def _json(capsys, argv, code=EXIT_OK):
    assert run(argv) == code
    return json.loads(capsys.readouterr().out)


def test_hurwitz_all_methods(capsys):
    out = _json(capsys, ["hurwitz", "--g", "0", "--mu", "2", "--nu", "2", "--method", "all"])
    assert out["value"] == "1/2" and out["method_agreement"] is True
    assert out["values"] == {"char": "1/2", "fock": "1/2", "brute": "1/2"}


def test_hurwitz_with_one_branch_point(capsys):
    assert _json(capsys, ["hurwitz", "--g", "0", "--mu", "2", "--nu", "1,1"])["value"] == "1/2"


def test_wreath_hurwitz(capsys):
    out = _json(capsys, ["hurwitz", "--g", "0", "--mu", "1_0", "--nu", "1_0", "--K", "Z2", "--method", "all"])
    assert out["value"] == "1/2"


def test_cached_answers_are_identical(capsys, tmp_path):
    argv = ["characters", "--d", "2", "--K", "Z2"]
    first = _json(capsys, argv)
    assert any((tmp_path / "cache").iterdir())
    assert _json(capsys, argv) == first
    assert _json(capsys, argv + ["--no-cache"]) == first
    assert len(first["table"]) == len(first["columns"]) == 5


def test_csv_output(capsys):
    assert run(["hurwitz", "--g", "0", "--mu", "2", "--nu", "2", "--format", "csv"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["method,value", "char,1/2"]


def test_hodge_polynomial(capsys):
    out = _json(capsys, ["hodge", "--g", "0", "--points", "0,0,0", "--at", "1,2,3"])
    assert out["polynomial"]["terms"] == [{"exps": [1, 1, 1], "coeff": "1"}]
    assert out["value_at"]["value"] == "6"


def test_gw_invariant(capsys):
    out = _json(capsys, ["gw", "--d", "1", "--genus", "0", "--insert", "0:0:0", "--insert", "inf:0:0", "--connected"])
    assert out["value"] == {"0": "1"}


def test_toda_check(capsys):
    out = _json(capsys, ["toda-check", "--K", "Z2", "--qmax", "2", "--degmax", "4"])
    assert out["pass"] is True
    assert all(r["pass"] for r in out["reports"])


def test_gw_verify_suites(capsys):
    out = _json(capsys, ["gw-verify", "--suite", "string", "--r", "2"])
    assert out["pass"] is True
    out = _json(capsys, ["gw-verify", "--suite", "divisor", "--constant", "1/24", "--dmax", "0"], EXIT_FAIL)
    assert out["pass"] is False


def test_toda_suite_needs_orbifold_points(capsys):
    assert run(["gw-verify", "--suite", "toda", "--r", "1", "--s", "2"]) == EXIT_USAGE
    assert "r, s > 1" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert run(["hurwitz", "--g", "0", "--mu", "2"]) == EXIT_USAGE
    assert run(["hurwitz", "--g", "0", "--mu", "2", "--nu", "1"]) == EXIT_USAGE
    assert run(["hurwitz", "--g", "x", "--mu", "2", "--nu", "2"]) == EXIT_USAGE
    assert run(["characters", "--d", "2", "--K", "Q8"]) == EXIT_USAGE
    assert run(["frobnicate"]) == EXIT_USAGE


def test_cap_exceeded(capsys):
    out = _json(capsys, ["characters", "--d", "9"], EXIT_CAP)
    assert out["error"] == "resource_cap_exceeded"
    out = _json(capsys, ["hurwitz", "--g", "0", "--mu", "9", "--nu", "9", "--method", "brute"], EXIT_CAP)
    assert "budget" in out["message"]


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "orbitoda.ini"
    cfg.write_text("[orbitoda]\nformat = json\n[hurwitz]\ng = 0\nmu = 2\nnu = 2\nmethod = all\n")
    out = _json(capsys, ["hurwitz", "--config", str(cfg)])
    assert out["method_agreement"] is True
    # flags win over the file
    out = _json(capsys, ["hurwitz", "--config", str(cfg), "--method", "fock"])
    assert "values" not in out
    cfg.write_text("[hurwitz]\nmystery = 1\n")
    assert run(["hurwitz", "--config", str(cfg), "--g", "0", "--mu", "2", "--nu", "2"]) == EXIT_USAGE
    assert "mystery" in capsys.readouterr().err


def test_selftest_subset(capsys):
    assert run(["selftest", "--only", "2"]) == EXIT_OK
    captured = capsys.readouterr()
    assert "[PASS] criterion  2" in captured.err
    assert json.loads(captured.out)["pass"] is True
    assert run(["selftest", "--only", "11"]) == EXIT_USAGE
