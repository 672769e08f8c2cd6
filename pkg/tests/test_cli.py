"""CLI surface: verbs, exit codes, JSON reports, determinism."""

import json
import subprocess
import sys

import pytest

from mzv.cli import main
from mzv.errors import ConfigError
from mzv.report import (
    default_config,
    load_config,
    render_table,
    run_suite,
    validate_config,
)

MINI_SUITE = {
    "schema": 1,
    "accuracy": 1e-7,
    "checks": [
        {"identity": "duality", "grid": {"max_weight": 3}, "tolerance": 1e-6},
        {"identity": "sum_formula", "fuzz": {"seed": 3, "count": 2}},
        {"quad": "ones", "grid": {"m": [0], "n": [0]}, "tolerance": 1e-6},
    ],
}


def run_main(*argv, capsys=None):
    code = main(list(argv))
    out = capsys.readouterr() if capsys else None
    return code, out


def test_dual_prints_index(capsys):
    code, out = run_main("dual", "(1,2)", capsys=capsys)
    assert code == 0
    assert out.out.strip() == "(3)"


def test_eval_human_and_json(capsys):
    code, out = run_main("eval", "(2)", capsys=capsys)
    assert code == 0
    assert "1.64493406684" in out.out
    assert "tail_bound=" in out.out

    code, out = run_main("eval", "(2)", "--json", capsys=capsys)
    payload = json.loads(out.out)
    assert payload["input"] == "(2)"
    assert payload["accuracy_met"] is True


def test_eval_rejects_inadmissible(capsys):
    code, out = run_main("eval", "(2,1)", capsys=capsys)
    assert code == 2
    assert "admissible" in out.err


def test_eval_parse_error_carries_position(capsys):
    code, out = run_main("eval", "(1,,2)", capsys=capsys)
    assert code == 2
    assert "column" in out.err


def test_eval_spec_file(tmp_path, capsys):
    spec = {
        "factors": [
            [{"kind": "extra-power", "shift": 0, "exponent": 1}],
            [{"kind": "extra-power", "shift": 0, "exponent": 2}],
        ]
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, out = run_main("eval", "--spec", str(path), "--json", capsys=capsys)
    assert code == 0
    assert json.loads(out.out)["value"] == pytest.approx(1.2020569031595943, abs=1e-9)


def test_eval_needs_exactly_one_input(capsys):
    code, out = run_main("eval", capsys=capsys)
    assert code == 2


def test_verify_pass_and_exit_codes(capsys):
    code, out = run_main(
        "verify", "theorem1", "--p", "1", "--q", "1", "--r", "1", "--a", "0", "--m", "0",
        capsys=capsys,
    )
    assert code == 0
    assert "pass" in out.out

    code, out = run_main("verify", "cor15", "--p", "1", "--m", "0", "--r", "2", capsys=capsys)
    assert code == 2  # paper hypothesis m + p >= r + 1 violated


def test_verify_missing_flag(capsys):
    code, out = run_main("verify", "sum_formula", "--m", "4", capsys=capsys)
    assert code == 2
    assert "--p" in out.err


def test_verify_extraneous_flag(capsys):
    code, out = run_main("verify", "duality", "--index", "(3)", "--q", "1", capsys=capsys)
    assert code == 2


def test_verify_unknown_identity_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nope"])
    assert exc.value.code == 2


def test_verify_json_report(capsys):
    code, out = run_main("verify", "duality", "--index", "(2,3)", "--json", capsys=capsys)
    assert code == 0
    report = json.loads(out.out)
    assert report["schema"] == 1
    assert report["tool"] == "mzv"
    assert report["summary"] == {
        "total": 1,
        "passed": 1,
        "failed": 0,
        "max_abs_diff": report["summary"]["max_abs_diff"],
        "runtime_seconds": report["summary"]["runtime_seconds"],
    }
    assert report["checks"][0]["identity"] == "duality"


def test_fuzz_deterministic_params(capsys):
    code, out1 = run_main(
        "fuzz", "--identity", "theorem1", "--seed", "42", "--count", "4", "--json",
        capsys=capsys,
    )
    assert code == 0
    code, out2 = run_main(
        "fuzz", "--identity", "theorem1", "--seed", "42", "--count", "4", "--json",
        capsys=capsys,
    )
    r1, r2 = json.loads(out1.out), json.loads(out2.out)
    assert [c["params"] for c in r1["checks"]] == [c["params"] for c in r2["checks"]]
    assert r1["seeds"] == [42]
    assert r1["summary"]["passed"] == 4


def test_fuzz_count_zero_empty_report(capsys):
    code, out = run_main("fuzz", "--identity", "duality", "--count", "0", "--json", capsys=capsys)
    assert code == 0
    report = json.loads(out.out)
    assert report["summary"]["total"] == 0


def test_fuzz_bad_ranges(capsys):
    code, out = run_main("fuzz", "--identity", "duality", "--ranges", "[1,2]", capsys=capsys)
    assert code == 2


def test_quad_single_instance(capsys):
    code, out = run_main("quad", "ones", "--m", "1", "--n", "0", "--json", capsys=capsys)
    assert code == 0
    report = json.loads(out.out)
    assert report["checks"][0]["identity"] == "quad_ones"
    assert report["summary"]["failed"] == 0


def test_quad_partial_params_rejected(capsys):
    code, out = run_main("quad", "ones", "--m", "1", capsys=capsys)
    assert code == 2
    assert "default grid" in out.err


def test_quad_inapplicable_flag(capsys):
    code, out = run_main("quad", "anchor", "--p", "1", capsys=capsys)
    assert code == 2


def test_suite_mini_config(tmp_path, capsys):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps(MINI_SUITE))
    out_path = tmp_path / "report.json"
    code, out = run_main("suite", "--config", str(path), "--out", str(out_path), capsys=capsys)
    assert code == 0
    report = json.loads(out_path.read_text())
    assert report["summary"]["failed"] == 0
    assert report["summary"]["total"] == 6  # 3 duality + 2 fuzz + 1 quad
    sources = {c["source"] for c in report["checks"]}
    assert sources == {"grid", "fuzz"}


def test_suite_missing_config(capsys):
    code, out = run_main("suite", "--config", "/nonexistent/path.json", capsys=capsys)
    assert code == 2
    assert "cannot read config" in out.err


def test_suite_malformed_config(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"checks": [{"identity": "duality", "typo": 1}]}')
    code, out = run_main("suite", "--config", str(path), capsys=capsys)
    assert code == 2
    assert "typo" in out.err


# ---------------------------------------------------------------------------
# report module


def test_validate_config_rejections():
    with pytest.raises(ConfigError):
        validate_config([])
    with pytest.raises(ConfigError):
        validate_config({"accuracy": 0})
    with pytest.raises(ConfigError):
        validate_config({"parallelism": 0})
    with pytest.raises(ConfigError):
        validate_config({"checks": [{"identity": "duality", "quad": "ones"}]})
    with pytest.raises(ConfigError):
        validate_config({"checks": [{"quad": "ones", "fuzz": {"seed": 1}}]})
    with pytest.raises(ConfigError):
        validate_config({"checks": [{"identity": "duality", "grid": {}, "fuzz": {}}]})
    with pytest.raises(ConfigError):
        validate_config({"engine": {"nope": 1}})
    with pytest.raises(ConfigError):
        validate_config({"schema": 99})


def test_default_config_is_valid():
    cfg = validate_config(default_config())
    assert cfg["schema"] == 1
    assert len(cfg["checks"]) >= 10
    assert load_config(None) == default_config()


def test_run_suite_report_shape_and_determinism():
    r1 = run_suite(MINI_SUITE)
    r2 = run_suite(MINI_SUITE)
    assert r1["schema"] == 1
    for r in (r1, r2):
        r["summary"].pop("runtime_seconds")
    assert r1 == r2


def test_render_table_lists_every_check():
    report = run_suite(MINI_SUITE)
    table = render_table(report)
    assert table.count("\n") == report["summary"]["total"]
    assert "passed" in table.splitlines()[-1]


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mzv.cli", "dual", "(2,3)"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "(1,2,2)"
