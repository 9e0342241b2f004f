"""Command-line contract: exit codes, determinism, golden reports."""
from pathlib import Path

import pytest

from bracketlab.cli import main
from bracketlab.config import parse_config
from bracketlab.experiment import read_csv, simulate_dataset

DATA = Path(__file__).parent / "data"
GOLDEN_INI = str(DATA / "golden_run.ini")
GOLDEN_CSV = str(DATA / "golden_data.csv")


def golden(name: str) -> bytes:
    return (DATA / name).read_bytes()


# ---------------------------------------------------------------- simulate


def test_simulate_is_deterministic_across_workers(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", "--config", GOLDEN_INI, "--out", str(a)]) == 0
    assert main(["simulate", "--config", GOLDEN_INI, "--out", str(b), "--workers", "4"]) == 0
    assert a.read_bytes() == b.read_bytes() == golden("golden_data.csv")


def test_simulate_round_trip_matches_memory(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["simulate", "--config", GOLDEN_INI, "--out", str(out)]) == 0
    config = parse_config(GOLDEN_INI)
    assert read_csv(str(out)) == simulate_dataset(config.population)


def test_simulate_seed_override_changes_output(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["simulate", "--config", GOLDEN_INI, "--out", str(out), "--seed", "99"]) == 0
    assert out.read_bytes() != golden("golden_data.csv")


def test_simulate_missing_seed_is_usage_error(tmp_path, capsys):
    config = tmp_path / "run.ini"
    config.write_text("[population]\nbroad = 5\n", encoding="utf-8")
    rc = main(["simulate", "--config", str(config), "--out", str(tmp_path / "d.csv")])
    assert rc == 2
    assert "[population] seed" in capsys.readouterr().err


# ---------------------------------------------------------------- estimate


@pytest.mark.parametrize("stat", ["means", "mwu", "kappa", "tobit"])
def test_estimate_matches_golden_reports(tmp_path, stat):
    rc = main(["estimate", stat, "--data", GOLDEN_CSV, "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / f"{stat}.md").read_bytes() == golden(f"golden_{stat}.md")
    assert (tmp_path / f"{stat}.csv").read_bytes() == golden(f"golden_{stat}.csv")


def test_keep_inconsistent_grows_cells(tmp_path):
    rc = main(
        ["estimate", "means", "--data", GOLDEN_CSV, "--out", str(tmp_path), "--keep-inconsistent"]
    )
    assert rc == 0
    text = (tmp_path / "means.csv").read_text(encoding="utf-8")
    row = next(line for line in text.splitlines() if line.startswith("BROAD,S1"))
    assert row.split(",")[2] == "40"  # every simulated subject kept


def test_kappa_degenerate_surfaces_remediation(tmp_path, capsys):
    # keep only two treatments, so the weight is not estimable
    lines = Path(GOLDEN_CSV).read_text(encoding="utf-8").splitlines(keepends=True)
    kept = [lines[0]] + [ln for ln in lines[1:] if not ln.startswith("LOW")]
    data = tmp_path / "twoarm.csv"
    data.write_text("".join(kept), encoding="utf-8")
    rc = main(["estimate", "kappa", "--data", str(data), "--out", str(tmp_path)])
    assert rc == 1
    assert "all three treatments" in capsys.readouterr().err


def test_estimate_schema_error_has_line_number(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    lines = Path(GOLDEN_CSV).read_text(encoding="utf-8").splitlines(keepends=True)
    lines[2] = lines[2].replace("S2", "S9", 1)
    bad.write_text("".join(lines), encoding="utf-8")
    rc = main(["estimate", "means", "--data", str(bad), "--out", str(tmp_path)])
    assert rc == 1
    assert "line 3" in capsys.readouterr().err


def test_estimate_missing_file_is_failure(tmp_path, capsys):
    rc = main(["estimate", "means", "--data", str(tmp_path / "nope.csv"), "--out", str(tmp_path)])
    assert rc == 1


def test_estimate_config_defaults_and_flag_override(tmp_path):
    config = tmp_path / "est.ini"
    config.write_text(
        "[population]\nseed = 1\n\n[estimators]\nkeep_inconsistent = true\n", encoding="utf-8"
    )
    rc = main(
        ["estimate", "means", "--data", GOLDEN_CSV, "--out", str(tmp_path), "--config", str(config)]
    )
    assert rc == 0
    text = (tmp_path / "means.csv").read_text(encoding="utf-8")
    assert next(l for l in text.splitlines() if l.startswith("BROAD,S1")).split(",")[2] == "40"


def test_unknown_stat_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["estimate", "median", "--data", GOLDEN_CSV, "--out", str(tmp_path)])
    assert exc.value.code == 2


# ------------------------------------------------------------------- power


def test_power_prints_allocation(capsys):
    assert main(["power", "--d", "0.4", "--ratio", "1.5", "--are"]) == 0
    assert capsys.readouterr().out == "n_large=172 n_small=115\n"
    assert main(["power", "--d", "0.4"]) == 0
    assert capsys.readouterr().out == "n_large=132 n_small=132\n"


def test_power_invalid_flags_are_usage_errors(capsys):
    assert main(["power", "--d", "0"]) == 2
    assert main(["power", "--d", "0.4", "--ratio", "0.5"]) == 2
    capsys.readouterr()


def test_power_missing_d_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["power"])
    assert exc.value.code == 2


# ------------------------------------------------------------------ verify


def test_verify_all_matches_golden(tmp_path, capsys):
    rc = main(["verify", "--suite", "all", "--out", str(tmp_path)])
    assert rc == 0
    assert capsys.readouterr().out.encode() == golden("golden_verify.txt")
    assert (tmp_path / "verify.md").read_bytes() == golden("golden_verify.md")
    assert (tmp_path / "verify.csv").read_bytes() == golden("golden_verify.csv")


@pytest.mark.parametrize("suite", ["additivity", "unidentifiability", "cara", "mixture", "warp"])
def test_verify_single_suites_pass(suite, capsys):
    assert main(["verify", "--suite", suite]) == 0
    out = capsys.readouterr().out
    assert out.startswith(f"{suite}:")
    assert "overall: PASS" in out


def test_unknown_suite_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "garp"])
    assert exc.value.code == 2


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
