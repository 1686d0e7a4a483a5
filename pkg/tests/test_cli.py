from __future__ import annotations

import csv
import json

import pytest

from agropolicy.cli import EXIT_CONFIG, EXIT_FLAGGED, EXIT_IO, EXIT_OK, main
from conftest import FIXTURES

DATA_FILES = {
    "regime_taxes.csv",
    "burden.csv",
    "welfare.csv",
    "incidence.csv",
    "land_balance.csv",
    "segments.csv",
}


def scenario_file(tmp_path, text):
    path = tmp_path / "s.ini"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_all_writes_six_csvs_and_report(tmp_path):
    out = tmp_path / "out"
    assert main(["all", "--out", str(out)]) == EXIT_OK
    names = {p.name for p in out.iterdir()}
    assert DATA_FILES <= names
    assert {"report.json", "scenario_echo.ini", "run_meta.json"} <= names
    assert len([n for n in names if n.endswith(".csv")]) == 6
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert set(report) >= {"tax", "mtl", "equilibrium", "incidence", "shadow", "segment", "flags"}
    assert "finished_at" not in report


def test_regime_taxes_match_fixture(tmp_path):
    assert main(["tax", "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "regime_taxes.csv").read_bytes() == (FIXTURES / "regime_taxes.csv").read_bytes()


def test_welfare_header(tmp_path):
    main(["equilibrium", "--out", str(tmp_path)])
    first = (tmp_path / "welfare.csv").read_text(encoding="utf-8").splitlines()[0]
    assert first == "metric,min_uah,max_uah,min_usd,max_usd"


def test_burden_header(tmp_path):
    main(["mtl", "--out", str(tmp_path)])
    first = (tmp_path / "burden.csv").read_text(encoding="utf-8").splitlines()[0]
    assert first == "regime,baseline_uah_ha,mtl_net_uah_ha,total_uah_ha"


def test_equilibrium_without_bill_is_zero(tmp_path):
    s = scenario_file(tmp_path, "[mtl]\nbill = none\n")
    assert main(["equilibrium", "--scenario", s, "--out", str(tmp_path / "o")]) == EXIT_OK
    with open(tmp_path / "o" / "welfare.csv", encoding="utf-8") as fh:
        rows = {r["metric"]: r for r in csv.DictReader(fh)}
    assert rows["dwl"]["min_uah"] == rows["dwl"]["max_uah"] == "0"
    assert rows["budget_revenue"]["max_usd"] == "0.0"


def test_permuted_grid_same_rows(tmp_path):
    a = scenario_file(tmp_path, "")
    main(["equilibrium", "--scenario", a, "--out", str(tmp_path / "a")])
    b = tmp_path / "b.ini"
    b.write_text(
        "[market]\nelasticity_cf_grid = -0.7, -0.5, -0.3, -0.6, -0.4\nelasticity_if_grid = -0.3, -0.1, -0.2\n",
        encoding="utf-8",
    )
    main(["equilibrium", "--scenario", str(b), "--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "welfare.csv").read_bytes() == (tmp_path / "b" / "welfare.csv").read_bytes()


def test_shadow_over_explained_flags(tmp_path, capsys):
    s = scenario_file(tmp_path, "[land_balance]\ndeclared_ep4 = 40\n")
    assert main(["shadow", "--scenario", s, "--out", str(tmp_path / "o")]) == EXIT_FLAGGED
    with open(tmp_path / "o" / "land_balance.csv", encoding="utf-8") as fh:
        terms = {r["term"]: float(r["value"]) for r in csv.DictReader(fh)}
    assert terms["informal"] == pytest.approx(33.4 - (40 + 1.5 + 5.5 + 0.9))
    assert "over-explain" in capsys.readouterr().err


def test_corner_solution_flags(tmp_path):
    s = scenario_file(tmp_path, "[mtl]\nflat_rate = 1\n[tax]\nngo_per_ha = 200000\n")
    assert main(["equilibrium", "--scenario", s, "--out", str(tmp_path / "o")]) == EXIT_FLAGGED


def test_config_error_exit(tmp_path, capsys):
    s = scenario_file(tmp_path, "[tax]\nrate_land_tax = 1.5\n")
    assert main(["tax", "--scenario", s, "--out", str(tmp_path)]) == EXIT_CONFIG
    assert ":2:" in capsys.readouterr().err


def test_missing_scenario_is_config_error(tmp_path):
    assert main(["tax", "--scenario", str(tmp_path / "none.ini")]) == EXIT_CONFIG


def test_unwritable_out_dir(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x", encoding="utf-8")
    assert main(["tax", "--out", str(blocker / "sub")]) == EXIT_IO


def test_missing_cohort_file_is_io_error(tmp_path):
    s = scenario_file(tmp_path, "[scenario]\ncohorts = missing.csv\n")
    assert main(["incidence", "--scenario", s, "--out", str(tmp_path / "o")]) == EXIT_IO


def test_segment_batch(tmp_path):
    farms = tmp_path / "farms.csv"
    farms.write_text("farm_id,annual_income_eur,employees\nA,5000000,30\nB,40000,2\n", encoding="utf-8")
    s = scenario_file(tmp_path, f"[scenario]\nfarms = {farms.name}\n")
    assert main(["segment", "--scenario", s, "--out", str(tmp_path / "o")]) == EXIT_OK
    text = (tmp_path / "o" / "segments.csv").read_text(encoding="utf-8")
    assert text == "farm_id,segment,estimated_size\nA,Small,\nB,Micro 0-0.05,\n"


def test_scenario_out_dir_used_without_flag(tmp_path):
    s = scenario_file(tmp_path, "[scenario]\nout_dir = results\n")
    assert main(["tax", "--scenario", s]) == EXIT_OK
    assert (tmp_path / "results" / "regime_taxes.csv").exists()
