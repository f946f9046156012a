import csv
import json
from pathlib import Path

import pytest

from nzeb.cli import main
from nzeb.scenario import Scenario
from nzeb.sweep import SweepError, SweepRequest, apply_variant, explain_run, run_sweep, sweep

ROOT = Path(__file__).resolve().parents[1]
SCEN = ROOT / "scenarios" / "existing_home.json"
COSTS = ROOT / "scenarios" / "calibrated_costs.csv"


def _read(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_bundled_and_shipped_fixture_agree():
    from importlib import resources

    bundled = resources.files("nzeb.data").joinpath("calibrated_costs.csv").read_text()
    assert bundled == COSTS.read_text()


def test_variants():
    base = Scenario()
    assert apply_variant(base, "pv-only-noitc").system.storage_fraction == 0
    assert not apply_variant(base, "pv-only-noitc").itc_enabled
    v = apply_variant(base, "improved-v2h-extra-itc")
    assert v.system.total_pv_kw == pytest.approx(6.4885 + 2.2)
    assert v.system.v2h is not None
    assert apply_variant(base, "pv-v2h-extra-gas").annual_ev_miles == 10_000


def test_unknown_variant():
    with pytest.raises(SweepError):
        apply_variant(Scenario(), "pv-solar-roadways")


def test_run_sweep_outputs(tmp_path):
    req = SweepRequest(str(SCEN), str(COSTS), 2020, 2050, str(tmp_path), variants=("pv-batt100-itc", "pv-batt100-noitc"))
    assert run_sweep(req) == 0
    rows = _read(tmp_path / "savings.csv")
    assert list(rows[0]) == ["install_year", "scenario_label", "monthly_savings_usd"]
    for label in ("pv-batt100-itc", "pv-batt100-noitc"):
        assert sum(r["scenario_label"] == label for r in rows) == 31
    assert list(_read(tmp_path / "lcoe.csv")[0]) == [
        "install_year", "scenario_label", "lcoe_usd_per_kwh", "gas_equiv_usd_per_gal",
    ]
    xo = {r["scenario_label"]: int(r["crossover_year"]) for r in _read(tmp_path / "crossover.csv")}
    assert xo["pv-batt100-itc"] <= xo["pv-batt100-noitc"]


def test_rows_sorted_and_formatted(tmp_path):
    req = SweepRequest(str(SCEN), str(COSTS), 2020, 2022, str(tmp_path), variants=("pv-v2h", "config"))
    assert run_sweep(req) == 0
    rows = _read(tmp_path / "savings.csv")
    keys = [(r["scenario_label"], int(r["install_year"])) for r in rows]
    assert keys == sorted(keys)
    assert all(len(r["monthly_savings_usd"].split(".")[1]) == 2 for r in rows)
    assert all(len(r["lcoe_usd_per_kwh"].split(".")[1]) == 4 for r in _read(tmp_path / "lcoe.csv"))


def test_serial_equals_parallel(fixture_costs):
    labels = ["pv-batt50-itc", "pv-v2h-noitc", "improved-batt100"]
    a = sweep(Scenario(), fixture_costs, labels, 2020, 2050, jobs=1)
    b = sweep(Scenario(), fixture_costs, labels, 2020, 2050, jobs=4)
    assert a.rows == b.rows


def test_plotdata_and_figures(tmp_path):
    req = SweepRequest(str(SCEN), str(COSTS), 2020, 2030, str(tmp_path), formats=("csv", "plotdata", "figures"),
                       variants=("pv-only", "pv-batt100"))
    assert run_sweep(req) == 0
    wide = _read(tmp_path / "savings_plot.csv")
    assert list(wide[0]) == ["install_year", "pv-batt100", "pv-only"]
    assert len(wide) == 11
    for name in ("savings.png", "lcoe.png"):
        assert (tmp_path / name).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_malformed_cost_table_exit_1(tmp_path, caplog):
    bad = tmp_path / "bad.csv"
    bad.write_text(COSTS.read_text().replace("2025,", "2025x,", 1))
    out = tmp_path / "out"
    assert run_sweep(SweepRequest(str(SCEN), str(bad), out_dir=str(out))) == 1
    assert "row 7" in caplog.text
    assert not out.exists()


def test_invalid_scenario_exit_1(tmp_path):
    bad = tmp_path / "s.json"
    bad.write_text(json.dumps({"home": {"annual_consumption_kwh": -5}}))
    assert run_sweep(SweepRequest(str(bad), str(COSTS), out_dir=str(tmp_path / "o"))) == 1


def test_write_failure_exit_2_and_cleanup(tmp_path, monkeypatch):
    import nzeb.sweep as sw

    out = tmp_path / "o"
    real_open = open
    calls = []

    def flaky_open(path, *a, **kw):
        if str(path).startswith(str(out)):
            calls.append(path)
            if len(calls) == 2:
                raise OSError("disk full")
        return real_open(path, *a, **kw)

    monkeypatch.setattr(sw, "open", flaky_open, raising=False)
    assert run_sweep(SweepRequest(str(SCEN), str(COSTS), 2020, 2021, str(out))) == 2
    assert list(out.iterdir()) == []


def test_bad_request():
    assert run_sweep(SweepRequest(str(SCEN), str(COSTS), 2050, 2020, "x")) == 1
    with pytest.raises(SweepError):
        SweepRequest("", str(COSTS)).check()


def test_explain_baseline_shows_battery_replacements():
    text = explain_run(SweepRequest(str(SCEN), str(COSTS), variants=("config",)), 2020)
    assert "battery replacements at year offsets: 10, 20" in text
    assert "wall battery" in text


def test_explain_grid_only():
    text = explain_run(SweepRequest(str(ROOT / "scenarios" / "grid_only.json"), str(COSTS)), 2020)
    table = text.split("\n")
    header = next(line for line in table if line.lstrip().startswith("t "))
    assert "grid purchase" in header
    for word in ("capital", "loan", "replacements", "O&M", "export"):
        assert word not in header
    assert "capital:" not in text


def test_explain_v2h():
    text = explain_run(SweepRequest(str(SCEN), str(COSTS), variants=("pv-v2h",)), 2020)
    assert "bidirectional charger          6000.00" in text
    assert "wall battery  " not in text
    assert "battery replacements" not in text


def test_cli_main(tmp_path, capsys):
    assert main(["--scenario", str(SCEN), "--costs", str(COSTS), "--out", str(tmp_path), "--from", "2020",
                 "--to", "2025", "--variants", "pv-batt100-itc,pv-batt100-noitc"]) == 0
    assert len(_read(tmp_path / "savings.csv")) == 12
    assert main(["--scenario", str(SCEN), "--costs", str(COSTS), "--explain", "2030"]) == 0
    assert "install year 2030" in capsys.readouterr().out


def test_cli_needs_out():
    assert main(["--scenario", str(SCEN), "--costs", str(COSTS)]) == 1


def test_cli_does_not_read_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("NZEB_OUT", str(tmp_path / "env"))
    assert main(["--scenario", str(SCEN), "--costs", str(COSTS), "--out", str(tmp_path / "o"), "--to", "2020"]) == 0
    assert not (tmp_path / "env").exists()
