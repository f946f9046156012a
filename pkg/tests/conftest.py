import json
from pathlib import Path

import pytest
from hypothesis import settings

from nzeb.costs import calibrated_fixture, load_cost_table

# keep the whole suite inside its few-second budget
settings.register_profile("nzeb", max_examples=25, deadline=None)
settings.load_profile("nzeb")

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"


@pytest.fixture(scope="session")
def fixture_costs():
    return calibrated_fixture()


@pytest.fixture(scope="session")
def simple_costs():
    # monotone declining, independent of the calibrated fixture
    return load_cost_table(
        "year,pv_capex_usd_per_w,battery_capex_usd_per_kwh,fixed_om_usd_per_kw_yr\n"
        "2020,2.5,600,20\n"
        "2035,1.5,250,15\n"
        "2050,1.0,120,10\n"
    )


@pytest.fixture
def baseline_doc():
    return json.loads((SCENARIOS / "existing_home.json").read_text())


ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
