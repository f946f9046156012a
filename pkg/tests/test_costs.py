import pytest
from hypothesis import given, strategies as st

from nzeb.costs import (
    HEADER,
    CostRow,
    CostTableError,
    CostTrajectory,
    capex_at,
    dump_cost_table,
    load_cost_table,
)

H = ",".join(HEADER) + "\n"


def test_minimal_table():
    t = load_cost_table(H + "2020,2.5,400,20\n2050,0.8,100,10\n")
    assert len(t.rows) == 2
    assert t.rows[1] == CostRow(2050, 0.8, 100.0, 10.0)


def test_header_only():
    with pytest.raises(CostTableError, match="at least 2 rows required"):
        load_cost_table(H)


def test_unsorted_years_name_row():
    with pytest.raises(CostTableError) as exc:
        load_cost_table(H + "2030,1,1,1\n2020,1,1,1\n")
    assert exc.value.row == 3


def test_duplicate_year():
    with pytest.raises(CostTableError, match="duplicate year 2020") as exc:
        load_cost_table(H + "2020,1,1,1\n2020,1,1,1\n")
    assert exc.value.row == 3


def test_non_numeric_cell():
    with pytest.raises(CostTableError, match="row 2: non-numeric pv_capex_usd_per_w"):
        load_cost_table(H + "2020,cheap,1,1\n2030,1,1,1\n")


def test_missing_column():
    with pytest.raises(CostTableError, match="missing column"):
        load_cost_table("year,pv_capex_usd_per_w,battery_capex_usd_per_kwh\n2020,1,1\n2030,1,1\n")


def test_negative_cost():
    with pytest.raises(CostTableError, match="row 3"):
        load_cost_table(H + "2020,1,1,1\n2030,-1,1,1\n")


def test_thousands_separator_rejected():
    with pytest.raises(CostTableError):
        load_cost_table(H + '2020,1,"1,000",1\n2030,1,1,1\n')


@pytest.fixture
def two_rows():
    return load_cost_table(H + "2020,2.0,400,20\n2030,1.0,200,10\n")


def test_midpoint(two_rows):
    assert capex_at(two_rows, 2025, "pv") == pytest.approx(1.5)


def test_clamp_low(two_rows):
    assert capex_at(two_rows, 2010, "pv") == 2.0


def test_clamp_high(two_rows):
    assert capex_at(two_rows, 2040, "battery") == 200.0


def test_node_exact(two_rows):
    assert capex_at(two_rows, 2030, "pv") == 1.0
    assert capex_at(two_rows, 2020, "om") == 20.0


def test_dump_round_trip(fixture_costs):
    assert load_cost_table(dump_cost_table(fixture_costs)) == fixture_costs


def test_fixture_is_monotone(fixture_costs):
    for a, b in zip(fixture_costs.rows, fixture_costs.rows[1:]):
        assert b.pv_capex_usd_per_w <= a.pv_capex_usd_per_w
        assert b.battery_capex_usd_per_kwh <= a.battery_capex_usd_per_kwh


declining = st.lists(st.floats(0, 1000), min_size=2, max_size=8).map(lambda v: sorted(v, reverse=True))


@given(values=declining, data=st.data())
def test_interpolation_monotone_and_exact(values, data):
    years = sorted(data.draw(st.sets(st.integers(1990, 2100), min_size=len(values), max_size=len(values))))
    t = CostTrajectory(tuple(CostRow(y, v, v, v) for y, v in zip(years, values)))
    for y, v in zip(years, values):
        assert capex_at(t, y, "pv") == v
    qs = sorted(data.draw(st.lists(st.floats(1980, 2110), min_size=2, max_size=10)))
    vals = [capex_at(t, q, "battery") for q in qs]
    assert all(b <= a + 1e-9 for a, b in zip(vals, vals[1:]))
