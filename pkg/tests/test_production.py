import pytest
from hypothesis import given, strategies as st

from nzeb.production import (
    OutOfLifeError,
    age_at,
    battery_usable_kwh,
    ev_efficiency,
    pv_energy_year,
    replacement_years,
)


def test_pv_first_year():
    assert pv_energy_year(9.5, 1400, 0.005, 0) == pytest.approx(13_300)


def test_pv_second_year():
    assert pv_energy_year(9.5, 1400, 0.005, 1) == pytest.approx(13_233.5)


def test_pv_zero_capacity():
    assert pv_energy_year(0, 1400, 0.005, 7) == 0


def test_battery_new():
    assert battery_usable_kwh(42.21, 0.95, 0.035, 0) == pytest.approx(40.0995)


def test_battery_one_year():
    assert battery_usable_kwh(42.21, 0.95, 0.035, 1) == pytest.approx(38.6960, abs=1e-4)


def test_battery_out_of_life():
    with pytest.raises(OutOfLifeError):
        battery_usable_kwh(42.21, 0.95, 0.035, 10, life=10)


@pytest.mark.parametrize("life,period,expected", [(10, 30, [10, 20]), (15, 30, [15]), (30, 30, [])])
def test_replacement_years(life, period, expected):
    assert replacement_years(life, period) == expected


def test_ev_efficiency():
    assert ev_efficiency(220, 68.7) == pytest.approx(3.2023, abs=1e-4)
    assert ev_efficiency(220, 110) == 2.0
    assert ev_efficiency(0, 68.7) == 0


def test_ev_efficiency_zero_battery():
    with pytest.raises(ZeroDivisionError):
        ev_efficiency(220, 0)


@given(d=st.floats(1e-4, 0.99), t=st.integers(0, 60))
def test_pv_strictly_decreasing(d, t):
    assert pv_energy_year(9.5, 1400, d, t + 1) < pv_energy_year(9.5, 1400, d, t)


@given(a=st.floats(0, 100), b=st.floats(0, 100), t=st.integers(0, 40))
def test_pv_additive(a, b, t):
    lhs = pv_energy_year(a + b, 1400, 0.005, t)
    rhs = pv_energy_year(a, 1400, 0.005, t) + pv_energy_year(b, 1400, 0.005, t)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-9)


@given(life=st.integers(1, 40), period=st.integers(1, 60))
def test_replacement_completeness(life, period):
    reps = replacement_years(life, period)
    for t in range(period):
        last = max([0] + [r for r in reps if r <= t])
        assert t - last < life
        assert t - last == age_at(t, life)
