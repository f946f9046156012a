"""Physical schedules: PV output, battery aging, replacement calendars, EV efficiency.

Everything here is annual-energy based. Degradation compounds geometrically.
"""

from __future__ import annotations


class OutOfLifeError(ValueError):
    """A battery was queried at an age it should already have been replaced."""


def pv_energy_year(pv_kw: float, specific_yield: float, degradation: float, t: int) -> float:
    """Annual PV output (kWh) in year offset ``t`` after installation."""
    return pv_kw * specific_yield * (1.0 - degradation) ** t


def pv_energy_schedule(pv_kw, specific_yield, degradation, years: int) -> list[float]:
    return [pv_energy_year(pv_kw, specific_yield, degradation, t) for t in range(years)]


def battery_usable_kwh(nameplate: float, roundtrip_eff: float, degradation: float, age: int, life: int | None = None) -> float:
    """Usable battery capacity at ``age`` years.

    Round-trip efficiency is applied as a flat capacity derate.
    """
    if age < 0:
        raise ValueError(f"age must be >= 0, got {age}")
    if life is not None and age >= life:
        raise OutOfLifeError(f"battery age {age} is not below its {life}-year life")
    return nameplate * roundtrip_eff * (1.0 - degradation) ** age


def replacement_years(life_yr: int, analysis_period_yr: int) -> list[int]:
    """Year offsets at which a component with ``life_yr`` is re-purchased.

    A replacement falling exactly on the end of the analysis period is not bought.
    """
    if life_yr < 1:
        raise ValueError(f"life must be >= 1 year, got {life_yr}")
    return list(range(life_yr, analysis_period_yr, life_yr))


def age_at(t: int, life_yr: int) -> int:
    """Age of the unit in service at year offset ``t`` given periodic replacement."""
    return t % life_yr


def ev_efficiency(range_mi: float, battery_kwh: float) -> float:
    """EV driving efficiency in miles per kWh."""
    if battery_kwh == 0:
        raise ZeroDivisionError("EV battery capacity must be > 0")
    return range_mi / battery_kwh
