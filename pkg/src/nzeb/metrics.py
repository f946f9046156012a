"""Household-facing results: LCOE, gasoline equivalence, bills, savings, crossover."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from nzeb.costs import CostTrajectory
from nzeb.finance import baseline_bill_series, cashflow_series, discount_factors, levelize_monthly
from nzeb.scenario import Scenario


@dataclass(frozen=True)
class SavingsPoint:
    install_year: int
    monthly_savings_usd: float
    scenario_label: str = ""


@dataclass(frozen=True)
class DrivingSavings:
    gas_cost_yr: float
    ev_cost_yr: float
    savings_yr: float
    savings_month: float


def lcoe(cost_series: Sequence[float], energy_series: Sequence[float], real_discount: float, service_yr: int) -> float:
    """Discounted cost over discounted energy for the first ``service_yr`` years."""
    if len(cost_series) != len(energy_series):
        raise ValueError("cost and energy series must have equal length")
    if len(cost_series) < service_yr:
        raise ValueError(f"series shorter than service time {service_yr}")
    df = discount_factors(real_discount, service_yr)
    energy = float(np.asarray(energy_series[:service_yr], dtype=float) @ df)
    if not energy > 0:
        raise ValueError("discounted energy must be > 0")
    return float(np.asarray(cost_series[:service_yr], dtype=float) @ df) / energy


def gas_equivalent(price_usd_per_kwh: float, mpg: float, ev_mi_per_kwh: float) -> float:
    """Express an electricity price as dollars per gallon of gasoline displaced."""
    if ev_mi_per_kwh <= 0:
        raise ValueError("EV efficiency must be > 0")
    return price_usd_per_kwh * mpg / ev_mi_per_kwh


def monthly_grid_bill(annual_kwh: float, price_usd_per_kwh: float) -> float:
    return annual_kwh * price_usd_per_kwh / 12.0


def system_lcoe(s: Scenario, install_year: int, traj: CostTrajectory) -> float:
    """Levelized cost of the on-site electricity, equipment costs only."""
    series = cashflow_series(s, install_year, traj)
    return lcoe(series.system_costs, series.pv_energy_kwh, s.finance.real_discount, s.finance.service_time_yr)


def monthly_savings(s: Scenario, install_year: int, traj: CostTrajectory, label: str = "") -> SavingsPoint:
    """Levelized baseline bill minus levelized cost of owning the system.

    Positive means the household pays less than it would buying everything
    from the grid.
    """
    fi = s.finance
    r, n = fi.real_discount, fi.service_time_yr
    baseline = float(baseline_bill_series(s)[:n] @ discount_factors(r, n)) / float(discount_factors(r, n).sum()) / 12.0
    series = cashflow_series(s, install_year, traj)
    # levelize_monthly is signed (negative = cost), so adding it subtracts cost
    savings = baseline + levelize_monthly(series, r, n)
    return SavingsPoint(install_year, savings, label)


def crossover_year(points: Sequence[SavingsPoint]) -> int | None:
    """First install year whose monthly savings are non-negative."""
    if not points:
        raise ValueError("crossover_year needs at least one point")
    for p in points:
        if p.monthly_savings_usd >= 0:
            return p.install_year
    return None


def driving_savings(
    annual_mi: float,
    mpg: float,
    gas_usd_per_gal: float,
    ev_mi_per_kwh: float,
    elec_usd_per_kwh: float,
) -> DrivingSavings:
    if mpg <= 0 or ev_mi_per_kwh <= 0:
        raise ValueError("mpg and EV efficiency must be > 0")
    gas = annual_mi / mpg * gas_usd_per_gal
    ev = annual_mi / ev_mi_per_kwh * elec_usd_per_kwh
    return DrivingSavings(gas, ev, gas - ev, (gas - ev) / 12.0)


def statewide_outflow(total_spend_usd: float, import_share: float) -> float:
    if not 0 <= import_share <= 1:
        raise ValueError(f"import share must be in [0, 1], got {import_share}")
    return total_spend_usd * import_share


def solar_driving_range(extra_pv_kw: float, specific_yield: float, ev_mi_per_kwh: float) -> float:
    """Miles per year that extra PV capacity can power."""
    return extra_pv_kw * specific_yield * ev_mi_per_kwh
