"""Cash-flow engine for a residential PV / battery / V2H purchase.

Conventions
-----------
* All series values are real 2020 USD. Nominal dollars only appear inside
  the loan arithmetic and are deflated at the general inflation rate.
* Year offset ``t`` is the t-th year of ownership (t = 0 is the install
  year); every flow booked in year ``t`` is discounted by ``(1 + r) ** t``.
* Loan payment ``k`` (k = 1..term) is booked in year ``k - 1``.
* The ITC is taken as an upfront reduction of the initial system cost.
  Replacement purchases do not receive it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from nzeb.costs import CostTrajectory, capex_at
from nzeb.production import ev_efficiency, pv_energy_year, replacement_years
from nzeb.scenario import Scenario

logger = logging.getLogger(__name__)

COST_FIELDS = ("capital_out", "loan_payment", "replacement_out", "om_out", "grid_purchase")
CREDIT_FIELDS = ("interest_tax_shield", "export_credit", "gasoline_offset")


def real_rate(nominal: float, inflation: float) -> float:
    """Fisher identity: real rate implied by a nominal rate and inflation."""
    if inflation <= -1:
        raise ValueError(f"inflation must be > -1, got {inflation}")
    return (1 + nominal) / (1 + inflation) - 1


def discount_factors(rate: float, n: int) -> np.ndarray:
    return (1.0 + rate) ** -np.arange(n, dtype=float)


def present_value(flows, rate: float) -> float:
    flows = np.asarray(flows, dtype=float)
    return float(flows @ discount_factors(rate, len(flows)))


def deflate(nominal_flows, inflation: float) -> np.ndarray:
    """Convert year-``t`` nominal amounts to real (year-0) dollars."""
    flows = np.asarray(nominal_flows, dtype=float)
    return flows / (1.0 + inflation) ** np.arange(len(flows))


def to_nominal(real_flows, inflation: float) -> np.ndarray:
    flows = np.asarray(real_flows, dtype=float)
    return flows * (1.0 + inflation) ** np.arange(len(flows))


def annuity_due_factor(rate: float, n: int) -> float:
    """Present value of 1 paid at the start of each of ``n`` years."""
    if rate == 0:
        return float(n)
    return float(discount_factors(rate, n).sum())


# ---------------------------------------------------------------------------
# loans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AmortizationPeriod:
    period: int
    payment: float
    interest_portion: float
    principal_portion: float
    remaining_balance: float


@dataclass(frozen=True)
class AmortizationSchedule:
    principal: float
    annual_rate: float
    term_yr: int
    periods: tuple[AmortizationPeriod, ...]

    @property
    def payments(self) -> list[float]:
        return [p.payment for p in self.periods]

    @property
    def interest(self) -> list[float]:
        return [p.interest_portion for p in self.periods]


def level_payment(principal: float, annual_rate: float, term_yr: int) -> float:
    if annual_rate == 0:
        return principal / term_yr
    # expm1/log1p keep tiny rates from collapsing the denominator to zero
    return principal * annual_rate / -math.expm1(-term_yr * math.log1p(annual_rate))


def amortization_schedule(principal: float, annual_rate: float, term_yr: int) -> AmortizationSchedule:
    """Level-payment annual amortization (nominal dollars)."""
    if annual_rate <= -1:
        raise ValueError(f"loan rate must be > -100%, got {annual_rate}")
    if principal < 0:
        raise ValueError(f"principal must be >= 0, got {principal}")
    if term_yr < 1:
        raise ValueError(f"loan term must be >= 1 year, got {term_yr}")

    pmt = level_payment(principal, annual_rate, term_yr)
    balance = principal
    periods = []
    for k in range(1, term_yr + 1):
        interest = balance * annual_rate
        principal_part = pmt - interest
        if k == term_yr:
            # absorb float residue so the loan closes exactly
            principal_part = balance
            interest = pmt - principal_part
        balance -= principal_part
        periods.append(AmortizationPeriod(k, pmt, interest, principal_part, balance))
    return AmortizationSchedule(principal, annual_rate, term_yr, tuple(periods))


def apply_itc(capex: float, itc_rate: float, enabled: bool) -> float:
    return capex * (1 - itc_rate) if enabled else capex


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CashflowYear:
    year_offset: int
    capital_out: float = 0.0
    loan_payment: float = 0.0
    interest_tax_shield: float = 0.0
    replacement_out: float = 0.0
    om_out: float = 0.0
    grid_purchase: float = 0.0
    export_credit: float = 0.0
    gasoline_offset: float = 0.0

    @property
    def costs(self) -> float:
        return sum(getattr(self, f) for f in COST_FIELDS)

    @property
    def credits(self) -> float:
        return sum(getattr(self, f) for f in CREDIT_FIELDS)

    @property
    def net(self) -> float:
        return self.credits - self.costs


@dataclass(frozen=True)
class CapitalBreakdown:
    pv_usd: float = 0.0
    battery_usd: float = 0.0
    charger_usd: float = 0.0
    itc_usd: float = 0.0
    down_payment_usd: float = 0.0
    loan_principal_usd: float = 0.0

    @property
    def gross_usd(self) -> float:
        return self.pv_usd + self.battery_usd + self.charger_usd

    @property
    def net_usd(self) -> float:
        return self.gross_usd - self.itc_usd


@dataclass(frozen=True)
class CashflowSeries:
    install_year: int
    years: tuple[CashflowYear, ...]
    capital: CapitalBreakdown = field(default_factory=CapitalBreakdown)
    pv_energy_kwh: tuple[float, ...] = ()
    warnings: tuple[str, ...] = ()

    def __len__(self):
        return len(self.years)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(y, name) for y in self.years], dtype=float)

    @property
    def net(self) -> np.ndarray:
        return np.array([y.net for y in self.years], dtype=float)

    @property
    def system_costs(self) -> np.ndarray:
        """Ownership cost of the equipment alone (no bills, credits other than the tax shield)."""
        return (
            self.column("capital_out")
            + self.column("loan_payment")
            - self.column("interest_tax_shield")
            + self.column("replacement_out")
            + self.column("om_out")
        )


def zero_series(n: int, install_year: int = 2020) -> CashflowSeries:
    return CashflowSeries(install_year, tuple(CashflowYear(t) for t in range(n)))


def self_supply_fraction(s: Scenario) -> float:
    """Share of load served on site: daytime coincidence plus what storage shifts."""
    sy = s.system
    if sy.total_pv_kw <= 0:
        return 0.0
    if sy.v2h is not None:
        storage = 1.0
    elif sy.installed_battery_kwh > 0:
        storage = sy.storage_fraction
    else:
        storage = 0.0
    d = s.home.daytime_load_fraction
    return d + (1 - d) * storage


def ev_charging_kwh(s: Scenario) -> float:
    if s.annual_ev_miles <= 0:
        return 0.0
    v = s.system.v2h
    return s.annual_ev_miles / ev_efficiency(v.ev_range_mi, v.ev_battery_kwh)


def cashflow_series(s: Scenario, install_year: int, traj: CostTrajectory) -> CashflowSeries:
    """Year-by-year real cash flows for a system installed in ``install_year``.

    Energy settles annually: the self-supplied share of load never touches
    the grid, the rest is bought at retail, and the PV surplus (or deficit)
    against the self-supplied energy is settled at the export credit (or at
    retail when it is a deficit, i.e. a net-metering true-up).
    """
    fi, sy, ta = s.finance, s.system, s.tariff
    n = fi.analysis_period_yr
    warns = []
    if not traj.covers(install_year):
        msg = (
            f"install year {install_year} outside cost table "
            f"{traj.first_year}-{traj.last_year}; costs clamped"
        )
        logger.warning(msg)
        warns.append(msg)

    # capital
    pv_w = sy.total_pv_kw * 1000.0
    pv_usd = pv_w * capex_at(traj, install_year, "pv")
    batt_usd = sy.installed_battery_kwh * capex_at(traj, install_year, "battery")
    charger_usd = sy.v2h.charger_cost_usd if sy.v2h is not None else 0.0
    gross = pv_usd + batt_usd + charger_usd
    net_capex = apply_itc(gross, fi.itc_rate, s.itc_enabled)
    down = fi.down_payment_fraction * net_capex
    principal = net_capex - down
    capital = CapitalBreakdown(pv_usd, batt_usd, charger_usd, gross - net_capex, down, principal)

    cols = {name: np.zeros(n) for name in COST_FIELDS + CREDIT_FIELDS}
    cols["capital_out"][0] = down

    if principal > 0:
        sched = amortization_schedule(principal, fi.loan_rate, fi.loan_term_yr)
        k = min(fi.loan_term_yr, n)
        cols["loan_payment"][:k] = deflate(sched.payments, fi.inflation)[:k]
        if fi.interest_deductible:
            cols["interest_tax_shield"][:k] = fi.marginal_tax_rate * deflate(sched.interest, fi.inflation)[:k]

    if sy.installed_battery_kwh > 0:
        for t in replacement_years(sy.battery_life_yr, n):
            cols["replacement_out"][t] += sy.installed_battery_kwh * capex_at(traj, install_year + t, "battery")
    if pv_w > 0:
        for t in replacement_years(sy.inverter_life_yr, n):
            cols["replacement_out"][t] += pv_w * sy.inverter_cost_usd_per_w

    load = s.effective_consumption_kwh + ev_charging_kwh(s)
    self_supplied = self_supply_fraction(s) * load
    energy = []
    for t in range(n):
        esc = (1 + fi.real_elec_escalation) ** t
        retail = ta.retail_price_usd_per_kwh * esc
        export = ta.export_credit_usd_per_kwh * esc
        pv_kwh = pv_energy_year(sy.total_pv_kw, s.home.specific_yield_kwh_per_kw, sy.pv_degradation_per_yr, t)
        energy.append(pv_kwh)
        surplus = pv_kwh - self_supplied
        cols["grid_purchase"][t] = (load - self_supplied) * retail
        cols["export_credit"][t] = surplus * (export if surplus >= 0 else retail)
        cols["om_out"][t] = sy.total_pv_kw * capex_at(traj, install_year + t, "om")

    if s.annual_ev_miles > 0:
        cols["gasoline_offset"][:] = s.annual_ev_miles / ta.gasoline_mpg * ta.gasoline_price_usd_per_gal

    years = tuple(
        CashflowYear(t, **{name: float(cols[name][t]) for name in cols}) for t in range(n)
    )
    return CashflowSeries(install_year, years, capital, tuple(energy), tuple(warns))


def npv(series: CashflowSeries, real_discount: float) -> float:
    """Net present value (credits minus costs) at the real discount rate."""
    if len(series) == 0:
        return 0.0
    return present_value(series.net, real_discount)


def levelize_monthly(series: CashflowSeries, real_discount: float, service_yr: int) -> float:
    """Level real monthly amount with the same present value over ``service_yr`` years.

    Negative when the series is a net cost.
    """
    if service_yr > len(series):
        raise ValueError(f"service time {service_yr} exceeds series length {len(series)}")
    pv = present_value(series.net[:service_yr], real_discount)
    return pv / annuity_due_factor(real_discount, service_yr) / 12.0


def baseline_bill_series(s: Scenario) -> np.ndarray:
    """Real annual grid bill of the same home with no system and no improvement."""
    fi = s.finance
    t = np.arange(fi.analysis_period_yr)
    price = s.tariff.retail_price_usd_per_kwh * (1 + fi.real_elec_escalation) ** t
    return s.home.annual_consumption_kwh * price
