"""Install-year sweeps over named scenario variants, CSV output and audit reports."""

from __future__ import annotations

import csv
import io
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from nzeb.costs import CostTableError, CostTrajectory, load_cost_table
from nzeb.finance import cashflow_series, levelize_monthly, COST_FIELDS, CREDIT_FIELDS
from nzeb.metrics import SavingsPoint, crossover_year, gas_equivalent, monthly_savings, system_lcoe
from nzeb.production import ev_efficiency, replacement_years
from nzeb.scenario import (
    Scenario,
    ScenarioError,
    V2HSpec,
    ValidationError,
    load_scenario,
    validate,
)
from nzeb.sizing import apply_efficiency_improvement

logger = logging.getLogger(__name__)

FLORIDA_IMPROVEMENT = 0.317
EXTRA_PV_FOR_EV_KW = 2.2
SOLAR_DRIVING_MILES = 10_000.0
FORMATS = ("csv", "plotdata", "figures")

SAVINGS_HEADER = ("install_year", "scenario_label", "monthly_savings_usd")
LCOE_HEADER = ("install_year", "scenario_label", "lcoe_usd_per_kwh", "gas_equiv_usd_per_gal")
CROSSOVER_HEADER = ("scenario_label", "crossover_year")


class SweepError(ValueError):
    pass


# ---------------------------------------------------------------------------
# variants
# ---------------------------------------------------------------------------


def _as_configured(s: Scenario) -> Scenario:
    return s


def _storage(frac):
    def f(s: Scenario) -> Scenario:
        return replace(s, system=replace(s.system, storage_fraction=frac, v2h=None))

    return f


def _v2h(extra_kw: float = 0.0, miles: float = 0.0):
    def f(s: Scenario) -> Scenario:
        v2h = s.system.v2h or V2HSpec()
        return replace(
            s,
            system=replace(s.system, v2h=v2h, extra_pv_kw=extra_kw),
            annual_ev_miles=miles,
        )

    return f


def _improved(inner):
    def f(s: Scenario) -> Scenario:
        if s.improvement_fraction == 0:
            s = replace(
                s,
                system=apply_efficiency_improvement(s.system, FLORIDA_IMPROVEMENT),
                improvement_fraction=FLORIDA_IMPROVEMENT,
            )
        return inner(s)

    return f


VARIANTS = {
    "config": _as_configured,
    "pv-only": _storage(0.0),
    "pv-batt50": _storage(0.5),
    "pv-batt100": _storage(1.0),
    "pv-v2h": _v2h(),
    "pv-v2h-extra": _v2h(EXTRA_PV_FOR_EV_KW),
    "pv-v2h-extra-gas": _v2h(EXTRA_PV_FOR_EV_KW, SOLAR_DRIVING_MILES),
    "improved-batt100": _improved(_storage(1.0)),
    "improved-v2h": _improved(_v2h()),
    "improved-v2h-extra": _improved(_v2h(EXTRA_PV_FOR_EV_KW)),
}


def apply_variant(base: Scenario, label: str) -> Scenario:
    """Derive the scenario named by ``label``.

    A label is a system variant from ``VARIANTS`` optionally suffixed with
    ``-itc`` or ``-noitc``; without a suffix the config's ITC flag is kept.
    """
    name, itc = label, None
    if label.endswith("-noitc"):
        name, itc = label[: -len("-noitc")], False
    elif label.endswith("-itc"):
        name, itc = label[: -len("-itc")], True
    if name not in VARIANTS:
        raise SweepError(f"unknown variant {label!r}; known: {', '.join(sorted(VARIANTS))} (+ -itc/-noitc)")
    s = VARIANTS[name](base)
    if itc is not None:
        s = replace(s, itc_enabled=itc)
    problems = validate(s)
    if problems:
        raise ValidationError(problems)
    return s


# ---------------------------------------------------------------------------
# request + results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRequest:
    scenario_path: str
    costs_path: str
    start_year: int = 2020
    end_year: int = 2050
    out_dir: str = "out"
    formats: tuple[str, ...] = ("csv",)
    variants: tuple[str, ...] = ("config",)
    jobs: int = 1

    def check(self):
        if not self.scenario_path or not self.costs_path:
            raise SweepError("scenario and cost table paths must be non-empty")
        if self.start_year > self.end_year:
            raise SweepError(f"start year {self.start_year} is after end year {self.end_year}")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise SweepError(f"unknown output format(s) {bad}; choose from {FORMATS}")
        if not self.variants:
            raise SweepError("at least one variant is required")
        if len(set(self.variants)) != len(self.variants):
            raise SweepError("variant labels must be unique")


@dataclass(frozen=True)
class YearResult:
    label: str
    install_year: int
    monthly_savings_usd: float
    lcoe_usd_per_kwh: float | None
    gas_equiv_usd_per_gal: float | None


@dataclass
class SweepResult:
    rows: list[YearResult] = field(default_factory=list)

    def points(self, label: str) -> list[SavingsPoint]:
        return [
            SavingsPoint(r.install_year, r.monthly_savings_usd, r.label)
            for r in self.rows
            if r.label == label
        ]

    @property
    def labels(self) -> list[str]:
        return sorted({r.label for r in self.rows})

    def crossovers(self) -> dict[str, int | None]:
        return {label: crossover_year(self.points(label)) for label in self.labels}


def load_inputs(req: SweepRequest) -> tuple[Scenario, CostTrajectory]:
    with open(req.scenario_path, encoding="utf-8") as fh:
        scenario = load_scenario(fh.read())
    with open(req.costs_path, encoding="utf-8") as fh:
        try:
            traj = load_cost_table(fh.read())
        except CostTableError as exc:
            raise CostTableError(f"{req.costs_path}: {exc}") from None
    return scenario, traj


def _ev_eff(s: Scenario) -> float:
    v = s.system.v2h or V2HSpec()
    return ev_efficiency(v.ev_range_mi, v.ev_battery_kwh)


def evaluate_year(s: Scenario, label: str, year: int, traj: CostTrajectory) -> YearResult:
    point = monthly_savings(s, year, traj, label)
    if s.system.total_pv_kw > 0:
        lc = system_lcoe(s, year, traj)
        gas = gas_equivalent(lc, s.tariff.gasoline_mpg, _ev_eff(s))
    else:
        lc = gas = None
    return YearResult(label, year, point.monthly_savings_usd, lc, gas)


def sweep(base: Scenario, traj: CostTrajectory, labels, start: int, end: int, jobs: int = 1) -> SweepResult:
    scenarios = {label: apply_variant(base, label) for label in labels}
    tasks = [(label, y) for label in labels for y in range(start, end + 1)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda a: evaluate_year(scenarios[a[0]], a[0], a[1], traj), tasks))
    else:
        rows = [evaluate_year(scenarios[label], label, y, traj) for label, y in tasks]
    rows.sort(key=lambda r: (r.label, r.install_year))
    return SweepResult(rows)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _money(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _rate(x: float | None) -> str:
    return "" if x is None else f"{x:.4f}"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def render_tables(result: SweepResult) -> dict[str, str]:
    out = {
        "savings.csv": _csv(
            SAVINGS_HEADER,
            [(r.install_year, r.label, _money(r.monthly_savings_usd)) for r in result.rows],
        ),
        "lcoe.csv": _csv(
            LCOE_HEADER,
            [
                (
                    r.install_year,
                    r.label,
                    _rate(r.lcoe_usd_per_kwh),
                    "" if r.gas_equiv_usd_per_gal is None else _money(r.gas_equiv_usd_per_gal),
                )
                for r in result.rows
            ],
        ),
        "crossover.csv": _csv(
            CROSSOVER_HEADER,
            [(label, "none" if y is None else y) for label, y in result.crossovers().items()],
        ),
    }
    return out


def render_plotdata(result: SweepResult) -> dict[str, str]:
    """Wide tables (one column per variant) ready for a column or line chart."""
    labels = result.labels
    years = sorted({r.install_year for r in result.rows})
    by_key = {(r.label, r.install_year): r for r in result.rows}
    savings = [
        [y] + [_money(by_key[(label, y)].monthly_savings_usd) for label in labels] for y in years
    ]
    lcoe = [[y] + [_rate(by_key[(label, y)].lcoe_usd_per_kwh) for label in labels] for y in years]
    return {
        "savings_plot.csv": _csv(["install_year", *labels], savings),
        "lcoe_plot.csv": _csv(["install_year", *labels], lcoe),
    }


def run_sweep(req: SweepRequest) -> int:
    """Run the sweep and write outputs. Returns a process exit status.

    0 on success, 1 on input errors, 2 if outputs cannot be written. Files
    written by a failed run are removed.
    """
    try:
        req.check()
        base, traj = load_inputs(req)
        result = sweep(base, traj, req.variants, req.start_year, req.end_year, req.jobs)
    except (ScenarioError, CostTableError, SweepError, OSError, ValueError) as exc:
        logger.error("%s", exc)
        return 1

    files = render_tables(result)
    if "plotdata" in req.formats:
        files.update(render_plotdata(result))

    out = Path(req.out_dir)
    written: list[Path] = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            path = out / name
            written.append(path)
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        if "figures" in req.formats:
            from nzeb import plots

            for path in plots.render_all(result, out):
                written.append(path)
    except OSError as exc:
        logger.error("cannot write outputs to %s: %s", out, exc)
        for path in written:
            try:
                os.remove(path)
            except OSError:
                pass
        return 2
    logger.info("wrote %d file(s) to %s", len(written), out)
    return 0


# ---------------------------------------------------------------------------
# audit report
# ---------------------------------------------------------------------------

_COLUMN_TITLES = {
    "capital_out": "capital",
    "loan_payment": "loan",
    "interest_tax_shield": "tax shield",
    "replacement_out": "replacements",
    "om_out": "O&M",
    "grid_purchase": "grid purchase",
    "export_credit": "export credit",
    "gasoline_offset": "gasoline offset",
}


def explain_scenario(s: Scenario, label: str, year: int, traj: CostTrajectory) -> str:
    """Per-year cash-flow breakdown of one install year, for auditing."""
    series = cashflow_series(s, year, traj)
    fi, sy = s.finance, s.system
    cap = series.capital
    lines = [f"== {label}: install year {year} (real 2020 USD) =="]
    lines.append(
        f"PV {sy.total_pv_kw:.2f} kW, wall battery {sy.installed_battery_kwh:.2f} kWh"
        + (", V2H" if sy.v2h is not None else "")
        + f", ITC {'on' if s.itc_enabled else 'off'}"
    )
    for w in series.warnings:
        lines.append(f"warning: {w}")

    if cap.gross_usd > 0:
        lines.append("capital:")
        if cap.pv_usd:
            lines.append(f"  PV system                 {cap.pv_usd:12.2f}")
        if cap.battery_usd:
            lines.append(f"  wall battery              {cap.battery_usd:12.2f}")
        if cap.charger_usd:
            lines.append(f"  bidirectional charger     {cap.charger_usd:12.2f}")
        if cap.itc_usd:
            lines.append(f"  ITC ({fi.itc_rate:.0%})                {-cap.itc_usd:12.2f}")
        lines.append(f"  net cost                  {cap.net_usd:12.2f}")
        lines.append(f"  down payment              {cap.down_payment_usd:12.2f}")
        if cap.loan_principal_usd:
            lines.append(
                f"  loan principal            {cap.loan_principal_usd:12.2f}"
                f"  ({fi.loan_rate:.2%} nominal, {fi.loan_term_yr} yr)"
            )
    if sy.installed_battery_kwh > 0:
        offs = replacement_years(sy.battery_life_yr, fi.analysis_period_yr)
        lines.append(f"battery replacements at year offsets: {', '.join(map(str, offs)) or 'none'}")
    if sy.total_pv_kw > 0:
        offs = replacement_years(sy.inverter_life_yr, fi.analysis_period_yr)
        lines.append(f"inverter replacements at year offsets: {', '.join(map(str, offs)) or 'none'}")

    names = [n for n in COST_FIELDS + CREDIT_FIELDS if any(getattr(y, n) for y in series.years)]
    header = f"{'t':>3} {'year':>5} " + " ".join(f"{_COLUMN_TITLES[n]:>15}" for n in names) + f" {'net':>12}"
    lines.append(header)
    for y in series.years:
        cells = " ".join(f"{getattr(y, n):15.2f}" for n in names)
        lines.append(f"{y.year_offset:>3} {year + y.year_offset:>5} {cells} {y.net:12.2f}")

    lv = levelize_monthly(series, fi.real_discount, fi.service_time_yr)
    point = monthly_savings(s, year, traj, label)
    lines.append(f"levelized net cost over {fi.service_time_yr} yr: {-lv:.2f} $/month")
    lines.append(f"monthly savings vs grid: {point.monthly_savings_usd:.2f} $/month")
    return "\n".join(lines) + "\n"


def explain_run(req: SweepRequest, year: int) -> str:
    req.check()
    base, traj = load_inputs(req)
    return "\n".join(
        explain_scenario(apply_variant(base, label), label, year, traj) for label in req.variants
    )
