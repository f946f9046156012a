"""Domain types for one residential PV + storage analysis case, plus JSON loading.

A scenario document is a single JSON object with the top-level blocks
``home``, ``system``, ``finance``, ``tariff`` and ``flags``. Every numeric
field is a plain decimal in the units named on the dataclass fields below
(fractions, not percent). Omitted optional fields fall back to the Florida
baseline values in this module. Unknown keys are rejected so that a typo
never silently reverts a value to its default.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any

# Florida average home and the storage that makes it grid independent.
REFERENCE_CONSUMPTION_KWH = 13_300.0
REFERENCE_BATTERY_KWH = 42.21
FLORIDA_SPECIFIC_YIELD = 1_400.0

# Tolerance for the Fisher identity check between the three discount rates.
DISCOUNT_CONSISTENCY_TOL = 1e-4
# Tolerance on sizes of an efficiency-improved home vs the scaled base sizes.
IMPROVEMENT_SIZE_TOL = 0.005

HOME_KINDS = ("existing", "new", "improved")


class ScenarioError(ValueError):
    """Base class for configuration problems."""


class MalformedConfigError(ScenarioError):
    """The document could not be parsed into a scenario.

    ``key`` holds the dotted path of the offending key when one is known.
    """

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key


class ValidationError(ScenarioError):
    """The document parsed, but one or more invariants do not hold."""

    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"{len(self.violations)} validation error(s):\n{lines}")


@dataclass(frozen=True)
class Violation:
    field: str
    value: Any
    constraint: str

    def __str__(self) -> str:
        return f"{self.field}={self.value!r} violates {self.constraint}"


@dataclass(frozen=True)
class HomeProfile:
    annual_consumption_kwh: float = REFERENCE_CONSUMPTION_KWH
    specific_yield_kwh_per_kw: float = FLORIDA_SPECIFIC_YIELD
    home_kind: str = "existing"
    # Share of annual load that coincides with PV output and needs no storage.
    daytime_load_fraction: float = 0.3


@dataclass(frozen=True)
class V2HSpec:
    ev_battery_kwh: float = 68.7
    ev_range_mi: float = 220.0
    charger_cost_usd: float = 6_000.0


@dataclass(frozen=True)
class SystemSpec:
    pv_kw: float = 9.5
    battery_nameplate_kwh: float = REFERENCE_BATTERY_KWH
    battery_roundtrip_eff: float = 0.95
    battery_degradation_per_yr: float = 0.035
    battery_life_yr: int = 10
    pv_degradation_per_yr: float = 0.005
    inverter_cost_usd_per_w: float = 0.10
    inverter_life_yr: int = 15
    storage_fraction: float = 1.0
    # PV added on top of the net-zero array to charge an EV.
    extra_pv_kw: float = 0.0
    v2h: V2HSpec | None = None

    @property
    def total_pv_kw(self) -> float:
        return self.pv_kw + self.extra_pv_kw

    @property
    def installed_battery_kwh(self) -> float:
        """Wall-battery capacity actually purchased (none when the EV is the storage)."""
        if self.v2h is not None:
            return 0.0
        return self.battery_nameplate_kwh * self.storage_fraction


@dataclass(frozen=True)
class FinancialParams:
    inflation: float = 0.025
    nominal_discount: float = 0.045
    real_discount: float | None = None
    nominal_elec_escalation: float = 0.025
    real_elec_escalation: float = 0.0
    down_payment_fraction: float = 0.10
    loan_rate: float | None = None
    loan_term_yr: int | None = None
    marginal_tax_rate: float = 0.20
    interest_deductible: bool = True
    itc_rate: float = 0.30
    analysis_period_yr: int = 30
    service_time_yr: int = 25

    def __post_init__(self):
        # Derived defaults are resolved once so the frozen instance is complete.
        if self.real_discount is None and self.inflation > -1:
            object.__setattr__(
                self,
                "real_discount",
                (1 + self.nominal_discount) / (1 + self.inflation) - 1,
            )
        if self.loan_rate is None:
            object.__setattr__(self, "loan_rate", self.nominal_discount)
        if self.loan_term_yr is None:
            object.__setattr__(self, "loan_term_yr", self.service_time_yr)


@dataclass(frozen=True)
class GridTariff:
    retail_price_usd_per_kwh: float = 0.113
    export_credit_usd_per_kwh: float | None = None
    gasoline_price_usd_per_gal: float = 3.16
    gasoline_mpg: float = 24.2

    def __post_init__(self):
        # Net metering at retail unless an export rate is given.
        if self.export_credit_usd_per_kwh is None:
            object.__setattr__(
                self, "export_credit_usd_per_kwh", self.retail_price_usd_per_kwh
            )


@dataclass(frozen=True)
class Scenario:
    home: HomeProfile = field(default_factory=HomeProfile)
    system: SystemSpec = field(default_factory=SystemSpec)
    finance: FinancialParams = field(default_factory=FinancialParams)
    tariff: GridTariff = field(default_factory=GridTariff)
    itc_enabled: bool = True
    improvement_fraction: float = 0.0
    annual_ev_miles: float = 0.0

    @property
    def effective_consumption_kwh(self) -> float:
        """Household load after any efficiency improvement (EV charging excluded)."""
        return self.home.annual_consumption_kwh * (1 - self.improvement_fraction)

    def with_changes(self, **changes) -> Scenario:
        return replace(self, **changes)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def _finite(x) -> bool:
    try:
        return math.isfinite(x)
    except TypeError:
        return False


def validate(s: Scenario) -> list[Violation]:
    """Return every invariant violation in ``s``; an empty list means valid.

    Never raises on finite (or even non-finite) numeric input.
    """
    out: list[Violation] = []

    def check(name, value, ok, constraint):
        try:
            good = bool(ok(value))
        except (TypeError, ValueError, ZeroDivisionError, OverflowError):
            good = False
        if not good:
            out.append(Violation(name, value, constraint))

    h, sy, fi, ta = s.home, s.system, s.finance, s.tariff

    check("home.annual_consumption_kwh", h.annual_consumption_kwh, lambda v: v > 0, "> 0")
    check(
        "home.specific_yield_kwh_per_kw",
        h.specific_yield_kwh_per_kw,
        lambda v: 500 <= v <= 2500,
        "in [500, 2500]",
    )
    check("home.home_kind", h.home_kind, lambda v: v in HOME_KINDS, f"one of {HOME_KINDS}")
    check("home.daytime_load_fraction", h.daytime_load_fraction, lambda v: 0 <= v <= 1, "in [0, 1]")

    for name in ("pv_kw", "extra_pv_kw", "battery_nameplate_kwh", "inverter_cost_usd_per_w"):
        check(f"system.{name}", getattr(sy, name), lambda v: v >= 0, ">= 0")
    check("system.storage_fraction", sy.storage_fraction, lambda v: 0 <= v <= 1, "in [0, 1]")
    check(
        "system.battery_roundtrip_eff",
        sy.battery_roundtrip_eff,
        lambda v: 0 < v <= 1,
        "in (0, 1]",
    )
    for name in ("battery_degradation_per_yr", "pv_degradation_per_yr"):
        check(f"system.{name}", getattr(sy, name), lambda v: 0 <= v < 1, "in [0, 1)")
    for name in ("battery_life_yr", "inverter_life_yr"):
        check(f"system.{name}", getattr(sy, name), lambda v: v >= 1, ">= 1")
    if sy.v2h is not None:
        for f in fields(V2HSpec):
            check(f"system.v2h.{f.name}", getattr(sy.v2h, f.name), lambda v: v >= 0, ">= 0")
        check("system.v2h.ev_battery_kwh", sy.v2h.ev_battery_kwh, lambda v: v > 0, "> 0")

    check("finance.inflation", fi.inflation, lambda v: v > -1, "> -1")
    real_from_fisher = None
    if _finite(fi.nominal_discount) and _finite(fi.inflation) and fi.inflation > -1:
        real_from_fisher = (1 + fi.nominal_discount) / (1 + fi.inflation) - 1
    check(
        "finance.real_discount",
        fi.real_discount,
        lambda v: abs(v - real_from_fisher) < DISCOUNT_CONSISTENCY_TOL,
        f"(1+nominal_discount)/(1+inflation)-1 = {real_from_fisher} within {DISCOUNT_CONSISTENCY_TOL}",
    )
    check("finance.down_payment_fraction", fi.down_payment_fraction, lambda v: 0 <= v <= 1, "in [0, 1]")
    check("finance.loan_rate", fi.loan_rate, lambda v: v > -1, "> -1")
    check("finance.loan_term_yr", fi.loan_term_yr, lambda v: v >= 1, ">= 1")
    check("finance.marginal_tax_rate", fi.marginal_tax_rate, lambda v: 0 <= v <= 1, "in [0, 1]")
    check("finance.itc_rate", fi.itc_rate, lambda v: 0 <= v < 1, "in [0, 1)")
    check("finance.service_time_yr", fi.service_time_yr, lambda v: v >= 1, ">= 1")
    check(
        "finance.analysis_period_yr",
        fi.analysis_period_yr,
        lambda v: v >= fi.service_time_yr,
        ">= finance.service_time_yr",
    )
    check(
        "finance.loan_term_yr",
        fi.loan_term_yr,
        lambda v: v <= fi.analysis_period_yr,
        "<= finance.analysis_period_yr",
    )

    for f in fields(GridTariff):
        check(f"tariff.{f.name}", getattr(ta, f.name), lambda v: v >= 0, ">= 0")
    check("tariff.gasoline_mpg", ta.gasoline_mpg, lambda v: v > 0, "> 0")

    check("flags.improvement_fraction", s.improvement_fraction, lambda v: 0 <= v < 1, "in [0, 1)")
    check("flags.annual_ev_miles", s.annual_ev_miles, lambda v: v >= 0, ">= 0")
    if _finite(s.annual_ev_miles) and s.annual_ev_miles > 0 and sy.v2h is None:
        out.append(
            Violation("flags.annual_ev_miles", s.annual_ev_miles, "> 0 requires system.v2h (EV parameters)")
        )

    f = s.improvement_fraction
    if _finite(f) and 0 < f < 1:
        try:
            base_pv = h.annual_consumption_kwh / h.specific_yield_kwh_per_kw
            base_batt = REFERENCE_BATTERY_KWH * h.annual_consumption_kwh / REFERENCE_CONSUMPTION_KWH
        except (TypeError, ZeroDivisionError):
            base_pv = base_batt = None
        if base_pv is not None:
            for name, base in (("pv_kw", base_pv), ("battery_nameplate_kwh", base_batt)):
                target = base * (1 - f)
                check(
                    f"system.{name}",
                    getattr(sy, name),
                    lambda v, t=target: abs(v - t) <= IMPROVEMENT_SIZE_TOL * t,
                    f"base size scaled by (1 - improvement_fraction) = {target:.4g} within 0.5%",
                )

    # Catch NaN/inf that slipped through comparisons that treat NaN as false.
    for block, obj in (("home", h), ("system", sy), ("finance", fi), ("tariff", ta)):
        for f_ in fields(obj):
            v = getattr(obj, f_.name)
            if isinstance(v, float) and not math.isfinite(v):
                out.append(Violation(f"{block}.{f_.name}", v, "finite"))
    for name in ("improvement_fraction", "annual_ev_miles"):
        v = getattr(s, name)
        if isinstance(v, float) and not math.isfinite(v):
            out.append(Violation(f"flags.{name}", v, "finite"))

    # Deduplicate while keeping order (NaN fails both a range and the finite check).
    seen, unique = set(), []
    for v in out:
        k = (v.field, v.constraint)
        if k not in seen:
            seen.add(k)
            unique.append(v)
    return unique


# ---------------------------------------------------------------------------
# JSON document <-> Scenario
# ---------------------------------------------------------------------------

_FLAG_KEYS = ("itc_enabled", "improvement_fraction", "annual_ev_miles")
_BOOL_FIELDS = {"interest_deductible", "itc_enabled"}
_INT_FIELDS = {
    "battery_life_yr",
    "inverter_life_yr",
    "loan_term_yr",
    "analysis_period_yr",
    "service_time_yr",
}


def _coerce(path: str, name: str, value: Any) -> Any:
    if name == "home_kind":
        if not isinstance(value, str):
            raise MalformedConfigError("expected a string", path)
        return value
    if name in _BOOL_FIELDS:
        if not isinstance(value, bool):
            raise MalformedConfigError("expected true or false", path)
        return value
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedConfigError(f"expected a number, got {value!r}", path)
    if name in _INT_FIELDS:
        if float(value) != int(value):
            raise MalformedConfigError(f"expected a whole number of years, got {value!r}", path)
        return int(value)
    return float(value)


def _build(cls, block: Any, path: str, nested: dict | None = None):
    if not isinstance(block, dict):
        raise MalformedConfigError("expected an object", path)
    nested = nested or {}
    allowed = {f.name for f in fields(cls)}
    kwargs = {}
    for key, value in block.items():
        if key not in allowed:
            raise MalformedConfigError("unknown key", f"{path}.{key}")
        if key in nested:
            kwargs[key] = None if value is None else _build(nested[key], value, f"{path}.{key}")
        else:
            kwargs[key] = _coerce(f"{path}.{key}", key, value)
    return cls(**kwargs)


def scenario_from_dict(doc: Any) -> Scenario:
    """Build a scenario from a decoded JSON document and validate it."""
    if not isinstance(doc, dict):
        raise MalformedConfigError("top level must be a JSON object", "<document>")
    for key in doc:
        if key not in ("home", "system", "finance", "tariff", "flags"):
            raise MalformedConfigError("unknown key", key)

    violations: list[Violation] = []
    if "home" not in doc:
        violations.append(Violation("home", None, "required block (home profile) is missing"))
        raise ValidationError(violations)

    home = _build(HomeProfile, doc["home"], "home")
    system = _build(SystemSpec, doc.get("system", {}), "system", {"v2h": V2HSpec})
    finance = _build(FinancialParams, doc.get("finance", {}), "finance")
    tariff = _build(GridTariff, doc.get("tariff", {}), "tariff")

    flags = doc.get("flags", {})
    if not isinstance(flags, dict):
        raise MalformedConfigError("expected an object", "flags")
    flag_kwargs = {}
    for key, value in flags.items():
        if key not in _FLAG_KEYS:
            raise MalformedConfigError("unknown key", f"flags.{key}")
        flag_kwargs[key] = _coerce(f"flags.{key}", key, value)
        if flag_kwargs[key] is None:
            raise MalformedConfigError("must not be null", f"flags.{key}")

    s = Scenario(home=home, system=system, finance=finance, tariff=tariff, **flag_kwargs)
    violations = validate(s)
    if violations:
        raise ValidationError(violations)
    return s


def load_scenario(document: str) -> Scenario:
    """Parse a JSON scenario document.

    Raises MalformedConfigError for syntax/type problems and ValidationError
    listing every violated invariant.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(doc)


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "home": asdict(s.home),
        "system": asdict(s.system),
        "finance": asdict(s.finance),
        "tariff": asdict(s.tariff),
        "flags": {k: getattr(s, k) for k in _FLAG_KEYS},
    }


def dump_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2, sort_keys=False)
