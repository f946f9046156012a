"""Net-zero array sizing and efficiency-improvement scaling."""

from __future__ import annotations

from dataclasses import dataclass, replace

from nzeb.scenario import REFERENCE_BATTERY_KWH, REFERENCE_CONSUMPTION_KWH, SystemSpec


@dataclass(frozen=True)
class SizingResult:
    pv_kw: float
    battery_nameplate_kwh: float
    notes: str = ""


def netzero_pv_kw(annual_kwh: float, specific_yield: float) -> float:
    """PV capacity whose first-year output equals the annual load."""
    if specific_yield <= 0:
        raise ValueError(f"specific yield must be > 0, got {specific_yield}")
    return annual_kwh / specific_yield


def apply_efficiency_improvement(spec: SystemSpec, fraction: float) -> SystemSpec:
    """Shrink PV and battery in proportion to the load reduction ``fraction``."""
    if not 0 <= fraction < 1:
        raise ValueError(f"improvement fraction must be in [0, 1), got {fraction}")
    k = 1.0 - fraction
    return replace(spec, pv_kw=spec.pv_kw * k, battery_nameplate_kwh=spec.battery_nameplate_kwh * k)


def battery_for_fraction(reference_kwh: float, storage_fraction: float) -> float:
    if not 0 <= storage_fraction <= 1:
        raise ValueError(f"storage fraction must be in [0, 1], got {storage_fraction}")
    return reference_kwh * storage_fraction


def size_home(annual_kwh: float, specific_yield: float, improvement_fraction: float = 0.0) -> SizingResult:
    """Net-zero PV plus a battery scaled from the 42.21 kWh / 13,300 kWh reference home.

    The reference battery is an input constant; it is scaled linearly with
    annual load (the new-home 8.6 kW / 38.3 kWh pair follows the same ratio).
    """
    k = 1.0 - improvement_fraction
    pv = netzero_pv_kw(annual_kwh, specific_yield) * k
    batt = REFERENCE_BATTERY_KWH * annual_kwh / REFERENCE_CONSUMPTION_KWH * k
    note = f"net-zero at {specific_yield:g} kWh/kW"
    if improvement_fraction:
        note += f", load reduced {improvement_fraction:.1%}"
    return SizingResult(pv, batt, note)
