"""Per-year capital cost trajectories for residential PV and batteries.

Trajectories are read from a CSV with the exact header::

    year,pv_capex_usd_per_w,battery_capex_usd_per_kwh,fixed_om_usd_per_kw_yr

All costs are real 2020 dollars. Between rows the cost is interpolated
linearly; outside the covered years it is held at the first/last row.
"""

from __future__ import annotations

import csv
import io
import math
from bisect import bisect_right
from dataclasses import dataclass
from importlib import resources

HEADER = ("year", "pv_capex_usd_per_w", "battery_capex_usd_per_kwh", "fixed_om_usd_per_kw_yr")
COMPONENTS = {"pv": 1, "battery": 2, "om": 3}


class CostTableError(ValueError):
    def __init__(self, message: str, row: int | None = None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


@dataclass(frozen=True)
class CostRow:
    year: int
    pv_capex_usd_per_w: float
    battery_capex_usd_per_kwh: float
    fixed_om_usd_per_kw_yr: float


@dataclass(frozen=True)
class CostTrajectory:
    rows: tuple[CostRow, ...]

    @property
    def first_year(self) -> int:
        return self.rows[0].year

    @property
    def last_year(self) -> int:
        return self.rows[-1].year

    def covers(self, year: float) -> bool:
        return self.first_year <= year <= self.last_year


def load_cost_table(text: str) -> CostTrajectory:
    """Parse CSV text into a validated trajectory.

    Row numbers in errors count the header as row 1.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CostTableError("empty file; expected header " + ",".join(HEADER), 1) from None
    missing = [h for h in HEADER if h not in header]
    if missing:
        raise CostTableError(f"missing column(s): {', '.join(missing)}", 1)
    if tuple(header) != HEADER:
        raise CostTableError("header must be exactly " + ",".join(HEADER), 1)

    rows: list[CostRow] = []
    for lineno, cells in enumerate(reader, start=2):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(HEADER):
            raise CostTableError(f"expected {len(HEADER)} cells, got {len(cells)}", lineno)
        values = []
        for name, cell in zip(HEADER, cells):
            try:
                v = float(cell)
            except ValueError:
                raise CostTableError(f"non-numeric {name} {cell!r}", lineno) from None
            if not math.isfinite(v):
                raise CostTableError(f"non-finite {name} {cell!r}", lineno)
            values.append(v)
        year = values[0]
        if year != int(year):
            raise CostTableError(f"year must be a whole number, got {cells[0]!r}", lineno)
        if any(v < 0 for v in values[1:]):
            raise CostTableError("costs must be >= 0", lineno)
        if rows and int(year) == rows[-1].year:
            raise CostTableError(f"duplicate year {int(year)}", lineno)
        if rows and int(year) < rows[-1].year:
            raise CostTableError(f"year {int(year)} is not after {rows[-1].year}; years must increase", lineno)
        rows.append(CostRow(int(year), *values[1:]))

    if len(rows) < 2:
        raise CostTableError("at least 2 rows required")
    return CostTrajectory(tuple(rows))


def capex_at(t: CostTrajectory, year: float, component: str) -> float:
    """Cost of ``component`` ('pv' $/W, 'battery' $/kWh, 'om' $/kW/yr) in ``year``."""
    idx = COMPONENTS[component]
    rows = t.rows
    if year <= rows[0].year:
        return _value(rows[0], idx)
    if year >= rows[-1].year:
        return _value(rows[-1], idx)
    years = [r.year for r in rows]
    i = bisect_right(years, year)
    lo, hi = rows[i - 1], rows[i]
    if year == lo.year:
        return _value(lo, idx)
    w = (year - lo.year) / (hi.year - lo.year)
    a, b = _value(lo, idx), _value(hi, idx)
    return a + w * (b - a)


def _value(row: CostRow, idx: int) -> float:
    return (row.year, row.pv_capex_usd_per_w, row.battery_capex_usd_per_kwh, row.fixed_om_usd_per_kw_yr)[idx]


def dump_cost_table(t: CostTrajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in t.rows:
        w.writerow([r.year, repr(r.pv_capex_usd_per_w), repr(r.battery_capex_usd_per_kwh), repr(r.fixed_om_usd_per_kw_yr)])
    return buf.getvalue()


def calibrated_fixture() -> CostTrajectory:
    """The bundled calibration trajectory (see README: it is fitted, not measured)."""
    text = resources.files("nzeb.data").joinpath("calibrated_costs.csv").read_text(encoding="utf-8")
    return load_cost_table(text)
