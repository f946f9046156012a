"""Command-line runner for install-year sweeps.

Usage
-----
    nzeb --scenario scenarios/existing_home.json --costs costs.csv --out results
    nzeb --scenario s.json --costs costs.csv --variants pv-batt100-itc,pv-batt100-noitc --out results
    nzeb --scenario s.json --costs costs.csv --explain 2020
"""

from __future__ import annotations

import argparse
import logging
import sys

from nzeb.costs import CostTableError
from nzeb.scenario import ScenarioError
from nzeb.sweep import FORMATS, VARIANTS, SweepError, SweepRequest, explain_run, run_sweep

logger = logging.getLogger("nzeb")


def _csv_list(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nzeb",
        description="Sweep install years for residential PV + battery + V2H scenarios.",
    )
    p.add_argument("--scenario", required=True, metavar="PATH", help="Scenario JSON file.")
    p.add_argument("--costs", required=True, metavar="PATH", help="Cost trajectory CSV.")
    p.add_argument("--from", dest="start", type=int, default=2020, metavar="YEAR")
    p.add_argument("--to", dest="end", type=int, default=2050, metavar="YEAR")
    p.add_argument("--out", metavar="DIR", help="Output directory (required unless --explain).")
    p.add_argument(
        "--variants",
        type=_csv_list,
        default=("config",),
        metavar="LIST",
        help="Comma list of variant labels: " + ", ".join(VARIANTS) + "; append -itc or -noitc to force the ITC flag.",
    )
    p.add_argument(
        "--formats",
        type=_csv_list,
        default=("csv",),
        metavar="LIST",
        help=f"Comma list from {', '.join(FORMATS)} (csv is always written).",
    )
    p.add_argument("--explain", type=int, metavar="YEAR", help="Print a cash-flow breakdown for one install year.")
    p.add_argument("--jobs", type=int, default=1, help="Worker threads for the sweep.")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    req = SweepRequest(
        scenario_path=args.scenario,
        costs_path=args.costs,
        start_year=args.start,
        end_year=args.end,
        out_dir=args.out or "",
        formats=tuple(dict.fromkeys(("csv",) + args.formats)),
        variants=args.variants,
        jobs=max(1, args.jobs),
    )
    if args.explain is not None:
        try:
            sys.stdout.write(explain_run(req, args.explain))
        except (ScenarioError, CostTableError, SweepError, OSError) as exc:
            logger.error("%s", exc)
            return 1
        return 0
    if not args.out:
        logger.error("--out is required unless --explain is given")
        return 1
    return run_sweep(req)


if __name__ == "__main__":
    sys.exit(main())
