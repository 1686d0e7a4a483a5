"""``agropolicy <command> --scenario <path> [--out <dir>]``"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import __version__
from . import report as rpt
from .equilibrium import sweep_elasticities
from .fiscal_core import Regime, assess_taxes, burden_table, default_profile, round_uah
from .incidence import IncidenceError, household_net_per_ha, incidence_table, read_cohorts
from .land_accounts import LandAccountsError, land_balance, shadow_output_share
from .scenario import Scenario, ScenarioError, data_path, echo, parse_scenario
from .segmentation import SegmentationError, classify_farms, read_farms

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FLAGGED = 3
EXIT_IO = 4

COMMANDS = ("tax", "mtl", "equilibrium", "incidence", "shadow", "segment")

log = logging.getLogger("agropolicy")


@dataclass
class Results:
    files: dict[str, str] = field(default_factory=dict)
    report: dict[str, object] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)


def _tax(sc: Scenario, out: Results) -> None:
    assessments = [assess_taxes(default_profile(r, sc.bases), sc.params) for r in Regime]
    out.files["regime_taxes.csv"] = rpt.to_csv(rpt.REGIME_TAX_HEADER, rpt.regime_tax_rows(assessments))
    out.report["tax"] = {
        a.regime.value: {
            "components": {c.tax_kind.value: float(c.amount_per_ha) for c in a.components},
            "total_uah_ha": float(a.total_per_ha),
            "own_uah_ha": float(a.own_per_ha),
            "agent_uah_ha": float(a.agent_per_ha),
            "by_destination": {
                d.value: float(a.by_destination(d)) for d in sorted({c.destination for c in a.components})
            },
        }
        for a in assessments
    }


def _mtl(sc: Scenario, out: Results) -> None:
    rows = burden_table(sc.params, sc.policy, sc.bases)
    out.files["burden.csv"] = rpt.to_csv(rpt.BURDEN_HEADER, rpt.burden_rows(rows))
    out.report["mtl"] = {
        "bill": sc.policy.bill.value,
        "phase_in_multiplier": float(sc.policy.phase_in_multiplier),
        "rows": {
            r.regime.value: {
                "baseline_uah_ha": round_uah(r.baseline),
                "mtl_net_uah_ha": round_uah(r.mtl_net),
                "total_uah_ha": round_uah(r.total),
            }
            for r in rows
        },
    }


def _equilibrium(sc: Scenario, out: Results) -> None:
    fx = float(sc.params.uah_per_usd)
    sweep = sweep_elasticities(sc.market, sc.policy, sc.params, sc.bases)
    out.files["welfare.csv"] = rpt.to_csv(
        rpt.WELFARE_HEADER, rpt.welfare_rows(sweep.minimum, sweep.maximum, fx)
    )
    out.report["equilibrium"] = {"bill": sc.policy.bill.value, **rpt.sweep_json(sweep, fx)}
    if sweep.corner:
        out.flags.append("equilibrium: corner solution (IF land driven to zero)")
    if sweep.degenerate:
        out.flags.append("equilibrium: negative equilibrium rent")


def _incidence(sc: Scenario, out: Results) -> None:
    cohorts = read_cohorts(sc.cohorts_path or data_path("default_cohorts.csv"))
    table = incidence_table(cohorts, sc.params, sc.policy, sc.bases)
    out.files["incidence.csv"] = rpt.to_csv(
        rpt.INCIDENCE_HEADER, [[label, rpt.fmt(100 * b)] for label, b in table]
    )
    out.report["incidence"] = {
        "mtl_net_uah_ha": float(household_net_per_ha(sc.params, sc.policy, sc.bases)),
        "cohorts": [{"label": label, "burden": b} for label, b in table],
    }


def _shadow(sc: Scenario, out: Results) -> None:
    result = land_balance(sc.land_balance)
    lb = sc.land_balance
    paper = shadow_output_share(sc.shadow.household_output_share, lb.osg_own_use, lb.household_cultivated, "paper")
    residual = shadow_output_share(
        sc.shadow.household_output_share, lb.osg_own_use, lb.household_cultivated, "residual"
    )
    selected = paper if sc.shadow.mode.value == "paper" else residual
    terms = result.terms() + [
        ("household_output_share", sc.shadow.household_output_share),
        ("shadow_output_share_paper", paper),
        ("shadow_output_share_residual", residual),
        ("shadow_output_share", selected),
        ("reported_shadow_output_share", sc.shadow.reported_share),
        ("shadow_output_share_gap", selected - sc.shadow.reported_share),
    ]
    out.files["land_balance.csv"] = rpt.to_csv(rpt.LAND_HEADER, [[k, rpt.fmt(v)] for k, v in terms])
    out.report["shadow"] = {
        "terms": dict(terms),
        "mode": sc.shadow.mode.value,
        "inconsistent": result.inconsistent,
    }
    if result.inconsistent:
        out.flags.append(f"shadow: inputs over-explain the land stock (informal = {rpt.fmt(result.informal)})")


def _segment(sc: Scenario, out: Results) -> None:
    farms = read_farms(sc.farms_path or data_path("default_farms.csv"))
    rows = classify_farms(farms, sc.techs, float(sc.params.uah_per_eur), sc.scheme)
    out.files["segments.csv"] = rpt.to_csv(
        rpt.SEGMENT_HEADER, [[f, s, "" if size is None else rpt.fmt(size)] for f, s, size in rows]
    )
    out.report["segment"] = {
        "scheme": sc.scheme.name,
        "farms": [{"farm_id": f, "segment": s, "estimated_size": size} for f, s, size in rows],
    }


RUNNERS: dict[str, Callable[[Scenario, Results], None]] = {
    "tax": _tax,
    "mtl": _mtl,
    "equilibrium": _equilibrium,
    "incidence": _incidence,
    "shadow": _shadow,
    "segment": _segment,
}


def compute(scenario: Scenario, command: str) -> Results:
    results = Results()
    for name in COMMANDS if command == "all" else (command,):
        RUNNERS[name](scenario, results)
    results.report = {"scenario": scenario.name, "command": command, **results.report}
    results.report["flags"] = list(results.flags)
    return results


def emit_report(results: Results, scenario: Scenario, out_dir: Path) -> None:
    for name, text in results.files.items():
        rpt.write_text(out_dir / name, text)
    rpt.write_json(out_dir / "report.json", results.report)
    rpt.write_text(out_dir / "scenario_echo.ini", echo(scenario))


def write_sidecar(out_dir: Path, command: str, scenario_path: str | None) -> None:
    meta = {
        "command": command,
        "scenario": scenario_path,
        "version": __version__,
        "finished_at": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
    }
    rpt.write_json(out_dir / "run_meta.json", meta)


def run_scenario(scenario: Scenario, command: str, out_dir: Path | None = None) -> int:
    """Compute ``command``, write its outputs and return an exit status."""
    out_dir = out_dir or scenario.out_dir
    try:
        results = compute(scenario, command)
    except (IncidenceError, SegmentationError, LandAccountsError) as exc:
        print(f"agropolicy: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"agropolicy: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        emit_report(results, scenario, out_dir)
    except OSError as exc:
        print(f"agropolicy: cannot write to {out_dir}: {exc}", file=sys.stderr)
        return EXIT_IO
    for flag in results.flags:
        print(f"agropolicy: flagged: {flag}", file=sys.stderr)
    return EXIT_FLAGGED if results.flags else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agropolicy",
        description="Agricultural tax burden, MTL and land-market welfare scenarios.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=(*COMMANDS, "all"))
    parser.add_argument("--scenario", help="scenario file; omitted = shipped defaults")
    parser.add_argument("--out", help="output directory (overrides [scenario] out_dir)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        scenario = parse_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"agropolicy: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(args.out).resolve() if args.out else scenario.out_dir
    status = run_scenario(scenario, args.command, out_dir)
    if status != EXIT_IO:
        try:
            write_sidecar(out_dir, args.command, args.scenario)
        except OSError:
            pass
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
