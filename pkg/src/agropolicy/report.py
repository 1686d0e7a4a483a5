"""Deterministic CSV and JSON emission.

Data files contain no timestamps; run metadata goes to a separate sidecar.
"""

from __future__ import annotations

import csv
import io
import json
import math
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, Sequence

from .equilibrium import METRICS, SweepReport, WelfareReport
from .fiscal_core import BurdenRow, TaxAssessment, TaxKind, round_uah

REGIME_TAX_HEADER = (
    "regime",
    "cit_uah_ha",
    "single_tax_uah_ha",
    "land_tax_uah_ha",
    "pit_ssc_military_uah_ha",
    "vat_uah_ha",
    "total_uah_ha",
    "own_uah_ha",
    "agent_uah_ha",
)
BURDEN_HEADER = ("regime", "baseline_uah_ha", "mtl_net_uah_ha", "total_uah_ha")
WELFARE_HEADER = ("metric", "min_uah", "max_uah", "min_usd", "max_usd")
INCIDENCE_HEADER = ("label", "burden_pct")
LAND_HEADER = ("term", "value")
SEGMENT_HEADER = ("farm_id", "segment", "estimated_size")

# per-hectare money metrics: 6 significant digits in UAH/ha and USD/ha
PER_HA_METRICS = ("wedge", "rent_baseline", "rent_taxed", "delta_rent")


def fmt(value: float) -> str:
    """Six significant digits, no negative zero."""
    if value == 0 or not math.isfinite(value):
        return "0" if value == 0 else str(value)
    return f"{value:.6g}"


def whole_uah(value: float | Decimal) -> int:
    return round_uah(value if isinstance(value, Decimal) else Decimal(repr(value)))


def usd_mln(value_uah: float, uah_per_usd: float) -> str:
    mln = Decimal(repr(value_uah / uah_per_usd / 1e6))
    out = mln.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)
    return str(out if out != 0 else Decimal("0.0"))


def to_csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def regime_tax_rows(assessments: Sequence[TaxAssessment]) -> list[list[object]]:
    rows = []
    for a in assessments:
        rows.append(
            [
                a.regime.value,
                whole_uah(a.amount(TaxKind.CIT)),
                whole_uah(a.amount(TaxKind.SINGLE_TAX)),
                whole_uah(a.amount(TaxKind.LAND_TAX)),
                whole_uah(a.amount(TaxKind.PIT, TaxKind.SSC, TaxKind.MILITARY)),
                whole_uah(a.amount(TaxKind.VAT)),
                whole_uah(a.total_per_ha),
                whole_uah(a.own_per_ha),
                whole_uah(a.agent_per_ha),
            ]
        )
    return rows


def burden_rows(rows: Sequence[BurdenRow]) -> list[list[object]]:
    return [
        [r.regime.value, whole_uah(r.baseline), whole_uah(r.mtl_net), whole_uah(r.total)]
        for r in rows
    ]


def welfare_rows(
    minimum: dict[str, float], maximum: dict[str, float], uah_per_usd: float
) -> list[list[object]]:
    rows = []
    for metric in METRICS:
        lo, hi = minimum[metric], maximum[metric]
        if metric in WelfareReport.MONEY:
            rows.append([metric, whole_uah(lo), whole_uah(hi), usd_mln(lo, uah_per_usd), usd_mln(hi, uah_per_usd)])
        elif metric in PER_HA_METRICS:
            rows.append([metric, fmt(lo), fmt(hi), fmt(lo / uah_per_usd), fmt(hi / uah_per_usd)])
        else:  # hectares
            rows.append([metric, fmt(lo), fmt(hi), "", ""])
    return rows


def sweep_json(sweep: SweepReport, uah_per_usd: float) -> dict:
    return {
        "min": sweep.minimum,
        "max": sweep.maximum,
        "min_usd_mln": {m: sweep.minimum[m] / uah_per_usd / 1e6 for m in WelfareReport.MONEY},
        "max_usd_mln": {m: sweep.maximum[m] / uah_per_usd / 1e6 for m in WelfareReport.MONEY},
        "corner": sweep.corner,
        "degenerate": sweep.degenerate,
        "points": [
            {
                "elasticity_cf": e_cf,
                "elasticity_if": e_if,
                **{m: getattr(r, m) for m in METRICS},
                "corner": r.corner,
            }
            for (e_cf, e_if), r in sweep.points
        ],
    }


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def write_json(path: Path, data: dict) -> None:
    write_text(path, json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
