"""Distributional burden of the MTL across household income cohorts."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path
from typing import Sequence

from .fiscal_core import FarmBases, MtlPolicy, Regime, TaxParameters, default_profile, mtl_net

COHORT_HEADER = ("label", "annual_income_uah", "land_ha")


class IncidenceError(ValueError):
    pass


@dataclass(frozen=True)
class IncomeCohort:
    label: str
    annual_income: float
    land_held: float
    household_count: int | None = None

    def __post_init__(self) -> None:
        if self.annual_income <= 0:
            raise IncidenceError(f"cohort {self.label!r}: annual income must be positive")
        if self.land_held < 0:
            raise IncidenceError(f"cohort {self.label!r}: land held must be non-negative")


def household_net_per_ha(params: TaxParameters, policy: MtlPolicy, bases: FarmBases) -> Decimal:
    return mtl_net(default_profile(Regime.HOUSEHOLD_SHADOW, bases), params, policy)


def cohort_burden(
    cohort: IncomeCohort, params: TaxParameters, policy: MtlPolicy, bases: FarmBases
) -> float:
    """MTL paid on the cohort's land as a fraction of its annual income."""
    net = float(household_net_per_ha(params, policy, bases))
    return net * cohort.land_held / cohort.annual_income


def incidence_table(
    cohorts: Sequence[IncomeCohort], params: TaxParameters, policy: MtlPolicy, bases: FarmBases
) -> list[tuple[str, float]]:
    if not cohorts:
        raise IncidenceError("cohort list is empty")
    net = float(household_net_per_ha(params, policy, bases))
    return [(c.label, net * c.land_held / c.annual_income) for c in cohorts]


def read_cohorts(path: Path) -> list[IncomeCohort]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = tuple(reader.fieldnames or ())
        if header[:3] != COHORT_HEADER or header[3:] not in ((), ("households",)):
            raise IncidenceError(
                f"{path}: header must be label,annual_income_uah,land_ha[,households]"
            )
        cohorts = []
        for lineno, row in enumerate(reader, start=2):
            try:
                count = row.get("households")
                cohorts.append(
                    IncomeCohort(
                        label=row["label"],
                        annual_income=float(row["annual_income_uah"]),
                        land_held=float(row["land_ha"]),
                        household_count=int(count) if count else None,
                    )
                )
            except (TypeError, ValueError) as exc:
                raise IncidenceError(f"{path}:{lineno}: {exc}") from exc
    return cohorts
