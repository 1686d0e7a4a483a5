"""Farm size segments by revenue and employment, and revenue-to-size
conversion by specialization."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

INF = math.inf


class SegmentationError(ValueError):
    pass


@dataclass(frozen=True)
class Band:
    name: str
    income_min_eur: float
    income_max_eur: float = INF
    employee_cap: float = INF  # strict upper bound on employees

    def admits(self, income: float, employees: int) -> bool:
        return self.income_min_eur <= income < self.income_max_eur and employees < self.employee_cap


@dataclass(frozen=True)
class SegmentScheme:
    name: str
    bands: tuple[Band, ...]

    def __post_init__(self) -> None:
        if not self.bands or self.bands[0].income_min_eur != 0:
            raise SegmentationError(f"{self.name}: bands must start at 0")
        for lo, hi in zip(self.bands, self.bands[1:]):
            if lo.income_max_eur != hi.income_min_eur:
                raise SegmentationError(f"{self.name}: {lo.name} and {hi.name} are not contiguous")
        if self.bands[-1].income_max_eur != INF or self.bands[-1].employee_cap != INF:
            raise SegmentationError(f"{self.name}: last band must be unbounded")


# Economic Code of Ukraine, art. 55
ECONOMIC_CODE = SegmentScheme(
    "economic_code",
    (
        Band("Micro 0-0.05", 0, 50_000, 10),
        Band("Micro 0.05-0.5", 50_000, 500_000, 10),
        Band("Micro 0.5-2", 500_000, 2_000_000, 10),
        Band("Small", 2_000_000, 10_000_000, 50),
        Band("Medium", 10_000_000, 50_000_000, 250),
        Band("Large", 50_000_000),
    ),
)


def tax_code_scheme(uah_per_eur: float) -> SegmentScheme:
    """Single tax group 3 for individual entrepreneurs: revenue up to
    UAH 7 mln and fewer than 10 employees."""
    cap = 7_000_000 / uah_per_eur
    return SegmentScheme(
        "tax_code",
        (Band("Single tax group 3", 0, cap, 10), Band("Above group 3", cap)),
    )


def classify_segment(annual_income_eur: float, employees: int, scheme: SegmentScheme = ECONOMIC_CODE) -> str:
    """Name of the band containing the income; a farm over the band's
    employee cap moves up to the first larger band that admits it."""
    if annual_income_eur < 0 or employees < 0:
        raise SegmentationError("income and employees must be non-negative")
    bands = scheme.bands
    start = next(i for i, b in enumerate(bands) if annual_income_eur < b.income_max_eur)
    for band in bands[start:]:
        if employees < band.employee_cap:
            return band.name
    return bands[-1].name  # pragma: no cover - last band is unbounded


class Product(str, enum.Enum):
    GRAINS = "grains"
    OILCROPS = "oilcrops"
    VEGETABLES = "vegetables"
    FRUITS_BERRIES = "fruits_berries"
    MILK = "milk"


@dataclass(frozen=True)
class ProductTech:
    product: Product
    price: float  # UAH per tonne
    yield_: float  # tonnes per ha, or per head for milk

    def __post_init__(self) -> None:
        if self.price <= 0 or self.yield_ <= 0:
            raise SegmentationError(f"{self.product.value}: price and yield must be positive")

    @property
    def revenue_per_unit(self) -> float:
        return self.price * self.yield_


def revenue_to_farm_size(revenue_uah: float, tech: ProductTech) -> float:
    """Hectares (head for milk) needed to earn ``revenue_uah``."""
    if revenue_uah < 0:
        raise SegmentationError("revenue must be non-negative")
    return revenue_uah / (tech.price * tech.yield_)


@dataclass(frozen=True)
class FarmRecord:
    farm_id: str
    annual_income_eur: float
    employees: int
    product: Product | None = None


def read_farms(path: Path) -> list[FarmRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = tuple(reader.fieldnames or ())
        if header[:3] != ("farm_id", "annual_income_eur", "employees") or header[3:] not in ((), ("product",)):
            raise SegmentationError(f"{path}: header must be farm_id,annual_income_eur,employees[,product]")
        farms = []
        for lineno, row in enumerate(reader, start=2):
            try:
                product = row.get("product")
                farms.append(
                    FarmRecord(
                        row["farm_id"],
                        float(row["annual_income_eur"]),
                        int(row["employees"]),
                        Product(product) if product else None,
                    )
                )
            except (TypeError, ValueError) as exc:
                raise SegmentationError(f"{path}:{lineno}: {exc}") from exc
    return farms


def classify_farms(
    farms: Sequence[FarmRecord],
    techs: Mapping[Product, ProductTech],
    uah_per_eur: float,
    scheme: SegmentScheme = ECONOMIC_CODE,
) -> list[tuple[str, str, float | None]]:
    rows = []
    for farm in farms:
        size = None
        if farm.product is not None:
            size = revenue_to_farm_size(farm.annual_income_eur * uah_per_eur, techs[farm.product])
        rows.append((farm.farm_id, classify_segment(farm.annual_income_eur, farm.employees, scheme), size))
    return rows
