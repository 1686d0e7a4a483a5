"""Two-group partial-equilibrium model of the land lease market.

Enterprises (CF) and individual family farms (IF) share a fixed land stock
``L_T`` under linear demands ``D_CF(r) = a + b r`` and ``D_IF(r) = c + d r``.
The MTL is a per-hectare wedge ``t`` on IF land: IF pay ``r + t`` while
landowners receive ``r``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterable, Sequence

from .fiscal_core import (
    Bill,
    FarmBases,
    MtlPolicy,
    PayerKind,
    TaxParameters,
    household_mtl_net_as,
)

log = logging.getLogger(__name__)


class EquilibriumError(ValueError):
    pass


@dataclass(frozen=True)
class LinearDemand:
    intercept: float
    slope: float

    def __post_init__(self) -> None:
        if not self.slope < 0:
            raise EquilibriumError(f"demand slope must be negative, got {self.slope}")

    def __call__(self, rent: float) -> float:
        return self.intercept + self.slope * rent

    @property
    def choke_rent(self) -> float:
        """Rent at which demand falls to zero."""
        return -self.intercept / self.slope


@dataclass(frozen=True)
class MarketCalibration:
    total_land: float
    enterprise_land: float
    enterprise_rent: float
    household_rent: float
    elasticity_cf: float
    elasticity_if: float
    elasticity_grid: tuple[tuple[float, float], ...] = ()
    registered_household_share: float = 0.0

    def __post_init__(self) -> None:
        if not 0 < self.enterprise_land < self.total_land:
            raise EquilibriumError("need 0 < enterprise_land < total_land")
        if self.enterprise_rent <= 0 or self.household_rent <= 0:
            raise EquilibriumError("rents must be positive")
        if not 0 <= self.registered_household_share <= 1:
            raise EquilibriumError("registered_household_share must be in [0, 1]")
        for e_cf, e_if in ((self.elasticity_cf, self.elasticity_if), *self.elasticity_grid):
            if e_cf >= 0 or e_if >= 0:
                raise EquilibriumError("elasticities must be negative")
        if abs(self.elasticity_if) > abs(self.elasticity_cf):
            # less-elastic IF demand is the modelling assumption, not a hard rule
            log.warning("IF demand more elastic than CF demand (%s vs %s)",
                        self.elasticity_if, self.elasticity_cf)

    @property
    def household_land(self) -> float:
        return self.total_land - self.enterprise_land

    def with_elasticities(self, e_cf: float, e_if: float) -> "MarketCalibration":
        return MarketCalibration(
            total_land=self.total_land,
            enterprise_land=self.enterprise_land,
            enterprise_rent=self.enterprise_rent,
            household_rent=self.household_rent,
            elasticity_cf=e_cf,
            elasticity_if=e_if,
            elasticity_grid=self.elasticity_grid,
            registered_household_share=self.registered_household_share,
        )


@dataclass(frozen=True)
class Equilibrium:
    rent: float
    land_cf: float
    land_if: float
    wedge: float
    corner: bool = False
    degenerate: bool = False


def calibrate_demand(observed_land: float, observed_rent: float, elasticity: float) -> LinearDemand:
    """Linear demand through (observed_rent, observed_land) with the given
    point elasticity at that point."""
    if observed_land <= 0 or observed_rent <= 0:
        raise EquilibriumError("observed land and rent must be positive")
    if elasticity >= 0:
        raise EquilibriumError("elasticity must be negative")
    return LinearDemand(
        intercept=observed_land * (1 - elasticity),
        slope=elasticity * observed_land / observed_rent,
    )


def solve_equilibrium(
    d_cf: LinearDemand, d_if: LinearDemand, total_land: float, wedge: float
) -> Equilibrium:
    if wedge < 0:
        raise EquilibriumError("wedge must be non-negative")
    b, d = d_cf.slope, d_if.slope
    if b + d >= 0:
        raise EquilibriumError("b + d must be negative")
    a, c = d_cf.intercept, d_if.intercept
    rent = (total_land - a - c - d * wedge) / (b + d)
    land_if = d_if(rent + wedge)
    if land_if < 0:
        # IF priced out: all land goes to CF at their own demand price
        rent = (total_land - a) / b
        log.warning("corner solution: IF land driven to zero at wedge %s", wedge)
        return Equilibrium(rent, total_land, 0.0, wedge, corner=True, degenerate=rent < 0)
    # land_cf from conservation so the reported pair sums to L_T exactly
    land_cf = total_land - land_if
    return Equilibrium(rent, land_cf, land_if, wedge, degenerate=rent < 0)


@dataclass(frozen=True)
class WelfareReport:
    """Stakeholder changes in UAH; ``land_reallocated`` in ha (IF to CF)."""

    wedge: float
    rent_baseline: float
    rent_taxed: float
    delta_rent: float
    land_reallocated: float
    d_surplus_cf: float
    d_surplus_if: float
    d_landowners: float
    budget_revenue: float
    dwl: float
    corner: bool = False
    degenerate: bool = False

    # metrics converted to USD; the rest are rents or hectares
    MONEY = ("d_surplus_cf", "d_surplus_if", "d_landowners", "budget_revenue", "dwl")

    @property
    def identity_residual(self) -> float:
        return (
            self.d_surplus_cf + self.d_surplus_if + self.d_landowners
            + self.budget_revenue + self.dwl
        )

    @classmethod
    def zero(cls, rent: float = 0.0) -> "WelfareReport":
        return cls(0.0, rent, rent, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


METRICS = (
    "wedge",
    "rent_baseline",
    "rent_taxed",
    "delta_rent",
    "land_reallocated",
    "d_surplus_cf",
    "d_surplus_if",
    "d_landowners",
    "budget_revenue",
    "dwl",
)


def welfare_decompose(
    base: Equilibrium,
    taxed: Equilibrium,
    wedge: float,
    d_if: LinearDemand | None = None,
) -> WelfareReport:
    """Surplus changes between two equilibria of the same market.

    Trapezoids are exact for linear demand. For a corner solution the IF
    loss is integrated only up to the IF choke rent, which needs ``d_if``.
    """
    r0, r1 = base.rent, taxed.rent
    total_land = base.land_cf + base.land_if
    d_cf = (r0 - r1) * (base.land_cf + taxed.land_cf) / 2
    paid = r1 + wedge
    if taxed.corner and d_if is not None:
        paid = min(paid, d_if.choke_rent)
    d_if_surplus = -(paid - r0) * (base.land_if + taxed.land_if) / 2
    d_owners = (r1 - r0) * total_land
    budget = wedge * taxed.land_if
    dwl = -(d_cf + d_if_surplus + d_owners + budget)
    return WelfareReport(
        wedge=wedge,
        rent_baseline=r0,
        rent_taxed=r1,
        delta_rent=r1 - r0,
        land_reallocated=taxed.land_cf - base.land_cf,
        d_surplus_cf=d_cf,
        d_surplus_if=d_if_surplus,
        d_landowners=d_owners,
        budget_revenue=budget,
        dwl=dwl,
        corner=taxed.corner,
        degenerate=base.degenerate or taxed.degenerate,
    )


def policy_wedge(
    calibration: MarketCalibration,
    policy: MtlPolicy,
    params: TaxParameters,
    bases: FarmBases,
) -> float:
    """Per-hectare MTL wedge on IF land, weighted over household payer types."""
    if policy.bill is Bill.NONE:
        return 0.0
    share = Decimal(str(calibration.registered_household_share))
    registered = household_mtl_net_as(
        PayerKind.REGISTERED_INDIVIDUAL_ENTREPRENEUR, bases, params, policy
    )
    unregistered = household_mtl_net_as(PayerKind.UNREGISTERED_HOUSEHOLD, bases, params, policy)
    return float(share * registered + (1 - share) * unregistered)


def run_at_wedge(calibration: MarketCalibration, wedge: float) -> WelfareReport:
    d_cf = calibrate_demand(
        calibration.enterprise_land, calibration.enterprise_rent, calibration.elasticity_cf
    )
    d_if = calibrate_demand(
        calibration.household_land, calibration.household_rent, calibration.elasticity_if
    )
    base = solve_equilibrium(d_cf, d_if, calibration.total_land, 0.0)
    if wedge == 0:
        return WelfareReport.zero(base.rent)
    taxed = solve_equilibrium(d_cf, d_if, calibration.total_land, wedge)
    return welfare_decompose(base, taxed, wedge, d_if)


def run_policy_welfare(
    calibration: MarketCalibration,
    policy: MtlPolicy,
    params: TaxParameters,
    bases: FarmBases,
) -> WelfareReport:
    return run_at_wedge(calibration, policy_wedge(calibration, policy, params, bases))


def to_usd(value_uah: float, params: TaxParameters) -> float:
    return value_uah / float(params.uah_per_usd)


@dataclass(frozen=True)
class SweepReport:
    """Per-metric envelope over an elasticity grid."""

    minimum: dict[str, float]
    maximum: dict[str, float]
    points: tuple[tuple[tuple[float, float], WelfareReport], ...] = field(repr=False)

    @property
    def corner(self) -> bool:
        return any(r.corner for _, r in self.points)

    @property
    def degenerate(self) -> bool:
        return any(r.degenerate for _, r in self.points)


def envelope(reports: Iterable[WelfareReport]) -> tuple[dict[str, float], dict[str, float]]:
    reports = list(reports)
    lo = {m: min(getattr(r, m) for r in reports) for m in METRICS}
    hi = {m: max(getattr(r, m) for r in reports) for m in METRICS}
    return lo, hi


def sweep_elasticities(
    calibration: MarketCalibration,
    policy: MtlPolicy,
    params: TaxParameters,
    bases: FarmBases,
    grid: Sequence[tuple[float, float]] | None = None,
) -> SweepReport:
    grid = tuple(calibration.elasticity_grid if grid is None else grid)
    if not grid:
        raise EquilibriumError("elasticity grid is empty")
    if any(e_cf >= 0 or e_if >= 0 for e_cf, e_if in grid):
        raise EquilibriumError("elasticities must be negative")
    wedge = policy_wedge(calibration, policy, params, bases)
    # sorted so point order in the report does not depend on input order
    points = tuple(
        (pt, run_at_wedge(calibration.with_elasticities(*pt), wedge))
        for pt in sorted(set(grid))
    )
    lo, hi = envelope(r for _, r in points)
    return SweepReport(lo, hi, points)


def default_grid(cf_values: Sequence[float], if_values: Sequence[float]) -> tuple[tuple[float, float], ...]:
    return tuple((e_cf, e_if) for e_cf in cf_values for e_if in if_values)


__all__ = [
    "Equilibrium",
    "EquilibriumError",
    "LinearDemand",
    "MarketCalibration",
    "METRICS",
    "SweepReport",
    "WelfareReport",
    "calibrate_demand",
    "default_grid",
    "envelope",
    "policy_wedge",
    "run_at_wedge",
    "run_policy_welfare",
    "solve_equilibrium",
    "sweep_elasticities",
    "to_usd",
    "welfare_decompose",
]
