"""Shadow-sector accounting: informally used land and shadow output share."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction


class LandAccountsError(ValueError):
    pass


class ShadowMode(str, enum.Enum):
    PAPER = "paper"  # a third of household output, the published shortcut
    RESIDUAL = "residual"  # household land not farmed by OSG


@dataclass(frozen=True)
class LandBalanceInputs:
    """Land stocks in mln ha; shares are fractions of ``assumption_base``."""

    total_ag_land: float
    enterprise_cultivated: float
    household_cultivated: float
    occupied_adjustment: float
    declared_ep4: float
    ep2_share_assumption: float
    osg_own_use: float
    uncultivated_share_assumption: float
    assumption_base: float

    def __post_init__(self) -> None:
        for name, value in vars(self).items():
            if value < 0:
                raise LandAccountsError(f"{name} must be non-negative")
        for name in ("ep2_share_assumption", "uncultivated_share_assumption"):
            if getattr(self, name) > 1:
                raise LandAccountsError(f"{name} must be in [0, 1]")

    @property
    def ep2_land(self) -> float:
        return self.ep2_share_assumption * self.assumption_base

    @property
    def uncultivated_land(self) -> float:
        return self.uncultivated_share_assumption * self.assumption_base


@dataclass(frozen=True)
class LandBalanceResult:
    inputs: LandBalanceInputs
    cultivated_total: float
    explained: float
    informal: float
    informal_share: float

    @property
    def inconsistent(self) -> bool:
        """Inputs explain more land than is cultivated."""
        return self.informal < 0

    def terms(self) -> list[tuple[str, float]]:
        """Every intermediate term, in audit order."""
        i = self.inputs
        return [
            ("total_ag_land", i.total_ag_land),
            ("enterprise_cultivated", i.enterprise_cultivated),
            ("household_cultivated", i.household_cultivated),
            ("occupied_adjustment", i.occupied_adjustment),
            ("cultivated_total", self.cultivated_total),
            ("declared_ep4", i.declared_ep4),
            ("assumption_base", i.assumption_base),
            ("ep2_share_assumption", i.ep2_share_assumption),
            ("ep2_land", i.ep2_land),
            ("osg_own_use", i.osg_own_use),
            ("uncultivated_share_assumption", i.uncultivated_share_assumption),
            ("uncultivated_land", i.uncultivated_land),
            ("explained", self.explained),
            ("informal", self.informal),
            ("informal_share_base", i.total_ag_land - i.occupied_adjustment),
            ("informal_share", self.informal_share),
        ]


def land_balance(inputs: LandBalanceInputs) -> LandBalanceResult:
    cultivated = inputs.enterprise_cultivated + inputs.household_cultivated - inputs.occupied_adjustment
    explained = inputs.declared_ep4 + inputs.ep2_land + inputs.osg_own_use + inputs.uncultivated_land
    informal = cultivated - explained
    denominator = inputs.total_ag_land - inputs.occupied_adjustment
    if denominator <= 0:
        raise LandAccountsError("total_ag_land must exceed occupied_adjustment")
    return LandBalanceResult(inputs, cultivated, explained, informal, informal / denominator)


def shadow_output_share(
    household_output_share: float,
    osg_land: float,
    household_land: float,
    mode: ShadowMode = ShadowMode.PAPER,
) -> float:
    if not 0 <= household_output_share <= 1:
        raise LandAccountsError("household_output_share must be in [0, 1]")
    if household_land <= 0 or osg_land <= 0:
        raise LandAccountsError("land areas must be positive")
    if osg_land > household_land:
        raise LandAccountsError("osg_land cannot exceed household_land")
    mode = ShadowMode(mode)
    if mode is ShadowMode.PAPER:
        return household_output_share * float(Fraction(1, 3))
    return household_output_share * (household_land - osg_land) / household_land
