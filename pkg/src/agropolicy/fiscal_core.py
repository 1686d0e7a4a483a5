"""Per-hectare tax burdens under the five agricultural tax regimes and the
minimum tax liability (MTL) proposed by bills #3131 and #3131-d.

Money is carried as ``Decimal`` UAH per hectare; rounding to whole UAH
happens only when a report is written (see :func:`round_uah`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Sequence

ZERO = Decimal(0)


class Regime(str, enum.Enum):
    GENERAL_LEGAL_ENTITY = "general_legal_entity"
    SINGLE_TAX4_VAT_PAYER = "single_tax4_vat_payer"
    SINGLE_TAX4_NON_VAT = "single_tax4_non_vat"
    HOUSEHOLD_SHADOW = "household_shadow"
    HOUSEHOLD_DECLARED = "household_declared"


HOUSEHOLD_REGIMES = frozenset({Regime.HOUSEHOLD_SHADOW, Regime.HOUSEHOLD_DECLARED})


class LandClass(str, enum.Enum):
    ARABLE = "arable"
    PASTURE_OR_GARDEN = "pasture_or_garden"


class PayerKind(str, enum.Enum):
    LEGAL_ENTITY = "legal_entity"
    REGISTERED_INDIVIDUAL_ENTREPRENEUR = "registered_individual_entrepreneur"
    UNREGISTERED_HOUSEHOLD = "unregistered_household"


class TaxKind(str, enum.Enum):
    CIT = "CIT"
    SINGLE_TAX = "SingleTax"
    LAND_TAX = "LandTax"
    PIT = "PIT"
    SSC = "SSC"
    MILITARY = "Military"
    VAT = "VAT"


class Destination(str, enum.Enum):
    LOCAL = "local"
    CENTRAL = "central"


class Bill(str, enum.Enum):
    NONE = "none"
    BILL_3131 = "3131"
    BILL_3131D = "3131d"


class FiscalError(ValueError):
    """Invalid tax parameters, farm profile or policy."""


DEFAULT_DESTINATIONS: Mapping[TaxKind, Destination] = {
    TaxKind.CIT: Destination.CENTRAL,
    TaxKind.SINGLE_TAX: Destination.LOCAL,
    TaxKind.LAND_TAX: Destination.LOCAL,
    TaxKind.PIT: Destination.LOCAL,
    TaxKind.SSC: Destination.CENTRAL,
    TaxKind.MILITARY: Destination.CENTRAL,
    TaxKind.VAT: Destination.CENTRAL,
}


def _check_fraction(name: str, value: Decimal) -> None:
    if not ZERO <= value <= 1:
        raise FiscalError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class TaxParameters:
    ngo_per_ha: Decimal
    rate_cit: Decimal
    rate_pit: Decimal
    rate_military: Decimal
    rate_ssc: Decimal
    rate_vat: Decimal
    rate_land_tax: Decimal
    rate_single_tax4: Decimal
    uah_per_usd: Decimal
    uah_per_eur: Decimal
    destinations: Mapping[TaxKind, Destination] = field(
        default_factory=lambda: dict(DEFAULT_DESTINATIONS)
    )

    def __post_init__(self) -> None:
        for name in (
            "rate_cit",
            "rate_pit",
            "rate_military",
            "rate_ssc",
            "rate_vat",
            "rate_land_tax",
            "rate_single_tax4",
        ):
            _check_fraction(name, getattr(self, name))
        # NGO = 0 is admitted for the zero-base identities.
        if self.ngo_per_ha < 0:
            raise FiscalError("ngo_per_ha must be non-negative")
        if self.uah_per_usd <= 0 or self.uah_per_eur <= 0:
            raise FiscalError("exchange rates must be positive")

    @property
    def rate_income_military(self) -> Decimal:
        return self.rate_pit + self.rate_military

    @property
    def rate_payroll(self) -> Decimal:
        return self.rate_pit + self.rate_military + self.rate_ssc


@dataclass(frozen=True)
class FarmBases:
    """Per-hectare economic bases shared by the default regime profiles."""

    rent_paid_per_ha: Decimal
    wage_bill_per_ha: Decimal
    revenue_per_ha: Decimal
    input_purchases_per_ha: Decimal
    taxable_profit_per_ha: Decimal


@dataclass(frozen=True)
class FarmProfile:
    regime: Regime
    land_ha: Decimal
    land_class: LandClass
    payer_kind: PayerKind
    rent_paid_per_ha: Decimal
    wage_bill_per_ha: Decimal
    revenue_per_ha: Decimal
    input_purchases_per_ha: Decimal
    taxable_profit_per_ha: Decimal

    def __post_init__(self) -> None:
        if not isinstance(self.regime, Regime):
            raise FiscalError(f"unknown regime: {self.regime!r}")
        if self.land_ha <= 0:
            raise FiscalError("land_ha must be positive")
        for name in (
            "rent_paid_per_ha",
            "wage_bill_per_ha",
            "revenue_per_ha",
            "input_purchases_per_ha",
            "taxable_profit_per_ha",
        ):
            if getattr(self, name) < 0:
                raise FiscalError(f"{name} must be non-negative")
        if (
            self.regime in HOUSEHOLD_REGIMES
            and self.payer_kind is not PayerKind.UNREGISTERED_HOUSEHOLD
        ):
            raise FiscalError(f"{self.regime.value} requires an unregistered household payer")


def default_profile(
    regime: Regime,
    bases: FarmBases,
    land_ha: Decimal = Decimal(1),
    land_class: LandClass = LandClass.ARABLE,
) -> FarmProfile:
    payer = (
        PayerKind.UNREGISTERED_HOUSEHOLD
        if regime in HOUSEHOLD_REGIMES
        else PayerKind.LEGAL_ENTITY
    )
    return FarmProfile(
        regime=regime,
        land_ha=land_ha,
        land_class=land_class,
        payer_kind=payer,
        rent_paid_per_ha=bases.rent_paid_per_ha,
        wage_bill_per_ha=bases.wage_bill_per_ha,
        revenue_per_ha=bases.revenue_per_ha,
        input_purchases_per_ha=bases.input_purchases_per_ha,
        taxable_profit_per_ha=bases.taxable_profit_per_ha,
    )


@dataclass(frozen=True)
class TaxComponent:
    tax_kind: TaxKind
    amount_per_ha: Decimal
    destination: Destination
    as_agent: bool


@dataclass(frozen=True)
class TaxAssessment:
    regime: Regime
    components: tuple[TaxComponent, ...]

    @property
    def total_per_ha(self) -> Decimal:
        return sum((c.amount_per_ha for c in self.components), ZERO)

    @property
    def own_per_ha(self) -> Decimal:
        return sum((c.amount_per_ha for c in self.components if not c.as_agent), ZERO)

    @property
    def agent_per_ha(self) -> Decimal:
        return sum((c.amount_per_ha for c in self.components if c.as_agent), ZERO)

    def amount(self, *kinds: TaxKind) -> Decimal:
        return sum((c.amount_per_ha for c in self.components if c.tax_kind in kinds), ZERO)

    def by_destination(self, destination: Destination) -> Decimal:
        return sum(
            (c.amount_per_ha for c in self.components if c.destination is destination), ZERO
        )

    def scaled(self, land_ha: Decimal) -> Decimal:
        """Whole-farm taxes for ``land_ha`` hectares at unchanged per-ha bases."""
        return self.total_per_ha * land_ha


def assess_taxes(profile: FarmProfile, params: TaxParameters) -> TaxAssessment:
    """Per-hectare taxes borne under the profile's regime.

    VAT under the general regime and for VAT-registered single-tax payers is
    passed on to consumers and therefore not part of the assessment.
    """
    if not isinstance(profile.regime, Regime):
        raise FiscalError(f"unknown regime: {profile.regime!r}")
    household = profile.regime in HOUSEHOLD_REGIMES
    dest = params.destinations
    parts: list[tuple[TaxKind, Decimal, bool]] = []

    def agent_taxes() -> None:
        # rent is taxed as landowner income, wages additionally carry SSC
        pit_base = profile.rent_paid_per_ha + profile.wage_bill_per_ha
        parts.append((TaxKind.PIT, params.rate_pit * pit_base, True))
        parts.append((TaxKind.MILITARY, params.rate_military * pit_base, True))
        parts.append((TaxKind.SSC, params.rate_ssc * profile.wage_bill_per_ha, True))

    land_tax = params.rate_land_tax * params.ngo_per_ha
    vat_on_inputs = params.rate_vat * profile.input_purchases_per_ha

    regime = profile.regime
    if regime is Regime.GENERAL_LEGAL_ENTITY:
        parts.append((TaxKind.CIT, params.rate_cit * profile.taxable_profit_per_ha, False))
        parts.append((TaxKind.LAND_TAX, land_tax, True))
        agent_taxes()
    elif regime is Regime.SINGLE_TAX4_VAT_PAYER:
        parts.append((TaxKind.SINGLE_TAX, params.rate_single_tax4 * params.ngo_per_ha, False))
        agent_taxes()
    elif regime is Regime.SINGLE_TAX4_NON_VAT:
        parts.append((TaxKind.SINGLE_TAX, params.rate_single_tax4 * params.ngo_per_ha, False))
        agent_taxes()
        parts.append((TaxKind.VAT, vat_on_inputs, True))
    elif regime is Regime.HOUSEHOLD_SHADOW:
        parts.append((TaxKind.LAND_TAX, land_tax, False))
        parts.append((TaxKind.VAT, vat_on_inputs, False))
    elif regime is Regime.HOUSEHOLD_DECLARED:
        parts.append((TaxKind.LAND_TAX, land_tax, False))
        parts.append((TaxKind.PIT, params.rate_pit * profile.revenue_per_ha, False))
        parts.append((TaxKind.MILITARY, params.rate_military * profile.revenue_per_ha, False))
        parts.append((TaxKind.VAT, vat_on_inputs, False))
    else:  # pragma: no cover - exhaustive over Regime
        raise FiscalError(f"unknown regime: {regime!r}")

    components = tuple(
        TaxComponent(kind, amount, dest[kind], as_agent and not household)
        for kind, amount, as_agent in parts
    )
    return TaxAssessment(regime=regime, components=components)


@dataclass(frozen=True)
class MtlPolicy:
    bill: Bill = Bill.NONE
    flat_rate: Decimal = ZERO
    rate_pasture_garden: Decimal = ZERO
    rate_registered_entrepreneur: Decimal = ZERO
    rate_other: Decimal = ZERO
    creditable_taxes: frozenset[TaxKind] = frozenset()
    household_creditable_taxes: frozenset[TaxKind] = frozenset({TaxKind.LAND_TAX})
    phase_in: tuple[Decimal, ...] = ()
    evaluation_year: int = 0
    # rate class charged to unregistered households under bill 3131-d
    household_rate_class: PayerKind = PayerKind.LEGAL_ENTITY

    def __post_init__(self) -> None:
        for name in (
            "flat_rate",
            "rate_pasture_garden",
            "rate_registered_entrepreneur",
            "rate_other",
        ):
            _check_fraction(name, getattr(self, name))
        for value in self.phase_in:
            _check_fraction("phase_in", value)
        if any(b < a for a, b in zip(self.phase_in, self.phase_in[1:])):
            raise FiscalError("phase_in must be non-decreasing")
        if self.evaluation_year < 0:
            raise FiscalError("evaluation_year must be non-negative")
        if TaxKind.VAT in self.creditable_taxes | self.household_creditable_taxes:
            raise FiscalError("VAT is never creditable against the MTL")
        if self.household_rate_class is PayerKind.UNREGISTERED_HOUSEHOLD:
            raise FiscalError("household_rate_class must name a rate class")

    @property
    def phase_in_multiplier(self) -> Decimal:
        if self.evaluation_year < len(self.phase_in):
            return self.phase_in[self.evaluation_year]
        return Decimal(1)


def mtl_gross_rate(
    land_class: LandClass, payer_kind: PayerKind, policy: MtlPolicy
) -> Decimal:
    """MTL rate as a fraction of NGO, phase-in included."""
    if policy.bill is Bill.NONE:
        raise FiscalError("no MTL bill selected")
    if policy.bill is Bill.BILL_3131:
        return policy.flat_rate
    if payer_kind is PayerKind.UNREGISTERED_HOUSEHOLD:
        payer_kind = policy.household_rate_class
    if land_class is LandClass.PASTURE_OR_GARDEN:
        rate = policy.rate_pasture_garden
    elif payer_kind is PayerKind.REGISTERED_INDIVIDUAL_ENTREPRENEUR:
        rate = policy.rate_registered_entrepreneur
    else:
        rate = policy.rate_other
    if payer_kind is PayerKind.REGISTERED_INDIVIDUAL_ENTREPRENEUR:
        rate *= policy.phase_in_multiplier
    return rate


def mtl_gross(profile: FarmProfile, policy: MtlPolicy, params: TaxParameters) -> Decimal:
    return mtl_gross_rate(profile.land_class, profile.payer_kind, policy) * params.ngo_per_ha


def mtl_creditable(
    assessment: TaxAssessment, profile: FarmProfile, policy: MtlPolicy
) -> Decimal:
    if profile.payer_kind is PayerKind.UNREGISTERED_HOUSEHOLD:
        kinds = policy.household_creditable_taxes
    else:
        kinds = policy.creditable_taxes
    return assessment.amount(*(kinds - {TaxKind.VAT}))


def mtl_net(profile: FarmProfile, params: TaxParameters, policy: MtlPolicy) -> Decimal:
    """Additional per-hectare burden after crediting taxes already paid."""
    if policy.bill is Bill.NONE:
        return ZERO
    assessment = assess_taxes(profile, params)
    gross = mtl_gross(profile, policy, params)
    return max(ZERO, gross - mtl_creditable(assessment, profile, policy))


def household_mtl_net_as(
    payer_kind: PayerKind,
    bases: FarmBases,
    params: TaxParameters,
    policy: MtlPolicy,
) -> Decimal:
    """Net MTL of a shadow household charged at ``payer_kind``'s rate.

    Households registered as individual entrepreneurs share the shadow
    household's tax base (land tax and VAT on inputs) but face the
    registered-entrepreneur rate and the registered creditable set.
    """
    if policy.bill is Bill.NONE:
        return ZERO
    profile = default_profile(Regime.HOUSEHOLD_SHADOW, bases)
    assessment = assess_taxes(profile, params)
    gross = mtl_gross_rate(profile.land_class, payer_kind, policy) * params.ngo_per_ha
    if payer_kind is PayerKind.UNREGISTERED_HOUSEHOLD:
        kinds = policy.household_creditable_taxes
    else:
        kinds = policy.creditable_taxes
    return max(ZERO, gross - assessment.amount(*(kinds - {TaxKind.VAT})))


@dataclass(frozen=True)
class BurdenRow:
    regime: Regime
    baseline: Decimal
    mtl_net: Decimal

    @property
    def total(self) -> Decimal:
        return self.baseline + self.mtl_net


def burden_table(
    params: TaxParameters,
    policy: MtlPolicy,
    bases: FarmBases,
    regimes: Sequence[Regime] = tuple(Regime),
) -> list[BurdenRow]:
    rows = []
    for regime in regimes:
        profile = default_profile(regime, bases)
        baseline = assess_taxes(profile, params).total_per_ha
        rows.append(BurdenRow(regime, baseline, mtl_net(profile, params, policy)))
    return rows


def round_uah(value: Decimal) -> int:
    """Round half-up to whole UAH."""
    return int(value.quantize(Decimal(1), rounding=ROUND_HALF_UP))
