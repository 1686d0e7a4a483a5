"""Scenario files: flat ``[section] key = value`` text layered over the
shipped default calibration.

The default calibration doubles as the schema: a key absent from it is an
unknown key. Every value keeps the file and line it came from so that
errors point at the offending line.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from importlib import resources
from pathlib import Path
from typing import Callable

from .equilibrium import EquilibriumError, MarketCalibration, default_grid
from .fiscal_core import (
    Bill,
    Destination,
    FarmBases,
    FiscalError,
    MtlPolicy,
    PayerKind,
    TaxKind,
    TaxParameters,
)
from .land_accounts import LandAccountsError, LandBalanceInputs, ShadowMode
from .segmentation import ECONOMIC_CODE, Product, ProductTech, SegmentationError, SegmentScheme, tax_code_scheme

CALIBRATION_ENV = "AGROPOLICY_CALIBRATION"


class ScenarioError(ValueError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path, self.line = path, line
        where = f"{path}:{line}: " if path and line else (f"{path}: " if path else "")
        super().__init__(where + message)


@dataclass(frozen=True)
class Entry:
    value: str
    path: str
    line: int


Raw = dict[str, dict[str, Entry]]


def data_path(name: str) -> Path:
    return Path(str(resources.files("agropolicy") / "data" / name))


def default_calibration_path() -> Path:
    override = os.environ.get(CALIBRATION_ENV)
    return Path(override) if override else data_path("default_calibration.ini")


def read_flat(path: Path, text: str | None = None) -> Raw:
    """Parse ``[section]`` headers and ``key = value`` lines; ``#`` starts a
    comment line."""
    if text is None:
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise ScenarioError("file not found", str(path)) from None
        except UnicodeDecodeError as exc:
            raise ScenarioError(f"not UTF-8 ({exc.reason})", str(path)) from None
    raw: Raw = {}
    section: str | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]") or len(stripped) < 3:
                raise ScenarioError(f"malformed section header {stripped!r}", str(path), lineno)
            section = stripped[1:-1].strip()
            if section in raw:
                raise ScenarioError(f"duplicate section [{section}]", str(path), lineno)
            raw[section] = {}
            continue
        key, sep, value = stripped.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ScenarioError(f"expected 'key = value', got {stripped!r}", str(path), lineno)
        if section is None:
            raise ScenarioError(f"key {key!r} outside any section", str(path), lineno)
        if key in raw[section]:
            raise ScenarioError(f"duplicate key {key!r} in [{section}]", str(path), lineno)
        raw[section][key] = Entry(value.strip(), str(path), lineno)
    return raw


def merge(defaults: Raw, overrides: Raw) -> Raw:
    merged = {s: dict(keys) for s, keys in defaults.items()}
    for section, keys in overrides.items():
        if section not in merged:
            first = next(iter(keys.values()), None)
            raise ScenarioError(
                f"unknown section [{section}]",
                first.path if first else None,
                first.line if first else None,
            )
        for key, entry in keys.items():
            if key not in merged[section]:
                raise ScenarioError(f"unknown key {key!r} in [{section}]", entry.path, entry.line)
            merged[section][key] = entry
    return merged


# -- value converters -------------------------------------------------------


def _decimal(text: str) -> Decimal:
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise ValueError(f"not a number: {text!r}") from None
    if not value.is_finite():
        raise ValueError(f"not a finite number: {text!r}")
    return value


def _rate(text: str) -> Decimal:
    value = _decimal(text)
    if not 0 <= value <= 1:
        raise ValueError(f"rate must be in [0, 1], got {text}")
    return value


def _non_negative(text: str) -> Decimal:
    value = _decimal(text)
    if value < 0:
        raise ValueError(f"must be non-negative, got {text}")
    return value


def _positive(text: str) -> Decimal:
    value = _decimal(text)
    if value <= 0:
        raise ValueError(f"must be positive, got {text}")
    return value


def _negative(text: str) -> Decimal:
    value = _decimal(text)
    if value >= 0:
        raise ValueError(f"elasticity must be negative, got {text}")
    return value


def _list(item: Callable[[str], object]) -> Callable[[str], tuple]:
    def convert(text: str) -> tuple:
        return tuple(item(part.strip()) for part in text.split(",") if part.strip())

    return convert


def _int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ValueError(f"not an integer: {text!r}") from None
    if value < 0:
        raise ValueError(f"must be non-negative, got {text}")
    return value


def _choice(enum_type, aliases: dict[str, object] | None = None):
    """Enum by value, or only the alias names when ``aliases`` is given."""

    def convert(text: str):
        if aliases is not None:
            if text in aliases:
                return aliases[text]
            allowed = sorted(aliases)
        else:
            try:
                return enum_type(text)
            except ValueError:
                allowed = sorted(e.value for e in enum_type)
        raise ValueError(f"expected one of {', '.join(allowed)}; got {text!r}")

    return convert


def _text(text: str) -> str:
    return text


_TAX_KEY = {
    TaxKind.CIT: "cit",
    TaxKind.SINGLE_TAX: "single_tax",
    TaxKind.LAND_TAX: "land_tax",
    TaxKind.PIT: "pit",
    TaxKind.SSC: "ssc",
    TaxKind.MILITARY: "military",
    TaxKind.VAT: "vat",
}

_RATE_CLASS = {
    "other": PayerKind.LEGAL_ENTITY,
    "registered_entrepreneur": PayerKind.REGISTERED_INDIVIDUAL_ENTREPRENEUR,
}

SCHEMA: dict[str, dict[str, Callable[[str], object]]] = {
    "scenario": {"name": _text, "cohorts": _text, "farms": _text, "out_dir": _text},
    "tax": {
        "ngo_per_ha": _non_negative,
        "rate_cit": _rate,
        "rate_pit": _rate,
        "rate_military": _rate,
        "rate_ssc": _rate,
        "rate_vat": _rate,
        "rate_land_tax": _rate,
        "rate_single_tax4": _rate,
        "uah_per_usd": _positive,
        "uah_per_eur": _positive,
        "taxable_profit_per_ha": _non_negative,
        "rent_paid_per_ha": _non_negative,
        "wage_bill_per_ha": _non_negative,
        "revenue_per_ha": _non_negative,
        "input_purchases_per_ha": _non_negative,
        **{f"destination_{k}": _choice(Destination) for k in _TAX_KEY.values()},
    },
    "mtl": {
        "bill": _choice(Bill),
        "flat_rate": _rate,
        "rate_pasture_garden": _rate,
        "rate_registered_entrepreneur": _rate,
        "rate_other": _rate,
        "creditable_taxes": _list(_choice(TaxKind)),
        "household_creditable_taxes": _list(_choice(TaxKind)),
        "phase_in": _list(_rate),
        "evaluation_year": _int,
        "household_rate_class": _choice(PayerKind, _RATE_CLASS),
    },
    "market": {
        "total_land": _positive,
        "enterprise_land": _positive,
        "enterprise_rent": _positive,
        "household_rent": _positive,
        "elasticity_cf": _negative,
        "elasticity_if": _negative,
        "elasticity_cf_grid": _list(_negative),
        "elasticity_if_grid": _list(_negative),
        "registered_household_share": _rate,
    },
    "land_balance": {
        "total_ag_land": _non_negative,
        "enterprise_cultivated": _non_negative,
        "household_cultivated": _non_negative,
        "occupied_adjustment": _non_negative,
        "declared_ep4": _non_negative,
        "ep2_share_assumption": _rate,
        "osg_own_use": _non_negative,
        "uncultivated_share_assumption": _rate,
        "assumption_base": _non_negative,
        "household_output_share": _rate,
        "shadow_mode": _choice(ShadowMode),
        "reported_shadow_output_share": _rate,
    },
    "segmentation": {
        "scheme": _choice(None, {"economic_code": "economic_code", "tax_code": "tax_code"}),
        **{f"{kind}_{p.value}": _positive for p in Product for kind in ("price", "yield")},
    },
}


@dataclass(frozen=True)
class ShadowSettings:
    household_output_share: float
    mode: ShadowMode
    reported_share: float


@dataclass(frozen=True)
class Scenario:
    name: str
    params: TaxParameters
    bases: FarmBases
    policy: MtlPolicy
    market: MarketCalibration
    land_balance: LandBalanceInputs
    shadow: ShadowSettings
    scheme: SegmentScheme
    techs: dict[Product, ProductTech]
    cohorts_path: Path | None
    farms_path: Path | None
    out_dir: Path
    values: dict[str, dict[str, str]] = field(compare=False, repr=False)


def _convert(raw: Raw) -> dict[str, dict[str, object]]:
    out: dict[str, dict[str, object]] = {}
    for section, keys in SCHEMA.items():
        if section not in raw:
            raise ScenarioError(f"calibration is missing section [{section}]")
        out[section] = {}
        for key, convert in keys.items():
            entry = raw[section].get(key)
            if entry is None:
                raise ScenarioError(f"calibration is missing key {key!r} in [{section}]")
            try:
                out[section][key] = convert(entry.value)
            except ValueError as exc:
                raise ScenarioError(f"[{section}] {key}: {exc}", entry.path, entry.line) from None
        extra = set(raw[section]) - set(keys)
        if extra:
            key = sorted(extra)[0]
            entry = raw[section][key]
            raise ScenarioError(f"unknown key {key!r} in [{section}]", entry.path, entry.line)
    for section in set(raw) - set(SCHEMA):
        raise ScenarioError(f"unknown section [{section}]")
    return out


def _resolve_path(text: str, base: Path) -> Path | None:
    if not text:
        return None
    path = Path(text)
    return path if path.is_absolute() else (base / path).resolve()


def _section_error(raw: Raw, section: str, exc: Exception) -> ScenarioError:
    entries = sorted(raw[section].values(), key=lambda e: (e.path, e.line))
    # point at an override if the section has one
    path = next((e.path for e in entries if not e.path.endswith("default_calibration.ini")), entries[0].path)
    return ScenarioError(f"[{section}]: {exc}", path)


def build(raw: Raw, base_dir: Path) -> Scenario:
    v = _convert(raw)
    tax, mtl, market, lb, seg = v["tax"], v["mtl"], v["market"], v["land_balance"], v["segmentation"]
    try:
        params = TaxParameters(
            ngo_per_ha=tax["ngo_per_ha"],
            rate_cit=tax["rate_cit"],
            rate_pit=tax["rate_pit"],
            rate_military=tax["rate_military"],
            rate_ssc=tax["rate_ssc"],
            rate_vat=tax["rate_vat"],
            rate_land_tax=tax["rate_land_tax"],
            rate_single_tax4=tax["rate_single_tax4"],
            uah_per_usd=tax["uah_per_usd"],
            uah_per_eur=tax["uah_per_eur"],
            destinations={k: tax[f"destination_{name}"] for k, name in _TAX_KEY.items()},
        )
        bases = FarmBases(
            rent_paid_per_ha=tax["rent_paid_per_ha"],
            wage_bill_per_ha=tax["wage_bill_per_ha"],
            revenue_per_ha=tax["revenue_per_ha"],
            input_purchases_per_ha=tax["input_purchases_per_ha"],
            taxable_profit_per_ha=tax["taxable_profit_per_ha"],
        )
    except FiscalError as exc:
        raise _section_error(raw, "tax", exc) from None
    try:
        policy = MtlPolicy(
            bill=mtl["bill"],
            flat_rate=mtl["flat_rate"],
            rate_pasture_garden=mtl["rate_pasture_garden"],
            rate_registered_entrepreneur=mtl["rate_registered_entrepreneur"],
            rate_other=mtl["rate_other"],
            creditable_taxes=frozenset(mtl["creditable_taxes"]),
            household_creditable_taxes=frozenset(mtl["household_creditable_taxes"]),
            phase_in=mtl["phase_in"],
            evaluation_year=mtl["evaluation_year"],
            household_rate_class=mtl["household_rate_class"],
        )
    except FiscalError as exc:
        raise _section_error(raw, "mtl", exc) from None
    try:
        cf_grid = [float(x) for x in market["elasticity_cf_grid"]]
        if_grid = [float(x) for x in market["elasticity_if_grid"]]
        if not cf_grid or not if_grid:
            raise EquilibriumError("elasticity grids must be non-empty")
        calibration = MarketCalibration(
            total_land=float(market["total_land"]),
            enterprise_land=float(market["enterprise_land"]),
            enterprise_rent=float(market["enterprise_rent"]),
            household_rent=float(market["household_rent"]),
            elasticity_cf=float(market["elasticity_cf"]),
            elasticity_if=float(market["elasticity_if"]),
            elasticity_grid=default_grid(cf_grid, if_grid),
            registered_household_share=float(market["registered_household_share"]),
        )
    except EquilibriumError as exc:
        raise _section_error(raw, "market", exc) from None
    try:
        land = LandBalanceInputs(
            **{
                k: float(lb[k])
                for k in (
                    "total_ag_land",
                    "enterprise_cultivated",
                    "household_cultivated",
                    "occupied_adjustment",
                    "declared_ep4",
                    "ep2_share_assumption",
                    "osg_own_use",
                    "uncultivated_share_assumption",
                    "assumption_base",
                )
            }
        )
    except LandAccountsError as exc:
        raise _section_error(raw, "land_balance", exc) from None
    shadow = ShadowSettings(
        float(lb["household_output_share"]), lb["shadow_mode"], float(lb["reported_shadow_output_share"])
    )
    try:
        techs = {
            p: ProductTech(p, float(seg[f"price_{p.value}"]), float(seg[f"yield_{p.value}"]))
            for p in Product
        }
    except SegmentationError as exc:
        raise _section_error(raw, "segmentation", exc) from None
    if seg["scheme"] == "tax_code":
        scheme = tax_code_scheme(float(params.uah_per_eur))
    else:
        scheme = ECONOMIC_CODE

    sc = v["scenario"]
    cohorts = _resolve_path(sc["cohorts"], base_dir)
    farms = _resolve_path(sc["farms"], base_dir)
    out_dir = _resolve_path(sc["out_dir"] or ".", base_dir)
    values = {s: {k: e.value for k, e in keys.items()} for s, keys in raw.items()}
    values["scenario"].update(
        cohorts=str(cohorts) if cohorts else "",
        farms=str(farms) if farms else "",
        out_dir=str(out_dir),
    )
    return Scenario(
        name=sc["name"],
        params=params,
        bases=bases,
        policy=policy,
        market=calibration,
        land_balance=land,
        shadow=shadow,
        scheme=scheme,
        techs=techs,
        cohorts_path=cohorts,
        farms_path=farms,
        out_dir=out_dir,
        values=values,
    )


def load_defaults() -> Raw:
    return read_flat(default_calibration_path())


def parse_scenario(path: Path | str | None = None, text: str | None = None) -> Scenario:
    """Resolve a scenario file (or ``text``) against the default calibration.

    With neither argument the shipped defaults are returned, with relative
    paths resolved against the current directory.
    """
    defaults = load_defaults()
    if path is None and text is None:
        return build(defaults, Path.cwd())
    path = Path(path) if path is not None else Path("<string>")
    overrides = read_flat(path, text)
    base_dir = path.resolve().parent if text is None else Path.cwd()
    return build(merge(defaults, overrides), base_dir)


def echo(scenario: Scenario) -> str:
    """Fully resolved scenario in the same flat format; parses back to an
    equal Scenario."""
    lines = [f"# resolved scenario: {scenario.name}"]
    lines.append(f"# resolved: phase_in_multiplier = {scenario.policy.phase_in_multiplier}")
    for section, keys in SCHEMA.items():
        lines.append("")
        lines.append(f"[{section}]")
        for key in keys:
            lines.append(f"{key} = {scenario.values[section][key]}")
    return "\n".join(lines) + "\n"
