"""Simulation parameter set, validation, and flat KEY = value config parsing."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

TAX_KINDS = ("consumption", "labor", "transaction", "firms", "property")
CHANNELS = ("local", "equal_pool", "fpm_pool")


class ParamError(ValueError):
    """Invalid parameter value or unknown parameter name."""


@dataclass
class TaxRates:
    """The five adjustable tax rates, each a fraction in [0, 1].

    Property is charged monthly on house value, so its sensible scale is
    much smaller than the flow taxes.
    """

    consumption: float = 0.05
    labor: float = 0.04
    transaction: float = 0.02
    firms: float = 0.06
    property: float = 0.0

    def as_dict(self) -> dict[str, float]:
        return {kind: getattr(self, kind) for kind in TAX_KINDS}


@dataclass
class SimParams:
    """Full parameter set for one simulation configuration.

    Defaults are documented in the README config reference. All values can
    be set from a config file or swept from the command line using the
    upper-case names in PARAM_TABLE.
    """

    # firm behaviour
    alpha: float = 0.5
    markup: float = 0.15
    sticky_prices: float = 0.5
    labor_market_frequency: int = 2
    wage_ignore_unemployment: bool = False

    # family behaviour and market sampling
    beta: float = 0.95
    size_market: int = 5
    pct_distance_hiring: float = 0.3
    percentage_check_new_location: float = 0.05
    price_criterion_probability: float = 0.5

    # world generation
    house_vacancy: float = 0.1
    members_per_family: float = 2.5
    percentage_actual_pop: float = 0.2
    citizens_per_firm: float = 5.0
    hedonic_base_coefficient: float = 0.005

    # fiscal regime
    alternative0: bool = True
    fpm_distribution: bool = True
    taxes: TaxRates = field(default_factory=TaxRates)
    taxes_structure: dict[str, float] = field(default_factory=dict)
    reference_cost_per_capita: float = 1.0

    # run control
    processing_acps: list[str] = field(default_factory=list)
    months: int = 240
    working_age_min: int = 16
    working_age_max: int = 70
    initial_unemployment: float = 0.3
    price_floor: float = 1e-300

    def validate(self) -> None:
        problems = []
        if not 0.0 < self.alpha <= 1.0:
            problems.append("alpha must be in (0, 1]")
        if self.markup < 0.0:
            problems.append("markup must be >= 0")
        if not 0.0 <= self.sticky_prices <= 1.0:
            problems.append("sticky_prices must be in [0, 1]")
        if self.labor_market_frequency < 1:
            problems.append("labor_market_frequency must be >= 1")
        if not 0.0 <= self.beta <= 1.0:
            problems.append("beta must be in [0, 1]")
        if self.size_market < 1:
            problems.append("size_market must be >= 1")
        if not 0.0 <= self.pct_distance_hiring <= 1.0:
            problems.append("pct_distance_hiring must be in [0, 1]")
        if not 0.0 <= self.percentage_check_new_location <= 1.0:
            problems.append("percentage_check_new_location must be in [0, 1]")
        if not 0.0 <= self.price_criterion_probability <= 1.0:
            problems.append("price_criterion_probability must be in [0, 1]")
        if self.house_vacancy < 0.0:
            problems.append("house_vacancy must be >= 0")
        if self.members_per_family <= 0.0:
            problems.append("members_per_family must be > 0")
        if not 0.0 < self.percentage_actual_pop <= 1.0:
            problems.append("percentage_actual_pop must be in (0, 1]")
        if self.citizens_per_firm <= 0.0:
            problems.append("citizens_per_firm must be > 0")
        if self.hedonic_base_coefficient <= 0.0:
            problems.append("hedonic_base_coefficient must be > 0")
        for kind, rate in self.taxes.as_dict().items():
            if not 0.0 <= rate <= 1.0:
                problems.append(f"tax rate {kind} must be in [0, 1]")
        if self.reference_cost_per_capita <= 0.0:
            problems.append("reference_cost_per_capita must be > 0")
        if not 0 <= self.months <= 360:
            problems.append("months must be in [0, 360]")
        if not 0 <= self.working_age_min <= self.working_age_max:
            problems.append("working age bounds must satisfy 0 <= min <= max")
        if not 0.0 <= self.initial_unemployment <= 1.0:
            problems.append("initial_unemployment must be in [0, 1]")
        if self.price_floor <= 0.0:
            problems.append("price_floor must be > 0")
        if problems:
            raise ParamError("; ".join(problems))

    def copy(self) -> SimParams:
        return copy.deepcopy(self)


# upper-case config/sweep name -> (attribute path, value type)
PARAM_TABLE: dict[str, tuple[str, type]] = {
    "ALPHA": ("alpha", float),
    "BETA": ("beta", float),
    "MARKUP": ("markup", float),
    "STICKY_PRICES": ("sticky_prices", float),
    "LABOR_MARKET": ("labor_market_frequency", int),
    "WAGE_IGNORE_UNEMPLOYMENT": ("wage_ignore_unemployment", bool),
    "SIZE_MARKET": ("size_market", int),
    "PCT_DISTANCE_HIRING": ("pct_distance_hiring", float),
    "PERCENTAGE_CHECK_NEW_LOCATION": ("percentage_check_new_location", float),
    "PRICE_CRITERION_PROBABILITY": ("price_criterion_probability", float),
    "HOUSE_VACANCY": ("house_vacancy", float),
    "MEMBERS_PER_FAMILY": ("members_per_family", float),
    "PERCENTAGE_ACTUAL_POP": ("percentage_actual_pop", float),
    "CITIZENS_PER_FIRM": ("citizens_per_firm", float),
    "HEDONIC_BASE_COEFFICIENT": ("hedonic_base_coefficient", float),
    "ALTERNATIVE0": ("alternative0", bool),
    "FPM_DISTRIBUTION": ("fpm_distribution", bool),
    "REFERENCE_COST_PER_CAPITA": ("reference_cost_per_capita", float),
    "PROCESSING_ACPS": ("processing_acps", list),
    "MONTHS": ("months", int),
    "WORKING_AGE_MIN": ("working_age_min", int),
    "WORKING_AGE_MAX": ("working_age_max", int),
    "INITIAL_UNEMPLOYMENT": ("initial_unemployment", float),
    "PRICE_FLOOR": ("price_floor", float),
}
for _kind in TAX_KINDS:
    PARAM_TABLE[f"TAXES.{_kind.upper()}"] = (f"taxes.{_kind}", float)


def is_known_param(name: str) -> bool:
    upper = name.upper()
    return upper in PARAM_TABLE or upper.startswith("TAXES_STRUCTURE.")


def param_type(name: str) -> type:
    upper = name.upper()
    if upper.startswith("TAXES_STRUCTURE."):
        return float
    if upper not in PARAM_TABLE:
        raise ParamError(f"unknown parameter {name!r}")
    return PARAM_TABLE[upper][1]


def set_param(params: SimParams, name: str, value) -> None:
    """Assign one parameter in place, by its upper-case config name."""
    upper = name.upper()
    if upper.startswith("TAXES_STRUCTURE."):
        params.taxes_structure[upper[len("TAXES_STRUCTURE."):]] = float(value)
        return
    if upper not in PARAM_TABLE:
        raise ParamError(f"unknown parameter {name!r}")
    path, kind = PARAM_TABLE[upper]
    if kind is int:
        value = int(round(float(value)))
    elif kind is float:
        value = float(value)
    elif kind is bool:
        value = bool(value)
    if "." in path:
        head, tail = path.split(".", 1)
        setattr(getattr(params, head), tail, value)
    else:
        setattr(params, path, value)


def _coerce(raw: str, kind: type, key: str):
    raw = raw.strip()
    if kind is bool:
        lowered = raw.lower()
        if lowered in ("true", "1", "yes"):
            return True
        if lowered in ("false", "0", "no"):
            return False
        raise ParamError(f"{key}: expected a boolean, got {raw!r}")
    if kind is int:
        try:
            return int(raw)
        except ValueError as exc:
            raise ParamError(f"{key}: expected an integer, got {raw!r}") from exc
    if kind is float:
        try:
            return float(raw)
        except ValueError as exc:
            raise ParamError(f"{key}: expected a number, got {raw!r}") from exc
    if kind is list:
        return [item.strip() for item in raw.split(",") if item.strip()]
    raise ParamError(f"{key}: unsupported type")


def parse_config_text(text: str, base: SimParams | None = None) -> SimParams:
    """Parse flat ``KEY = value`` lines on top of base (or default) params.

    Blank lines and lines starting with ``#`` are ignored.
    """
    params = base.copy() if base is not None else SimParams()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParamError(f"line {lineno}: expected KEY = value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip().upper()
        if not is_known_param(key):
            raise ParamError(f"line {lineno}: unknown parameter {key!r}")
        set_param(params, key, _coerce(raw, param_type(key), key))
    params.validate()
    return params


def load_config(path) -> SimParams:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config_text(handle.read())


def params_as_flat_dict(params: SimParams) -> dict[str, object]:
    """Config-style view of a parameter set, used in run metadata."""
    out: dict[str, object] = {}
    for key, (path, _) in PARAM_TABLE.items():
        if "." in path:
            head, tail = path.split(".", 1)
            out[key] = getattr(getattr(params, head), tail)
        else:
            value = getattr(params, path)
            out[key] = list(value) if isinstance(value, list) else value
    for key, value in sorted(params.taxes_structure.items()):
        out[f"TAXES_STRUCTURE.{key}"] = value
    return out


def bool_param_names() -> list[str]:
    return [name for name, (_, kind) in PARAM_TABLE.items() if kind is bool]
