"""Agent and world-state types, plus the planar distance helper.

Every agent collection on the world is a dict keyed by id; insertion order
is creation order and is the canonical deterministic iteration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from ..fiscal import DistributionMatrix, TaxLedger

if TYPE_CHECKING:
    from .regions import RegionData

Location = tuple[float, float]

FEMALE = "female"
MALE = "male"


def distance(a: Location, b: Location) -> float:
    """Euclidean distance in km between two planar points."""
    return math.hypot(a[0] - b[0], a[1] - b[1])


@dataclass
class Citizen:
    id: int
    family_id: int
    age: int
    gender: str
    qualification: int  # years of schooling, 0..21
    birth_month: int  # 0..11, anniversary month for aging
    employer: int | None = None
    wage: float = 0.0


@dataclass
class Family:
    id: int
    member_ids: set[int]
    residence: int
    owned_houses: set[int]
    monthly_cash: float = 0.0  # liquid, funds consumption
    savings: float = 0.0  # illiquid, real-estate only

    @property
    def is_active(self) -> bool:
        return bool(self.member_ids)


@dataclass
class House:
    id: int
    municipality_id: str
    location: Location
    size: float  # m2, fixed
    quality: int  # ordinal 1..4, fixed
    current_price: float
    owner: int  # family id
    occupied: bool

    def amenity_score(self, qli: float) -> float:
        return self.size * self.quality * qli


@dataclass
class Firm:
    id: int
    municipality_id: str
    location: Location
    stock: float = 0.0
    price: float = 1.0
    cash: float = 0.0
    wage_offer: float = 1.0
    employee_ids: set[int] = field(default_factory=set)
    last_profit: float = 0.0
    revenue_this_month: float = 0.0
    wages_paid_this_month: float = 0.0
    last_output: float = 0.0
    open_vacancies: int = 0


@dataclass
class Municipality:
    id: str
    acp_id: str
    treasury: float = 0.0
    qli: float = 1.0
    population: int = 0  # derived, refreshed by the scheduler
    fpm_coefficient: float = 1.0


@dataclass
class World:
    """Complete mutable state of one simulation run."""

    clock: int
    region: RegionData
    citizens: dict[int, Citizen]
    families: dict[int, Family]
    houses: dict[int, House]
    firms: dict[int, Firm]
    municipalities: dict[str, Municipality]
    rng: np.random.Generator
    ledger: TaxLedger = field(default_factory=TaxLedger)
    next_citizen_id: int = 0
    price_index_prev: float | None = None
    grave: list[dict] = field(default_factory=list)
    sales_log: list[dict] = field(default_factory=list)
    distribution_matrix: DistributionMatrix | None = None  # built on first fiscal step

    def municipality_ids(self) -> list[str]:
        return list(self.municipalities.keys())

    def active_families(self) -> list[Family]:
        return [family for family in self.families.values() if family.is_active]

    def residence_location(self, family: Family) -> Location:
        return self.houses[family.residence].location

    def residents_by_house(self) -> dict[int, Family]:
        return {family.residence: family for family in self.active_families()}

    def population_by_municipality(self) -> dict[str, int]:
        counts = {muni: 0 for muni in self.municipalities}
        for family in self.active_families():
            muni = self.houses[family.residence].municipality_id
            counts[muni] += len(family.member_ids)
        return counts

    def working_age_citizens(self, age_min: int, age_max: int) -> list[Citizen]:
        return [
            citizen
            for citizen in self.citizens.values()
            if age_min <= citizen.age <= age_max
        ]

    def unemployment_rate(self, age_min: int, age_max: int) -> float:
        pool = self.working_age_citizens(age_min, age_max)
        if not pool:
            return 0.0
        unemployed = sum(1 for citizen in pool if citizen.employer is None)
        return unemployed / len(pool)

    def total_money(self) -> float:
        """Family cash and savings, firm cash, treasuries, and the ledger."""
        total = 0.0
        for family in self.families.values():
            total += family.monthly_cash + family.savings
        for firm in self.firms.values():
            total += firm.cash
        for muni in self.municipalities.values():
            total += muni.treasury
        return total + self.ledger.total()

    def family_wealth(self, family: Family) -> float:
        housing = sum(self.houses[hid].current_price for hid in family.owned_houses)
        return family.monthly_cash + family.savings + housing

    def to_dict(self) -> dict:
        """Stable full-state snapshot used for determinism checks."""
        return {
            "clock": self.clock,
            "next_citizen_id": self.next_citizen_id,
            "citizens": [
                {
                    "id": c.id,
                    "family_id": c.family_id,
                    "age": c.age,
                    "gender": c.gender,
                    "qualification": c.qualification,
                    "birth_month": c.birth_month,
                    "employer": c.employer,
                    "wage": c.wage,
                }
                for c in sorted(self.citizens.values(), key=lambda c: c.id)
            ],
            "families": [
                {
                    "id": f.id,
                    "member_ids": sorted(f.member_ids),
                    "residence": f.residence,
                    "owned_houses": sorted(f.owned_houses),
                    "monthly_cash": f.monthly_cash,
                    "savings": f.savings,
                }
                for f in sorted(self.families.values(), key=lambda f: f.id)
            ],
            "houses": [
                {
                    "id": h.id,
                    "municipality_id": h.municipality_id,
                    "location": list(h.location),
                    "size": h.size,
                    "quality": h.quality,
                    "current_price": h.current_price,
                    "owner": h.owner,
                    "occupied": h.occupied,
                }
                for h in sorted(self.houses.values(), key=lambda h: h.id)
            ],
            "firms": [
                {
                    "id": fm.id,
                    "municipality_id": fm.municipality_id,
                    "location": list(fm.location),
                    "stock": fm.stock,
                    "price": fm.price,
                    "cash": fm.cash,
                    "wage_offer": fm.wage_offer,
                    "employee_ids": sorted(fm.employee_ids),
                    "last_profit": fm.last_profit,
                }
                for fm in sorted(self.firms.values(), key=lambda fm: fm.id)
            ],
            "municipalities": [
                {
                    "id": m.id,
                    "acp_id": m.acp_id,
                    "treasury": m.treasury,
                    "qli": m.qli,
                    "population": m.population,
                    "fpm_coefficient": m.fpm_coefficient,
                }
                for m in self.municipalities.values()
            ],
            "rng_state": _rng_state_as_jsonable(self.rng),
        }


def _rng_state_as_jsonable(rng: np.random.Generator) -> dict:
    state = rng.bit_generator.state
    return {
        "bit_generator": state["bit_generator"],
        "state": int(state["state"]["state"]),
        "inc": int(state["state"]["inc"]),
        "has_uint32": int(state["has_uint32"]),
        "uinteger": int(state["uinteger"]),
    }
