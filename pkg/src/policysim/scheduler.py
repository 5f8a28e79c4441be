"""Monthly schedule orchestration and full-run driver.

One month executes, in this exact order: production, demographics, goods
market, firm decisions, labor market with payroll and the firm tax,
real-estate market with the property tax, fiscal distribution with
quality-of-life investment, and finally indicator recording. Agents are
iterated in id order inside every substep; all randomness comes from the
world's single seeded stream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import demographics, firms, goods, labor, realestate
from .fiscal import (
    DistributionMatrix,
    DistributionRegime,
    collect_firm_tax,
    coefficient_for,
    distribute,
    invest_qli,
)
from .params import SimParams
from .stats import gini
from .world.generate import generate_world
from .world.regions import RegionData
from .world.types import World

MAX_MONTHS = 360


class RunError(ValueError):
    """Invalid run request, or a module error with month context."""


@dataclass
class MonthRecord:
    """Macro indicators recorded at the end of each simulated month."""

    month: int
    population: int
    unemployment: float
    price_index: float
    inflation: float  # percent change of the price index month over month
    house_price_index: float
    gini_wealth: float
    taxes: dict[str, float]
    qli: dict[str, float]

    @property
    def tax_total(self) -> float:
        return sum(self.taxes.values())


@dataclass
class RunResult:
    """Per-month time series plus the final world snapshot of one run."""

    records: list[MonthRecord]
    world: World
    seed: int
    sales: list[dict] = field(default_factory=list)
    grave: list[dict] = field(default_factory=list)

    def series(self, name: str) -> list[float]:
        return [getattr(record, name) for record in self.records]


def _decision_params(params: SimParams) -> firms.FirmDecisionParams:
    return firms.FirmDecisionParams(
        alpha=params.alpha,
        markup=params.markup,
        sticky_prices=params.sticky_prices,
        labor_market_frequency=params.labor_market_frequency,
        wage_ignore_unemployment=params.wage_ignore_unemployment,
    )


def step_production(world: World, params: SimParams) -> None:
    for firm in world.firms.values():
        firms.produce(world, firm, params.alpha)


def step_demographics(world: World, params: SimParams, rng: np.random.Generator) -> None:
    demographics.age_step(world)
    demographics.mortality_step(world, world.region, rng)
    demographics.fertility_step(world, world.region, rng)


def step_goods_market(world: World, params: SimParams, rng: np.random.Generator) -> None:
    goods.goods_market_step(
        world,
        beta=params.beta,
        size_market=params.size_market,
        consumption_tax_rate=params.taxes.consumption,
        rng=rng,
        price_criterion_probability=params.price_criterion_probability,
    )


def step_firm_decisions(world: World, params: SimParams, rng: np.random.Generator) -> None:
    decision_params = _decision_params(params)
    unemployment = world.unemployment_rate(
        params.working_age_min, params.working_age_max
    )
    for firm in world.firms.values():
        firms.update_price(
            firm, params.markup, params.sticky_prices, rng, params.price_floor
        )
        firms.update_wage(firm, unemployment, decision_params, params.price_floor)
        decision = firms.hire_fire_decision(
            firm, world.clock, params.labor_market_frequency
        )
        if decision == firms.OPEN_VACANCY:
            firm.open_vacancies = 1
        elif decision == firms.FIRE_ONE:
            firms.fire_employee(
                world, firm, firms.lowest_qualified_employee(world, firm)
            )


def step_labor_market(world: World, params: SimParams, rng: np.random.Generator) -> None:
    pool = labor.build_pool(world, params)
    labor.match(world, pool, params.pct_distance_hiring, params.size_market, rng)
    for firm in world.firms.values():
        firm.open_vacancies = 0
    labor.pay_wages(world, params.taxes.labor, world.ledger)
    # close the month's books: firm tax on the stored profit, then profit
    for firm in world.firms.values():
        tax = collect_firm_tax(firm, params.taxes.firms, world.ledger)
        firms.compute_profit(firm, tax)


def step_real_estate(world: World, params: SimParams, rng: np.random.Generator) -> None:
    realestate.reprice_houses(world, params.hedonic_base_coefficient)
    listings = realestate.build_listings(world)
    entrants = realestate.select_entrants(
        world.active_families(), params.percentage_check_new_location, rng
    )
    sales = realestate.match_market(
        world, entrants, listings, params.taxes.transaction, world.ledger
    )
    for sale in sales:
        world.sales_log.append(
            {
                "month": world.clock,
                "house_id": sale.house_id,
                "seller_id": sale.seller_id,
                "buyer_id": sale.buyer_id,
                "bid": sale.bid,
                "offer": sale.offer,
                "transaction_price": sale.transaction_price,
                "tax": sale.tax,
            }
        )
    realestate.collect_property_tax(world, params.taxes.property, world.ledger)


def step_fiscal(world: World, params: SimParams) -> dict[str, float]:
    """Distribute the ledger, invest everything, and zero the ledger.

    Returns the month's collection totals by kind (captured before reset).
    """
    totals = world.ledger.total_by_kind()
    populations = world.population_by_municipality()
    for muni_id, muni in world.municipalities.items():
        muni.population = populations[muni_id]
        muni.fpm_coefficient = coefficient_for(
            populations[muni_id], world.region.fpm_brackets
        )
    regime = DistributionRegime(params.alternative0, params.fpm_distribution)
    matrix = _matrix_for(world, params)
    receipts = distribute(
        world.ledger,
        regime,
        matrix,
        world.municipality_ids(),
        populations,
        world.region.fpm_brackets,
    )
    for muni_id, muni in world.municipalities.items():
        muni.treasury += receipts[muni_id]
        invest_qli(muni, muni.treasury, params.reference_cost_per_capita)
    world.ledger.reset()
    return totals


def _matrix_for(world: World, params: SimParams) -> DistributionMatrix:
    if world.distribution_matrix is None:
        world.distribution_matrix = DistributionMatrix(params.taxes_structure)
    return world.distribution_matrix


def record_month(world: World, params: SimParams, taxes: dict[str, float]) -> MonthRecord:
    firms_list = list(world.firms.values())
    houses_list = list(world.houses.values())
    price_index = (
        float(np.mean([firm.price for firm in firms_list])) if firms_list else 0.0
    )
    if world.price_index_prev and world.price_index_prev > 0.0 and price_index > 0.0:
        inflation = (price_index - world.price_index_prev) / world.price_index_prev * 100.0
    else:
        inflation = 0.0
    world.price_index_prev = price_index
    house_price_index = (
        float(np.mean([house.current_price for house in houses_list]))
        if houses_list
        else 0.0
    )
    active = world.active_families()
    wealth = [world.family_wealth(family) for family in active]
    return MonthRecord(
        month=world.clock,
        population=len(world.citizens),
        unemployment=world.unemployment_rate(
            params.working_age_min, params.working_age_max
        ),
        price_index=price_index,
        inflation=inflation,
        house_price_index=house_price_index,
        gini_wealth=gini(wealth) if wealth else 0.0,
        taxes=dict(taxes),
        qli={muni_id: muni.qli for muni_id, muni in world.municipalities.items()},
    )


def step(world: World, params: SimParams, rng: np.random.Generator | None = None) -> MonthRecord:
    """Run one full month and advance the clock."""
    rng = world.rng if rng is None else rng
    try:
        step_production(world, params)
        step_demographics(world, params, rng)
        step_goods_market(world, params, rng)
        step_firm_decisions(world, params, rng)
        step_labor_market(world, params, rng)
        step_real_estate(world, params, rng)
        taxes = step_fiscal(world, params)
        record = record_month(world, params, taxes)
    except Exception as exc:
        raise RunError(f"month {world.clock}: {exc}") from exc
    world.clock += 1
    return record


def run(region: RegionData, params: SimParams, seed: int) -> RunResult:
    """Generate, calibrate, and simulate params.months months."""
    if params.months > MAX_MONTHS:
        raise RunError(
            f"months={params.months} exceeds the {MAX_MONTHS}-month ceiling "
            "set by available data projections"
        )
    world = generate_world(region, params, seed)
    labor.calibrate_initial_unemployment(
        world, params.initial_unemployment, params, world.rng
    )
    records = [step(world, params) for _ in range(params.months)]
    return RunResult(
        records=records,
        world=world,
        seed=seed,
        sales=list(world.sales_log),
        grave=list(world.grave),
    )
