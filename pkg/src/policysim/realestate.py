"""Real-estate market: hedonic offers, savings-ordered bidding, relocation.

Vacant houses are always for sale. Entering families bid their full
savings, richest first; each takes the best-priced listing it can afford at
a transaction price halfway between bid and offer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fiscal import TaxLedger
from .world.types import Family, House, World


@dataclass(frozen=True)
class Listing:
    house_id: int
    offer_price: float


@dataclass(frozen=True)
class SaleRecord:
    house_id: int
    seller_id: int
    buyer_id: int
    bid: float
    offer: float
    transaction_price: float
    tax: float


def hedonic_offer_price(
    house: House, municipality_qli: float, base_coefficient: float
) -> float:
    """Offer price from size, quality, and the town's quality of life.

    Multiplicative, so it is strictly increasing in every factor. Updates
    the house's current price.
    """
    offer = base_coefficient * house.size * house.quality * municipality_qli
    house.current_price = offer
    return offer


def reprice_houses(world: World, base_coefficient: float) -> None:
    for house in world.houses.values():
        qli = world.municipalities[house.municipality_id].qli
        hedonic_offer_price(house, qli, base_coefficient)


def build_listings(world: World) -> list[Listing]:
    """Every vacant house is on the market at its current hedonic price."""
    return [
        Listing(house.id, house.current_price)
        for house in world.houses.values()
        if not house.occupied
    ]


def select_entrants(
    families: list[Family], pct_check_new_location: float, rng: np.random.Generator
) -> list[int]:
    """Each family independently enters the market with a fixed chance."""
    if not families:
        return []
    draws = rng.random(len(families))
    return [
        family.id
        for family, draw in zip(families, draws)
        if draw < pct_check_new_location
    ]


def match_market(
    world: World,
    entrant_ids: list[int],
    listings: list[Listing],
    transaction_tax_rate: float,
    ledger: TaxLedger,
) -> list[SaleRecord]:
    """Sequential matching, deepest savings first.

    A buyer bids its full savings on the highest-offer affordable listing
    (never its own). The price averages bid and offer; tax comes out of the
    seller's proceeds and books to the house's municipality. A buyer moves
    in when the bought house beats its residence on size x quality x qli,
    which puts the vacated home straight on the market.
    """
    open_listings: dict[int, float] = {
        listing.house_id: listing.offer_price for listing in listings
    }
    order = sorted(
        (world.families[fid] for fid in entrant_ids),
        key=lambda family: (-family.savings, family.id),
    )
    sales: list[SaleRecord] = []
    for buyer in order:
        bid = buyer.savings
        best_house: House | None = None
        for house_id, offer in open_listings.items():
            if offer > bid:
                continue
            house = world.houses[house_id]
            if house.owner == buyer.id:
                continue
            if best_house is None or (offer, -house_id) > (
                open_listings[best_house.id],
                -best_house.id,
            ):
                best_house = house
        if best_house is None:
            continue
        offer = open_listings.pop(best_house.id)
        seller = world.families[best_house.owner]
        price = (bid + offer) / 2.0
        tax = price * transaction_tax_rate
        buyer.savings -= price
        seller.savings += price - tax
        ledger.add(best_house.municipality_id, "transaction", tax)
        seller.owned_houses.discard(best_house.id)
        buyer.owned_houses.add(best_house.id)
        best_house.owner = buyer.id
        sales.append(
            SaleRecord(
                house_id=best_house.id,
                seller_id=seller.id,
                buyer_id=buyer.id,
                bid=bid,
                offer=offer,
                transaction_price=price,
                tax=tax,
            )
        )
        residence = world.houses[buyer.residence]
        new_score = best_house.amenity_score(
            world.municipalities[best_house.municipality_id].qli
        )
        old_score = residence.amenity_score(
            world.municipalities[residence.municipality_id].qli
        )
        if new_score > old_score:
            residence.occupied = False
            open_listings[residence.id] = residence.current_price
            best_house.occupied = True
            buyer.residence = best_house.id
    return sales


def collect_property_tax(
    world: World, property_tax_rate: float, ledger: TaxLedger
) -> float:
    """Monthly levy on each occupied house, clamped at the resident's cash."""
    residents = world.residents_by_house()
    total = 0.0
    for house in world.houses.values():
        if not house.occupied:
            continue
        family = residents.get(house.id)
        if family is None:
            continue
        owed = property_tax_rate * house.current_price
        paid = min(owed, family.monthly_cash)
        family.monthly_cash -= paid
        ledger.add(house.municipality_id, "property", paid)
        total += paid
    return total
