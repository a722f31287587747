"""Flex (ride-hailing style) fare estimation: base + per-minute + per-mile.

The surge multiplier scales the whole metered total; the minimum fare is
applied after surging (see the tariff docs for the open question on surged
minimums).  A separate helper collapses a provider's min/max price range to
the single mean value shown to users.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .money import MINOR_PER_MAJOR, Money, round_half_away
from .routing import Route

METERS_PER_MILE = 1609.34
SECONDS_PER_MINUTE = 60.0


class RangeInverted(ValueError):
    """min price is greater than max price."""


@dataclass(frozen=True)
class FlexPricingModel:
    name: str
    currency: str
    base_fare: Money
    per_minute: Money
    per_mile: Money
    minimum_fare: Money

    def __post_init__(self) -> None:
        for component in (self.base_fare, self.per_minute, self.per_mile, self.minimum_fare):
            if component.amount_minor < 0:
                raise ValueError("flex pricing components must be >= 0")
            if component.currency != self.currency:
                raise ValueError("flex pricing components must share the model currency")


@dataclass(frozen=True)
class SurgeState:
    multiplier: float = 1.0

    def __post_init__(self) -> None:
        if self.multiplier < 1.0:
            raise ValueError("surge multiplier must be >= 1.0")


def estimate_flex(route: Route, model: FlexPricingModel, surge: SurgeState | None = None) -> Money:
    """max(surge * (base + per_minute * minutes + per_mile * miles), minimum).

    Rounded half-away-from-zero to minor units before the minimum clamp.
    """
    multiplier = Fraction(str(surge.multiplier if surge else 1.0))
    minutes = Fraction(str(route.total_duration_s)) / Fraction(str(SECONDS_PER_MINUTE))
    miles = Fraction(str(route.total_length_m)) / Fraction(str(METERS_PER_MILE))
    raw = (
        model.base_fare.amount_minor
        + model.per_minute.amount_minor * minutes
        + model.per_mile.amount_minor * miles
    )
    surged = Money(round_half_away(multiplier * raw), model.currency)
    return surged.max(model.minimum_fare)


def mean_of_range(min_price: Money, max_price: Money) -> Money:
    """Mean of a price range, rounded to whole currency units (ties half-up)."""
    if min_price.currency != max_price.currency:
        raise ValueError("range endpoints must share a currency")
    if min_price.amount_minor > max_price.amount_minor:
        raise RangeInverted(f"{min_price} > {max_price}")
    total = min_price.amount_minor + max_price.amount_minor
    # mean in minor units is total/2; half-up rounding to whole units
    units = (total + MINOR_PER_MAJOR) // (2 * MINOR_PER_MAJOR)
    return Money(units * MINOR_PER_MAJOR, min_price.currency)
