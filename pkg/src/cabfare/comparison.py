"""Per-journey provider comparison.

Resolves a journey query into one price estimate per configured provider
(metered via meter simulation or the historical estimator, flex via the
base/minute/mile model), picks the cheapest, computes the savings against
the most expensive, and persists the completed comparison to the query log.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime
from typing import TYPE_CHECKING

from .flex import SurgeState, estimate_flex
from .geo import GeoPoint
from .history import NoDataInVicinity, estimate_historical
from .meter import estimate_metered
from .money import Money
from .storage import QueryLog

if TYPE_CHECKING:  # pragma: no cover
    from .config import CityRuntime

METHOD_METER = "meter"
METHOD_HISTORICAL = "historical"
METHOD_FLEX = "flex"

# namespace for deterministic query ids: identical inputs must produce
# identical response bodies across the CLI and the HTTP service
_QUERY_NS = uuid.UUID("f2b6c9de-55a1-4aa0-9bca-05b9c3f1d8e4")


class EstimationFailed(Exception):
    """No provider produced an estimate for the query."""


@dataclass(frozen=True)
class JourneyQuery:
    id: str
    user_id: str
    city: str
    origin: GeoPoint
    destination: GeoPoint
    submitted_at: datetime
    gps_sample: GeoPoint | None = None

    @classmethod
    def create(
        cls,
        user_id: str,
        city: str,
        origin: GeoPoint,
        destination: GeoPoint,
        submitted_at: datetime,
        surge_multiplier: float = 1.0,
        gps_sample: GeoPoint | None = None,
    ) -> "JourneyQuery":
        seed = "|".join(
            [
                user_id,
                city,
                repr(origin.lat),
                repr(origin.lng),
                repr(destination.lat),
                repr(destination.lng),
                submitted_at.isoformat(),
                repr(surge_multiplier),
            ]
        )
        return cls(
            id=str(uuid.uuid5(_QUERY_NS, seed)),
            user_id=user_id,
            city=city,
            origin=origin,
            destination=destination,
            submitted_at=submitted_at,
            gps_sample=gps_sample,
        )


@dataclass(frozen=True)
class PriceEstimate:
    provider: str
    amount: Money
    method: str
    corrected: bool = False
    surge_multiplier: float = 1.0

    def __post_init__(self) -> None:
        if self.amount.amount_minor < 0:
            raise ValueError("estimate amount must be >= 0")
        if self.surge_multiplier < 1.0:
            raise ValueError("surge multiplier must be >= 1.0")


@dataclass(frozen=True)
class ComparisonResult:
    query_id: str
    estimates: tuple[PriceEstimate, ...]
    winner: str | None
    savings: Money | None
    partial: bool = False
    failures: tuple[tuple[str, str], ...] = field(default=())


def pick_winner(estimates: tuple[PriceEstimate, ...]) -> tuple[str, Money]:
    """Cheapest provider wins; ties break by lexicographic provider id."""
    if not estimates:
        raise ValueError("no estimates to compare")
    cheapest = min(estimates, key=lambda e: (e.amount.amount_minor, e.provider))
    dearest = max(estimates, key=lambda e: e.amount.amount_minor)
    return cheapest.provider, dearest.amount - cheapest.amount


def _metered_estimate(query: JourneyQuery, city: "CityRuntime", route) -> PriceEstimate:
    scheme = city.scheme
    corrected = scheme.correction_coefficient != 1.0
    if city.estimator == "historical-first" and city.trip_store is not None:
        try:
            amount = estimate_historical(
                city.trip_store, query.origin, query.destination, city.vicinity_radius_m
            )
            return PriceEstimate(
                provider=city.metered.provider_id, amount=amount, method=METHOD_HISTORICAL
            )
        except NoDataInVicinity:
            pass
    amount = estimate_metered(
        route,
        scheme,
        query.submitted_at,
        origin=query.origin,
        destination=query.destination,
        corrected=True,
    )
    return PriceEstimate(
        provider=city.metered.provider_id,
        amount=amount,
        method=METHOD_METER,
        corrected=corrected,
    )


def compare(
    query: JourneyQuery,
    city: "CityRuntime",
    surge_multiplier: float | None = None,
    log: QueryLog | None = None,
) -> ComparisonResult:
    """Estimate all providers for the query, pick the winner, persist.

    Routing errors propagate; a single provider failing yields a partial
    result that is flagged and never persisted as a comparison.
    """
    surge = surge_multiplier if surge_multiplier is not None else city.default_surge
    route = city.routing.route(query.origin, query.destination)

    estimates: list[PriceEstimate] = []
    failures: list[tuple[str, str]] = []
    try:
        estimates.append(_metered_estimate(query, city, route))
    except Exception as exc:
        failures.append((city.metered.provider_id, str(exc)))
    try:
        amount = estimate_flex(route, city.flex_model, SurgeState(surge))
        estimates.append(
            PriceEstimate(
                provider=city.flex.provider_id,
                amount=amount,
                method=METHOD_FLEX,
                surge_multiplier=surge,
            )
        )
    except Exception as exc:
        failures.append((city.flex.provider_id, str(exc)))

    if not estimates:
        raise EstimationFailed("; ".join(f"{p}: {m}" for p, m in failures))
    if failures:
        return ComparisonResult(
            query_id=query.id,
            estimates=tuple(estimates),
            winner=None,
            savings=None,
            partial=True,
            failures=tuple(failures),
        )

    winner, savings = pick_winner(tuple(estimates))
    result = ComparisonResult(
        query_id=query.id, estimates=tuple(estimates), winner=winner, savings=savings
    )
    if log is not None:
        log.append(log_record(query, result, city.currency))
    return result


def log_record(query: JourneyQuery, result: ComparisonResult, currency: str) -> dict:
    return {
        "id": query.id,
        "user_id": query.user_id,
        "city": query.city,
        "origin": {"lat": query.origin.lat, "lng": query.origin.lng},
        "destination": {"lat": query.destination.lat, "lng": query.destination.lng},
        "submitted_at": query.submitted_at.isoformat(),
        "estimates": [_estimate_dict(e) for e in result.estimates],
        "winner": result.winner,
        "savings_minor": result.savings.amount_minor if result.savings else 0,
        "currency": currency,
    }


def _estimate_dict(estimate: PriceEstimate) -> dict:
    return {
        "provider": estimate.provider,
        "method": estimate.method,
        "amount": estimate.amount.major_str,
        "amount_minor": estimate.amount.amount_minor,
        "currency": estimate.amount.currency,
        "corrected": estimate.corrected,
        "surge_multiplier": estimate.surge_multiplier,
    }


def result_payload(query: JourneyQuery, result: ComparisonResult, currency: str) -> dict:
    """Response body shared verbatim by the HTTP service and the CLI."""
    payload = {
        "query_id": query.id,
        "city": query.city,
        "currency": currency,
        "submitted_at": query.submitted_at.isoformat(),
        "origin": {"lat": query.origin.lat, "lng": query.origin.lng},
        "destination": {"lat": query.destination.lat, "lng": query.destination.lng},
        "estimates": [_estimate_dict(e) for e in result.estimates],
        "winner": result.winner,
        "savings": result.savings.major_str if result.savings else None,
        "savings_minor": result.savings.amount_minor if result.savings else None,
    }
    if result.partial:
        payload["partial"] = True
        payload["failures"] = [{"provider": p, "error": m} for p, m in result.failures]
    return payload


def payload_json(payload: dict) -> str:
    """Canonical JSON serialization; key order is the payload build order."""
    return json.dumps(payload, separators=(",", ":"))
