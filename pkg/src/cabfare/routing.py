"""Routes and routing providers.

A route is an ordered list of segments, each with a length and a typical
(traffic-free) driving duration.  Providers are pluggable: a deterministic
fixture router for tests and offline use, a synthetic straight-line router,
and a thin HTTP client speaking a minimal JSON contract
(``GET /route?olat&olng&dlat&dlng`` -> ``[{"length_m":..,"duration_s":..}]``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx

from .geo import GeoPoint, haversine

#: fixture keys round coordinates to 5 decimals (~1 m) to avoid float misses
KEY_DECIMALS = 5


class RouteNotFound(Exception):
    """The provider has no path for this origin/destination pair."""


class ProviderUnavailable(Exception):
    """A remote routing backend failed or timed out."""


@dataclass(frozen=True)
class RouteSegment:
    length_m: float
    duration_s: float

    def __post_init__(self) -> None:
        if self.length_m < 0 or self.duration_s < 0:
            raise ValueError("segment length and duration must be non-negative")
        if self.length_m == 0 and self.duration_s == 0:
            raise ValueError("segment with zero length and zero duration is forbidden")


@dataclass(frozen=True)
class Route:
    origin: GeoPoint
    destination: GeoPoint
    segments: tuple[RouteSegment, ...]

    def __post_init__(self) -> None:
        if not self.segments and self.origin != self.destination:
            raise ValueError("empty segment list is only valid when origin == destination")

    @property
    def total_length_m(self) -> float:
        return sum(s.length_m for s in self.segments)

    @property
    def total_duration_s(self) -> float:
        return sum(s.duration_s for s in self.segments)


class RoutingProvider(Protocol):
    def route(self, origin: GeoPoint, destination: GeoPoint) -> Route: ...


def synthetic_route(origin: GeoPoint, destination: GeoPoint, speed_mps: float) -> Route:
    """Single straight-line segment at a constant speed; a desk-scale fallback."""
    if speed_mps <= 0:
        raise ValueError("speed_mps must be positive")
    if origin == destination:
        return Route(origin, destination, ())
    length = haversine(origin, destination)
    return Route(origin, destination, (RouteSegment(length, length / speed_mps),))


class SyntheticRoutingProvider:
    def __init__(self, speed_mps: float = 7.0):
        if speed_mps <= 0:
            raise ValueError("speed_mps must be positive")
        self.speed_mps = speed_mps

    def route(self, origin: GeoPoint, destination: GeoPoint) -> Route:
        return synthetic_route(origin, destination, self.speed_mps)


def _key(origin: GeoPoint, destination: GeoPoint) -> tuple:
    return (
        round(origin.lat, KEY_DECIMALS),
        round(origin.lng, KEY_DECIMALS),
        round(destination.lat, KEY_DECIMALS),
        round(destination.lng, KEY_DECIMALS),
    )


class FixtureRoutingProvider:
    """Deterministic routes from a JSON fixture file.

    File format: a JSON array of
    ``{"origin": {"lat", "lng"}, "destination": {"lat", "lng"},
       "segments": [{"length_m", "duration_s"}, ...]}``.
    Unknown pairs raise RouteNotFound unless a fallback speed is configured,
    in which case a synthetic straight-line route is substituted.
    """

    def __init__(self, fixture_path: str | Path, fallback_speed_mps: float | None = None):
        raw = json.loads(Path(fixture_path).read_text())
        self._routes: dict[tuple, tuple[RouteSegment, ...]] = {}
        for entry in raw:
            o = GeoPoint(entry["origin"]["lat"], entry["origin"]["lng"])
            d = GeoPoint(entry["destination"]["lat"], entry["destination"]["lng"])
            segs = tuple(RouteSegment(s["length_m"], s["duration_s"]) for s in entry["segments"])
            self._routes[_key(o, d)] = segs
        self.fallback_speed_mps = fallback_speed_mps

    def pairs(self) -> list[tuple]:
        """All (olat, olng, dlat, dlng) keys in the fixture, for test sampling."""
        return sorted(self._routes)

    def route(self, origin: GeoPoint, destination: GeoPoint) -> Route:
        if origin == destination:
            return Route(origin, destination, ())
        segs = self._routes.get(_key(origin, destination))
        if segs is None:
            if self.fallback_speed_mps is not None:
                return synthetic_route(origin, destination, self.fallback_speed_mps)
            raise RouteNotFound(f"no fixture route for {origin} -> {destination}")
        return Route(origin, destination, segs)


class HttpRoutingProvider:
    """Client for any routing backend exposing the minimal JSON contract.

    The response body is the same segments JSON the fixture file uses:
    a JSON array of ``{"length_m":.., "duration_s":..}``.  A 404 maps to
    RouteNotFound; any other non-200 response or transport failure maps to
    ProviderUnavailable.
    """

    def __init__(self, base_url: str, timeout_s: float = 5.0):
        self.base_url = base_url.rstrip("/")
        self.timeout_s = timeout_s

    def route(self, origin: GeoPoint, destination: GeoPoint) -> Route:
        if origin == destination:
            return Route(origin, destination, ())
        params = {
            "olat": origin.lat,
            "olng": origin.lng,
            "dlat": destination.lat,
            "dlng": destination.lng,
        }
        try:
            resp = httpx.get(f"{self.base_url}/route", params=params, timeout=self.timeout_s)
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(f"routing request failed: {exc}") from exc
        if resp.status_code == 404:
            raise RouteNotFound(f"backend has no route for {origin} -> {destination}")
        if resp.status_code != 200:
            raise ProviderUnavailable(f"routing backend returned {resp.status_code}")
        try:
            segs = tuple(RouteSegment(s["length_m"], s["duration_s"]) for s in resp.json())
        except (ValueError, KeyError, TypeError) as exc:
            raise ProviderUnavailable(f"malformed routing response: {exc}") from exc
        return Route(origin, destination, segs)
