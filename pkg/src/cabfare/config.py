"""Configuration directory loading and validation.

One directory holds everything a deployment needs: ``cities.json`` plus the
tariff, flex-model, routing-fixture, gazetteer and trip files it references
(paths are relative to the directory).  Loading is fail-fast: every
reference must resolve and validate at startup, with diagnostics naming the
offending file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .flex import FlexPricingModel
from .geocode import Gazetteer
from .history import DEFAULT_VICINITY_M, TripStore, ingest_trips
from .money import Money
from .routing import (
    FixtureRoutingProvider,
    HttpRoutingProvider,
    RoutingProvider,
    SyntheticRoutingProvider,
)
from .tariffs import InvalidScheme, TariffScheme, load_tariff

ESTIMATOR_METER = "meter"
ESTIMATOR_HISTORICAL_FIRST = "historical-first"


class ConfigError(Exception):
    """Configuration is missing, unreadable or inconsistent."""


@dataclass(frozen=True)
class ProviderInfo:
    provider_id: str
    short_name: str
    color: str


@dataclass(frozen=True)
class CityRuntime:
    code: str
    display_name: str
    currency: str
    metered: ProviderInfo
    flex: ProviderInfo
    scheme: TariffScheme
    flex_model: FlexPricingModel
    routing: RoutingProvider
    gazetteer: Gazetteer
    estimator: str = ESTIMATOR_METER
    trip_store: TripStore | None = None
    vicinity_radius_m: float = DEFAULT_VICINITY_M
    default_surge: float = 1.0


@dataclass(frozen=True)
class AppConfig:
    config_dir: Path
    cities: dict[str, CityRuntime]

    def city(self, code: str) -> CityRuntime | None:
        return self.cities.get(code)


def _resolve(config_dir: Path, ref: str, kind: str) -> Path:
    path = config_dir / ref
    if not path.is_file():
        raise ConfigError(f"{kind} file not found: {path}")
    return path


def _load_flex_model(path: Path) -> FlexPricingModel:
    doc = json.loads(path.read_text())
    try:
        currency = doc["currency"]
        return FlexPricingModel(
            name=doc["name"],
            currency=currency,
            base_fare=Money(int(doc["base_fare_minor"]), currency),
            per_minute=Money(int(doc["per_minute_minor"]), currency),
            per_mile=Money(int(doc["per_mile_minor"]), currency),
            minimum_fare=Money(int(doc["minimum_fare_minor"]), currency),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"{path}: bad flex model: {exc}") from exc


def _build_routing(config_dir: Path, doc: dict, city: str) -> RoutingProvider:
    kind = doc.get("type")
    if kind == "fixture":
        path = _resolve(config_dir, doc["file"], f"routing fixture for {city}")
        return FixtureRoutingProvider(path, fallback_speed_mps=doc.get("fallback_speed_mps"))
    if kind == "synthetic":
        return SyntheticRoutingProvider(speed_mps=float(doc.get("speed_mps", 7.0)))
    if kind == "http":
        return HttpRoutingProvider(doc["base_url"], timeout_s=float(doc.get("timeout_s", 5.0)))
    raise ConfigError(f"city {city}: unknown routing type {kind!r}")


def _build_city(config_dir: Path, doc: dict) -> CityRuntime:
    code = doc["code"]
    currency = doc["currency"]
    metered_doc = doc["metered"]
    flex_doc = doc["flex"]

    tariff_path = _resolve(config_dir, metered_doc["tariff"], f"tariff for {code}")
    try:
        scheme = load_tariff(tariff_path)
    except InvalidScheme as exc:
        raise ConfigError(f"{tariff_path}: {exc}") from exc
    if scheme.currency != currency:
        raise ConfigError(f"{tariff_path}: currency {scheme.currency} != city currency {currency}")

    flex_path = _resolve(config_dir, flex_doc["model"], f"flex model for {code}")
    flex_model = _load_flex_model(flex_path)
    if flex_model.currency != currency:
        raise ConfigError(f"{flex_path}: currency {flex_model.currency} != city currency {currency}")

    estimator = metered_doc.get("estimator", ESTIMATOR_METER)
    if estimator not in (ESTIMATOR_METER, ESTIMATOR_HISTORICAL_FIRST):
        raise ConfigError(f"city {code}: unknown estimator {estimator!r}")
    trip_store = None
    if estimator == ESTIMATOR_HISTORICAL_FIRST:
        trips_path = _resolve(config_dir, metered_doc["trips"], f"trip data for {code}")
        trip_store, _report = ingest_trips(trips_path, currency)

    gazetteer_path = _resolve(config_dir, doc["gazetteer"], f"gazetteer for {code}")

    return CityRuntime(
        code=code,
        display_name=doc["display_name"],
        currency=currency,
        metered=ProviderInfo(
            provider_id=metered_doc["provider_id"],
            short_name=metered_doc["short_name"],
            color=metered_doc["color"],
        ),
        flex=ProviderInfo(
            provider_id=flex_doc["provider_id"],
            short_name=flex_doc["short_name"],
            color=flex_doc["color"],
        ),
        scheme=scheme,
        flex_model=flex_model,
        routing=_build_routing(config_dir, doc["routing"], code),
        gazetteer=Gazetteer.from_csv(gazetteer_path),
        estimator=estimator,
        trip_store=trip_store,
        vicinity_radius_m=float(metered_doc.get("vicinity_radius_m", DEFAULT_VICINITY_M)),
        default_surge=float(flex_doc.get("default_surge", 1.0)),
    )


def load_config(config_dir: str | Path) -> AppConfig:
    config_dir = Path(config_dir)
    cities_file = config_dir / "cities.json"
    if not cities_file.is_file():
        raise ConfigError(f"cities.json not found in {config_dir}")
    try:
        docs = json.loads(cities_file.read_text())
    except ValueError as exc:
        raise ConfigError(f"{cities_file}: invalid JSON: {exc}") from exc
    cities = {}
    for doc in docs:
        try:
            city = _build_city(config_dir, doc)
        except KeyError as exc:
            raise ConfigError(f"{cities_file}: city entry missing field {exc}") from None
        if city.code in cities:
            raise ConfigError(f"duplicate city code {city.code!r}")
        cities[city.code] = city
    if not cities:
        raise ConfigError(f"{cities_file}: no cities configured")
    return AppConfig(config_dir=config_dir, cities=cities)
