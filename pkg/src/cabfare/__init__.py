"""Taxi fare estimation, meter simulation and provider comparison."""

from .geo import GeoPoint, SpatialIndex, haversine
from .money import Money
from .routing import Route, RouteSegment, synthetic_route
from .tariffs import ExtraCharge, RateWindow, TariffScheme, resolve_rate
from .meter import apply_correction, estimate_metered, simulate_meter
from .flex import FlexPricingModel, SurgeState, estimate_flex, mean_of_range
from .history import HistoricTrip, TripStore, estimate_historical, ingest_trips
from .comparison import ComparisonResult, JourneyQuery, PriceEstimate, compare

__version__ = "0.1.0"

__all__ = [
    "GeoPoint",
    "SpatialIndex",
    "haversine",
    "Money",
    "Route",
    "RouteSegment",
    "synthetic_route",
    "ExtraCharge",
    "RateWindow",
    "TariffScheme",
    "resolve_rate",
    "apply_correction",
    "estimate_metered",
    "simulate_meter",
    "FlexPricingModel",
    "SurgeState",
    "estimate_flex",
    "mean_of_range",
    "HistoricTrip",
    "TripStore",
    "estimate_historical",
    "ingest_trips",
    "ComparisonResult",
    "JourneyQuery",
    "PriceEstimate",
    "compare",
    "__version__",
]
