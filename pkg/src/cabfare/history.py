"""Historic-trip fare estimation.

First-generation estimator: the fare for a query is the mean fare of
recorded trips whose pickup AND dropoff both lie within a fixed vicinity
radius (100 m by default) of the query's origin and destination.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import IO, Iterable

from .geo import GeoPoint, SpatialIndex
from .money import Money, mean_minor

REQUIRED_COLUMNS = (
    "pickup_datetime",
    "pickup_lat",
    "pickup_lng",
    "dropoff_lat",
    "dropoff_lng",
    "fare_amount",
    "total_amount",
)

DEFAULT_VICINITY_M = 100.0


class UnreadableSource(Exception):
    """Trip CSV cannot be opened or has no usable header."""


class EmptyDataset(Exception):
    """Ingest accepted zero rows."""


class NoDataInVicinity(Exception):
    """No historic trip matches both endpoints; caller should fall back."""


@dataclass(frozen=True)
class HistoricTrip:
    pickup: GeoPoint
    dropoff: GeoPoint
    fare: Money
    timestamp: datetime | None = None

    def __post_init__(self) -> None:
        if self.fare.amount_minor < 0:
            raise ValueError("fare must be >= 0")


@dataclass(frozen=True)
class RejectedRow:
    line: int
    reason: str


@dataclass(frozen=True)
class IngestReport:
    accepted: int
    rejected: tuple[RejectedRow, ...]


class TripStore:
    """Immutable store of historic trips with pickup/dropoff grid indexes."""

    def __init__(self, trips: Iterable[HistoricTrip], cell_size_m: float = DEFAULT_VICINITY_M):
        self.trips = tuple(trips)
        self.pickup_index = SpatialIndex(
            ((t.pickup, i) for i, t in enumerate(self.trips)), cell_size_m
        )
        self.dropoff_index = SpatialIndex(
            ((t.dropoff, i) for i, t in enumerate(self.trips)), cell_size_m
        )

    def __len__(self) -> int:
        return len(self.trips)


def _parse_row(row: dict, currency: str) -> HistoricTrip:
    try:
        pickup = GeoPoint(float(row["pickup_lat"]), float(row["pickup_lng"]))
    except ValueError as exc:
        raise ValueError(f"pickup {exc}") from None
    try:
        dropoff = GeoPoint(float(row["dropoff_lat"]), float(row["dropoff_lng"]))
    except ValueError as exc:
        raise ValueError(f"dropoff {exc}") from None
    # meter fare, not total_amount: tips/tolls would skew comparison with simulated meters
    fare = Money.from_major(row["fare_amount"], currency)
    if fare.amount_minor < 0:
        raise ValueError(f"fare out of range: {row['fare_amount']}")
    stamp_raw = (row.get("pickup_datetime") or "").strip()
    stamp = None
    if stamp_raw:
        try:
            stamp = datetime.fromisoformat(stamp_raw.replace("Z", "+00:00"))
        except ValueError:
            raise ValueError(f"bad pickup_datetime: {stamp_raw!r}") from None
    return HistoricTrip(pickup=pickup, dropoff=dropoff, fare=fare, timestamp=stamp)


def ingest_trips(
    source: str | Path | IO[str],
    currency: str,
    cell_size_m: float = DEFAULT_VICINITY_M,
) -> tuple[TripStore, IngestReport]:
    """Build a TripStore from a trip CSV; malformed rows are rejected, not fatal."""
    if isinstance(source, (str, Path)):
        try:
            handle = open(source, newline="")
        except OSError as exc:
            raise UnreadableSource(str(exc)) from exc
        close = True
    else:
        handle, close = source, False
    try:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise UnreadableSource("missing CSV header")
        missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise UnreadableSource(f"missing columns: {', '.join(missing)}")
        trips: list[HistoricTrip] = []
        rejected: list[RejectedRow] = []
        for line, row in enumerate(reader, start=2):
            try:
                trips.append(_parse_row(row, currency))
            except (ValueError, ArithmeticError, TypeError) as exc:
                rejected.append(RejectedRow(line=line, reason=str(exc)))
    finally:
        if close:
            handle.close()
    if not trips:
        raise EmptyDataset("no valid rows in trip source")
    return TripStore(trips, cell_size_m), IngestReport(accepted=len(trips), rejected=tuple(rejected))


def estimate_historical(
    store: TripStore,
    origin: GeoPoint,
    destination: GeoPoint,
    radius_m: float = DEFAULT_VICINITY_M,
) -> Money:
    """Mean fare of trips with both endpoints inside the vicinity radius.

    Rounded half-away-from-zero to minor units.  Raises NoDataInVicinity when
    nothing matches so the caller can fall back to meter simulation.
    """
    if not store.trips:
        raise NoDataInVicinity("trip store is empty")
    matches = store.pickup_index.radius_query(origin, radius_m) & store.dropoff_index.radius_query(
        destination, radius_m
    )
    if not matches:
        raise NoDataInVicinity(f"no trips within {radius_m:g} m of both endpoints")
    currency = store.trips[0].fare.currency
    return Money(mean_minor([store.trips[i].fare.amount_minor for i in matches]), currency)
