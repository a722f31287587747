"""Side-by-side ride experiment analysis.

Given paired rides (one per provider per journey) with receipts, recorded
GPS trajectories and a place gazetteer, this module computes estimate
accuracy statistics, relative price/time gains, win/tie/loss counts under a
tie tolerance, place density along trips, and the fraction of reference-
provider wins among journeys up to each density value.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, Sequence

from .geo import GeoPoint, SpatialIndex
from .money import Money

DEFAULT_TIE_TOLERANCE_S = 60.0
DEFAULT_DENSITY_RADIUS_M = 200.0


class ZeroDenominator(ValueError):
    """Gain undefined: the reference value is zero."""


class DegenerateSeries(ValueError):
    """Pearson correlation undefined for a constant series."""


class ZeroActual(ValueError):
    """Percentage deviation undefined when an actual price is zero."""


class MismatchedJourney(ValueError):
    """Outcome classification needs two rides of the same journey."""


class EmptyTrajectory(ValueError):
    """Density undefined over an empty point set."""


class Outcome(enum.Enum):
    WIN_A = "win_a"
    WIN_B = "win_b"
    TIE = "tie"


@dataclass(frozen=True)
class Trajectory:
    journey_id: str
    provider: str
    points: tuple[tuple[GeoPoint, datetime], ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise EmptyTrajectory(f"trajectory {self.journey_id}/{self.provider} has no points")
        stamps = [stamp for _, stamp in self.points]
        if any(b <= a for a, b in zip(stamps, stamps[1:])):
            raise ValueError(
                f"trajectory {self.journey_id}/{self.provider}: timestamps must strictly increase"
            )


@dataclass(frozen=True)
class ExperimentRide:
    journey_id: str
    provider: str
    start: datetime
    end: datetime
    actual_price: Money
    estimated_price: Money
    trajectory: Trajectory | None = None

    def __post_init__(self) -> None:
        if self.end <= self.start:
            raise ValueError(f"ride {self.journey_id}/{self.provider}: end must be after start")
        if self.actual_price.amount_minor < 0 or self.estimated_price.amount_minor < 0:
            raise ValueError("prices must be >= 0")

    @property
    def duration_s(self) -> float:
        return (self.end - self.start).total_seconds()


class PlaceIndex:
    """Spatial index over a place gazetteer; counts venues near a point."""

    def __init__(self, places: Sequence[GeoPoint], cell_size_m: float = DEFAULT_DENSITY_RADIUS_M):
        self._index = SpatialIndex(((p, i) for i, p in enumerate(places)), cell_size_m)

    def __len__(self) -> int:
        return len(self._index)

    def count_within(self, center: GeoPoint, radius_m: float) -> int:
        return len(self._index.radius_query(center, radius_m))


@dataclass(frozen=True)
class AccuracyStats:
    max_abs_diff: float
    mean_diff: float
    std_diff: float
    max_pct_dev: float
    mean_pct_dev: float
    std_pct_dev: float
    pearson_rho: float

    def as_dict(self) -> dict:
        return {
            "max_abs_diff": self.max_abs_diff,
            "mean_diff": self.mean_diff,
            "std_diff": self.std_diff,
            "max_pct_dev": self.max_pct_dev,
            "mean_pct_dev": self.mean_pct_dev,
            "std_pct_dev": self.std_pct_dev,
            "pearson_rho": self.pearson_rho,
        }


def _mean(xs: Sequence[float]) -> float:
    return sum(xs) / len(xs)


def _pop_std(xs: Sequence[float]) -> float:
    m = _mean(xs)
    return math.sqrt(sum((x - m) ** 2 for x in xs) / len(xs))


def accuracy_stats(pairs: Sequence[tuple[Money, Money]]) -> AccuracyStats:
    """Estimate-accuracy statistics over (estimated, actual) price pairs.

    Differences are actual - estimated in major units; percentage deviations
    are |diff| / actual.  Standard deviations are population (the experiment
    is the whole population, not a sample).
    """
    if len(pairs) < 2:
        raise ValueError("need at least two pairs")
    estimated = [e.amount_minor / 100.0 for e, _ in pairs]
    actual = [a.amount_minor / 100.0 for _, a in pairs]
    if any(a == 0 for a in actual):
        raise ZeroActual("actual price of zero in pair series")
    diffs = [a - e for e, a in zip(estimated, actual)]
    pct = [abs(d) / a for d, a in zip(diffs, actual)]
    sx, sy = _pop_std(estimated), _pop_std(actual)
    if sx == 0 or sy == 0:
        raise DegenerateSeries("constant series: Pearson correlation undefined")
    mx, my = _mean(estimated), _mean(actual)
    cov = sum((x - mx) * (y - my) for x, y in zip(estimated, actual)) / len(pairs)
    return AccuracyStats(
        max_abs_diff=max(abs(d) for d in diffs),
        mean_diff=_mean(diffs),
        std_diff=_pop_std(diffs),
        max_pct_dev=max(pct),
        mean_pct_dev=_mean(pct),
        std_pct_dev=_pop_std(pct),
        pearson_rho=cov / (sx * sy),
    )


def price_gain(price_flex: Money, price_metered: Money) -> float:
    """(flex - metered) / metered, both prices in the same currency."""
    if price_flex.currency != price_metered.currency:
        raise ValueError("prices must share a currency")
    if price_metered.amount_minor == 0:
        raise ZeroDenominator("metered price is zero")
    return (price_flex.amount_minor - price_metered.amount_minor) / price_metered.amount_minor


def time_gain(time_flex_s: float, time_metered_s: float) -> float:
    """(flex - metered) / metered journey durations."""
    if time_metered_s == 0:
        raise ZeroDenominator("metered time is zero")
    return (time_flex_s - time_metered_s) / time_metered_s


def classify_outcome(
    ride_a: ExperimentRide,
    ride_b: ExperimentRide,
    tie_tolerance_s: float = DEFAULT_TIE_TOLERANCE_S,
) -> Outcome:
    """Faster ride wins; durations within the tolerance are a tie.

    Durations exclude waiting time by construction (end - start of the ride).
    """
    if ride_a.journey_id != ride_b.journey_id:
        raise MismatchedJourney(f"{ride_a.journey_id} vs {ride_b.journey_id}")
    if ride_a.provider == ride_b.provider:
        raise MismatchedJourney(f"both rides by {ride_a.provider}")
    delta = ride_a.duration_s - ride_b.duration_s
    if abs(delta) <= tie_tolerance_s:
        return Outcome.TIE
    return Outcome.WIN_A if delta < 0 else Outcome.WIN_B


def trip_density(
    trajectories: Iterable[Trajectory],
    places: PlaceIndex,
    radius_m: float = DEFAULT_DENSITY_RADIUS_M,
) -> float:
    """Mean place count within the radius over the union of trajectory points,
    normalized by the disc area; unit is places per square kilometre."""
    points = [p for traj in trajectories for p, _ in traj.points]
    if not points:
        raise EmptyTrajectory("no trajectory points")
    mean_count = _mean([places.count_within(p, radius_m) for p in points])
    radius_km = radius_m / 1000.0
    return mean_count / (math.pi * radius_km**2)


def wins_fraction_by_density(
    journeys: Sequence[tuple[str, float]],
) -> list[tuple[float, float]]:
    """Cumulative win fraction: at each distinct density x (ascending), the
    share of "win" outcomes among journeys with density <= x.

    Ties and losses count in the denominator only.
    """
    if not journeys:
        raise ValueError("need at least one journey")
    ordered = sorted(journeys, key=lambda j: j[1])
    curve: list[tuple[float, float]] = []
    wins = 0
    for i, (outcome, density) in enumerate(ordered):
        if outcome == "win":
            wins += 1
        is_last_at_value = i + 1 == len(ordered) or ordered[i + 1][1] != density
        if is_last_at_value:
            curve.append((density, wins / (i + 1)))
    return curve


# ---------------------------------------------------------------------------
# CSV loaders and the end-to-end report


def _parse_stamp(raw: str) -> datetime:
    return datetime.fromisoformat(raw.strip().replace("Z", "+00:00"))


def load_rides_csv(path: str | Path) -> list[ExperimentRide]:
    rides = []
    with open(path, newline="") as handle:
        for row in csv.DictReader(handle):
            currency = row["currency"].strip()
            rides.append(
                ExperimentRide(
                    journey_id=row["journey_id"].strip(),
                    provider=row["provider"].strip(),
                    start=_parse_stamp(row["start"]),
                    end=_parse_stamp(row["end"]),
                    actual_price=Money.from_major(row["actual_price"], currency),
                    estimated_price=Money.from_major(row["estimated_price"], currency),
                )
            )
    return rides


def load_trajectories_csv(path: str | Path) -> dict[tuple[str, str], Trajectory]:
    rows: dict[tuple[str, str], list[tuple[GeoPoint, datetime]]] = {}
    with open(path, newline="") as handle:
        for row in csv.DictReader(handle):
            key = (row["journey_id"].strip(), row["provider"].strip())
            rows.setdefault(key, []).append(
                (GeoPoint(float(row["lat"]), float(row["lng"])), _parse_stamp(row["timestamp"]))
            )
    return {
        (journey, provider): Trajectory(
            journey_id=journey,
            provider=provider,
            points=tuple(sorted(points, key=lambda item: item[1])),
        )
        for (journey, provider), points in rows.items()
    }


def load_places_csv(path: str | Path) -> PlaceIndex:
    places = []
    with open(path, newline="") as handle:
        for row in csv.DictReader(handle):
            places.append(GeoPoint(float(row["lat"]), float(row["lng"])))
    return PlaceIndex(places)


def analyze_experiment(
    rides: Sequence[ExperimentRide],
    trajectories: dict[tuple[str, str], Trajectory] | None = None,
    places: PlaceIndex | None = None,
    tie_tolerance_s: float = DEFAULT_TIE_TOLERANCE_S,
    reference_provider: str | None = None,
    density_radius_m: float = DEFAULT_DENSITY_RADIUS_M,
) -> dict:
    """Full experiment report: accuracy, gains, outcomes, density curve.

    The reference provider (the metered one) defaults to the provider of the
    first ride; wins are counted from its perspective.
    """
    if not rides:
        raise ValueError("no rides")
    reference = reference_provider or rides[0].provider

    by_journey: dict[str, list[ExperimentRide]] = {}
    for ride in rides:
        by_journey.setdefault(ride.journey_id, []).append(ride)

    outcomes = {"win": 0, "tie": 0, "loss": 0}
    gains = []
    density_points = []
    durations: dict[str, list[float]] = {}
    for journey_id in sorted(by_journey):
        pair = by_journey[journey_id]
        if len(pair) != 2 or len({r.provider for r in pair}) != 2:
            raise MismatchedJourney(f"journey {journey_id}: expected one ride per provider")
        ref = next((r for r in pair if r.provider == reference), None)
        if ref is None:
            raise MismatchedJourney(f"journey {journey_id}: no ride by {reference}")
        other = next(r for r in pair if r.provider != reference)
        outcome = classify_outcome(ref, other, tie_tolerance_s)
        label = {"win_a": "win", "win_b": "loss", "tie": "tie"}[outcome.value]
        outcomes[label] += 1
        gains.append(
            {
                "journey_id": journey_id,
                "price_gain": price_gain(other.actual_price, ref.actual_price),
                "time_gain": time_gain(other.duration_s, ref.duration_s),
            }
        )
        durations.setdefault(ref.provider, []).append(ref.duration_s)
        durations.setdefault(other.provider, []).append(other.duration_s)
        if trajectories is not None and places is not None:
            trajs = [
                trajectories[(journey_id, r.provider)]
                for r in pair
                if (journey_id, r.provider) in trajectories
            ]
            if trajs:
                density_points.append(
                    (label, trip_density(trajs, places, density_radius_m))
                )

    report = {
        "reference_provider": reference,
        "journeys": len(by_journey),
        "accuracy": {
            provider: accuracy_stats(
                [(r.estimated_price, r.actual_price) for r in rides if r.provider == provider]
            ).as_dict()
            for provider in sorted(durations)
        },
        "mean_duration_min": {
            provider: _mean(values) / 60.0 for provider, values in sorted(durations.items())
        },
        "outcomes": {
            "wins": outcomes["win"],
            "ties": outcomes["tie"],
            "losses": outcomes["loss"],
            "tie_tolerance_s": tie_tolerance_s,
        },
        "gains": gains,
    }
    if density_points:
        report["density_curve"] = [
            {"density": density, "fraction": fraction}
            for density, fraction in wins_fraction_by_density(density_points)
        ]
    return report
