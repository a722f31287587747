"""Declarative metered-tariff schemes.

A scheme is a set of time-of-day rate windows (flag charge plus a fixed
increment per distance unit or time unit, whichever is consumed first),
a minimum fare, optional zone/date extra charges, and a feedback-derived
correction coefficient.  Windows must partition the 24-hour day with
half-open [start, end) intervals; wrap-around windows are allowed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date, datetime, time
from pathlib import Path

from .geo import GeoPoint
from .money import Money

MODE_WHICHEVER_FIRST = "whichever_first"
MODE_DISTANCE_UNLESS_SLOW = "distance_unless_slow"

ZONE_TRIGGERS = ("origin-zone", "destination-zone")
DATE_TRIGGER = "date-rule"


class InvalidScheme(ValueError):
    """Tariff definition violates the scheme invariants (e.g. window gaps)."""


def _parse_hhmm(value: str) -> int:
    try:
        h, m = value.split(":")
        minute = int(h) * 60 + int(m)
    except (ValueError, AttributeError):
        raise InvalidScheme(f"bad time-of-day {value!r}, expected HH:MM") from None
    if not 0 <= minute < 24 * 60:
        raise InvalidScheme(f"time-of-day {value!r} out of range")
    return minute


def _fmt_minute(minute: int) -> str:
    return f"{minute // 60:02d}:{minute % 60:02d}"


@dataclass(frozen=True)
class RateWindow:
    start_minute: int  # minutes after midnight, inclusive
    end_minute: int    # exclusive; end <= start wraps past midnight
    flag: Money
    increment_charge: Money
    distance_unit_m: float
    time_unit_s: float

    def __post_init__(self) -> None:
        if self.distance_unit_m <= 0 or self.time_unit_s <= 0:
            raise InvalidScheme("distance/time units must be positive")

    def contains(self, t: time) -> bool:
        m = t.hour * 60 + t.minute + (t.second + t.microsecond / 1e6) / 60.0
        if self.start_minute == self.end_minute:
            return True  # single full-day window
        if self.start_minute < self.end_minute:
            return self.start_minute <= m < self.end_minute
        return m >= self.start_minute or m < self.end_minute

    @property
    def label(self) -> str:
        return f"{_fmt_minute(self.start_minute)}-{_fmt_minute(self.end_minute)}"


@dataclass(frozen=True)
class ExtraCharge:
    name: str
    trigger: str  # origin-zone | destination-zone | date-rule
    amount: Money
    zone_center: GeoPoint | None = None
    zone_radius_m: float | None = None
    dates: tuple[date, ...] = ()

    def __post_init__(self) -> None:
        if self.amount.amount_minor < 0:
            raise InvalidScheme(f"extra {self.name!r}: amount must be >= 0")
        if self.trigger in ZONE_TRIGGERS:
            if self.zone_center is None or not self.zone_radius_m or self.zone_radius_m <= 0:
                raise InvalidScheme(f"extra {self.name!r}: zone trigger needs center and radius > 0")
        elif self.trigger == DATE_TRIGGER:
            if not self.dates:
                raise InvalidScheme(f"extra {self.name!r}: date-rule needs at least one date")
        else:
            raise InvalidScheme(f"extra {self.name!r}: unknown trigger {self.trigger!r}")


@dataclass(frozen=True)
class TariffScheme:
    name: str
    currency: str
    rate_windows: tuple[RateWindow, ...]
    minimum_fare: Money
    mode: str = MODE_WHICHEVER_FIRST
    slow_speed_threshold_mps: float | None = None
    extras: tuple[ExtraCharge, ...] = ()
    correction_coefficient: float = 1.0

    def __post_init__(self) -> None:
        if not self.rate_windows:
            raise InvalidScheme("scheme needs at least one rate window")
        if self.minimum_fare.amount_minor < 0:
            raise InvalidScheme("minimum fare must be >= 0")
        if not 0 < self.correction_coefficient <= 2:
            raise InvalidScheme("correction coefficient must lie in (0, 2]")
        if self.mode == MODE_DISTANCE_UNLESS_SLOW:
            if not self.slow_speed_threshold_mps or self.slow_speed_threshold_mps <= 0:
                raise InvalidScheme("distance_unless_slow mode requires a positive slow-speed threshold")
        elif self.mode == MODE_WHICHEVER_FIRST:
            if self.slow_speed_threshold_mps is not None:
                raise InvalidScheme("slow-speed threshold only applies to distance_unless_slow mode")
        else:
            raise InvalidScheme(f"unknown mode {self.mode!r}")
        _validate_partition(self.rate_windows)


def _validate_partition(windows: tuple[RateWindow, ...]) -> None:
    """Windows must tile the day: sorted by start, each end meets the next start."""
    if len(windows) == 1:
        w = windows[0]
        if w.start_minute != w.end_minute:
            raise InvalidScheme(
                f"single window {w.label} does not cover the day; use equal start/end for 24 h"
            )
        return
    by_start = sorted(windows, key=lambda w: w.start_minute)
    starts = [w.start_minute for w in by_start]
    if len(set(starts)) != len(starts):
        dup = _fmt_minute(next(s for s in starts if starts.count(s) > 1))
        raise InvalidScheme(f"overlapping rate windows: two windows start at {dup}")
    for w, nxt in zip(by_start, by_start[1:] + by_start[:1]):
        if w.end_minute != nxt.start_minute:
            raise InvalidScheme(
                f"rate windows do not partition the day: window {w.label} ends at "
                f"{_fmt_minute(w.end_minute)} but the next window starts at "
                f"{_fmt_minute(nxt.start_minute)}"
            )


def resolve_rate(scheme: TariffScheme, start_time: time | datetime) -> RateWindow:
    """The unique window whose half-open interval contains the time of day."""
    t = start_time.time() if isinstance(start_time, datetime) else start_time
    for window in scheme.rate_windows:
        if window.contains(t):
            return window
    raise InvalidScheme(f"no rate window contains {t}")  # unreachable for valid schemes


def load_tariff(path: str | Path) -> TariffScheme:
    """Load and validate a tariff config file (see README for the schema)."""
    doc = json.loads(Path(path).read_text())
    return tariff_from_dict(doc, source=str(path))


def tariff_from_dict(doc: dict, source: str = "<dict>") -> TariffScheme:
    try:
        currency = doc["currency"]
        windows = tuple(
            RateWindow(
                start_minute=_parse_hhmm(w["start"]),
                end_minute=_parse_hhmm(w["end"]),
                flag=Money(int(w["flag_minor"]), currency),
                increment_charge=Money(int(w["increment_minor"]), currency),
                distance_unit_m=float(w["distance_unit_m"]),
                time_unit_s=float(w["time_unit_s"]),
            )
            for w in doc["rate_windows"]
        )
        extras = tuple(_extra_from_dict(e, currency) for e in doc.get("extras", []))
        return TariffScheme(
            name=doc["name"],
            currency=currency,
            rate_windows=windows,
            minimum_fare=Money(int(doc["minimum_fare_minor"]), currency),
            mode=doc.get("mode", MODE_WHICHEVER_FIRST),
            slow_speed_threshold_mps=doc.get("slow_speed_threshold_mps"),
            extras=extras,
            correction_coefficient=float(doc.get("correction_coefficient", 1.0)),
        )
    except KeyError as exc:
        raise InvalidScheme(f"{source}: missing tariff field {exc}") from None


def _extra_from_dict(e: dict, currency: str) -> ExtraCharge:
    zone = e.get("zone")
    return ExtraCharge(
        name=e["name"],
        trigger=e["trigger"],
        amount=Money(int(e["amount_minor"]), currency),
        zone_center=GeoPoint(zone["lat"], zone["lng"]) if zone else None,
        zone_radius_m=zone.get("radius_m") if zone else None,
        dates=tuple(date.fromisoformat(d) for d in e.get("dates", [])),
    )
