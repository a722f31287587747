"""Taxi meter simulation along a route.

The meter walks the route segments under uniform motion and fires a fixed
increment charge whenever the distance unit or the time unit of the active
rate window is consumed, whichever is reached first.  Both accumulators
reset on every tick, and a tick fires the moment an accumulator reaches its
unit exactly (>= comparison).

Arithmetic runs on exact rationals built from the decimal representation of
the inputs, so tick counts at decimal-exact boundaries (e.g. a route that is
exactly five distance units long) never depend on binary float rounding.

In ``distance_unless_slow`` mode, time-based charging only runs while the
cab is slow: in segments at or above the slow-speed threshold the time
accumulator is frozen and only distance ticks can fire.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from fractions import Fraction

from .geo import GeoPoint, haversine
from .money import Money
from .routing import Route
from .tariffs import (
    MODE_DISTANCE_UNLESS_SLOW,
    RateWindow,
    TariffScheme,
    resolve_rate,
)


class InvalidRoute(ValueError):
    """Route contains a segment with zero length and zero duration."""


def _frac(x: float | int) -> Fraction:
    # str() round-trips the shortest decimal form, giving decimal-exact rationals
    return Fraction(str(x))


@dataclass(frozen=True)
class MeterBreakdown:
    """Result of one meter run: clamped metered fare plus matched extras."""

    metered: Money
    ticks: int
    rate_window: RateWindow
    extras: tuple[tuple[str, Money], ...]

    @property
    def extras_total(self) -> Money:
        total = Money(0, self.metered.currency)
        for _, amount in self.extras:
            total = total + amount
        return total

    @property
    def total(self) -> Money:
        return self.metered + self.extras_total


def count_ticks(route: Route, scheme: TariffScheme, window: RateWindow) -> int:
    """Number of increment charges fired while driving the route."""
    unit_d = _frac(window.distance_unit_m)
    unit_t = _frac(window.time_unit_s)
    threshold = (
        _frac(scheme.slow_speed_threshold_mps)
        if scheme.mode == MODE_DISTANCE_UNLESS_SLOW
        else None
    )
    d_acc = Fraction(0)
    t_acc = Fraction(0)
    ticks = 0
    for seg in route.segments:
        if seg.length_m == 0 and seg.duration_s == 0:
            raise InvalidRoute("segment with zero length and zero duration")
        length = _frac(seg.length_m)
        duration = _frac(seg.duration_s)

        if duration == 0:
            # instantaneous sweep: distance accrues, no time passes
            while d_acc + length >= unit_d:
                length -= unit_d - d_acc
                ticks += 1
                d_acc = Fraction(0)
                t_acc = Fraction(0)
            d_acc += length
            continue

        speed = length / duration
        time_active = threshold is None or speed < threshold
        remaining = duration
        while True:
            t_next = None
            if speed > 0:
                t_next = (unit_d - d_acc) / speed
            if time_active:
                t_time = unit_t - t_acc
                if t_next is None or t_time < t_next:
                    t_next = t_time
            if t_next is None or t_next > remaining:
                d_acc += speed * remaining
                if time_active:
                    t_acc += remaining
                break
            ticks += 1
            remaining -= t_next
            d_acc = Fraction(0)
            t_acc = Fraction(0)
    return ticks


def match_extras(
    scheme: TariffScheme,
    start_time: datetime,
    origin: GeoPoint,
    destination: GeoPoint,
) -> tuple[tuple[str, Money], ...]:
    """Extra charges triggered by the journey's endpoints or calendar date."""
    matched = []
    for extra in scheme.extras:
        if extra.trigger == "origin-zone":
            hit = haversine(origin, extra.zone_center) <= extra.zone_radius_m
        elif extra.trigger == "destination-zone":
            hit = haversine(destination, extra.zone_center) <= extra.zone_radius_m
        else:
            hit = start_time.date() in extra.dates
        if hit:
            matched.append((extra.name, extra.amount))
    return tuple(matched)


def meter_breakdown(
    route: Route,
    scheme: TariffScheme,
    start_time: datetime,
    origin: GeoPoint | None = None,
    destination: GeoPoint | None = None,
) -> MeterBreakdown:
    """Run the meter; the whole journey is priced at the start time's window.

    ``origin``/``destination`` default to the route endpoints and exist so a
    journey query's own endpoints can drive the extra-charge zone matching.
    """
    window = resolve_rate(scheme, start_time)
    ticks = count_ticks(route, scheme, window)
    metered = (window.flag + ticks * window.increment_charge).max(scheme.minimum_fare)
    extras = match_extras(
        scheme,
        start_time,
        origin if origin is not None else route.origin,
        destination if destination is not None else route.destination,
    )
    return MeterBreakdown(metered=metered, ticks=ticks, rate_window=window, extras=extras)


def simulate_meter(
    route: Route,
    scheme: TariffScheme,
    start_time: datetime,
    origin: GeoPoint | None = None,
    destination: GeoPoint | None = None,
) -> Money:
    """Uncorrected metered fare: max(flag + ticks, minimum) plus matched extras."""
    return meter_breakdown(route, scheme, start_time, origin, destination).total


def apply_correction(fare: Money, scheme: TariffScheme) -> Money:
    """Scale a metered fare by the feedback correction, clamped to the minimum.

    Rounding is half-away-from-zero on minor units.
    """
    return fare.scaled(scheme.correction_coefficient).max(scheme.minimum_fare)


def estimate_metered(
    route: Route,
    scheme: TariffScheme,
    start_time: datetime,
    origin: GeoPoint | None = None,
    destination: GeoPoint | None = None,
    corrected: bool = True,
) -> Money:
    """Production metered estimate.

    Order of adjustments: meter total, minimum-fare clamp, correction
    coefficient, re-clamp, then extras added uncorrected (fixed regulated
    amounts are not subject to the feedback coefficient).
    """
    breakdown = meter_breakdown(route, scheme, start_time, origin, destination)
    metered = breakdown.metered
    if corrected:
        metered = apply_correction(metered, scheme)
    return metered + breakdown.extras_total
