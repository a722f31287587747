import random
from datetime import datetime
from types import SimpleNamespace

import pytest

from cabfare.geo import GeoPoint
from cabfare.meter import (
    InvalidRoute,
    apply_correction,
    count_ticks,
    estimate_metered,
    meter_breakdown,
    simulate_meter,
)
from cabfare.money import Money
from cabfare.routing import Route, RouteSegment
from cabfare.tariffs import ExtraCharge, RateWindow, TariffScheme, resolve_rate

from oracles import discrete_meter_fare, random_route, random_scheme

NOON = datetime(2016, 2, 9, 12, 0)
O = GeoPoint(40.7580, -73.9855)
D = GeoPoint(40.7068, -74.0099)


def nyc_scheme(**kwargs):
    defaults = dict(
        name="nyc",
        currency="USD",
        rate_windows=(
            RateWindow(
                start_minute=0,
                end_minute=0,
                flag=Money(250, "USD"),
                increment_charge=Money(50, "USD"),
                distance_unit_m=321.868,
                time_unit_s=50.0,
            ),
        ),
        minimum_fare=Money(250, "USD"),
        mode="distance_unless_slow",
        slow_speed_threshold_mps=5.36,
    )
    defaults.update(kwargs)
    return TariffScheme(**defaults)


def london_scheme(**kwargs):
    defaults = dict(
        name="london",
        currency="GBP",
        rate_windows=(
            RateWindow(
                start_minute=0,
                end_minute=0,
                flag=Money(240, "GBP"),
                increment_charge=Money(20, "GBP"),
                distance_unit_m=126.0,
                time_unit_s=27.0,
            ),
        ),
        minimum_fare=Money(240, "GBP"),
        correction_coefficient=0.9,
    )
    defaults.update(kwargs)
    return TariffScheme(**defaults)


def route(*segments, origin=O, destination=D):
    if not segments:
        return Route(origin, origin, ())
    return Route(origin, destination, tuple(RouteSegment(*s) for s in segments))


class TestNycTariff:
    def test_fast_mile_five_distance_ticks(self):
        # 1609.34 m is exactly five fifths of a mile; speed 8.05 m/s is fast
        fare = simulate_meter(route((1609.34, 200.0)), nyc_scheme(), NOON)
        assert fare == Money(500, "USD")

    def test_stopped_segment_three_time_ticks(self):
        fare = simulate_meter(route((0.0, 150.0)), nyc_scheme(), NOON)
        assert fare == Money(400, "USD")

    def test_stopped_segment_adds_to_fast_mile(self):
        fare = simulate_meter(route((1609.34, 200.0), (0.0, 150.0)), nyc_scheme(), NOON)
        assert fare == Money(650, "USD")

    def test_fast_segment_has_no_time_ticks(self):
        # 600 m in 100 s (6 m/s > 5.36): one distance tick, zero time ticks
        scheme = nyc_scheme()
        window = resolve_rate(scheme, NOON)
        assert count_ticks(route((600.0, 100.0)), scheme, window) == 1

    def test_slow_segment_counts_time_ticks(self):
        # 200 m in 100 s (2 m/s): time ticks at 50 s and 100 s
        scheme = nyc_scheme()
        window = resolve_rate(scheme, NOON)
        assert count_ticks(route((200.0, 100.0)), scheme, window) == 2

    def test_time_accumulator_frozen_while_fast(self):
        # 100 s fast then 30 s stopped: time charging restarts from zero,
        # so the stop is too short for a time tick
        scheme = nyc_scheme()
        window = resolve_rate(scheme, NOON)
        assert count_ticks(route((600.0, 100.0), (0.0, 30.0)), scheme, window) == 1

    def test_whichever_first_accrues_time_everywhere(self):
        scheme = nyc_scheme(mode="whichever_first", slow_speed_threshold_mps=None)
        window = resolve_rate(scheme, NOON)
        # time ticks at 50 s and 100 s beat the 53.6 s distance crossing each
        # cycle, so the same fast segment now fires two ticks instead of one
        assert count_ticks(route((600.0, 100.0)), scheme, window) == 2


class TestMeterEdges:
    def test_empty_route_charges_minimum(self):
        fare = simulate_meter(route(), london_scheme(), NOON)
        assert fare == Money(240, "GBP")

    def test_minimum_fare_clamp(self):
        scheme = london_scheme(minimum_fare=Money(700, "GBP"))
        # 126 m in 16 s: exactly one tick -> 240 + 20 = 260, clamped to 700
        assert simulate_meter(route((126.0, 16.0)), scheme, NOON) == Money(700, "GBP")

    def test_zero_duration_segment_distance_sweep(self):
        scheme = london_scheme()
        window = resolve_rate(scheme, NOON)
        assert count_ticks(route((378.0, 0.0)), scheme, window) == 3

    def test_invalid_route_zero_zero_segment(self):
        bogus = SimpleNamespace(
            origin=O, destination=D, segments=(SimpleNamespace(length_m=0.0, duration_s=0.0),)
        )
        with pytest.raises(InvalidRoute):
            simulate_meter(bogus, london_scheme(), NOON)

    def test_tick_exactly_at_segment_end_fires(self):
        scheme = london_scheme()
        window = resolve_rate(scheme, NOON)
        # 27 s stopped: the time accumulator reaches its unit exactly at the end
        assert count_ticks(route((0.0, 27.0)), scheme, window) == 1


class TestApplyCorrection:
    def test_ten_percent_reduction(self):
        assert apply_correction(Money(2000, "GBP"), london_scheme()) == Money(1800, "GBP")

    def test_identity_coefficient(self):
        scheme = london_scheme(correction_coefficient=1.0)
        assert apply_correction(Money(1234, "GBP"), scheme) == Money(1234, "GBP")

    def test_clamped_to_minimum(self):
        # 2.50 * 0.9 = 2.25 < 2.40 minimum
        assert apply_correction(Money(250, "GBP"), london_scheme()) == Money(240, "GBP")


class TestExtras:
    def heathrow(self):
        return ExtraCharge(
            name="heathrow-departure",
            trigger="destination-zone",
            amount=Money(80, "GBP"),
            zone_center=GeoPoint(51.4700, -0.4543),
            zone_radius_m=2500,
        )

    def holiday(self):
        return ExtraCharge(
            name="holiday",
            trigger="date-rule",
            amount=Money(400, "GBP"),
            dates=(datetime(2016, 12, 25).date(),),
        )

    def test_destination_zone_matched(self):
        scheme = london_scheme(extras=(self.heathrow(),))
        heathrow_dest = GeoPoint(51.4712, -0.4527)
        fare = simulate_meter(
            route((1260.0, 27.0)), scheme, NOON, origin=O, destination=heathrow_dest
        )
        # 10 distance ticks + flag = 440, plus the 80 zone extra
        assert fare == Money(520, "GBP")

    def test_zone_not_matched(self):
        scheme = london_scheme(extras=(self.heathrow(),))
        fare = simulate_meter(route((1260.0, 27.0)), scheme, NOON, origin=O, destination=D)
        assert fare == Money(440, "GBP")

    def test_date_rule(self):
        scheme = london_scheme(extras=(self.holiday(),))
        christmas = datetime(2016, 12, 25, 12, 0)
        assert simulate_meter(route(), scheme, christmas) == Money(640, "GBP")
        assert simulate_meter(route(), scheme, NOON) == Money(240, "GBP")

    def test_adjustment_order_extras_uncorrected(self):
        # correction applies to the clamped meter total only; extras are added after
        scheme = london_scheme(extras=(self.heathrow(),))
        heathrow_dest = GeoPoint(51.4712, -0.4527)
        r = route((1260.0, 27.0))
        corrected = estimate_metered(r, scheme, NOON, origin=O, destination=heathrow_dest)
        # meter 440 -> x0.9 = 396 -> + 80 extra
        assert corrected == Money(476, "GBP")
        uncorrected = simulate_meter(r, scheme, NOON, origin=O, destination=heathrow_dest)
        assert uncorrected == Money(520, "GBP")


class TestLondonHandComputation:
    def test_two_segment_fixture_route(self):
        # hand walk: seg1 800 m/120 s gives 6 distance ticks (126 m every 18.9 s),
        # carrying 44 m / 6.6 s into seg2 (1200 m/240 s at 5 m/s), which fires
        # 9 more distance ticks; 15 ticks total
        r = route((800.0, 120.0), (1200.0, 240.0))
        scheme = london_scheme()
        assert simulate_meter(r, scheme, NOON) == Money(540, "GBP")
        assert estimate_metered(r, scheme, NOON) == Money(486, "GBP")


class TestMeterProperties:
    def test_monotonic_in_appended_segments(self):
        rng = random.Random(31415)
        for _ in range(60):
            scheme = random_scheme(rng)
            r = random_route(rng)
            base = simulate_meter(r, scheme, NOON)
            extra_seg = RouteSegment(
                round(rng.uniform(10.0, 800.0), 2), round(rng.uniform(1.0, 60.0), 2)
            )
            extended = Route(r.origin, r.destination, r.segments + (extra_seg,))
            assert simulate_meter(extended, scheme, NOON) >= base

    def test_split_invariance(self):
        # splitting a segment at the same uniform speed must not move any tick
        rng = random.Random(2718)
        for _ in range(80):
            scheme = random_scheme(rng)
            length = rng.randrange(10, 101) * 10  # multiples of 10 keep splits exact
            duration = rng.randrange(5, 51) * 10
            k = rng.randrange(1, 10)
            whole = route((float(length), float(duration)))
            split = route(
                (length * k / 10.0, duration * k / 10.0),
                (length * (10 - k) / 10.0, duration * (10 - k) / 10.0),
            )
            assert simulate_meter(whole, scheme, NOON) == simulate_meter(split, scheme, NOON)

    def test_output_never_below_minimum(self):
        rng = random.Random(1618)
        for _ in range(60):
            scheme = random_scheme(rng)
            fare = simulate_meter(random_route(rng), scheme, NOON)
            assert fare.amount_minor >= scheme.minimum_fare.amount_minor

    def test_matches_discrete_oracle_sample(self):
        # the full 200-pair run lives in the acceptance suite
        rng = random.Random(5150)
        for _ in range(40):
            scheme = random_scheme(rng)
            r = random_route(rng)
            assert meter_breakdown(r, scheme, NOON).metered == discrete_meter_fare(
                r, scheme, NOON
            )

    def test_correction_formula_on_randomized_fares(self):
        rng = random.Random(9273)
        for _ in range(60):
            scheme = random_scheme(rng)
            fare = simulate_meter(random_route(rng), scheme, NOON)
            corrected = apply_correction(fare, scheme)
            expected = max(
                fare.scaled(scheme.correction_coefficient).amount_minor,
                scheme.minimum_fare.amount_minor,
            )
            assert corrected.amount_minor == expected
