import http.server
import json
import threading

import pytest

from cabfare.geo import GeoPoint
from cabfare.routing import (
    FixtureRoutingProvider,
    HttpRoutingProvider,
    ProviderUnavailable,
    Route,
    RouteNotFound,
    RouteSegment,
    SyntheticRoutingProvider,
    synthetic_route,
)

ORIGIN = GeoPoint(51.50, -0.12)
DESTINATION = GeoPoint(51.51, -0.10)


class TestRouteTypes:
    def test_segment_rejects_zero_zero(self):
        with pytest.raises(ValueError):
            RouteSegment(0.0, 0.0)

    def test_segment_rejects_negative(self):
        with pytest.raises(ValueError):
            RouteSegment(-1.0, 10.0)

    def test_segment_allows_single_zero(self):
        assert RouteSegment(0.0, 30.0).duration_s == 30.0
        assert RouteSegment(500.0, 0.0).length_m == 500.0

    def test_route_totals(self):
        route = Route(ORIGIN, DESTINATION, (RouteSegment(800, 120), RouteSegment(1200, 240)))
        assert route.total_length_m == 2000
        assert route.total_duration_s == 360

    def test_empty_route_needs_equal_endpoints(self):
        with pytest.raises(ValueError):
            Route(ORIGIN, DESTINATION, ())
        assert Route(ORIGIN, ORIGIN, ()).total_length_m == 0


class TestSyntheticRoute:
    def test_identical_endpoints(self):
        assert synthetic_route(ORIGIN, ORIGIN, 10.0).segments == ()

    def test_arithmetic(self):
        # (0,0) -> (0,1) is one degree of arc: 111,194.9 m
        route = synthetic_route(GeoPoint(0, 0), GeoPoint(0, 1), 5.0)
        assert len(route.segments) == 1
        assert abs(route.segments[0].length_m - 111194.9) < 0.1
        assert abs(route.segments[0].duration_s - 22238.98) < 0.1

    def test_rejects_bad_speed(self):
        with pytest.raises(ValueError):
            synthetic_route(ORIGIN, DESTINATION, 0.0)


@pytest.fixture(scope="module")
def provider(config_dir):
    return FixtureRoutingProvider(config_dir / "routes" / "london.json")


class TestFixtureProvider:
    def test_exact_fixture_route(self, provider):
        route = provider.route(ORIGIN, DESTINATION)
        assert route.origin == ORIGIN and route.destination == DESTINATION
        assert route.segments == (RouteSegment(800.0, 120.0), RouteSegment(1200.0, 240.0))

    def test_deterministic(self, provider):
        assert provider.route(ORIGIN, DESTINATION) == provider.route(ORIGIN, DESTINATION)

    def test_unknown_pair_raises(self, provider):
        with pytest.raises(RouteNotFound):
            provider.route(GeoPoint(50.0, 0.0), GeoPoint(50.1, 0.1))

    def test_identical_endpoints_empty_route(self, provider):
        assert provider.route(ORIGIN, ORIGIN).segments == ()

    def test_rounding_tolerant_keys(self, provider):
        wobbly = GeoPoint(51.500000004, -0.120000004)
        assert provider.route(wobbly, DESTINATION).segments[0].length_m == 800.0

    def test_totals_match_sums_on_all_fixtures(self, config_dir):
        for name in ("london.json", "new_york.json"):
            provider = FixtureRoutingProvider(config_dir / "routes" / name)
            for olat, olng, dlat, dlng in provider.pairs():
                route = provider.route(GeoPoint(olat, olng), GeoPoint(dlat, dlng))
                assert route.total_length_m == sum(s.length_m for s in route.segments)
                assert route.total_duration_s == sum(s.duration_s for s in route.segments)

    def test_fallback_speed(self, config_dir):
        provider = FixtureRoutingProvider(
            config_dir / "routes" / "london.json", fallback_speed_mps=6.5
        )
        route = provider.route(GeoPoint(51.49, -0.20), GeoPoint(51.52, -0.05))
        assert len(route.segments) == 1
        assert route.segments[0].duration_s == pytest.approx(
            route.segments[0].length_m / 6.5
        )


class _StubHandler(http.server.BaseHTTPRequestHandler):
    def do_GET(self):
        if self.path.startswith("/route"):
            if "olat=51.5" in self.path:
                body = json.dumps(
                    [{"length_m": 800.0, "duration_s": 120.0}, {"length_m": 1200.0, "duration_s": 240.0}]
                ).encode()
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.end_headers()
                self.wfile.write(body)
            elif "olat=40.7" in self.path:
                self.send_response(500)
                self.end_headers()
            else:
                self.send_response(404)
                self.end_headers()

    def log_message(self, *args):
        pass


@pytest.fixture(scope="module")
def stub_server():
    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()


class TestHttpProvider:
    def test_parses_segments(self, stub_server):
        provider = HttpRoutingProvider(stub_server)
        route = provider.route(ORIGIN, DESTINATION)
        assert route.total_length_m == 2000.0

    def test_404_maps_to_route_not_found(self, stub_server):
        provider = HttpRoutingProvider(stub_server)
        with pytest.raises(RouteNotFound):
            provider.route(GeoPoint(10.0, 10.0), GeoPoint(11.0, 11.0))

    def test_500_maps_to_provider_unavailable(self, stub_server):
        provider = HttpRoutingProvider(stub_server)
        with pytest.raises(ProviderUnavailable):
            provider.route(GeoPoint(40.7, -74.0), GeoPoint(40.75, -73.9))

    def test_dead_backend_maps_to_provider_unavailable(self):
        provider = HttpRoutingProvider("http://127.0.0.1:1", timeout_s=0.5)
        with pytest.raises(ProviderUnavailable):
            provider.route(ORIGIN, DESTINATION)

    def test_synthetic_provider(self):
        provider = SyntheticRoutingProvider(speed_mps=10.0)
        route = provider.route(GeoPoint(0, 0), GeoPoint(0, 1))
        assert abs(route.segments[0].duration_s - 11119.49) < 0.01
