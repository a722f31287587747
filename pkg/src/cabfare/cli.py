"""Command-line front door: estimate, ingest-trips, analyze-experiment, serve.

Exit codes: 1 configuration error, 2 routing/upstream provider failure,
3 invalid user input.  ``estimate --json`` emits exactly the bytes the HTTP
service would return for the same query, so scripted output can be swapped
between the two front doors.
"""

from __future__ import annotations

import json
import sys
from datetime import datetime
from pathlib import Path

import click

from .analysis import (
    analyze_experiment,
    load_places_csv,
    load_rides_csv,
    load_trajectories_csv,
)
from .comparison import JourneyQuery, compare, payload_json, result_payload
from .config import ConfigError, load_config
from .geo import GeoPoint
from .history import EmptyDataset, UnreadableSource, ingest_trips
from .routing import ProviderUnavailable, RouteNotFound
from .storage import QueryLog

EXIT_CONFIG = 1
EXIT_ROUTING = 2
EXIT_INPUT = 3


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_point(raw: str, label: str) -> GeoPoint:
    try:
        lat_str, lng_str = raw.split(",", 1)
        return GeoPoint(float(lat_str), float(lng_str))
    except ValueError as exc:
        _fail(EXIT_INPUT, f"bad {label} coordinate {raw!r}: {exc}")


@click.group()
def main() -> None:
    """Taxi fare estimation and provider comparison."""


@main.command()
@click.option("--config-dir", required=True, type=click.Path(), help="configuration directory")
@click.option("--log-path", default="query_log.jsonl", type=click.Path(), show_default=True)
@click.option("--city", "city_code", required=True)
@click.option("--from", "origin_raw", required=True, help="origin as lat,lng")
@click.option("--to", "destination_raw", required=True, help="destination as lat,lng")
@click.option("--time", "time_raw", default=None, help="query time, RFC 3339 (default: now)")
@click.option("--surge", type=float, default=None, help="flex surge multiplier override")
@click.option("--user", "user_id", default="anon", show_default=True)
@click.option("--json", "as_json", is_flag=True, help="emit the service response body")
def estimate(config_dir, log_path, city_code, origin_raw, destination_raw, time_raw, surge, user_id, as_json):
    """Compare providers for one journey."""
    try:
        config = load_config(config_dir)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    city = config.city(city_code)
    if city is None:
        _fail(EXIT_INPUT, f"unknown city {city_code!r} (configured: {', '.join(config.cities)})")
    origin = _parse_point(origin_raw, "--from")
    destination = _parse_point(destination_raw, "--to")
    if time_raw is not None:
        try:
            submitted_at = datetime.fromisoformat(time_raw.replace("Z", "+00:00"))
        except ValueError:
            _fail(EXIT_INPUT, f"unparseable --time {time_raw!r}")
    else:
        submitted_at = datetime.now()
    surge_value = surge if surge is not None else city.default_surge
    if surge_value < 1.0:
        _fail(EXIT_INPUT, "--surge must be >= 1.0")

    query = JourneyQuery.create(
        user_id=user_id,
        city=city.code,
        origin=origin,
        destination=destination,
        submitted_at=submitted_at,
        surge_multiplier=surge_value,
    )
    try:
        result = compare(query, city, surge_value, log=QueryLog(log_path))
    except RouteNotFound as exc:
        _fail(EXIT_ROUTING, str(exc))
    except ProviderUnavailable as exc:
        _fail(EXIT_ROUTING, str(exc))

    payload = result_payload(query, result, city.currency)
    if as_json:
        sys.stdout.write(payload_json(payload) + "\n")
        return
    click.echo(f"city: {city.display_name}   time: {payload['submitted_at']}")
    for est in payload["estimates"]:
        marker = "*" if est["provider"] == payload["winner"] else " "
        notes = est["method"]
        if est["corrected"]:
            notes += ", corrected"
        if est["surge_multiplier"] != 1.0:
            notes += f", surge x{est['surge_multiplier']:g}"
        click.echo(f" {marker} {est['provider']:<12} {est['amount']:>8} {est['currency']}  ({notes})")
    click.echo(f"winner: {payload['winner']}   savings: {payload['savings']} {payload['currency']}")


@main.command("ingest-trips")
@click.option("--config-dir", required=True, type=click.Path())
@click.option("--city", "city_code", required=True)
@click.option("--file", "csv_path", required=True, type=click.Path())
@click.option("--show-rejects", is_flag=True, help="list rejected rows with reasons")
def ingest_trips_cmd(config_dir, city_code, csv_path, show_rejects):
    """Validate and summarize a historic-trip CSV."""
    try:
        config = load_config(config_dir)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    city = config.city(city_code)
    if city is None:
        _fail(EXIT_INPUT, f"unknown city {city_code!r}")
    try:
        _store, report = ingest_trips(csv_path, city.currency)
    except (UnreadableSource, EmptyDataset) as exc:
        _fail(EXIT_INPUT, f"{csv_path}: {exc}")
    click.echo(f"accepted {report.accepted}, rejected {len(report.rejected)}")
    if show_rejects:
        for row in report.rejected:
            click.echo(f"  line {row.line}: {row.reason}")


@main.command("analyze-experiment")
@click.option("--rides", "rides_path", required=True, type=click.Path())
@click.option("--trajectories", "trajectories_path", required=True, type=click.Path())
@click.option("--places", "places_path", required=True, type=click.Path())
@click.option("--tie-tolerance", type=float, default=60.0, show_default=True, help="seconds")
@click.option("--reference-provider", default=None, help="metered provider id (default: first ride's)")
@click.option("--out", "out_path", required=True, type=click.Path())
def analyze_experiment_cmd(rides_path, trajectories_path, places_path, tie_tolerance, reference_provider, out_path):
    """Produce the experiment analysis report as JSON."""
    for label, path in (
        ("rides", rides_path),
        ("trajectories", trajectories_path),
        ("places", places_path),
    ):
        if not Path(path).is_file():
            _fail(EXIT_CONFIG, f"{label} file not found: {path}")
    try:
        rides = load_rides_csv(rides_path)
        trajectories = load_trajectories_csv(trajectories_path)
        places = load_places_csv(places_path)
        report = analyze_experiment(
            rides,
            trajectories,
            places,
            tie_tolerance_s=tie_tolerance,
            reference_provider=reference_provider,
        )
    except (ValueError, KeyError) as exc:
        _fail(EXIT_INPUT, str(exc))
    Path(out_path).write_text(json.dumps(report, indent=2) + "\n")
    outcomes = report["outcomes"]
    click.echo(
        f"{report['journeys']} journeys: {outcomes['wins']} wins / {outcomes['ties']} ties / "
        f"{outcomes['losses']} losses for {report['reference_provider']}"
    )
    click.echo(f"report written to {out_path}")


@main.command()
@click.option("--config-dir", required=True, type=click.Path())
@click.option("--port", type=int, default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--log-path", default="query_log.jsonl", type=click.Path(), show_default=True)
@click.option("--static-dir", default=None, type=click.Path(), help="frontend assets to serve")
def serve(config_dir, port, host, log_path, static_dir):
    """Run the HTTP service."""
    import uvicorn

    from .server import create_app

    try:
        app = create_app(config_dir, log_path, static_dir=static_dir)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
