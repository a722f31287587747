"""HTTP JSON service for estimation, geocoding, feedback and statistics.

All pricing logic stays server-side; clients submit coordinates and render
whatever the service returns.  Estimate responses are serialized through
the same payload builder the CLI uses, so both front doors emit identical
bytes for identical inputs.
"""

from __future__ import annotations

from datetime import datetime
from decimal import Decimal
from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .comparison import JourneyQuery, compare, payload_json, result_payload
from .config import AppConfig, load_config
from .geo import GeoPoint
from .routing import ProviderUnavailable, RouteNotFound
from .storage import FeedbackStore, QueryLog, StorageFailure

DEFAULT_PORT = 8080


def parse_rfc3339(raw: str) -> datetime:
    return datetime.fromisoformat(raw.strip().replace("Z", "+00:00"))


class Coordinates(BaseModel):
    lat: float
    lng: float


class EstimateBody(BaseModel):
    city: str
    origin: Coordinates
    destination: Coordinates
    time: str | None = None
    surge_multiplier: float | None = None
    user_id: str = "anon"


class FeedbackBody(BaseModel):
    text: str
    user_id: str = "anon"
    actual_fare: float | str | None = None
    query_id: str | None = None


def _error(status: int, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def create_app(
    config_dir: str | Path,
    log_path: str | Path,
    feedback_path: str | Path | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    config: AppConfig = load_config(config_dir)
    log = QueryLog(log_path)
    feedback_file = Path(feedback_path) if feedback_path else Path(log_path).with_name(
        "feedback_log.jsonl"
    )
    feedback = FeedbackStore(feedback_file)

    app = FastAPI(title="cabfare", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.query_log = log
    app.state.feedback = feedback

    @app.exception_handler(RequestValidationError)
    async def _invalid_body(_request: Request, exc: RequestValidationError):
        return _error(400, "invalid request body")

    @app.get("/healthz")
    def healthz():
        return PlainTextResponse("ok")

    @app.get("/api/v1/cities")
    def cities():
        payload = {
            "cities": [
                {
                    "code": city.code,
                    "display_name": city.display_name,
                    "currency": city.currency,
                    "providers": {
                        "metered": {
                            "id": city.metered.provider_id,
                            "short_name": city.metered.short_name,
                            "color": city.metered.color,
                        },
                        "flex": {
                            "id": city.flex.provider_id,
                            "short_name": city.flex.short_name,
                            "color": city.flex.color,
                        },
                    },
                    "button_label": f"{city.flex.short_name} or {city.metered.short_name}?",
                }
                for city in config.cities.values()
            ]
        }
        return Response(payload_json(payload), media_type="application/json")

    @app.post("/api/v1/estimate")
    def estimate(body: EstimateBody):
        city = config.city(body.city)
        if city is None:
            return _error(404, f"unknown city {body.city!r}")
        try:
            origin = GeoPoint(body.origin.lat, body.origin.lng)
            destination = GeoPoint(body.destination.lat, body.destination.lng)
        except ValueError as exc:
            return _error(400, str(exc))
        if body.time is not None:
            try:
                submitted_at = parse_rfc3339(body.time)
            except ValueError:
                return _error(400, f"unparseable time {body.time!r}")
        else:
            submitted_at = datetime.now()
        surge = body.surge_multiplier if body.surge_multiplier is not None else city.default_surge
        if surge < 1.0:
            return _error(400, "surge_multiplier must be >= 1.0")

        query = JourneyQuery.create(
            user_id=body.user_id,
            city=city.code,
            origin=origin,
            destination=destination,
            submitted_at=submitted_at,
            surge_multiplier=surge,
        )
        try:
            result = compare(query, city, surge, log=log)
        except RouteNotFound as exc:
            return _error(422, str(exc))
        except ProviderUnavailable as exc:
            return _error(502, str(exc))
        if result.partial:
            # a 200 must correspond to exactly one persisted comparison
            return JSONResponse(
                status_code=502,
                content={
                    "detail": "partial estimate",
                    "failures": [{"provider": p, "error": m} for p, m in result.failures],
                },
            )
        return Response(
            payload_json(result_payload(query, result, city.currency)),
            media_type="application/json",
        )

    @app.get("/api/v1/geocode")
    def geocode(city: str = "", q: str = ""):
        if not q.strip():
            return _error(400, "q must be non-empty")
        runtime = config.city(city)
        if runtime is None:
            return _error(404, f"unknown city {city!r}")
        results = runtime.gazetteer.search(q)
        payload = {
            "results": [
                {"name": e.name, "lat": e.location.lat, "lng": e.location.lng} for e in results
            ]
        }
        return Response(payload_json(payload), media_type="application/json")

    @app.post("/api/v1/feedback")
    def post_feedback(body: FeedbackBody):
        if not body.text.strip():
            return _error(400, "text must be non-empty")
        actual_minor = None
        currency = None
        deviation_minor = None
        if body.actual_fare is not None:
            try:
                minor = Decimal(str(body.actual_fare)) * 100
            except ArithmeticError:
                return _error(400, f"unparseable actual_fare {body.actual_fare!r}")
            if minor != int(minor):
                return _error(400, "actual_fare has sub-minor-unit precision")
            actual_minor = int(minor)
        if body.query_id:
            record = log.find(body.query_id)
            if record is not None and actual_minor is not None:
                currency = record.get("currency")
                winner_amount = next(
                    (
                        e["amount_minor"]
                        for e in record.get("estimates", [])
                        if e.get("provider") == record.get("winner")
                    ),
                    None,
                )
                if winner_amount is not None:
                    deviation_minor = actual_minor - int(winner_amount)
        try:
            feedback_id = feedback.add(
                user_id=body.user_id,
                text=body.text,
                created_at=datetime.now(),
                actual_fare_minor=actual_minor,
                currency=currency,
                query_id=body.query_id,
                deviation_minor=deviation_minor,
            )
        except StorageFailure as exc:
            return _error(500, str(exc))
        content: dict = {"id": feedback_id}
        if deviation_minor is not None:
            content["deviation_minor"] = deviation_minor
        return JSONResponse(status_code=200, content=content)

    @app.get("/api/v1/feedback")
    def list_feedback():
        return JSONResponse(content={"feedback": list(feedback.records())})

    @app.get("/api/v1/stats/savings")
    def stats_savings(
        city: str = "",
        start_raw: str | None = Query(default=None, alias="from"),
        end_raw: str | None = Query(default=None, alias="to"),
    ):
        runtime = config.city(city)
        if runtime is None:
            return _error(404, f"unknown city {city!r}")
        try:
            start = parse_rfc3339(start_raw) if start_raw else None
            end = parse_rfc3339(end_raw) if end_raw else None
        except ValueError:
            return _error(400, "unparseable from/to timestamp")
        summary = log.savings_summary(runtime.code, runtime.currency, start, end)
        payload = {
            "city": runtime.code,
            "currency": runtime.currency,
            "query_count": summary.query_count,
            "mean_savings": summary.mean_savings.major_str,
            "mean_savings_minor": summary.mean_savings.amount_minor,
            "total_savings": summary.total_savings.major_str,
            "total_savings_minor": summary.total_savings.amount_minor,
        }
        return Response(payload_json(payload), media_type="application/json")

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="frontend")

    return app
