"""HTTP service exposing scenarios, weights, and routing over one shared core.

Stateless per request: the scenario catalog and network are loaded once at
startup and never mutated, so responses are deterministic for fixed inputs
and handlers are safe to run concurrently.
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field, field_validator

from .errors import InvalidInputError, NoRouteError, ParseError
from .fusion import LengthMode
from .pipeline import ScenarioCatalog, weights_snapshot
from .routing import load_profile, parse_profile, route_to_geojson, shortest_route


class RouteRequestModel(BaseModel):
    scenario: str
    origin: tuple[float, float] = Field(alias="from")
    destination: tuple[float, float] = Field(alias="to")
    profile: str | dict
    length_mode: Literal["raw", "normalized"] = "raw"

    model_config = {"populate_by_name": True}

    @field_validator("origin", "destination")
    @classmethod
    def _coords_in_range(cls, value: tuple[float, float]) -> tuple[float, float]:
        lat, lon = value
        if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
            raise ValueError(f"coordinates out of range: {value}")
        return value


def create_app(catalog: ScenarioCatalog, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="keliroute", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        diagnostics = [
            {"field": ".".join(str(part) for part in error["loc"]), "message": error["msg"]}
            for error in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"error": "invalid_request", "fields": diagnostics})

    @app.exception_handler(InvalidInputError)
    async def _invalid_input(request: Request, exc: InvalidInputError):
        return JSONResponse(status_code=400, content={"error": "invalid_request", "detail": str(exc)})

    @app.exception_handler(ParseError)
    async def _parse_error(request: Request, exc: ParseError):
        return JSONResponse(status_code=400, content={"error": "invalid_request", "detail": str(exc)})

    @app.get("/api/scenarios")
    def list_scenarios():
        return {"scenarios": catalog.summaries()}

    @app.get("/api/network")
    def get_network():
        from .graph import network_to_geojson

        return network_to_geojson(catalog.network)

    @app.get("/api/weights/{scenario}")
    def get_weights(scenario: str, length_mode: Literal["raw", "normalized"] = "raw"):
        computation = catalog.get(scenario)
        if computation is None:
            return JSONResponse(
                status_code=404, content={"error": "unknown_scenario", "scenario": scenario}
            )
        return weights_snapshot(computation, catalog.network, LengthMode(length_mode))

    @app.post("/api/route")
    def post_route(request: RouteRequestModel):
        computation = catalog.get(request.scenario)
        if computation is None:
            return JSONResponse(
                status_code=404, content={"error": "unknown_scenario", "scenario": request.scenario}
            )
        preference = (
            load_profile(request.profile)
            if isinstance(request.profile, str)
            else parse_profile(request.profile)
        )
        mode = LengthMode(request.length_mode)
        weights = computation.segment_weights(mode)
        try:
            route = shortest_route(
                catalog.network, weights, preference, request.origin, request.destination
            )
        except NoRouteError as exc:
            return JSONResponse(status_code=422, content={"error": "no_route", "detail": str(exc)})
        incomplete = sum(1 for sid in route.segments if weights[sid].data_incomplete)
        return route_to_geojson(route, catalog.network, data_incomplete_count=incomplete)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
