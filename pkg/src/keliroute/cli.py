"""Command-line workflow: ingest, weights, plan, serve, record.

Exit codes are a stable contract: 0 success, 2 input or parse error,
3 no route, 4 transport error.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from .client import EndpointConfig, fetch_live_snapshot
from .errors import (
    BundleError,
    ConfigurationError,
    GraphConstructionError,
    InvalidInputError,
    NoRouteError,
    ParseError,
    TransportError,
    UnknownAttributeError,
)
from .fusion import LengthMode
from .graph import load_network_geojson
from .ingest import parse_scenario_bundle, write_scenario_bundle
from .pipeline import (
    DATA_DIR_ENV,
    ScenarioCatalog,
    compute_scenario,
    default_data_dir,
    scenario_summary,
    weights_snapshot,
)
from .routing import PREFERENCE_DIMENSIONS, load_profile, route_to_geojson, shortest_route

EXIT_INPUT_ERROR = 2
EXIT_NO_ROUTE = 3
EXIT_TRANSPORT_ERROR = 4

_INPUT_ERRORS = (
    ParseError,
    BundleError,
    ConfigurationError,
    GraphConstructionError,
    InvalidInputError,
    UnknownAttributeError,
)


def _exit_codes(command):
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except _INPUT_ERRORS as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT_ERROR)
        except NoRouteError as exc:
            click.echo(f"no route: {exc}", err=True)
            sys.exit(EXIT_NO_ROUTE)
        except TransportError as exc:
            click.echo(f"transport error: {exc}", err=True)
            sys.exit(EXIT_TRANSPORT_ERROR)

    return wrapper


def _resolve_data_path(value: str | None, default_name: str, required: bool) -> Path | None:
    """Fall back to the data directory from $KELIROUTE_DATA when a path is omitted."""
    if value is not None:
        return Path(value)
    data_dir = default_data_dir()
    if data_dir is not None:
        candidate = data_dir / default_name
        if candidate.exists():
            return candidate
    if required:
        raise BundleError(
            f"no --{default_name.split('.')[0]} given and no {default_name} under ${DATA_DIR_ENV}"
        )
    return None


def _resolve_scenario_dir(value: str) -> Path:
    path = Path(value)
    if path.is_dir():
        return path
    data_dir = default_data_dir()
    if data_dir is not None:
        candidate = data_dir / "scenarios" / value
        if candidate.is_dir():
            return candidate
    raise BundleError(f"scenario {value!r} is neither a directory nor a name under ${DATA_DIR_ENV}")


def _parse_coords(raw: str, label: str) -> tuple[float, float]:
    try:
        lat_text, lon_text = raw.split(",")
        lat, lon = float(lat_text), float(lon_text)
    except ValueError:
        raise InvalidInputError(f"--{label} must be 'lat,lon', got {raw!r}") from None
    if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
        raise InvalidInputError(f"--{label}: coordinates out of range: {raw!r}")
    return (lat, lon)


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        click.echo(text, nl=False)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_scenario_against_network(scenario: str, network: str | None, nodes: str | None):
    network_path = _resolve_data_path(network, "network.geojson", required=True)
    nodes_path = _resolve_data_path(nodes, "nodes.geojson", required=False)
    road_network = load_network_geojson(network_path, nodes_path)
    bundle = parse_scenario_bundle(_resolve_scenario_dir(scenario))
    return road_network, compute_scenario(bundle, road_network)


@click.group()
def main():
    """Road-weather aware route planning."""


@main.command()
@click.option("--scenario", required=True, help="Scenario bundle directory or name.")
@_exit_codes
def ingest(scenario):
    """Validate a scenario bundle and report its contents."""
    bundle = parse_scenario_bundle(_resolve_scenario_dir(scenario))
    report = bundle.report
    click.echo(f"scenario:         {bundle.name} (recorded {bundle.recorded_at.isoformat()})")
    click.echo(f"weather stations: {report.weather_station_count}")
    click.echo(f"traffic stations: {report.traffic_station_count}")
    click.echo(f"station metas:    {report.meta_count}")
    click.echo(f"events:           {report.event_count}")
    if report.unknown_sensor_names:
        click.echo(f"unknown sensors:  {', '.join(report.unknown_sensor_names)}")


@main.command()
@click.option("--network", default=None, help="Road network GeoJSON (LineString features).")
@click.option("--nodes", default=None, help="Intersection nodes GeoJSON (Point features).")
@click.option("--scenario", required=True, help="Scenario bundle directory or name.")
@click.option(
    "--length-mode",
    type=click.Choice(["raw", "normalized"]),
    default="raw",
    show_default=True,
)
@click.option("--out", default=None, help="Output path for the weight GeoJSON ('-' = stdout).")
@_exit_codes
def weights(network, nodes, scenario, length_mode, out):
    """Compute per-segment weights and emit them as GeoJSON with a summary."""
    road_network, computation = _load_scenario_against_network(scenario, network, nodes)
    snapshot = weights_snapshot(computation, road_network, LengthMode(length_mode))
    _write_json(out, snapshot)
    summary = snapshot["summary"]
    if out is not None and out != "-":
        click.echo(f"wrote {out}")
        click.echo(f"scenario:       {summary['name']}")
        for label, bounds in summary["dimensions"].items():
            click.echo(f"{label:>8}: min={bounds['min']} max={bounds['max']}")
        click.echo(f"weather spread: {summary['weather_spread']}")
        click.echo(f"incomplete segments: {summary['data_incomplete_segments']}")


@main.command()
@click.option("--network", default=None, help="Road network GeoJSON (LineString features).")
@click.option("--nodes", default=None, help="Intersection nodes GeoJSON (Point features).")
@click.option("--scenario", required=True, help="Scenario bundle directory or name.")
@click.option("--profile", required=True, help="Preset name (teemu/tapio/tuire) or profile JSON.")
@click.option("--from", "origin", required=True, help="Origin as 'lat,lon'.")
@click.option("--to", "destination", required=True, help="Destination as 'lat,lon'.")
@click.option(
    "--length-mode",
    type=click.Choice(["raw", "normalized"]),
    default="raw",
    show_default=True,
)
@click.option("--out", default=None, help="Output path for the route GeoJSON ('-' = stdout).")
@_exit_codes
def plan(network, nodes, scenario, profile, origin, destination, length_mode, out):
    """Compute the preference-weighted route and emit it as GeoJSON."""
    origin_coords = _parse_coords(origin, "from")
    destination_coords = _parse_coords(destination, "to")
    preference = load_profile(profile)
    road_network, computation = _load_scenario_against_network(scenario, network, nodes)
    segment_weights = computation.segment_weights(LengthMode(length_mode))
    route = shortest_route(
        road_network, segment_weights, preference, origin_coords, destination_coords
    )
    incomplete = sum(1 for sid in route.segments if segment_weights[sid].data_incomplete)
    document = route_to_geojson(route, road_network, data_incomplete_count=incomplete)
    _write_json(out, document)
    if out is not None and out != "-":
        click.echo(f"wrote {out}")
    click.echo(f"route: {' -> '.join(route.nodes)}", err=True)
    click.echo(f"total cost:    {route.total_cost:.6f}", err=True)
    click.echo(f"total length:  {route.total_length_m / 1000.0:.2f} km", err=True)
    for label, value in zip(PREFERENCE_DIMENSIONS, route.breakdown):
        click.echo(f"  {label:>8} sum: {value:.6f}", err=True)
    click.echo(f"data-incomplete segments on route: {incomplete}", err=True)


@main.command()
@click.option("--data", default=None, help=f"Data directory (default ${DATA_DIR_ENV}).")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--ui", "ui_dir", default=None, help="Static UI directory to serve at /.")
@_exit_codes
def serve(data, host, port, ui_dir):
    """Serve the HTTP API (and the UI, when built) over a loaded catalog."""
    import uvicorn

    from .service import create_app

    data_dir = Path(data) if data else default_data_dir()
    if data_dir is None:
        raise BundleError(f"no --data given and ${DATA_DIR_ENV} is not set")
    catalog = ScenarioCatalog.from_directory(data_dir)
    if ui_dir is None:
        bundled_ui = Path(__file__).resolve().parent.parent.parent / "webui" / "dist"
        ui_dir = bundled_ui if bundled_ui.is_dir() else None
    app = create_app(catalog, ui_dir)
    click.echo(f"serving {len(catalog.names())} scenarios on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.option("--endpoint", default=None, help="Live HTTP endpoint base URL.")
@click.option("--stations", default=None, help="Comma-separated station ids to poll.")
@click.option("--replay", default=None, help="Recorded message log (JSON lines) to replay.")
@click.option("--out", required=True, help="Output bundle directory.")
@_exit_codes
def record(endpoint, stations, replay, out):
    """Capture a scenario bundle from a live endpoint or a recorded log."""
    if (endpoint is None) == (replay is None):
        raise InvalidInputError("exactly one of --endpoint or --replay is required")
    if endpoint is not None:
        station_ids = tuple(s.strip() for s in (stations or "").split(",") if s.strip())
        source: EndpointConfig | str = EndpointConfig(base_url=endpoint, station_ids=station_ids)
    else:
        source = replay
    bundle = fetch_live_snapshot(source)
    write_scenario_bundle(bundle, out)
    click.echo(
        f"recorded scenario '{bundle.name}': "
        f"{len(bundle.weather_snapshots)} weather, {len(bundle.traffic_snapshots)} traffic, "
        f"{len(bundle.events)} events -> {out}"
    )


if __name__ == "__main__":
    main()
