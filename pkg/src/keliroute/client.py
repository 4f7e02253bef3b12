"""Live snapshot intake and message-log replay.

A capture source is either a reachable HTTP endpoint or an append-only
message log (one JSON message per line) recorded from a stream. Both produce
the same ScenarioBundle shape as parse_scenario_bundle, so recorded captures
replay byte-identically through write_scenario_bundle.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from .errors import ParseError, TransportError
from .ingest import (
    BundleOverrides,
    ScenarioBundle,
    events_from_records,
    parse_timestamp,
    station_meta_from_records,
    stations_from_records,
    write_scenario_bundle,
)

logger = logging.getLogger(__name__)

MESSAGE_TYPES = frozenset(
    {"scenario", "weather_station", "traffic_station", "station_meta", "event"}
)


@dataclass(frozen=True)
class EndpointConfig:
    """Where and what to poll for a live capture."""

    base_url: str
    station_ids: tuple[str, ...] = ()
    timeout_s: float = 10.0
    headers: dict[str, str] = field(default_factory=dict)


def fetch_live_snapshot(source: EndpointConfig | str | Path) -> ScenarioBundle:
    """Produce a bundle from a live endpoint or a recorded message log."""
    if isinstance(source, EndpointConfig):
        return _fetch_from_endpoint(source)
    return replay_message_log(source)


def replay_message_log(path: str | Path) -> ScenarioBundle:
    """Assemble a bundle from an append-only message log.

    Later messages for the same station or event id replace earlier ones,
    mirroring a stream that continuously refreshes each station's latest
    state. Replay is deterministic: station and event order in the resulting
    bundle is sorted by id.
    """
    path = Path(path)
    if not path.is_file():
        raise TransportError(f"message log not found: {path}")

    name = None
    recorded_at_raw = None
    weather: dict[str, dict] = {}
    traffic: dict[str, dict] = {}
    metas: dict[str, dict] = {}
    events: dict[str, dict] = {}

    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                message = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid message: {exc.msg}", path=str(path), line=lineno)
            mtype = message.get("type")
            if mtype not in MESSAGE_TYPES:
                raise ParseError(f"unknown message type {mtype!r}", path=str(path), line=lineno)
            if mtype == "scenario":
                name = message.get("name")
                recorded_at_raw = message.get("recorded_at")
            else:
                payload = message.get("payload")
                if not isinstance(payload, dict):
                    raise ParseError("message payload must be an object", path=str(path), line=lineno)
                if mtype == "weather_station":
                    weather[str(payload.get("station_id"))] = payload
                elif mtype == "traffic_station":
                    traffic[str(payload.get("station_id"))] = payload
                elif mtype == "station_meta":
                    metas[str(payload.get("station_id"))] = payload
                elif mtype == "event":
                    events[str(payload.get("event_id"))] = payload

    if name is None or recorded_at_raw is None:
        raise ParseError("message log carries no scenario header", path=str(path))

    return _assemble_bundle(
        name,
        recorded_at_raw,
        [weather[k] for k in sorted(weather)],
        [traffic[k] for k in sorted(traffic)],
        [metas[k] for k in sorted(metas)],
        [events[k] for k in sorted(events)],
        source=str(path),
    )


def _fetch_from_endpoint(config: EndpointConfig) -> ScenarioBundle:
    if not config.station_ids:
        raise TransportError("no station ids configured; nothing to record")
    base = config.base_url.rstrip("/")
    try:
        with httpx.Client(timeout=config.timeout_s, headers=config.headers) as client:
            scenario = _get_json(client, f"{base}/scenario")
            metas = _get_json(client, f"{base}/meta")
            events = _get_json(client, f"{base}/events")
            weather, traffic = [], []
            for station_id in config.station_ids:
                payload = _get_json(client, f"{base}/stations/{station_id}")
                kind = payload.get("kind")
                if kind == "weather":
                    weather.append(payload)
                elif kind == "traffic":
                    traffic.append(payload)
                else:
                    raise ParseError(
                        f"station {station_id}: unknown kind {kind!r}", path=config.base_url
                    )
    except httpx.HTTPError as exc:
        raise TransportError(f"endpoint {config.base_url}: {exc}") from exc

    return _assemble_bundle(
        scenario.get("name"),
        scenario.get("recorded_at"),
        weather,
        traffic,
        metas,
        events,
        source=config.base_url,
    )


def _get_json(client: httpx.Client, url: str):
    response = client.get(url)
    if response.status_code != 200:
        raise TransportError(f"GET {url} returned {response.status_code}")
    try:
        return response.json()
    except ValueError as exc:
        raise ParseError(f"non-JSON response from {url}") from exc


def _assemble_bundle(
    name, recorded_at_raw, weather_raw, traffic_raw, metas_raw, events_raw, source: str
) -> ScenarioBundle:
    if not isinstance(name, str) or not name:
        raise ParseError("scenario name missing", path=source)
    recorded_at = parse_timestamp(str(recorded_at_raw), "scenario.recorded_at")

    # shared schema checks: replayed records go through the same validation
    # as directory bundles
    weather = stations_from_records(weather_raw, "weather", where=source)
    traffic = stations_from_records(traffic_raw, "traffic", where=source)
    metas = station_meta_from_records(metas_raw, where=source)
    events = events_from_records(events_raw, where=source)

    return ScenarioBundle(
        name=name,
        recorded_at=recorded_at,
        weather_snapshots=tuple(weather),
        traffic_snapshots=tuple(traffic),
        station_meta=tuple(metas),
        events=tuple(events),
        overrides=BundleOverrides(),
    )


def record_bundle(source: EndpointConfig | str | Path, out_dir: str | Path) -> Path:
    """Capture a snapshot and write it as a parseable scenario bundle."""
    bundle = fetch_live_snapshot(source)
    return write_scenario_bundle(bundle, out_dir)
