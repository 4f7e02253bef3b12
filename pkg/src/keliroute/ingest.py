"""Station snapshot, metadata, and traffic event intake.

Parses scenario bundles (frozen captures of one instant) into immutable
records, and canonicalizes raw per-station sensor readings into a clean
attribute map: duplicate sensors feeding the same canonical attribute are
averaged, categorical codes are translated through the configured code
tables, and unmapped sensor names are dropped (but reported).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .errors import BundleError, InvalidInputError, ParseError
from .weights import (
    CoarsePrecipitation,
    PrecipitationType,
    RoadWorkSeverity,
    SurfaceState,
    WeightConfig,
    coarse_precipitation_weight,
    precipitation_type_weight,
    surface_state_weight,
)

logger = logging.getLogger(__name__)

WEATHER = "weather"
TRAFFIC = "traffic"
STATION_KINDS = frozenset({WEATHER, TRAFFIC})

ROAD_WORK = "road_work"
ACCIDENT_PRELIMINARY = "accident_preliminary"
ACCIDENT_REPORT = "accident_report"
GENERAL_ACCIDENT = "general_accident"
ENDED = "ended"
EVENT_KINDS = frozenset({ROAD_WORK, ACCIDENT_PRELIMINARY, ACCIDENT_REPORT, GENERAL_ACCIDENT, ENDED})

# Preliminary accident reports go stale after this long without follow-up.
PRELIMINARY_ACCIDENT_WINDOW = timedelta(minutes=30)

# Canonical numeric attribute vocabulary (17 ids). The four point-difference
# ids and the freezing point feed derived factors; the rest scale directly.
CANONICAL_NUMERIC_IDS = frozenset(
    {
        "friction",
        "moisture",
        "snow_depth",
        "road_temperature",
        "freezing_point",
        "surface_dew_diff",
        "surface_frost_diff",
        "relative_humidity",
        "precipitation_intensity",
        "visible_distance",
        "air_dew_diff",
        "air_frost_diff",
        "air_temperature",
        "average_wind",
        "maximum_wind",
        "ffs_percent",
        "occupancy_percent",
    }
)
CANONICAL_CATEGORICAL_IDS = frozenset(
    {"surface_condition", "precipitation_type", "coarse_precipitation"}
)
# Auxiliary measurements that do not map to a factor themselves; average_speed
# (km/h) lets the pipeline derive ffs_percent from station metadata.
AUX_NUMERIC_IDS = frozenset({"average_speed"})

# Sensor-name mapping defaults: canonical ids map to themselves, plus the
# duplicate and per-direction names Finnish road-weather feeds are known to use.
DEFAULT_SENSOR_MAPPING: dict[str, str] = {
    **{name: name for name in CANONICAL_NUMERIC_IDS},
    **{name: name for name in CANONICAL_CATEGORICAL_IDS},
    **{name: name for name in AUX_NUMERIC_IDS},
    "TIE_1": "road_temperature",
    "TIE_2": "road_temperature",
    "TIE_3": "road_temperature",
    "TIE_4": "road_temperature",
    "KELI_1": "surface_condition",
    "KELI_2": "surface_condition",
    "ffs_percent_dir1": "ffs_percent",
    "ffs_percent_dir2": "ffs_percent",
    "occupancy_dir1": "occupancy_percent",
    "occupancy_dir2": "occupancy_percent",
    "avg_speed_dir1": "average_speed",
    "avg_speed_dir2": "average_speed",
}


@dataclass(frozen=True)
class SensorReading:
    sensor_id: int
    name: str
    value: float
    unit: str | None = None
    measured_at: datetime | None = None

    def __post_init__(self) -> None:
        if self.sensor_id < 1:
            raise InvalidInputError(f"sensor_id must be >= 1, got {self.sensor_id}")
        if not _finite(self.value):
            raise InvalidInputError(f"reading '{self.name}': value must be finite")


@dataclass(frozen=True)
class StationSnapshot:
    station_id: str
    kind: str
    coords: tuple[float, float]  # (lat, lon)
    readings: tuple[SensorReading, ...]
    recorded_at: datetime

    def __post_init__(self) -> None:
        if self.kind not in STATION_KINDS:
            raise InvalidInputError(f"station kind must be one of {sorted(STATION_KINDS)}")
        lat, lon = self.coords
        if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
            raise InvalidInputError(f"station {self.station_id}: coords out of range {self.coords}")


@dataclass(frozen=True)
class StationMeta:
    station_id: str
    kind: str
    coords: tuple[float, float]
    road_number: int | None = None
    ffs_dir1: float | None = None
    ffs_dir2: float | None = None
    capacity_dir1: float | None = None
    capacity_dir2: float | None = None
    direction1_municipality: str | None = None
    direction2_municipality: str | None = None

    def __post_init__(self) -> None:
        for label in ("ffs_dir1", "ffs_dir2", "capacity_dir1", "capacity_dir2"):
            value = getattr(self, label)
            if value is not None and value <= 0:
                raise InvalidInputError(f"station {self.station_id}: {label} must be positive")

    def mean_ffs(self) -> float | None:
        present = [v for v in (self.ffs_dir1, self.ffs_dir2) if v is not None]
        return sum(present) / len(present) if present else None


@dataclass(frozen=True)
class TrafficEvent:
    event_id: str
    kind: str
    published_at: datetime
    severity: RoadWorkSeverity | None = None
    affected_segments: tuple[str, ...] = ()
    geometry: tuple[tuple[float, float], ...] = ()
    situation_id: str | None = None
    superseded_by: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in EVENT_KINDS:
            raise InvalidInputError(f"event kind must be one of {sorted(EVENT_KINDS)}")
        if self.kind == ROAD_WORK and self.severity is None:
            raise InvalidInputError(f"event {self.event_id}: road work needs a severity")
        if self.kind != ROAD_WORK and self.severity is not None:
            raise InvalidInputError(f"event {self.event_id}: only road work carries severity")


@dataclass(frozen=True)
class CanonicalAttributes:
    """Per-station attribute map after duplicate averaging and code translation."""

    values: dict[str, float] = field(default_factory=dict)
    surface_state: SurfaceState | None = None
    precipitation_type: PrecipitationType | None = None
    coarse_precipitation: CoarsePrecipitation | None = None

    def get(self, attribute_id: str) -> float | None:
        return self.values.get(attribute_id)


@dataclass(frozen=True)
class BundleOverrides:
    sensor_mapping: dict[str, str] = field(default_factory=dict)
    ffs_overrides: dict[str, tuple[float, float]] = field(default_factory=dict)
    weight_config: WeightConfig | None = None
    forced_weather_station: dict[str, str] = field(default_factory=dict)
    forced_traffic_station: dict[str, str] = field(default_factory=dict)
    secondary_weather_station: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class ParseReport:
    weather_station_count: int
    traffic_station_count: int
    meta_count: int
    event_count: int
    unknown_sensor_names: tuple[str, ...]


@dataclass(frozen=True)
class ScenarioBundle:
    name: str
    recorded_at: datetime
    weather_snapshots: tuple[StationSnapshot, ...]
    traffic_snapshots: tuple[StationSnapshot, ...]
    station_meta: tuple[StationMeta, ...]
    events: tuple[TrafficEvent, ...]
    overrides: BundleOverrides = field(default_factory=BundleOverrides)
    report: ParseReport | None = None

    @property
    def snapshots(self) -> tuple[StationSnapshot, ...]:
        return self.weather_snapshots + self.traffic_snapshots

    def sensor_mapping(self) -> dict[str, str]:
        mapping = dict(DEFAULT_SENSOR_MAPPING)
        mapping.update(self.overrides.sensor_mapping)
        return mapping


def _finite(value: float) -> bool:
    return value == value and value not in (float("inf"), float("-inf"))


def parse_timestamp(raw: str, where: str = "timestamp") -> datetime:
    """Parse an ISO-8601 timestamp; naive values are taken as UTC."""
    try:
        ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except (ValueError, AttributeError) as exc:
        raise ParseError(f"{where}: invalid timestamp {raw!r}") from exc
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


# --------------------------------------------------------------------------
# Scenario bundle I/O
# --------------------------------------------------------------------------

_MANDATORY_FILES = (
    "scenario.json",
    "weather_stations.json",
    "traffic_stations.json",
    "station_meta.json",
    "events.json",
)


def parse_scenario_bundle(directory: str | Path) -> ScenarioBundle:
    """Parse a scenario bundle directory into an immutable ScenarioBundle.

    Raises BundleError when a mandatory file is missing and ParseError (with
    file context) when a file cannot be decoded or fails schema checks.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise BundleError(f"bundle directory not found: {directory}")
    for name in _MANDATORY_FILES:
        if not (directory / name).is_file():
            raise BundleError(f"bundle {directory}: missing mandatory file {name}")

    scenario_raw = _load_json(directory / "scenario.json")
    name = _expect(scenario_raw, "name", str, directory / "scenario.json")
    recorded_at = parse_timestamp(
        _expect(scenario_raw, "recorded_at", str, directory / "scenario.json"),
        "scenario.recorded_at",
    )

    weather = _parse_stations(directory / "weather_stations.json", WEATHER)
    traffic = _parse_stations(directory / "traffic_stations.json", TRAFFIC)
    metas = _parse_station_meta(directory / "station_meta.json")
    events = _parse_events(directory / "events.json")
    overrides = _parse_overrides(directory / "overrides")

    mapping = dict(DEFAULT_SENSOR_MAPPING)
    mapping.update(overrides.sensor_mapping)
    unknown = sorted(
        {
            reading.name
            for snapshot in weather + traffic
            for reading in snapshot.readings
            if reading.name not in mapping
        }
    )
    for sensor_name in unknown:
        logger.info("bundle %s: unknown sensor name %r retained", name, sensor_name)

    report = ParseReport(
        weather_station_count=len(weather),
        traffic_station_count=len(traffic),
        meta_count=len(metas),
        event_count=len(events),
        unknown_sensor_names=tuple(unknown),
    )
    return ScenarioBundle(
        name=name,
        recorded_at=recorded_at,
        weather_snapshots=tuple(weather),
        traffic_snapshots=tuple(traffic),
        station_meta=tuple(metas),
        events=tuple(events),
        overrides=overrides,
        report=report,
    )


def write_scenario_bundle(bundle: ScenarioBundle, directory: str | Path) -> Path:
    """Serialize a bundle back to the on-disk layout (canonical JSON)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    def dump(name: str, payload) -> None:
        (directory / name).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    dump("scenario.json", {"name": bundle.name, "recorded_at": format_timestamp(bundle.recorded_at)})
    dump("weather_stations.json", [_station_to_json(s) for s in bundle.weather_snapshots])
    dump("traffic_stations.json", [_station_to_json(s) for s in bundle.traffic_snapshots])
    dump("station_meta.json", [_meta_to_json(m) for m in bundle.station_meta])
    dump("events.json", [_event_to_json(e) for e in bundle.events])

    ov = bundle.overrides
    if ov.sensor_mapping or ov.ffs_overrides or ov.forced_weather_station or ov.forced_traffic_station or ov.secondary_weather_station:
        (directory / "overrides").mkdir(exist_ok=True)
        if ov.sensor_mapping:
            dump("overrides/sensor_mapping.json", ov.sensor_mapping)
        if ov.ffs_overrides:
            dump(
                "overrides/ffs_overrides.json",
                {sid: list(pair) for sid, pair in ov.ffs_overrides.items()},
            )
        assignment = {}
        if ov.forced_weather_station:
            assignment["forced_weather_station"] = ov.forced_weather_station
        if ov.forced_traffic_station:
            assignment["forced_traffic_station"] = ov.forced_traffic_station
        if ov.secondary_weather_station:
            assignment["secondary_weather_station"] = ov.secondary_weather_station
        if assignment:
            dump("overrides/assignment_overrides.json", assignment)
    return directory


def _load_json(path: Path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path=str(path), line=exc.lineno) from exc
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", path=str(path)) from exc


def _expect(obj: dict, key: str, typ, path: Path):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing required key '{key}'", path=str(path))
    value = obj[key]
    if typ is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"key '{key}' must be a number, got {value!r}", path=str(path))
        return float(value)
    if not isinstance(value, typ):
        raise ParseError(f"key '{key}' must be {typ.__name__}, got {value!r}", path=str(path))
    return value


def _parse_stations(path: Path, kind: str) -> list[StationSnapshot]:
    return stations_from_records(_load_json(path), kind, where=str(path))


def stations_from_records(raw, kind: str, where: str) -> list[StationSnapshot]:
    path = Path(where)
    if not isinstance(raw, list):
        raise ParseError("expected a list of stations", path=str(path))
    snapshots = []
    for entry in raw:
        readings = []
        for r in entry.get("readings", []):
            measured_at = (
                parse_timestamp(r["measured_at"], "reading.measured_at")
                if r.get("measured_at")
                else None
            )
            try:
                readings.append(
                    SensorReading(
                        sensor_id=int(_expect(r, "sensor_id", float, path)),
                        name=_expect(r, "name", str, path),
                        value=_expect(r, "value", float, path),
                        unit=r.get("unit"),
                        measured_at=measured_at,
                    )
                )
            except InvalidInputError as exc:
                raise ParseError(str(exc), path=str(path)) from exc
        try:
            snapshots.append(
                StationSnapshot(
                    station_id=str(_expect(entry, "station_id", (str, int), path)),
                    kind=kind,
                    coords=(_expect(entry, "lat", float, path), _expect(entry, "lon", float, path)),
                    readings=tuple(readings),
                    recorded_at=parse_timestamp(
                        _expect(entry, "recorded_at", str, path), "station.recorded_at"
                    ),
                )
            )
        except InvalidInputError as exc:
            raise ParseError(str(exc), path=str(path)) from exc
    return snapshots


def _parse_station_meta(path: Path) -> list[StationMeta]:
    return station_meta_from_records(_load_json(path), where=str(path))


def station_meta_from_records(raw, where: str) -> list[StationMeta]:
    path = Path(where)
    if not isinstance(raw, list):
        raise ParseError("expected a list of station metadata entries", path=str(path))
    metas = []
    for entry in raw:
        kind = _expect(entry, "kind", str, path)
        if kind not in STATION_KINDS:
            raise ParseError(f"unknown station kind {kind!r}", path=str(path))

        def opt_num(key: str) -> float | None:
            return float(entry[key]) if entry.get(key) is not None else None

        try:
            metas.append(
                StationMeta(
                    station_id=str(_expect(entry, "station_id", (str, int), path)),
                    kind=kind,
                    coords=(_expect(entry, "lat", float, path), _expect(entry, "lon", float, path)),
                    road_number=int(entry["road_number"]) if entry.get("road_number") is not None else None,
                    ffs_dir1=opt_num("ffs_dir1"),
                    ffs_dir2=opt_num("ffs_dir2"),
                    capacity_dir1=opt_num("capacity_dir1"),
                    capacity_dir2=opt_num("capacity_dir2"),
                    direction1_municipality=entry.get("direction1_municipality"),
                    direction2_municipality=entry.get("direction2_municipality"),
                )
            )
        except InvalidInputError as exc:
            raise ParseError(str(exc), path=str(path)) from exc
    return metas


def _parse_events(path: Path) -> list[TrafficEvent]:
    return events_from_records(_load_json(path), where=str(path))


def events_from_records(raw, where: str) -> list[TrafficEvent]:
    path = Path(where)
    if not isinstance(raw, list):
        raise ParseError("expected a list of events", path=str(path))
    events = []
    for entry in raw:
        kind = _expect(entry, "kind", str, path)
        if kind not in EVENT_KINDS:
            raise ParseError(f"unknown event kind {kind!r}", path=str(path))
        severity = None
        if entry.get("severity") is not None:
            try:
                severity = RoadWorkSeverity(entry["severity"])
            except ValueError:
                raise ParseError(f"unknown severity {entry['severity']!r}", path=str(path)) from None
        try:
            events.append(
                TrafficEvent(
                    event_id=str(_expect(entry, "event_id", (str, int), path)),
                    kind=kind,
                    published_at=parse_timestamp(
                        _expect(entry, "published_at", str, path), "event.published_at"
                    ),
                    severity=severity,
                    affected_segments=tuple(str(s) for s in entry.get("segment_ids", [])),
                    geometry=tuple(
                        (float(p[0]), float(p[1])) for p in entry.get("geometry", [])
                    ),
                    situation_id=entry.get("situation_id"),
                    superseded_by=entry.get("superseded_by"),
                )
            )
        except InvalidInputError as exc:
            raise ParseError(str(exc), path=str(path)) from exc
    return events


def _parse_overrides(directory: Path) -> BundleOverrides:
    if not directory.is_dir():
        return BundleOverrides()
    sensor_mapping: dict[str, str] = {}
    ffs_overrides: dict[str, tuple[float, float]] = {}
    weight_config = None
    forced_weather: dict[str, str] = {}
    forced_traffic: dict[str, str] = {}
    secondary: dict[str, str] = {}

    mapping_path = directory / "sensor_mapping.json"
    if mapping_path.is_file():
        raw = _load_json(mapping_path)
        known = CANONICAL_NUMERIC_IDS | CANONICAL_CATEGORICAL_IDS | AUX_NUMERIC_IDS
        for sensor_name, canonical in raw.items():
            if canonical not in known:
                raise ParseError(
                    f"sensor mapping targets unknown canonical id {canonical!r}",
                    path=str(mapping_path),
                )
            sensor_mapping[str(sensor_name)] = str(canonical)

    ffs_path = directory / "ffs_overrides.json"
    if ffs_path.is_file():
        raw = _load_json(ffs_path)
        for station_id, pair in raw.items():
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(
                    f"ffs override for {station_id} must be [ffs_dir1, ffs_dir2]",
                    path=str(ffs_path),
                )
            ffs_overrides[str(station_id)] = (float(pair[0]), float(pair[1]))

    codes_path = directory / "code_tables.json"
    if codes_path.is_file():
        weight_config = WeightConfig.from_file(codes_path)

    assignment_path = directory / "assignment_overrides.json"
    if assignment_path.is_file():
        raw = _load_json(assignment_path)
        forced_weather = {str(k): str(v) for k, v in raw.get("forced_weather_station", {}).items()}
        forced_traffic = {str(k): str(v) for k, v in raw.get("forced_traffic_station", {}).items()}
        secondary = {str(k): str(v) for k, v in raw.get("secondary_weather_station", {}).items()}

    return BundleOverrides(
        sensor_mapping=sensor_mapping,
        ffs_overrides=ffs_overrides,
        weight_config=weight_config,
        forced_weather_station=forced_weather,
        forced_traffic_station=forced_traffic,
        secondary_weather_station=secondary,
    )


def _station_to_json(snapshot: StationSnapshot) -> dict:
    return {
        "station_id": snapshot.station_id,
        "lat": snapshot.coords[0],
        "lon": snapshot.coords[1],
        "recorded_at": format_timestamp(snapshot.recorded_at),
        "readings": [
            {
                "sensor_id": r.sensor_id,
                "name": r.name,
                "value": r.value,
                **({"unit": r.unit} if r.unit else {}),
                **({"measured_at": format_timestamp(r.measured_at)} if r.measured_at else {}),
            }
            for r in snapshot.readings
        ],
    }


def _meta_to_json(meta: StationMeta) -> dict:
    out: dict = {
        "station_id": meta.station_id,
        "kind": meta.kind,
        "lat": meta.coords[0],
        "lon": meta.coords[1],
    }
    for key in (
        "road_number",
        "ffs_dir1",
        "ffs_dir2",
        "capacity_dir1",
        "capacity_dir2",
        "direction1_municipality",
        "direction2_municipality",
    ):
        value = getattr(meta, key)
        if value is not None:
            out[key] = value
    return out


def _event_to_json(event: TrafficEvent) -> dict:
    out: dict = {
        "event_id": event.event_id,
        "kind": event.kind,
        "published_at": format_timestamp(event.published_at),
    }
    if event.severity is not None:
        out["severity"] = event.severity.value
    if event.affected_segments:
        out["segment_ids"] = list(event.affected_segments)
    if event.geometry:
        out["geometry"] = [[lat, lon] for lat, lon in event.geometry]
    if event.situation_id is not None:
        out["situation_id"] = event.situation_id
    if event.superseded_by is not None:
        out["superseded_by"] = event.superseded_by
    return out


# --------------------------------------------------------------------------
# Canonicalization
# --------------------------------------------------------------------------

def canonicalize(
    readings: list[SensorReading] | tuple[SensorReading, ...],
    mapping: dict[str, str] | None = None,
    config: WeightConfig | None = None,
) -> CanonicalAttributes:
    """Collapse raw readings into one value per canonical attribute.

    Duplicate sensors feeding the same numeric id are arithmetic-averaged;
    categorical duplicates resolve to the worst (highest-weight) state.
    Unmapped names and untranslatable codes are dropped.
    """
    mapping = DEFAULT_SENSOR_MAPPING if mapping is None else mapping
    config = config or WeightConfig.default()

    numeric: dict[str, list[float]] = {}
    surface_states: list[SurfaceState] = []
    precipitation_types: list[PrecipitationType] = []
    coarse_types: list[CoarsePrecipitation] = []

    for reading in readings:
        canonical = mapping.get(reading.name)
        if canonical is None:
            logger.debug("dropping unmapped sensor %r", reading.name)
            continue
        if canonical == "surface_condition":
            state = config.surface_codes.get(int(reading.value))
            if state is None:
                logger.debug("dropping unknown surface code %r", reading.value)
            else:
                surface_states.append(state)
        elif canonical == "precipitation_type":
            ptype = config.precipitation_codes.get(int(reading.value))
            if ptype is None:
                logger.debug("dropping unknown precipitation code %r", reading.value)
            else:
                precipitation_types.append(ptype)
        elif canonical == "coarse_precipitation":
            coarse = config.coarse_precipitation_codes.get(int(reading.value))
            if coarse is None:
                logger.debug("dropping unknown coarse precipitation code %r", reading.value)
            else:
                coarse_types.append(coarse)
        else:
            numeric.setdefault(canonical, []).append(reading.value)

    values = {attr: sum(vals) / len(vals) for attr, vals in numeric.items()}
    return CanonicalAttributes(
        values=values,
        surface_state=max(surface_states, key=surface_state_weight) if surface_states else None,
        precipitation_type=(
            max(precipitation_types, key=precipitation_type_weight) if precipitation_types else None
        ),
        coarse_precipitation=(
            max(coarse_types, key=coarse_precipitation_weight) if coarse_types else None
        ),
    )


def resolve_precipitation(
    attrs: CanonicalAttributes,
) -> PrecipitationType | CoarsePrecipitation | None:
    """Prefer the detailed precipitation type; fall back to the coarse class."""
    if attrs.precipitation_type is not None:
        return attrs.precipitation_type
    return attrs.coarse_precipitation


def resolve_point_difference(
    attrs: CanonicalAttributes, context: str, reference_temp: float | None
) -> float | None:
    """Pick the dew- or frost-point difference for the given context.

    Above freezing the dew-point difference is used; at or below freezing the
    frost-point difference, falling back to dew when frost is absent. When no
    reference temperature is known the dew-then-frost order applies.
    """
    if context not in ("surface", "air"):
        raise InvalidInputError(f"context must be 'surface' or 'air', got {context!r}")
    dew = attrs.get(f"{context}_dew_diff")
    frost = attrs.get(f"{context}_frost_diff")
    if dew is None and frost is None:
        return None
    if reference_temp is not None and not _finite(reference_temp):
        raise InvalidInputError("reference_temp must be finite when differences are present")
    if reference_temp is not None and reference_temp <= 0.0:
        return frost if frost is not None else dew
    return dew if dew is not None else frost


def freezing_point_delta(surface_temp: float, freezing_point: float) -> float:
    """Margin between the road surface temperature and its freezing point."""
    if not _finite(surface_temp) or not _finite(freezing_point):
        raise InvalidInputError("freezing_point_delta needs finite inputs")
    return surface_temp - freezing_point


# --------------------------------------------------------------------------
# Event handling
# --------------------------------------------------------------------------

def _situation_key(event: TrafficEvent) -> tuple:
    # Events without an explicit situation id are linked by identical coverage.
    if event.situation_id is not None:
        return ("sid", event.situation_id)
    return ("geo", tuple(sorted(event.affected_segments)), event.geometry)


def accident_active(
    events: list[TrafficEvent] | tuple[TrafficEvent, ...], now: datetime
) -> dict[str, bool]:
    """Per-segment accident state at time ``now``.

    A segment counts as having an accident when (a) a preliminary report for
    it was published within the last 30 minutes, or (b) an accident report or
    general accident announcement exists with no later all-clear for the same
    situation. Returns an entry for every segment any accident event touches.
    """
    ended_at: dict[tuple, datetime] = {}
    for event in events:
        if event.kind == ENDED:
            key = _situation_key(event)
            if key not in ended_at or event.published_at > ended_at[key]:
                ended_at[key] = event.published_at

    result: dict[str, bool] = {}
    for event in events:
        if event.kind not in (ACCIDENT_PRELIMINARY, ACCIDENT_REPORT, GENERAL_ACCIDENT):
            continue
        cleared = False
        key = _situation_key(event)
        if key in ended_at and ended_at[key] >= event.published_at:
            cleared = True
        if event.kind == ACCIDENT_PRELIMINARY:
            active = not cleared and (now - event.published_at) <= PRELIMINARY_ACCIDENT_WINDOW
        else:
            active = not cleared
        for segment_id in event.affected_segments:
            result[segment_id] = result.get(segment_id, False) or active
    return result


def roadwork_severity_for_segment(
    events: list[TrafficEvent] | tuple[TrafficEvent, ...], segment_id: str
) -> RoadWorkSeverity:
    """Worst road work severity covering the segment; working hours are ignored."""
    severities = [
        e.severity
        for e in events
        if e.kind == ROAD_WORK and e.severity is not None and segment_id in e.affected_segments
    ]
    if not severities:
        return RoadWorkSeverity.NONE
    from .weights import road_work_weight

    return max(severities, key=road_work_weight)


def apply_ffs_correction(
    meta: StationMeta, overrides: dict[str, tuple[float, float]]
) -> StationMeta:
    """Replace the station's free-flow speeds where an override exists."""
    pair = overrides.get(meta.station_id)
    if pair is None:
        return meta
    ffs1, ffs2 = pair
    if ffs1 <= 0 or ffs2 <= 0:
        logger.warning(
            "ignoring non-positive FFS override %r for station %s", pair, meta.station_id
        )
        return meta
    return replace(meta, ffs_dir1=ffs1, ffs_dir2=ffs2)


def warn_unknown_ffs_overrides(
    metas: list[StationMeta] | tuple[StationMeta, ...],
    overrides: dict[str, tuple[float, float]],
) -> list[str]:
    """Log and return override keys that match no known station."""
    known = {m.station_id for m in metas}
    unknown = sorted(set(overrides) - known)
    for station_id in unknown:
        logger.warning("FFS override for unknown station %s ignored", station_id)
    return unknown
