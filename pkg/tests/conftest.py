"""Shared fixture builders: scenario bundle directories and small networks."""

import json
from datetime import datetime, timezone

import pytest

NOW = datetime(2024, 10, 15, 8, 30, tzinfo=timezone.utc)
NOW_ISO = "2024-10-15T08:30:00Z"


def station_json(station_id, lat, lon, readings, recorded_at=NOW_ISO):
    return {
        "station_id": station_id,
        "lat": lat,
        "lon": lon,
        "recorded_at": recorded_at,
        "readings": [
            {"sensor_id": i + 1, "name": name, "value": value}
            for i, (name, value) in enumerate(readings)
        ],
    }


def meta_json(station_id, kind, lat, lon, **extra):
    return {"station_id": station_id, "kind": kind, "lat": lat, "lon": lon, **extra}


def write_bundle(
    directory,
    name="test-scenario",
    recorded_at=NOW_ISO,
    weather_stations=(),
    traffic_stations=(),
    station_meta=(),
    events=(),
    overrides=None,
):
    """Write a scenario bundle directory and return its path."""
    directory.mkdir(parents=True, exist_ok=True)

    def dump(filename, payload):
        (directory / filename).write_text(json.dumps(payload, indent=2) + "\n")

    dump("scenario.json", {"name": name, "recorded_at": recorded_at})
    dump("weather_stations.json", list(weather_stations))
    dump("traffic_stations.json", list(traffic_stations))
    dump("station_meta.json", list(station_meta))
    dump("events.json", list(events))
    if overrides:
        (directory / "overrides").mkdir(exist_ok=True)
        for filename, payload in overrides.items():
            dump(f"overrides/{filename}", payload)
    return directory


@pytest.fixture
def two_station_bundle(tmp_path):
    """Minimal valid bundle: one weather and one traffic station, no events."""
    return write_bundle(
        tmp_path / "bundle",
        weather_stations=[
            station_json("w1", 65.0, 25.5, [("road_temperature", 1.5), ("friction", 0.455)])
        ],
        traffic_stations=[station_json("t1", 65.01, 25.52, [("ffs_percent", 90.0)])],
        station_meta=[
            meta_json("w1", "weather", 65.0, 25.5, road_number=4),
            meta_json("t1", "traffic", 65.01, 25.52, road_number=4, ffs_dir1=80, ffs_dir2=78),
        ],
    )
