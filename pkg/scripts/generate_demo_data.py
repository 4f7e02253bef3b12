#!/usr/bin/env python3
"""Regenerate the demo dataset under data/demo.

The network is three corridors between a shared origin and target:

  corridor-a (road 4):  the direct, shortest corridor
  corridor-b (road 86): a western corridor past the storm-scenario weather cell
  corridor-c (road 8):  a long eastern corridor with calm conditions

Scenarios:
  base  - calm weather; a fresh preliminary accident on corridor-a:1, a stale
          one on corridor-b:1, low-severity road work on corridor-c:0; the
          traffic station reports raw speeds and carries an FFS correction;
          the silent station w-bravo falls back to w-alpha.
  storm - heavy rain cell on corridor-b, highest-severity road work blocking
          corridor-a:1 and corridor-a:2.
  quiet - every station reporting, nothing happening.
"""

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "data" / "demo"

ORIGIN = (65.00, 25.50)
TARGET = (64.91, 25.50)

NODES = {
    "origin": ORIGIN,
    "target": TARGET,
    "a1": (64.97, 25.50),
    "a2": (64.94, 25.50),
    "b1": (64.97, 25.43),
    "b2": (64.94, 25.43),
    "c1": (64.97, 25.65),
    "c2": (64.94, 25.65),
}

CORRIDORS = [
    ("corridor-a", 4, [ORIGIN, NODES["a1"], NODES["a2"], TARGET]),
    ("corridor-b", 86, [ORIGIN, NODES["b1"], NODES["b2"], TARGET]),
    ("corridor-c", 8, [ORIGIN, NODES["c1"], NODES["c2"], TARGET]),
]

STATION_META = [
    {"station_id": "w-alpha", "kind": "weather", "lat": 64.955, "lon": 25.52, "road_number": 4},
    {"station_id": "w-bravo", "kind": "weather", "lat": 64.955, "lon": 25.435, "road_number": 86},
    {"station_id": "w-charlie", "kind": "weather", "lat": 64.955, "lon": 25.65, "road_number": 8},
    {
        "station_id": "t-mid",
        "kind": "traffic",
        "lat": 64.955,
        "lon": 25.50,
        "road_number": 4,
        "ffs_dir1": 80,
        "ffs_dir2": 78,
        "capacity_dir1": 1500,
        "capacity_dir2": 1500,
        "direction1_municipality": "Oulu",
        "direction2_municipality": "Kempele",
    },
]

CALM_WEATHER_READINGS = [
    ("surface_condition", 1),        # dry
    ("friction", 0.80),
    ("road_temperature", 14.0),
    ("surface_dew_diff", 5.0),
    ("relative_humidity", 55.0),
    ("precipitation_intensity", 0.0),
    ("precipitation_type", 0),       # dry weather
    ("visible_distance", 20000.0),
    ("air_dew_diff", 8.0),
    ("air_temperature", 15.0),
    ("average_wind", 3.0),
    ("maximum_wind", 5.0),
]

STORM_WEATHER_READINGS = [
    ("surface_condition", 3),        # wet
    ("friction", 0.45),
    ("moisture", 4.0),
    ("road_temperature", 15.0),
    ("relative_humidity", 97.0),
    ("precipitation_intensity", 10.0),
    ("precipitation_type", 3),       # rain
    ("visible_distance", 400.0),
    ("air_dew_diff", 0.4),
    ("air_temperature", 16.0),
    ("average_wind", 17.0),
    ("maximum_wind", 26.0),
]

QUIET_TRAFFIC_READINGS = [
    ("ffs_percent_dir1", 100.0),
    ("ffs_percent_dir2", 100.0),
    ("occupancy_dir1", 5.0),
    ("occupancy_dir2", 5.0),
]

# Hand-checkable values for the golden "base" scenario.
BASE_ALPHA_READINGS = [
    ("TIE_1", 1.0),
    ("TIE_3", 2.0),                  # averaged road temperature: 1.5
    ("friction", 0.455),
    ("surface_condition", 1),        # dry
    ("relative_humidity", 50.0),
    ("air_temperature", 14.0),
    ("average_wind", 10.5),
]

BASE_CHARLIE_READINGS = [
    ("air_temperature", 20.5),
]

BASE_TRAFFIC_READINGS = [
    ("avg_speed_dir1", 45.0),
    ("avg_speed_dir2", 45.0),
    ("occupancy_dir1", 30.0),
]


def station(station_id, lat, lon, readings, recorded_at):
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


def coords_of(station_id):
    return next((m["lat"], m["lon"]) for m in STATION_META if m["station_id"] == station_id)


def write_json(path, payload):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_network():
    features = [
        {
            "type": "Feature",
            "geometry": {
                "type": "LineString",
                "coordinates": [[lon, lat] for lat, lon in coords],
            },
            "properties": {"id": cid, "road_number": road},
        }
        for cid, road, coords in CORRIDORS
    ]
    write_json(ROOT / "network.geojson", {"type": "FeatureCollection", "features": features})

    node_features = [
        {
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [lon, lat]},
            "properties": {"id": nid},
        }
        for nid, (lat, lon) in sorted(NODES.items())
    ]
    write_json(ROOT / "nodes.geojson", {"type": "FeatureCollection", "features": node_features})


def write_scenario(name, recorded_at, weather, traffic, events, overrides=None):
    directory = ROOT / "scenarios" / name
    write_json(directory / "scenario.json", {"name": name, "recorded_at": recorded_at})
    write_json(directory / "weather_stations.json", weather)
    write_json(directory / "traffic_stations.json", traffic)
    write_json(directory / "station_meta.json", STATION_META)
    write_json(directory / "events.json", events)
    if overrides:
        for filename, payload in overrides.items():
            write_json(directory / "overrides" / filename, payload)


def main():
    write_network()

    base_at = "2024-08-20T12:00:00Z"
    write_scenario(
        "base",
        base_at,
        weather=[
            station("w-alpha", *coords_of("w-alpha"), BASE_ALPHA_READINGS, base_at),
            station("w-bravo", *coords_of("w-bravo"), [], base_at),  # silent station
            station("w-charlie", *coords_of("w-charlie"), BASE_CHARLIE_READINGS, base_at),
        ],
        traffic=[station("t-mid", *coords_of("t-mid"), BASE_TRAFFIC_READINGS, base_at)],
        events=[
            {
                "event_id": "acc-fresh",
                "kind": "accident_preliminary",
                "published_at": "2024-08-20T11:50:00Z",
                "segment_ids": ["corridor-a:1"],
                "situation_id": "sit-1",
            },
            {
                "event_id": "acc-stale",
                "kind": "accident_preliminary",
                "published_at": "2024-08-20T11:20:00Z",
                "segment_ids": ["corridor-b:1"],
                "situation_id": "sit-2",
            },
            {
                "event_id": "rw-minor",
                "kind": "road_work",
                "severity": "low",
                "published_at": "2024-08-19T06:00:00Z",
                "segment_ids": ["corridor-c:0"],
            },
        ],
        overrides={
            "ffs_overrides.json": {"t-mid": [60, 58]},
            "assignment_overrides.json": {
                "secondary_weather_station": {"w-bravo": "w-alpha"}
            },
        },
    )

    storm_at = "2024-08-23T15:45:00Z"
    write_scenario(
        "storm",
        storm_at,
        weather=[
            station("w-alpha", *coords_of("w-alpha"), CALM_WEATHER_READINGS, storm_at),
            station("w-bravo", *coords_of("w-bravo"), STORM_WEATHER_READINGS, storm_at),
            station("w-charlie", *coords_of("w-charlie"), CALM_WEATHER_READINGS, storm_at),
        ],
        traffic=[station("t-mid", *coords_of("t-mid"), QUIET_TRAFFIC_READINGS, storm_at)],
        events=[
            {
                "event_id": "rw-blocking",
                "kind": "road_work",
                "severity": "highest",
                "published_at": "2024-08-22T05:00:00Z",
                "segment_ids": ["corridor-a:1", "corridor-a:2"],
            }
        ],
    )

    quiet_at = "2024-10-01T09:00:00Z"
    write_scenario(
        "quiet",
        quiet_at,
        weather=[
            station("w-alpha", *coords_of("w-alpha"), CALM_WEATHER_READINGS, quiet_at),
            station("w-bravo", *coords_of("w-bravo"), CALM_WEATHER_READINGS, quiet_at),
            station("w-charlie", *coords_of("w-charlie"), CALM_WEATHER_READINGS, quiet_at),
        ],
        traffic=[station("t-mid", *coords_of("t-mid"), QUIET_TRAFFIC_READINGS, quiet_at)],
        events=[],
    )
    print(f"demo data written under {ROOT}")


if __name__ == "__main__":
    main()
