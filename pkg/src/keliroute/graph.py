"""Routable road network construction.

Pipeline: raw road polylines are split wherever a declared intersection node
touches them, the pieces become undirected edges between synthesized (or
declared) nodes, and each segment gets a weather and a traffic station
assigned by proximity, with optional manual overrides.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigurationError, GraphConstructionError, InvalidInputError, ParseError
from .geo import (
    LatLon,
    haversine_m,
    nearest_on_polyline,
    polyline_length_m,
    polyline_midpoint,
)
from .ingest import StationMeta, TRAFFIC, WEATHER

logger = logging.getLogger(__name__)

DEFAULT_SNAP_TOLERANCE_M = 1.0

# Endpoints closer than this collapse into one synthesized node (~1 cm).
_COORD_KEY_DECIMALS = 7


@dataclass(frozen=True)
class Node:
    id: str
    coords: LatLon


@dataclass(frozen=True)
class RawPolyline:
    """An unsplit input road geometry."""

    id: str
    road_number: int | None
    geometry: tuple[LatLon, ...]


@dataclass(frozen=True)
class RoadSegment:
    id: str
    road_number: int | None
    geometry: tuple[LatLon, ...]
    length_m: float
    from_node: str | None = None
    to_node: str | None = None

    def midpoint(self) -> LatLon:
        return polyline_midpoint(list(self.geometry))


@dataclass(frozen=True)
class RoadNetwork:
    nodes: dict[str, Node]
    segments: dict[str, RoadSegment]
    adjacency: dict[str, tuple[str, ...]]

    def incident_segments(self, node_id: str) -> tuple[str, ...]:
        return self.adjacency.get(node_id, ())

    def other_end(self, segment_id: str, node_id: str) -> str:
        segment = self.segments[segment_id]
        return segment.to_node if segment.from_node == node_id else segment.from_node


@dataclass(frozen=True)
class SegmentStations:
    weather_station_id: str
    same_road: bool
    traffic_station_id: str
    secondary_weather_station_id: str | None = None


StationAssignment = dict[str, SegmentStations]


# --------------------------------------------------------------------------
# Splitting
# --------------------------------------------------------------------------

def split_at_nodes(
    polylines: list[RawPolyline],
    node_points: list[Node],
    snap_tolerance_m: float = DEFAULT_SNAP_TOLERANCE_M,
) -> list[RoadSegment]:
    """Cut every polyline at the node locations that touch it.

    A node within ``snap_tolerance_m`` of a vertex splits at that vertex; a
    node projecting onto a chord interior inserts the projected point. Nodes
    at a polyline's own endpoints never split. Piece ids are deterministic:
    the input id when the polyline stays whole, ``{id}:{k}`` otherwise.
    """
    if snap_tolerance_m <= 0:
        raise InvalidInputError("snap_tolerance_m must be positive")

    segments: list[RoadSegment] = []
    for polyline in polylines:
        geometry = list(polyline.geometry)
        if len(geometry) < 2 or polyline_length_m(geometry) == 0.0:
            logger.warning("skipping degenerate polyline %s", polyline.id)
            continue

        cuts = _collect_cuts(geometry, node_points, snap_tolerance_m)
        pieces = _cut_geometry(geometry, cuts)
        if len(pieces) == 1:
            segments.append(_piece_to_segment(polyline, polyline.id, pieces[0]))
        else:
            for k, piece in enumerate(pieces):
                segments.append(_piece_to_segment(polyline, f"{polyline.id}:{k}", piece))
    return segments


def _piece_to_segment(polyline: RawPolyline, piece_id: str, piece: list[LatLon]) -> RoadSegment:
    return RoadSegment(
        id=piece_id,
        road_number=polyline.road_number,
        geometry=tuple(piece),
        length_m=polyline_length_m(piece),
    )


def _collect_cuts(
    geometry: list[LatLon], node_points: list[Node], tolerance_m: float
) -> list[tuple[int, float, LatLon]]:
    """Cut positions as (chord_index, t, point); vertices are (index, 0.0)."""
    cuts: list[tuple[int, float, LatLon]] = []
    last_vertex = len(geometry) - 1
    for node in sorted(node_points, key=lambda n: n.id):
        dist, chord_i, t, point = nearest_on_polyline(geometry, node.coords)
        if dist > tolerance_m:
            continue
        # snap to an existing vertex when the projection lands next to one
        vertex_index: int | None = None
        if haversine_m(point, geometry[chord_i]) <= tolerance_m:
            vertex_index = chord_i
        elif haversine_m(point, geometry[chord_i + 1]) <= tolerance_m:
            vertex_index = chord_i + 1
        if vertex_index is not None:
            if vertex_index in (0, last_vertex):
                continue  # polyline endpoint is already a boundary
            candidate = (vertex_index, 0.0, geometry[vertex_index])
        else:
            candidate = (chord_i, t, point)
        if any(haversine_m(candidate[2], existing[2]) <= tolerance_m for existing in cuts):
            continue  # two nodes marking the same spot
        cuts.append(candidate)
    cuts.sort(key=lambda c: (c[0], c[1]))
    return cuts


def _cut_geometry(geometry: list[LatLon], cuts: list[tuple[int, float, LatLon]]) -> list[list[LatLon]]:
    pieces: list[list[LatLon]] = []
    current: list[LatLon] = [geometry[0]]
    ci = 0
    for j in range(len(geometry) - 1):
        while ci < len(cuts) and cuts[ci][0] == j and cuts[ci][1] == 0.0:
            if j > 0:
                pieces.append(current)
                current = [geometry[j]]
            ci += 1
        while ci < len(cuts) and cuts[ci][0] == j:
            point = cuts[ci][2]
            current.append(point)
            pieces.append(current)
            current = [point]
            ci += 1
        current.append(geometry[j + 1])
    pieces.append(current)
    return pieces


# --------------------------------------------------------------------------
# Graph construction
# --------------------------------------------------------------------------

def build_graph(
    segments: list[RoadSegment],
    node_points: list[Node] | None = None,
    snap_tolerance_m: float = DEFAULT_SNAP_TOLERANCE_M,
) -> RoadNetwork:
    """Wire segments into an undirected network.

    Endpoints within the snap tolerance of a declared node adopt its id and
    coordinates; remaining endpoints become synthesized nodes keyed by
    coordinate. Duplicate segment ids are an error.
    """
    seen_ids: set[str] = set()
    for segment in segments:
        if segment.id in seen_ids:
            raise GraphConstructionError(f"duplicate segment id {segment.id!r}")
        seen_ids.add(segment.id)

    declared = sorted(node_points or [], key=lambda n: n.id)

    def resolve_endpoint(coords: LatLon) -> tuple[str, LatLon] | None:
        best: tuple[float, str, LatLon] | None = None
        for node in declared:
            dist = haversine_m(coords, node.coords)
            if dist <= snap_tolerance_m and (best is None or dist < best[0]):
                best = (dist, node.id, node.coords)
        if best is None:
            return None
        return best[1], best[2]

    nodes: dict[str, Node] = {}

    # First pass: collect synthesized coordinates in deterministic order.
    pending: set[tuple[float, float]] = set()
    for segment in segments:
        for coords in (segment.geometry[0], segment.geometry[-1]):
            if resolve_endpoint(coords) is None:
                pending.add(_coord_key(coords))
    synthetic = {key: f"x{index:05d}" for index, key in enumerate(sorted(pending))}

    wired: list[RoadSegment] = []
    for segment in sorted(segments, key=lambda s: s.id):
        ids = []
        for coords in (segment.geometry[0], segment.geometry[-1]):
            resolved = resolve_endpoint(coords)
            if resolved is not None:
                node_id, node_coords = resolved
            else:
                node_id, node_coords = synthetic[_coord_key(coords)], coords
            if node_id not in nodes:
                nodes[node_id] = Node(id=node_id, coords=node_coords)
            ids.append(node_id)
        wired.append(replace(segment, from_node=ids[0], to_node=ids[1]))

    adjacency: dict[str, list[str]] = {node_id: [] for node_id in nodes}
    for segment in wired:
        adjacency[segment.from_node].append(segment.id)
        if segment.to_node != segment.from_node:
            adjacency[segment.to_node].append(segment.id)

    return RoadNetwork(
        nodes=nodes,
        segments={s.id: s for s in wired},
        adjacency={node_id: tuple(sorted(ids)) for node_id, ids in adjacency.items()},
    )


def _coord_key(coords: LatLon) -> tuple[float, float]:
    return (round(coords[0], _COORD_KEY_DECIMALS), round(coords[1], _COORD_KEY_DECIMALS))


def nearest_node(network: RoadNetwork, coords: LatLon) -> Node:
    """Node minimizing great-circle distance; ties break on the smaller id."""
    if not network.nodes:
        raise GraphConstructionError("network has no nodes")
    best_id = min(
        network.nodes,
        key=lambda node_id: (haversine_m(coords, network.nodes[node_id].coords), node_id),
    )
    return network.nodes[best_id]


# --------------------------------------------------------------------------
# Station assignment
# --------------------------------------------------------------------------

def assign_stations(
    network: RoadNetwork,
    station_meta: list[StationMeta] | tuple[StationMeta, ...],
    forced_weather: dict[str, str] | None = None,
    forced_traffic: dict[str, str] | None = None,
    secondary_weather: dict[str, str] | None = None,
) -> StationAssignment:
    """Assign every segment its weather and traffic station.

    Default is the station nearest to the segment midpoint (ties on the
    smaller station id). ``forced_weather``/``forced_traffic`` pin a station
    per segment id; ``secondary_weather`` declares a fallback station per
    primary station id. ``same_road`` reflects whether the assigned weather
    station sits on the segment's road.
    """
    forced_weather = forced_weather or {}
    forced_traffic = forced_traffic or {}
    secondary_weather = secondary_weather or {}

    weather = sorted((m for m in station_meta if m.kind == WEATHER), key=lambda m: m.station_id)
    traffic = sorted((m for m in station_meta if m.kind == TRAFFIC), key=lambda m: m.station_id)
    if not weather or not traffic:
        raise ConfigurationError("need at least one weather and one traffic station")

    weather_by_id = {m.station_id: m for m in weather}
    traffic_by_id = {m.station_id: m for m in traffic}
    for segment_id in list(forced_weather) + list(forced_traffic):
        if segment_id not in network.segments:
            raise ConfigurationError(f"assignment override for unknown segment {segment_id!r}")
    for segment_id, station_id in forced_weather.items():
        if station_id not in weather_by_id:
            raise ConfigurationError(f"forced weather station {station_id!r} is unknown")
    for segment_id, station_id in forced_traffic.items():
        if station_id not in traffic_by_id:
            raise ConfigurationError(f"forced traffic station {station_id!r} is unknown")
    for primary, secondary in secondary_weather.items():
        if primary not in weather_by_id or secondary not in weather_by_id:
            raise ConfigurationError(
                f"secondary station mapping {primary!r} -> {secondary!r} references unknown station"
            )

    def nearest(metas: list[StationMeta], point: LatLon) -> str:
        return min(metas, key=lambda m: (haversine_m(point, m.coords), m.station_id)).station_id

    assignment: StationAssignment = {}
    for segment_id in sorted(network.segments):
        segment = network.segments[segment_id]
        mid = segment.midpoint()
        weather_id = forced_weather.get(segment_id) or nearest(weather, mid)
        traffic_id = forced_traffic.get(segment_id) or nearest(traffic, mid)
        station_road = weather_by_id[weather_id].road_number
        assignment[segment_id] = SegmentStations(
            weather_station_id=weather_id,
            same_road=station_road is not None and station_road == segment.road_number,
            traffic_station_id=traffic_id,
            secondary_weather_station_id=secondary_weather.get(weather_id),
        )
    return assignment


def assignment_to_json(assignment: StationAssignment) -> dict:
    return {
        segment_id: {
            "weather_station_id": s.weather_station_id,
            "same_road": s.same_road,
            "traffic_station_id": s.traffic_station_id,
            "secondary_weather_station_id": s.secondary_weather_station_id,
        }
        for segment_id, s in sorted(assignment.items())
    }


# --------------------------------------------------------------------------
# Event geometry resolution
# --------------------------------------------------------------------------

def resolve_event_segments(network: RoadNetwork, geometry: tuple[LatLon, ...]) -> tuple[str, ...]:
    """Map event geometry points to the nearest segment each; deduplicated, sorted."""
    matched: set[str] = set()
    for point in geometry:
        best: tuple[float, str] | None = None
        for segment_id in sorted(network.segments):
            dist, _, _, _ = nearest_on_polyline(list(network.segments[segment_id].geometry), point)
            if best is None or dist < best[0]:
                best = (dist, segment_id)
        if best is not None:
            matched.add(best[1])
    return tuple(sorted(matched))


# --------------------------------------------------------------------------
# GeoJSON I/O (lon, lat on disk; lat, lon in memory)
# --------------------------------------------------------------------------

def load_network_geojson(
    network_path: str | Path,
    nodes_path: str | Path | None = None,
    snap_tolerance_m: float = DEFAULT_SNAP_TOLERANCE_M,
) -> RoadNetwork:
    """Read LineString roads (and optional Point nodes), split, and build the graph."""
    polylines = _read_linestrings(Path(network_path))
    nodes = _read_points(Path(nodes_path)) if nodes_path else []
    segments = split_at_nodes(polylines, nodes, snap_tolerance_m)
    return build_graph(segments, nodes, snap_tolerance_m)


def _read_linestrings(path: Path) -> list[RawPolyline]:
    data = _load_geojson(path)
    polylines = []
    for feature in data.get("features", []):
        geom = feature.get("geometry") or {}
        if geom.get("type") != "LineString":
            continue
        props = feature.get("properties") or {}
        if "id" not in props:
            raise ParseError("LineString feature missing 'id' property", path=str(path))
        coords = [(float(lat), float(lon)) for lon, lat in geom["coordinates"]]
        road_number = props.get("road_number")
        polylines.append(
            RawPolyline(
                id=str(props["id"]),
                road_number=int(road_number) if road_number is not None else None,
                geometry=tuple(coords),
            )
        )
    if not polylines:
        raise ParseError("no LineString features found", path=str(path))
    return polylines


def _read_points(path: Path) -> list[Node]:
    data = _load_geojson(path)
    nodes = []
    for feature in data.get("features", []):
        geom = feature.get("geometry") or {}
        if geom.get("type") != "Point":
            continue
        props = feature.get("properties") or {}
        if "id" not in props:
            raise ParseError("Point feature missing 'id' property", path=str(path))
        lon, lat = geom["coordinates"]
        nodes.append(Node(id=str(props["id"]), coords=(float(lat), float(lon))))
    return nodes


def _load_geojson(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid GeoJSON: {exc.msg}", path=str(path), line=exc.lineno) from exc
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", path=str(path)) from exc


def network_to_geojson(network: RoadNetwork) -> dict:
    features = []
    for segment_id in sorted(network.segments):
        segment = network.segments[segment_id]
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[lon, lat] for lat, lon in segment.geometry],
                },
                "properties": {
                    "id": segment.id,
                    "road_number": segment.road_number,
                    "from_node": segment.from_node,
                    "to_node": segment.to_node,
                    "length_m": round(segment.length_m, 3),
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}
