"""Preference vectors and preference-weighted shortest paths.

An edge's cost is the dot product of its 4-dimensional weight vector
(length, traffic, weather, events) with the driver's preference vector, so
one scalar per edge feeds a deterministic Dijkstra search. Preference
vectors come from four importance ratings normalized to sum to 1, or from an
explicit vector.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

from .errors import InvalidInputError, NoRouteError, ParseError
from .fusion import SegmentWeightVector
from .geo import LatLon, haversine_m
from .graph import RoadNetwork, nearest_node

PREFERENCE_DIMENSIONS = ("length", "traffic", "weather", "events")
PRESET_PROFILE_NAMES = ("teemu", "tapio", "tuire")


class ImportanceRating(Enum):
    """How much a driver cares about one cost dimension."""

    UNIMPORTANT = 0.05
    SOMEWHAT = 0.25
    IMPORTANT = 0.5
    VERY = 0.75

    @classmethod
    def from_name(cls, name: str) -> "ImportanceRating":
        try:
            return cls[name.upper()]
        except KeyError:
            raise InvalidInputError(
                f"unknown importance rating {name!r}; expected one of "
                f"{[r.name.lower() for r in cls]}"
            ) from None


@dataclass(frozen=True)
class PreferenceVector:
    """Nonnegative weights over (length, traffic, weather, events) summing to 1."""

    length: float
    traffic: float
    weather: float
    events: float

    def __post_init__(self) -> None:
        components = self.as_tuple()
        if any(c < 0 for c in components):
            raise InvalidInputError(f"preference components must be nonnegative: {components}")
        if abs(sum(components) - 1.0) > 1e-9:
            raise InvalidInputError(
                f"preference components must sum to 1, got {sum(components)!r}"
            )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.length, self.traffic, self.weather, self.events)

    @classmethod
    def from_raw(cls, raw: tuple[float, float, float, float] | list[float]) -> "PreferenceVector":
        """Normalize a nonnegative raw weight vector by its sum."""
        if len(raw) != 4:
            raise InvalidInputError(f"preference vector needs exactly 4 components, got {len(raw)}")
        values = [float(v) for v in raw]
        if any(v < 0 for v in values):
            raise InvalidInputError(f"raw preference components must be nonnegative: {values}")
        total = sum(values)
        if total <= 0:
            raise InvalidInputError("raw preference components must not all be zero")
        return cls(*(v / total for v in values))


def preference_from_ratings(
    ratings: tuple[ImportanceRating, ...] | list[ImportanceRating],
) -> PreferenceVector:
    """Scale the four raw rating values so they add up to 1."""
    if len(ratings) != 4:
        raise InvalidInputError(f"need exactly 4 ratings, got {len(ratings)}")
    return PreferenceVector.from_raw([r.value for r in ratings])


def load_profile(source: str | Path) -> PreferenceVector:
    """Load a preference profile: a preset name or a JSON file path.

    The file carries either ``ratings`` (four level names) or ``vector``
    (four nonnegative reals, normalized on load).
    """
    name = str(source)
    if name.lower() in PRESET_PROFILE_NAMES:
        raw = json.loads(
            resources.files("keliroute.profiles").joinpath(f"{name.lower()}.json").read_text()
        )
    else:
        path = Path(source)
        if not path.is_file():
            raise ParseError(f"profile not found (not a preset, not a file): {source}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid profile JSON: {exc.msg}", path=str(path), line=exc.lineno)
    return parse_profile(raw)


def parse_profile(raw: dict) -> PreferenceVector:
    if "ratings" in raw:
        ratings = [ImportanceRating.from_name(r) for r in raw["ratings"]]
        return preference_from_ratings(ratings)
    if "vector" in raw:
        return PreferenceVector.from_raw(raw["vector"])
    raise ParseError("profile needs either 'ratings' or 'vector'")


def edge_cost(w: SegmentWeightVector, p: PreferenceVector) -> float:
    """Dot product of the segment weight vector with the preference vector."""
    wl, wt, ww, we = w.as_tuple()
    pl, pt, pw, pe = p.as_tuple()
    return wl * pl + wt * pt + ww * pw + we * pe


@dataclass(frozen=True)
class Route:
    nodes: tuple[str, ...]
    segments: tuple[str, ...]
    total_cost: float
    total_length_m: float
    breakdown: tuple[float, float, float, float]
    start_snap_m: float = 0.0
    end_snap_m: float = 0.0

    @property
    def data(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "segments": list(self.segments),
            "total_cost": self.total_cost,
            "total_length_m": self.total_length_m,
            "breakdown": dict(zip(PREFERENCE_DIMENSIONS, self.breakdown)),
            "start_snap_m": self.start_snap_m,
            "end_snap_m": self.end_snap_m,
        }


def shortest_route(
    network: RoadNetwork,
    segment_weights: dict[str, SegmentWeightVector],
    preference: PreferenceVector,
    from_coords: LatLon,
    to_coords: LatLon,
) -> Route:
    """Cost-minimal path between the nodes nearest to the given coordinates.

    Deterministic: on equal tentative cost the smaller node id is settled
    first, and an established predecessor is only replaced by a strictly
    cheaper path. Raises NoRouteError when the endpoints are disconnected.
    """
    start = nearest_node(network, from_coords)
    goal = nearest_node(network, to_coords)
    start_snap = haversine_m(from_coords, start.coords)
    end_snap = haversine_m(to_coords, goal.coords)

    if start.id == goal.id:
        return Route(
            nodes=(start.id,),
            segments=(),
            total_cost=0.0,
            total_length_m=0.0,
            breakdown=(0.0, 0.0, 0.0, 0.0),
            start_snap_m=start_snap,
            end_snap_m=end_snap,
        )

    dist: dict[str, float] = {start.id: 0.0}
    prev: dict[str, tuple[str, str]] = {}
    settled: set[str] = set()
    heap: list[tuple[float, str]] = [(0.0, start.id)]

    while heap:
        cost, node_id = heapq.heappop(heap)
        if node_id in settled:
            continue
        settled.add(node_id)
        if node_id == goal.id:
            break
        for segment_id in network.incident_segments(node_id):
            weight = segment_weights.get(segment_id)
            if weight is None:
                continue
            neighbor = network.other_end(segment_id, node_id)
            if neighbor in settled:
                continue
            candidate = cost + edge_cost(weight, preference)
            if candidate < dist.get(neighbor, float("inf")):
                dist[neighbor] = candidate
                prev[neighbor] = (node_id, segment_id)
                heapq.heappush(heap, (candidate, neighbor))

    if goal.id not in settled:
        raise NoRouteError(f"no route from node {start.id} to node {goal.id}")

    node_path = [goal.id]
    segment_path: list[str] = []
    while node_path[-1] != start.id:
        parent, segment_id = prev[node_path[-1]]
        segment_path.append(segment_id)
        node_path.append(parent)
    node_path.reverse()
    segment_path.reverse()

    breakdown = route_breakdown(segment_path, segment_weights)
    total_length = sum(network.segments[sid].length_m for sid in segment_path)
    return Route(
        nodes=tuple(node_path),
        segments=tuple(segment_path),
        total_cost=dist[goal.id],
        total_length_m=total_length,
        breakdown=breakdown,
        start_snap_m=start_snap,
        end_snap_m=end_snap,
    )


def route_breakdown(
    segment_ids: list[str] | tuple[str, ...],
    segment_weights: dict[str, SegmentWeightVector],
) -> tuple[float, float, float, float]:
    """Componentwise sums of the traversed weight vectors."""
    sums = [0.0, 0.0, 0.0, 0.0]
    for segment_id in segment_ids:
        for i, component in enumerate(segment_weights[segment_id].as_tuple()):
            sums[i] += component
    return (sums[0], sums[1], sums[2], sums[3])


def route_geometry(route: Route, network: RoadNetwork) -> list[LatLon]:
    """Traversal-ordered coordinates of the route, junction points deduplicated."""
    coords: list[LatLon] = []
    for i, segment_id in enumerate(route.segments):
        segment = network.segments[segment_id]
        geometry = list(segment.geometry)
        if segment.from_node != route.nodes[i]:
            geometry.reverse()
        if coords:
            geometry = geometry[1:]
        coords.extend(geometry)
    if not coords and route.nodes:
        coords = [network.nodes[route.nodes[0]].coords]
    return coords


def route_to_geojson(
    route: Route, network: RoadNetwork, data_incomplete_count: int | None = None
) -> dict:
    coords = route_geometry(route, network)
    properties = dict(route.data)
    if data_incomplete_count is not None:
        properties["data_incomplete_segments"] = data_incomplete_count
    return {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[lon, lat] for lat, lon in coords],
                },
                "properties": properties,
            }
        ],
    }
