"""Attribute fusion: canonical attributes to per-segment weight vectors.

A station's readings become up to fifteen weather factors split into three
groups (surface: 7, visibility: 5, other environmental: 3). Group means feed
two station-level weather weights: the full weight over all three groups and
the environmental weight over the latter two, which is all that off-road or
fallback stations contribute. Traffic stations contribute the mean of their
free-flow-speed and volume-to-capacity factors. Per segment, the weather,
traffic, and event weights join the segment length in a 4-dimensional cost
vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum

from .errors import ConfigurationError, InvalidInputError
from .graph import RoadNetwork, RoadSegment, SegmentStations
from .ingest import (
    CanonicalAttributes,
    TrafficEvent,
    accident_active,
    freezing_point_delta,
    resolve_point_difference,
    resolve_precipitation,
    roadwork_severity_for_segment,
)
from .weights import (
    CoarsePrecipitation,
    PrecipitationType,
    WeightConfig,
    accident_weight,
    air_temperature_weight,
    attribute_scale_weight,
    coarse_precipitation_weight,
    precipitation_type_weight,
    road_temperature_weight,
    road_work_weight,
    surface_state_weight,
)

SURFACE_FACTOR_IDS = (
    "surface_condition",
    "freezing_point_diff",
    "surface_dew_frost_diff",
    "friction",
    "moisture",
    "snow_depth",
    "road_temperature",
)
VISIBILITY_FACTOR_IDS = (
    "relative_humidity",
    "precipitation_intensity",
    "precipitation_type",
    "visible_distance",
    "air_dew_frost_diff",
)
ENVIRONMENTAL_FACTOR_IDS = ("air_temperature", "average_wind", "maximum_wind")
ALL_FACTOR_IDS = SURFACE_FACTOR_IDS + VISIBILITY_FACTOR_IDS + ENVIRONMENTAL_FACTOR_IDS


class LengthMode(Enum):
    """How segment length enters the weight vector.

    RAW_KILOMETERS reproduces the original behavior where lengths are not
    normalized against the other unit-interval dimensions; NORMALIZED_BY_MAX
    divides by the longest segment so length also lands in (0, 1].
    """

    RAW_KILOMETERS = "raw"
    NORMALIZED_BY_MAX = "normalized"


@dataclass(frozen=True)
class WeatherFactors:
    """Up to fifteen unit weights, keyed by factor id; missing inputs stay absent."""

    values: dict[str, float]

    def __post_init__(self) -> None:
        unknown = set(self.values) - set(ALL_FACTOR_IDS)
        if unknown:
            raise InvalidInputError(f"unknown weather factor ids: {sorted(unknown)}")

    def group(self, factor_ids: tuple[str, ...]) -> list[float]:
        return [self.values[fid] for fid in factor_ids if fid in self.values]

    @property
    def surface(self) -> list[float]:
        return self.group(SURFACE_FACTOR_IDS)

    @property
    def visibility(self) -> list[float]:
        return self.group(VISIBILITY_FACTOR_IDS)

    @property
    def environmental(self) -> list[float]:
        return self.group(ENVIRONMENTAL_FACTOR_IDS)

    @property
    def present_count(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class GroupWeights:
    surface: float | None
    visibility: float | None
    environmental: float | None


@dataclass(frozen=True)
class StationWeights:
    full_weather: float | None = None
    environmental_weather: float | None = None
    traffic: float | None = None

    @property
    def has_weather_data(self) -> bool:
        return self.full_weather is not None


@dataclass(frozen=True)
class SegmentWeightVector:
    """One routing cost vector: (length, traffic, weather, events)."""

    length: float
    traffic: float
    weather: float
    events: float
    data_incomplete: bool = False

    def __post_init__(self) -> None:
        if self.length < 0:
            raise InvalidInputError("length component must be nonnegative")
        for label in ("traffic", "weather", "events"):
            value = getattr(self, label)
            if not 0.0 <= value <= 1.0:
                raise InvalidInputError(f"{label} component must be within [0, 1], got {value}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.length, self.traffic, self.weather, self.events)


def compute_weather_factors(
    attrs: CanonicalAttributes, config: WeightConfig | None = None
) -> WeatherFactors:
    """Evaluate every weather factor whose canonical inputs are present."""
    config = config or WeightConfig.default()
    values: dict[str, float] = {}

    def scaled(factor_id: str, attribute_id: str, raw: float | None) -> None:
        if raw is not None:
            values[factor_id] = attribute_scale_weight(attribute_id, raw, config)

    road_temp = attrs.get("road_temperature")
    air_temp = attrs.get("air_temperature")

    # surface group
    if attrs.surface_state is not None:
        values["surface_condition"] = surface_state_weight(attrs.surface_state)
    freezing_point = attrs.get("freezing_point")
    if road_temp is not None and freezing_point is not None:
        delta = freezing_point_delta(road_temp, freezing_point)
        scaled("freezing_point_diff", "temp_point_diff", delta)
    scaled(
        "surface_dew_frost_diff",
        "temp_point_diff",
        resolve_point_difference(attrs, "surface", road_temp),
    )
    scaled("friction", "friction", attrs.get("friction"))
    scaled("moisture", "moisture", attrs.get("moisture"))
    scaled("snow_depth", "snow_depth", attrs.get("snow_depth"))
    if road_temp is not None:
        values["road_temperature"] = road_temperature_weight(road_temp)

    # visibility group
    scaled("relative_humidity", "relative_humidity", attrs.get("relative_humidity"))
    scaled(
        "precipitation_intensity", "precipitation_intensity", attrs.get("precipitation_intensity")
    )
    precipitation = resolve_precipitation(attrs)
    if isinstance(precipitation, PrecipitationType):
        values["precipitation_type"] = precipitation_type_weight(precipitation)
    elif isinstance(precipitation, CoarsePrecipitation):
        values["precipitation_type"] = coarse_precipitation_weight(precipitation)
    scaled("visible_distance", "visible_distance", attrs.get("visible_distance"))
    scaled(
        "air_dew_frost_diff",
        "temp_point_diff",
        resolve_point_difference(attrs, "air", air_temp),
    )

    # other environmental group
    if air_temp is not None:
        values["air_temperature"] = air_temperature_weight(air_temp)
    scaled("average_wind", "average_wind", attrs.get("average_wind"))
    scaled("maximum_wind", "maximum_wind", attrs.get("maximum_wind"))

    return WeatherFactors(values=values)


def group_weight(factor_values: list[float]) -> float | None:
    """Arithmetic mean of the present factors; absent when the group is empty."""
    if not factor_values:
        return None
    return sum(factor_values) / len(factor_values)


def compute_group_weights(factors: WeatherFactors) -> GroupWeights:
    return GroupWeights(
        surface=group_weight(factors.surface),
        visibility=group_weight(factors.visibility),
        environmental=group_weight(factors.environmental),
    )


def station_weather_weights(groups: GroupWeights) -> tuple[float | None, float | None]:
    """(full, environmental) station weights from the group means.

    Environmental covers visibility plus other-environmental; full covers all
    three groups. Either mean skips absent groups and is absent when every
    contributing group is absent.
    """
    environmental = group_weight(
        [g for g in (groups.visibility, groups.environmental) if g is not None]
    )
    full = group_weight(
        [g for g in (groups.surface, groups.visibility, groups.environmental) if g is not None]
    )
    return full, environmental


def traffic_weight(
    ffs_factor: float | None, occupancy_factor: float | None
) -> float | None:
    """Mean of the present traffic factors; absent when both are missing."""
    return group_weight([f for f in (ffs_factor, occupancy_factor) if f is not None])


def event_weight(roadwork: float, accident: float) -> float:
    """Combined event weight: the worse of road work and accident."""
    for label, value in (("roadwork", roadwork), ("accident", accident)):
        if not 0.0 <= value <= 1.0:
            raise InvalidInputError(f"{label} weight must be within [0, 1], got {value}")
    return max(roadwork, accident)


def length_weight(
    length_m: float, mode: LengthMode, normalizer_m: float | None = None
) -> float:
    """Length component of the weight vector (km in raw mode, fraction of max otherwise)."""
    if length_m <= 0:
        raise InvalidInputError(f"length_m must be positive, got {length_m}")
    if mode is LengthMode.RAW_KILOMETERS:
        return length_m / 1000.0
    if normalizer_m is None or normalizer_m <= 0:
        raise ConfigurationError("NORMALIZED_BY_MAX requires a positive normalizer_m")
    return length_m / normalizer_m


def assemble_segment_vector(
    segment: RoadSegment,
    stations: SegmentStations,
    station_weights: dict[str, StationWeights],
    events: tuple[TrafficEvent, ...] | list[TrafficEvent],
    now: datetime,
    mode: LengthMode = LengthMode.RAW_KILOMETERS,
    normalizer_m: float | None = None,
) -> SegmentWeightVector:
    """Build the 4-dimensional weight vector for one segment.

    Weather comes from the assigned station: its full weight when the station
    sits on the same road, its environmental weight otherwise. A silent
    primary falls back to the secondary station's environmental weight.
    Missing weather or traffic contributes 0.0 and flags the segment as
    data-incomplete.
    """
    incomplete = False

    weather: float | None = None
    primary = station_weights.get(stations.weather_station_id)
    if primary is not None and primary.has_weather_data:
        weather = primary.full_weather if stations.same_road else primary.environmental_weather
    if weather is None and stations.secondary_weather_station_id is not None:
        secondary = station_weights.get(stations.secondary_weather_station_id)
        if secondary is not None:
            weather = secondary.environmental_weather
    if weather is None:
        weather = 0.0
        incomplete = True

    traffic_station = station_weights.get(stations.traffic_station_id)
    traffic = traffic_station.traffic if traffic_station is not None else None
    if traffic is None:
        traffic = 0.0
        incomplete = True

    roadwork = road_work_weight(roadwork_severity_for_segment(events, segment.id))
    accident = accident_weight(accident_active(events, now).get(segment.id, False))

    return SegmentWeightVector(
        length=length_weight(segment.length_m, mode, normalizer_m),
        traffic=traffic,
        weather=weather,
        events=event_weight(roadwork, accident),
        data_incomplete=incomplete,
    )


def weights_to_geojson(
    network: RoadNetwork, segment_weights: dict[str, SegmentWeightVector]
) -> dict:
    """Weight snapshot as a GeoJSON FeatureCollection (lon, lat on disk)."""
    features = []
    for segment_id in sorted(segment_weights):
        segment = network.segments[segment_id]
        vector = segment_weights[segment_id]
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[lon, lat] for lat, lon in segment.geometry],
                },
                "properties": {
                    "id": segment_id,
                    "length": vector.length,
                    "traffic": vector.traffic,
                    "weather": vector.weather,
                    "events": vector.events,
                    "data_incomplete": vector.data_incomplete,
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}
