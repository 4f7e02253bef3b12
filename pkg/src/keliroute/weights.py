"""Sensor-value to unit-weight mappings.

Every function here maps one road-condition attribute onto a dimensionless
weight in [0, 1], where 0 means "no hindrance" and 1 means "worst considered
conditions". Categorical attributes carry fixed ranked weights; numeric
attributes are scaled linearly between two calibrated endpoints and clamped
outside them. Scale endpoints and the numeric code tables used by raw feeds
are configurable; the compiled-in defaults below are the reference values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import ConfigurationError, InvalidInputError, UnknownAttributeError


class SurfaceState(Enum):
    """Road surface condition, ordered from least to most hazardous."""

    DRY = "dry"
    MOIST = "moist"
    WET = "wet"
    MOIST_SALTY = "moist_salty"
    WET_SALTED = "wet_salted"
    FROST = "frost"
    ICE = "ice"
    SNOW = "snow"
    SLUSH = "slush"


class PrecipitationType(Enum):
    """Detailed precipitation classification, ordered by associated risk."""

    DRY_WEATHER = "dry_weather"
    WEAK_UNDETERMINED = "weak_undetermined"
    DRIZZLE = "drizzle"
    RAIN = "rain"
    WET_SLEET = "wet_sleet"
    SLEET = "sleet"
    HAIL = "hail"
    FREEZING_DRIZZLE = "freezing_drizzle"
    SNOW = "snow"
    FREEZING_RAIN = "freezing_rain"


class CoarsePrecipitation(Enum):
    """Fallback rain/sleet-snow classification used when the detailed type is absent."""

    WEAK_RAIN = "weak_rain"
    MODERATE_RAIN = "moderate_rain"
    ABUNDANT_RAIN = "abundant_rain"
    SLEET_OR_SNOW = "sleet_or_snow"


class RoadWorkSeverity(Enum):
    """Disturbance severity of a road work site."""

    NONE = "none"
    LOW = "low"
    HIGH = "high"
    HIGHEST = "highest"


_SURFACE_WEIGHTS = {
    SurfaceState.DRY: 0.0,
    SurfaceState.MOIST: 0.125,
    SurfaceState.WET: 0.25,
    SurfaceState.MOIST_SALTY: 0.375,
    SurfaceState.WET_SALTED: 0.5,
    SurfaceState.FROST: 0.625,
    SurfaceState.ICE: 0.75,
    SurfaceState.SNOW: 0.875,
    SurfaceState.SLUSH: 1.0,
}

_PRECIPITATION_WEIGHTS = {
    PrecipitationType.DRY_WEATHER: 0.0,
    PrecipitationType.WEAK_UNDETERMINED: 0.111,
    PrecipitationType.DRIZZLE: 0.222,
    PrecipitationType.RAIN: 0.333,
    PrecipitationType.WET_SLEET: 0.444,
    PrecipitationType.SLEET: 0.556,
    PrecipitationType.HAIL: 0.667,
    PrecipitationType.FREEZING_DRIZZLE: 0.778,
    PrecipitationType.SNOW: 0.889,
    PrecipitationType.FREEZING_RAIN: 1.0,
}

# The sleet/snow bucket is pinned at 0.722, not the exact mean of the
# sleet and snow weights (0.7225).
_COARSE_PRECIPITATION_WEIGHTS = {
    CoarsePrecipitation.WEAK_RAIN: 0.222,
    CoarsePrecipitation.MODERATE_RAIN: 0.333,
    CoarsePrecipitation.ABUNDANT_RAIN: 0.333,
    CoarsePrecipitation.SLEET_OR_SNOW: 0.722,
}

_ROAD_WORK_WEIGHTS = {
    RoadWorkSeverity.NONE: 0.0,
    RoadWorkSeverity.LOW: 0.33,
    RoadWorkSeverity.HIGH: 0.66,
    RoadWorkSeverity.HIGHEST: 1.0,
}


@dataclass(frozen=True)
class LinearScale:
    """Endpoints of a linear attribute-to-weight mapping.

    ``v_zero`` maps to weight 0 and ``v_one`` to weight 1 (in the attribute's
    own units); the direction may be increasing or decreasing.
    """

    attribute_id: str
    v_zero: float
    v_one: float

    def __post_init__(self) -> None:
        if self.v_zero == self.v_one:
            raise ConfigurationError(
                f"scale '{self.attribute_id}': endpoints must differ, got {self.v_zero}"
            )


# Canonical numeric attributes that scale linearly. The four point-difference
# attributes share the temp_point_diff endpoints.
_DEFAULT_SCALES = [
    LinearScale("friction", v_zero=0.82, v_one=0.09),
    LinearScale("moisture", v_zero=0.0, v_one=7.0),
    LinearScale("snow_depth", v_zero=0.0, v_one=10.0),
    LinearScale("temp_point_diff", v_zero=5.0, v_one=0.0),
    LinearScale("visible_distance", v_zero=10000.0, v_one=0.0),
    LinearScale("relative_humidity", v_zero=0.0, v_one=100.0),
    LinearScale("precipitation_intensity", v_zero=0.0, v_one=10.0),
    LinearScale("average_wind", v_zero=0.0, v_one=21.0),
    LinearScale("maximum_wind", v_zero=0.0, v_one=31.5),
    LinearScale("ffs_percent", v_zero=100.0, v_one=0.0),
    LinearScale("occupancy_percent", v_zero=0.0, v_one=100.0),
]

# Default numeric code tables for categorical feeds. Raw feeds report these
# attributes as undocumented numerals; the assignment below follows the enum
# rank order and can be overridden per deployment via code_tables.json.
_DEFAULT_SURFACE_CODES = {i + 1: state for i, state in enumerate(SurfaceState)}
_DEFAULT_PRECIPITATION_CODES: dict[int, PrecipitationType] = {
    **{i: p for i, p in enumerate(PrecipitationType)},
    # Ice crystals, snow grains, and snow pellets are treated as snow.
    10: PrecipitationType.SNOW,
    11: PrecipitationType.SNOW,
    12: PrecipitationType.SNOW,
}
_DEFAULT_COARSE_CODES = {i + 1: p for i, p in enumerate(CoarsePrecipitation)}


@dataclass(frozen=True)
class WeightConfig:
    """Scale registry plus categorical code tables, overridable from a file."""

    version: str
    scales: dict[str, LinearScale]
    surface_codes: dict[int, SurfaceState]
    precipitation_codes: dict[int, PrecipitationType]
    coarse_precipitation_codes: dict[int, CoarsePrecipitation]

    @classmethod
    def default(cls) -> "WeightConfig":
        return cls(
            version="builtin",
            scales={s.attribute_id: s for s in _DEFAULT_SCALES},
            surface_codes=dict(_DEFAULT_SURFACE_CODES),
            precipitation_codes=dict(_DEFAULT_PRECIPITATION_CODES),
            coarse_precipitation_codes=dict(_DEFAULT_COARSE_CODES),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "WeightConfig":
        """Load overrides on top of the defaults.

        The file may override any subset of scales and code tables; unknown
        enum names raise ConfigurationError.
        """
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        base = cls.default()
        scales = dict(base.scales)
        for attr_id, endpoints in raw.get("scales", {}).items():
            scales[attr_id] = LinearScale(
                attr_id, v_zero=float(endpoints["v_zero"]), v_one=float(endpoints["v_one"])
            )

        def _codes(key: str, enum_cls, default: dict):
            table = dict(default)
            for code, name in raw.get(key, {}).items():
                try:
                    table[int(code)] = enum_cls(name)
                except ValueError as exc:
                    raise ConfigurationError(
                        f"{key}: unknown state '{name}' for code {code}"
                    ) from exc
            return table

        return cls(
            version=str(raw.get("version", "file")),
            scales=scales,
            surface_codes=_codes("surface_codes", SurfaceState, base.surface_codes),
            precipitation_codes=_codes(
                "precipitation_codes", PrecipitationType, base.precipitation_codes
            ),
            coarse_precipitation_codes=_codes(
                "coarse_precipitation_codes",
                CoarsePrecipitation,
                base.coarse_precipitation_codes,
            ),
        )


DEFAULT_CONFIG = WeightConfig.default()
SCALE_REGISTRY = DEFAULT_CONFIG.scales


def _require_finite(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{what} must be finite, got {value!r}")
    return value


def linear_scale_weight(value: float, scale: LinearScale) -> float:
    """Scale ``value`` linearly between the endpoints, clamped to [0, 1]."""
    value = _require_finite(value, f"value for '{scale.attribute_id}'")
    fraction = (value - scale.v_zero) / (scale.v_one - scale.v_zero)
    return min(1.0, max(0.0, fraction))


def attribute_scale_weight(
    attribute_id: str, value: float, config: WeightConfig = DEFAULT_CONFIG
) -> float:
    """Look up the attribute's scale in the registry and apply it."""
    try:
        scale = config.scales[attribute_id]
    except KeyError:
        raise UnknownAttributeError(attribute_id) from None
    return linear_scale_weight(value, scale)


def surface_state_weight(state: SurfaceState) -> float:
    """Ranked weight of a road surface condition (dry 0 ... slush 1)."""
    return _SURFACE_WEIGHTS[state]


def precipitation_type_weight(p: PrecipitationType) -> float:
    """Ranked weight of a detailed precipitation type."""
    return _PRECIPITATION_WEIGHTS[p]


def coarse_precipitation_weight(p: CoarsePrecipitation) -> float:
    """Weight of the coarse rain/sleet-snow classification."""
    return _COARSE_PRECIPITATION_WEIGHTS[p]


def road_temperature_weight(t: float) -> float:
    """Piecewise-linear road surface temperature weight.

    Accident risk peaks at -2 °C (weight 1) and tapers to 0 at +5 °C on the
    warm side and at -20 °C on the cold side.
    """
    t = _require_finite(t, "road temperature")
    if t >= 5.0:
        return 0.0
    if t >= -2.0:
        return (5.0 - t) / 7.0
    if t > -20.0:
        return (t + 20.0) / 18.0
    return 0.0


def air_temperature_weight(t: float) -> float:
    """Air temperature weight: 0 at the 14 °C optimum, 1 at +27 °C / -30 °C.

    The warm and cold ramps are asymmetric: heat becomes adverse much faster
    than cold does.
    """
    t = _require_finite(t, "air temperature")
    if t >= 14.0:
        return min(1.0, (t - 14.0) / 13.0)
    return min(1.0, (14.0 - t) / 44.0)


def road_work_weight(severity: RoadWorkSeverity) -> float:
    """Weight of the worst road work disturbance affecting a segment."""
    return _ROAD_WORK_WEIGHTS[severity]


def accident_weight(active: bool) -> float:
    """1.0 while an accident is considered active on the segment, else 0.0."""
    return 1.0 if active else 0.0
