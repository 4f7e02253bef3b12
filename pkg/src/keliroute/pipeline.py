"""End-to-end scenario processing and the scenario catalog.

One scenario bundle plus one road network turns into: corrected station
metadata, per-station weights, a station assignment, and per-segment weight
vectors in both length modes, together with a summary (station counts,
per-dimension ranges, weather spread) used by the CLI and the HTTP service.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import BundleError, ConfigurationError
from .fusion import (
    LengthMode,
    SegmentWeightVector,
    StationWeights,
    assemble_segment_vector,
    compute_group_weights,
    compute_weather_factors,
    station_weather_weights,
    traffic_weight,
    weights_to_geojson,
)
from .graph import (
    RoadNetwork,
    StationAssignment,
    assign_stations,
    load_network_geojson,
    resolve_event_segments,
)
from .ingest import (
    ScenarioBundle,
    StationMeta,
    TRAFFIC,
    TrafficEvent,
    WEATHER,
    apply_ffs_correction,
    canonicalize,
    parse_scenario_bundle,
    warn_unknown_ffs_overrides,
)
from .weights import WeightConfig, attribute_scale_weight

logger = logging.getLogger(__name__)

DATA_DIR_ENV = "KELIROUTE_DATA"


def corrected_station_meta(bundle: ScenarioBundle) -> list[StationMeta]:
    """Station metadata with the bundle's free-flow-speed corrections applied."""
    warn_unknown_ffs_overrides(bundle.station_meta, bundle.overrides.ffs_overrides)
    return [apply_ffs_correction(meta, bundle.overrides.ffs_overrides) for meta in bundle.station_meta]


def compute_station_weights(bundle: ScenarioBundle) -> dict[str, StationWeights]:
    """Per-station weights from the bundle's snapshots.

    Weather stations yield full and environmental weather weights; traffic
    stations yield the mean of their free-flow-speed and occupancy factors,
    deriving the percentage from a raw speed reading and the (corrected)
    station FFS when the percentage itself is not reported.
    """
    mapping = bundle.sensor_mapping()
    config = bundle.overrides.weight_config or WeightConfig.default()
    metas = {meta.station_id: meta for meta in corrected_station_meta(bundle)}

    weights: dict[str, StationWeights] = {}
    for snapshot in bundle.weather_snapshots:
        attrs = canonicalize(snapshot.readings, mapping, config)
        factors = compute_weather_factors(attrs, config)
        full, environmental = station_weather_weights(compute_group_weights(factors))
        weights[snapshot.station_id] = StationWeights(
            full_weather=full, environmental_weather=environmental
        )

    for snapshot in bundle.traffic_snapshots:
        attrs = canonicalize(snapshot.readings, mapping, config)
        ffs_percent = attrs.get("ffs_percent")
        if ffs_percent is None:
            ffs_percent = _derive_ffs_percent(
                attrs.get("average_speed"), metas.get(snapshot.station_id), snapshot.station_id
            )
        ffs_factor = (
            attribute_scale_weight("ffs_percent", ffs_percent, config)
            if ffs_percent is not None
            else None
        )
        occupancy = attrs.get("occupancy_percent")
        occupancy_factor = (
            attribute_scale_weight("occupancy_percent", occupancy, config)
            if occupancy is not None
            else None
        )
        weights[snapshot.station_id] = StationWeights(
            traffic=traffic_weight(ffs_factor, occupancy_factor)
        )
    return weights


def _derive_ffs_percent(
    average_speed: float | None, meta: StationMeta | None, station_id: str
) -> float | None:
    if average_speed is None:
        return None
    if meta is None or meta.mean_ffs() is None:
        logger.warning(
            "station %s reports a speed but has no FFS metadata; dropping", station_id
        )
        return None
    return 100.0 * average_speed / meta.mean_ffs()


def effective_events(bundle: ScenarioBundle, network: RoadNetwork) -> tuple[TrafficEvent, ...]:
    """Events with geometry-only coverage resolved to nearest segment ids."""
    resolved = []
    for event in bundle.events:
        if not event.affected_segments and event.geometry:
            from dataclasses import replace

            resolved.append(
                replace(event, affected_segments=resolve_event_segments(network, event.geometry))
            )
        else:
            resolved.append(event)
    return tuple(resolved)


def scenario_assignment(bundle: ScenarioBundle, network: RoadNetwork) -> StationAssignment:
    overrides = bundle.overrides
    return assign_stations(
        network,
        corrected_station_meta(bundle),
        forced_weather=overrides.forced_weather_station,
        forced_traffic=overrides.forced_traffic_station,
        secondary_weather=overrides.secondary_weather_station,
    )


@dataclass(frozen=True)
class ScenarioComputation:
    """Everything derived from one bundle against one network."""

    bundle: ScenarioBundle
    assignment: StationAssignment
    station_weights: dict[str, StationWeights]
    segment_weights_raw: dict[str, SegmentWeightVector]
    segment_weights_normalized: dict[str, SegmentWeightVector]

    def segment_weights(self, mode: LengthMode) -> dict[str, SegmentWeightVector]:
        if mode is LengthMode.RAW_KILOMETERS:
            return self.segment_weights_raw
        return self.segment_weights_normalized


def compute_scenario(bundle: ScenarioBundle, network: RoadNetwork) -> ScenarioComputation:
    assignment = scenario_assignment(bundle, network)
    station_weights = compute_station_weights(bundle)
    events = effective_events(bundle, network)
    normalizer = max((s.length_m for s in network.segments.values()), default=None)

    raw: dict[str, SegmentWeightVector] = {}
    normalized: dict[str, SegmentWeightVector] = {}
    for segment_id in sorted(network.segments):
        segment = network.segments[segment_id]
        stations = assignment[segment_id]
        raw[segment_id] = assemble_segment_vector(
            segment, stations, station_weights, events, bundle.recorded_at,
            LengthMode.RAW_KILOMETERS,
        )
        normalized[segment_id] = assemble_segment_vector(
            segment, stations, station_weights, events, bundle.recorded_at,
            LengthMode.NORMALIZED_BY_MAX, normalizer,
        )
    return ScenarioComputation(
        bundle=bundle,
        assignment=assignment,
        station_weights=station_weights,
        segment_weights_raw=raw,
        segment_weights_normalized=normalized,
    )


def scenario_summary(
    computation: ScenarioComputation, mode: LengthMode = LengthMode.RAW_KILOMETERS
) -> dict:
    """Station counts, per-station weights, per-dimension ranges, weather spread."""
    bundle = computation.bundle
    vectors = computation.segment_weights(mode)

    def rng(values: list[float]) -> dict:
        return {"min": min(values), "max": max(values)} if values else {"min": None, "max": None}

    station_weights = {
        station_id: {
            "full_weather": w.full_weather,
            "environmental_weather": w.environmental_weather,
            "traffic": w.traffic,
        }
        for station_id, w in sorted(computation.station_weights.items())
    }
    dims = {
        label: rng([getattr(v, label) for v in vectors.values()])
        for label in ("length", "traffic", "weather", "events")
    }
    weather_values = [v.weather for v in vectors.values()]
    return {
        "name": bundle.name,
        "recorded_at": bundle.recorded_at.isoformat(),
        "length_mode": mode.value,
        "station_counts": {
            "weather": len(bundle.weather_snapshots),
            "traffic": len(bundle.traffic_snapshots),
        },
        "event_count": len(bundle.events),
        "station_weights": station_weights,
        "dimensions": dims,
        "weather_spread": (max(weather_values) - min(weather_values)) if weather_values else None,
        "data_incomplete_segments": sum(1 for v in vectors.values() if v.data_incomplete),
    }


def weights_snapshot(
    computation: ScenarioComputation,
    network: RoadNetwork,
    mode: LengthMode = LengthMode.RAW_KILOMETERS,
) -> dict:
    """GeoJSON weight map plus the scenario summary, as one document."""
    collection = weights_to_geojson(network, computation.segment_weights(mode))
    collection["summary"] = scenario_summary(computation, mode)
    return collection


class ScenarioCatalog:
    """Loaded scenarios keyed by name, all computed against one network."""

    def __init__(self, network: RoadNetwork, computations: dict[str, ScenarioComputation]):
        self.network = network
        self._computations = computations

    @classmethod
    def from_directory(cls, data_dir: str | Path) -> "ScenarioCatalog":
        """Load ``network.geojson`` (+ optional ``nodes.geojson``) and every
        bundle under ``scenarios/``."""
        data_dir = Path(data_dir)
        network_path = data_dir / "network.geojson"
        if not network_path.is_file():
            raise BundleError(f"no network.geojson under {data_dir}")
        nodes_path = data_dir / "nodes.geojson"
        network = load_network_geojson(
            network_path, nodes_path if nodes_path.is_file() else None
        )

        computations: dict[str, ScenarioComputation] = {}
        scenario_root = data_dir / "scenarios"
        if scenario_root.is_dir():
            for bundle_dir in sorted(scenario_root.iterdir()):
                if not bundle_dir.is_dir():
                    continue
                bundle = parse_scenario_bundle(bundle_dir)
                if bundle.name in computations:
                    raise ConfigurationError(f"duplicate scenario name {bundle.name!r}")
                computations[bundle.name] = compute_scenario(bundle, network)
        return cls(network, computations)

    def names(self) -> list[str]:
        return sorted(self._computations)

    def get(self, name: str) -> ScenarioComputation | None:
        return self._computations.get(name)

    def summaries(self, mode: LengthMode = LengthMode.RAW_KILOMETERS) -> list[dict]:
        return [scenario_summary(self._computations[name], mode) for name in self.names()]


def default_data_dir() -> Path | None:
    configured = os.environ.get(DATA_DIR_ENV)
    return Path(configured) if configured else None
