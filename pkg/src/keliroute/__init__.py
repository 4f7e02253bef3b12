"""Road-weather aware, preference-weighted route recommendations.

The pipeline: ingest station snapshots and traffic events, map every sensor
attribute onto a unit weight, fuse the weights into per-segment 4-dimensional
cost vectors (length, traffic, weather, events), and run a deterministic
preference-weighted Dijkstra over the road network.
"""

from .errors import (
    BundleError,
    ConfigurationError,
    GraphConstructionError,
    InvalidInputError,
    KelirouteError,
    NoRouteError,
    ParseError,
    TransportError,
    UnknownAttributeError,
)
from .fusion import (
    GroupWeights,
    LengthMode,
    SegmentWeightVector,
    StationWeights,
    WeatherFactors,
    assemble_segment_vector,
    compute_weather_factors,
    event_weight,
    group_weight,
    length_weight,
    station_weather_weights,
    traffic_weight,
)
from .graph import (
    Node,
    RawPolyline,
    RoadNetwork,
    RoadSegment,
    SegmentStations,
    assign_stations,
    build_graph,
    load_network_geojson,
    nearest_node,
    split_at_nodes,
)
from .ingest import (
    CanonicalAttributes,
    ScenarioBundle,
    SensorReading,
    StationMeta,
    StationSnapshot,
    TrafficEvent,
    accident_active,
    apply_ffs_correction,
    canonicalize,
    freezing_point_delta,
    parse_scenario_bundle,
    resolve_point_difference,
    resolve_precipitation,
    roadwork_severity_for_segment,
    write_scenario_bundle,
)
from .pipeline import ScenarioCatalog, compute_scenario, scenario_summary, weights_snapshot
from .routing import (
    ImportanceRating,
    PreferenceVector,
    Route,
    edge_cost,
    load_profile,
    preference_from_ratings,
    route_breakdown,
    shortest_route,
)
from .weights import (
    CoarsePrecipitation,
    LinearScale,
    PrecipitationType,
    RoadWorkSeverity,
    SurfaceState,
    WeightConfig,
    accident_weight,
    air_temperature_weight,
    attribute_scale_weight,
    coarse_precipitation_weight,
    linear_scale_weight,
    precipitation_type_weight,
    road_temperature_weight,
    road_work_weight,
    surface_state_weight,
)

__version__ = "0.1.0"
