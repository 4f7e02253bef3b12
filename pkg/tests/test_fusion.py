"""Fusion tests: factor computation, group means, station weights, vector assembly."""

from datetime import timedelta

import pytest
from hypothesis import given
from hypothesis import strategies as st

from keliroute.errors import ConfigurationError, InvalidInputError
from keliroute.fusion import (
    ALL_FACTOR_IDS,
    ENVIRONMENTAL_FACTOR_IDS,
    GroupWeights,
    LengthMode,
    SURFACE_FACTOR_IDS,
    SegmentWeightVector,
    StationWeights,
    VISIBILITY_FACTOR_IDS,
    WeatherFactors,
    assemble_segment_vector,
    compute_group_weights,
    compute_weather_factors,
    event_weight,
    group_weight,
    length_weight,
    station_weather_weights,
    traffic_weight,
    weights_to_geojson,
)
from keliroute.geo import polyline_length_m
from keliroute.graph import RoadSegment, SegmentStations, build_graph
from keliroute.ingest import CanonicalAttributes, TrafficEvent
from keliroute.weights import RoadWorkSeverity, SurfaceState

from conftest import NOW

unit_weights = st.floats(min_value=0.0, max_value=1.0)


def make_segment(sid="s1", length_m=1500.0):
    return RoadSegment(
        id=sid,
        road_number=4,
        geometry=((65.0, 25.0), (65.0, 25.1)),
        length_m=length_m,
    )


class TestFactorLayout:
    def test_fifteen_factor_slots_grouped_7_5_3(self):
        assert len(SURFACE_FACTOR_IDS) == 7
        assert len(VISIBILITY_FACTOR_IDS) == 5
        assert len(ENVIRONMENTAL_FACTOR_IDS) == 3
        assert len(ALL_FACTOR_IDS) == 15
        assert len(set(ALL_FACTOR_IDS)) == 15

    def test_unknown_factor_id_rejected(self):
        with pytest.raises(InvalidInputError):
            WeatherFactors(values={"salt": 0.5})


class TestComputeWeatherFactors:
    def test_friction_and_surface_state_only(self):
        attrs = CanonicalAttributes(
            values={"friction": 0.455}, surface_state=SurfaceState.DRY
        )
        factors = compute_weather_factors(attrs)
        assert factors.values["friction"] == pytest.approx(0.5)
        assert factors.values["surface_condition"] == 0.0
        assert factors.present_count == 2

    def test_empty_attributes_give_no_factors(self):
        factors = compute_weather_factors(CanonicalAttributes())
        assert factors.present_count == 0

    def test_all_inputs_at_zero_endpoints_give_all_zero_factors(self):
        attrs = CanonicalAttributes(
            values={
                "friction": 0.82,
                "moisture": 0.0,
                "snow_depth": 0.0,
                "road_temperature": 5.0,
                "freezing_point": 0.0,  # delta 5.0 -> weight 0
                "surface_dew_diff": 5.0,
                "relative_humidity": 0.0,
                "precipitation_intensity": 0.0,
                "visible_distance": 10000.0,
                "air_dew_diff": 5.0,
                "air_temperature": 14.0,
                "average_wind": 0.0,
                "maximum_wind": 0.0,
            },
            surface_state=SurfaceState.DRY,
            precipitation_type=None,
        )
        factors = compute_weather_factors(attrs)
        assert factors.present_count == 14  # all except precipitation_type
        assert all(v == 0.0 for v in factors.values.values())

    def test_freezing_point_diff_needs_both_inputs(self):
        only_point = compute_weather_factors(
            CanonicalAttributes(values={"freezing_point": -1.0})
        )
        assert "freezing_point_diff" not in only_point.values
        both = compute_weather_factors(
            CanonicalAttributes(values={"freezing_point": -1.0, "road_temperature": -2.0})
        )
        # delta = -1.0 -> clamps to weight 1
        assert both.values["freezing_point_diff"] == 1.0

    def test_dew_frost_selection_follows_reference_temperature(self):
        attrs = CanonicalAttributes(
            values={
                "road_temperature": -5.0,
                "surface_dew_diff": 2.0,
                "surface_frost_diff": 1.0,
            }
        )
        factors = compute_weather_factors(attrs)
        # below freezing: frost difference of 1.0 -> (5 - 1) / 5 = 0.8
        assert factors.values["surface_dew_frost_diff"] == pytest.approx(0.8)

    def test_precipitation_coarse_fallback(self):
        from keliroute.weights import CoarsePrecipitation

        attrs = CanonicalAttributes(coarse_precipitation=CoarsePrecipitation.SLEET_OR_SNOW)
        factors = compute_weather_factors(attrs)
        assert factors.values["precipitation_type"] == pytest.approx(0.722)


class TestGroupAndStationWeights:
    def test_group_mean(self):
        assert group_weight([0.25, 0.5]) == pytest.approx(0.375)

    def test_singleton(self):
        assert group_weight([0.7]) == pytest.approx(0.7)

    def test_empty_is_absent(self):
        assert group_weight([]) is None

    def test_station_weights_all_groups(self):
        full, env = station_weather_weights(
            GroupWeights(surface=0.3, visibility=0.6, environmental=0.0)
        )
        assert full == pytest.approx(0.3)
        assert env == pytest.approx(0.3)

    def test_station_weights_surface_absent(self):
        full, env = station_weather_weights(
            GroupWeights(surface=None, visibility=0.4, environmental=0.2)
        )
        assert full == pytest.approx(0.3)
        assert env == pytest.approx(0.3)

    def test_station_weights_all_absent(self):
        full, env = station_weather_weights(
            GroupWeights(surface=None, visibility=None, environmental=None)
        )
        assert full is None and env is None

    @given(
        st.one_of(st.none(), unit_weights),
        st.one_of(st.none(), unit_weights),
        st.one_of(st.none(), unit_weights),
    )
    def test_full_equals_environmental_when_surface_absent(self, vis, env, _unused):
        full, environmental = station_weather_weights(
            GroupWeights(surface=None, visibility=vis, environmental=env)
        )
        assert full == environmental

    @given(unit_weights, st.lists(unit_weights, min_size=0, max_size=6))
    def test_adding_factor_moves_mean_toward_it(self, new_value, existing):
        before = group_weight(existing)
        after = group_weight(existing + [new_value])
        assert after is not None
        if before is None:
            assert after == pytest.approx(new_value)
        elif new_value >= before:
            assert before - 1e-12 <= after <= new_value + 1e-12
        else:
            assert new_value - 1e-12 <= after <= before + 1e-12

    def test_traffic_weight_combinations(self):
        assert traffic_weight(0.2, 0.4) == pytest.approx(0.3)
        assert traffic_weight(0.2, None) == pytest.approx(0.2)
        assert traffic_weight(None, None) is None


class TestEventAndLengthWeights:
    @pytest.mark.parametrize(
        "roadwork, accident, expected",
        [(0.66, 1.0, 1.0), (0.0, 0.0, 0.0), (0.33, 0.0, 0.33), (1.0, 0.0, 1.0)],
    )
    def test_event_weight_is_max(self, roadwork, accident, expected):
        assert event_weight(roadwork, accident) == pytest.approx(expected)

    def test_event_weight_max_over_all_table_pairs(self):
        from keliroute.weights import road_work_weight

        for severity in RoadWorkSeverity:
            for active in (False, True):
                rw = road_work_weight(severity)
                acc = 1.0 if active else 0.0
                assert event_weight(rw, acc) == max(rw, acc)

    def test_event_weight_rejects_out_of_range(self):
        with pytest.raises(InvalidInputError):
            event_weight(1.5, 0.0)

    def test_length_raw_kilometers(self):
        assert length_weight(1500.0, LengthMode.RAW_KILOMETERS) == pytest.approx(1.5)

    def test_length_normalized(self):
        assert length_weight(1500.0, LengthMode.NORMALIZED_BY_MAX, 10000.0) == pytest.approx(0.15)

    def test_max_length_segment_normalizes_to_one(self):
        assert length_weight(10000.0, LengthMode.NORMALIZED_BY_MAX, 10000.0) == pytest.approx(1.0)

    def test_normalized_requires_normalizer(self):
        with pytest.raises(ConfigurationError):
            length_weight(1500.0, LengthMode.NORMALIZED_BY_MAX)

    def test_nonpositive_length_rejected(self):
        with pytest.raises(InvalidInputError):
            length_weight(0.0, LengthMode.RAW_KILOMETERS)


def stations(same_road=True, secondary=None):
    return SegmentStations(
        weather_station_id="w1",
        same_road=same_road,
        traffic_station_id="t1",
        secondary_weather_station_id=secondary,
    )


WEIGHTS = {
    "w1": StationWeights(full_weather=0.6, environmental_weather=0.4),
    "w2": StationWeights(full_weather=0.9, environmental_weather=0.7),
    "t1": StationWeights(traffic=0.3),
}


class TestAssembleSegmentVector:
    def test_same_road_uses_full_weather(self):
        vector = assemble_segment_vector(
            make_segment(), stations(same_road=True), WEIGHTS, [], NOW
        )
        assert vector.weather == pytest.approx(0.6)
        assert vector.traffic == pytest.approx(0.3)
        assert vector.length == pytest.approx(1.5)
        assert vector.events == 0.0
        assert vector.data_incomplete is False

    def test_off_road_uses_environmental_weather(self):
        vector = assemble_segment_vector(
            make_segment(), stations(same_road=False), WEIGHTS, [], NOW
        )
        assert vector.weather == pytest.approx(0.4)

    def test_silent_primary_falls_back_to_secondary_environmental(self):
        weights = dict(WEIGHTS)
        weights["w1"] = StationWeights()  # produced nothing
        vector = assemble_segment_vector(
            make_segment(), stations(same_road=True, secondary="w2"), weights, [], NOW
        )
        assert vector.weather == pytest.approx(0.7)  # environmental, never full
        assert vector.data_incomplete is False

    def test_missing_everything_flags_incomplete(self):
        weights = {"w1": StationWeights(), "t1": StationWeights()}
        vector = assemble_segment_vector(make_segment(), stations(), weights, [], NOW)
        assert vector.weather == 0.0
        assert vector.traffic == 0.0
        assert vector.data_incomplete is True

    def test_events_roll_into_vector(self):
        events = [
            TrafficEvent(
                event_id="rw",
                kind="road_work",
                published_at=NOW - timedelta(hours=3),
                severity=RoadWorkSeverity.HIGH,
                affected_segments=("s1",),
            ),
            TrafficEvent(
                event_id="acc",
                kind="accident_preliminary",
                published_at=NOW - timedelta(minutes=10),
                affected_segments=("s1",),
            ),
        ]
        vector = assemble_segment_vector(make_segment(), stations(), WEIGHTS, events, NOW)
        assert vector.events == 1.0  # max(0.66, 1.0)

    def test_normalized_mode(self):
        vector = assemble_segment_vector(
            make_segment(length_m=2500.0),
            stations(),
            WEIGHTS,
            [],
            NOW,
            mode=LengthMode.NORMALIZED_BY_MAX,
            normalizer_m=10000.0,
        )
        assert vector.length == pytest.approx(0.25)

    def test_vector_invariants_enforced(self):
        with pytest.raises(InvalidInputError):
            SegmentWeightVector(length=1.0, traffic=1.5, weather=0.0, events=0.0)
        with pytest.raises(InvalidInputError):
            SegmentWeightVector(length=-0.1, traffic=0.0, weather=0.0, events=0.0)


class TestWeightsGeoJson:
    def test_export_shape(self):
        coords = [(65.0, 25.0), (65.0, 25.1)]
        segment = RoadSegment(
            id="s1", road_number=4, geometry=tuple(coords), length_m=polyline_length_m(coords)
        )
        network = build_graph([segment])
        vector = SegmentWeightVector(
            length=1.5, traffic=0.3, weather=0.6, events=0.0, data_incomplete=False
        )
        collection = weights_to_geojson(network, {"s1": vector})
        feature = collection["features"][0]
        assert feature["geometry"]["coordinates"][0] == [25.0, 65.0]
        assert feature["properties"]["weather"] == pytest.approx(0.6)
        assert feature["properties"]["data_incomplete"] is False
