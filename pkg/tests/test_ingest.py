"""Ingestion tests: canonicalization, fallback chains, event rules, bundle I/O."""

from datetime import timedelta

import pytest
from hypothesis import given
from hypothesis import strategies as st

from keliroute.errors import BundleError, InvalidInputError, ParseError
from keliroute.ingest import (
    CanonicalAttributes,
    SensorReading,
    StationMeta,
    TrafficEvent,
    accident_active,
    apply_ffs_correction,
    canonicalize,
    freezing_point_delta,
    parse_scenario_bundle,
    resolve_point_difference,
    resolve_precipitation,
    roadwork_severity_for_segment,
    warn_unknown_ffs_overrides,
    write_scenario_bundle,
)
from keliroute.weights import (
    SCALE_REGISTRY,
    CoarsePrecipitation,
    PrecipitationType,
    RoadWorkSeverity,
    SurfaceState,
    linear_scale_weight,
)

from conftest import NOW, station_json, write_bundle


def reading(name, value, sensor_id=1):
    return SensorReading(sensor_id=sensor_id, name=name, value=value)


class TestCanonicalize:
    def test_duplicates_are_averaged(self):
        attrs = canonicalize([reading("TIE_1", 1.0), reading("TIE_3", 2.0, sensor_id=3)])
        assert attrs.get("road_temperature") == pytest.approx(1.5)

    def test_singleton_mean(self):
        attrs = canonicalize([reading("TIE_2", -3.0)])
        assert attrs.get("road_temperature") == pytest.approx(-3.0)

    def test_empty_input(self):
        attrs = canonicalize([])
        assert attrs.values == {}
        assert attrs.surface_state is None

    def test_unmapped_names_dropped(self):
        attrs = canonicalize([reading("XYZZY", 42.0)])
        assert attrs.values == {}

    def test_categorical_codes_translated(self):
        attrs = canonicalize(
            [reading("surface_condition", 9), reading("precipitation_type", 9, sensor_id=2)]
        )
        assert attrs.surface_state is SurfaceState.SLUSH
        assert attrs.precipitation_type is PrecipitationType.FREEZING_RAIN

    def test_unknown_code_dropped(self):
        attrs = canonicalize([reading("surface_condition", 99)])
        assert attrs.surface_state is None

    def test_categorical_duplicates_resolve_to_worst(self):
        attrs = canonicalize(
            [reading("KELI_1", 1), reading("KELI_2", 7, sensor_id=2)]  # dry vs ice
        )
        assert attrs.surface_state is SurfaceState.ICE

    @given(
        st.permutations(
            [("TIE_1", 1.0), ("TIE_2", 2.0), ("friction", 0.5), ("moisture", 3.0), ("TIE_4", 6.0)]
        )
    )
    def test_permutation_invariant(self, ordering):
        readings = [reading(name, value, sensor_id=i + 1) for i, (name, value) in enumerate(ordering)]
        attrs = canonicalize(readings)
        assert attrs.get("road_temperature") == pytest.approx(3.0)
        assert attrs.get("friction") == pytest.approx(0.5)
        assert attrs.get("moisture") == pytest.approx(3.0)

    def test_idempotent_on_canonical_input(self):
        first = canonicalize([reading("TIE_1", 1.0), reading("friction", 0.4, sensor_id=2)])
        again = canonicalize(
            [reading(name, value, sensor_id=i + 1) for i, (name, value) in enumerate(first.values.items())]
        )
        assert again.values == first.values


class TestFallbackChains:
    def test_detailed_precipitation_preferred(self):
        attrs = CanonicalAttributes(
            precipitation_type=PrecipitationType.SNOW,
            coarse_precipitation=CoarsePrecipitation.SLEET_OR_SNOW,
        )
        assert resolve_precipitation(attrs) is PrecipitationType.SNOW

    def test_coarse_used_when_detailed_absent(self):
        attrs = CanonicalAttributes(coarse_precipitation=CoarsePrecipitation.SLEET_OR_SNOW)
        assert resolve_precipitation(attrs) is CoarsePrecipitation.SLEET_OR_SNOW

    def test_absent_when_neither(self):
        assert resolve_precipitation(CanonicalAttributes()) is None

    def test_point_difference_above_freezing_uses_dew(self):
        attrs = CanonicalAttributes(values={"surface_dew_diff": 3.0, "surface_frost_diff": 4.0})
        assert resolve_point_difference(attrs, "surface", 5.0) == pytest.approx(3.0)

    def test_point_difference_below_freezing_uses_frost(self):
        attrs = CanonicalAttributes(values={"surface_dew_diff": 2.0, "surface_frost_diff": 1.0})
        assert resolve_point_difference(attrs, "surface", -5.0) == pytest.approx(1.0)

    def test_point_difference_frost_missing_falls_back_to_dew(self):
        attrs = CanonicalAttributes(values={"surface_dew_diff": 2.0})
        assert resolve_point_difference(attrs, "surface", -5.0) == pytest.approx(2.0)

    def test_point_difference_absent_when_no_attributes(self):
        assert resolve_point_difference(CanonicalAttributes(), "air", 10.0) is None

    def test_point_difference_air_context(self):
        attrs = CanonicalAttributes(values={"air_dew_diff": 1.0, "air_frost_diff": 0.5})
        assert resolve_point_difference(attrs, "air", 2.0) == pytest.approx(1.0)
        assert resolve_point_difference(attrs, "air", -2.0) == pytest.approx(0.5)

    def test_point_difference_rejects_bad_context(self):
        with pytest.raises(InvalidInputError):
            resolve_point_difference(CanonicalAttributes(), "ground", 0.0)

    def test_freezing_point_delta(self):
        assert freezing_point_delta(1.0, -0.5) == pytest.approx(1.5)
        assert freezing_point_delta(0.0, 0.0) == 0.0

    def test_negative_delta_clamps_to_full_weight_downstream(self):
        delta = freezing_point_delta(-2.0, -1.0)
        assert delta == pytest.approx(-1.0)
        assert linear_scale_weight(delta, SCALE_REGISTRY["temp_point_diff"]) == 1.0

    def test_freezing_point_delta_rejects_non_finite(self):
        with pytest.raises(InvalidInputError):
            freezing_point_delta(float("nan"), 0.0)


def event(event_id, kind, minutes_ago, segments=("s1",), severity=None, situation_id=None):
    return TrafficEvent(
        event_id=event_id,
        kind=kind,
        published_at=NOW - timedelta(minutes=minutes_ago),
        severity=severity,
        affected_segments=tuple(segments),
        situation_id=situation_id,
    )


class TestAccidentRule:
    def test_fresh_preliminary_is_active(self):
        events = [event("e1", "accident_preliminary", 10)]
        assert accident_active(events, NOW) == {"s1": True}

    def test_stale_preliminary_expires(self):
        events = [event("e1", "accident_preliminary", 40)]
        assert accident_active(events, NOW) == {"s1": False}

    def test_boundary_thirty_minutes_still_active(self):
        events = [event("e1", "accident_preliminary", 30)]
        assert accident_active(events, NOW) == {"s1": True}

    def test_report_stays_active_without_all_clear(self):
        events = [event("e1", "accident_report", 120)]
        assert accident_active(events, NOW) == {"s1": True}

    def test_report_cleared_by_later_ended(self):
        events = [
            event("e1", "accident_report", 120, situation_id="sit-1"),
            event("e2", "ended", 60, situation_id="sit-1"),
        ]
        assert accident_active(events, NOW) == {"s1": False}

    def test_ended_for_other_situation_does_not_clear(self):
        events = [
            event("e1", "general_accident", 120, situation_id="sit-1"),
            event("e2", "ended", 60, situation_id="sit-other"),
        ]
        assert accident_active(events, NOW) == {"s1": True}

    def test_situation_linked_by_identical_coverage_when_no_id(self):
        events = [
            event("e1", "accident_report", 120, segments=("s1", "s2")),
            event("e2", "ended", 60, segments=("s2", "s1")),
        ]
        assert accident_active(events, NOW) == {"s1": False, "s2": False}

    @given(st.integers(min_value=31, max_value=10_000))
    def test_preliminary_expiry_is_monotone_in_time(self, extra_minutes):
        """Once a lone preliminary report has expired it never reactivates."""
        events = [event("e1", "accident_preliminary", 31)]
        later = NOW + timedelta(minutes=extra_minutes)
        assert accident_active(events, later) == {"s1": False}


class TestRoadWorkRule:
    def test_no_events_means_none(self):
        assert roadwork_severity_for_segment([], "s1") is RoadWorkSeverity.NONE

    def test_single_low(self):
        events = [event("e1", "road_work", 5, severity=RoadWorkSeverity.LOW)]
        assert roadwork_severity_for_segment(events, "s1") is RoadWorkSeverity.LOW

    @pytest.mark.parametrize("a", list(RoadWorkSeverity))
    @pytest.mark.parametrize("b", list(RoadWorkSeverity))
    def test_overlapping_events_take_maximum(self, a, b):
        """Brute force over every severity pair: result is the weight-maximal one."""
        events = []
        if a is not RoadWorkSeverity.NONE:
            events.append(event("e1", "road_work", 5, severity=a))
        if b is not RoadWorkSeverity.NONE:
            events.append(event("e2", "road_work", 9, severity=b))
        from keliroute.weights import road_work_weight

        expected = max((a, b), key=road_work_weight)
        assert roadwork_severity_for_segment(events, "s1") is expected

    def test_adding_events_never_decreases(self):
        events = [event("e1", "road_work", 5, severity=RoadWorkSeverity.LOW)]
        from keliroute.weights import road_work_weight

        before = road_work_weight(roadwork_severity_for_segment(events, "s1"))
        events.append(event("e2", "road_work", 1, severity=RoadWorkSeverity.HIGHEST))
        after = road_work_weight(roadwork_severity_for_segment(events, "s1"))
        assert after >= before

    def test_segment_not_covered(self):
        events = [event("e1", "road_work", 5, segments=("other",), severity=RoadWorkSeverity.HIGH)]
        assert roadwork_severity_for_segment(events, "s1") is RoadWorkSeverity.NONE


class TestFfsCorrection:
    meta = StationMeta("t1", "traffic", (65.0, 25.5), ffs_dir1=80.0, ffs_dir2=78.0)

    def test_override_applied(self):
        corrected = apply_ffs_correction(self.meta, {"t1": (60.0, 58.0)})
        assert (corrected.ffs_dir1, corrected.ffs_dir2) == (60.0, 58.0)

    def test_no_override_is_identity(self):
        assert apply_ffs_correction(self.meta, {}) is self.meta

    def test_non_positive_override_rejected(self, caplog):
        with caplog.at_level("WARNING"):
            corrected = apply_ffs_correction(self.meta, {"t1": (0.0, 58.0)})
        assert corrected == self.meta
        assert "non-positive" in caplog.text

    def test_unknown_station_override_warns(self, caplog):
        with caplog.at_level("WARNING"):
            unknown = warn_unknown_ffs_overrides([self.meta], {"ghost": (60.0, 58.0)})
        assert unknown == ["ghost"]
        assert "ghost" in caplog.text


class TestBundleIO:
    def test_valid_two_station_bundle(self, two_station_bundle):
        bundle = parse_scenario_bundle(two_station_bundle)
        assert bundle.report.weather_station_count == 1
        assert bundle.report.traffic_station_count == 1
        assert bundle.report.event_count == 0
        assert bundle.weather_snapshots[0].station_id == "w1"
        assert bundle.weather_snapshots[0].readings[1].value == pytest.approx(0.455)

    def test_unknown_sensor_flagged(self, tmp_path):
        path = write_bundle(
            tmp_path / "b",
            weather_stations=[station_json("w1", 65.0, 25.5, [("XYZZY", 1.0)])],
        )
        bundle = parse_scenario_bundle(path)
        assert bundle.report.unknown_sensor_names == ("XYZZY",)
        assert bundle.weather_snapshots[0].readings[0].name == "XYZZY"

    def test_truncated_file_names_path(self, two_station_bundle):
        target = two_station_bundle / "weather_stations.json"
        target.write_text(target.read_text()[:25])
        with pytest.raises(ParseError) as excinfo:
            parse_scenario_bundle(two_station_bundle)
        assert "weather_stations.json" in str(excinfo.value)

    def test_missing_mandatory_file(self, two_station_bundle):
        (two_station_bundle / "events.json").unlink()
        with pytest.raises(BundleError) as excinfo:
            parse_scenario_bundle(two_station_bundle)
        assert "events.json" in str(excinfo.value)

    def test_bad_coordinates_rejected(self, tmp_path):
        path = write_bundle(
            tmp_path / "b",
            weather_stations=[station_json("w1", 91.0, 25.5, [])],
        )
        with pytest.raises(ParseError):
            parse_scenario_bundle(path)

    def test_roundtrip_is_fixed_point(self, tmp_path, two_station_bundle):
        original = parse_scenario_bundle(two_station_bundle)
        rewritten_dir = write_scenario_bundle(original, tmp_path / "rewritten")
        reparsed = parse_scenario_bundle(rewritten_dir)
        assert reparsed == original
        # second round trip produces byte-identical files
        again_dir = write_scenario_bundle(reparsed, tmp_path / "again")
        for name in ("scenario.json", "weather_stations.json", "events.json"):
            assert (again_dir / name).read_bytes() == (rewritten_dir / name).read_bytes()

    def test_overrides_parsed(self, tmp_path):
        path = write_bundle(
            tmp_path / "b",
            overrides={
                "sensor_mapping.json": {"WXT_WIND": "average_wind"},
                "ffs_overrides.json": {"t9": [60, 58]},
                "assignment_overrides.json": {
                    "forced_weather_station": {"seg-1": "w2"},
                    "secondary_weather_station": {"w1": "w2"},
                },
            },
        )
        bundle = parse_scenario_bundle(path)
        assert bundle.overrides.sensor_mapping == {"WXT_WIND": "average_wind"}
        assert bundle.overrides.ffs_overrides == {"t9": (60.0, 58.0)}
        assert bundle.overrides.forced_weather_station == {"seg-1": "w2"}
        assert bundle.overrides.secondary_weather_station == {"w1": "w2"}
        assert bundle.sensor_mapping()["WXT_WIND"] == "average_wind"
        assert bundle.sensor_mapping()["TIE_1"] == "road_temperature"

    def test_mapping_to_unknown_canonical_rejected(self, tmp_path):
        path = write_bundle(
            tmp_path / "b",
            overrides={"sensor_mapping.json": {"WXT": "salt_amount"}},
        )
        with pytest.raises(ParseError):
            parse_scenario_bundle(path)

    def test_event_parsing(self, tmp_path):
        path = write_bundle(
            tmp_path / "b",
            events=[
                {
                    "event_id": "ev1",
                    "kind": "road_work",
                    "severity": "high",
                    "segment_ids": ["s1", "s2"],
                    "published_at": "2024-10-15T06:00:00Z",
                },
                {
                    "event_id": "ev2",
                    "kind": "accident_preliminary",
                    "segment_ids": ["s3"],
                    "published_at": "2024-10-15T08:21:00Z",
                    "situation_id": "sit-7",
                },
            ],
        )
        bundle = parse_scenario_bundle(path)
        assert bundle.events[0].severity is RoadWorkSeverity.HIGH
        assert bundle.events[1].situation_id == "sit-7"

    def test_accident_with_severity_rejected(self, tmp_path):
        path = write_bundle(
            tmp_path / "b",
            events=[
                {
                    "event_id": "ev1",
                    "kind": "accident_report",
                    "severity": "high",
                    "segment_ids": ["s1"],
                    "published_at": "2024-10-15T06:00:00Z",
                }
            ],
        )
        with pytest.raises(ParseError):
            parse_scenario_bundle(path)
