"""Great-circle geometry helpers.

All coordinates are (lat, lon) in WGS84 degrees; distances are meters on a
sphere of mean radius 6371008.8 m. Point-on-segment projections use a local
tangent-plane approximation, which is accurate to well under a millimeter at
the meter-scale tolerances used for snapping. Chord helpers assume road-segment
scale geometry (up to a few tens of km), not continental arcs.
"""

from __future__ import annotations

import math

from .errors import InvalidInputError

EARTH_RADIUS_M = 6371008.8

LatLon = tuple[float, float]


def haversine_m(a: LatLon, b: LatLon) -> float:
    """Great-circle distance between two (lat, lon) points in meters."""
    lat1, lon1 = math.radians(a[0]), math.radians(a[1])
    lat2, lon2 = math.radians(b[0]), math.radians(b[1])
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    h = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def polyline_length_m(points: list[LatLon]) -> float:
    """Sum of great-circle distances between consecutive points."""
    if len(points) < 2:
        raise InvalidInputError(f"polyline needs at least 2 points, got {len(points)}")
    return sum(haversine_m(points[i], points[i + 1]) for i in range(len(points) - 1))


def point_at_fraction(points: list[LatLon], fraction: float) -> LatLon:
    """Point at the given fraction of the polyline's arc length.

    Interpolates linearly in degrees within the containing chord.
    """
    if len(points) < 2:
        raise InvalidInputError("polyline needs at least 2 points")
    fraction = min(1.0, max(0.0, fraction))
    total = polyline_length_m(points)
    if total == 0.0:
        return points[0]
    target = fraction * total
    walked = 0.0
    for i in range(len(points) - 1):
        step = haversine_m(points[i], points[i + 1])
        if walked + step >= target and step > 0.0:
            t = (target - walked) / step
            return _lerp(points[i], points[i + 1], t)
        walked += step
    return points[-1]


def polyline_midpoint(points: list[LatLon]) -> LatLon:
    """Point at half the polyline's arc length (orientation independent)."""
    return point_at_fraction(points, 0.5)


def project_onto_chord(p: LatLon, a: LatLon, b: LatLon) -> tuple[float, float, LatLon]:
    """Project ``p`` onto the chord a-b in a local tangent plane.

    Returns (t, distance_m, closest_point) with t clamped to [0, 1] and the
    closest point interpolated in degrees along the chord.
    """
    lat0 = math.radians(a[0])
    scale_x = math.cos(lat0) * EARTH_RADIUS_M
    scale_y = EARTH_RADIUS_M

    def to_plane(q: LatLon) -> tuple[float, float]:
        return (
            math.radians(q[1] - a[1]) * scale_x,
            math.radians(q[0] - a[0]) * scale_y,
        )

    bx, by = to_plane(b)
    px, py = to_plane(p)
    denom = bx * bx + by * by
    if denom == 0.0:
        return 0.0, haversine_m(p, a), a
    t = min(1.0, max(0.0, (px * bx + py * by) / denom))
    closest = _lerp(a, b, t)
    return t, haversine_m(p, closest), closest


def nearest_on_polyline(points: list[LatLon], p: LatLon) -> tuple[float, int, float, LatLon]:
    """Closest point of a polyline to ``p``.

    Returns (distance_m, chord_index, t_along_chord, point); ties prefer the
    earliest chord so the result is deterministic.
    """
    if len(points) < 2:
        raise InvalidInputError("polyline needs at least 2 points")
    best: tuple[float, int, float, LatLon] | None = None
    for i in range(len(points) - 1):
        t, dist, closest = project_onto_chord(p, points[i], points[i + 1])
        if best is None or dist < best[0]:
            best = (dist, i, t, closest)
    assert best is not None
    return best


def _lerp(a: LatLon, b: LatLon, t: float) -> LatLon:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)
