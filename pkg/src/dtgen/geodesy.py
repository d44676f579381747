"""Conversion between WGS84 geodetic coordinates and a local metric frame.

Equirectangular tangent-plane projection anchored at the world origin:
x grows east, y grows north, both in meters. Good to well under 0.5% over
a few kilometers at moderate latitudes, and exactly invertible, which is
all a flat low-fidelity world needs. The same origin is written into the
emitted world's spherical-coordinates element so GPS replay stays
consistent with the generated geometry.
"""

import math
from dataclasses import dataclass

from .osm import BoundingBox

EARTH_RADIUS_M = 6378137.0  # WGS84 equatorial radius
MAX_ORIGIN_LAT_DEG = 89.0


@dataclass(frozen=True)
class GeoOrigin:
    lat0: float
    lon0: float

    def __post_init__(self):
        if not (math.isfinite(self.lat0) and math.isfinite(self.lon0)):
            raise ValueError("origin coordinates must be finite")
        if abs(self.lat0) >= MAX_ORIGIN_LAT_DEG:
            raise ValueError(
                f"origin latitude {self.lat0} is too close to a pole; "
                f"|lat| must stay below {MAX_ORIGIN_LAT_DEG} degrees"
            )


@dataclass(frozen=True)
class LocalPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("local coordinates must be finite")


def origin_of(bbox: BoundingBox) -> GeoOrigin:
    """Origin at the bbox center; rejected near the poles."""
    return GeoOrigin(
        lat0=(bbox.min_lat + bbox.max_lat) / 2.0,
        lon0=(bbox.min_lon + bbox.max_lon) / 2.0,
    )


def project(origin: GeoOrigin, lat: float, lon: float) -> LocalPoint:
    """Project geodetic degrees to local east/north meters."""
    if not (math.isfinite(lat) and math.isfinite(lon)):
        raise ValueError("latitude and longitude must be finite")
    x = EARTH_RADIUS_M * math.radians(lon - origin.lon0) * math.cos(math.radians(origin.lat0))
    y = EARTH_RADIUS_M * math.radians(lat - origin.lat0)
    return LocalPoint(x, y)


def unproject(origin: GeoOrigin, point: LocalPoint) -> tuple[float, float]:
    """Exact inverse of :func:`project`; returns (lat, lon) degrees."""
    lat = origin.lat0 + math.degrees(point.y / EARTH_RADIUS_M)
    lon = origin.lon0 + math.degrees(
        point.x / (EARTH_RADIUS_M * math.cos(math.radians(origin.lat0)))
    )
    return lat, lon
