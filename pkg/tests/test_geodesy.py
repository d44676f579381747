import math

import numpy as np
import pytest

from dtgen.geodesy import EARTH_RADIUS_M, GeoOrigin, LocalPoint, origin_of, project, unproject
from dtgen.osm import BoundingBox


def haversine_m(lat1, lon1, lat2, lon2, radius=EARTH_RADIUS_M):
    """Great-circle distance oracle on the same reference sphere."""
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp = p2 - p1
    dl = math.radians(lon2 - lon1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * radius * math.asin(math.sqrt(a))


class TestOriginOf:
    def test_center_of_simple_box(self):
        origin = origin_of(BoundingBox(0.0, 0.0, 2.0, 4.0))
        assert origin == GeoOrigin(1.0, 2.0)

    def test_center_of_map_box(self):
        origin = origin_of(BoundingBox(48.0, 8.0, 48.1, 8.2))
        assert origin.lat0 == pytest.approx(48.05, abs=1e-12)
        assert origin.lon0 == pytest.approx(8.1, abs=1e-12)

    def test_rejects_near_pole(self):
        with pytest.raises(ValueError):
            origin_of(BoundingBox(89.0, 0.0, 89.9, 1.0))


class TestProject:
    def test_origin_maps_to_zero(self):
        origin = GeoOrigin(48.05, 8.1)
        assert project(origin, 48.05, 8.1) == LocalPoint(0.0, 0.0)

    def test_one_millidegree_north_at_equator(self):
        origin = GeoOrigin(0.0, 0.0)
        p = project(origin, 0.001, 0.0)
        assert p.x == 0.0
        assert p.y == pytest.approx(111.3194, abs=1e-3)
        # cross-check against the great-circle oracle
        assert p.y == pytest.approx(haversine_m(0.0, 0.0, 0.001, 0.0), rel=1e-9)

    def test_one_millidegree_east_at_60_north(self):
        origin = GeoOrigin(60.0, 0.0)
        p = project(origin, 60.0, 0.001)
        assert p.y == 0.0
        assert p.x == pytest.approx(55.6597, abs=1e-3)
        assert p.x == pytest.approx(haversine_m(60.0, 0.0, 60.0, 0.001), rel=1e-5)

    def test_rejects_non_finite(self):
        origin = GeoOrigin(0.0, 0.0)
        with pytest.raises(ValueError):
            project(origin, math.nan, 0.0)
        with pytest.raises(ValueError):
            project(origin, 0.0, math.inf)


class TestUnproject:
    def test_zero_maps_to_origin(self):
        origin = GeoOrigin(48.05, 8.1)
        assert unproject(origin, LocalPoint(0.0, 0.0)) == (48.05, 8.1)

    def test_inverts_the_northward_example(self):
        origin = GeoOrigin(0.0, 0.0)
        lat, lon = unproject(origin, LocalPoint(0.0, 111.3194))
        assert lat == pytest.approx(0.001, abs=1e-8)
        assert lon == 0.0

    def test_round_trip_within_tenth_degree(self):
        origin = GeoOrigin(48.0, 8.0)
        rng = np.random.default_rng(7)
        for _ in range(200):
            lat = 48.0 + rng.uniform(-0.1, 0.1)
            lon = 8.0 + rng.uniform(-0.1, 0.1)
            p = project(origin, lat, lon)
            lat2, lon2 = unproject(origin, p)
            assert abs(lat2 - lat) < 1e-9
            assert abs(lon2 - lon) < 1e-9


def test_projection_is_affine_in_lat_lon():
    origin = GeoOrigin(48.0, 8.0)
    rng = np.random.default_rng(11)
    for _ in range(100):
        lat_a, lat_b = 48.0 + rng.uniform(-0.1, 0.1, 2)
        lon_a, lon_b = 8.0 + rng.uniform(-0.1, 0.1, 2)
        mid = project(origin, (lat_a + lat_b) / 2, (lon_a + lon_b) / 2)
        pa = project(origin, lat_a, lon_a)
        pb = project(origin, lat_b, lon_b)
        assert mid.x == pytest.approx((pa.x + pb.x) / 2, abs=1e-9)
        assert mid.y == pytest.approx((pa.y + pb.y) / 2, abs=1e-9)


def test_planar_distance_matches_haversine_within_half_percent():
    rng = np.random.default_rng(42)
    for _ in range(300):
        lat0 = rng.uniform(-70.0, 70.0)
        lon0 = rng.uniform(-180.0, 180.0)
        origin = GeoOrigin(lat0, lon0)
        # two points within ~2.5 km of the origin -> pair under 5 km apart
        scale_lat = 0.0225
        scale_lon = 0.0225 / math.cos(math.radians(lat0))
        lat1, lat2 = lat0 + rng.uniform(-scale_lat, scale_lat, 2)
        lon1, lon2 = lon0 + rng.uniform(-scale_lon, scale_lon, 2)
        truth = haversine_m(lat1, lon1, lat2, lon2)
        if truth < 1.0:
            continue
        p1 = project(origin, lat1, lon1)
        p2 = project(origin, lat2, lon2)
        planar = math.hypot(p2.x - p1.x, p2.y - p1.y)
        assert abs(planar - truth) / truth < 0.005
