"""SDFormat world emission and structural validation.

Emission happens in two stages: ``emit_*`` turn domain objects into small
fragment records that keep exact float geometry, and the serializer renders
those fragments with fixed-precision formatting so identical inputs always
produce byte-identical files. ``validate_sdf`` re-parses emitted (or foreign)
files and reports structural violations instead of raising.
"""

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .config import GenerationConfig, VehicleKind, VehicleSpec, resolve_spawn
from .errors import EmitError
from .geodesy import GeoOrigin
from .world_model import Building, Road

WORLD_NAME = "generated"
GROUND_PLANE_NAME = "ground_plane"
GROUND_VISUAL_SIZE_M = 5000.0
ROAD_COLOR = "0.3 0.3 0.3 1"
BUILDING_COLOR = "0.7 0.7 0.7 1"
WHEEL_WIDTH_M = 0.2
SPIN_LIMIT = 1e16
_HALF_PI = math.pi / 2


def fmt(value: float) -> str:
    """9-significant-digit form; keeps emitted files byte-stable."""
    v = float(value)
    if v == 0.0:
        v = 0.0  # normalize -0.0
    return f"{v:.9g}"


def fmt_deg(value: float) -> str:
    # 12 significant digits: geodetic degrees need ~1e-9 deg resolution,
    # which 9 digits cannot carry for two/three-digit latitudes.
    v = float(value)
    if v == 0.0:
        v = 0.0
    return f"{v:.12g}"


@dataclass(frozen=True)
class BuildingFragment:
    name: str
    points: tuple[tuple[float, float], ...]
    height: float


@dataclass(frozen=True)
class RoadSegment:
    x: float
    y: float
    z: float
    yaw: float
    length: float
    width: float
    thickness: float


@dataclass(frozen=True)
class RoadFragment:
    name: str
    segments: tuple[RoadSegment, ...]


@dataclass(frozen=True)
class VehicleFragment:
    name: str
    kind: VehicleKind
    gps: bool
    x: float
    y: float
    yaw: float
    wheelbase: float
    track: float
    wheel_radius: float
    max_steer_angle: float
    chassis_length: float
    chassis_width: float
    chassis_height: float


@dataclass(frozen=True)
class ValidationIssue:
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class SdfWorld:
    version: str
    origin: GeoOrigin
    building_models: tuple[BuildingFragment, ...]
    road_models: tuple[RoadFragment, ...]
    vehicle_models: tuple[VehicleFragment, ...]
    text: str


class _XmlWriter:
    """Indented line emitter; tiny enough to beat templating for nested SDF."""

    def __init__(self, level: int = 0, step: str = "  "):
        self._lines: list[str] = []
        self._level = level
        self._step = step

    def line(self, text: str) -> None:
        self._lines.append(self._step * self._level + text)

    def element(self, tag: str, text: str) -> None:
        self.line(f"<{tag}>{text}</{tag}>")

    def open(self, opening: str) -> None:
        self.line(opening)
        self._level += 1

    def close(self, tag: str) -> None:
        self._level -= 1
        self.line(f"</{tag}>")

    def text(self) -> str:
        return "\n".join(self._lines)


def emit_building(building: Building, index: int) -> BuildingFragment:
    """Fragment for one extruded-footprint building model.

    ``index`` is the position in the emitted world; the model name comes from
    the source way id.
    """
    return BuildingFragment(
        name=f"building_{building.id}",
        points=tuple((p.x, p.y) for p in building.footprint),
        height=building.height,
    )


def emit_road(road: Road, index: int, thickness: float = 0.1) -> RoadFragment:
    """Fragment for one road: a thin box per centerline segment, raised so it
    sits on the ground plane."""
    segments = []
    for a, b in zip(road.centerline, road.centerline[1:]):
        dx = b.x - a.x
        dy = b.y - a.y
        segments.append(
            RoadSegment(
                x=(a.x + b.x) / 2.0,
                y=(a.y + b.y) / 2.0,
                z=thickness / 2.0,
                yaw=math.atan2(dy, dx),
                length=math.hypot(dx, dy),
                width=road.width,
                thickness=thickness,
            )
        )
    return RoadFragment(name=f"road_{road.id}", segments=tuple(segments))


def emit_vehicle(spec: VehicleSpec, origin: GeoOrigin) -> VehicleFragment:
    """Fragment for one vehicle; geodetic spawns are projected via ``origin``."""
    x, y, yaw = resolve_spawn(spec.spawn, origin)
    return VehicleFragment(
        name=spec.name,
        kind=spec.kind,
        gps=spec.gps,
        x=x,
        y=y,
        yaw=yaw,
        wheelbase=spec.wheelbase,
        track=spec.track,
        wheel_radius=spec.wheel_radius,
        max_steer_angle=spec.max_steer_angle,
        chassis_length=spec.chassis_length,
        chassis_width=spec.chassis_width,
        chassis_height=spec.chassis_height,
    )


def emit_world(
    buildings: list[Building],
    roads: list[Road],
    vehicles: list[VehicleSpec],
    origin: GeoOrigin,
    config: GenerationConfig,
) -> SdfWorld:
    """Assemble the complete world document.

    World children in order: ground plane, sun light, spherical coordinates,
    then building, road, and vehicle models. Raises :class:`EmitError` on
    duplicate model names.
    """
    thickness = config.defaults.road_thickness
    building_fragments = tuple(emit_building(b, i) for i, b in enumerate(buildings))
    road_fragments = tuple(emit_road(r, i, thickness) for i, r in enumerate(roads))
    vehicle_fragments = tuple(emit_vehicle(spec, origin) for spec in vehicles)

    names = [GROUND_PLANE_NAME]
    names += [f.name for f in building_fragments]
    names += [f.name for f in road_fragments]
    names += [f.name for f in vehicle_fragments]
    seen: set[str] = set()
    for name in names:
        if name in seen:
            raise EmitError(f"duplicate model name {name!r}")
        seen.add(name)

    w = _XmlWriter()
    w.line('<?xml version="1.0" encoding="UTF-8"?>')
    w.open(f'<sdf version="{config.sdf_version}">')
    w.open(f'<world name="{WORLD_NAME}">')
    _write_ground_plane(w)
    _write_sun(w)
    _write_spherical_coordinates(w, origin)
    for fragment in building_fragments:
        _write_building(w, fragment)
    for fragment in road_fragments:
        _write_road(w, fragment)
    for fragment in vehicle_fragments:
        _write_vehicle(w, fragment)
    w.close("world")
    w.close("sdf")

    return SdfWorld(
        version=config.sdf_version,
        origin=origin,
        building_models=building_fragments,
        road_models=road_fragments,
        vehicle_models=vehicle_fragments,
        text=w.text() + "\n",
    )


def _write_ground_plane(w: _XmlWriter) -> None:
    size = fmt(GROUND_VISUAL_SIZE_M)
    w.open(f'<model name="{GROUND_PLANE_NAME}">')
    w.element("static", "true")
    w.open('<link name="link">')
    w.open('<collision name="collision">')
    w.open("<geometry>")
    w.open("<plane>")
    w.element("normal", "0 0 1")
    w.element("size", f"{size} {size}")
    w.close("plane")
    w.close("geometry")
    w.close("collision")
    w.open('<visual name="visual">')
    w.open("<geometry>")
    w.open("<plane>")
    w.element("normal", "0 0 1")
    w.element("size", f"{size} {size}")
    w.close("plane")
    w.close("geometry")
    w.open("<material>")
    w.element("ambient", "0.8 0.8 0.8 1")
    w.element("diffuse", "0.8 0.8 0.8 1")
    w.close("material")
    w.close("visual")
    w.close("link")
    w.close("model")


def _write_sun(w: _XmlWriter) -> None:
    w.open('<light name="sun" type="directional">')
    w.element("cast_shadows", "true")
    w.element("pose", "0 0 100 0 0 0")
    w.element("diffuse", "0.9 0.9 0.9 1")
    w.element("specular", "0.2 0.2 0.2 1")
    w.element("direction", "-0.5 0.1 -0.9")
    w.close("light")


def _write_spherical_coordinates(w: _XmlWriter, origin: GeoOrigin) -> None:
    w.open("<spherical_coordinates>")
    w.element("surface_model", "EARTH_WGS84")
    w.element("latitude_deg", fmt_deg(origin.lat0))
    w.element("longitude_deg", fmt_deg(origin.lon0))
    w.element("elevation", "0")
    w.element("heading_deg", "0")
    w.close("spherical_coordinates")


def _write_polyline(w: _XmlWriter, fragment: BuildingFragment) -> None:
    w.open("<geometry>")
    w.open("<polyline>")
    for x, y in fragment.points:
        w.element("point", f"{fmt(x)} {fmt(y)}")
    w.element("height", fmt(fragment.height))
    w.close("polyline")
    w.close("geometry")


def _write_building(w: _XmlWriter, fragment: BuildingFragment) -> None:
    w.open(f'<model name="{fragment.name}">')
    w.element("static", "true")
    w.open('<link name="footprint">')
    w.open('<collision name="collision">')
    _write_polyline(w, fragment)
    w.close("collision")
    w.open('<visual name="visual">')
    _write_polyline(w, fragment)
    w.open("<material>")
    w.element("ambient", BUILDING_COLOR)
    w.element("diffuse", BUILDING_COLOR)
    w.close("material")
    w.close("visual")
    w.close("link")
    w.close("model")


def _write_road(w: _XmlWriter, fragment: RoadFragment) -> None:
    w.open(f'<model name="{fragment.name}">')
    w.element("static", "true")
    for i, seg in enumerate(fragment.segments):
        size = f"{fmt(seg.length)} {fmt(seg.width)} {fmt(seg.thickness)}"
        w.open(f'<link name="segment_{i}">')
        w.element("pose", f"{fmt(seg.x)} {fmt(seg.y)} {fmt(seg.z)} 0 0 {fmt(seg.yaw)}")
        w.open('<collision name="collision">')
        w.open("<geometry>")
        w.open("<box>")
        w.element("size", size)
        w.close("box")
        w.close("geometry")
        w.close("collision")
        w.open('<visual name="visual">')
        w.open("<geometry>")
        w.open("<box>")
        w.element("size", size)
        w.close("box")
        w.close("geometry")
        w.open("<material>")
        w.element("ambient", ROAD_COLOR)
        w.element("diffuse", ROAD_COLOR)
        w.close("material")
        w.close("visual")
        w.close("link")
    w.close("model")


def _write_box_link(
    w: _XmlWriter,
    name: str,
    pose: str,
    size: str,
    with_collision: bool,
    sensor: bool = False,
) -> None:
    w.open(f'<link name="{name}">')
    w.element("pose", pose)
    if with_collision:
        w.open('<collision name="collision">')
        w.open("<geometry>")
        w.open("<box>")
        w.element("size", size)
        w.close("box")
        w.close("geometry")
        w.close("collision")
    w.open('<visual name="visual">')
    w.open("<geometry>")
    w.open("<box>")
    w.element("size", size)
    w.close("box")
    w.close("geometry")
    w.close("visual")
    if sensor:
        w.open('<sensor name="gps" type="gps">')
        w.element("always_on", "true")
        w.element("update_rate", "10")
        w.close("sensor")
    w.close("link")


def _write_wheel_link(
    w: _XmlWriter, name: str, x: float, y: float, radius: float, with_collision: bool
) -> None:
    pose = f"{fmt(x)} {fmt(y)} {fmt(radius)} {fmt(_HALF_PI)} 0 0"
    w.open(f'<link name="{name}">')
    w.element("pose", pose)
    if with_collision:
        w.open('<collision name="collision">')
        w.open("<geometry>")
        w.open("<cylinder>")
        w.element("radius", fmt(radius))
        w.element("length", fmt(WHEEL_WIDTH_M))
        w.close("cylinder")
        w.close("geometry")
        w.close("collision")
    w.open('<visual name="visual">')
    w.open("<geometry>")
    w.open("<cylinder>")
    w.element("radius", fmt(radius))
    w.element("length", fmt(WHEEL_WIDTH_M))
    w.close("cylinder")
    w.close("geometry")
    w.close("visual")
    w.close("link")


def _write_joint(
    w: _XmlWriter, name: str, child: str, axis: str, lower: float, upper: float
) -> None:
    w.open(f'<joint name="{name}" type="revolute">')
    w.element("parent", "chassis")
    w.element("child", child)
    w.open("<axis>")
    w.element("xyz", axis)
    w.open("<limit>")
    w.element("lower", fmt(lower))
    w.element("upper", fmt(upper))
    w.close("limit")
    w.close("axis")
    w.close("joint")


def _write_vehicle(w: _XmlWriter, v: VehicleFragment) -> None:
    collide = v.kind is not VehicleKind.GHOST
    actuated = v.kind is VehicleKind.TWIN

    w.open(f'<model name="{v.name}">')
    w.element("pose", f"{fmt(v.x)} {fmt(v.y)} 0 0 0 {fmt(v.yaw)}")
    if not actuated:
        # shadows and ghosts are pose-driven, never simulated bodies
        w.element("static", "true")

    chassis_z = v.wheel_radius + v.chassis_height / 2.0
    chassis_size = f"{fmt(v.chassis_length)} {fmt(v.chassis_width)} {fmt(v.chassis_height)}"
    _write_box_link(
        w,
        "chassis",
        f"0 0 {fmt(chassis_z)} 0 0 0",
        chassis_size,
        with_collision=collide,
        sensor=v.gps,
    )

    half_wb = v.wheelbase / 2.0
    half_track = v.track / 2.0
    wheels = (
        ("front_left_wheel", half_wb, half_track),
        ("front_right_wheel", half_wb, -half_track),
        ("rear_left_wheel", -half_wb, half_track),
        ("rear_right_wheel", -half_wb, -half_track),
    )
    for name, x, y in wheels:
        _write_wheel_link(w, name, x, y, v.wheel_radius, with_collision=collide)

    if actuated:
        limit = v.max_steer_angle
        _write_joint(w, "front_left_steer_joint", "front_left_wheel", "0 0 1", -limit, limit)
        _write_joint(w, "front_right_steer_joint", "front_right_wheel", "0 0 1", -limit, limit)
        _write_joint(w, "rear_left_spin_joint", "rear_left_wheel", "0 1 0", -SPIN_LIMIT, SPIN_LIMIT)
        _write_joint(w, "rear_right_spin_joint", "rear_right_wheel", "0 1 0", -SPIN_LIMIT, SPIN_LIMIT)
        w.open('<plugin name="ackermann_drive" filename="libackermann_drive.so">')
        w.element("wheelbase", fmt(v.wheelbase))
        w.element("track", fmt(v.track))
        w.element("wheel_radius", fmt(v.wheel_radius))
        w.element("max_steer_angle", fmt(v.max_steer_angle))
        w.close("plugin")

    w.close("model")


def validate_sdf(text: str) -> ValidationReport:
    """Structural checks on an SDF document; violations are data, not errors.

    Checks: well-formed XML, ``<sdf>`` root with a version, exactly one
    ``<world>`` containing a ``<spherical_coordinates>`` element, unique model
    names, polylines with at least 3 points and positive height, and poses of
    6 finite numbers.
    """
    issues: list[ValidationIssue] = []
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        return ValidationReport((ValidationIssue("/", f"malformed XML: {exc}"),))

    if root.tag != "sdf":
        return ValidationReport(
            (ValidationIssue("/", f"root element is <{root.tag}>, expected <sdf>"),)
        )
    if not root.get("version"):
        issues.append(ValidationIssue("/sdf", "missing version attribute"))

    worlds = root.findall("world")
    if len(worlds) != 1:
        issues.append(
            ValidationIssue("/sdf", f"expected exactly one <world>, found {len(worlds)}")
        )
    for world in worlds:
        world_loc = _located("/sdf", world)
        if world.find("spherical_coordinates") is None:
            issues.append(
                ValidationIssue(world_loc, "missing <spherical_coordinates> element")
            )
        seen: set[str] = set()
        for model in world.findall("model"):
            name = model.get("name")
            if not name:
                issues.append(ValidationIssue(world_loc, "model without a name attribute"))
                continue
            if name in seen:
                issues.append(ValidationIssue(world_loc, f"duplicate model name {name}"))
            seen.add(name)

    _walk(root, "/sdf", issues)
    return ValidationReport(tuple(issues))


def _located(parent_path: str, element: ET.Element) -> str:
    name = element.get("name")
    suffix = f"[@name='{name}']" if name else ""
    return f"{parent_path}/{element.tag}{suffix}"


def _walk(element: ET.Element, path: str, issues: list[ValidationIssue]) -> None:
    for child in element:
        child_path = _located(path, child)
        if child.tag == "polyline":
            _check_polyline(child, child_path, issues)
        elif child.tag == "pose":
            _check_pose(child, child_path, issues)
        _walk(child, child_path, issues)


def _check_polyline(element: ET.Element, path: str, issues: list[ValidationIssue]) -> None:
    points = element.findall("point")
    if len(points) < 3:
        issues.append(ValidationIssue(path, f"polyline has {len(points)} points, needs >= 3"))
    height = element.find("height")
    value = _parse_float(height.text) if height is not None else None
    if value is None or value <= 0:
        issues.append(ValidationIssue(path, "non-positive polyline height"))


def _check_pose(element: ET.Element, path: str, issues: list[ValidationIssue]) -> None:
    parts = (element.text or "").split()
    values = [_parse_float(p) for p in parts]
    if len(values) != 6 or any(v is None for v in values):
        issues.append(ValidationIssue(path, "pose must contain 6 finite numbers"))


def _parse_float(raw: str | None) -> float | None:
    if raw is None:
        return None
    try:
        value = float(raw)
    except ValueError:
        return None
    return value if math.isfinite(value) else None
