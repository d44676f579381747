"""Trace replay against a kinematic bicycle model, and reality-gap metrics.

The internal vehicle dynamics are the minimal Ackermann abstraction: a
kinematic bicycle with instantaneous speed tracking and turning radius
wheelbase / tan(steer). Recorded command streams are integrated with
zero-order hold between samples; recorded pose streams can be resampled at
arbitrary times and compared against a simulated trajectory, yielding RMSE,
maximum/mean deviation, final drift, and a lateral/longitudinal split in the
recorded trajectory's heading frame. The numbers describe the mismatch; which
side of the twin is to blame remains a human call.
"""

import bisect
import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .config import VehicleSpec
from .geodesy import GeoOrigin, project

DEFAULT_DT_MAX = 1e-3
HEADING_DISPLACEMENT_GATE_M = 0.05


def normalize_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    wrapped = (theta + math.pi) % math.tau - math.pi
    return math.pi if wrapped == -math.pi else wrapped


@dataclass(frozen=True)
class VehicleState:
    x: float
    y: float
    yaw: float
    v: float

    def __post_init__(self):
        object.__setattr__(self, "yaw", normalize_angle(self.yaw))


@dataclass(frozen=True)
class ControlSample:
    t: float
    speed: float
    steer: float


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    x: float
    y: float
    yaw: float | None = None


@dataclass(frozen=True)
class Trajectory:
    samples: tuple[TrajectorySample, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.samples:
            raise ValueError("trajectory requires at least one sample")
        times = [s.t for s in self.samples]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("trajectory timestamps must be strictly increasing")
        with_yaw = [s.yaw is not None for s in self.samples]
        if any(with_yaw) and not all(with_yaw):
            raise ValueError("yaw must be present on every sample or on none")

    @property
    def has_yaw(self) -> bool:
        return self.samples[0].yaw is not None

    @property
    def t_first(self) -> float:
        return self.samples[0].t

    @property
    def t_last(self) -> float:
        return self.samples[-1].t


@dataclass(frozen=True)
class GapReport:
    n: int
    rmse: float
    max_dev: float
    mean_dev: float
    final_drift: float
    lateral_rmse: float
    longitudinal_rmse: float
    per_sample: tuple[tuple[float, float], ...]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "rmse": self.rmse,
            "max_dev": self.max_dev,
            "mean_dev": self.mean_dev,
            "final_drift": self.final_drift,
            "lateral_rmse": self.lateral_rmse,
            "longitudinal_rmse": self.longitudinal_rmse,
            "per_sample": [[t, d] for t, d in self.per_sample],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"


def step_kinematic(
    state: VehicleState, control: ControlSample, dt: float, spec: VehicleSpec
) -> VehicleState:
    """One forward-Euler step of the kinematic bicycle.

    Commanded speed applies immediately; steer is clamped to the spec limit.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    steer = min(max(control.steer, -spec.max_steer_angle), spec.max_steer_angle)
    v = control.speed
    x = state.x + v * math.cos(state.yaw) * dt
    y = state.y + v * math.sin(state.yaw) * dt
    yaw = normalize_angle(state.yaw + (v / spec.wheelbase) * math.tan(steer) * dt)
    return VehicleState(x, y, yaw, v)


def simulate_controls(
    initial: VehicleState,
    controls: list[ControlSample],
    spec: VehicleSpec,
    dt_max: float = DEFAULT_DT_MAX,
    t_end: float | None = None,
) -> Trajectory:
    """Integrate a recorded command stream with zero-order hold.

    Each control is held until the next sample; internal sub-steps never
    exceed ``dt_max``. The trajectory has one pose per control timestamp,
    plus one at ``t_end`` when that extends past the last control (the last
    command is held). Steer values beyond the spec limit are clamped and
    noted on the trajectory's warning list.
    """
    if not controls:
        raise ValueError("at least one control sample is required")
    if dt_max <= 0:
        raise ValueError("dt_max must be positive")
    times = [c.t for c in controls]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("control timestamps must be strictly increasing")

    warnings = [
        f"control at t={c.t}: steer {c.steer} exceeds limit "
        f"{spec.max_steer_angle}, clamped"
        for c in controls
        if abs(c.steer) > spec.max_steer_angle
    ]

    intervals = [
        (controls[i], times[i], times[i + 1]) for i in range(len(controls) - 1)
    ]
    if t_end is not None and t_end > times[-1]:
        intervals.append((controls[-1], times[-1], t_end))

    state = initial
    samples = [TrajectorySample(times[0], state.x, state.y, state.yaw)]
    for control, t0, t1 in intervals:
        state = _integrate(state, control, t1 - t0, dt_max, spec)
        samples.append(TrajectorySample(t1, state.x, state.y, state.yaw))
    return Trajectory(tuple(samples), warnings=tuple(warnings))


def _integrate(state, control, duration, dt_max, spec) -> VehicleState:
    steps = max(1, math.ceil(duration / dt_max))
    h = duration / steps
    for _ in range(steps):
        state = step_kinematic(state, control, h, spec)
    return state


def derive_headings(
    traj: Trajectory, min_displacement: float = HEADING_DISPLACEMENT_GATE_M
) -> list[float]:
    """Per-sample motion heading, gated against jitter.

    The heading at a sample is the direction to the first later sample at
    least ``min_displacement`` away; samples near the end inherit the last
    known heading, leading unknowns take the first known one. A trajectory
    that never moves past the gate gets heading 0 everywhere.
    """
    pts = [(s.x, s.y) for s in traj.samples]
    n = len(pts)
    headings: list[float | None] = [None] * n
    for i in range(n):
        xi, yi = pts[i]
        for j in range(i + 1, n):
            dx = pts[j][0] - xi
            dy = pts[j][1] - yi
            if math.hypot(dx, dy) >= min_displacement:
                headings[i] = math.atan2(dy, dx)
                break
    last = next((h for h in headings if h is not None), 0.0)
    filled: list[float] = []
    for h in headings:
        if h is None:
            filled.append(last)
        else:
            filled.append(h)
            last = h
    return filled


def shadow_follow(recorded: Trajectory, query_times: list[float]) -> Trajectory:
    """Resample a recorded trajectory at the query times.

    Positions interpolate linearly; yaw interpolates on the shortest angular
    arc, or is derived from the direction of motion when the recording has
    no yaw channel. This is the pose stream a shadow or ghost model follows.
    Query times outside the recorded range are rejected, never extrapolated.
    """
    times = [s.t for s in recorded.samples]
    headings = None if recorded.has_yaw else derive_headings(recorded)
    out = []
    for t in query_times:
        if t < times[0] or t > times[-1]:
            raise ValueError(
                f"query time {t} outside recorded range [{times[0]}, {times[-1]}]"
            )
        i = bisect.bisect_left(times, t)
        if i < len(times) and times[i] == t:
            s = recorded.samples[i]
            yaw = s.yaw if recorded.has_yaw else headings[i]
            out.append(TrajectorySample(t, s.x, s.y, yaw))
            continue
        lo = recorded.samples[i - 1]
        hi = recorded.samples[i]
        frac = (t - lo.t) / (hi.t - lo.t)
        x = lo.x + frac * (hi.x - lo.x)
        y = lo.y + frac * (hi.y - lo.y)
        if recorded.has_yaw:
            yaw = normalize_angle(lo.yaw + frac * normalize_angle(hi.yaw - lo.yaw))
        else:
            yaw = normalize_angle(
                headings[i - 1] + frac * normalize_angle(headings[i] - headings[i - 1])
            )
        out.append(TrajectorySample(t, x, y, yaw))
    return Trajectory(tuple(out))


def compute_gap(real: Trajectory, sim: Trajectory) -> GapReport:
    """Deviation statistics between a recorded and a simulated trajectory.

    Comparison runs on the recorded timestamps inside the overlapping time
    range, with the simulated trajectory resampled onto them. The lateral and
    longitudinal components live in the recorded trajectory's heading frame
    (heading from motion direction).
    """
    t_lo = max(real.t_first, sim.t_first)
    t_hi = min(real.t_last, sim.t_last)
    selected_idx = [i for i, s in enumerate(real.samples) if t_lo <= s.t <= t_hi]
    if len(selected_idx) < 2:
        raise ValueError("trajectories overlap on fewer than 2 samples")
    selected = [real.samples[i] for i in selected_idx]
    times = [s.t for s in selected]
    resampled = shadow_follow(sim, times)

    rx = np.array([s.x for s in selected])
    ry = np.array([s.y for s in selected])
    sx = np.array([s.x for s in resampled.samples])
    sy = np.array([s.y for s in resampled.samples])
    dx = sx - rx
    dy = sy - ry
    dev = np.hypot(dx, dy)

    all_headings = derive_headings(real)
    heading = np.array([all_headings[i] for i in selected_idx])
    lateral = -np.sin(heading) * dx + np.cos(heading) * dy
    longitudinal = np.cos(heading) * dx + np.sin(heading) * dy

    return GapReport(
        n=len(selected),
        rmse=float(np.sqrt(np.mean(dev**2))),
        max_dev=float(np.max(dev)),
        mean_dev=float(np.mean(dev)),
        final_drift=float(dev[-1]),
        lateral_rmse=float(np.sqrt(np.mean(lateral**2))),
        longitudinal_rmse=float(np.sqrt(np.mean(longitudinal**2))),
        per_sample=tuple((float(t), float(d)) for t, d in zip(times, dev)),
    )


def parse_trajectory_csv(text: str, origin: GeoOrigin | None = None) -> Trajectory:
    """Load a trajectory from CSV.

    Header ``t,lat,lon[,yaw]`` means geodetic samples, projected with
    ``origin``; header ``t,x,y[,yaw]`` means local meters.
    """
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows:
        raise ValueError("trajectory CSV is empty")
    header = [h.strip() for h in rows[0]]
    if header in (["t", "lat", "lon"], ["t", "lat", "lon", "yaw"]):
        geodetic = True
    elif header in (["t", "x", "y"], ["t", "x", "y", "yaw"]):
        geodetic = False
    else:
        raise ValueError(
            f"unrecognized trajectory header {header!r}: "
            "expected t,lat,lon[,yaw] or t,x,y[,yaw]"
        )
    if geodetic and origin is None:
        raise ValueError("geodetic trajectory requires a projection origin")
    has_yaw = len(header) == 4

    samples = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ValueError(
                f"trajectory CSV line {line_no}: expected {len(header)} fields, got {len(row)}"
            )
        try:
            values = [float(v) for v in row]
        except ValueError as exc:
            raise ValueError(f"trajectory CSV line {line_no}: {exc}") from exc
        t, a, b = values[:3]
        yaw = values[3] if has_yaw else None
        if geodetic:
            point = project(origin, a, b)
            samples.append(TrajectorySample(t, point.x, point.y, yaw))
        else:
            samples.append(TrajectorySample(t, a, b, yaw))
    return Trajectory(tuple(samples))


def parse_controls_csv(text: str) -> list[ControlSample]:
    """Load a command stream from CSV with header ``t,speed,steer``."""
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows:
        raise ValueError("controls CSV is empty")
    header = [h.strip() for h in rows[0]]
    if header != ["t", "speed", "steer"]:
        raise ValueError(f"unrecognized controls header {header!r}: expected t,speed,steer")
    controls = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ValueError(f"controls CSV line {line_no}: expected 3 fields, got {len(row)}")
        try:
            t, speed, steer = (float(v) for v in row)
        except ValueError as exc:
            raise ValueError(f"controls CSV line {line_no}: {exc}") from exc
        controls.append(ControlSample(t, speed, steer))
    return controls
