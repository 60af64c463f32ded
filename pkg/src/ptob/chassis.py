"""Four-wheel omnidirectional chassis kinematics and dead-reckoning.

The reference chassis mounts four wheels on a square, drive axes radial, so
each wheel's thrust direction is tangential at 45, 135, 225 and 315 degrees
in the body frame.  Wheel surface speeds mix the body twist (v_x, v_y, omega)
through one row per wheel: [cos(yaw), sin(yaw), r].  The symmetric layout is
kept in closed form so the mapping is exact; other equally spaced layouts
share the same matrix construction and least-squares inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import WheelGeometry

__all__ = [
    "Twist",
    "WheelSpeeds",
    "Pose",
    "ChassisConfig",
    "mixing_matrix",
    "inverse_kinematics",
    "forward_kinematics",
    "integrate_odometry",
    "plate_interference",
]

SQRT1_2 = 1.0 / math.sqrt(2.0)
DEFAULT_MOUNT_RADIUS_MM = 200.0 * math.sqrt(2.0)   # square chassis, 400 mm wheel pitch
DEFAULT_WHEEL_YAWS_DEG = (45.0, 135.0, 225.0, 315.0)
DEFAULT_PLATE_CLEARANCE_MM = 50.0


@dataclass(frozen=True)
class Twist:
    """Planar body twist: velocities in mm/s, omega in rad/s."""

    v_x: float
    v_y: float
    omega: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.v_x, self.v_y, self.omega)


@dataclass(frozen=True)
class WheelSpeeds:
    """Wheel surface speeds, mm/s, in mount order."""

    speeds: tuple[float, ...]

    def __iter__(self):
        return iter(self.speeds)

    def __getitem__(self, i: int) -> float:
        return self.speeds[i]

    def __len__(self) -> int:
        return len(self.speeds)


@dataclass(frozen=True)
class Pose:
    """World-frame planar pose: position in mm, heading in rad, (-pi, pi]."""

    x: float
    y: float
    heading: float

    def __post_init__(self) -> None:
        if not (-math.pi < self.heading <= math.pi):
            object.__setattr__(self, "heading", wrap_heading(self.heading))


@dataclass(frozen=True)
class ChassisConfig:
    """Chassis layout and the shared wheel build.

    Attributes:
        geom: wheel parameter set shared by all wheels.
        mount_radius: wheel mount circle radius, mm.
        wheel_yaws: per-wheel thrust direction, deg, equally spaced.
        plate_clearance: ground-to-support-plate height, mm.
    """

    geom: WheelGeometry
    mount_radius: float = DEFAULT_MOUNT_RADIUS_MM
    wheel_yaws: tuple[float, ...] = DEFAULT_WHEEL_YAWS_DEG
    plate_clearance: float = DEFAULT_PLATE_CLEARANCE_MM

    def __post_init__(self) -> None:
        if self.mount_radius <= 0 or not math.isfinite(self.mount_radius):
            raise ValueError(f"mount_radius must be positive, got {self.mount_radius!r}")
        if self.plate_clearance <= 0 or not math.isfinite(self.plate_clearance):
            raise ValueError(f"plate_clearance must be positive, got {self.plate_clearance!r}")
        n = len(self.wheel_yaws)
        if n < 3:
            raise ValueError("need at least three wheels")
        pitch = 360.0 / n
        for i, yaw in enumerate(self.wheel_yaws):
            gap = math.fmod(yaw - self.wheel_yaws[0] - i * pitch, 360.0)
            if min(abs(gap), abs(abs(gap) - 360.0)) > 1e-9:
                raise ValueError("wheel_yaws must be equally spaced")

    @property
    def n_wheels(self) -> int:
        return len(self.wheel_yaws)

    @property
    def is_standard_layout(self) -> bool:
        return self.wheel_yaws == DEFAULT_WHEEL_YAWS_DEG


def mixing_matrix(config: ChassisConfig) -> np.ndarray:
    """Twist-to-wheel-speed matrix, one row [cos(yaw), sin(yaw), r] per wheel."""
    if config.is_standard_layout:
        r = config.mount_radius
        return np.array(
            [
                [SQRT1_2, SQRT1_2, r],
                [-SQRT1_2, SQRT1_2, r],
                [-SQRT1_2, -SQRT1_2, r],
                [SQRT1_2, -SQRT1_2, r],
            ]
        )
    rows = []
    for yaw in config.wheel_yaws:
        g = math.radians(yaw)
        rows.append([math.cos(g), math.sin(g), config.mount_radius])
    return np.array(rows)


def inverse_kinematics(config: ChassisConfig, twist: Twist) -> WheelSpeeds:
    """Wheel surface speeds realizing a body twist.

    The standard layout stays in closed form:
        v1 = ( v_x + v_y) / sqrt(2) + r omega
        v2 = (-v_x + v_y) / sqrt(2) + r omega
        v3 = (-v_x - v_y) / sqrt(2) + r omega
        v4 = ( v_x - v_y) / sqrt(2) + r omega
    """
    for name, value in (("v_x", twist.v_x), ("v_y", twist.v_y), ("omega", twist.omega)):
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")
    if config.is_standard_layout:
        r_omega = config.mount_radius * twist.omega
        return WheelSpeeds(
            (
                (twist.v_x + twist.v_y) * SQRT1_2 + r_omega,
                (-twist.v_x + twist.v_y) * SQRT1_2 + r_omega,
                (-twist.v_x - twist.v_y) * SQRT1_2 + r_omega,
                (twist.v_x - twist.v_y) * SQRT1_2 + r_omega,
            )
        )
    speeds = mixing_matrix(config) @ np.array(twist.as_tuple())
    return WheelSpeeds(tuple(float(s) for s in speeds))


def forward_kinematics(config: ChassisConfig, speeds: WheelSpeeds) -> tuple[Twist, float]:
    """Least-squares body twist for measured wheel speeds.

    The four-wheel system is overdetermined; the pseudo-inverse returns the
    best-fit twist and the Euclidean norm of the unmodeled wheel-speed
    component as the residual.

    Returns:
        (twist, residual_mm_per_s).
    """
    if len(speeds) != config.n_wheels:
        raise ValueError(f"expected {config.n_wheels} wheel speeds, got {len(speeds)}")
    v = np.array(list(speeds), dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("wheel speeds must be finite")
    matrix = mixing_matrix(config)
    solution, _, _, _ = np.linalg.lstsq(matrix, v, rcond=None)
    residual = float(np.linalg.norm(matrix @ solution - v))
    twist = Twist(float(solution[0]), float(solution[1]), float(solution[2]))
    return twist, residual


def wrap_heading(heading: float) -> float:
    """Wrap an angle in radians to (-pi, pi]."""
    wrapped = math.fmod(heading, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    elif wrapped > math.pi:
        wrapped -= 2.0 * math.pi
    return wrapped


def integrate_odometry(pose: Pose, twist: Twist, dt: float) -> Pose:
    """Propagate a pose through a body twist held constant for `dt` seconds.

    Uses the exact constant-twist displacement: the world-frame step is the
    body velocity rotated to the chord heading (start heading plus half the
    rotation) and scaled by the chord factor sin(phi/2)/(phi/2), which is the
    closed-form integral of the rotating velocity.  Straight-line motion is
    the small-angle limit.

    Returns:
        New pose with heading wrapped to (-pi, pi].
    """
    if dt <= 0 or not math.isfinite(dt):
        raise ValueError(f"dt must be positive, got {dt!r}")
    phi = twist.omega * dt
    half = 0.5 * phi
    if abs(half) < 1e-6:
        # series for sin(x)/x, accurate to ~1e-24 here
        chord_factor = 1.0 - half * half / 6.0
    else:
        chord_factor = math.sin(half) / half
    step_heading = pose.heading + half
    c, s = math.cos(step_heading), math.sin(step_heading)
    dx_body = twist.v_x * dt * chord_factor
    dy_body = twist.v_y * dt * chord_factor
    return Pose(
        x=pose.x + c * dx_body - s * dy_body,
        y=pose.y + s * dx_body + c * dy_body,
        heading=wrap_heading(pose.heading + phi),
    )


def plate_interference(config: ChassisConfig, obstacle_height: float) -> bool:
    """True when an obstacle would strike the chassis support plates."""
    if obstacle_height < 0 or not math.isfinite(obstacle_height):
        raise ValueError(f"obstacle_height must be nonnegative, got {obstacle_height!r}")
    return obstacle_height >= config.plate_clearance
