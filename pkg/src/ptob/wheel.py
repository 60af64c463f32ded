"""Single-wheel contact model: cap layout, height deviation, passive slides.

Frame convention used throughout: the wheel's drive axis is +z, the cap pole
axes lie in the x-y plane (the drive plane), and the drive angle names the
surface direction currently at the ground contact, measured in degrees from
the cap-0 pole, increasing in the rolling direction.  On flat ground the
contact direction walks once around the drive plane per wheel revolution,
crossing each cap face, the barrel roller covering each pole, and the gap at
each cap-to-cap boundary.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, replace
from typing import Sequence

import numpy as np

from .geometry import WheelGeometry, cap_half_angle

__all__ = [
    "ElementKind",
    "Element",
    "CapLayout",
    "ContactPoint",
    "SlideUnit",
    "active_element",
    "contact_state",
    "slide_step",
    "contact_height_profile",
    "profile_csv",
    "cap_rim_points",
    "edge_opening",
]

DEFAULT_ROLLER_WINDOW_DEG = 10.0   # half-angle of the pole arc served by the barrel roller
DEFAULT_EDGE_WINDOW_DEG = 4.0      # half-angle of the boundary arc treated as edge gap
SLIDE_DAMPING_N_S_PER_MM = 0.25    # nominal guide damping used to turn spring force into a return rate


class ElementKind(enum.Enum):
    CAP_SURFACE = "cap_surface"
    BARREL_ROLLER = "barrel_roller"
    EDGE_GAP = "edge_gap"


@dataclass(frozen=True)
class Element:
    """Surface element at one drive angle.

    caps holds one index for a cap face or roller, and the ordered pair of
    adjacent cap indices for an edge gap.
    """

    kind: ElementKind
    caps: tuple[int, ...]

    @staticmethod
    def cap_surface(i: int) -> "Element":
        return Element(ElementKind.CAP_SURFACE, (i,))

    @staticmethod
    def barrel_roller(i: int) -> "Element":
        return Element(ElementKind.BARREL_ROLLER, (i,))

    @staticmethod
    def edge_gap(i: int, j: int) -> "Element":
        return Element(ElementKind.EDGE_GAP, (i, j))


@dataclass(frozen=True)
class CapLayout:
    """Angular layout of the cap faces around the drive plane.

    Attributes:
        n_caps: number of caps.
        pole_angles: drive-plane angle of each cap pole, deg, equally spaced.
        beta: cap half-angle, deg.
        roller_window: half-width of the roller arc around each pole, deg.
        edge_window: half-width of the edge-gap arc around each boundary, deg.
    """

    n_caps: int
    pole_angles: tuple[float, ...]
    beta: float
    roller_window: float = DEFAULT_ROLLER_WINDOW_DEG
    edge_window: float = DEFAULT_EDGE_WINDOW_DEG

    def __post_init__(self) -> None:
        if self.n_caps < 2:
            raise ValueError(f"n_caps must be >= 2, got {self.n_caps!r}")
        if len(self.pole_angles) != self.n_caps:
            raise ValueError("pole_angles length must equal n_caps")
        pitch = 360.0 / self.n_caps
        for i, angle in enumerate(self.pole_angles):
            expected = self.pole_angles[0] + i * pitch
            if abs(_wrap_deg(angle - expected)) > 1e-9:
                raise ValueError("pole_angles must be equally spaced")
        if self.roller_window < 0 or self.edge_window < 0:
            raise ValueError("windows must be nonnegative")
        if self.roller_window + self.edge_window >= self.beta:
            raise ValueError(
                f"roller_window + edge_window must stay below the cap half-angle "
                f"({self.roller_window} + {self.edge_window} >= {self.beta})"
            )

    @classmethod
    def from_geometry(
        cls,
        geom: WheelGeometry,
        roller_window: float = DEFAULT_ROLLER_WINDOW_DEG,
        edge_window: float = DEFAULT_EDGE_WINDOW_DEG,
    ) -> "CapLayout":
        beta = cap_half_angle(geom.r_w, geom.gap, geom.n_caps)
        poles = tuple(i * 360.0 / geom.n_caps for i in range(geom.n_caps))
        return cls(geom.n_caps, poles, beta, roller_window, edge_window)

    def boundary_angles(self) -> tuple[float, ...]:
        """Drive-plane angle of each cap-to-cap boundary, deg."""
        half_pitch = 180.0 / self.n_caps
        return tuple(a + half_pitch for a in self.pole_angles)

    def to_json(self) -> str:
        data = asdict(self)
        data["pole_angles"] = list(self.pole_angles)
        return json.dumps(data, indent=4)

    @classmethod
    def from_json(cls, text: str) -> "CapLayout":
        data = json.loads(text)
        data["pole_angles"] = tuple(data["pole_angles"])
        return cls(**data)


@dataclass(frozen=True)
class ContactPoint:
    """Ground-contact summary at one drive angle."""

    element: Element
    drive_angle: float                      # deg
    height_deviation: float                 # mm, 0 on a cap face, negative in a gap
    axial_free_dir: tuple[float, float, float]  # unit vector, wheel frame


@dataclass(frozen=True)
class SlideUnit:
    """State of one cap's spring-centered linear slide.

    Attributes:
        offset: current axial displacement, mm, |offset| <= s_max.
        s_max: travel limit, mm.
        restore_rate: spring return speed when unloaded, mm/s.
        loaded: True while the cap carries the ground contact.
    """

    offset: float
    s_max: float
    restore_rate: float
    loaded: bool = False

    def __post_init__(self) -> None:
        if self.s_max < 0 or not math.isfinite(self.s_max):
            raise ValueError(f"s_max must be nonnegative, got {self.s_max!r}")
        if self.restore_rate < 0 or not math.isfinite(self.restore_rate):
            raise ValueError(f"restore_rate must be nonnegative, got {self.restore_rate!r}")
        if not math.isfinite(self.offset) or abs(self.offset) > self.s_max + 1e-12:
            raise ValueError(
                f"offset {self.offset!r} outside the slide range +/-{self.s_max}"
            )

    @classmethod
    def for_geometry(cls, geom: WheelGeometry, offset: float = 0.0, loaded: bool = False) -> "SlideUnit":
        rate = geom.k_spring_force / SLIDE_DAMPING_N_S_PER_MM
        return cls(offset=offset, s_max=geom.s_max, restore_rate=rate, loaded=loaded)


def _wrap_deg(angle: float) -> float:
    """Wrap to (-180, 180]."""
    wrapped = math.fmod(angle, 360.0)
    if wrapped <= -180.0:
        wrapped += 360.0
    elif wrapped > 180.0:
        wrapped -= 360.0
    return wrapped


def active_element(layout: CapLayout, drive_angle: float) -> Element:
    """Surface element under the contact at `drive_angle`.

    The drive circle is partitioned into roller arcs around each pole, edge
    arcs around each boundary, and cap faces elsewhere; exactly one element
    owns any angle.  Window edges belong to the roller/edge arc (closed
    intervals), which is well defined because the arcs never overlap.
    """
    nearest_pole = min(
        range(layout.n_caps),
        key=lambda i: abs(_wrap_deg(drive_angle - layout.pole_angles[i])),
    )
    if abs(_wrap_deg(drive_angle - layout.pole_angles[nearest_pole])) <= layout.roller_window:
        return Element.barrel_roller(nearest_pole)
    boundaries = layout.boundary_angles()
    nearest_edge = min(
        range(layout.n_caps),
        key=lambda i: abs(_wrap_deg(drive_angle - boundaries[i])),
    )
    if abs(_wrap_deg(drive_angle - boundaries[nearest_edge])) <= layout.edge_window:
        return Element.edge_gap(nearest_edge, (nearest_edge + 1) % layout.n_caps)
    return Element.cap_surface(nearest_pole)


def edge_opening(
    geom: WheelGeometry,
    layout: CapLayout,
    boundary_index: int,
    offsets: Sequence[float],
) -> float:
    """Width of the gap at one cap-to-cap boundary, mm.

    The two adjacent rims cross the drive plane at one point each near the
    boundary; with zero slide offsets those points sit `gap` apart.  An
    axial offset moves its cap's rim in the drive plane (the pole axes lie
    in it), so the opening is the separation of the crossing points along
    the boundary tangent, clamped at zero when the rims close.
    """
    i = boundary_index
    j = (i + 1) % layout.n_caps
    beta = math.radians(layout.beta)
    radial = geom.r_w * math.cos(beta)
    tangential = geom.r_w * math.sin(beta)

    def crossing(pole_deg: float, offset: float, toward: float) -> tuple[float, float]:
        # toward = +1 when the boundary lies ahead of the pole, -1 behind
        phi = math.radians(pole_deg)
        ux, uy = math.cos(phi), math.sin(phi)
        tx, ty = -uy, ux
        r = radial + offset
        return (r * ux + toward * tangential * tx, r * uy + toward * tangential * ty)

    p_i = crossing(layout.pole_angles[i], offsets[i], +1.0)
    p_j = crossing(layout.pole_angles[j], offsets[j], -1.0)
    b = math.radians(layout.boundary_angles()[i])
    tangent = (-math.sin(b), math.cos(b))
    opening = (p_j[0] - p_i[0]) * tangent[0] + (p_j[1] - p_i[1]) * tangent[1]
    return max(opening, 0.0)


def _chord_sag(r_w: float, width: float) -> float:
    """Drop of a rigid circle of radius r_w bridging a slot of `width`, mm."""
    if width >= 2.0 * r_w:
        return r_w
    return r_w - math.sqrt(r_w * r_w - (width / 2.0) ** 2)


def contact_state(
    geom: WheelGeometry,
    layout: CapLayout,
    drive_angle: float,
    slides: Sequence[SlideUnit],
) -> ContactPoint:
    """Contact element, height deviation, and free-rolling axis at one angle.

    On a cap face or roller the wheel rides at its nominal radius and the
    deviation is zero.  In an edge window the wheel bridges the opening
    between the two rims, dropping by the chord sag of the opening width;
    slide offsets of the adjacent caps widen or narrow it.

    Args:
        geom: wheel parameter set.
        layout: angular layout (must agree with geom.n_caps).
        drive_angle: contact direction, deg.
        slides: one SlideUnit per cap, in pole order.

    Returns:
        ContactPoint; axial_free_dir is the contacting cap's pole axis, the
        roller axis on a roller, and the boundary bisector in an edge gap.
    """
    if len(slides) != layout.n_caps:
        raise ValueError(f"expected {layout.n_caps} slide units, got {len(slides)}")
    if layout.n_caps != geom.n_caps:
        raise ValueError("layout and geometry disagree on n_caps")
    element = active_element(layout, drive_angle)

    if element.kind is ElementKind.EDGE_GAP:
        i, _ = element.caps
        width = edge_opening(geom, layout, i, [u.offset for u in slides])
        deviation = -_chord_sag(geom.r_w, width)
        b = math.radians(layout.boundary_angles()[i])
        free_dir = (math.cos(b), math.sin(b), 0.0)
    else:
        deviation = 0.0
        phi = math.radians(layout.pole_angles[element.caps[0]])
        if element.kind is ElementKind.BARREL_ROLLER:
            free_dir = (-math.sin(phi), math.cos(phi), 0.0)
        else:
            free_dir = (math.cos(phi), math.sin(phi), 0.0)

    return ContactPoint(
        element=element,
        drive_angle=drive_angle,
        height_deviation=deviation,
        axial_free_dir=free_dir,
    )


def slide_step(unit: SlideUnit, axial_drive: float, dt: float) -> SlideUnit:
    """Advance one slide unit by `dt` seconds.

    Loaded units integrate `axial_drive` (mm/s) and clamp at the travel
    limit; unloaded units decay toward center at the restore rate and stop
    exactly at zero.

    Returns:
        A new SlideUnit; the input is not modified.
    """
    if dt <= 0 or not math.isfinite(dt):
        raise ValueError(f"dt must be positive, got {dt!r}")
    if unit.loaded:
        moved = unit.offset + axial_drive * dt
        moved = min(max(moved, -unit.s_max), unit.s_max)
    else:
        magnitude = max(abs(unit.offset) - unit.restore_rate * dt, 0.0)
        moved = math.copysign(magnitude, unit.offset) if magnitude > 0.0 else 0.0
    return replace(unit, offset=moved)


def contact_height_profile(
    geom: WheelGeometry,
    layout: CapLayout,
    slides: Sequence[SlideUnit],
    n_samples: int = 1440,
) -> list[tuple[float, float]]:
    """Height deviation sampled uniformly over one revolution.

    Args:
        n_samples: number of samples over [0, 360), at least 3 per cap.

    Returns:
        List of (drive_angle_deg, height_deviation_mm) pairs.
    """
    if n_samples < 3 * layout.n_caps:
        raise ValueError(
            f"n_samples must be at least {3 * layout.n_caps}, got {n_samples}"
        )
    profile = []
    for k in range(n_samples):
        angle = 360.0 * k / n_samples
        state = contact_state(geom, layout, angle, slides)
        profile.append((angle, state.height_deviation))
    return profile


def profile_csv(profile: Sequence[tuple[float, float]]) -> str:
    """Render a height profile as CSV with header angle_deg,height_dev_mm."""
    lines = ["angle_deg,height_dev_mm"]
    for angle, dev in profile:
        lines.append(f"{angle!r},{dev!r}")
    return "\n".join(lines) + "\n"


def cap_rim_points(
    geom: WheelGeometry,
    pole_angle: float,
    axial_offset: float = 0.0,
    n_points: int = 360,
    beta: float | None = None,
) -> np.ndarray:
    """Sample one cap's rim circle in the wheel frame.

    The rim is the circle at the cap half-angle from the pole, radius
    r_w sin(beta), centered r_w cos(beta) + axial_offset out along the pole
    axis.  Used for interference checks between displaced caps.

    Returns:
        (n_points, 3) array of xyz points, drive axis along +z.
    """
    if beta is None:
        beta = cap_half_angle(geom.r_w, geom.gap, geom.n_caps)
    beta_rad = math.radians(beta)
    phi = math.radians(pole_angle)
    pole = np.array([math.cos(phi), math.sin(phi), 0.0])
    in_plane = np.array([-math.sin(phi), math.cos(phi), 0.0])
    axial = np.array([0.0, 0.0, 1.0])
    center = (geom.r_w * math.cos(beta_rad) + axial_offset) * pole
    rho = geom.r_w * math.sin(beta_rad)
    t = np.linspace(0.0, 2.0 * math.pi, n_points, endpoint=False)
    return (
        center[None, :]
        + rho * np.cos(t)[:, None] * in_plane[None, :]
        + rho * np.sin(t)[:, None] * axial[None, :]
    )
