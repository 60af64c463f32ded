"""Quasi-static step-hooking and gap-crossing feasibility.

When a cap face presses against a step riser, the reaction force shoves that
cap back along its pole axis.  The retreat opens the inter-cap gap, the step
corner nests into the opening, the wheel center advances past its nominal
standoff, and the rim of the following cap can then come down on the step
thread far enough from the corner to hold instead of slipping off.

The solver models one wheel against a straight step:

  * world frame: step edge along x, riser in the plane y = 0, step solid
    filling y >= 0 below z = h, lower ground at z = 0;
  * wheel center at height r_w on the lower ground, drive axis horizontal
    and yawed `approach_yaw` degrees from the step edge;
  * at each drive angle one cap (the riser-facing one) is displaced by the
    slide `s` along its pole axis away from the step, the others stay put;
  * the center advances in +y until any cap surface or rim would enter the
    step solid, caps taken as thin spherical shells bounded by their rims;
  * the hook reach at that stance is the largest y of a following-cap rim
    point at or above thread height.

A drive angle hooks when the reach is at least the hooking margin; the
minimum slide is the smallest `s` for which some angle in one cap period
hooks.  All stance maxima reduce to maximizing a sinusoid over an arc, so
the evaluation is closed form; the matching brute-force check in the test
suite samples the same scene pointwise in 3D.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .geometry import WheelGeometry, cap_half_angle

__all__ = [
    "LimitingFactor",
    "StepScenario",
    "HookOutcome",
    "min_slide_for_hook",
    "hook_reach",
    "hook_feasible",
    "max_step",
    "gap_drop",
    "gap_crossing_feasible",
]

# Margin calibrated once against the prototype's climb record: with the
# full 30 mm slide and wheels in phase the tallest climbable step on the
# 5 mm grid must come out at 45 mm.  Frozen; do not retune per query.
DEFAULT_HOOK_MARGIN_MM = 8.75     # min distance from corner to the rim landing point
PHASE_MARGIN_FACTOR = 1.2         # hooking-margin penalty when wheel pairs run 60 deg out of phase
DEFAULT_PLATE_CLEARANCE_MM = 50.0
SWEEP_STEP_DEG = 0.25             # drive-angle grid for the hooking sweep
REFINE_STEP_DEG = 0.01            # local refinement around the best grid angle
SLIDE_TOL_FRACTION = 1.5e-4       # bisection width as a fraction of r_w (~0.01 mm on a 63.5 mm wheel)

_INF = float("inf")


class LimitingFactor(enum.Enum):
    NONE = "none"
    SLIDE_RANGE = "slide_range"
    PLATE_CONTACT = "plate_contact"
    SLIP = "slip"


@dataclass(frozen=True)
class StepScenario:
    """One step-climb attempt.

    Attributes:
        step_height: riser height h, mm.
        s_max: slide travel available for the attempt, mm (the hardware may
            be restricted below the wheel's built-in limit).
        approach_yaw: drive-axis yaw from the step edge, deg; 45 is the
            natural heading for the square chassis driving straight at a step.
        phase_diff: relative cap phase between paired wheels, deg, 0 or 60.
        hook_margin: minimum corner-to-landing distance for a hold, mm.
        plate_clearance: chassis plate height above ground, mm.
    """

    step_height: float
    s_max: float
    approach_yaw: float = 45.0
    phase_diff: float = 0.0
    hook_margin: float = DEFAULT_HOOK_MARGIN_MM
    plate_clearance: float = DEFAULT_PLATE_CLEARANCE_MM

    def __post_init__(self) -> None:
        if self.step_height < 0 or not math.isfinite(self.step_height):
            raise ValueError(f"step_height must be nonnegative, got {self.step_height!r}")
        if self.s_max < 0 or not math.isfinite(self.s_max):
            raise ValueError(f"s_max must be nonnegative, got {self.s_max!r}")
        if not 0.0 <= self.approach_yaw <= 90.0:
            raise ValueError(f"approach_yaw must be in [0, 90], got {self.approach_yaw!r}")
        if self.phase_diff not in (0.0, 60.0):
            raise ValueError(f"phase_diff must be 0 or 60, got {self.phase_diff!r}")
        if self.hook_margin < 0 or not math.isfinite(self.hook_margin):
            raise ValueError(f"hook_margin must be nonnegative, got {self.hook_margin!r}")
        if self.plate_clearance <= 0:
            raise ValueError(f"plate_clearance must be positive, got {self.plate_clearance!r}")

    @property
    def effective_margin(self) -> float:
        """Hooking margin with the out-of-phase penalty applied, mm."""
        factor = PHASE_MARGIN_FACTOR if self.phase_diff == 60.0 else 1.0
        return self.hook_margin * factor


@dataclass(frozen=True)
class HookOutcome:
    """Result of a feasibility query.

    required_slide is infinite when no slide up to r_w hooks; hook_distance
    is the corner-to-landing distance achieved with the available slide,
    zero when the rim never lands.
    """

    feasible: bool
    required_slide: float   # mm
    hook_distance: float    # mm
    limiting_factor: LimitingFactor

    def as_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "required_slide_mm": None if math.isinf(self.required_slide) else self.required_slide,
            "hook_distance_mm": self.hook_distance,
            "limiting_factor": self.limiting_factor.value,
        }


def _arc_max(
    ay: float, by: float, cy: float,
    az: float, bz: float, cz: float,
    limit: float, require_geq: bool,
) -> float:
    """Max of cy + ay cos t + by sin t where cz + az cos t + bz sin t is
    on the `limit` side (>= when require_geq, else <=); -inf if infeasible.

    The feasible set of a sinusoid threshold is one arc, so the maximum is
    either the unconstrained peak (if inside the arc) or an arc endpoint.
    """
    r_y = math.hypot(ay, by)
    r_z = math.hypot(az, bz)
    if r_z < 1e-15:
        ok = cz >= limit if require_geq else cz <= limit
        return cy + r_y if ok else -_INF
    c0 = (limit - cz) / r_z
    if require_geq:
        if c0 > 1.0:
            return -_INF
        if c0 <= -1.0:
            return cy + r_y
    else:
        if c0 >= 1.0:
            return cy + r_y
        if c0 < -1.0:
            return -_INF
    a0 = math.acos(c0)
    phi_y = math.atan2(by, ay)
    phi_z = math.atan2(bz, az)
    gap = math.remainder(phi_y - phi_z, 2.0 * math.pi)
    inside = abs(gap) <= a0 if require_geq else abs(gap) >= a0
    if inside:
        return cy + r_y
    best = -_INF
    for t in (phi_z + a0, phi_z - a0):
        best = max(best, cy + ay * math.cos(t) + by * math.sin(t))
    return best


def _sector_max_y(
    u: tuple[float, float, float],
    e1: tuple[float, float, float],
    e2: tuple[float, float, float],
    cos_b: float, sin_b: float,
    z_cap: float,
) -> float:
    """Max v_y over the unit-sphere sector within the cap cone around `u`
    and below z_cap; -inf when the sector clears z_cap entirely.

    The objective is linear, so the maximum sits at +y (if inside), on the
    rim circle, or on the z_cap latitude circle.
    """
    best = -_INF
    if u[1] >= cos_b and z_cap >= 0.0:
        best = 1.0
    best = max(
        best,
        _arc_max(
            sin_b * e1[1], sin_b * e2[1], cos_b * u[1],
            sin_b * e1[2], sin_b * e2[2], cos_b * u[2],
            z_cap, require_geq=False,
        ),
    )
    if abs(z_cap) < 1.0:
        rho = math.sqrt(1.0 - z_cap * z_cap)
        best = max(
            best,
            _arc_max(
                0.0, rho, 0.0,
                rho * u[0], rho * u[1], u[2] * z_cap,
                cos_b, require_geq=True,
            ),
        )
    return best


def _cap_frame(delta_rad: float, alpha_rad: float):
    """Pole axis and circle basis for a cap at `delta` from the bottom.

    The pole lives in the vertical drive plane spanned by -z and the travel
    direction f = (-sin(alpha), cos(alpha), 0); e2 is the (horizontal)
    drive axis, shared by every cap.
    """
    sd, cd = math.sin(delta_rad), math.cos(delta_rad)
    sa, ca = math.sin(alpha_rad), math.cos(alpha_rad)
    u = (-sd * sa, sd * ca, -cd)
    e1 = (-cd * sa, cd * ca, sd)
    e2 = (ca, sa, 0.0)
    return u, e1, e2


def _stance_reach(
    beta_rad: float,
    n_caps: int,
    h_norm: float,
    alpha_rad: float,
    s_norm: float,
    theta_deg: float,
) -> float:
    """Hook reach at one drive angle, in wheel radii.

    Every length is normalized by r_w, which makes the whole construction
    exactly scale free.  Returns +inf when nothing on the wheel sits below
    thread height (no stance constraint, vanishing step) and -inf when the
    following cap's rim never gets above the thread.

    The riser-facing cap earns slide credit only while the ground contact
    point stays on one of the other caps; once its own surface carries the
    wheel, pushing it in would drop the wheel instead of advancing it, so
    those stances are evaluated undisplaced.
    """
    cos_b, sin_b = math.cos(beta_rad), math.sin(beta_rad)
    pitch = 2.0 * math.pi / n_caps
    delta0 = math.radians(90.0 - theta_deg)

    if s_norm > 0.0:
        supported = any(
            abs(math.remainder(delta0 + k * pitch, 2.0 * math.pi)) <= beta_rad
            for k in range(1, n_caps)
        )
        if not supported:
            s_norm = 0.0

    frames = [_cap_frame(delta0 + k * pitch, alpha_rad) for k in range(n_caps)]

    # riser-facing cap retreats along its axis, away from the step
    u0 = frames[0][0]
    w = (-u0[0], -u0[1], -u0[2]) if u0[1] > 0.0 else u0
    displacements = [(s_norm * w[0], s_norm * w[1], s_norm * w[2])] + [
        (0.0, 0.0, 0.0)
    ] * (n_caps - 1)

    standoff = -_INF
    for (u, e1, e2), d in zip(frames, displacements):
        z_cap = h_norm - 1.0 - d[2]
        m = _sector_max_y(u, e1, e2, cos_b, sin_b, z_cap)
        if m > -_INF:
            standoff = max(standoff, d[1] + m)
    if standoff == -_INF:
        return _INF
    y_center = -standoff

    u1, e11, e21 = frames[1]
    rim_max = _arc_max(
        sin_b * e11[1], sin_b * e21[1], cos_b * u1[1],
        sin_b * e11[2], sin_b * e21[2], cos_b * u1[2],
        h_norm - 1.0, require_geq=True,
    )
    if rim_max == -_INF:
        return -_INF
    return y_center + rim_max


def _max_reach_norm(
    beta_rad: float, n_caps: int, h_norm: float, alpha_rad: float, s_norm: float
) -> float:
    """Best hook reach over one cap period, in wheel radii."""
    period = 360.0 / n_caps
    best = -_INF
    best_theta = 0.0
    theta = 0.0
    while theta < period:
        reach = _stance_reach(beta_rad, n_caps, h_norm, alpha_rad, s_norm, theta)
        if reach > best:
            best, best_theta = reach, theta
        theta += SWEEP_STEP_DEG
    if math.isinf(best):
        return best
    lo = best_theta - SWEEP_STEP_DEG
    steps = int(round(2.0 * SWEEP_STEP_DEG / REFINE_STEP_DEG))
    for i in range(steps + 1):
        reach = _stance_reach(
            beta_rad, n_caps, h_norm, alpha_rad, s_norm, lo + i * REFINE_STEP_DEG
        )
        best = max(best, reach)
    return best


def hook_reach(
    geom: WheelGeometry,
    step_height: float,
    approach_yaw: float = 45.0,
    slide: float = 0.0,
) -> float:
    """Best corner-to-landing reach over one cap period, mm.

    The riser-facing cap is held displaced by `slide`; the reach is the
    farthest a following-cap rim point at or above thread height overhangs
    the riser with the wheel pressed into the step.
    """
    if step_height < 0 or not math.isfinite(step_height):
        raise ValueError(f"step_height must be nonnegative, got {step_height!r}")
    if slide < 0 or not math.isfinite(slide):
        raise ValueError(f"slide must be nonnegative, got {slide!r}")
    beta = math.radians(cap_half_angle(geom.r_w, geom.gap, geom.n_caps))
    reach = _max_reach_norm(
        beta, geom.n_caps, step_height / geom.r_w,
        math.radians(approach_yaw), slide / geom.r_w,
    )
    return geom.r_w * reach


def min_slide_for_hook(
    geom: WheelGeometry,
    step_height: float,
    approach_yaw: float = 45.0,
    hook_margin: float = DEFAULT_HOOK_MARGIN_MM,
) -> float:
    """Smallest slide displacement that hooks a step, mm.

    Sweeps the drive angle over one cap period at each candidate slide and
    bisects on the slide; a candidate succeeds when some angle reaches at
    least `hook_margin` past the corner at thread height.  The search is
    carried out in wheel radii, so scaling every length input scales the
    result exactly.

    Returns:
        0.0 when the wheel hooks without sliding, inf when even a slide of
        r_w fails.

    Raises:
        ValueError: if the step is as tall as the wheel (h >= 2 r_w).
    """
    if step_height < 0 or not math.isfinite(step_height):
        raise ValueError(f"step_height must be nonnegative, got {step_height!r}")
    if step_height >= 2.0 * geom.r_w:
        raise ValueError(
            f"step of {step_height} mm is taller than the {2 * geom.r_w} mm wheel"
        )
    if hook_margin < 0 or not math.isfinite(hook_margin):
        raise ValueError(f"hook_margin must be nonnegative, got {hook_margin!r}")
    if step_height == 0.0:
        return 0.0

    beta = math.radians(cap_half_angle(geom.r_w, geom.gap, geom.n_caps))
    alpha = math.radians(approach_yaw)
    h_norm = step_height / geom.r_w
    margin_norm = hook_margin / geom.r_w

    def hooked(s_norm: float) -> bool:
        return (
            _max_reach_norm(beta, geom.n_caps, h_norm, alpha, s_norm) >= margin_norm
        )

    if hooked(0.0):
        return 0.0
    if not hooked(1.0):
        return _INF

    # coarse bracket, then bisection
    lo, hi = 0.0, 1.0
    step = 0.05
    s = step
    while s < 1.0:
        if hooked(s):
            hi = s
            break
        lo = s
        s += step
    while hi - lo > SLIDE_TOL_FRACTION:
        mid = 0.5 * (lo + hi)
        if hooked(mid):
            hi = mid
        else:
            lo = mid
    return geom.r_w * hi


def hook_feasible(geom: WheelGeometry, scenario: StepScenario) -> HookOutcome:
    """Decide whether one wheel can hook and hold a step.

    Feasible when the required slide fits the available travel and the step
    stays below the chassis plates.  The plate limit dominates the reported
    limiting factor; a required slide beyond r_w reports as slip (the rim
    never lands no matter the slide).
    """
    h = scenario.step_height
    if h == 0.0:
        return HookOutcome(True, 0.0, 0.0, LimitingFactor.NONE)

    if h >= 2.0 * geom.r_w:
        factor = (
            LimitingFactor.PLATE_CONTACT
            if h >= scenario.plate_clearance
            else LimitingFactor.SLIP
        )
        return HookOutcome(False, _INF, 0.0, factor)

    required = min_slide_for_hook(geom, h, scenario.approach_yaw, scenario.effective_margin)
    available = min(scenario.s_max, geom.r_w)
    distance = max(hook_reach(geom, h, scenario.approach_yaw, available), 0.0)

    feasible = required <= scenario.s_max and h < scenario.plate_clearance
    if h >= scenario.plate_clearance:
        factor = LimitingFactor.PLATE_CONTACT
    elif math.isinf(required):
        factor = LimitingFactor.SLIP
    elif required > scenario.s_max:
        factor = LimitingFactor.SLIDE_RANGE
    else:
        factor = LimitingFactor.NONE
    return HookOutcome(feasible, required, distance, factor)


def max_step(
    geom: WheelGeometry,
    s_max: float,
    phase_diff: float = 0.0,
    plate_clearance: float = DEFAULT_PLATE_CLEARANCE_MM,
    resolution: float = 5.0,
    approach_yaw: float = 45.0,
    hook_margin: float = DEFAULT_HOOK_MARGIN_MM,
) -> float:
    """Tallest step height on a grid that remains feasible, mm.

    Heights are scanned upward in `resolution` steps until the first
    failure; feasibility is monotone in height, so this is the grid
    maximum.  Returns 0.0 when even the first grid height fails.
    """
    if resolution <= 0 or not math.isfinite(resolution):
        raise ValueError(f"resolution must be positive, got {resolution!r}")
    best = 0.0
    h = resolution
    limit = min(plate_clearance, 2.0 * geom.r_w)
    while h < limit + resolution:
        scenario = StepScenario(
            step_height=h,
            s_max=s_max,
            approach_yaw=approach_yaw,
            phase_diff=phase_diff,
            hook_margin=hook_margin,
            plate_clearance=plate_clearance,
        )
        if not hook_feasible(geom, scenario).feasible:
            break
        best = h
        h += resolution
    return best


def gap_drop(r_w: float, gap_width: float) -> float:
    """How far a wheel of radius r_w sinks into a gap of `gap_width`, mm.

    The wheel bridges the gap on its two edges; a gap at least as wide as
    the wheel returns r_w (the wheel falls in to axle depth, unrecoverable).
    """
    if r_w <= 0 or not math.isfinite(r_w):
        raise ValueError(f"r_w must be positive, got {r_w!r}")
    if gap_width < 0 or not math.isfinite(gap_width):
        raise ValueError(f"gap_width must be nonnegative, got {gap_width!r}")
    if gap_width >= 2.0 * r_w:
        return r_w
    return r_w - math.sqrt(r_w * r_w - (gap_width / 2.0) ** 2)


def gap_crossing_feasible(
    geom: WheelGeometry, gap_width: float, scenario: StepScenario
) -> HookOutcome:
    """Decide whether the wheel can cross a gap between two surfaces.

    Sinking into the gap presses the leading edge against the far corner at
    a depth of gap_drop, so crossing reduces to hooking an equivalent step
    of that height; a wheel that falls to axle depth cannot recover.
    """
    drop = gap_drop(geom.r_w, gap_width)
    if drop >= geom.r_w:
        return HookOutcome(False, _INF, 0.0, LimitingFactor.SLIP)
    return hook_feasible(geom, replace(scenario, step_height=drop))
