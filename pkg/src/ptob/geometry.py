"""Design rules for spherical-cap omnidirectional wheels.

A PTOB-style wheel tiles the band of a sphere around its drive axis with
``n_caps`` identical spherical caps.  Each cap spins passively about its own
pole axis and is carried on a spring-centered linear slide along that axis.
This module holds the wheel parameter set, the closed-form size limits the
caps must respect so they never collide, and the support-plate spacing rule
that keeps a fully retracted slide clear of the chassis plates.

All lengths are millimetres, all angles degrees unless a name says otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

__all__ = [
    "WheelGeometry",
    "ConstraintCheck",
    "ConstraintReport",
    "cap_half_angle",
    "max_cap_dimensions",
    "validate_wheel_geometry",
    "support_plate_spacing",
]

# Fraction of the wheel radius the in-wheel actuator may occupy so the hub
# clears a step one third of the wheel diameter tall.
STEP_RULE_DIAMETER_FRACTION = 2.0 / 3.0


@dataclass(frozen=True)
class WheelGeometry:
    """Parameter set for one wheel.

    Attributes:
        r_w: wheel (sphere) radius, mm.
        h_s: cap thickness measured along the cap pole axis, mm.
        d_s: outer diameter of the cap rim, mm.
        d_a: diameter of the in-wheel actuator housing, mm.
        gap: chordal clearance left between adjacent cap rims, mm.
        s_max: passive slide travel limit per cap, mm (stroke is +/- s_max).
        k_spring_force: return-spring force at full slide deflection, N.
        n_caps: number of caps tiling the drive band.
    """

    r_w: float
    h_s: float
    d_s: float
    d_a: float
    gap: float = 0.0
    s_max: float = 0.0
    k_spring_force: float = 0.0
    n_caps: int = 3

    def __post_init__(self) -> None:
        for name in ("r_w", "h_s", "d_s", "d_a", "gap", "s_max", "k_spring_force"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value!r}")
        if self.r_w <= 0:
            raise ValueError(f"r_w must be positive, got {self.r_w!r}")
        if int(self.n_caps) != self.n_caps or self.n_caps < 2:
            raise ValueError(f"n_caps must be an integer >= 2, got {self.n_caps!r}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=4)

    @classmethod
    def from_json(cls, text: str) -> "WheelGeometry":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("wheel geometry JSON must be an object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown wheel geometry fields: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class ConstraintCheck:
    """One design rule evaluated against a geometry."""

    constraint: str
    bound: float      # mm, exclusive upper bound on `actual`
    actual: float     # mm
    satisfied: bool
    slack: float      # mm, bound - actual

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ConstraintReport:
    """Outcome of validating a wheel geometry against the design rules."""

    checks: tuple[ConstraintCheck, ...]
    all_satisfied: bool
    strict: bool = field(default=True)

    def as_dict(self) -> dict:
        return {
            "checks": [c.as_dict() for c in self.checks],
            "all_satisfied": self.all_satisfied,
            "strict": self.strict,
        }


def cap_half_angle(r_w: float, gap: float, n_caps: int) -> float:
    """Angular half-width of one cap, degrees.

    The n poles sit in the drive plane 360/n degrees apart.  Each cap gives
    up half of the inter-cap gap, measured as the chord `gap` between
    adjacent rims, so the half-angle is 180/n minus asin(gap / 2 r_w).

    Raises:
        ValueError: if the gap leaves no positive cap width.
    """
    if r_w <= 0 or not math.isfinite(r_w):
        raise ValueError(f"r_w must be positive and finite, got {r_w!r}")
    if gap < 0 or not math.isfinite(gap):
        raise ValueError(f"gap must be nonnegative and finite, got {gap!r}")
    if int(n_caps) != n_caps or n_caps < 2:
        raise ValueError(f"n_caps must be an integer >= 2, got {n_caps!r}")
    half_chord = gap / (2.0 * r_w)
    if half_chord >= 1.0:
        raise ValueError(f"gap {gap} mm cannot exceed the wheel diameter")
    beta = 180.0 / n_caps - math.degrees(math.asin(half_chord))
    if beta <= 0.0:
        raise ValueError(
            f"gap {gap} mm leaves no positive cap width for n_caps={n_caps}"
        )
    return beta


def max_cap_dimensions(r_w: float, gap: float, n_caps: int) -> tuple[float, float]:
    """Exclusive upper bounds (h_s_max, d_s_max) for the cap size.

    A cap of half-angle beta may be at most r_w (1 - cos beta) thick and its
    rim at most 2 r_w sin(beta) across, otherwise neighbouring caps touch.

    Returns:
        (h_s_max, d_s_max) in mm.
    """
    beta = math.radians(cap_half_angle(r_w, gap, n_caps))
    return r_w * (1.0 - math.cos(beta)), 2.0 * r_w * math.sin(beta)


def validate_wheel_geometry(geom: WheelGeometry, strict: bool = True) -> ConstraintReport:
    """Evaluate every cap/actuator sizing rule for `geom`.

    Checks, each a strict inequality:
      * cap_thickness:     h_s < r_w (1 - cos beta)
      * cap_rim_diameter:  d_s < 2 r_w sin beta
      * actuator_fit:      d_a < 2 (r_w - h_s), the hub must pass between
                           the cap base planes
      * actuator_step_rule (strict only): d_a < (2/3) r_w, keeps the hub
                           clear of a step one third of the wheel diameter

    A violated rule is reported, never silently corrected.

    Args:
        geom: wheel parameter set (already rejected if non-finite/negative).
        strict: include the step-climb actuator rule.

    Returns:
        ConstraintReport with per-rule slack and the overall verdict.
    """
    h_s_max, d_s_max = max_cap_dimensions(geom.r_w, geom.gap, geom.n_caps)
    actuator_fit_max = 2.0 * (geom.r_w - geom.h_s)
    checks = [
        _check("cap_thickness", h_s_max, geom.h_s),
        _check("cap_rim_diameter", d_s_max, geom.d_s),
        _check("actuator_fit", actuator_fit_max, geom.d_a),
    ]
    if strict:
        checks.append(
            _check("actuator_step_rule", STEP_RULE_DIAMETER_FRACTION * geom.r_w, geom.d_a)
        )
    return ConstraintReport(
        checks=tuple(checks),
        all_satisfied=all(c.satisfied for c in checks),
        strict=strict,
    )


def _check(name: str, bound: float, actual: float) -> ConstraintCheck:
    return ConstraintCheck(
        constraint=name,
        bound=bound,
        actual=actual,
        satisfied=actual < bound,
        slack=bound - actual,
    )


def support_plate_spacing(geom: WheelGeometry, clearance: float = 0.0) -> float:
    """Minimum spacing between the chassis plates flanking one wheel, mm.

    The plates must clear the cap rim plus the full slide stroke on both
    sides: d_p_min = d_s + 2 s_max + 2 clearance.

    Args:
        geom: wheel parameter set.
        clearance: extra per-side margin, mm (>= 0).
    """
    if clearance < 0 or not math.isfinite(clearance):
        raise ValueError(f"clearance must be nonnegative and finite, got {clearance!r}")
    return geom.d_s + 2.0 * geom.s_max + 2.0 * clearance
