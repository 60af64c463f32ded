"""Design, step-climb, kinematics, and running analysis for a passive
transformable spherical wheel and its four-wheel omnidirectional chassis.

The wheel is a sphere split into spherical caps that spin freely about
axes perpendicular to the driven axle.  Each cap rides a spring-centered
linear slide along its own axis, which lets the rim hook step edges; small
barrel rollers bridge the cap poles so lateral free rolling never dies.
This package covers the resulting design rules (`geometry`), the contact
surface of a rolling wheel (`wheel`), quasi-static step and gap
feasibility (`stepclimb`), chassis kinematics and odometry (`chassis`),
flat-ground running traces with spectra (`simulate`), and a rendered
report path (`report`); `cli` exposes all of it as the `ptob` command.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("ptob")
except PackageNotFoundError:
    __version__ = "0.0.0"

from .chassis import (
    ChassisConfig,
    Pose,
    Twist,
    WheelSpeeds,
    forward_kinematics,
    integrate_odometry,
    inverse_kinematics,
    mixing_matrix,
    plate_interference,
    wrap_heading,
)
from .geometry import (
    ConstraintCheck,
    ConstraintReport,
    WheelGeometry,
    cap_half_angle,
    max_cap_dimensions,
    support_plate_spacing,
    validate_wheel_geometry,
)
from .simulate import (
    Motion,
    RunScenario,
    Spectrum,
    TimeSeries,
    Window,
    dominant_peaks,
    run_flat_ground,
    spectrum,
)
from .stepclimb import (
    HookOutcome,
    LimitingFactor,
    StepScenario,
    gap_crossing_feasible,
    gap_drop,
    hook_feasible,
    hook_reach,
    max_step,
    min_slide_for_hook,
)
from .wheel import (
    CapLayout,
    ContactPoint,
    Element,
    ElementKind,
    SlideUnit,
    active_element,
    cap_rim_points,
    contact_height_profile,
    contact_state,
    edge_opening,
    slide_step,
)

__all__ = [
    "__version__",
    "CapLayout",
    "ChassisConfig",
    "ConstraintCheck",
    "ConstraintReport",
    "ContactPoint",
    "Element",
    "ElementKind",
    "HookOutcome",
    "LimitingFactor",
    "Motion",
    "Pose",
    "RunScenario",
    "SlideUnit",
    "Spectrum",
    "StepScenario",
    "TimeSeries",
    "Twist",
    "WheelGeometry",
    "WheelSpeeds",
    "Window",
    "active_element",
    "cap_half_angle",
    "cap_rim_points",
    "contact_height_profile",
    "contact_state",
    "dominant_peaks",
    "edge_opening",
    "forward_kinematics",
    "gap_crossing_feasible",
    "gap_drop",
    "hook_feasible",
    "hook_reach",
    "integrate_odometry",
    "inverse_kinematics",
    "max_cap_dimensions",
    "max_step",
    "min_slide_for_hook",
    "mixing_matrix",
    "plate_interference",
    "run_flat_ground",
    "slide_step",
    "spectrum",
    "support_plate_spacing",
    "validate_wheel_geometry",
    "wrap_heading",
]
