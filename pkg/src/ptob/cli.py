"""Command-line surface.

One verb per library operation, JSON or CSV out, all lengths in mm,
angles in deg, time in s at this boundary (the library itself keeps
headings and turn rates in radians).  A wheel build is read from --geom,
from the PTOB_CONFIG environment variable, or from the packaged prototype
file, in that order; individual --r-w style flags override loaded values.

Exit codes: 0 success, 1 bad input, 2 design-check found violations.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from importlib import resources
from pathlib import Path

from . import chassis as chassis_mod
from . import geometry, simulate, stepclimb
from .chassis import ChassisConfig, Pose, Twist, WheelSpeeds

_GEOM_FIELDS = ("r_w", "h_s", "d_s", "d_a", "gap", "s_max", "k_spring_force", "n_caps")


def _packaged_geom_text() -> str:
    return resources.files("ptob").joinpath("data/prototype.json").read_text()


def _load_geom(args: argparse.Namespace) -> geometry.WheelGeometry:
    path = getattr(args, "geom", None) or os.environ.get("PTOB_CONFIG")
    text = Path(path).read_text() if path else _packaged_geom_text()
    geom = geometry.WheelGeometry.from_json(text)
    overrides = {
        name: getattr(args, name)
        for name in _GEOM_FIELDS
        if getattr(args, name, None) is not None
    }
    if "n_caps" in overrides:
        overrides["n_caps"] = int(overrides["n_caps"])
    return dataclasses.replace(geom, **overrides) if overrides else geom


def _chassis(args: argparse.Namespace) -> ChassisConfig:
    geom = _load_geom(args)
    kwargs = {}
    if getattr(args, "mount_radius", None) is not None:
        kwargs["mount_radius"] = args.mount_radius
    return ChassisConfig(geom=geom, **kwargs)


def _emit(text: str, args: argparse.Namespace) -> None:
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(doc, args: argparse.Namespace) -> None:
    _emit(json.dumps(doc, indent=2) + "\n", args)


def _csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _parse_floats(text: str, n: int | None = None) -> list[float]:
    values = [float(v) for v in text.split(",") if v.strip() != ""]
    if n is not None and len(values) != n:
        raise ValueError(f"expected {n} comma-separated values, got {text!r}")
    return values


def _scenario(args: argparse.Namespace, geom: geometry.WheelGeometry, height: float) -> stepclimb.StepScenario:
    s_max = args.s_max if args.s_max is not None else geom.s_max
    return stepclimb.StepScenario(
        step_height=height,
        s_max=s_max,
        approach_yaw=args.yaw,
        phase_diff=args.phase,
        hook_margin=args.margin,
        plate_clearance=args.clearance,
    )


# ---------------------------------------------------------------- verbs


def _cmd_design_check(args: argparse.Namespace) -> int:
    geom = _load_geom(args)
    report = geometry.validate_wheel_geometry(geom, strict=args.strict)
    if args.format == "json":
        _emit_json(report.as_dict(), args)
    else:
        rows = [
            [c.constraint, c.bound, c.actual, c.satisfied, c.slack]
            for c in report.checks
        ]
        _emit(_csv(["constraint", "bound_mm", "actual_mm", "satisfied", "slack_mm"], rows), args)
    return 0 if report.all_satisfied else 2


def _cmd_cap_bounds(args: argparse.Namespace) -> int:
    beta = geometry.cap_half_angle(args.r_w, args.gap, args.n_caps)
    h_max, d_max = geometry.max_cap_dimensions(args.r_w, args.gap, args.n_caps)
    doc = {"beta_deg": beta, "h_s_max_mm": h_max, "d_s_max_mm": d_max}
    if args.format == "json":
        _emit_json(doc, args)
    else:
        _emit(_csv(list(doc), [list(doc.values())]), args)
    return 0


def _cmd_plate_spacing(args: argparse.Namespace) -> int:
    spacing = geometry.support_plate_spacing(_load_geom(args), args.clearance)
    if args.format == "json":
        _emit_json({"plate_spacing_mm": spacing}, args)
    else:
        _emit(_csv(["plate_spacing_mm"], [[spacing]]), args)
    return 0


def _cmd_stepclimb_solve(args: argparse.Namespace) -> int:
    geom = _load_geom(args)
    outcome = stepclimb.hook_feasible(geom, _scenario(args, geom, args.height))
    doc = outcome.as_dict()
    if args.format == "json":
        _emit_json(doc, args)
    else:
        _emit(_csv(list(doc), [list(doc.values())]), args)
    return 0


def _cmd_stepclimb_table(args: argparse.Namespace) -> int:
    geom = _load_geom(args)
    slides = _parse_floats(args.s_max_list)
    phases = _parse_floats(args.phases)
    rows = []
    for s in slides:
        for phase in phases:
            step = stepclimb.max_step(
                geom,
                s_max=s,
                phase_diff=phase,
                plate_clearance=args.clearance,
                resolution=args.resolution,
                approach_yaw=args.yaw,
                hook_margin=args.margin,
            )
            rows.append([s, phase, step])
    if args.format == "json":
        _emit_json(
            [dict(zip(("s_max_mm", "phase_deg", "max_step_mm"), row)) for row in rows], args
        )
    else:
        _emit(_csv(["s_max_mm", "phase_deg", "max_step_mm"], rows), args)
    return 0


def _cmd_gap(args: argparse.Namespace) -> int:
    geom = _load_geom(args)
    drop = stepclimb.gap_drop(geom.r_w, args.width)
    outcome = stepclimb.gap_crossing_feasible(geom, args.width, _scenario(args, geom, 0.0))
    doc = {"gap_width_mm": args.width, "drop_mm": drop, **outcome.as_dict()}
    if args.format == "json":
        _emit_json(doc, args)
    else:
        _emit(_csv(list(doc), [list(doc.values())]), args)
    return 0


def _cmd_kinematics_ik(args: argparse.Namespace) -> int:
    config = _chassis(args)
    twist = Twist(args.vx, args.vy, math.radians(args.omega))
    speeds = chassis_mod.inverse_kinematics(config, twist)
    if args.format == "json":
        _emit_json({"speeds_mm_s": list(speeds)}, args)
    else:
        header = [f"w{i + 1}_mm_s" for i in range(len(speeds))]
        _emit(_csv(header, [list(speeds)]), args)
    return 0


def _cmd_kinematics_fk(args: argparse.Namespace) -> int:
    config = _chassis(args)
    values = _parse_floats(args.speeds, config.n_wheels)
    twist, residual = chassis_mod.forward_kinematics(config, WheelSpeeds(tuple(values)))
    doc = {
        "v_x_mm_s": twist.v_x,
        "v_y_mm_s": twist.v_y,
        "omega_rad_s": twist.omega,
        "omega_deg_s": math.degrees(twist.omega),
        "residual_mm_s": residual,
    }
    if args.format == "json":
        _emit_json(doc, args)
    else:
        _emit(_csv(list(doc), [list(doc.values())]), args)
    return 0


def _cmd_odometry(args: argparse.Namespace) -> int:
    start = Pose(args.x0, args.y0, math.radians(args.heading0))
    twist = Twist(args.vx, args.vy, math.radians(args.omega))
    pose = chassis_mod.integrate_odometry(start, twist, args.duration)
    doc = {
        "x_mm": pose.x,
        "y_mm": pose.y,
        "heading_rad": pose.heading,
        "heading_deg": math.degrees(pose.heading),
    }
    if args.format == "json":
        _emit_json(doc, args)
    else:
        _emit(_csv(list(doc), [list(doc.values())]), args)
    return 0


def _run_scenario(args: argparse.Namespace) -> simulate.RunScenario:
    return simulate.RunScenario(
        chassis=_chassis(args),
        motion=simulate.Motion(args.motion),
        wheel_rate=args.rate,
        duration=args.duration,
        sample_rate=args.sample_rate,
        slide_drift_coeff=args.drift_coeff,
    )


def _cmd_simulate(args: argparse.Namespace) -> int:
    series = simulate.run_flat_ground(_run_scenario(args))
    if args.format == "json":
        doc = {"sample_rate_hz": series.sample_rate}
        columns = series.column_names()
        doc["columns"] = columns
        doc["data"] = {
            name: [float(v) for v in series.channel(name)]
            for name in columns
            if name != "t_s"
        }
        doc["data"]["t_s"] = [float(v) for v in series.t]
        _emit_json(doc, args)
    else:
        _emit(series.to_csv(), args)
    return 0


def _cmd_spectrum(args: argparse.Namespace) -> int:
    text = Path(args.input).read_text() if args.input != "-" else sys.stdin.read()
    series = simulate.TimeSeries.from_csv(text)
    spec = simulate.spectrum(series, args.channel, simulate.Window(args.window))
    if args.peaks is not None:
        band = tuple(_parse_floats(args.band, 2)) if args.band else None
        peaks = simulate.dominant_peaks(spec, k=args.peaks, band=band)
        _emit_json(
            {
                "channel": args.channel,
                "window": args.window,
                "peaks": [{"freq_hz": f, "mag": m} for f, m in peaks],
            },
            args,
        )
    elif args.format == "json":
        _emit_json(
            {
                "window": args.window,
                "sample_rate_hz": spec.sample_rate,
                "freq_hz": [float(f) for f in spec.freq],
                "mag": [float(m) for m in spec.magnitude],
            },
            args,
        )
    else:
        _emit(spec.to_csv(), args)
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    from . import report as report_mod

    manifest = report_mod.run_report(_run_scenario(args), args.out_dir, n_peaks=args.peaks)
    sys.stdout.write(json.dumps(manifest, indent=2) + "\n")
    return 0


# ---------------------------------------------------------------- parser


def _add_geom_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--geom", metavar="PATH", help="wheel geometry JSON file")
    group = parser.add_argument_group("geometry overrides (mm unless noted)")
    for name in _GEOM_FIELDS:
        flag = "--" + name.replace("_", "-")
        group.add_argument(flag, type=float, default=None, help=argparse.SUPPRESS)


def _add_format_flags(parser: argparse.ArgumentParser, default: str) -> None:
    parser.add_argument("--format", choices=("json", "csv"), default=default)
    parser.add_argument("--out", metavar="PATH", help="write output here instead of stdout")


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    # --s-max comes from the geometry override group
    parser.add_argument("--yaw", type=float, default=45.0, help="approach yaw, deg")
    parser.add_argument("--phase", type=float, default=0.0, help="wheel-pair phase offset, deg (0 or 60)")
    parser.add_argument("--margin", type=float, default=stepclimb.DEFAULT_HOOK_MARGIN_MM, help="hook margin, mm")
    parser.add_argument(
        "--clearance", type=float, default=stepclimb.DEFAULT_PLATE_CLEARANCE_MM,
        help="plate clearance, mm",
    )


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    _add_geom_flags(parser)
    parser.add_argument("--mount-radius", type=float, default=None, help="wheel mount radius, mm")
    parser.add_argument(
        "--motion", choices=[m.value for m in simulate.Motion], default="forward"
    )
    parser.add_argument("--rate", type=float, default=simulate.DEFAULT_WHEEL_RATE_RPS, help="wheel rate, rev/s")
    parser.add_argument("--duration", type=float, default=10.0, help="run length, s")
    parser.add_argument("--sample-rate", type=float, default=simulate.DEFAULT_SAMPLE_RATE_HZ, help="Hz")
    parser.add_argument(
        "--drift-coeff", type=float, default=simulate.DEFAULT_SLIDE_DRIFT_COEFF,
        help="slide drift coefficient",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptob",
        description="Design checks, step-climb solvers, kinematics, and flat-ground runs "
        "for a transformable spherical wheel.",
    )
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    p = sub.add_parser("design-check", help="evaluate the wheel design rules")
    _add_geom_flags(p)
    p.add_argument("--strict", action=argparse.BooleanOptionalAction, default=True,
                   help="include the actuator step rule")
    _add_format_flags(p, "json")
    p.set_defaults(func=_cmd_design_check)

    p = sub.add_parser("cap-bounds", help="cap size bounds for a radius, gap, and cap count")
    p.add_argument("--r-w", type=float, required=True, help="wheel radius, mm")
    p.add_argument("--gap", type=float, default=0.0, help="inter-cap gap, mm")
    p.add_argument("--n-caps", type=int, default=3)
    _add_format_flags(p, "json")
    p.set_defaults(func=_cmd_cap_bounds)

    p = sub.add_parser("plate-spacing", help="minimum support plate spacing")
    _add_geom_flags(p)
    p.add_argument("--clearance", type=float, default=0.0, help="extra clearance per side, mm")
    _add_format_flags(p, "json")
    p.set_defaults(func=_cmd_plate_spacing)

    p = sub.add_parser("stepclimb-solve", help="hook feasibility for one step height")
    _add_geom_flags(p)
    p.add_argument("--height", type=float, required=True, help="step height, mm")
    _add_scenario_flags(p)
    _add_format_flags(p, "json")
    p.set_defaults(func=_cmd_stepclimb_solve)

    p = sub.add_parser("stepclimb-table", help="max climbable step over slide and phase settings")
    _add_geom_flags(p)
    p.add_argument("--s-max-list", default="0,15,30", metavar="MM,MM,...",
                   help="slide travels to tabulate")
    p.add_argument("--phases", default="0,60", metavar="DEG,DEG", help="phase offsets to tabulate")
    p.add_argument("--resolution", type=float, default=5.0, help="height grid step, mm")
    p.add_argument("--yaw", type=float, default=45.0)
    p.add_argument("--margin", type=float, default=stepclimb.DEFAULT_HOOK_MARGIN_MM)
    p.add_argument("--clearance", type=float, default=stepclimb.DEFAULT_PLATE_CLEARANCE_MM)
    _add_format_flags(p, "csv")
    p.set_defaults(func=_cmd_stepclimb_table)

    p = sub.add_parser("gap", help="gap-crossing feasibility")
    _add_geom_flags(p)
    p.add_argument("--width", type=float, required=True, help="gap width, mm")
    _add_scenario_flags(p)
    _add_format_flags(p, "json")
    p.set_defaults(func=_cmd_gap)

    p = sub.add_parser("kinematics-ik", help="wheel speeds for a body twist")
    _add_geom_flags(p)
    p.add_argument("--mount-radius", type=float, default=None)
    p.add_argument("--vx", type=float, required=True, help="mm/s")
    p.add_argument("--vy", type=float, required=True, help="mm/s")
    p.add_argument("--omega", type=float, required=True, help="deg/s")
    _add_format_flags(p, "json")
    p.set_defaults(func=_cmd_kinematics_ik)

    p = sub.add_parser("kinematics-fk", help="least-squares body twist for wheel speeds")
    _add_geom_flags(p)
    p.add_argument("--mount-radius", type=float, default=None)
    p.add_argument("--speeds", required=True, metavar="W1,W2,W3,W4", help="mm/s")
    _add_format_flags(p, "json")
    p.set_defaults(func=_cmd_kinematics_fk)

    p = sub.add_parser("odometry", help="pose after driving a constant twist")
    p.add_argument("--vx", type=float, required=True, help="mm/s")
    p.add_argument("--vy", type=float, required=True, help="mm/s")
    p.add_argument("--omega", type=float, required=True, help="deg/s")
    p.add_argument("--duration", type=float, required=True, help="s")
    p.add_argument("--x0", type=float, default=0.0, help="mm")
    p.add_argument("--y0", type=float, default=0.0, help="mm")
    p.add_argument("--heading0", type=float, default=0.0, help="deg")
    _add_format_flags(p, "json")
    p.set_defaults(func=_cmd_odometry)

    p = sub.add_parser("simulate", help="flat-ground run traces")
    _add_run_flags(p)
    _add_format_flags(p, "csv")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("spectrum", help="magnitude spectrum of a recorded trace")
    p.add_argument("--input", required=True, metavar="PATH", help="run CSV, or - for stdin")
    p.add_argument("--channel", default="proxy")
    p.add_argument("--window", choices=[w.value for w in simulate.Window], default="hann")
    p.add_argument("--peaks", type=int, default=None, metavar="K",
                   help="emit the K dominant peaks as JSON instead of the spectrum")
    p.add_argument("--band", default=None, metavar="LO,HI", help="peak search band, Hz")
    _add_format_flags(p, "csv")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("report", help="run a scenario and render figures plus CSVs")
    _add_run_flags(p)
    p.add_argument("--out-dir", required=True, metavar="DIR")
    p.add_argument("--peaks", type=int, default=3, help="peaks to annotate")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; reserve 2 for design verdicts
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
