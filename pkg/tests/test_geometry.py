"""Design-rule checks: cap size bounds, validation verdicts, plate spacing."""

import json
import math
import random

import numpy as np
import pytest

from ptob.geometry import (
    STEP_RULE_DIAMETER_FRACTION,
    WheelGeometry,
    cap_half_angle,
    max_cap_dimensions,
    support_plate_spacing,
    validate_wheel_geometry,
)
from ptob.wheel import cap_rim_points


def test_cap_half_angle_zero_gap():
    assert cap_half_angle(63.5, 0.0, 3) == pytest.approx(60.0, abs=1e-12)
    assert cap_half_angle(10.0, 0.0, 4) == pytest.approx(45.0, abs=1e-12)


def test_cap_half_angle_prototype_gap():
    beta = cap_half_angle(63.5, 0.5, 3)
    assert beta == pytest.approx(60.0 - math.degrees(math.asin(0.5 / 127.0)), abs=1e-12)
    assert beta == pytest.approx(59.77442548217123, abs=1e-9)


def test_cap_half_angle_rejects_bad_input():
    with pytest.raises(ValueError):
        cap_half_angle(0.0, 0.0, 3)
    with pytest.raises(ValueError):
        cap_half_angle(63.5, -1.0, 3)
    with pytest.raises(ValueError):
        cap_half_angle(63.5, 0.0, 1)
    with pytest.raises(ValueError):
        cap_half_angle(63.5, 127.0, 3)   # gap as wide as the wheel
    with pytest.raises(ValueError):
        cap_half_angle(1.0, 1.8, 3)      # no positive cap width left


def test_max_cap_dimensions_closed_form():
    h_max, d_max = max_cap_dimensions(63.5, 0.0, 3)
    assert h_max == pytest.approx(63.5 * (1.0 - math.cos(math.radians(60.0))), abs=1e-9)
    assert d_max == pytest.approx(2.0 * 63.5 * math.sin(math.radians(60.0)), abs=1e-9)
    assert h_max == pytest.approx(31.75, abs=1e-9)
    assert d_max == pytest.approx(109.9852262806237, abs=1e-9)


def test_max_cap_dimensions_monotone_in_gap():
    gaps = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0]
    dims = [max_cap_dimensions(63.5, g, 3) for g in gaps]
    for (h_a, d_a_), (h_b, d_b) in zip(dims, dims[1:]):
        assert h_b < h_a
        assert d_b < d_a_


def test_max_cap_dimensions_homogeneous():
    rng = random.Random(7)
    base = max_cap_dimensions(63.5, 0.5, 3)
    for _ in range(100):
        a = rng.uniform(0.01, 100.0)
        h_max, d_max = max_cap_dimensions(a * 63.5, a * 0.5, 3)
        assert h_max == pytest.approx(a * base[0], rel=1e-12)
        assert d_max == pytest.approx(a * base[1], rel=1e-12)


def test_prototype_passes_validation(prototype):
    report = validate_wheel_geometry(prototype, strict=True)
    assert report.all_satisfied
    assert report.strict
    names = [c.constraint for c in report.checks]
    assert names == ["cap_thickness", "cap_rim_diameter", "actuator_fit", "actuator_step_rule"]
    by_name = {c.constraint: c for c in report.checks}
    assert by_name["actuator_fit"].bound == pytest.approx(67.0, abs=1e-12)
    assert by_name["actuator_step_rule"].bound == pytest.approx(
        STEP_RULE_DIAMETER_FRACTION * 63.5, abs=1e-12
    )
    for check in report.checks:
        assert check.satisfied
        assert check.slack == pytest.approx(check.bound - check.actual, abs=1e-12)


def test_relaxed_mode_drops_step_rule(prototype):
    report = validate_wheel_geometry(prototype, strict=False)
    assert not report.strict
    assert [c.constraint for c in report.checks] == [
        "cap_thickness", "cap_rim_diameter", "actuator_fit",
    ]


def test_boundary_values_fail():
    # strict inequalities: a cap exactly at the bound is a violation
    h_max, d_max = max_cap_dimensions(63.5, 0.0, 3)
    geom = WheelGeometry(r_w=63.5, h_s=h_max, d_s=50.0, d_a=10.0)
    report = validate_wheel_geometry(geom)
    assert not report.all_satisfied
    check = {c.constraint: c for c in report.checks}["cap_thickness"]
    assert not check.satisfied
    assert check.slack == 0.0

    geom = WheelGeometry(r_w=63.5, h_s=10.0, d_s=d_max, d_a=10.0)
    assert not validate_wheel_geometry(geom).all_satisfied


def test_step_rule_only_violation():
    # passes the geometric fit but uses too fat an actuator for step climbing
    geom = WheelGeometry(r_w=63.5, h_s=20.0, d_s=80.0, d_a=60.0)
    strict = validate_wheel_geometry(geom, strict=True)
    relaxed = validate_wheel_geometry(geom, strict=False)
    assert not strict.all_satisfied
    assert relaxed.all_satisfied


def test_validation_verdict_scale_invariant():
    rng = random.Random(21)
    for _ in range(40):
        r_w = rng.uniform(10.0, 200.0)
        geom = WheelGeometry(
            r_w=r_w,
            h_s=rng.uniform(0.0, 0.6) * r_w,
            d_s=rng.uniform(0.5, 2.0) * r_w,
            d_a=rng.uniform(0.1, 0.9) * r_w,
            gap=rng.uniform(0.0, 0.05) * r_w,
        )
        base = validate_wheel_geometry(geom)
        for a in (0.125, 0.5, 2.0, 16.0):
            scaled = WheelGeometry(
                r_w=a * geom.r_w, h_s=a * geom.h_s, d_s=a * geom.d_s,
                d_a=a * geom.d_a, gap=a * geom.gap,
            )
            report = validate_wheel_geometry(scaled)
            assert report.all_satisfied == base.all_satisfied
            for got, want in zip(report.checks, base.checks):
                assert got.satisfied == want.satisfied


def test_validated_rims_never_touch(prototype):
    # place the three rim circles in 3D and confirm the sampled pairwise
    # distance never drops below the design gap
    rims = [
        cap_rim_points(prototype, pole, n_points=1800)
        for pole in (0.0, 120.0, 240.0)
    ]
    for i in range(3):
        j = (i + 1) % 3
        d = np.linalg.norm(rims[i][:, None, :] - rims[j][None, :, :], axis=2)
        assert float(d.min()) >= prototype.gap - 1e-9


def test_plate_spacing(prototype):
    assert support_plate_spacing(prototype) == pytest.approx(165.0, abs=1e-12)
    assert support_plate_spacing(prototype, clearance=2.5) == pytest.approx(170.0, abs=1e-12)
    with pytest.raises(ValueError):
        support_plate_spacing(prototype, clearance=-1.0)


def test_geometry_json_round_trip(prototype):
    text = prototype.to_json()
    again = WheelGeometry.from_json(text)
    assert again == prototype
    data = json.loads(text)
    assert data["r_w"] == 63.5
    assert data["n_caps"] == 3


def test_geometry_json_rejects_unknown_fields():
    with pytest.raises(ValueError, match="unknown"):
        WheelGeometry.from_json('{"r_w": 63.5, "h_s": 1, "d_s": 1, "d_a": 1, "color": "red"}')
    with pytest.raises(ValueError):
        WheelGeometry.from_json("[1, 2, 3]")


def test_geometry_field_validation():
    with pytest.raises(ValueError):
        WheelGeometry(r_w=0.0, h_s=1.0, d_s=1.0, d_a=1.0)
    with pytest.raises(ValueError):
        WheelGeometry(r_w=63.5, h_s=-1.0, d_s=1.0, d_a=1.0)
    with pytest.raises(ValueError):
        WheelGeometry(r_w=63.5, h_s=1.0, d_s=1.0, d_a=1.0, n_caps=1)
    with pytest.raises(ValueError):
        WheelGeometry(r_w=math.nan, h_s=1.0, d_s=1.0, d_a=1.0)


def test_prototype_fixture_values(prototype_dict):
    assert prototype_dict == {
        "r_w": 63.5, "h_s": 30.0, "d_s": 105.0, "d_a": 40.0,
        "gap": 0.5, "s_max": 30.0, "k_spring_force": 12.7, "n_caps": 3,
    }
