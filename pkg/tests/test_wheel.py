"""Single-wheel contact model: element partition, edge sag, slide behavior."""

import math
import random

import numpy as np
import pytest

from ptob.geometry import WheelGeometry
from ptob.wheel import (
    CapLayout,
    Element,
    ElementKind,
    SlideUnit,
    active_element,
    cap_rim_points,
    contact_height_profile,
    contact_state,
    edge_opening,
    profile_csv,
    slide_step,
)


def rest_slides(geom):
    return [SlideUnit.for_geometry(geom) for _ in range(geom.n_caps)]


# ---------------------------------------------------------------- layout


def test_layout_from_geometry(prototype, layout):
    assert layout.n_caps == 3
    assert layout.pole_angles == (0.0, 120.0, 240.0)
    assert layout.beta == pytest.approx(59.77442548217123, abs=1e-9)
    assert layout.boundary_angles() == (60.0, 180.0, 300.0)


def test_layout_json_round_trip(layout):
    assert CapLayout.from_json(layout.to_json()) == layout


def test_layout_rejects_bad_windows(prototype):
    with pytest.raises(ValueError):
        CapLayout.from_geometry(prototype, roller_window=40.0, edge_window=30.0)
    with pytest.raises(ValueError):
        CapLayout.from_geometry(prototype, roller_window=-1.0)
    with pytest.raises(ValueError):
        CapLayout(n_caps=3, pole_angles=(0.0, 100.0, 240.0), beta=59.0)


# ------------------------------------------------------- element partition


def test_active_element_anchors(layout):
    assert active_element(layout, 0.0) == Element.barrel_roller(0)
    assert active_element(layout, 60.0) == Element.edge_gap(0, 1)
    assert active_element(layout, 30.0) == Element.cap_surface(0)
    assert active_element(layout, 120.0) == Element.barrel_roller(1)
    assert active_element(layout, 180.0) == Element.edge_gap(1, 2)
    assert active_element(layout, 300.0) == Element.edge_gap(2, 0)


def test_window_edges_belong_to_the_window(layout):
    assert active_element(layout, 10.0).kind is ElementKind.BARREL_ROLLER
    assert active_element(layout, 10.0001).kind is ElementKind.CAP_SURFACE
    assert active_element(layout, 56.0).kind is ElementKind.EDGE_GAP
    assert active_element(layout, 55.9999).kind is ElementKind.CAP_SURFACE


def test_partition_property(layout):
    # 10^4 uniform angles: exactly one element each, transitions only
    # between a cap face and an adjacent window, periodic by one cap pitch
    n = 10_000
    elements = [active_element(layout, 360.0 * k / n) for k in range(n)]
    for e in elements:
        assert e.kind in (ElementKind.CAP_SURFACE, ElementKind.BARREL_ROLLER, ElementKind.EDGE_GAP)
    for prev, cur in zip(elements, elements[1:] + elements[:1]):
        if prev == cur:
            continue
        kinds = {prev.kind, cur.kind}
        # windows never touch each other: every change passes a cap face
        assert kinds != {ElementKind.BARREL_ROLLER, ElementKind.EDGE_GAP}
        assert ElementKind.CAP_SURFACE in kinds
    for k in range(0, n, 7):
        a = elements[k]
        b = active_element(layout, 360.0 * k / n + 120.0)
        assert a.kind is b.kind
        assert b.caps == tuple((c + 1) % 3 for c in a.caps)


def test_arc_coverage_fractions(layout):
    # windows cover 2*(10+4)/120 of the circle per cap pitch
    n = 36_000
    kinds = [active_element(layout, 360.0 * k / n).kind for k in range(n)]
    rollers = sum(k is ElementKind.BARREL_ROLLER for k in kinds) / n
    edges = sum(k is ElementKind.EDGE_GAP for k in kinds) / n
    assert rollers == pytest.approx(2 * layout.roller_window * 3 / 360.0, abs=1e-3)
    assert edges == pytest.approx(2 * layout.edge_window * 3 / 360.0, abs=1e-3)


# ------------------------------------------------------------ edge opening


def test_edge_opening_at_rest_equals_gap(prototype, layout):
    for boundary in range(3):
        opening = edge_opening(prototype, layout, boundary, [0.0, 0.0, 0.0])
        assert opening == pytest.approx(prototype.gap, abs=1e-12)


def test_edge_opening_displaced_closed_form(prototype, layout):
    # one cap pushed out: the opening grows by the offset projected on the
    # boundary tangent, s*sin(60 deg) for three caps
    opening = edge_opening(prototype, layout, 0, [30.0, 0.0, 0.0])
    assert opening == pytest.approx(0.5 + 30.0 * math.sin(math.radians(60.0)), abs=1e-9)
    # displacing the far cap leaves this boundary unchanged
    opening = edge_opening(prototype, layout, 0, [0.0, 0.0, 30.0])
    assert opening == pytest.approx(prototype.gap, abs=1e-12)


def test_edge_opening_clamps_at_zero(prototype, layout):
    opening = edge_opening(prototype, layout, 0, [-30.0, -30.0, 0.0])
    assert opening == 0.0


def _sampled_opening(geom, layout, boundary, offsets, n=100_000):
    """3D oracle: displaced rim circles, drive-plane crossings by sign change."""
    i = boundary
    j = (i + 1) % layout.n_caps
    b = math.radians(layout.boundary_angles()[i])
    tangent = np.array([-math.sin(b), math.cos(b), 0.0])

    def crossing(cap, toward):
        # each rim pierces the drive plane twice; keep the crossing on the
        # `toward` side of the pole (ahead of it for +1, behind for -1)
        phi = math.radians(layout.pole_angles[cap])
        pole_tangent = np.array([-math.sin(phi), math.cos(phi)])
        pts = cap_rim_points(geom, layout.pole_angles[cap], offsets[cap], n)
        z = pts[:, 2]
        found = [pts[k] for k in np.nonzero(z == 0.0)[0]]
        for k in np.nonzero(z[:-1] * z[1:] < 0.0)[0]:
            t = z[k] / (z[k] - z[k + 1])
            found.append(pts[k] + t * (pts[k + 1] - pts[k]))
        for p in found:
            if toward * float(np.dot(p[:2], pole_tangent)) > 0.0:
                return p
        raise AssertionError("rim crossing not found")

    p_i = crossing(i, +1.0)
    p_j = crossing(j, -1.0)
    return float(np.dot(p_j - p_i, tangent))


def test_edge_opening_matches_rim_sampling(prototype, layout):
    rng = random.Random(3)
    for _ in range(6):
        offsets = [rng.uniform(0.0, 30.0), rng.uniform(0.0, 30.0), 0.0]
        analytic = edge_opening(prototype, layout, 0, offsets)
        sampled = _sampled_opening(prototype, layout, 0, offsets)
        assert analytic == pytest.approx(sampled, abs=1e-5)


# ------------------------------------------------------------ contact state


def test_contact_state_zero_gap_is_smooth(layout):
    geom = WheelGeometry(r_w=63.5, h_s=30.0, d_s=105.0, d_a=40.0, gap=0.0,
                         s_max=30.0, k_spring_force=12.7, n_caps=3)
    zero_layout = CapLayout.from_geometry(geom)
    state = contact_state(geom, zero_layout, 60.0, rest_slides(geom))
    assert state.element.kind is ElementKind.EDGE_GAP
    assert state.height_deviation == 0.0


def test_contact_state_chord_sag(prototype):
    geom = WheelGeometry(r_w=63.5, h_s=30.0, d_s=105.0, d_a=40.0, gap=2.0,
                         s_max=30.0, k_spring_force=12.7, n_caps=3)
    layout = CapLayout.from_geometry(geom)
    state = contact_state(geom, layout, 60.0, rest_slides(geom))
    expected = -(63.5 - math.sqrt(63.5**2 - 1.0**2))
    assert state.height_deviation == pytest.approx(expected, abs=1e-12)
    assert state.height_deviation == pytest.approx(-0.0079, abs=5e-4)


def test_contact_state_slide_opens_the_edge():
    geom = WheelGeometry(r_w=63.5, h_s=30.0, d_s=105.0, d_a=40.0, gap=0.0,
                         s_max=30.0, k_spring_force=12.7, n_caps=3)
    layout = CapLayout.from_geometry(geom)
    slides = rest_slides(geom)
    slides[0] = SlideUnit.for_geometry(geom, offset=30.0)
    state = contact_state(geom, layout, 60.0, slides)
    assert state.height_deviation < 0.0


def test_contact_state_invariants(prototype, layout):
    slides = rest_slides(prototype)
    bound = prototype.r_w  # sag can never exceed the radius
    for k in range(720):
        state = contact_state(prototype, layout, k * 0.5, slides)
        if state.element.kind is ElementKind.EDGE_GAP:
            assert state.height_deviation <= 0.0
        else:
            assert state.height_deviation == 0.0
        assert abs(state.height_deviation) <= bound
        assert math.hypot(*state.axial_free_dir) == pytest.approx(1.0, abs=1e-12)


def test_contact_state_free_directions(prototype, layout):
    slides = rest_slides(prototype)
    on_cap = contact_state(prototype, layout, 30.0, slides)
    assert on_cap.axial_free_dir == pytest.approx((1.0, 0.0, 0.0), abs=1e-12)
    on_roller = contact_state(prototype, layout, 0.0, slides)
    assert on_roller.axial_free_dir == pytest.approx((0.0, 1.0, 0.0), abs=1e-12)
    in_gap = contact_state(prototype, layout, 60.0, slides)
    b = math.radians(60.0)
    assert in_gap.axial_free_dir == pytest.approx((math.cos(b), math.sin(b), 0.0), abs=1e-12)


def test_contact_state_rejects_wrong_slide_count(prototype, layout):
    with pytest.raises(ValueError):
        contact_state(prototype, layout, 0.0, rest_slides(prototype)[:2])


# ------------------------------------------------------------ slide unit


def test_slide_unit_validation(prototype):
    with pytest.raises(ValueError):
        SlideUnit(offset=31.0, s_max=30.0, restore_rate=50.0)
    with pytest.raises(ValueError):
        SlideUnit(offset=0.0, s_max=-1.0, restore_rate=50.0)
    unit = SlideUnit.for_geometry(prototype)
    assert unit.s_max == 30.0
    assert unit.restore_rate == pytest.approx(12.7 / 0.25, abs=1e-12)


def test_slide_step_examples(prototype):
    unit = SlideUnit(offset=0.0, s_max=30.0, restore_rate=50.0, loaded=True)
    assert slide_step(unit, 10.0, 1.0).offset == 10.0
    unit = SlideUnit(offset=29.0, s_max=30.0, restore_rate=50.0, loaded=True)
    assert slide_step(unit, 10.0, 1.0).offset == 30.0
    unit = SlideUnit(offset=10.0, s_max=30.0, restore_rate=50.0, loaded=False)
    assert slide_step(unit, 0.0, 0.1).offset == 5.0
    with pytest.raises(ValueError):
        slide_step(unit, 0.0, 0.0)


def test_slide_clamp_property(prototype):
    # 10^4 random drive/load steps never push the offset past the limit
    rng = random.Random(11)
    unit = SlideUnit.for_geometry(prototype)
    for _ in range(10_000):
        drive = rng.uniform(-400.0, 400.0)
        dt = rng.uniform(1e-4, 0.25)
        loaded = rng.random() < 0.7
        unit = slide_step(
            SlideUnit(unit.offset, unit.s_max, unit.restore_rate, loaded), drive, dt
        )
        assert abs(unit.offset) <= unit.s_max


def test_slide_returns_to_center_exactly(prototype):
    rng = random.Random(13)
    for _ in range(20):
        start = rng.uniform(-30.0, 30.0)
        unit = SlideUnit.for_geometry(prototype, offset=start)
        previous = abs(unit.offset)
        steps = 0
        while unit.offset != 0.0:
            unit = slide_step(unit, 0.0, 0.01)
            assert abs(unit.offset) <= previous
            previous = abs(unit.offset)
            steps += 1
            assert steps < 1000
        # and it stays centered
        assert slide_step(unit, 0.0, 0.01).offset == 0.0


# ------------------------------------------------------------ profile


def test_profile_zero_gap_is_flat():
    geom = WheelGeometry(r_w=63.5, h_s=30.0, d_s=105.0, d_a=40.0, gap=0.0,
                         s_max=30.0, k_spring_force=12.7, n_caps=3)
    layout = CapLayout.from_geometry(geom)
    profile = contact_height_profile(geom, layout, rest_slides(geom), 360)
    assert all(dev == 0.0 for _, dev in profile)


def test_profile_dips_at_boundaries():
    geom = WheelGeometry(r_w=63.5, h_s=30.0, d_s=105.0, d_a=40.0, gap=2.0,
                         s_max=30.0, k_spring_force=12.7, n_caps=3)
    layout = CapLayout.from_geometry(geom)
    profile = contact_height_profile(geom, layout, rest_slides(geom), 360)
    dips = {round(angle) for angle, dev in profile if dev < 0.0}
    for boundary in (60, 180, 300):
        covered = {a for a in dips if abs(a - boundary) <= layout.edge_window}
        assert covered
    for angle in dips:
        assert min(abs(angle - b) for b in (60, 180, 300)) <= layout.edge_window


def test_profile_asymmetric_offsets_deepen_own_edges():
    geom = WheelGeometry(r_w=63.5, h_s=30.0, d_s=105.0, d_a=40.0, gap=2.0,
                         s_max=30.0, k_spring_force=12.7, n_caps=3)
    layout = CapLayout.from_geometry(geom)
    slides = rest_slides(geom)
    slides[0] = SlideUnit.for_geometry(geom, offset=30.0)
    profile = dict(contact_height_profile(geom, layout, slides, 360))
    # cap 0 borders the 60 and 300 degree edges; 180 is between caps 1 and 2
    assert profile[60.0] < profile[180.0]
    assert profile[300.0] < profile[180.0]
    assert profile[60.0] == pytest.approx(profile[300.0], abs=1e-12)


def test_profile_periodic_with_equal_offsets(prototype, layout):
    profile = contact_height_profile(prototype, layout, rest_slides(prototype), 1080)
    devs = [dev for _, dev in profile]
    third = len(devs) // 3
    for k in range(third):
        assert devs[k] == pytest.approx(devs[k + third], abs=1e-12)
        assert devs[k] == pytest.approx(devs[k + 2 * third], abs=1e-12)


def test_profile_rejects_too_few_samples(prototype, layout):
    with pytest.raises(ValueError):
        contact_height_profile(prototype, layout, rest_slides(prototype), 8)


def test_profile_csv_shape(prototype, layout):
    profile = contact_height_profile(prototype, layout, rest_slides(prototype), 9)
    text = profile_csv(profile)
    lines = text.strip().splitlines()
    assert lines[0] == "angle_deg,height_dev_mm"
    assert len(lines) == 10
    angle, dev = lines[1].split(",")
    assert float(angle) == 0.0
    assert float(dev) == 0.0


def test_cap_rim_points_shape(prototype):
    pts = cap_rim_points(prototype, 0.0, n_points=16)
    assert pts.shape == (16, 3)
    radii = np.linalg.norm(pts, axis=1)
    assert np.allclose(radii, prototype.r_w, atol=1e-9)
