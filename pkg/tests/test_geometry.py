import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dubins_tsp.errors import SeparationTooSmall
from dubins_tsp.geometry import (
    CSC_SUBTYPES,
    DirectedPoint,
    cs_candidates,
    cs_path,
    csc_candidates,
    csc_path,
    normalize_angle,
    pose_at,
    sample_path,
)

from oracles import angle_diff, cs_lengths, csc_lengths, integrate_word

angles = st.floats(-math.pi, math.pi, allow_nan=False)


@st.composite
def long_pairs(draw, rho=1.0):
    r = draw(st.floats(4.0 * rho * (1 + 1e-9), 40.0 * rho))
    phi = draw(angles)
    x0 = draw(st.floats(-50, 50))
    y0 = draw(st.floats(-50, 50))
    start = DirectedPoint((x0, y0), draw(angles))
    end = DirectedPoint((x0 + r * math.cos(phi), y0 + r * math.sin(phi)), draw(angles))
    return start, end


def _mirror(dp):
    return DirectedPoint((dp.x, -dp.y), -dp.heading)


def _swap_lr(word):
    return word.translate(str.maketrans("LR", "RL"))


def test_directed_point_normalises_heading():
    assert DirectedPoint((0, 0), 3 * math.pi).heading == pytest.approx(-math.pi)
    assert DirectedPoint((0, 0), math.pi).heading == -math.pi
    with pytest.raises(ValueError):
        DirectedPoint((0, 0), math.inf)


def test_normalize_angle_range():
    for a in np.linspace(-20, 20, 401):
        r = normalize_angle(a)
        assert -math.pi <= r < math.pi
        assert angle_diff(r, a) < 1e-12


def test_straight_when_aligned():
    path = csc_path(DirectedPoint((0, 0), 0.0), DirectedPoint((10, 0), 0.0), 1.0)
    assert path.subtype in ("LSL", "RSR")
    assert path.arc1_angle == 0.0 and path.arc2_angle == 0.0
    assert path.straight_length == pytest.approx(10.0, abs=1e-12)
    assert path.total_length == pytest.approx(10.0, abs=1e-12)


def test_reversal_matches_oracle_and_is_symmetric():
    start, end = DirectedPoint((0, 0), 0.0), DirectedPoint((10, 0), math.pi)
    path = csc_path(start, end, 1.0)
    expected = min(v[0] for v in csc_lengths(start.position, 0.0, end.position, math.pi, 1.0).values())
    assert path.total_length == pytest.approx(expected, rel=1e-12)
    # The mirror image across the chord is equally short; the tie goes to LSR.
    assert path.subtype == "LSR"
    twin = csc_candidates(start, end, 1.0)["RSL"]
    assert twin.total_length == pytest.approx(path.total_length, rel=1e-12)
    assert twin.arc1_angle == pytest.approx(path.arc1_angle, abs=1e-12)
    assert twin.arc2_angle == pytest.approx(path.arc2_angle, abs=1e-12)
    x, y, h = integrate_word(start.position, start.heading, path.subtype,
                             [s[1] for s in path.segments], 1.0)
    assert math.hypot(x - 10, y) < 1e-6
    assert angle_diff(h, math.pi) < 1e-6


@settings(max_examples=300, deadline=None)
@given(long_pairs(), st.sampled_from([0.5, 1.0, 3.0]))
def test_candidates_match_oracle(pair, rho):
    start, end = pair
    start = DirectedPoint((start.x * rho, start.y * rho), start.heading)
    end = DirectedPoint((end.x * rho, end.y * rho), end.heading)
    mine = csc_candidates(start, end, rho)
    ref = csc_lengths(start.position, start.heading, end.position, end.heading, rho)
    assert set(mine) == set(ref) == set(CSC_SUBTYPES)
    for word, (length, _) in ref.items():
        assert mine[word].total_length == pytest.approx(length, rel=1e-10, abs=1e-10 * rho)
    best = csc_path(start, end, rho)
    assert best.total_length <= min(p.total_length for p in mine.values())


@settings(max_examples=100, deadline=None)
@given(long_pairs())
def test_path_reaches_the_end_pose(pair):
    start, end = pair
    path = csc_path(start, end, 1.0)
    x, y, h = integrate_word(start.position, start.heading, path.subtype,
                             [s[1] for s in path.segments], 1.0, steps=2000)
    assert math.hypot(x - end.x, y - end.y) < 1e-5
    assert angle_diff(h, end.heading) < 1e-5


@settings(max_examples=200, deadline=None)
@given(long_pairs())
def test_path_structure(pair):
    start, end = pair
    rho = 1.0
    p = csc_path(start, end, rho)
    assert p.total_length == pytest.approx(rho * p.arc1_angle + p.straight_length + rho * p.arc2_angle)
    for t, c in ((p.t1, p.c1), (p.t2, p.c2)):
        assert math.hypot(t[0] - c[0], t[1] - c[1]) == pytest.approx(rho, rel=1e-9)
    u = (math.cos(p.straight_heading), math.sin(p.straight_heading))
    for t, c in ((p.t1, p.c1), (p.t2, p.c2)):
        assert abs((t[0] - c[0]) * u[0] + (t[1] - c[1]) * u[1]) < 1e-9
    assert p.arc_limit == (p.max_arc >= math.pi)
    assert p.total_length >= math.hypot(end.x - start.x, end.y - start.y) - 1e-12


@settings(max_examples=200, deadline=None)
@given(long_pairs())
def test_mirror_swaps_turn_directions(pair):
    start, end = pair
    p = csc_path(start, end, 1.0)
    m = csc_path(_mirror(start), _mirror(end), 1.0)
    assert m.total_length == pytest.approx(p.total_length, rel=1e-12, abs=1e-12)
    mine = csc_candidates(start, end, 1.0)
    mirrored = csc_candidates(_mirror(start), _mirror(end), 1.0)
    for word, path in mine.items():
        assert mirrored[_swap_lr(word)].total_length == pytest.approx(path.total_length, rel=1e-10)


@settings(max_examples=150, deadline=None)
@given(long_pairs())
def test_short_arcs_mean_a_unique_optimum(pair):
    start, end = pair
    best = csc_path(start, end, 1.0)
    if best.max_arc >= math.pi:
        return
    for other in csc_candidates(start, end, 1.0).values():
        if other.subtype == best.subtype:
            continue
        same_curve = (abs(other.arc1_angle - best.arc1_angle) < 1e-9
                      and abs(other.arc2_angle - best.arc2_angle) < 1e-9)
        assert same_curve or other.total_length > best.total_length


@settings(max_examples=200, deadline=None)
@given(long_pairs(), st.sampled_from([0, 1]))
def test_length_is_continuous_in_heading(pair, which):
    start, end = pair
    delta = 1e-6
    base = csc_path(start, end, 1.0).total_length
    if which == 0:
        moved = csc_path(DirectedPoint(start.position, start.heading + delta), end, 1.0)
    else:
        moved = csc_path(start, DirectedPoint(end.position, end.heading + delta), 1.0)
    # Derivative magnitude is bounded by 2 * rho per unit heading change.
    assert abs(moved.total_length - base) <= 2.0 * delta + 1e-12


def test_tie_breaks_to_first_subtype():
    # Aligned headings: LSL and RSR both have zero arcs and equal length.
    p = csc_path(DirectedPoint((0, 0), 0.0), DirectedPoint((10, 0), 0.0), 1.0)
    assert p.subtype == "LSL"


def test_separation_checked():
    with pytest.raises(SeparationTooSmall):
        csc_path(DirectedPoint((0, 0), 0.0), DirectedPoint((3.9, 0), 0.0), 1.0)
    with pytest.raises(SeparationTooSmall):
        cs_path(DirectedPoint((0, 0), 0.0), (7.9, 0), 2.0)
    with pytest.raises(ValueError):
        csc_path(DirectedPoint((0, 0), 0.0), DirectedPoint((10, 0), 0.0), 0.0)


def test_exact_separation_allowed():
    p = csc_path(DirectedPoint((0, 0), math.pi / 2), DirectedPoint((4, 0), -math.pi / 2), 1.0)
    assert p.total_length > 0


def test_turning_radius_scales_length():
    a, b = DirectedPoint((0, 0), 0.3), DirectedPoint((9, 4), -2.0)
    base = csc_path(a, b, 1.0)
    big = csc_path(DirectedPoint((0, 0), 0.3), DirectedPoint((27, 12), -2.0), 3.0)
    assert big.subtype == base.subtype
    assert big.total_length == pytest.approx(3.0 * base.total_length, rel=1e-12)
    assert big.arc1_angle == pytest.approx(base.arc1_angle, rel=1e-12, abs=1e-15)


def test_cs_straight_ahead():
    p = cs_path(DirectedPoint((0, 0), 0.0), (10, 0), 1.0)
    assert p.arc_angle == 0.0
    assert p.straight_length == pytest.approx(10.0)


def test_cs_sideways_matches_oracle():
    start = DirectedPoint((0, 0), math.pi / 2)
    p = cs_path(start, (10, 0), 1.0)
    ref = cs_lengths((0, 0), math.pi / 2, (10, 0), 1.0)
    assert p.subtype == "RS"
    assert p.total_length == pytest.approx(min(v[0] for v in ref.values()), rel=1e-10)
    x, y, h = integrate_word((0, 0), math.pi / 2, p.subtype, [s[1] for s in p.segments], 1.0)
    assert math.hypot(x - 10, y) < 1e-6


@settings(max_examples=200, deadline=None)
@given(long_pairs())
def test_cs_candidates_match_oracle(pair):
    start, end = pair
    mine = cs_candidates(start, end.position, 1.0)
    ref = cs_lengths(start.position, start.heading, end.position, 1.0)
    assert set(mine) == set(ref) == {"LS", "RS"}
    for word, (length, arc) in ref.items():
        assert mine[word].total_length == pytest.approx(length, rel=1e-9)
    best = cs_path(start, end.position, 1.0)
    assert best.total_length == min(p.total_length for p in mine.values())


@settings(max_examples=100, deadline=None)
@given(long_pairs())
def test_cs_mirror_about_heading_line(pair):
    start, end = pair
    # Reflect the target across the line through the start along its heading.
    c, s = math.cos(start.heading), math.sin(start.heading)
    rx, ry = end.x - start.x, end.y - start.y
    along, across = rx * c + ry * s, -rx * s + ry * c
    q = (start.x + along * c + across * s, start.y + along * s - across * c)
    a = cs_candidates(start, end.position, 1.0)
    b = cs_candidates(start, q, 1.0)
    assert a["LS"].total_length == pytest.approx(b["RS"].total_length, rel=1e-10)
    assert a["RS"].total_length == pytest.approx(b["LS"].total_length, rel=1e-10)


def test_sample_straight_path():
    p = csc_path(DirectedPoint((0, 0), 0.0), DirectedPoint((10, 0), 0.0), 1.0)
    pts = sample_path(p, 3)
    assert pts[0] == pytest.approx((0, 0))
    assert pts[1] == pytest.approx((5, 0))
    assert pts[2] == pytest.approx((10, 0))


@settings(max_examples=100, deadline=None)
@given(long_pairs())
def test_sample_two_points_are_endpoints(pair):
    start, end = pair
    p = csc_path(start, end, 1.0)
    a, b = sample_path(p, 2)
    scale = max(1.0, math.hypot(end.x, end.y))
    assert math.hypot(a[0] - start.x, a[1] - start.y) <= 1e-9 * scale
    assert math.hypot(b[0] - end.x, b[1] - end.y) <= 1e-9 * scale


def test_quarter_circle_chord_sum():
    # Turn left by a quarter, then drive straight.
    start = DirectedPoint((0, 0), 0.0)
    p = cs_path(start, (1.0, 1.0 + 10.0), 1.0)
    assert p.subtype == "LS"
    assert p.arc_angle == pytest.approx(math.pi / 2)
    # Sample only the arc: the first rho*pi/2 of arc length.
    s = np.linspace(0.0, math.pi / 2, 101)
    pts = np.array([pose_at(p, v)[:2] for v in s])
    chords = np.hypot(*np.diff(pts, axis=0).T).sum()
    assert abs(chords - math.pi / 2) <= 1e-4


def test_sample_spacing_is_uniform():
    p = csc_path(DirectedPoint((0, 0), 1.0), DirectedPoint((12, 5), -2.0), 1.0)
    pts = np.array(sample_path(p, 2001))
    steps = np.hypot(*np.diff(pts, axis=0).T)
    assert steps.max() - steps.min() < 1e-5
    assert steps.sum() == pytest.approx(p.total_length, rel=1e-6)


def test_sample_needs_two_points():
    p = csc_path(DirectedPoint((0, 0), 0.0), DirectedPoint((10, 0), 0.0), 1.0)
    with pytest.raises(ValueError):
        sample_path(p, 1)
