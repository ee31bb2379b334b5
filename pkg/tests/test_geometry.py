import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uavrelay.geometry import (Box3, LosState, Vec3, classify_los, distance3d, min_los_altitude,
                               segment_intersects_box)

BLOCKER = Box3(Vec3(200, 300, 0), 32, 200, 32.3, 0.0)
coord = st.floats(-1000, 1000, allow_nan=False)
height = st.floats(0, 200, allow_nan=False)
points = st.builds(Vec3, coord, coord, height)


def test_distance_examples():
    assert distance3d(Vec3(0, 0, 0), Vec3(0, 0, 0)) == 0
    assert distance3d(Vec3(0, 0, 0), Vec3(3, 4, 0)) == 5
    assert distance3d(Vec3(0, 0, 35), Vec3(100, 0, 2)) == pytest.approx(105.30432089900205, rel=1e-12)


@given(points, points, points)
def test_triangle_inequality(a, b, c):
    assert distance3d(a, c) <= distance3d(a, b) + distance3d(b, c) + 1e-9


def test_box_rejects_non_positive_dims():
    with pytest.raises(ValueError):
        Box3(Vec3(0, 0, 0), 0, 1, 1)


def test_segment_above_box_misses():
    assert not segment_intersects_box(Vec3(0, 300, 40), Vec3(400, 300, 40), BLOCKER)


def test_segment_through_centre_hits():
    assert segment_intersects_box(Vec3(0, 300, 10), Vec3(400, 300, 10), BLOCKER)


def test_grazing_top_face_is_not_a_hit():
    assert not segment_intersects_box(Vec3(0, 300, 32.3), Vec3(400, 300, 32.3), BLOCKER)


def test_grazing_side_face_is_not_a_hit():
    # runs exactly along the x = 216 face
    assert not segment_intersects_box(Vec3(216, 0, 10), Vec3(216, 600, 10), BLOCKER)
    assert segment_intersects_box(Vec3(215.9, 0, 10), Vec3(215.9, 600, 10), BLOCKER)


def test_touching_an_edge_is_not_a_hit():
    # crosses the x = 184, z = 32.3 edge line without entering the box
    assert not segment_intersects_box(Vec3(174, 300, 22.3), Vec3(194, 300, 42.3), BLOCKER)
    assert segment_intersects_box(Vec3(174, 300, 42.3), Vec3(194, 300, 22.3), BLOCKER)
    assert not segment_intersects_box(Vec3(184, 300, 32.3), Vec3(184, 300, 50), BLOCKER)


def test_degenerate_segment_rejected():
    with pytest.raises(ValueError):
        segment_intersects_box(Vec3(1, 1, 1), Vec3(1, 1, 1), BLOCKER)


def test_segment_ending_before_box():
    assert not segment_intersects_box(Vec3(0, 300, 10), Vec3(150, 300, 10), BLOCKER)


def test_yawed_box():
    box = Box3(Vec3(0, 0, 0), 2, 100, 10, yaw=math.pi / 2)  # long axis now along world x
    assert segment_intersects_box(Vec3(40, -5, 5), Vec3(40, 5, 5), box)
    assert not segment_intersects_box(Vec3(-5, 40, 5), Vec3(5, 40, 5), box)


def _slab_oracle(p, q, box, n=20001):
    # dense sampling of the open segment, strict interior test in box frame
    t = np.linspace(0, 1, n)[1:-1, None]
    pts = np.asarray(p) + t * (np.asarray(q) - np.asarray(p))
    c, s = math.cos(box.yaw), math.sin(box.yaw)
    dx, dy = pts[:, 0] - box.center.x, pts[:, 1] - box.center.y
    lx, ly = c * dx + s * dy, -s * dx + c * dy
    inside = (abs(lx) < box.width / 2) & (abs(ly) < box.length / 2) & (pts[:, 2] > 0) & (pts[:, 2] < box.height)
    return bool(inside.any())


def test_classify_examples():
    bs, ship = Vec3(0, 300, 35), Vec3(400, 300, 2)
    assert classify_los(bs, ship, []) is LosState.LOS
    assert classify_los(bs, ship, [BLOCKER]) is LosState.NLOS
    assert _slab_oracle(bs, ship, BLOCKER)
    high = Vec3(400, 300, 80)
    assert classify_los(bs, high, [BLOCKER]) is LosState.LOS
    assert not _slab_oracle(bs, high, BLOCKER)


@settings(max_examples=300)
@given(points, points, st.floats(0, math.pi))
def test_slab_test_agrees_with_sampling(p, q, yaw):
    box = Box3(Vec3(0, 0, 0), 80, 300, 40, yaw)
    if p == q:
        return
    fast = segment_intersects_box(p, q, box)
    # sampling can only miss very short chords; it never reports a false hit
    if _slab_oracle(p, q, box):
        assert fast


@given(points, points)
def test_los_symmetric(a, b):
    if a == b:
        return
    assert classify_los(a, b, [BLOCKER]) == classify_los(b, a, [BLOCKER])


@given(coord, coord, coord, coord)
def test_endpoints_above_obstacles_have_los(x1, y1, x2, y2):
    a, b = Vec3(x1, y1, 33.0), Vec3(x2, y2, 100.0)
    assert classify_los(a, b, [BLOCKER]) is LosState.LOS


def test_min_altitude_without_obstacles_is_floor():
    assert min_los_altitude((0, 0), [Vec3(10, 10, 2)], [], 150) == (0.1, True)


def _grid_altitude(xy, ends, obstacles, h_max):
    for z in np.arange(1, int(h_max * 10) + 1) / 10:
        node = Vec3(xy[0], xy[1], float(z))
        if all(classify_los(node, e, obstacles) is LosState.LOS for e in ends):
            return float(z)
    return None


@pytest.mark.parametrize("xy, ends", [
    ((200, 300), [Vec3(0, 300, 35), Vec3(400, 300, 2)]),      # directly above the blocker
    ((400, 300), [Vec3(0, 300, 35)]),                          # behind it
    ((300, 350), [Vec3(0, 300, 35), Vec3(100, 260, 2)]),
])
def test_min_altitude_matches_grid_scan(xy, ends):
    found = min_los_altitude(xy, ends, [BLOCKER], 150)
    grid = _grid_altitude(xy, ends, [BLOCKER], 150)
    assert found.reachable
    assert abs(found.altitude - grid) <= 0.1 + 1e-9


def test_min_altitude_bracketing():
    ends = [Vec3(0, 300, 35), Vec3(400, 300, 2)]
    h = min_los_altitude((200, 300), ends, [BLOCKER], 150).altitude
    assert h > BLOCKER.height
    node = lambda z: Vec3(200, 300, z)
    assert all(classify_los(node(h), e, [BLOCKER]) is LosState.LOS for e in ends)
    assert any(classify_los(node(h - 0.2), e, [BLOCKER]) is LosState.NLOS for e in ends)


def test_min_altitude_unreachable():
    # endpoint right behind a very tall wall
    wall = Box3(Vec3(50, 0, 0), 2, 1000, 500)
    assert min_los_altitude((100, 0), [Vec3(48, 0, 2)], [wall], 150) == (150, False)
