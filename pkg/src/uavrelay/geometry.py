"""Positions, obstacle volumes and line-of-sight tests.

Obstacles are vertical prisms standing on the sea surface (z = 0), rotated
about the z axis by ``yaw``. A link is blocked when the open segment between
the two antennas passes through the open interior of any obstacle, so a
segment that only grazes a face, edge or corner still counts as LoS.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np


class Vec3(NamedTuple):
    """Point in metres; ``z`` is the height above sea level."""

    x: float
    y: float
    z: float


class LosState(enum.Enum):
    LOS = "LoS"
    NLOS = "NLoS"


@dataclass(frozen=True)
class Box3:
    """Axis-aligned box in its own yaw-rotated frame.

    ``center`` is the centre of the base (its z is ignored, the base sits at
    sea level). ``width`` runs along the local x axis, ``length`` along the
    local y axis.
    """

    center: Vec3
    width: float
    length: float
    height: float
    yaw: float = 0.0

    def __post_init__(self):
        for name in ("width", "length", "height"):
            if not getattr(self, name) > 0:
                raise ValueError(f"Box3.{name} must be positive, got {getattr(self, name)!r}")

    def footprint_corners(self) -> np.ndarray:
        """(4, 2) array of the base corners in world coordinates."""
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        hw, hl = self.width / 2, self.length / 2
        local = np.array([[-hw, -hl], [hw, -hl], [hw, hl], [-hw, hl]])
        rot = np.array([[c, -s], [s, c]])
        return local @ rot.T + np.array([self.center.x, self.center.y])


class AltitudeSearch(NamedTuple):
    altitude: float
    reachable: bool


def distance3d(a, b) -> float:
    return math.dist(a, b)


def _to_box_frame(pts: np.ndarray, box: Box3) -> np.ndarray:
    c, s = math.cos(box.yaw), math.sin(box.yaw)
    dx = pts[..., 0] - box.center.x
    dy = pts[..., 1] - box.center.y
    return np.stack([c * dx + s * dy, -s * dx + c * dy, pts[..., 2]], axis=-1)


def segments_hit_box(p, q, box: Box3) -> np.ndarray:
    """Vectorised open-interior slab test.

    ``p`` and ``q`` are (n, 3) arrays of segment endpoints. Returns a boolean
    array of length n. Degenerate segments are not checked here.
    """
    p = _to_box_frame(np.atleast_2d(np.asarray(p, dtype=float)), box)
    q = _to_box_frame(np.atleast_2d(np.asarray(q, dtype=float)), box)
    d = q - p
    lo = np.array([-box.width / 2, -box.length / 2, 0.0])
    hi = np.array([box.width / 2, box.length / 2, box.height])

    t_enter = np.zeros(len(p))
    t_exit = np.ones(len(p))
    for axis in range(3):
        pa, da = p[:, axis], d[:, axis]
        flat = da == 0.0
        inside = (pa > lo[axis]) & (pa < hi[axis])
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            t1 = (lo[axis] - pa) / da
            t2 = (hi[axis] - pa) / da
        near = np.where(flat, np.where(inside, -np.inf, np.inf), np.minimum(t1, t2))
        far = np.where(flat, np.where(inside, np.inf, -np.inf), np.maximum(t1, t2))
        t_enter = np.maximum(t_enter, near)
        t_exit = np.minimum(t_exit, far)
    return t_enter < t_exit


def segments_blocked(p, q, obstacles: Sequence[Box3]) -> np.ndarray:
    """True where a segment crosses at least one obstacle."""
    p = np.atleast_2d(np.asarray(p, dtype=float))
    q = np.atleast_2d(np.asarray(q, dtype=float))
    p, q = np.broadcast_arrays(p, q)
    blocked = np.zeros(len(p), dtype=bool)
    for box in obstacles:
        blocked |= segments_hit_box(p, q, box)
    return blocked


def segment_intersects_box(p, q, box: Box3) -> bool:
    if tuple(p) == tuple(q):
        raise ValueError("degenerate segment: p == q")
    return bool(segments_hit_box(p, q, box)[0])


def classify_los(tx, rx, obstacles: Sequence[Box3]) -> LosState:
    if tuple(tx) == tuple(rx):
        raise ValueError("tx and rx coincide")
    if not obstacles:
        return LosState.LOS
    return LosState.NLOS if segments_blocked(tx, rx, obstacles)[0] else LosState.LOS


def min_los_altitude(
    xy,
    endpoints,
    obstacles: Sequence[Box3],
    h_max: float,
    floor: float = 0.1,
    tol: float = 0.1,
) -> AltitudeSearch:
    """Lowest altitude at ``xy`` that sees every endpoint, by bisection.

    Raising the node only lifts the segment towards each endpoint, so LoS is
    monotone in altitude and bisection is exact up to ``tol``. When even
    ``h_max`` is blocked the result is ``(h_max, reachable=False)``.
    """
    if not h_max > 0:
        raise ValueError("h_max must be positive")
    ends = np.atleast_2d(np.asarray(endpoints, dtype=float))
    if ends.size == 0:
        raise ValueError("at least one endpoint is required")

    def clear(z):
        node = np.array([xy[0], xy[1], z])
        keep = ~np.all(ends == node, axis=1)
        return not segments_blocked(np.broadcast_to(node, ends[keep].shape), ends[keep], obstacles).any()

    if clear(floor):
        return AltitudeSearch(floor, True)
    if not clear(h_max):
        return AltitudeSearch(h_max, False)
    lo, hi = floor, h_max
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if clear(mid):
            hi = mid
        else:
            lo = mid
    return AltitudeSearch(hi, True)
