"""Where the relay UAV sits under each communication architecture."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry import Box3, Vec3, min_los_altitude


class Architecture(enum.Enum):
    NR = "nr"
    FPR = "fpr"
    CFMR = "cfmr"
    LSMR = "lsmr"

    @classmethod
    def parse(cls, text: str) -> "Architecture":
        try:
            return cls(text.strip().lower())
        except ValueError:
            valid = ", ".join(a.value for a in cls)
            raise ValueError(f"unknown architecture {text!r}; expected one of: {valid}") from None


class PoseMode(enum.Enum):
    ABSENT = "absent"
    HOVERING = "hovering"
    PERCHED = "perched"
    IN_TRANSIT = "in_transit"


@dataclass(frozen=True)
class UavPose:
    position: Optional[Vec3]
    mode: PoseMode
    host: Optional[int] = None
    los_ok: bool = True

    def __post_init__(self):
        if self.mode is PoseMode.PERCHED and self.host is None:
            raise ValueError("a perched UAV needs a host ship")
        if (self.mode is PoseMode.ABSENT) != (self.position is None):
            raise ValueError("only an absent UAV has no position")


ABSENT = UavPose(None, PoseMode.ABSENT)


@dataclass
class KMeansResult:
    centroids: np.ndarray     # (k, 2)
    assignment: np.ndarray    # (n,) cluster index per point
    iterations: int
    objective: float
    history: list             # objective after every update


def _assign(points, centroids):
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1)


def _sse(points, centroids, assignment):
    return float(((points - centroids[assignment]) ** 2).sum())


def kmeans(points, k: int, seed: int = 0, max_iter: int = 300) -> KMeansResult:
    """Lloyd's algorithm from ``k`` distinct seeded data points.

    Stops when the assignment no longer changes. A cluster that loses all
    its points keeps its previous centroid.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("kmeans needs a non-empty (n, d) point set")
    if not 1 <= k <= len(pts):
        raise ValueError(f"k must be in [1, {len(pts)}], got {k}")

    rng = np.random.default_rng(seed)
    centroids = pts[rng.choice(len(pts), size=k, replace=False)].copy()
    assignment = None
    history = []
    iterations = 0
    while iterations < max_iter:
        new = _assign(pts, centroids)
        if assignment is not None and np.array_equal(new, assignment):
            break
        assignment = new
        for j in range(k):
            members = pts[assignment == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
        iterations += 1
        history.append(_sse(pts, centroids, assignment))
    return KMeansResult(centroids, assignment, iterations, _sse(pts, centroids, assignment), history)


def _with_altitude(xy, endpoints, obstacles, h_max):
    found = min_los_altitude(xy, endpoints, obstacles, h_max)
    return Vec3(float(xy[0]), float(xy[1]), found.altitude), found.reachable


def position_fpr(bs: Vec3, ships: Sequence[Vec3], obstacles: Sequence[Box3], h_max: float,
                 mode: str = "single", area: Optional[tuple] = None,
                 los_ships: Optional[Sequence[Vec3]] = None) -> UavPose:
    """Fixed hovering relay.

    ``mode="single"`` sits over the midpoint between the BS and the first
    ship; ``mode="multi"`` sits over the centre of ``area`` (width, length)
    anchored at the origin. The altitude is the lowest one with LoS to the BS
    and every ship in ``los_ships`` (all ships when omitted).
    """
    if mode == "single":
        xy = ((bs.x + ships[0].x) / 2, (bs.y + ships[0].y) / 2)
    elif mode == "multi":
        if area is None:
            raise ValueError("multi-ship FPR needs the area extent")
        xy = (area[0] / 2, area[1] / 2)
    else:
        raise ValueError(f"unknown FPR mode {mode!r}")
    targets = ships if los_ships is None else los_ships
    pos, ok = _with_altitude(xy, [bs, *targets], obstacles, h_max)
    return UavPose(pos, PoseMode.HOVERING, los_ok=ok)


def position_cfmr(bs: Vec3, ships: Sequence[Vec3], obstacles: Sequence[Box3], h_max: float,
                  seed: int = 0, los_ships: Optional[Sequence[Vec3]] = None) -> UavPose:
    """Hover over the single k-means centroid of the fleet.

    The altitude clears the BS and every ship in ``los_ships`` (all ships
    when omitted).
    """
    if not len(ships):
        raise ValueError("no ships to cluster")
    xy = kmeans([(s.x, s.y) for s in ships], 1, seed=seed).centroids[0]
    targets = ships if los_ships is None else los_ships
    pos, ok = _with_altitude(xy, [bs, *targets], obstacles, h_max)
    return UavPose(pos, PoseMode.HOVERING, los_ok=ok)


def _centroid_distances(ships: Sequence[Vec3], seed: int) -> np.ndarray:
    xy = np.array([(s.x, s.y) for s in ships])
    centroid = kmeans(xy, 1, seed=seed).centroids[0]
    return np.hypot(xy[:, 0] - centroid[0], xy[:, 1] - centroid[1])


def select_landing_ship(ships: Sequence[Vec3], seed: int = 0) -> int:
    """Index of the ship nearest the fleet centroid; ties go to the lowest index."""
    if not len(ships):
        raise ValueError("no ships to choose from")
    return int(np.argmin(_centroid_distances(ships, seed)))


def landing_spot(ship: Vec3, ls_height: float) -> Vec3:
    return Vec3(ship.x, ship.y, ls_height)


def position_lsmr(ships: Sequence[Vec3], prev: UavPose, ls_height: float, seed: int = 0) -> UavPose:
    """Perch on the landing spot of the ship nearest the centroid.

    The host only changes when a different ship becomes strictly nearer than
    the current one. Returns the target perch; the scenario engine handles
    the flight there.
    """
    if not len(ships):
        raise ValueError("no ships to choose from")
    d = _centroid_distances(ships, seed)
    host = int(np.argmin(d))
    if prev.host is not None and prev.host < len(ships) and d[prev.host] <= d[host]:
        host = prev.host
    return UavPose(landing_spot(ships[host], ls_height), PoseMode.PERCHED, host=host)


def transit_legs(prev: UavPose, nxt: UavPose) -> tuple[float, float]:
    if prev.position is None or nxt.position is None:
        raise ValueError("both poses must have a position")
    a, b = prev.position, nxt.position
    return math.hypot(b.x - a.x, b.y - a.y), b.z - a.z
