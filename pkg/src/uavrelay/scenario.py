"""Discrete-time simulation: ship motion, relay placement, rates and energy.

Each slot runs the same pipeline: advance the ships, move the UAV according
to the architecture, evaluate every victim's rate, then book the UAV energy.
A run is a sequence of slots; a Monte Carlo study repeats runs with seeds
``seed, seed + 1, ...``.
"""
from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import channel as ch
from .energy import (EnergyLedgerEntry, EnergyParams, comm_energy, flight_time, hover_energy,
                     mobility_energy)
from .geometry import Box3, Vec3, segments_blocked
from .positioning import (ABSENT, Architecture, PoseMode, UavPose, landing_spot, position_cfmr,
                          position_fpr, position_lsmr)

RELAY_ARCHITECTURES = (Architecture.FPR, Architecture.CFMR, Architecture.LSMR)


@dataclass(frozen=True)
class ScenarioConfig:
    """All inputs of one run. Use :func:`default_config` for the stock layouts."""

    scenario: str = "multi"
    architecture: Architecture = Architecture.LSMR
    seed: int = 1
    n_slots: int = 20
    slot_duration: float = 10.0
    n_victims: int = 20
    area: tuple = (600.0, 800.0)
    bs: Vec3 = Vec3(0.0, 400.0, 35.0)
    blocking_ship: Box3 = Box3(Vec3(150.0, 400.0, 0.0), 32.0, 200.0, 32.3, 0.0)
    victim_dims: tuple = (4.0, 20.0, 5.0)
    victim_antenna_height: float = 2.0
    ship_speed: float = 5.0
    start: tuple = (3000.0, 100.0)
    heading_deg: float = 90.0
    headings: Optional[tuple] = None
    ls_height: float = 35.0
    h_max: float = 150.0
    los_targets: str = "shadowed"
    channel: ch.ChannelParams = field(default_factory=ch.ChannelParams)
    energy: EnergyParams = field(default_factory=EnergyParams)

    def __post_init__(self):
        if self.scenario not in ("single", "multi"):
            raise ValueError(f"scenario must be 'single' or 'multi', got {self.scenario!r}")
        if self.n_victims < 1:
            raise ValueError("n_victims must be at least 1")
        if self.scenario == "single" and self.n_victims != 1:
            raise ValueError("the single-ship scenario has exactly one victim")
        if self.n_slots < 0:
            raise ValueError("n_slots must be non-negative")
        if not self.slot_duration > 0:
            raise ValueError("slot_duration must be positive")
        if self.ship_speed < 0:
            raise ValueError("ship_speed must be non-negative")
        if min(self.area) <= 0:
            raise ValueError("area dimensions must be positive")
        if self.bs.z < 0 or self.victim_antenna_height < 0 or self.ls_height < 0:
            raise ValueError("heights must be non-negative")
        if not self.h_max > 0:
            raise ValueError("h_max must be positive")
        if self.los_targets not in ("shadowed", "all"):
            raise ValueError(f"los_targets must be 'shadowed' or 'all', got {self.los_targets!r}")
        if self.headings is not None and len(self.headings) != self.n_victims:
            raise ValueError("need one heading per victim ship")

    @property
    def obstacles(self) -> tuple:
        return (self.blocking_ship,)


def default_config(scenario: str = "multi", **overrides) -> ScenarioConfig:
    """Stock single- or multi-ship layout.

    Single: the victim starts 3 km offshore and sails alongshore past the
    fixed relay, with the blocker 300 m out in front of the BS. Multi: 20
    ships scattered over the 600 m x 800 m area with the blocker 150 m out.
    """
    if scenario == "single":
        base = dict(
            scenario="single", n_slots=10, n_victims=1,
            blocking_ship=Box3(Vec3(300.0, 400.0, 0.0), 32.0, 200.0, 32.3, 0.0),
        )
    elif scenario == "multi":
        base = dict(scenario="multi", n_slots=20, n_victims=20)
    else:
        raise ValueError(f"unknown scenario {scenario!r}")
    base.update(overrides)
    return ScenarioConfig(**base)


@dataclass(frozen=True)
class ShipState:
    id: int
    position: Vec3
    heading: tuple
    speed: float


@dataclass
class SimState:
    config: ScenarioConfig
    xy: np.ndarray          # (n, 2)
    headings: np.ndarray    # (n, 2) unit vectors
    uav: UavPose = ABSENT
    time: float = 0.0

    @property
    def ship_positions(self) -> list:
        z = self.config.victim_antenna_height
        return [Vec3(float(x), float(y), z) for x, y in self.xy]

    @property
    def ships(self) -> list:
        return [ShipState(i, p, tuple(h), self.config.ship_speed)
                for i, (p, h) in enumerate(zip(self.ship_positions, self.headings))]


@dataclass
class SlotResult:
    slot_index: int
    per_ship_rate: np.ndarray
    uav_pose: UavPose
    energy: EnergyLedgerEntry
    rx_dbm: np.ndarray
    direct_los: np.ndarray
    snr_br: Optional[np.ndarray] = None
    snr_bv: Optional[np.ndarray] = None
    snr_rv: Optional[np.ndarray] = None

    @property
    def avg_rate(self) -> float:
        return float(np.mean(self.per_ship_rate))


@dataclass
class TimeSeries:
    config: ScenarioConfig
    slots: list
    run: int = 0

    @property
    def cumulative_energy(self) -> np.ndarray:
        return np.cumsum([s.energy.total for s in self.slots])

    @property
    def avg_rates(self) -> np.ndarray:
        return np.array([s.avg_rate for s in self.slots])


@dataclass
class AggregateResult:
    runs: list

    @property
    def mean_rate_per_slot(self) -> np.ndarray:
        return np.mean([r.avg_rates for r in self.runs], axis=0)

    @property
    def mean_cumulative_energy(self) -> np.ndarray:
        return np.mean([r.cumulative_energy for r in self.runs], axis=0)

    @property
    def pooled_rates(self) -> np.ndarray:
        return np.concatenate([s.per_ship_rate for r in self.runs for s in r.slots]) \
            if self.runs and self.runs[0].slots else np.array([])

    @property
    def mean_rate(self) -> float:
        return float(np.mean(self.pooled_rates))


def _blocked_lanes(config: ScenarioConfig) -> tuple[float, float]:
    corners = config.blocking_ship.footprint_corners()
    half = config.victim_dims[0] / 2
    return corners[:, 0].min() - half, corners[:, 0].max() + half


def los_ships(config: ScenarioConfig, ships: list) -> list:
    """Ships a hovering relay must see: the shadowed ones, or all of them."""
    if config.los_targets == "all" or not ships:
        return ships
    blocked = segments_blocked(np.array(config.bs, dtype=float), np.array(ships, dtype=float),
                               config.obstacles)
    return [s for s, b in zip(ships, blocked) if b]


def init_scenario(config: ScenarioConfig) -> SimState:
    """Place the fleet and the UAV at t = 0.

    Multi-ship fleets are drawn uniformly over the area, skipping alongshore
    lanes that would run into the blocking ship, and each ship sails in +y or
    -y with equal probability. The UAV starts at its architecture's initial
    pose; reaching that pose is not charged.
    """
    rng = np.random.default_rng(config.seed)
    if config.scenario == "single":
        xy = np.array([config.start], dtype=float)
        a = math.radians(config.heading_deg)
        headings = np.array([[math.cos(a), math.sin(a)]])
    else:
        w, l = config.area
        lane_lo, lane_hi = _blocked_lanes(config)
        xy = np.empty((config.n_victims, 2))
        for i in range(config.n_victims):
            while True:
                x, y = rng.uniform(0, w), rng.uniform(0, l)
                if not lane_lo <= x <= lane_hi:
                    break
            xy[i] = x, y
        signs = rng.choice([-1.0, 1.0], size=config.n_victims)
        headings = np.column_stack([np.zeros(config.n_victims), signs])
    if config.headings is not None:
        headings = np.asarray(config.headings, dtype=float)
        headings = headings / np.linalg.norm(headings, axis=1, keepdims=True)

    state = SimState(config, xy, headings)
    ships = state.ship_positions
    arch = config.architecture
    if arch is Architecture.FPR:
        state.uav = position_fpr(config.bs, ships, config.obstacles, config.h_max,
                                 mode=config.scenario, area=config.area,
                                 los_ships=los_ships(config, ships))
    elif arch is Architecture.CFMR:
        state.uav = position_cfmr(config.bs, ships, config.obstacles, config.h_max, seed=config.seed,
                                  los_ships=los_ships(config, ships))
    elif arch is Architecture.LSMR:
        state.uav = position_lsmr(ships, ABSENT, config.ls_height, seed=config.seed)
    return state


def _reflect(coord, heading, upper):
    # fold back into [0, upper] as many times as needed
    for _ in range(64):
        low, high = coord < 0, coord > upper
        if not (low.any() or high.any()):
            break
        coord = np.where(low, -coord, np.where(high, 2 * upper - coord, coord))
        heading = np.where(low | high, -heading, heading)
    return coord, heading


def step_ships(state: SimState, dt: float) -> SimState:
    """Advance every ship by ``speed * dt`` along its heading, in place.

    In the multi-ship scenario ships reflect off the area boundary; the lone
    single-scenario ship sails on unconstrained.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    cfg = state.config
    xy = state.xy + cfg.ship_speed * dt * state.headings
    headings = state.headings.copy()
    if cfg.scenario == "multi":
        for axis, upper in enumerate(cfg.area):
            xy[:, axis], headings[:, axis] = _reflect(xy[:, axis], headings[:, axis], upper)
    state.xy, state.headings = xy, headings
    state.time += dt
    return state


def _fly(start: Vec3, target: UavPose, speed: float, params: EnergyParams, slot: float):
    """Move towards ``target`` for at most ``slot`` seconds.

    Returns (pose, mobility energy, flight time).
    """
    d = math.hypot(target.position.x - start.x, target.position.y - start.y)
    dh = target.position.z - start.z
    t = flight_time(params, d, dh, speed)
    if t <= slot:
        return target, mobility_energy(params, d, dh, speed), t
    f = slot / t
    pos = Vec3(start.x + f * (target.position.x - start.x),
               start.y + f * (target.position.y - start.y),
               start.z + f * dh)
    pose = UavPose(pos, PoseMode.IN_TRANSIT, los_ok=target.los_ok)
    return pose, mobility_energy(params, f * d, f * dh, speed), slot


def _move_uav(state: SimState, ships: list) -> tuple[UavPose, float, float]:
    """New pose, mobility energy and hover energy for this slot."""
    cfg = state.config
    prev, slot, ep = state.uav, cfg.slot_duration, cfg.energy
    arch = cfg.architecture
    if arch is Architecture.NR:
        return ABSENT, 0.0, 0.0
    if arch is Architecture.FPR:
        return prev, 0.0, hover_energy(ep, slot)
    if arch is Architecture.CFMR:
        target = position_cfmr(cfg.bs, ships, cfg.obstacles, cfg.h_max, seed=cfg.seed,
                               los_ships=los_ships(cfg, ships))
        pose, e_mob, t_fly = _fly(prev.position, target, ep.v_horizontal_cfmr, ep, slot)
        return pose, e_mob, hover_energy(ep, max(slot - t_fly, 0.0))
    # LSMR: a perched UAV rides along with its host at no cost
    target = position_lsmr(ships, prev, cfg.ls_height, seed=cfg.seed)
    if prev.mode is PoseMode.PERCHED:
        start = landing_spot(ships[prev.host], cfg.ls_height)
        if target.host == prev.host:
            return target, 0.0, 0.0
    else:
        start = prev.position
    pose, e_mob, _ = _fly(start, target, ep.v_horizontal_lsmr, ep, slot)
    return pose, e_mob, 0.0


def _clamped(d):
    return np.maximum(d, ch.D_MIN)


def evaluate_rates(config: ScenarioConfig, ships_xyz: np.ndarray, uav: UavPose) -> dict:
    """Per-ship rate, received power and hop SNRs for one UAV pose."""
    params = config.channel
    bs = np.array(config.bs, dtype=float)
    obstacles = config.obstacles
    los_bv = ~segments_blocked(bs, ships_xyz, obstacles)
    d_bv = _clamped(np.linalg.norm(ships_xyz - bs, axis=1))
    pl_bv = ch.path_loss_db(params, d_bv, los_bv)
    gain_bv = ch.LinkGain(pl_bv, ch.gain_from_path_loss(pl_bv), los_bv)

    if uav.position is None:
        snr = ch.snr_siso(params, gain_bv)
        rate = ch.apply_sensitivity(snr.rx_power_dbm, ch.rate_siso(snr), params)
        return dict(rate=np.atleast_1d(rate), rx_dbm=np.atleast_1d(snr.rx_power_dbm), los=los_bv)

    u = np.array(uav.position, dtype=float)
    los_br = ~segments_blocked(bs, u, obstacles)
    pl_br = ch.path_loss_db(params, _clamped(np.linalg.norm(u - bs)), los_br)
    gain_br = ch.LinkGain(pl_br, ch.gain_from_path_loss(pl_br), los_br)
    los_rv = ~segments_blocked(u, ships_xyz, obstacles)
    pl_rv = ch.path_loss_db(params, _clamped(np.linalg.norm(ships_xyz - u, axis=1)), los_rv)
    gain_rv = ch.LinkGain(pl_rv, ch.gain_from_path_loss(pl_rv), los_rv)
    snr = ch.snr_df(params, gain_br, gain_bv, gain_rv)
    rate = ch.apply_sensitivity(snr.rx_power_dbm, ch.rate_df(snr), params)
    n = len(ships_xyz)
    return dict(
        rate=np.atleast_1d(rate), rx_dbm=np.atleast_1d(snr.rx_power_dbm), los=los_bv,
        snr_br=np.broadcast_to(snr.components["br"], (n,)).copy(),
        snr_bv=np.atleast_1d(snr.components["bv"]),
        snr_rv=np.atleast_1d(snr.components["rv"]),
    )


def simulate_slot(state: SimState, t_j: int) -> SlotResult:
    cfg = state.config
    step_ships(state, cfg.slot_duration)
    ships = state.ship_positions
    pose, e_mob, e_hover = _move_uav(state, ships)
    state.uav = pose

    if cfg.architecture is Architecture.NR:
        ledger = EnergyLedgerEntry(t_j, 0.0, 0.0, 0.0)
    else:
        e_comm = comm_energy(cfg.energy, len(ships), cfg.slot_duration)
        ledger = EnergyLedgerEntry(t_j, e_comm, e_hover, e_mob)

    out = evaluate_rates(cfg, np.array(ships, dtype=float), pose)
    return SlotResult(
        slot_index=t_j, per_ship_rate=out["rate"], uav_pose=pose, energy=ledger,
        rx_dbm=out["rx_dbm"], direct_los=out["los"],
        snr_br=out.get("snr_br"), snr_bv=out.get("snr_bv"), snr_rv=out.get("snr_rv"),
    )


def run_scenario(config: ScenarioConfig, run: int = 0) -> TimeSeries:
    state = init_scenario(config)
    slots = [simulate_slot(state, j) for j in range(config.n_slots)]
    return TimeSeries(config, slots, run)


def _run_indexed(args):
    config, i = args
    return run_scenario(dataclasses.replace(config, seed=config.seed + i), run=i)


def monte_carlo(config: ScenarioConfig, n_runs: int = 100, workers: Optional[int] = None) -> AggregateResult:
    """Independent runs with seeds ``seed + i``; results ordered by run index."""
    if n_runs < 1:
        raise ValueError("n_runs must be at least 1")
    jobs = [(config, i) for i in range(n_runs)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_run_indexed, jobs))
    else:
        runs = [_run_indexed(job) for job in jobs]
    return AggregateResult(runs)


def compare_architectures(config: ScenarioConfig, n_runs: int = 1, architectures=tuple(Architecture),
                          workers: Optional[int] = None) -> dict:
    """Same seeds and fleet trajectories for every architecture."""
    return {arch: monte_carlo(dataclasses.replace(config, architecture=arch), n_runs, workers)
            for arch in architectures}
