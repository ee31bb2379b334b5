"""Plain-text scenario configuration.

One ``key = value`` per line, dotted keys for sections, ``#`` starts a
comment. Omitted keys take the stock defaults of the chosen scenario, so an
empty file is a complete configuration. Unknown keys are rejected.

    scenario = multi
    arch = lsmr
    channel.carrier_frequency_hz = 5.8e9
"""
from __future__ import annotations

import math
import os
from typing import Optional

from .channel import ChannelParams
from .energy import EnergyParams
from .geometry import Box3, Vec3
from .positioning import Architecture
from .scenario import ScenarioConfig, default_config


class ConfigError(ValueError):
    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.path, self.line = path, line


_ANY = (lambda v: True, "")
_POS = (lambda v: v > 0, "must be > 0")
_NONNEG = (lambda v: v >= 0, "must be >= 0")

CHOICES = {
    "scenario": ("single", "multi"),
    "arch": tuple(a.value for a in Architecture),
    "los_targets": ("shadowed", "all"),
}

# key -> (type, range check)
KEYS = {
    "scenario": (str, _ANY), "arch": (str, _ANY), "los_targets": (str, _ANY),
    "seed": (int, _ANY), "n_slots": (int, _NONNEG), "n_victims": (int, (lambda v: v >= 1, "must be >= 1")),
    "slot_duration_s": (float, _POS),
    "area.width_m": (float, _POS), "area.length_m": (float, _POS),
    "bs.x_m": (float, _ANY), "bs.y_m": (float, _ANY), "bs.height_m": (float, _NONNEG),
    "blocker.x_m": (float, _ANY), "blocker.y_m": (float, _ANY), "blocker.width_m": (float, _POS),
    "blocker.length_m": (float, _POS), "blocker.height_m": (float, _POS), "blocker.yaw_rad": (float, _ANY),
    "victim.width_m": (float, _POS), "victim.length_m": (float, _POS), "victim.height_m": (float, _POS),
    "victim.antenna_height_m": (float, _NONNEG), "victim.speed_mps": (float, _NONNEG),
    "single.start_x_m": (float, _ANY), "single.start_y_m": (float, _ANY), "single.heading_deg": (float, _ANY),
    "uav.ls_height_m": (float, _NONNEG), "uav.h_max_m": (float, _POS),
    "channel.carrier_frequency_hz": (float, _POS), "channel.bandwidth_hz": (float, _POS),
    "channel.noise_figure_db": (float, _ANY), "channel.zeta_los_db": (float, _NONNEG),
    "channel.zeta_nlos_db": (float, _NONNEG), "channel.speed_of_light_mps": (float, _POS),
    "channel.bs_tx_dbm": (float, _ANY), "channel.relay_tx_dbm": (float, _ANY),
    "channel.rx_sensitivity_dbm": (float, _ANY), "channel.gain_bs_dbi": (float, _ANY),
    "channel.gain_relay_dbi": (float, _ANY), "channel.gain_victim_dbi": (float, _ANY),
    "energy.n_rotors": (int, _POS), "energy.thrust_n": (float, _POS), "energy.frame_weight_kg": (float, _POS),
    "energy.payload_weight_kg": (float, _POS), "energy.gravity": (float, _POS),
    "energy.rotor_radius_m": (float, _POS), "energy.air_density": (float, _POS),
    "energy.relay_tx_w": (float, _POS), "energy.circuit_w": (float, _POS), "energy.drag_coeff": (float, _POS),
    "energy.ref_area_m2": (float, _POS), "energy.rotor_chord_m": (float, _POS),
    "energy.angular_velocity_rad_s": (float, _POS), "energy.v_ascend_mps": (float, _POS),
    "energy.v_descend_mps": (float, _POS), "energy.v_horizontal_lsmr_mps": (float, _POS),
    "energy.v_horizontal_cfmr_mps": (float, _POS),
}


def config_to_flat(cfg: ScenarioConfig) -> dict:
    ch, en, box = cfg.channel, cfg.energy, cfg.blocking_ship
    return {
        "scenario": cfg.scenario, "arch": cfg.architecture.value, "los_targets": cfg.los_targets,
        "seed": cfg.seed, "n_slots": cfg.n_slots, "n_victims": cfg.n_victims,
        "slot_duration_s": cfg.slot_duration,
        "area.width_m": cfg.area[0], "area.length_m": cfg.area[1],
        "bs.x_m": cfg.bs.x, "bs.y_m": cfg.bs.y, "bs.height_m": cfg.bs.z,
        "blocker.x_m": box.center.x, "blocker.y_m": box.center.y, "blocker.width_m": box.width,
        "blocker.length_m": box.length, "blocker.height_m": box.height, "blocker.yaw_rad": box.yaw,
        "victim.width_m": cfg.victim_dims[0], "victim.length_m": cfg.victim_dims[1],
        "victim.height_m": cfg.victim_dims[2], "victim.antenna_height_m": cfg.victim_antenna_height,
        "victim.speed_mps": cfg.ship_speed,
        "single.start_x_m": cfg.start[0], "single.start_y_m": cfg.start[1],
        "single.heading_deg": cfg.heading_deg,
        "uav.ls_height_m": cfg.ls_height, "uav.h_max_m": cfg.h_max,
        "channel.carrier_frequency_hz": ch.f_c, "channel.bandwidth_hz": ch.bandwidth,
        "channel.noise_figure_db": ch.noise_figure, "channel.zeta_los_db": ch.zeta_los,
        "channel.zeta_nlos_db": ch.zeta_nlos, "channel.speed_of_light_mps": ch.c,
        "channel.bs_tx_dbm": ch.p_bs_tx, "channel.relay_tx_dbm": ch.p_relay_tx,
        "channel.rx_sensitivity_dbm": ch.rx_sensitivity,
        "channel.gain_bs_dbi": ch.antenna_gains["bs"], "channel.gain_relay_dbi": ch.antenna_gains["relay"],
        "channel.gain_victim_dbi": ch.antenna_gains["victim"],
        "energy.n_rotors": en.n_rotors, "energy.thrust_n": en.thrust,
        "energy.frame_weight_kg": en.frame_weight, "energy.payload_weight_kg": en.payload_weight,
        "energy.gravity": en.gravity, "energy.rotor_radius_m": en.rotor_radius,
        "energy.air_density": en.air_density, "energy.relay_tx_w": en.p_relay_tx,
        "energy.circuit_w": en.p_circuit, "energy.drag_coeff": en.drag_coeff,
        "energy.ref_area_m2": en.ref_area, "energy.rotor_chord_m": en.rotor_chord,
        "energy.angular_velocity_rad_s": en.angular_velocity, "energy.v_ascend_mps": en.v_ascend,
        "energy.v_descend_mps": en.v_descend, "energy.v_horizontal_lsmr_mps": en.v_horizontal_lsmr,
        "energy.v_horizontal_cfmr_mps": en.v_horizontal_cfmr,
    }


def flat_to_config(f: dict) -> ScenarioConfig:
    channel = ChannelParams(
        f_c=f["channel.carrier_frequency_hz"], bandwidth=f["channel.bandwidth_hz"],
        noise_figure=f["channel.noise_figure_db"], zeta_los=f["channel.zeta_los_db"],
        zeta_nlos=f["channel.zeta_nlos_db"], c=f["channel.speed_of_light_mps"],
        p_bs_tx=f["channel.bs_tx_dbm"], p_relay_tx=f["channel.relay_tx_dbm"],
        rx_sensitivity=f["channel.rx_sensitivity_dbm"],
        antenna_gains={"bs": f["channel.gain_bs_dbi"], "relay": f["channel.gain_relay_dbi"],
                       "victim": f["channel.gain_victim_dbi"]},
    )
    energy = EnergyParams(
        n_rotors=f["energy.n_rotors"], thrust=f["energy.thrust_n"], frame_weight=f["energy.frame_weight_kg"],
        payload_weight=f["energy.payload_weight_kg"], gravity=f["energy.gravity"],
        rotor_radius=f["energy.rotor_radius_m"], air_density=f["energy.air_density"],
        p_relay_tx=f["energy.relay_tx_w"], p_circuit=f["energy.circuit_w"], drag_coeff=f["energy.drag_coeff"],
        ref_area=f["energy.ref_area_m2"], rotor_chord=f["energy.rotor_chord_m"],
        angular_velocity=f["energy.angular_velocity_rad_s"], v_ascend=f["energy.v_ascend_mps"],
        v_descend=f["energy.v_descend_mps"], v_horizontal_lsmr=f["energy.v_horizontal_lsmr_mps"],
        v_horizontal_cfmr=f["energy.v_horizontal_cfmr_mps"],
    )
    return ScenarioConfig(
        scenario=f["scenario"], architecture=Architecture.parse(f["arch"]), seed=f["seed"],
        n_slots=f["n_slots"], slot_duration=f["slot_duration_s"], n_victims=f["n_victims"],
        area=(f["area.width_m"], f["area.length_m"]),
        bs=Vec3(f["bs.x_m"], f["bs.y_m"], f["bs.height_m"]),
        blocking_ship=Box3(Vec3(f["blocker.x_m"], f["blocker.y_m"], 0.0), f["blocker.width_m"],
                           f["blocker.length_m"], f["blocker.height_m"], f["blocker.yaw_rad"]),
        victim_dims=(f["victim.width_m"], f["victim.length_m"], f["victim.height_m"]),
        victim_antenna_height=f["victim.antenna_height_m"], ship_speed=f["victim.speed_mps"],
        start=(f["single.start_x_m"], f["single.start_y_m"]), heading_deg=f["single.heading_deg"],
        ls_height=f["uav.ls_height_m"], h_max=f["uav.h_max_m"], los_targets=f["los_targets"],
        channel=channel, energy=energy,
    )


def _convert(key, raw, path, lineno):
    kind, (check, msg) = KEYS[key]
    try:
        if kind is int:
            value = int(raw)
        elif kind is float:
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError
        else:
            value = raw.lower() if key in CHOICES else raw
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind.__name__}", path, lineno) from None
    if key in CHOICES and value not in CHOICES[key]:
        raise ConfigError(f"{key}: unknown value {raw!r}; expected one of: {', '.join(CHOICES[key])}",
                          path, lineno)
    if not check(value):
        raise ConfigError(f"{key} = {raw}: {msg}", path, lineno)
    return value


def parse_text(text: str, path=None, scenario: Optional[str] = None) -> ScenarioConfig:
    entries = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"malformed line {line.strip()!r}; expected 'key = value'", path, lineno)
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", path, lineno)
        if not raw:
            raise ConfigError(f"missing value for {key!r}", path, lineno)
        entries[key] = (_convert(key, raw, path, lineno), lineno)

    chosen = scenario or (entries["scenario"][0] if "scenario" in entries else "multi")
    if chosen not in CHOICES["scenario"]:
        raise ConfigError(f"unknown scenario {chosen!r}; expected one of: single, multi", path)
    flat = config_to_flat(default_config(chosen))
    for key, (value, _) in entries.items():
        flat[key] = value
    flat["scenario"] = chosen
    try:
        return flat_to_config(flat)
    except ValueError as exc:
        raise ConfigError(str(exc), path) from None


def parse_config(path, scenario: Optional[str] = None) -> ScenarioConfig:
    """Read a config file; ``scenario`` overrides the file's own choice."""
    if not os.path.isfile(path):
        raise ConfigError("config file not found", path)
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read(), path, scenario)


def dump_config(cfg: ScenarioConfig) -> str:
    return "".join(f"{k} = {v!r}\n" if isinstance(v, float) else f"{k} = {v}\n"
                   for k, v in config_to_flat(cfg).items())
