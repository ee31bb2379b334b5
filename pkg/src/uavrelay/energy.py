"""UAV energy accounting: communication, hovering and mobility."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class EnergyParams:
    n_rotors: int = 4
    thrust: float = 34.3            # N
    frame_weight: float = 1.5       # kg
    payload_weight: float = 2.0     # kg
    gravity: float = 9.8
    rotor_radius: float = 0.4       # m
    air_density: float = 1.225
    p_relay_tx: float = 0.0316      # W
    p_circuit: float = 0.01         # W
    drag_coeff: float = 0.025
    ref_area: float = 0.192         # m^2
    rotor_chord: float = 0.022      # m, carried but unused by the power model
    angular_velocity: float = 16.0  # rad/s, carried but unused by the power model
    v_ascend: float = 10.0
    v_descend: float = 10.0
    v_horizontal_lsmr: float = 27.7
    v_horizontal_cfmr: float = 10.0

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ValueError(f"EnergyParams.{name} must be positive, got {value!r}")
        weight = (self.frame_weight + self.payload_weight) * self.gravity
        if abs(self.thrust - weight) > 1e-6:
            raise ValueError(f"thrust {self.thrust} N does not balance weight {weight} N")


@dataclass(frozen=True)
class EnergyLedgerEntry:
    slot_index: int
    comm: float
    hover: float
    mobility: float

    def __post_init__(self):
        if min(self.comm, self.hover, self.mobility) < 0:
            raise ValueError(f"negative energy component in {self}")

    @property
    def total(self) -> float:
        return self.comm + self.hover + self.mobility


def comm_energy(params: EnergyParams, n_served: int, t_com: float) -> float:
    if t_com < 0:
        raise ValueError("t_com must be non-negative")
    return (n_served * params.p_relay_tx + params.p_circuit) * t_com


def hover_power(params: EnergyParams) -> float:
    return params.n_rotors * params.thrust ** 1.5 / math.sqrt(
        2 * params.air_density * math.pi * params.rotor_radius ** 2
    )


def hover_energy(params: EnergyParams, t_hv: float) -> float:
    if t_hv < 0:
        raise ValueError("t_hv must be non-negative")
    return hover_power(params) * t_hv


def induced_velocity(params: EnergyParams) -> float:
    """Mean rotor induced velocity in hover, consistent with :func:`hover_power`."""
    return math.sqrt(params.thrust / (2 * params.air_density * math.pi * params.rotor_radius ** 2))


def induced_power_ratio(params: EnergyParams, v: float) -> float:
    """Forward-flight induced power relative to hover (momentum theory).

    Equals sqrt(sqrt(1 + a^2) - a) with a = v^2 / (2 v0^2), written in a
    form that does not cancel at high speed.
    """
    a = v * v / (2 * induced_velocity(params) ** 2)
    return math.sqrt(1.0 / (math.sqrt(1.0 + a * a) + a))


def mobility_powers(params: EnergyParams, v_h: float) -> tuple[float, float, float]:
    """Horizontal, ascending and descending power (W).

    Horizontal flight: hover induced power reduced by translational lift plus
    parasitic drag 0.5 rho C_x A v^3. Ascent adds climb work V v_a; descent
    recovers V v_d, clamped at zero.
    """
    if v_h < 0:
        raise ValueError("v_h must be non-negative")
    p_hv = hover_power(params)
    rho = params.air_density
    p_h = p_hv * induced_power_ratio(params, v_h) + 0.5 * rho * params.drag_coeff * params.ref_area * v_h ** 3
    p_a = p_hv + params.thrust * params.v_ascend
    p_d = max(p_hv - params.thrust * params.v_descend, 0.0)
    return p_h, p_a, p_d


def mobility_energy(params: EnergyParams, d_horiz: float, delta_h: float, v_h: float) -> float:
    if d_horiz < 0:
        raise ValueError("d_horiz must be non-negative")
    if d_horiz > 0 and not v_h > 0:
        raise ValueError("horizontal travel needs a positive speed")
    if d_horiz == 0 and delta_h == 0:
        return 0.0
    p_h, p_a, p_d = mobility_powers(params, v_h)
    horizontal = p_h * d_horiz / v_h if d_horiz > 0 else 0.0
    if delta_h >= 0:
        return horizontal + p_a * delta_h / params.v_ascend
    # descent: minus a negative altitude change, so the term is positive
    return horizontal - p_d * delta_h / params.v_descend


def flight_time(params: EnergyParams, d_horiz: float, delta_h: float, v_h: float) -> float:
    t = d_horiz / v_h if d_horiz > 0 else 0.0
    if delta_h >= 0:
        return t + delta_h / params.v_ascend
    return t - delta_h / params.v_descend
