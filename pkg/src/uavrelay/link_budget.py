"""Closed-form rate versus distance from a free-space link budget.

Chain: FSPL -> EIRP -> received power -> P_r/N -> P_r/N0 -> R, with every
intermediate exposed. It is deliberately independent of :mod:`channel` so it
can serve as a cross-check on it.

Note: the closed form is sometimes printed with an unsquared ``4*pi*d/lambda``
in the denominator. That is inconsistent with the FSPL definition it is
derived from; this module uses the squared FSPL throughout, so the rate falls
as 1/d**2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

BOLTZMANN = 1.380649e-23


@dataclass(frozen=True)
class LinkBudgetParams:
    p_tx: float          # W
    g_tx: float = 1.0
    g_rx: float = 1.0
    wavelength: float = 299_792_458.0 / 5.8e9
    temperature: float = 290.0
    boltzmann: float = BOLTZMANN
    ebn0: float = 10.0   # linear
    bandwidth: float = 10e6

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")


def _check_d(d):
    if d < 1.0:
        raise ValueError("distance must be at least 1 m")


def fspl_linear(d: float, wavelength: float) -> float:
    _check_d(d)
    return (4.0 * math.pi * d / wavelength) ** 2


def eirp(params: LinkBudgetParams) -> float:
    return params.p_tx * params.g_tx


def received_power(params: LinkBudgetParams, d: float) -> float:
    return eirp(params) * params.g_rx / fspl_linear(d, params.wavelength)


def received_power_direct(params: LinkBudgetParams, d: float) -> float:
    """Same quantity written as EIRP * G_r * (lambda / 4 pi d)^2."""
    _check_d(d)
    return eirp(params) * params.g_rx * (params.wavelength / (4.0 * math.pi * d)) ** 2


def noise_power(params: LinkBudgetParams) -> float:
    return params.boltzmann * params.temperature * params.bandwidth


def noise_density(params: LinkBudgetParams) -> float:
    return params.boltzmann * params.temperature


def pr_over_n(params: LinkBudgetParams, d: float) -> float:
    return received_power(params, d) / noise_power(params)


def pr_over_n0(params: LinkBudgetParams, d: float) -> float:
    return eirp(params) * (params.g_rx / params.temperature) / (
        params.boltzmann * fspl_linear(d, params.wavelength)
    )


def analytic_rate(params: LinkBudgetParams, d: float) -> float:
    """Largest bit rate (bit/s) that still meets the required Eb/N0 at ``d``."""
    return eirp(params) * (params.g_rx / params.temperature) / (
        params.boltzmann * fspl_linear(d, params.wavelength) * params.ebn0
    )


def ebn0_achieved(params: LinkBudgetParams, d: float, rate: float) -> float:
    return pr_over_n0(params, d) / rate


def budget_rows(params: LinkBudgetParams, d: float) -> list[tuple[str, float, str]]:
    """Labelled intermediate values, in derivation order."""
    return [
        ("distance", d, "m"),
        ("wavelength", params.wavelength, "m"),
        ("FSPL", fspl_linear(d, params.wavelength), "linear"),
        ("FSPL_dB", 10 * math.log10(fspl_linear(d, params.wavelength)), "dB"),
        ("EIRP", eirp(params), "W"),
        ("P_r", received_power(params, d), "W"),
        ("N", noise_power(params), "W"),
        ("P_r/N", pr_over_n(params, d), "linear"),
        ("P_r/N0", pr_over_n0(params, d), "Hz"),
        ("Eb/N0_required", params.ebn0, "linear"),
        ("R", analytic_rate(params, d), "bit/s"),
    ]
