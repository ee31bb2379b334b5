"""Path loss, SNR and achievable rate for direct and decode-and-forward links.

The channel is deterministic: |h|^2 is set by free-space path loss plus a
fixed additional loss that depends only on the LoS state. Powers are kept in
dBm at the interface and converted to milliwatts internally.

Functions accept scalars or numpy arrays so the scenario engine can evaluate
a whole fleet in one call.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .geometry import Box3, LosState, classify_los, distance3d

SPEED_OF_LIGHT = 299_792_458.0
THERMAL_NOISE_DBM_HZ = -174.0
D_MIN = 1.0


@dataclass(frozen=True)
class ChannelParams:
    f_c: float = 5.8e9
    bandwidth: float = 10e6
    noise_figure: float = 10.0
    zeta_los: float = 1.0
    zeta_nlos: float = 20.0
    c: float = SPEED_OF_LIGHT
    p_bs_tx: float = 45.0
    p_relay_tx: float = 15.0
    rx_sensitivity: float = -94.5
    antenna_gains: dict = field(default_factory=lambda: {"bs": 0.0, "relay": 0.0, "victim": 0.0})

    def __post_init__(self):
        if not self.f_c > 0:
            raise ValueError("carrier frequency must be positive")
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")
        if not self.zeta_nlos >= self.zeta_los >= 0:
            raise ValueError("need zeta_nlos >= zeta_los >= 0")
        if not self.c > 0:
            raise ValueError("propagation speed must be positive")

    @property
    def wavelength(self) -> float:
        return self.c / self.f_c


@dataclass
class LinkGain:
    path_loss: Any
    gain_linear: Any
    los: Any


@dataclass
class SnrReport:
    snr_linear: Any
    snr_db: Any
    rx_power_dbm: Any
    components: dict = field(default_factory=dict)


def dbm_to_mw(dbm):
    return 10.0 ** (np.asarray(dbm, dtype=float) / 10.0)


def mw_to_dbm(mw):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(mw)


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def zeta_db(params: ChannelParams, los):
    """Additional loss. ``los`` is a LosState or a boolean array (True = LoS)."""
    if isinstance(los, LosState):
        return params.zeta_los if los is LosState.LOS else params.zeta_nlos
    return np.where(np.asarray(los, dtype=bool), params.zeta_los, params.zeta_nlos)


def path_loss_db(params: ChannelParams, d, los):
    d = np.asarray(d, dtype=float)
    if np.any(d < D_MIN):
        raise ValueError(f"distance below near-field guard of {D_MIN} m")
    fspl = 20.0 * np.log10(4.0 * np.pi * params.f_c * d / params.c)
    return _scalar(fspl + zeta_db(params, los))


def noise_power_dbm(params: ChannelParams) -> float:
    return THERMAL_NOISE_DBM_HZ + 10.0 * np.log10(params.bandwidth) + params.noise_figure


def gain_from_path_loss(pl_db):
    return _scalar(10.0 ** (-np.asarray(pl_db, dtype=float) / 10.0))


def link_gain(params: ChannelParams, tx, rx, obstacles: Sequence[Box3] = ()) -> LinkGain:
    los = classify_los(tx, rx, obstacles)
    pl = path_loss_db(params, distance3d(tx, rx), los)
    return LinkGain(pl, gain_from_path_loss(pl), los)


def _hop_snr(p_tx_dbm, gain, params):
    return _scalar(dbm_to_mw(p_tx_dbm) * np.asarray(gain, dtype=float) / dbm_to_mw(noise_power_dbm(params)))


def _report(snr, rx_mw, components):
    snr = _scalar(snr)
    with np.errstate(divide="ignore"):
        snr_db = _scalar(10.0 * np.log10(snr))
    return SnrReport(snr, snr_db, _scalar(mw_to_dbm(rx_mw)), components)


def snr_siso(params: ChannelParams, gain_bv: LinkGain) -> SnrReport:
    g = params.antenna_gains
    eff = np.asarray(gain_bv.gain_linear) * 10 ** ((g["bs"] + g["victim"]) / 10)
    snr = _hop_snr(params.p_bs_tx, eff, params)
    rx = dbm_to_mw(params.p_bs_tx) * eff
    return _report(snr, rx, {"bv": snr})


def rate_siso(snr: SnrReport):
    """Spectral efficiency in bit/s/Hz; multiply by the bandwidth for bit/s."""
    return _scalar(np.log2(1.0 + np.asarray(snr.snr_linear, dtype=float)))


def snr_df(params: ChannelParams, gain_br: LinkGain, gain_bv: LinkGain, gain_rv: LinkGain) -> SnrReport:
    """Receiver SNR for decode-and-forward.

    The relay must decode the BS transmission, and the victim combines the
    direct and relayed copies, so the weaker of the two stages sets the SNR.
    """
    g = params.antenna_gains
    eff_br = np.asarray(gain_br.gain_linear) * 10 ** ((g["bs"] + g["relay"]) / 10)
    eff_bv = np.asarray(gain_bv.gain_linear) * 10 ** ((g["bs"] + g["victim"]) / 10)
    eff_rv = np.asarray(gain_rv.gain_linear) * 10 ** ((g["relay"] + g["victim"]) / 10)
    br = _hop_snr(params.p_bs_tx, eff_br, params)
    bv = _hop_snr(params.p_bs_tx, eff_bv, params)
    rv = _hop_snr(params.p_relay_tx, eff_rv, params)
    snr = np.minimum(br, np.asarray(bv) + rv)
    rx = dbm_to_mw(params.p_bs_tx) * eff_bv + dbm_to_mw(params.p_relay_tx) * eff_rv
    return _report(snr, rx, {"br": br, "bv": bv, "rv": rv})


def rate_df(snr: SnrReport):
    # two hops share the time budget
    return _scalar(0.5 * np.log2(1.0 + np.asarray(snr.snr_linear, dtype=float)))


def apply_sensitivity(rx_power_dbm, rate, params: ChannelParams):
    ok = np.asarray(rx_power_dbm, dtype=float) >= params.rx_sensitivity
    return _scalar(np.where(ok, rate, 0.0))
