"""Performance metrics and the run report built from result tables.

The summary is always computed from the flat slot and energy tables, never
from the in-memory simulation objects, so re-reading the emitted CSV files
reproduces it exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geometry import LosState
from .positioning import Architecture

SLOT_COLUMNS = ("run", "slot", "arch", "ship_id", "rate_bpshz", "rx_dbm", "los", "throughput_bps")
ENERGY_COLUMNS = ("run", "slot", "arch", "comm_J", "hover_J", "mobility_J", "total_J", "cumulative_J")

# (subject, baseline) pairs reported in the summary
COMPARISONS = (("lsmr", "fpr"), ("cfmr", "fpr"), ("cfmr", "lsmr"), ("fpr", "nr"), ("cfmr", "nr"), ("lsmr", "nr"))


def average_rate(per_ship_rates: Sequence[float]) -> float:
    rates = list(per_ship_rates)
    if not rates:
        raise ValueError("average_rate of an empty list")
    return math.fsum(rates) / len(rates)


def cumulative_energy(entries: Iterable) -> list[float]:
    """Running total of slot energy. Accepts ledger entries or plain numbers."""
    out, acc = [], 0.0
    for e in entries:
        acc += getattr(e, "total", e)
        out.append(acc)
    return out


class RateCdf:
    """Empirical CDF of pooled rate samples."""

    def __init__(self, samples):
        s = np.sort(np.asarray(samples, dtype=float).ravel())
        if s.size == 0:
            raise ValueError("rate_cdf needs at least one sample")
        self.sorted_samples = s

    def __len__(self):
        return self.sorted_samples.size

    def cdf(self, x):
        """Fraction of samples <= x."""
        return np.searchsorted(self.sorted_samples, x, side="right") / self.sorted_samples.size

    def quantile(self, p):
        """Smallest sample whose CDF reaches ``p``."""
        p = np.asarray(p, dtype=float)
        if np.any((p < 0) | (p > 1)):
            raise ValueError("quantile level must lie in [0, 1]")
        n = self.sorted_samples.size
        idx = np.clip(np.ceil(p * n).astype(int) - 1, 0, n - 1)
        out = self.sorted_samples[idx]
        return float(out) if out.ndim == 0 else out

    def steps(self) -> list[tuple[float, float]]:
        """(rate, F(rate)) at every distinct sample value."""
        values = np.unique(self.sorted_samples)
        return [(float(v), float(f)) for v, f in zip(values, self.cdf(values))]


def rate_cdf(samples) -> RateCdf:
    return RateCdf(samples)


def percent_delta(a: float, b: float) -> float:
    if b == 0:
        raise ZeroDivisionError("percent_delta with a zero baseline")
    return 100.0 * (a - b) / b


def slot_table(results: dict) -> list[tuple]:
    """Flatten {Architecture: AggregateResult} into per-ship slot rows."""
    rows = []
    for arch, agg in results.items():
        for ts in agg.runs:
            bw = ts.config.channel.bandwidth
            for s in ts.slots:
                for i, (rate, rx, los) in enumerate(zip(s.per_ship_rate, s.rx_dbm, s.direct_los)):
                    rows.append((ts.run, s.slot_index, arch.value, i, float(rate), float(rx),
                                 LosState.LOS.value if los else LosState.NLOS.value, float(rate) * bw))
    return rows


def energy_table(results: dict) -> list[tuple]:
    rows = []
    for arch, agg in results.items():
        for ts in agg.runs:
            acc = 0.0
            for s in ts.slots:
                e = s.energy
                acc += e.total
                rows.append((ts.run, s.slot_index, arch.value, e.comm, e.hover, e.mobility, e.total, acc))
    return rows


def summarize(slot_rows: Sequence[tuple], energy_rows: Sequence[tuple]) -> dict:
    """Per-architecture means, per-slot series and pairwise percentages."""
    archs = list(dict.fromkeys(r[2] for r in slot_rows))
    per_arch = {}
    for a in archs:
        rates = [r[4] for r in slot_rows if r[2] == a]
        by_slot = {}
        for r in slot_rows:
            if r[2] == a:
                by_slot.setdefault(r[1], []).append(r[4])
        finals, cum_by_slot = {}, {}
        for r in energy_rows:
            if r[2] == a:
                finals[r[0]] = r[7]
                cum_by_slot.setdefault(r[1], []).append(r[7])
        per_arch[a] = {
            "mean_rate_bpshz": average_rate(rates),
            "n_samples": len(rates),
            "n_runs": len(finals),
            "mean_total_energy_J": math.fsum(finals.values()) / len(finals) if finals else 0.0,
            "per_slot_mean_rate_bpshz": [average_rate(v) for _, v in sorted(by_slot.items())],
            "mean_cumulative_energy_J": [math.fsum(v) / len(v) for _, v in sorted(cum_by_slot.items())],
        }

    comparisons = {}
    for a, b in COMPARISONS:
        if a in per_arch and b in per_arch:
            ra, rb = per_arch[a]["mean_rate_bpshz"], per_arch[b]["mean_rate_bpshz"]
            ea, eb = per_arch[a]["mean_total_energy_J"], per_arch[b]["mean_total_energy_J"]
            comparisons[f"{a}_vs_{b}"] = {
                "rate_ratio": ra / rb if rb else None,
                "rate_delta_pct": percent_delta(ra, rb) if rb else None,
                "energy_delta_pct": percent_delta(ea, eb) if eb else None,
            }
    return {"architectures": per_arch, "comparisons": comparisons}


@dataclass
class RunReport:
    config: dict
    slot_rows: list
    energy_rows: list
    cdf: dict = field(default_factory=dict)

    @property
    def summary(self) -> dict:
        return summarize(self.slot_rows, self.energy_rows)

    def to_json(self) -> dict:
        return {"config": self.config, "summary": self.summary}


def build_report(results: dict, config_echo: dict) -> RunReport:
    """Tables, CDFs and summary for {Architecture: AggregateResult}."""
    slot_rows = slot_table(results)
    cdfs = {}
    for arch in results:
        key = arch.value if isinstance(arch, Architecture) else str(arch)
        samples = [r[4] for r in slot_rows if r[2] == key]
        if samples:
            cdfs[key] = rate_cdf(samples)
    return RunReport(config_echo, slot_rows, energy_table(results), cdfs)
