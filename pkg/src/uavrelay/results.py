"""Writing and re-reading result files.

Floats are written with ``repr`` (shortest round-trip form), so reading a
file back gives the exact values that were written.
"""
from __future__ import annotations

import csv
import json
import os

from .metrics import ENERGY_COLUMNS, SLOT_COLUMNS, RunReport


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])


def emit_results(report: RunReport, out_dir) -> dict:
    """Write slots.csv, energy.csv, cdf.csv and summary.json; return their paths."""
    paths = {name: os.path.join(out_dir, name)
             for name in ("slots.csv", "energy.csv", "cdf.csv", "summary.json")}
    try:
        os.makedirs(out_dir, exist_ok=True)
        _write_csv(paths["slots.csv"], SLOT_COLUMNS, report.slot_rows)
        _write_csv(paths["energy.csv"], ENERGY_COLUMNS, report.energy_rows)
        cdf_rows = [(arch, rate, q) for arch, cdf in report.cdf.items() for rate, q in cdf.steps()]
        _write_csv(paths["cdf.csv"], ("arch", "rate", "quantile"), cdf_rows)
        with open(paths["summary.json"], "w", encoding="utf-8") as fh:
            json.dump(report.to_json(), fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write results to {exc.filename or out_dir}: {exc.strerror}") from exc
    return paths


def read_slots(path) -> list[tuple]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        return [(int(r[0]), int(r[1]), r[2], int(r[3]), float(r[4]), float(r[5]), r[6], float(r[7]))
                for r in reader]


def read_energy(path) -> list[tuple]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        return [(int(r[0]), int(r[1]), r[2], *map(float, r[3:8])) for r in reader]
