"""Command line entry point: ``uavrelay {run,compare,montecarlo,linkbudget}``.

Exit status is 0 on success, 1 for configuration errors and 2 for anything
that goes wrong while running.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import sys

from . import link_budget as lb
from .channel import dbm_to_mw
from .config import ConfigError, config_to_flat, parse_config, parse_text
from .metrics import build_report
from .positioning import Architecture
from .results import emit_results
from .scenario import compare_architectures


def _add_common(p, runs_default=None):
    p.add_argument("--config", help="key = value config file (defaults when omitted)")
    p.add_argument("--scenario", choices=("single", "multi"))
    p.add_argument("--arch", choices=[a.value for a in Architecture])
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="results", help="output directory")
    if runs_default is not None:
        p.add_argument("--runs", type=int, default=runs_default)
        p.add_argument("--workers", type=int, default=None, help="parallel processes for the runs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uavrelay", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("run", help="one run of one architecture"))
    _add_common(sub.add_parser("compare", help="all four architectures on shared seeds"), runs_default=1)
    _add_common(sub.add_parser("montecarlo", help="many runs, one or all architectures"), runs_default=100)
    p = sub.add_parser("linkbudget", help="print the free-space link budget chain")
    p.add_argument("--config")
    p.add_argument("--distance", type=float, default=500.0, help="m")
    p.add_argument("--ebn0-db", type=float, default=10.0)
    p.add_argument("--temperature", type=float, default=290.0, help="K")
    return parser


def _load(args):
    cfg = parse_config(args.config, args.scenario) if args.config else parse_text("", scenario=args.scenario)
    changes = {}
    if getattr(args, "arch", None):
        changes["architecture"] = Architecture.parse(args.arch)
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    return dataclasses.replace(cfg, **changes) if changes else cfg


def _print_summary(report):
    for arch, s in report.summary["architectures"].items():
        print(f"{arch:5s} mean rate {s['mean_rate_bpshz']:.4f} bps/Hz  "
              f"mean energy {s['mean_total_energy_J']:.1f} J  ({s['n_runs']} runs)")


def _simulate(args):
    cfg = _load(args)
    if args.command == "run":
        archs, runs = (cfg.architecture,), 1
    elif args.command == "compare":
        archs, runs = tuple(Architecture), args.runs
    else:
        archs, runs = ((cfg.architecture,) if args.arch else tuple(Architecture)), args.runs
    if runs < 1:
        raise ConfigError("--runs must be at least 1")
    results = compare_architectures(cfg, runs, archs, workers=getattr(args, "workers", None))
    echo = config_to_flat(cfg)
    echo["runs"] = runs
    report = build_report(results, echo)
    paths = emit_results(report, args.out)
    _print_summary(report)
    print("wrote " + ", ".join(paths.values()))


def _linkbudget(args):
    cfg = parse_config(args.config) if args.config else parse_text("")
    ch = cfg.channel
    params = lb.LinkBudgetParams(
        p_tx=float(dbm_to_mw(ch.p_bs_tx)) / 1e3,
        g_tx=10 ** (ch.antenna_gains["bs"] / 10), g_rx=10 ** (ch.antenna_gains["victim"] / 10),
        wavelength=ch.wavelength, temperature=args.temperature,
        ebn0=10 ** (args.ebn0_db / 10), bandwidth=ch.bandwidth,
    )
    for label, value, unit in lb.budget_rows(params, args.distance):
        print(f"{label:16s} {value:.6g} {unit}")
    r = lb.analytic_rate(params, args.distance)
    print(f"{'R/B':16s} {r / ch.bandwidth:.6g} bit/s/Hz")
    print(f"{'log2(1+P_r/N)':16s} {math.log2(1 + lb.pr_over_n(params, args.distance)):.6g} bit/s/Hz")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "linkbudget":
            _linkbudget(args)
        else:
            _simulate(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - surfaced as exit status 2
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
