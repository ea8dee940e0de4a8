"""Command-line front end.

Subcommands:
  run            execute one scenario, write ticks.csv and summary.toml
  compare        diff two completed run directories (paired by digest)
  replay-switch  print the per-tick beam-selection trace as CSV

Exit codes: 0 success, 2 configuration problem, 3 numeric failure during a
run.  SKYBEAM_OUT, when set, provides the default parent directory for run
output.
"""

import argparse
import csv
import os
import sys

from .harness import (
    NumericError,
    SUMMARY_METRICS,
    compare_modes,
    read_summary_toml,
    replay_switch,
    run_scenario,
    write_summary_toml,
    write_ticks_csv,
)
from .scenario import MODES, MODE_DIRECTIONAL, ConfigError, load_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

OUT_DIR_ENV = "SKYBEAM_OUT"

TICKS_FILENAME = "ticks.csv"
SUMMARY_FILENAME = "summary.toml"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skybeam",
        description="Simulate a cellular-connected UAV with a switched "
                    "directional antenna array.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scenario file")
    run.add_argument("--scenario", required=True, help="scenario TOML file")
    run.add_argument("--out", default=os.environ.get(OUT_DIR_ENV),
                     help=f"output directory (default: ${OUT_DIR_ENV})")
    run.add_argument("--mode", choices=MODES,
                     help="override the antenna mode in the scenario file")
    run.add_argument("--altitude", type=float,
                     help="override the flight altitude in metres")

    comp = sub.add_parser("compare", help="compare two run directories")
    comp.add_argument("--a", required=True, help="first run directory")
    comp.add_argument("--b", required=True, help="second run directory")

    replay = sub.add_parser("replay-switch",
                            help="print per-tick beam-selection decisions")
    replay.add_argument("--scenario", required=True, help="scenario TOML file")
    replay.add_argument("--altitude", type=float,
                        help="override the flight altitude in metres")
    return parser


def _cmd_run(args) -> int:
    if not args.out:
        raise ConfigError(
            f"no output directory: pass --out or set ${OUT_DIR_ENV}"
        )
    config = load_scenario(args.scenario, mode=args.mode,
                           altitude_m=args.altitude)
    records, summary = run_scenario(config)
    os.makedirs(args.out, exist_ok=True)
    ticks_path = os.path.join(args.out, TICKS_FILENAME)
    summary_path = os.path.join(args.out, SUMMARY_FILENAME)
    write_ticks_csv(records, ticks_path)
    write_summary_toml(summary, summary_path)
    print(f"wrote {ticks_path} ({summary.n_ticks} ticks)")
    print(f"wrote {summary_path}")
    print(
        f"scenario={summary.scenario} mode={summary.mode} "
        f"altitude={summary.altitude_m:g} m "
        f"handovers={summary.handover_count} switches={summary.switch_count} "
        f"median_rsrp={summary.medians['rsrp_dbm']:.2f} dBm"
    )
    return EXIT_OK


def _read_run_dir(path) -> "RunSummary":
    summary_path = os.path.join(path, SUMMARY_FILENAME)
    try:
        return read_summary_toml(summary_path)
    except OSError as exc:
        raise ConfigError(f"cannot read {summary_path}: {exc}") from exc
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"malformed summary {summary_path}: {exc}") from exc


def _cmd_compare(args) -> int:
    summary_a = _read_run_dir(args.a)
    summary_b = _read_run_dir(args.b)
    try:
        report = compare_modes(summary_a, summary_b)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    first = summary_a if summary_a.mode == report.mode_a else summary_b
    second = summary_b if first is summary_a else summary_a
    print(f"scenario={report.scenario} altitude={report.altitude_m:g} m")
    print(f"{'metric':<14}{report.mode_a:>14}{report.mode_b:>14}{'delta':>12}")
    for name in SUMMARY_METRICS:
        print(
            f"{name:<14}{first.medians[name]:>14.3f}"
            f"{second.medians[name]:>14.3f}"
            f"{report.median_delta[name]:>12.3f}"
        )
    print(
        f"handovers: {report.mode_a}={report.handover_counts[report.mode_a]} "
        f"{report.mode_b}={report.handover_counts[report.mode_b]}"
    )
    print(
        f"switches: {report.mode_a}={report.switch_counts[report.mode_a]} "
        f"{report.mode_b}={report.switch_counts[report.mode_b]}"
    )
    return EXIT_OK


REPLAY_FIELDS = (
    "time", "east", "north", "serving_cell_id",
    "relative_bearing_deg", "antenna_index", "switched",
)


def _cmd_replay(args) -> int:
    config = load_scenario(args.scenario, mode=MODE_DIRECTIONAL,
                           altitude_m=args.altitude)
    trace = replay_switch(config)
    writer = csv.writer(sys.stdout)
    writer.writerow(REPLAY_FIELDS)
    for row in trace:
        writer.writerow([
            repr(row.time), repr(row.east), repr(row.north),
            row.serving_cell_id, repr(row.relative_bearing_deg),
            row.antenna_index, "1" if row.switched else "0",
        ])
    switches = sum(1 for row in trace if row.switched)
    print(f"switches: {switches}", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "compare": _cmd_compare,
        "replay-switch": _cmd_replay,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
