"""Run one scenario with the switched array and with the omni antenna.

Prints the paired median link metrics side by side plus handover and
switch counts, which is the quickest way to see what the array buys on
a given route.  Pass --plot to save serving RSRP over time for both
runs with handover instants marked (requires matplotlib).
"""

import argparse
from pathlib import Path

from skybeam import compare_modes, load_scenario, run_scenario

DEFAULT_SCENARIO = (Path(__file__).resolve().parent.parent
                    / "scenarios" / "corridor.toml")

LABELS = {
    "rsrp_dbm": "RSRP (dBm)",
    "rsrq_db": "RSRQ (dB)",
    "sinr_dl_db": "DL SINR (dB)",
    "ul_tx_dbm": "UL tx (dBm)",
    "ul_sinr_db": "UL SINR (dB)",
    "ul_tput_mbps": "UL tput (Mbit/s)",
}


def print_table(report, dir_summary, omni_summary):
    print(f"{'metric':<18} {'directional':>12} {'omni':>12} {'delta':>8}")
    for key, label in LABELS.items():
        print(f"{label:<18} {dir_summary.medians[key]:>12.3f} "
              f"{omni_summary.medians[key]:>12.3f} "
              f"{report.median_delta[key]:>8.3f}")
    print(f"{'handovers':<18} {report.handover_counts['directional']:>12} "
          f"{report.handover_counts['omni']:>12}")
    print(f"{'switches':<18} {report.switch_counts['directional']:>12} "
          f"{report.switch_counts['omni']:>12}")


def save_rsrp_plot(dir_records, omni_records, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4))
    for records, label in ((dir_records, "directional"),
                           (omni_records, "omni")):
        ax.plot([r.time for r in records],
                [r.rsrp_dbm for r in records], label=label)
        for r in records:
            if r.handover_flag:
                ax.axvline(r.time, linestyle=":", linewidth=0.8,
                           color="gray")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("serving RSRP (dBm)")
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    print(f"saved {path}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", type=Path, default=DEFAULT_SCENARIO)
    parser.add_argument("--altitude", type=float, default=None,
                        help="override flight altitude in meters")
    parser.add_argument("--plot", metavar="PNG", default=None)
    args = parser.parse_args()

    dir_records, dir_summary = run_scenario(
        load_scenario(args.scenario, mode="directional",
                      altitude_m=args.altitude))
    omni_records, omni_summary = run_scenario(
        load_scenario(args.scenario, mode="omni", altitude_m=args.altitude))
    report = compare_modes(dir_summary, omni_summary)

    print(f"scenario: {dir_summary.scenario}  "
          f"altitude: {dir_summary.altitude_m:g} m  "
          f"ticks: {dir_summary.n_ticks}")
    print_table(report, dir_summary, omni_summary)

    if args.plot:
        save_rsrp_plot(dir_records, omni_records, args.plot)


if __name__ == "__main__":
    main()
