"""Show how open-loop uplink power control reacts to coupling loss.

First sweeps the control law directly: below the saturation point the
transmit power tracks coupling loss one-to-one (with alpha = 1), above
it the radio pins at p_max and the received uplink starts to fade.
Then runs the cell-edge scenario in both antenna modes to show the same
effect end to end: once both radios are clamped, the array gain turns
into uplink SINR instead of transmit-power savings.
"""

import argparse
import math
from pathlib import Path

from skybeam import (
    PowerControlParams,
    ThroughputMap,
    load_scenario,
    run_scenario,
    ul_throughput,
    ul_tx_power,
)

DEFAULT_SCENARIO = (Path(__file__).resolve().parent.parent
                    / "scenarios" / "cell_edge.toml")


def print_law_sweep(params, mapping, noise_dbm):
    print(f"control law: p0={params.p0_dbm:g} dBm, alpha={params.alpha:g}, "
          f"{params.m_rb} RB grant, p_max={params.p_max_dbm:g} dBm")
    print(f"{'coupling':>9} {'tx':>7} {'rx':>8} {'sinr':>7} {'tput':>7}")
    for loss in range(80, 135, 5):
        tx = ul_tx_power(params, float(loss))
        rx = tx - loss
        sinr = rx - noise_dbm
        tput = ul_throughput(mapping, sinr, params.m_rb)
        mark = " <- clamped" if tx == params.p_max_dbm else ""
        print(f"{loss:>8}  {tx:>7.2f} {rx:>8.2f} {sinr:>7.2f} "
              f"{tput:>7.2f}{mark}")


def print_scenario_rows(scenario_path):
    runs = {}
    for mode in ("directional", "omni"):
        records, summary = run_scenario(load_scenario(scenario_path,
                                                      mode=mode))
        runs[mode] = (records, summary)
        clamped = sum(r.ul_tx_dbm >= 22.999999 for r in records)
        print(f"\n{mode}: {summary.n_ticks} ticks, {clamped} at p_max, "
              f"median UL SINR {summary.medians['ul_sinr_db']:.2f} dB, "
              f"median UL tput {summary.medians['ul_tput_mbps']:.2f} Mbit/s")

    print(f"\n{'time':>6} {'tx dir':>7} {'tx omni':>8} "
          f"{'sinr dir':>9} {'sinr omni':>10} {'gap':>6}")
    dir_records = runs["directional"][0]
    omni_records = runs["omni"][0]
    step = max(1, len(dir_records) // 8)
    for a, b in list(zip(dir_records, omni_records))[::step]:
        gap = a.ul_sinr_db - b.ul_sinr_db
        print(f"{a.time:>6.1f} {a.ul_tx_dbm:>7.2f} {b.ul_tx_dbm:>8.2f} "
              f"{a.ul_sinr_db:>9.2f} {b.ul_sinr_db:>10.2f} {gap:>6.2f}")
    return runs


def save_plot(runs, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
    for mode, (records, _) in runs.items():
        times = [r.time for r in records]
        top.plot(times, [r.ul_tx_dbm for r in records], label=mode)
        bottom.plot(times, [r.ul_sinr_db for r in records], label=mode)
    top.set_ylabel("UL tx power (dBm)")
    bottom.set_ylabel("UL SINR (dB)")
    bottom.set_xlabel("time (s)")
    top.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    print(f"saved {path}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", type=Path, default=DEFAULT_SCENARIO)
    parser.add_argument("--plot", metavar="PNG", default=None)
    args = parser.parse_args()

    config = load_scenario(args.scenario, mode="directional")
    noise_dbm = (-174.0 + config.channel.noise_figure_bs_db
                 + 10.0 * math.log10(config.power_control.m_rb * 180e3))
    print_law_sweep(config.power_control, config.throughput, noise_dbm)
    runs = print_scenario_rows(args.scenario)

    if args.plot:
        save_plot(runs, args.plot)


if __name__ == "__main__":
    main()
