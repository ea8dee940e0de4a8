"""Trace which antenna face serves along a flight path.

Replays the face-selection logic tick by tick for a scenario with the
array enabled, prints every switch event, and draws an ASCII strip of
the face index over time.  Pass --plot to save the flight path colored
by selected face (requires matplotlib).
"""

import argparse
from pathlib import Path

from skybeam import load_scenario, replay_switch

DEFAULT_SCENARIO = (Path(__file__).resolve().parent.parent
                    / "scenarios" / "replay_dogleg.toml")


def print_switches(trace):
    print(f"{'time':>7} {'east':>8} {'north':>8} {'bearing':>8} "
          f"{'face':>4}")
    for row in trace:
        if row.switched:
            print(f"{row.time:>7.1f} {row.east:>8.1f} "
                  f"{row.north:>8.1f} {row.relative_bearing_deg:>7.1f}d "
                  f"{row.antenna_index:>4}")
    total = sum(row.switched for row in trace)
    print(f"switches: {total} over {len(trace)} ticks")


def print_strip(trace, width=72):
    """One character per bucket of ticks, showing the face index."""
    if len(trace) <= width:
        step = 1
    else:
        step = (len(trace) + width - 1) // width
    chars = [str(trace[i].antenna_index) for i in range(0, len(trace), step)]
    print("\nface over time (left = start):")
    print("".join(chars))


def save_path_plot(trace, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    scatter = ax.scatter([r.east for r in trace],
                         [r.north for r in trace],
                         c=[r.antenna_index for r in trace],
                         cmap="tab10", vmin=0, vmax=9, s=6)
    ax.plot(0.0, 0.0, marker="^", color="black", markersize=10,
            linestyle="none", label="serving site")
    ax.set_xlabel("east (m)")
    ax.set_ylabel("north (m)")
    ax.set_aspect("equal")
    ax.legend()
    fig.colorbar(scatter, label="antenna face")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    print(f"saved {path}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", type=Path, default=DEFAULT_SCENARIO)
    parser.add_argument("--plot", metavar="PNG", default=None)
    args = parser.parse_args()

    config = load_scenario(args.scenario, mode="directional")
    trace = replay_switch(config)

    print(f"scenario: {config.name}")
    print_switches(trace)
    print_strip(trace)

    if args.plot:
        save_path_plot(trace, args.plot)


if __name__ == "__main__":
    main()
