"""Print and optionally plot the antenna gain patterns used by the simulator.

Shows the azimuth cut of a single patch face, the envelope the six-face
array presents once the best face is selected for each bearing, and the
omni reference level.  Pass --plot to save a polar figure as PNG
(requires matplotlib, which is optional).
"""

import argparse

from skybeam import AntennaArrayConfig, array_gain, omni_gain, patch_gain


def best_face_gain(config, bearing_deg):
    """Gain of the face a perfectly tracking selector would pick."""
    return max(
        array_gain(config, k, heading_deg=0.0, bearing_deg=bearing_deg,
                   elevation_deg=0.0)
        for k in range(config.n_faces)
    )


def print_azimuth_table(config):
    print(f"{'azimuth':>8} {'patch face 0':>13} {'array best':>11} "
          f"{'omni':>6}")
    for az in range(0, 360, 15):
        single = patch_gain(config.patch, az_off_deg=float(az),
                            el_off_deg=0.0)
        best = best_face_gain(config, float(az))
        omni = omni_gain(config.omni)
        print(f"{az:>7}d {single:>12.2f} {best:>11.2f} {omni:>6.2f}")


def print_elevation_cut(config):
    print(f"\n{'elevation':>9} {'patch gain':>11}")
    for el in range(-60, 61, 10):
        g = patch_gain(config.patch, az_off_deg=0.0, el_off_deg=float(el))
        print(f"{el:>8}d {g:>11.2f}")


def save_polar_plot(config, path):
    import math

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    azimuths = [a / 2.0 for a in range(720)]
    single = [patch_gain(config.patch, az, 0.0) for az in azimuths]
    best = [best_face_gain(config, az) for az in azimuths]
    omni = [omni_gain(config.omni) for _ in azimuths]
    theta = [math.radians(a) for a in azimuths]

    fig, ax = plt.subplots(subplot_kw={"projection": "polar"})
    ax.plot(theta, single, label="single patch face")
    ax.plot(theta, best, label="array, best face")
    ax.plot(theta, omni, linestyle="--", label="omni reference")
    ax.set_theta_zero_location("N")
    ax.set_theta_direction(-1)
    ax.set_title("Azimuth gain (dBi)")
    ax.legend(loc="lower left", bbox_to_anchor=(1.0, 0.0))
    fig.savefig(path, dpi=150, bbox_inches="tight")
    print(f"\nsaved {path}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--plot", metavar="PNG", default=None,
                        help="save a polar plot to this file")
    args = parser.parse_args()

    config = AntennaArrayConfig()
    print(f"faces: {config.n_faces} at "
          f"{', '.join(f'{a:g}d' for a in config.face_azimuths)}")
    print(f"patch: {config.patch.peak_gain_dbi} dBi peak, "
          f"{config.patch.hpbw_az_deg:g}/{config.patch.hpbw_el_deg:g}d HPBW, "
          f"{config.patch.front_to_back_db:g} dB front-to-back")
    print(f"omni:  {config.omni.gain_dbi} dBi\n")

    print_azimuth_table(config)
    print_elevation_cut(config)

    if args.plot:
        save_polar_plot(config, args.plot)


if __name__ == "__main__":
    main()
