import math

import pytest

from skybeam.deployment import (
    ChannelParams,
    Deployment,
    Sector,
    SectorPattern,
    Tower,
    link_budget,
    link_rsrp,
    pathloss,
    per_re_tx_power,
    sector_gain,
    shadow_fading_db,
)
from skybeam.geokin import EnuPosition, UAVState

LOS = ChannelParams()


def _sector(**overrides):
    base = dict(
        cell_id=1,
        position=EnuPosition(0.0, 1000.0, 30.0),
        azimuth_deg=180.0,
    )
    base.update(overrides)
    return Sector(**base)


def test_free_space_reference():
    # 32.45 + 20 log10(d_km) + 20 log10(f_MHz) at 1 km, 1800 MHz.
    assert pathloss(1000.0, 1800.0, 30.0, 100.0, LOS) == pytest.approx(
        97.55545010206612, abs=1e-12
    )


def test_pathloss_distance_slope():
    near = pathloss(1000.0, 1800.0, 30.0, 100.0, LOS)
    far = pathloss(2000.0, 1800.0, 30.0, 100.0, LOS)
    assert far - near == pytest.approx(20.0 * math.log10(2.0), abs=1e-12)


def test_pathloss_rejects_zero_distance():
    with pytest.raises(ValueError):
        pathloss(0.0, 1800.0, 30.0, 0.0, LOS)


def test_clutter_excess_below_rooftop_beyond_cutoff():
    # 10 m below the rooftop line, past the cutoff: 1 dB per metre deficit.
    base = pathloss(1000.0, 1800.0, 30.0, 600.0, LOS)
    low = pathloss(1000.0, 1800.0, 20.0, 600.0, LOS)
    assert low - base == pytest.approx(10.0, abs=1e-12)


def test_clutter_excess_needs_both_conditions():
    # Below rooftop but inside the cutoff: free space.
    near = pathloss(1000.0, 1800.0, 10.0, 400.0, LOS)
    assert near == pytest.approx(97.55545010206612, abs=1e-12)
    # Beyond the cutoff but above the rooftop: free space.
    high = pathloss(1000.0, 1800.0, 45.0, 600.0, LOS)
    assert high == pytest.approx(97.55545010206612, abs=1e-12)


def test_clutter_excess_never_negative():
    # Flying above the rooftop cannot reduce loss below free space.
    assert pathloss(1000.0, 1800.0, 80.0, 600.0, LOS) == pathloss(
        1000.0, 1800.0, 30.0, 600.0, LOS
    )


def test_sector_gain_boresight_and_tilt_cut():
    pattern = SectorPattern()
    assert sector_gain(pattern, 0.0, 0.0) == 15.0
    assert sector_gain(pattern, 32.5, 0.0) == pytest.approx(12.0, abs=1e-12)
    assert sector_gain(pattern, 0.0, 5.0) == pytest.approx(12.0, abs=1e-12)
    assert sector_gain(pattern, 180.0, 0.0) == pytest.approx(-15.0, abs=1e-12)


def test_per_re_power_split():
    sector = _sector()
    # 46 dBm over 50 RB * 12 RE.
    assert per_re_tx_power(sector) == pytest.approx(18.218487496163565, abs=1e-12)


def test_link_budget_geometry():
    # UAV 1 km due south of the tower at the same height as the antenna,
    # sector facing it: azimuth offset 0, elevation offset = downtilt.
    sector = _sector()
    uav = EnuPosition(0.0, 0.0, 30.0)
    budget = link_budget(sector, uav, LOS)
    assert budget.pathloss_db == pytest.approx(97.55545010206612, abs=1e-12)
    assert budget.sector_gain_dbi == pytest.approx(10.68, abs=1e-12)
    assert budget.uav_to_bs.bearing == 0.0
    assert budget.uav_to_bs.elevation == 0.0


def test_link_rsrp_boresight_value():
    sector = _sector()
    uav = UAVState(EnuPosition(0.0, 0.0, 30.0), heading=0.0)
    rsrp = link_rsrp(sector, uav, 6.4, LOS)
    expected = 18.218487496163565 + 10.68 + 6.4 - 97.55545010206612
    assert rsrp == pytest.approx(expected, abs=1e-12)
    # Port gain enters linearly.
    assert link_rsrp(sector, uav, 2.0, LOS) == pytest.approx(
        expected - 4.4, abs=1e-12
    )


def test_link_rsrp_shadowing_offsets_directly():
    sector = _sector()
    uav = UAVState(EnuPosition(0.0, 0.0, 30.0), heading=0.0)
    clear = link_rsrp(sector, uav, 2.0, LOS)
    faded = link_rsrp(sector, uav, 2.0, LOS, shadow_db=3.25)
    assert clear - faded == pytest.approx(3.25, abs=1e-12)


def test_shadow_fading_reference_draws():
    # Frozen values for the keyed generator: one block per (seed, cell),
    # mapped through the inverse normal CDF.
    assert shadow_fading_db(42, 7, 1.0) == pytest.approx(
        -0.23420310042487286, abs=1e-9
    )
    assert shadow_fading_db(42, 8, 1.0) == pytest.approx(
        0.3563577725793429, abs=1e-9
    )
    assert shadow_fading_db(7, 7, 1.0) == pytest.approx(
        -0.5618624089344003, abs=1e-9
    )


def test_shadow_fading_scales_with_sigma():
    one = shadow_fading_db(42, 7, 1.0)
    assert shadow_fading_db(42, 7, 6.0) == pytest.approx(6.0 * one, abs=1e-12)
    assert shadow_fading_db(42, 7, 0.0) == 0.0


def test_shadow_fading_is_stateless():
    draws = [shadow_fading_db(42, 7, 2.5) for _ in range(3)]
    assert draws[0] == draws[1] == draws[2]
    # Different cells decorrelate.
    assert shadow_fading_db(42, 7, 2.5) != shadow_fading_db(42, 8, 2.5)


def test_shadow_fading_distribution_is_standard_normal():
    draws = [shadow_fading_db(1, cell, 1.0) for cell in range(2000)]
    mean = sum(draws) / len(draws)
    var = sum((d - mean) ** 2 for d in draws) / len(draws)
    assert abs(mean) < 0.08
    assert abs(var - 1.0) < 0.1


def test_tower_expansion_numbers_cells_tower_major():
    deployment = Deployment.from_towers([
        Tower(EnuPosition(0.0, 0.0, 30.0)),
        Tower(EnuPosition(0.0, 700.0, 30.0), azimuths_deg=(90.0,)),
    ])
    ids = [s.cell_id for s in deployment.sectors]
    assert ids == [1, 2, 3, 4]
    assert [s.azimuth_deg for s in deployment.sectors] == [0.0, 120.0, 240.0, 90.0]
    assert deployment.by_id(4).position == EnuPosition(0.0, 700.0, 30.0)
    with pytest.raises(KeyError):
        deployment.by_id(99)


def test_deployment_rejects_duplicate_ids():
    a = _sector(cell_id=1)
    b = _sector(cell_id=1, azimuth_deg=0.0)
    with pytest.raises(ValueError):
        Deployment((a, b))


def test_channel_params_validation():
    with pytest.raises(ValueError):
        ChannelParams(shadowing_sigma_db=-1.0)
    with pytest.raises(ValueError):
        ChannelParams(nlos_slope_db_per_m=-0.5)
