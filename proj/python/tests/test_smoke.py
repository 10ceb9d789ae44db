# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The emfbf Authors

import math

import numpy as np
import pytest

import emfbf


def test_pattern_points():
    assert emfbf.element_gain_azimuth_db(0.0) == pytest.approx(0.0)
    assert emfbf.element_gain_azimuth_db(65.0) == pytest.approx(-12.0)
    assert emfbf.element_gain_azimuth_db(180.0) == pytest.approx(-30.0)
    assert emfbf.element_gain_db(90.0, 0.0) == pytest.approx(8.0)


def test_waterfill_two_layers():
    power, mu = emfbf.waterfill([4.0, 1.0], [1.0, 1.0], 1.0, 1.0)
    assert power == pytest.approx([0.875, 0.125])
    assert mu == pytest.approx(8.0 / 9.0)


def test_snapshot_pipeline():
    scenario = emfbf.build_scenario(seed=3)
    assert scenario.antennas == 128
    assert scenario.layers == 8
    h = scenario.channel()
    assert h.shape == (16, 128)
    assert np.all(np.isfinite(h))

    result = emfbf.evaluate_snapshot(scenario)
    names = [s["scheme"] for s in result["schemes"]]
    assert names == ["reference", "reduced", "enhanced", "dual_gd"]
    ref = result["schemes"][0]
    assert ref["transmit_power_w"] == pytest.approx(200.0)
    tau = 1e-3
    for s in result["schemes"][1:]:
        assert s["max_sampled_power_w"] <= scenario.emf_threshold_w + tau
        assert s["capacity_bps"] <= ref["capacity_bps"] * (1 + 1e-12)


def test_scenario_round_trip():
    scenario = emfbf.build_scenario({"ue": {"count": 2}}, seed=5)
    again = emfbf.Scenario.from_json(scenario.to_json())
    assert again.to_json() == scenario.to_json()


def test_observation_free_space():
    scenario = emfbf.build_scenario({"pattern": {"mode": "isotropic"}}, seed=1)
    q = np.array([[50.0, 0.0, 25.0]])
    row = scenario.observation(q)
    assert row.shape == (1, 128)
    lam = 299792458.0 / 3.5e9
    assert abs(row[0, 0]) == pytest.approx(lam / (4 * math.pi * 50.0), rel=1e-3)


def test_invalid_config_raises():
    with pytest.raises(emfbf.InvalidConfig):
        emfbf.build_scenario({"ue": {"count": 0}})
    with pytest.raises(emfbf.InvalidConfig):
        emfbf.build_scenario({"bogus": 1})


def test_monte_carlo_small():
    report = emfbf.monte_carlo(users=[3], samples=2, seed=1, workers=1)
    assert len(report["samples"]) == 2
    agg = {a["scheme"]: a for a in report["aggregates"]}
    assert agg["reference"]["mean_loss_pct"] == pytest.approx(0.0)
