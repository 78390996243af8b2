# Copyright 2026 The awe-takeoff Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import awe_takeoff as awe


def test_gains_match_worked_example():
    k_e, k_e_dot = awe.gains(-2.3, 12.6, -2.7, -3.1)
    assert k_e == pytest.approx(0.66429, abs=5e-6)
    assert k_e_dot == pytest.approx(0.27778, abs=5e-6)
    poles = sorted(p.real for p in awe.closed_loop_eigenvalues(-2.3, 12.6, k_e, k_e_dot))
    assert poles == pytest.approx([-3.1, -2.7], rel=1e-9)


def test_gain_errors_are_typed():
    with pytest.raises(awe.ZeroGain):
        awe.gains(-2.3, 0.0, -2.7, -3.1)
    with pytest.raises(awe.UnstableRequest):
        awe.gains(-2.3, 12.6, 1.0, -3.1)
    assert issubclass(awe.ZeroGain, awe.AweError)


def test_scenario_overrides_and_validation():
    text = awe.scenario_text(sim__duration=30.0, controller__R_min=25)
    assert "sim.duration = 30" in text
    assert "controller.R_min = 25" in text
    with pytest.raises(awe.ValidationError, match="controller.R_min"):
        awe.scenario_text(controller__R_min=-5)
    with pytest.raises(awe.ParseError):
        awe.normalize_scenario("sim.no_such_key = 1\n")


def test_short_simulation_returns_metrics_and_columns():
    metrics, telemetry = awe.simulate(sim__duration=10.0)
    assert metrics["status"] == "completed"
    assert metrics["rows"] == 501
    assert len(telemetry["t"]) == 501
    assert telemetry["mode"][0] == "on_slide"
    assert metrics["release_speed"] == pytest.approx(9.0)
    assert max(telemetry["z"]) > 20.0


def test_nominal_mission_is_periodic_and_repeatable():
    first, _ = awe.simulate()
    second, _ = awe.simulate()
    assert first["converged_to_periodic"] is True
    assert first["periodic_since"] <= 60.0
    assert first["altitude_max_error"] <= 4.0
    assert first["telemetry_hash"] == second["telemetry_hash"]


def test_identify_round_trip():
    data = awe.synthetic_dataset()
    result = awe.identify(data["angle"], data["rate"], data["reference"], a_bounds=(-10.0, -0.1),
                          b_bounds=(1.0, 30.0))
    assert result["converged"]
    assert result["a"] == pytest.approx(-2.3, rel=1e-3)
    assert result["b"] == pytest.approx(12.6, rel=1e-3)


def test_identify_flat_cost_on_zero_data():
    zeros = [0.0] * 100
    result = awe.identify(zeros, zeros, zeros)
    assert result["flat_cost"]
    assert not result["converged"]
    assert math.isfinite(result["cost"])
