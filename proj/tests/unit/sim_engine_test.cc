// Copyright 2026 The awe-takeoff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "awe/sim_engine.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "awe/telemetry.hpp"

namespace awe {
namespace {

Scenario Nominal(double duration) {
  Scenario s = paper_nominal_scenario();
  s.sim.duration = duration;
  return s;
}

double EndPositionChange(const Scenario &a, const Scenario &b) {
  const RunResult ra = run_scenario(a), rb = run_scenario(b);
  const Vec3 pa = ra.telemetry.back().aircraft.position, pb = rb.telemetry.back().aircraft.position;
  return (pa - pb).norm() / (pa - a.station_origin).norm();
}

TEST(InjectDisturbance, ZeroOutsideWindows) {
  DisturbanceConfig c;
  c.forced_impulses = true;
  const DisturbanceSchedule s(c, {}, 120.0, 0.02, 1);
  const DisturbanceInputs d = inject_disturbance(s, 10.0);
  EXPECT_EQ(d.d_roll, 0.0);
  EXPECT_EQ(d.d_pitch, 0.0);
  EXPECT_EQ(d.d_airspeed_force, 0.0);
  EXPECT_EQ(d.tether_force, 0.0);
  ASSERT_FALSE(s.impulses().empty());
  const ImpulseEvent &first = s.impulses().front();
  EXPECT_EQ(s.impulse_at(first.start - 1e-3), 0.0);
  EXPECT_EQ(s.impulse_at(first.start + first.duration + 1e-3), 0.0);
}

TEST(InjectDisturbance, HalfSinePulsesWithinConfiguredBands) {
  DisturbanceConfig c;
  c.forced_impulses = true;
  const DisturbanceSchedule s(c, {}, 120.0, 0.02, 7);
  EXPECT_GT(s.impulses().size(), 10u);
  double prev_start = 0.0;
  for (const ImpulseEvent &e : s.impulses()) {
    EXPECT_GE(e.start, c.impulse_start);
    EXPECT_GE(e.peak, 3.0);
    EXPECT_LE(e.peak, 8.0);
    EXPECT_GE(e.duration, 0.3);
    EXPECT_LE(e.duration, 0.7);
    if (prev_start > 0.0) {
      EXPECT_GE(e.start - prev_start, 3.0 - 1e-12);
      EXPECT_LE(e.start - prev_start, 6.0 + 1e-12);
    }
    prev_start = e.start;
    EXPECT_NEAR(s.impulse_at(e.start + 0.5 * e.duration), e.peak, 1e-12);
    EXPECT_NEAR(s.impulse_at(e.start + 0.25 * e.duration), e.peak * std::sin(0.25 * kPi), 1e-12);
    EXPECT_NEAR(inject_disturbance(s, e.start + 0.5 * e.duration).tether_force, e.peak, 1e-12);
  }
}

TEST(InjectDisturbance, SameSeedSameDraws) {
  DisturbanceConfig c;
  c.forced_impulses = true;
  c.roll_noise_std = 0.5;
  WindVector w;
  w.gust.noise_std = 0.4;
  const DisturbanceSchedule a(c, w, 60.0, 0.02, 3), b(c, w, 60.0, 0.02, 3), other(c, w, 60.0, 0.02, 4);
  bool differs = false;
  for (double t = 0.0; t < 60.0; t += 0.37) {
    EXPECT_EQ(a.at(t).d_roll, b.at(t).d_roll);
    EXPECT_EQ(a.wind_at(t).x, b.wind_at(t).x);
    EXPECT_EQ(a.impulse_at(t), b.impulse_at(t));
    differs = differs || a.at(t).d_roll != other.at(t).d_roll;
  }
  EXPECT_TRUE(differs);
}

TEST(InjectDisturbance, BandLimitedNoiseHasConfiguredSpread) {
  DisturbanceConfig c;
  c.roll_noise_std = 0.5;
  const DisturbanceSchedule s(c, {}, 2000.0, 0.02, 11);
  double sum = 0.0, sq = 0.0;
  int n = 0;
  for (double t = 0.0; t < 2000.0; t += 0.02, ++n) {
    const double v = s.at(t).d_roll;
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 0.5, 0.1);
}

TEST(Simulator, AtRestBeforeLaunch) {
  Simulator sim(Nominal(10.0));
  const AircraftState start = sim.aircraft();
  for (int i = 0; i < 45; ++i) {
    const TelemetrySample row = sim.step();
    EXPECT_EQ(row.mode, FlightMode::kOnSlide);
    EXPECT_EQ(row.inputs.thrust, 0.0);
  }
  EXPECT_EQ(sim.aircraft().position.x, start.position.x);
  EXPECT_EQ(sim.aircraft().airspeed, start.airspeed);
  EXPECT_NEAR(sim.time(), 0.9, 1e-12);
}

TEST(Simulator, LaunchTickSwitchesToClimbWithFullThrust) {
  Simulator sim(Nominal(3.0));
  TelemetrySample row;
  do {
    row = sim.step();
  } while (row.forward_accel < 20.0 && !sim.finished());
  EXPECT_EQ(row.mode, FlightMode::kClimbOut);
  EXPECT_EQ(row.inputs.thrust, 20.0);
  EXPECT_EQ(row.refs.pitch, 0.69);
}

TEST(Simulator, InvalidScenarioThrows) {
  Scenario s = paper_nominal_scenario();
  s.controller.min_turn_radius = -5.0;
  EXPECT_THROW(Simulator{s}, ScenarioInvalid);
  EXPECT_THROW(run_scenario(s), ScenarioInvalid);
}

TEST(Simulator, PhaseEventsHappenOnce) {
  const RunResult r = run_scenario(Nominal(60.0));
  int launches = 0, transitions = 0;
  for (size_t i = 1; i < r.telemetry.size(); ++i) {
    const FlightMode a = r.telemetry[i - 1].mode, b = r.telemetry[i].mode;
    ASSERT_GE(static_cast<int>(b), static_cast<int>(a));
    launches += a == FlightMode::kOnSlide && b != FlightMode::kOnSlide;
    transitions += a != FlightMode::kFigureEight && b == FlightMode::kFigureEight;
  }
  EXPECT_EQ(launches, 1);
  EXPECT_EQ(transitions, 1);
}

TEST(Simulator, TetherDetachNearDrumEnd) {
  Scenario s = Nominal(60.0);
  s.ground.tether_max_length = 70.0;
  const RunResult r = run_scenario(s);
  EXPECT_EQ(r.metrics.status, RunStatus::kCompleted);
  ASSERT_GE(r.metrics.detach_time, 0.0);
  for (const TelemetrySample &row : r.telemetry) {
    if (row.t > r.metrics.detach_time + 1e-9) {
      ASSERT_FALSE(row.tether_connected);
      ASSERT_EQ(row.tether_force, 0.0);
    }
  }
}

TEST(Simulator, SensorFaultEndsRun) {
  Scenario s = Nominal(30.0);
  s.controller.max_attitude = 0.05;
  const RunResult r = run_scenario(s);
  EXPECT_EQ(r.metrics.status, RunStatus::kSensorFault);
  EXPECT_LT(r.telemetry.back().t, 30.0);
  EXPECT_EQ(r.telemetry.back().safety, SafetyStatus::kSensorFault);
}

TEST(Simulator, DecimationKeepsEveryNthTick) {
  Scenario s = Nominal(10.0);
  s.sim.decimation = 5;
  const RunResult r = run_scenario(s);
  ASSERT_EQ(r.telemetry.size(), 101u);
  EXPECT_NEAR(r.telemetry[1].t, 0.1, 1e-12);
}

TEST(Simulator, SubstepsMatchFinePlantStep) {
  Scenario s = Nominal(10.0);
  s.sim.dt = 0.005;
  const RunResult r = run_scenario(s);
  EXPECT_EQ(r.telemetry.size(), 501u);
  EXPECT_EQ(r.metrics.status, RunStatus::kCompleted);
}

TEST(Simulator, Deterministic) {
  Scenario s = Nominal(40.0);
  s.sim.noise.enabled = true;
  s.disturbance.forced_impulses = true;
  EXPECT_EQ(run_scenario(s).metrics.telemetry_hash, run_scenario(s).metrics.telemetry_hash);
}

// Order-of-accuracy smoke test on the full nominal mission.
TEST(Integrators, HalvingTheStepBarelyMovesTheEndPoint) {
  const Scenario coarse = Nominal(120.0);
  Scenario fine = coarse;
  fine.sim.dt = 0.01;
  EXPECT_LT(EndPositionChange(coarse, fine), 0.01);
}

// Euler's first-order error shifts the lap period by a fraction of a percent,
// which accumulates as phase drift along the periodic orbit. The end points
// are compared over the take-off and the first turns, and the orbit itself
// through its period and tracking errors.
TEST(Integrators, EulerAgreesWithRk4) {
  Scenario rk4 = Nominal(20.0);
  Scenario euler = rk4;
  euler.sim.integrator = Integrator::kEuler;
  EXPECT_LT(EndPositionChange(rk4, euler), 0.02);

  rk4.sim.duration = euler.sim.duration = 120.0;
  const RunMetrics a = run_scenario(rk4).metrics, b = run_scenario(euler).metrics;
  EXPECT_TRUE(b.converged_to_periodic);
  EXPECT_NEAR(b.eight_period / a.eight_period, 1.0, 0.02);
  EXPECT_NEAR(b.transition_time, a.transition_time, 0.02 * a.transition_time);
  EXPECT_NEAR(b.altitude_max_error, a.altitude_max_error, 0.5);
}

TEST(Metrics, NominalMission) {
  const RunResult r = run_scenario(Nominal(120.0));
  const RunMetrics &m = r.metrics;
  EXPECT_EQ(m.status, RunStatus::kCompleted);
  EXPECT_GT(m.time_to_safe_altitude, 0.0);
  EXPECT_EQ(m.transition_target, 2);
  EXPECT_TRUE(m.converged_to_periodic);
  EXPECT_LT(m.periodic_since, 60.0);
  EXPECT_LE(m.altitude_max_error, 4.0);
  EXPECT_EQ(m.slack_force_product_max, 0.0);
  EXPECT_LE(m.taut_peak_force, 9.6);
  EXPECT_GT(m.taut_events, 0);
  EXPECT_EQ(m.stall_warning_samples, 0);
  EXPECT_EQ(m.detach_time, -1.0);
}

TEST(Metrics, RecomputedFromTelemetry) {
  const Scenario s = Nominal(60.0);
  Simulator sim(s);
  std::vector<TelemetrySample> rows;
  while (!sim.finished()) rows.push_back(sim.step());
  const RunMetrics m = compute_metrics(rows, s, sim.disturbances());
  const RunResult r = run_scenario(s);
  EXPECT_EQ(m.laps.size(), r.metrics.laps.size());
  EXPECT_EQ(m.transition_time, r.metrics.transition_time);
  EXPECT_EQ(telemetry_hash(rows), r.metrics.telemetry_hash);
}

}  // namespace
}  // namespace awe
