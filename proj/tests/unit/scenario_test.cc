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

#include "awe/scenario.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace awe {
namespace {

std::string ValidationKey(const std::string &text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError &e) {
    return e.key();
  }
  return "";
}

TEST(ParseScenario, EmptyFileIsTheNominalMission) {
  const Scenario s = parse_scenario("");
  EXPECT_EQ(serialize_scenario(s), serialize_scenario(paper_nominal_scenario()));
  EXPECT_EQ(s.name, "paper-nominal");
  EXPECT_EQ(s.defaulted.size(), scenario_keys().size());
}

TEST(ParseScenario, ValidationNamesKey) {
  EXPECT_EQ(ValidationKey("controller.R_min = -5\n"), "controller.R_min");
  EXPECT_EQ(ValidationKey("model.mass = 0\n"), "model.mass");
  EXPECT_EQ(ValidationKey("ground.zone_high = 0.01\n"), "ground.zone_high");
  EXPECT_EQ(ValidationKey("sim.dt = 0.015\n"), "sim.dt");
  EXPECT_EQ(ValidationKey("ground.control_period = 0.04\n"), "ground.control_period");
}

TEST(ParseScenario, MalformedInput) {
  EXPECT_THROW(parse_scenario("model.b_roll 12.6\n"), ParseError);
  EXPECT_THROW(parse_scenario("model.no_such_key = 1\n"), ParseError);
  EXPECT_THROW(parse_scenario("model.b_roll = 12.6\nmodel.b_roll = 12.7\n"), ParseError);
  EXPECT_THROW(parse_scenario("model.b_roll = twelve\n"), ParseError);
  EXPECT_THROW(parse_scenario("model.b_roll =\n"), ParseError);
  EXPECT_THROW(parse_scenario("controller.target_1 = 1, 2\n"), ParseError);
  EXPECT_THROW(parse_scenario("sim.integrator = midpoint\n"), ParseError);
  EXPECT_THROW(parse_scenario("sim.noise = maybe\n"), ParseError);
}

TEST(ParseScenario, CommentsBlankLinesAndDefaultsProvenance) {
  const Scenario s = parse_scenario("# header\n\n  model.b_roll = 11.0  \nscenario.name = trial\n");
  EXPECT_EQ(s.model.b_roll, 11.0);
  EXPECT_EQ(s.name, "trial");
  EXPECT_EQ(std::count(s.defaulted.begin(), s.defaulted.end(), "model.b_roll"), 0);
  EXPECT_EQ(std::count(s.defaulted.begin(), s.defaulted.end(), "model.a_roll"), 1);
  EXPECT_EQ(s.defaulted.size(), scenario_keys().size() - 2);
}

TEST(SerializeScenario, RoundTrip) {
  const Scenario s = parse_scenario("model.b_roll = 12.6\n");
  const Scenario back = parse_scenario(serialize_scenario(s));
  EXPECT_EQ(back.model.b_roll, 12.6);
  EXPECT_EQ(serialize_scenario(back), serialize_scenario(s));
  EXPECT_TRUE(back.defaulted.empty());
}

TEST(SerializeScenario, RoundTripIsLosslessForAwkwardValues) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  for (int i = 0; i < 50; ++i) {
    Scenario s = paper_nominal_scenario();
    s.model.b_roll *= jitter(rng);
    s.model.a_roll *= jitter(rng);
    s.controller.k_thrust = 0.1 + jitter(rng) / 3.0;
    s.controller.target_1.x *= jitter(rng);
    s.rail_heading = 0.1 * jitter(rng) - 0.1;
    s.sim.seed = rng();
    s.wind.mean = {1.0 / 3.0, jitter(rng), 0.0};
    s.disturbance.forced_impulses = i % 2 == 0;
    s.controller.turn_policy = i % 3 == 0 ? TurnPolicy::kShortest : TurnPolicy::kEight;
    const Scenario back = parse_scenario(serialize_scenario(s));
    EXPECT_EQ(back.model.b_roll, s.model.b_roll);
    EXPECT_EQ(back.model.a_roll, s.model.a_roll);
    EXPECT_EQ(back.controller.k_thrust, s.controller.k_thrust);
    EXPECT_EQ(back.controller.target_1.x, s.controller.target_1.x);
    EXPECT_EQ(back.rail_heading, s.rail_heading);
    EXPECT_EQ(back.sim.seed, s.sim.seed);
    EXPECT_EQ(back.wind.mean.x, s.wind.mean.x);
    EXPECT_EQ(back.disturbance.forced_impulses, s.disturbance.forced_impulses);
    EXPECT_EQ(back.controller.turn_policy, s.controller.turn_policy);
    EXPECT_EQ(serialize_scenario(back), serialize_scenario(s));
  }
}

TEST(SerializeScenario, EveryKeyIsWritten) {
  const std::string text = serialize_scenario(paper_nominal_scenario());
  for (const std::string &key : scenario_keys()) {
    EXPECT_NE(text.find(key + " = "), std::string::npos) << key;
  }
}

TEST(Scenario, EffectiveControllerTakesRailAndStation) {
  const Scenario s = parse_scenario(
      "scenario.rail_heading = 0.25\nscenario.station_origin = 1, 2, 0\nground.tether_max_length = 120\n"
      "controller.target_1 = 30, 20, 50\ncontroller.target_2 = -30, 10, 50\n");
  const ControllerConfig c = s.effective_controller();
  EXPECT_EQ(c.takeoff_course, 0.25);
  EXPECT_EQ(c.station_position.x, 1.0);
  EXPECT_EQ(c.station_position.y, 2.0);
  EXPECT_EQ(c.tether_max_length, 120.0);
  EXPECT_EQ(c.gravity, s.model.gravity);
}

TEST(SimConfig, Substeps) {
  SimConfig c;
  EXPECT_EQ(c.substeps(), 1);
  c.dt = 0.005;
  EXPECT_EQ(c.substeps(), 4);
  EXPECT_NO_THROW(c.validate());
  c.dt = 0.03;
  EXPECT_THROW(c.validate(), ValidationError);
}

}  // namespace
}  // namespace awe
