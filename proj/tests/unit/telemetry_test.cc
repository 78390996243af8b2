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

#include "awe/telemetry.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "awe/scenario.hpp"
#include "awe/sim_engine.hpp"

namespace awe {
namespace {

Scenario ShortRun(double duration) {
  Scenario s = paper_nominal_scenario();
  s.sim.duration = duration;
  return s;
}

int CountLines(const std::string &text) {
  int n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

TEST(WriteTelemetry, EmptyRunIsHeaderOnly) {
  std::ostringstream out;
  EXPECT_EQ(write_telemetry(out, {}), 0u);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind(std::string("# ") + kTelemetrySchema + "\n", 0), 0u);
  EXPECT_EQ(CountLines(text), 2);
  EXPECT_NE(text.find("t,mode,target,x,y,z"), std::string::npos);
}

TEST(WriteTelemetry, TenSecondsAtFiftyHertz) {
  const RunResult r = run_scenario(ShortRun(10.0));
  std::ostringstream out;
  EXPECT_EQ(write_telemetry(out, r.telemetry), 501u);
  EXPECT_EQ(r.metrics.rows, 501u);
  EXPECT_EQ(r.telemetry.front().t, 0.0);
  EXPECT_NEAR(r.telemetry.back().t, 10.0, 1e-9);
}

TEST(WriteTelemetry, SameSeedSameBytes) {
  Scenario s = ShortRun(20.0);
  s.sim.noise.enabled = true;
  s.disturbance.roll_noise_std = 0.3;
  const RunResult a = run_scenario(s);
  const RunResult b = run_scenario(s);
  EXPECT_EQ(telemetry_csv(a.telemetry), telemetry_csv(b.telemetry));
  EXPECT_EQ(a.metrics.telemetry_hash, b.metrics.telemetry_hash);
  s.sim.seed = 2;
  EXPECT_NE(run_scenario(s).metrics.telemetry_hash, a.metrics.telemetry_hash);
}

TEST(WriteTelemetry, NineSignificantDigits) {
  TelemetrySample row;
  row.t = 0.02;
  row.aircraft.position.x = 1.0 / 3.0;
  row.aircraft.position.y = 123456789.123;
  const std::string text = telemetry_csv({row});
  EXPECT_NE(text.find(",0.333333333,"), std::string::npos);
  EXPECT_NE(text.find(",123456789,"), std::string::npos);
  EXPECT_EQ(format_g9(2.0), "2");
}

TEST(ReadTelemetry, RoundTripsAtPrintedPrecision) {
  const RunResult r = run_scenario(ShortRun(6.0));
  std::istringstream in(telemetry_csv(r.telemetry));
  const std::vector<TelemetrySample> back = read_telemetry(in);
  ASSERT_EQ(back.size(), r.telemetry.size());
  EXPECT_EQ(telemetry_csv(back), telemetry_csv(r.telemetry));
  EXPECT_EQ(back[300].mode, r.telemetry[300].mode);
}

TEST(ReadTelemetry, RejectsOtherSchemas) {
  std::istringstream wrong("# awe-telemetry v0\nt\n");
  EXPECT_THROW(read_telemetry(wrong), ParseError);
  std::istringstream missing("t,mode\n0,on_slide\n");
  EXPECT_THROW(read_telemetry(missing), ParseError);
  std::string text = telemetry_csv(run_scenario(ShortRun(0.1)).telemetry);
  std::istringstream extra(text + "1\n");
  EXPECT_THROW(read_telemetry(extra), ParseError);
}

TEST(ReadTelemetry, RejectsNonIncreasingTime) {
  TelemetrySample a, b;
  a.t = 0.04;
  b.t = 0.02;
  std::istringstream in(telemetry_csv({a, b}));
  EXPECT_THROW(read_telemetry(in), ParseError);
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ull);
}

TEST(IdCsv, RoundTripIsExact) {
  IdChannels ch;
  ch.sample_time = 0.02;
  ch.k_id = 0.5;
  ch.names = {"roll", "pitch"};
  ch.data = {make_synthetic_dataset({.noise_std = 0.01, .seed = 1}),
             make_synthetic_dataset({.a = -4.65, .b = 30.0, .noise_std = 0.01, .seed = 2})};
  std::stringstream io;
  write_id_csv(io, ch);
  const IdChannels back = read_id_csv(io);
  ASSERT_EQ(back.names, ch.names);
  EXPECT_EQ(back.k_id, 0.5);
  const IdDataset roll = id_channel(back, "roll");
  EXPECT_EQ(roll.angle, ch.data[0].angle);
  EXPECT_EQ(roll.rate, ch.data[0].rate);
  EXPECT_EQ(roll.reference, ch.data[0].reference);
  EXPECT_EQ(id_channel(back, "pitch").angle, ch.data[1].angle);
  EXPECT_THROW(id_channel(back, "yaw"), Error);
}

TEST(IdCsv, RejectsOtherSchemas) {
  std::istringstream in("# awe-iddata v9\n");
  EXPECT_THROW(read_id_csv(in), ParseError);
}

TEST(Reports, KeyValueIsLineDelimited) {
  const RunResult r = run_scenario(ShortRun(8.0));
  std::ostringstream kv;
  write_metrics_kv(kv, r.metrics, "short");
  std::istringstream lines(kv.str());
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    ++n;
    EXPECT_NE(line.find('='), std::string::npos) << line;
  }
  EXPECT_GT(n, 20);
  EXPECT_NE(kv.str().find("scenario=short\n"), std::string::npos);
  EXPECT_NE(kv.str().find("status=completed\n"), std::string::npos);

  std::ostringstream text;
  write_metrics_text(text, r.metrics, "short");
  EXPECT_NE(text.str().find(" deg "), std::string::npos);
}

}  // namespace
}  // namespace awe
