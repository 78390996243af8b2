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

#include "awe/ground_station.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace awe {
namespace {

// Zone-law parameters used by the worked examples: gentle reference
// accelerations of 8 m/s^2 and a 12 m/s reel-out cap.
GroundStationParams ExampleParams() {
  GroundStationParams p;
  p.max_ref_speed = 12.0;
  p.reel_out_accel = 8.0;
  p.reel_in_accel = -8.0;
  p.winch_time_constant = 0.2;
  p.winch_max_accel = 100.0;
  return p;
}

TEST(WinchReferenceSpeed, ZoneBHolds) {
  EXPECT_EQ(winch_reference_speed(0.1, 0.8, ExampleParams()), 0.8);
  EXPECT_EQ(winch_reference_speed(0.05, -2.5, ExampleParams()), -2.5);
}

TEST(WinchReferenceSpeed, ZoneCSnapsToReelOut) {
  const GroundStationParams p = ExampleParams();
  EXPECT_NEAR((0.25 - p.zone_high) / (p.zone_high_anchor - p.zone_high), 1.1765, 1e-4);
  EXPECT_EQ(winch_reference_speed(0.25, -1.0, p), 0.0);
  EXPECT_NEAR(winch_reference_speed(0.25, 1.0, p), 1.0 + 0.02 * 8.0 * 0.1 / 0.085, 1e-12);
  EXPECT_EQ(winch_reference_speed(0.32, 11.99, p), 12.0);
}

TEST(WinchReferenceSpeed, ZoneASnapsToReelIn) {
  const GroundStationParams p = ExampleParams();
  EXPECT_EQ(winch_reference_speed(0.02, 0.5, p), 0.0);
  EXPECT_NEAR(winch_reference_speed(0.02, -1.0, p), -1.0 - 0.02 * 8.0 * 1.2, 1e-12);
  EXPECT_EQ(winch_reference_speed(0.0, -3.99, p), -4.0);
}

TEST(WinchReferenceSpeed, OutOfRangeThrows) {
  const GroundStationParams p;
  EXPECT_THROW(winch_reference_speed(-1e-6, 0.0, p), OutOfRangeCompression);
  EXPECT_THROW(winch_reference_speed(0.3201, 0.0, p), OutOfRangeCompression);
  EXPECT_THROW(winch_reference_speed(std::nan(""), 0.0, p), OutOfRangeCompression);
  EXPECT_NO_THROW(winch_reference_speed(0.32, 0.0, p));
}

void CheckZoneProperties(const GroundStationParams &p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xs(0.0, p.spring_max_compression);
  std::uniform_real_distribution<double> prev(-2.0 * p.max_ref_speed, 2.0 * p.max_ref_speed);
  int violations = 0;
  for (int i = 0; i < 100000; ++i) {
    const double x = xs(rng), r = prev(rng);
    const double out = winch_reference_speed(x, r, p);
    if (x > p.zone_low && x < p.zone_high) {
      violations += out != r;
    } else if (x < p.zone_low) {
      violations += out > 0.0 || out < p.min_ref_speed;
      // A reel-out reference is dropped entirely on entry, not ramped down.
      const double step = p.control_period * p.reel_in_accel * (x - p.zone_low) / (p.zone_low_anchor - p.zone_low);
      violations += r > 0.0 && out < std::max(p.min_ref_speed, step);
    } else if (x >= p.zone_high) {
      violations += out < 0.0 || out > p.max_ref_speed;
      const double step = p.control_period * p.reel_out_accel * (x - p.zone_high) / (p.zone_high_anchor - p.zone_high);
      violations += r < 0.0 && out > std::min(p.max_ref_speed, step);
    }
  }
  EXPECT_EQ(violations, 0);
}

TEST(WinchReferenceSpeed, RandomizedZoneProperties) {
  CheckZoneProperties(ExampleParams(), 1);
  CheckZoneProperties(GroundStationParams{}, 2);
}

TEST(WinchReferenceSpeed, SnapOnZoneEntry) {
  const GroundStationParams p = ExampleParams();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ref(0.0, 12.0), xa(0.0, 0.0499), xc(0.15, 0.32);
  int violations = 0;
  for (int i = 0; i < 100000; ++i) {
    // A reel-out reference never survives entry into zone a, and a reel-in
    // reference never survives entry into zone c.
    violations += winch_reference_speed(xa(rng), ref(rng), p) > 0.0;
    violations += winch_reference_speed(xc(rng), -ref(rng), p) < 0.0;
  }
  EXPECT_EQ(violations, 0);
}

TEST(WinchTrack, FirstOrderStep) {
  const GroundStationParams p = ExampleParams();
  GroundStationState s;
  s.unreeled_length = 10.0;
  s.winch_ref_speed = 2.0;
  const WinchUpdate w = winch_track(s, p, 0.02);
  EXPECT_NEAR(w.winch_speed, 2.0 * (1.0 - std::exp(-0.1)), 1e-12);
  EXPECT_NEAR(w.winch_speed, 0.1903, 1e-4);
  EXPECT_NEAR(w.unreeled_length, 10.0 + 0.02 * w.winch_speed, 1e-12);
}

TEST(WinchTrack, HoldsWhenOnReference) {
  GroundStationState s;
  s.unreeled_length = 20.0;
  s.winch_speed = s.winch_ref_speed = 1.5;
  const WinchUpdate w = winch_track(s, ExampleParams(), 0.02);
  EXPECT_EQ(w.winch_speed, 1.5);
}

TEST(WinchTrack, SpeedChangeIsTorqueLimited) {
  GroundStationParams p = ExampleParams();
  p.winch_time_constant = 0.001;
  GroundStationState s;
  s.unreeled_length = 20.0;
  s.winch_ref_speed = 30.0;
  const WinchUpdate w = winch_track(s, p, 0.02);
  EXPECT_NEAR(w.winch_speed, p.winch_max_accel * 0.02, 1e-12);
}

TEST(WinchTrack, DrumEndClips) {
  GroundStationState s;
  s.unreeled_length = 150.0;
  s.winch_speed = s.winch_ref_speed = 3.0;
  const WinchUpdate w = winch_track(s, ExampleParams(), 0.02);
  EXPECT_EQ(w.unreeled_length, 150.0);
  EXPECT_TRUE(w.tether_end_reached);

  s.unreeled_length = 0.01;
  s.winch_speed = s.winch_ref_speed = -3.0;
  const WinchUpdate in = winch_track(s, ExampleParams(), 0.02);
  EXPECT_EQ(in.unreeled_length, 0.0);
  EXPECT_FALSE(in.tether_end_reached);
}

TEST(TetherGeometry, Examples) {
  const GroundStationParams p;
  GroundStationState s;
  s.unreeled_length = 120.0;
  TetherGeometry g = tether_geometry({100.0, 0.0, 0.0}, {}, s, p);
  EXPECT_NEAR(g.slack_length, 20.0, 1e-12);
  EXPECT_EQ(g.tether_force, 0.0);
  EXPECT_EQ(g.spring_compression, 0.0);

  s.unreeled_length = 100.0;
  g = tether_geometry({0.0, 60.0, 80.2}, {}, s, p);
  const double excess = std::hypot(60.0, 80.2) - 100.0;
  EXPECT_NEAR(g.spring_compression, excess / 2.0, 1e-12);
  EXPECT_EQ(g.slack_length, 0.0);

  g = tether_geometry({100.2, 0.0, 0.0}, {}, s, p);
  EXPECT_NEAR(g.spring_compression, 0.1, 1e-9);
  EXPECT_NEAR(g.tether_force, 3.0, 1e-7);
  g = tether_geometry({100.3, 0.0, 0.0}, {}, s, p);
  EXPECT_NEAR(g.spring_compression, 0.15, 1e-9);
  EXPECT_NEAR(g.tether_force, 4.5, 1e-7);

  // Full compression: 9.6 N, then the penalty spring.
  g = tether_geometry({100.64, 0.0, 0.0}, {}, s, p);
  EXPECT_NEAR(g.tether_force, 9.6, 1e-7);
  g = tether_geometry({100.66, 0.0, 0.0}, {}, s, p);
  EXPECT_EQ(g.spring_compression, p.spring_max_compression);
  EXPECT_NEAR(g.tether_force, 9.6 + 0.5 * 100.0 * 60.0 * 0.01, 1e-6);
}

TEST(TetherGeometry, SlackAndForceNeverBothNonzeroAndForceContinuous) {
  const GroundStationParams p;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-160.0, 160.0), length(0.0, 150.0);
  for (int i = 0; i < 100000; ++i) {
    GroundStationState s;
    s.unreeled_length = length(rng);
    const Vec3 pos{coord(rng), coord(rng), std::fabs(coord(rng))};
    const TetherGeometry g = tether_geometry(pos, {}, s, p);
    ASSERT_EQ(g.slack_length * g.tether_force, 0.0);
    ASSERT_GE(g.tether_force, 0.0);
    ASSERT_LE(g.spring_compression, p.spring_max_compression);
  }
  GroundStationState s;
  s.unreeled_length = 50.0;
  double prev = 0.0;
  for (double d = 49.0; d < 51.0; d += 1e-4) {
    const double f = tether_geometry({d, 0.0, 0.0}, {}, s, p).tether_force;
    ASSERT_LE(std::fabs(f - prev), 0.5 * 100.0 * p.spring_stiffness * 1e-4 * 0.5 + 1e-6);
    prev = f;
  }
}

TEST(SlideProfile, LaunchAndRelease) {
  const GroundStationParams p;
  SlideSample s = slide_profile(0.0, p);
  EXPECT_TRUE(s.attached);
  EXPECT_EQ(s.speed, 0.0);
  EXPECT_GT(slide_profile(0.01, p).accel, 0.0);
  EXPECT_LT(slide_profile(0.01, p).accel, slide_profile(0.05, p).accel);

  const double tr = slide_release_time(p);
  const SlideSample before = slide_profile(tr - 1e-6, p);
  EXPECT_TRUE(before.attached);
  EXPECT_NEAR(before.speed, 9.0, 1e-3);
  EXPECT_LE(before.position, 2.0);
  EXPECT_LE(before.accel, p.slide_peak_accel);
  const SlideSample after = slide_profile(tr + 1e-6, p);
  EXPECT_FALSE(after.attached);
  for (double t = tr; t < tr + 5.0; t += 0.01) EXPECT_FALSE(slide_profile(t, p).attached);

  const SlideSample rest = slide_profile(10.0, p);
  EXPECT_EQ(rest.speed, 0.0);
  EXPECT_LE(rest.position, p.rail_length);
}

TEST(SlideProfile, SpeedAndPositionAreConsistent) {
  const GroundStationParams p;
  const double h = 1e-5;
  for (double t = 0.001; t < 1.0; t += 0.0137) {
    const SlideSample s0 = slide_profile(t - h, p), s1 = slide_profile(t + h, p);
    if (s0.attached != s1.attached) continue;
    EXPECT_NEAR((s1.position - s0.position) / (2.0 * h), slide_profile(t, p).speed, 1e-4);
  }
}

TEST(GroundStation, FeedForwardFollowsSlideThenZoneLaw) {
  GroundStation gs(GroundStationParams{}, {}, 0.0);
  const double dt = 0.02;
  // Aircraft rides the slide, so the tether stays slack.
  double t = 0.0;
  for (; t < 1.2; t += dt) {
    gs.step(t, gs.slide_point(), dt);
    if (gs.state().slide_attached) {
      EXPECT_EQ(gs.state().winch_ref_speed, gs.state().slide_speed);
    }
  }
  EXPECT_TRUE(gs.state().launch_active);
  EXPECT_EQ(gs.state().spring_compression, 0.0);
}

TEST(GroundStation, ReleaseDropsForce) {
  GroundStation gs(GroundStationParams{}, {}, 0.0);
  const TetherGeometry taut = gs.step(0.0, {2.2, 0.0, 0.0}, 0.02);
  EXPECT_GT(taut.tether_force, 0.0);
  gs.release_tether();
  const TetherGeometry g = gs.step(0.02, {50.0, 0.0, 0.0}, 0.02);
  EXPECT_EQ(g.tether_force, 0.0);
  EXPECT_FALSE(gs.tether_connected());
}

TEST(GroundStationParams, Validation) {
  GroundStationParams p;
  EXPECT_NO_THROW(p.validate());
  p.zone_high = 0.04;
  try {
    p.validate();
    FAIL() << "expected ValidationError";
  } catch (const ValidationError &e) {
    EXPECT_EQ(e.key(), "zone_high");
  }
  p = {};
  p.rail_length = 2.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.reel_in_accel = 1.0;
  EXPECT_THROW(p.validate(), ValidationError);
}

}  // namespace
}  // namespace awe
