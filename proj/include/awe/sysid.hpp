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

// Closed-loop grey-box identification of the (a, b) pair of a first-order
// rate model under a proportional attitude loop, by simulation-error
// minimization. The rollout is forward Euler at the data rate.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "awe/common.hpp"

namespace awe {

/// Logged closed-loop attitude experiment. Sample k holds the measured angle,
/// its rate and the reference at t = k * sample_time.
struct IdDataset {
  double sample_time = 0.02;  // T_s [s]
  double k_id = 0.5;          // proportional gain used during the experiment
  std::vector<double> angle;
  std::vector<double> rate;
  std::vector<double> reference;

  /// Throws ValidationError.
  void validate() const;
  std::size_t size() const { return angle.size(); }
};

struct IdBounds {
  double a_lo = -20.0;
  double a_hi = -0.01;
  double b_lo = 0.01;
  double b_hi = 100.0;

  void validate() const;
};

struct IdResult {
  double a_hat = 0.0;
  double b_hat = 0.0;
  double cost = 0.0;
  bool converged = false;
  bool flat_cost = false;  // no excitation: cost surface is constant
  int iterations = 0;
};

struct IdOptions {
  int grid_starts = 5;           // per axis
  int oracle_resolution = 200;   // per axis, 0 disables the oracle start
  int max_iterations = 2000;     // per start
  double cost_tolerance = 1e-10;
  double step_tolerance = 1e-8;  // simplex size in unit-box coordinates
  int threads = 0;               // 0: hardware concurrency
};

struct ClosedLoopTrace {
  std::vector<double> angle;
  std::vector<double> rate;
};

/// Forward-Euler rollout of the model under u = k_id (ref - angle), started
/// from the first measured sample.
ClosedLoopTrace simulate_closed_loop(double a, double b, const IdDataset &data);

/// ||angle_meas - angle||_2 + ||rate_meas - rate||_2 over samples 1..N.
/// Returns +inf when the rollout diverges.
double id_cost(double a, double b, const IdDataset &data);

/// Exhaustive evaluation on a uniform resolution x resolution grid.
/// Marks flat_cost when max - min < 1e-12.
IdResult oracle_grid(const IdDataset &data, const IdBounds &bounds, int resolution = 200, int threads = 0);

/// Multi-start Nelder-Mead in the bounds box. Starts: the init point, a
/// coarse grid and the oracle argmin. Throws NonFiniteCost when every start
/// diverges.
IdResult identify(const IdDataset &data, const IdBounds &bounds, std::pair<double, double> init,
                  const IdOptions &options = {});

struct SyntheticIdSpec {
  double a = -2.3;
  double b = 12.6;
  double sample_time = 0.02;
  double k_id = 0.5;
  int samples = 500;            // N + 1
  double amplitude = 0.3;       // square-wave reference [rad]
  double period = 2.0;          // [s]
  double noise_std = 0.0;       // additive output noise on angle and rate
  std::uint64_t seed = 0;
};

/// Square-wave closed-loop experiment generated with simulate_closed_loop.
IdDataset make_synthetic_dataset(const SyntheticIdSpec &spec);

}  // namespace awe
