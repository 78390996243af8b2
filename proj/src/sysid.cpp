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

#include "awe/sysid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace awe {

void IdDataset::validate() const {
  if (!(std::isfinite(sample_time) && sample_time > 0.0)) throw ValidationError("sample_time", "must be positive");
  if (!std::isfinite(k_id)) throw ValidationError("k_id", "must be finite");
  if (angle.size() < 10) throw ValidationError("angle", "needs at least 10 samples");
  if (rate.size() != angle.size()) throw ValidationError("rate", "length differs from angle");
  if (reference.size() != angle.size()) throw ValidationError("reference", "length differs from angle");
  auto all_finite = [](const std::vector<double> &v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!all_finite(angle)) throw ValidationError("angle", "contains non-finite values");
  if (!all_finite(rate)) throw ValidationError("rate", "contains non-finite values");
  if (!all_finite(reference)) throw ValidationError("reference", "contains non-finite values");
}

void IdBounds::validate() const {
  if (!(std::isfinite(a_lo) && std::isfinite(a_hi) && a_lo < a_hi && a_hi < 0.0)) {
    throw ValidationError("a_bounds", "must satisfy a_lo < a_hi < 0");
  }
  if (!(std::isfinite(b_lo) && std::isfinite(b_hi) && 0.0 < b_lo && b_lo < b_hi)) {
    throw ValidationError("b_bounds", "must satisfy 0 < b_lo < b_hi");
  }
}

ClosedLoopTrace simulate_closed_loop(double a, double b, const IdDataset &data) {
  const std::size_t n = data.size();
  ClosedLoopTrace out;
  out.angle.resize(n);
  out.rate.resize(n);
  if (n == 0) return out;
  const double ts = data.sample_time;
  out.angle[0] = data.angle[0];
  out.rate[0] = data.rate[0];
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double u = data.k_id * (data.reference[k] - out.angle[k]);
    out.angle[k + 1] = out.angle[k] + ts * out.rate[k];
    out.rate[k + 1] = out.rate[k] + ts * (a * out.rate[k] + b * u);
  }
  return out;
}

double id_cost(double a, double b, const IdDataset &data) {
  const ClosedLoopTrace sim = simulate_closed_loop(a, b, data);
  double angle_sq = 0.0, rate_sq = 0.0;
  for (std::size_t k = 1; k < data.size(); ++k) {
    const double ea = data.angle[k] - sim.angle[k];
    const double er = data.rate[k] - sim.rate[k];
    angle_sq += ea * ea;
    rate_sq += er * er;
  }
  const double cost = std::sqrt(angle_sq) + std::sqrt(rate_sq);
  return std::isfinite(cost) ? cost : std::numeric_limits<double>::infinity();
}

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

struct Box {
  const IdBounds &bounds;
  double a(double u) const { return bounds.a_lo + u * (bounds.a_hi - bounds.a_lo); }
  double b(double v) const { return bounds.b_lo + v * (bounds.b_hi - bounds.b_lo); }
  double u(double a) const { return (a - bounds.a_lo) / (bounds.a_hi - bounds.a_lo); }
  double v(double b) const { return (b - bounds.b_lo) / (bounds.b_hi - bounds.b_lo); }
};

using Point = std::array<double, 2>;

struct NmOutcome {
  Point x{};
  double f = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

// Nelder-Mead on the unit square; trial points are projected onto the box.
template <typename F>
NmOutcome nelder_mead(const F &f, Point start, double initial_step, const IdOptions &opt) {
  auto project = [](Point p) {
    for (double &c : p) c = clamp(c, 0.0, 1.0);
    return p;
  };
  std::array<Point, 3> s;
  std::array<double, 3> fs;
  s[0] = project(start);
  s[1] = project({s[0][0] + (s[0][0] + initial_step <= 1.0 ? initial_step : -initial_step), s[0][1]});
  s[2] = project({s[0][0], s[0][1] + (s[0][1] + initial_step <= 1.0 ? initial_step : -initial_step)});
  for (int i = 0; i < 3; ++i) fs[i] = f(s[i]);

  NmOutcome out;
  for (; out.iterations < opt.max_iterations; ++out.iterations) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int l, int r) { return fs[l] < fs[r]; });
    const int best = idx[0], mid = idx[1], worst = idx[2];

    double diameter = 0.0;
    for (int i = 0; i < 3; ++i) {
      diameter = std::max(diameter, std::hypot(s[i][0] - s[best][0], s[i][1] - s[best][1]));
    }
    const double spread = fs[worst] - fs[best];
    if (std::isfinite(fs[worst]) && (spread < opt.cost_tolerance || diameter < opt.step_tolerance)) {
      out.converged = true;
      break;
    }

    const Point centroid{0.5 * (s[best][0] + s[mid][0]), 0.5 * (s[best][1] + s[mid][1])};
    auto along = [&](double t) {
      return project({centroid[0] + t * (s[worst][0] - centroid[0]), centroid[1] + t * (s[worst][1] - centroid[1])});
    };
    const Point xr = along(-1.0);
    const double fr = f(xr);
    if (fr < fs[best]) {
      const Point xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        s[worst] = xe, fs[worst] = fe;
      } else {
        s[worst] = xr, fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[mid]) {
      s[worst] = xr, fs[worst] = fr;
      continue;
    }
    const bool outside = fr < fs[worst];
    const Point xc = along(outside ? -0.5 : 0.5);
    const double fc = f(xc);
    if (fc < (outside ? fr : fs[worst])) {
      s[worst] = xc, fs[worst] = fc;
      continue;
    }
    for (int i = 0; i < 3; ++i) {
      if (i == best) continue;
      s[i] = project({s[best][0] + 0.5 * (s[i][0] - s[best][0]), s[best][1] + 0.5 * (s[i][1] - s[best][1])});
      fs[i] = f(s[i]);
    }
  }
  const int best = static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  out.x = s[best];
  out.f = fs[best];
  return out;
}

}  // namespace

IdResult oracle_grid(const IdDataset &data, const IdBounds &bounds, int resolution, int threads) {
  data.validate();
  bounds.validate();
  if (resolution < 2) throw ValidationError("resolution", "must be at least 2");
  const Box box{bounds};
  const int n = resolution;
  std::vector<double> costs(static_cast<std::size_t>(n) * n);
  auto fill_rows = [&](int first, int stride) {
    for (int i = first; i < n; i += stride) {
      const double a = box.a(static_cast<double>(i) / (n - 1));
      for (int j = 0; j < n; ++j) {
        costs[static_cast<std::size_t>(i) * n + j] = id_cost(a, box.b(static_cast<double>(j) / (n - 1)), data);
      }
    }
  };
  const int workers = std::min(resolve_threads(threads), n);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(fill_rows, w, workers);
  fill_rows(0, workers);
  for (auto &t : pool) t.join();

  IdResult r;
  r.cost = std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double c = costs[static_cast<std::size_t>(i) * n + j];
      if (c < r.cost) {
        r.cost = c;
        r.a_hat = box.a(static_cast<double>(i) / (n - 1));
        r.b_hat = box.b(static_cast<double>(j) / (n - 1));
      }
      if (std::isfinite(c)) worst = std::max(worst, c);
    }
  }
  r.flat_cost = std::isfinite(r.cost) && worst - r.cost < 1e-12;
  r.converged = std::isfinite(r.cost) && !r.flat_cost;
  r.iterations = n * n;
  return r;
}

IdResult identify(const IdDataset &data, const IdBounds &bounds, std::pair<double, double> init,
                  const IdOptions &options) {
  data.validate();
  bounds.validate();
  if (!(init.first >= bounds.a_lo && init.first <= bounds.a_hi && init.second >= bounds.b_lo &&
        init.second <= bounds.b_hi)) {
    throw ValidationError("init", "must lie inside the bounds");
  }
  const Box box{bounds};
  auto f = [&](const Point &p) { return id_cost(box.a(p[0]), box.b(p[1]), data); };

  std::vector<Point> starts{{box.u(init.first), box.v(init.second)}};
  const int g = std::max(options.grid_starts, 0);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) starts.push_back({(i + 0.5) / g, (j + 0.5) / g});
  }
  bool flat = false;
  if (options.oracle_resolution >= 2) {
    const IdResult oracle = oracle_grid(data, bounds, options.oracle_resolution, options.threads);
    flat = oracle.flat_cost;
    if (std::isfinite(oracle.cost)) starts.push_back({box.u(oracle.a_hat), box.v(oracle.b_hat)});
  }

  NmOutcome best;
  int iterations = 0;
  for (const Point &start : starts) {
    if (!std::isfinite(f(start))) continue;
    NmOutcome run = nelder_mead(f, start, 0.05, options);
    iterations += run.iterations;
    // Restart from the optimum with a fresh simplex to escape collapse.
    for (int restart = 0; restart < 3 && std::isfinite(run.f); ++restart) {
      NmOutcome again = nelder_mead(f, run.x, 1e-3, options);
      iterations += again.iterations;
      const bool improved = again.f < run.f - options.cost_tolerance;
      if (again.f <= run.f) run = again;
      if (!improved) break;
    }
    if (run.f < best.f) best = run;
  }
  if (!std::isfinite(best.f)) throw NonFiniteCost("every identification start produced a non-finite cost");

  IdResult r;
  r.a_hat = box.a(best.x[0]);
  r.b_hat = box.b(best.x[1]);
  r.cost = best.f;
  r.iterations = iterations;
  r.flat_cost = flat;
  r.converged = best.converged && !flat;
  return r;
}

IdDataset make_synthetic_dataset(const SyntheticIdSpec &spec) {
  if (spec.samples < 10) throw ValidationError("samples", "needs at least 10 samples");
  if (!(spec.sample_time > 0.0)) throw ValidationError("sample_time", "must be positive");
  if (!(spec.period > 0.0)) throw ValidationError("period", "must be positive");
  if (!(spec.noise_std >= 0.0)) throw ValidationError("noise_std", "must be non-negative");
  IdDataset data;
  data.sample_time = spec.sample_time;
  data.k_id = spec.k_id;
  const auto n = static_cast<std::size_t>(spec.samples);
  data.reference.resize(n);
  data.angle.assign(n, 0.0);
  data.rate.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * spec.sample_time;
    const auto half = static_cast<long long>(std::floor(t / (0.5 * spec.period)));
    data.reference[k] = (half % 2 == 0) ? spec.amplitude : -spec.amplitude;
  }
  const ClosedLoopTrace truth = simulate_closed_loop(spec.a, spec.b, data);
  data.angle = truth.angle;
  data.rate = truth.rate;
  if (spec.noise_std > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_std);
    for (std::size_t k = 0; k < n; ++k) {
      data.angle[k] += noise(rng);
      data.rate[k] += noise(rng);
    }
  }
  return data;
}

}  // namespace awe
