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

// Python module awe_takeoff._core. Scenarios cross the boundary as text,
// results as plain dicts and the telemetry CSV.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "awe/autopilot.hpp"
#include "awe/scenario.hpp"
#include "awe/sim_engine.hpp"
#include "awe/sysid.hpp"
#include "awe/telemetry.hpp"

namespace py = pybind11;

namespace {

py::dict metrics_dict(const awe::RunMetrics &m, const std::string &name) {
  // The key-value report is the single definition of the metric names.
  std::ostringstream kv;
  awe::write_metrics_kv(kv, m, name);
  py::dict out;
  std::istringstream in(kv.str());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[py::str(line.substr(0, eq))] = line.substr(eq + 1);
  }
  return out;
}

awe::IdDataset make_dataset(std::vector<double> angle, std::vector<double> rate, std::vector<double> reference,
                            double sample_time, double k_id) {
  awe::IdDataset d;
  d.angle = std::move(angle);
  d.rate = std::move(rate);
  d.reference = std::move(reference);
  d.sample_time = sample_time;
  d.k_id = k_id;
  return d;
}

py::dict id_result_dict(const awe::IdResult &r) {
  py::dict out;
  out["a"] = r.a_hat;
  out["b"] = r.b_hat;
  out["cost"] = r.cost;
  out["converged"] = r.converged;
  out["flat_cost"] = r.flat_cost;
  out["iterations"] = r.iterations;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tethered take-off simulator core";

  auto error = py::register_exception<awe::Error>(m, "AweError");
  py::register_exception<awe::ParseError>(m, "ParseError", error.ptr());
  py::register_exception<awe::ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<awe::ZeroGain>(m, "ZeroGain", error.ptr());
  py::register_exception<awe::UnstableRequest>(m, "UnstableRequest", error.ptr());
  py::register_exception<awe::NonFiniteCost>(m, "NonFiniteCost", error.ptr());

  m.def(
      "gains",
      [](double a, double b, std::complex<double> l1, std::complex<double> l2) {
        const awe::LoopGains g = awe::gains_from_eigenvalues(a, b, l1, l2);
        return std::make_pair(g.k_error, g.k_error_rate);
      },
      py::arg("a"), py::arg("b"), py::arg("l1"), py::arg("l2"), "Pole-placement gains (K_e, K_e_dot).");

  m.def(
      "closed_loop_eigenvalues",
      [](double a, double b, double k_error, double k_error_rate) {
        const auto eig = awe::eigenvalues_2x2(awe::closed_loop_matrix(a, b, {k_error, k_error_rate}));
        return std::vector<std::complex<double>>(eig.begin(), eig.end());
      },
      py::arg("a"), py::arg("b"), py::arg("k_error"), py::arg("k_error_rate"));

  m.def("nominal_scenario_text", []() { return awe::serialize_scenario(awe::paper_nominal_scenario()); });
  m.def(
      "normalize_scenario", [](const std::string &text) { return awe::serialize_scenario(awe::parse_scenario(text)); },
      py::arg("text"), "Parses and validates scenario text, returns it with every key written out.");
  m.def("scenario_keys", &awe::scenario_keys);

  m.def(
      "simulate",
      [](const std::string &text) {
        const awe::Scenario s = awe::parse_scenario(text);
        awe::RunResult r;
        {
          py::gil_scoped_release release;
          r = awe::run_scenario(s);
        }
        py::dict out;
        out["metrics"] = metrics_dict(r.metrics, s.name);
        out["telemetry_csv"] = awe::telemetry_csv(r.telemetry);
        out["status"] = awe::to_string(r.metrics.status);
        return out;
      },
      py::arg("scenario_text"));

  m.def(
      "synthetic_dataset",
      [](double a, double b, double noise_std, std::uint64_t seed, int samples) {
        awe::SyntheticIdSpec spec;
        spec.a = a;
        spec.b = b;
        spec.noise_std = noise_std;
        spec.seed = seed;
        spec.samples = samples;
        const awe::IdDataset d = awe::make_synthetic_dataset(spec);
        py::dict out;
        out["angle"] = d.angle;
        out["rate"] = d.rate;
        out["reference"] = d.reference;
        out["sample_time"] = d.sample_time;
        out["k_id"] = d.k_id;
        return out;
      },
      py::arg("a") = -2.3, py::arg("b") = 12.6, py::arg("noise_std") = 0.0, py::arg("seed") = 0,
      py::arg("samples") = 500);

  m.def(
      "identify",
      [](std::vector<double> angle, std::vector<double> rate, std::vector<double> reference, double sample_time,
         double k_id, std::pair<double, double> a_bounds, std::pair<double, double> b_bounds,
         std::optional<std::pair<double, double>> init) {
        const awe::IdDataset d =
            make_dataset(std::move(angle), std::move(rate), std::move(reference), sample_time, k_id);
        const awe::IdBounds bounds{a_bounds.first, a_bounds.second, b_bounds.first, b_bounds.second};
        const auto start = init.value_or(
            std::make_pair(0.5 * (bounds.a_lo + bounds.a_hi), 0.5 * (bounds.b_lo + bounds.b_hi)));
        awe::IdResult r;
        {
          py::gil_scoped_release release;
          r = awe::identify(d, bounds, start);
        }
        return id_result_dict(r);
      },
      py::arg("angle"), py::arg("rate"), py::arg("reference"), py::arg("sample_time") = 0.02,
      py::arg("k_id") = 0.5, py::arg("a_bounds") = std::make_pair(-20.0, -0.01),
      py::arg("b_bounds") = std::make_pair(0.01, 100.0), py::arg("init") = py::none());
}
