// Copyright 2026 The kzsim Authors
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


#pragma once

#include <cstddef>
#include <cstdint>

#include <nlohmann/json.hpp>

#include "kzsim/curve.hpp"

namespace kzsim {

struct NOptResult {
  std::int64_t n_opt = 0;
  double d_min = 0.0;
  /// Smallest and largest N with d <= 1.05 d_min.
  std::int64_t band_min = 0;
  std::int64_t band_max = 0;
  /// False when the minimum sits on the first or last grid point.
  bool interior = false;
};

/// Argmin of d, smallest N on ties. Throws DataError on an empty curve.
[[nodiscard]] NOptResult find_n_opt(const DefectCurve& curve);

void to_json(nlohmann::json& j, const NOptResult& result);

/// (a_ideal / (2 a_noise))^(2/3).
[[nodiscard]] double n_opt_prefactor(double a_ideal, double a_noise);
/// sigma^(-4/3) (a_ideal / (2 a_noise))^(2/3). Throws ConfigError unless all inputs > 0.
[[nodiscard]] double predict_n_opt(double a_ideal, double a_noise, double sigma_noise);

struct DefectModel {
  double a_ideal = 0.323;
  double a_noise = 2.42;
  double a_disorder = 1.36;
};

/// a_ideal / sqrt(N) + a_noise N sigma_noise^2 + a_disorder sigma_disorder^2.
[[nodiscard]] double total_defect_density(const DefectModel& model, double n_steps, double sigma_noise,
                                          double sigma_disorder);
/// Derivative of total_defect_density with respect to N.
[[nodiscard]] double total_defect_density_slope(const DefectModel& model, double n_steps, double sigma_noise);

/// Expected 1 - <Z> of a qubit after N X rotations whose Bloch-sphere angles
/// are i.i.d. normal with standard deviation sigma: 1 - exp(-N sigma^2 / 2).
[[nodiscard]] double random_walk_prediction(double n_steps, double sigma_noise);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Single-qubit state-vector simulation of the same construction: start in
/// |0>, apply exp(-i eta_n X / 2) for n < N with eta_n drawn from
/// CounterRng(seed).split(r).normal(n) * sigma, record 1 - <Z>, average over r.
[[nodiscard]] MonteCarloEstimate random_walk_monte_carlo(std::size_t n_steps, double sigma_noise,
                                                         std::size_t realizations, std::uint64_t seed);

}  // namespace kzsim
