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


#include "kzsim/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "kzsim/rng.hpp"
#include "kzsim/statevector.hpp"
#include "kzsim/types.hpp"

namespace kzsim {

NOptResult find_n_opt(const DefectCurve& curve) {
  if (curve.points.empty()) throw DataError("find_n_opt: empty curve");
  std::size_t best = 0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    if (curve.points[k].d < curve.points[best].d) best = k;
  }
  NOptResult out;
  out.n_opt = curve.points[best].n_steps;
  out.d_min = curve.points[best].d;
  out.interior = best > 0 && best + 1 < curve.points.size();
  const double limit = 1.05 * out.d_min;
  out.band_min = out.n_opt;
  out.band_max = out.n_opt;
  for (const CurvePoint& p : curve.points) {
    if (p.d <= limit) {
      out.band_min = std::min(out.band_min, p.n_steps);
      out.band_max = std::max(out.band_max, p.n_steps);
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const NOptResult& r) {
  j = nlohmann::json{{"n_opt", r.n_opt},
                     {"d_min", r.d_min},
                     {"band_min", r.band_min},
                     {"band_max", r.band_max},
                     {"interior", r.interior}};
}

double n_opt_prefactor(double a_ideal, double a_noise) {
  if (!(a_ideal > 0.0) || !(a_noise > 0.0)) throw ConfigError("n_opt_prefactor: coefficients must be positive");
  return std::cbrt(std::pow(a_ideal / (2.0 * a_noise), 2.0));
}

double predict_n_opt(double a_ideal, double a_noise, double sigma_noise) {
  if (!(sigma_noise > 0.0)) throw ConfigError("predict_n_opt: sigma must be positive");
  return n_opt_prefactor(a_ideal, a_noise) * std::pow(sigma_noise, -4.0 / 3.0);
}

double total_defect_density(const DefectModel& m, double n_steps, double sigma_noise, double sigma_disorder) {
  if (!(n_steps > 0.0)) throw ConfigError("total_defect_density: N must be positive");
  return m.a_ideal / std::sqrt(n_steps) + m.a_noise * n_steps * sigma_noise * sigma_noise +
         m.a_disorder * sigma_disorder * sigma_disorder;
}

double total_defect_density_slope(const DefectModel& m, double n_steps, double sigma_noise) {
  if (!(n_steps > 0.0)) throw ConfigError("total_defect_density_slope: N must be positive");
  return -0.5 * m.a_ideal * std::pow(n_steps, -1.5) + m.a_noise * sigma_noise * sigma_noise;
}

double random_walk_prediction(double n_steps, double sigma_noise) {
  if (n_steps < 0.0 || sigma_noise < 0.0) throw ConfigError("random_walk_prediction: negative input");
  return -std::expm1(-0.5 * n_steps * sigma_noise * sigma_noise);
}

MonteCarloEstimate random_walk_monte_carlo(std::size_t n_steps, double sigma_noise, std::size_t realizations,
                                           std::uint64_t seed) {
  if (sigma_noise < 0.0) throw ConfigError("random_walk_monte_carlo: negative sigma");
  if (realizations == 0) throw ConfigError("random_walk_monte_carlo: need at least one realization");
  const CounterRng root(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t r = 0; r < realizations; ++r) {
    const CounterRng rng = root.split(r);
    DenseState state = DenseState::basis_state("0");
    for (std::size_t n = 0; n < n_steps; ++n) {
      apply_x_rotation(state, 0, -0.5 * sigma_noise * rng.normal(n));
    }
    const double value = 1.0 - z_expectation(state, 0);
    sum += value;
    sum_sq += value * value;
  }
  const auto count = static_cast<double>(realizations);
  MonteCarloEstimate out;
  out.samples = realizations;
  out.mean = sum / count;
  if (realizations > 1) {
    const double var = std::max(0.0, (sum_sq - count * out.mean * out.mean) / (count - 1.0));
    out.std_error = std::sqrt(var / count);
  }
  return out;
}

}  // namespace kzsim
