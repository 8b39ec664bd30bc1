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

#include "kzsim/trajectories.hpp"

#include <cmath>

#include "kzsim/rng.hpp"
#include "kzsim/types.hpp"

namespace kzsim {
namespace {

// Index into the 16 rates drawn with uniform u in (0, 1].
std::size_t draw_pauli_pair(const PauliChannelRates& rates, double u) {
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < 16; ++k) {
    if (rates.rates[k] <= 0.0) continue;
    acc += rates.rates[k];
    last_nonzero = k;
    if (u <= acc) return k;
  }
  return last_nonzero;
}

}  // namespace

DefectEstimate TrajectorySet::mean_defect_density() const {
  if (defect_densities.empty()) throw DataError("TrajectorySet: no trajectories");
  const auto n = static_cast<double>(defect_densities.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double d : defect_densities) {
    sum += d;
    sum_sq += d * d;
  }
  DefectEstimate est;
  est.shots = defect_densities.size();
  est.d = sum / n;
  if (defect_densities.size() > 1) est.std_error = std::sqrt(std::max(0.0, (sum_sq - n * est.d * est.d) / (n - 1.0)) / n);
  return est;
}

TrajectorySet run_pauli_trajectories(const PerturbedSchedule& perturbed, const PauliNoiseModel& noise,
                                     std::size_t n_trajectories, std::uint64_t seed) {
  const std::size_t L = perturbed.n_qubits;
  if (L < 2 || L > kMaxStateVectorQubits) throw ConfigError("run_pauli_trajectories: bad qubit count");
  const auto N = static_cast<Eigen::Index>(perturbed.n_steps);
  if (perturbed.field_coeffs.rows() != N || perturbed.bond_coeffs.rows() != N) {
    throw ConfigError("run_pauli_trajectories: coefficient tables do not match N");
  }
  noise.validate();

  const CounterRng root(seed);
  TrajectorySet out;
  out.defect_densities.reserve(n_trajectories);
  out.bitstrings.reserve(n_trajectories);
  const DenseState initial = DenseState::plus_state(L);
  for (std::size_t t = 0; t < n_trajectories; ++t) {
    const CounterRng rng = root.split(t);
    std::uint64_t counter = 0;
    DenseState state = initial;
    for (Eigen::Index n = 0; n < N; ++n) {
      for (std::size_t parity = 0; parity < 2; ++parity) {
        for (std::size_t b = parity; b + 1 < L; b += 2) {
          apply_zz_phase(state, b, b + 1, perturbed.bond_coeffs(n, static_cast<Eigen::Index>(b)));
          const auto& rates = noise.rates_for(b, b + 1);
          if (rates.rates[0] == 1.0) continue;
          const std::size_t k = draw_pauli_pair(rates, rng.uniform(counter++));
          apply_pauli(state, b, static_cast<Pauli>(k / 4));
          apply_pauli(state, b + 1, static_cast<Pauli>(k % 4));
        }
      }
      for (std::size_t q = 0; q < L; ++q) {
        apply_x_rotation(state, q, perturbed.field_coeffs(n, static_cast<Eigen::Index>(q)));
      }
    }
    out.defect_densities.push_back(defect_density(state));
    // Measurement uses a stream disjoint from the Pauli draws.
    out.bitstrings.push_back(sample_bitstrings(state, 1, rng.split(0x6d656173ULL).key()).front());
  }
  return out;
}

}  // namespace kzsim
