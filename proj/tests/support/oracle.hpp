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

#include "kzsim/majorana.hpp"
#include "kzsim/protocol.hpp"
#include "kzsim/statevector.hpp"

namespace kzsim::testing {

/// Perturbed schedule for (L, N, sigmas, seed, realization).
inline PerturbedSchedule make_perturbed(std::size_t L, std::size_t N, double sigma_noise, double sigma_disorder,
                                        std::uint64_t seed, std::size_t realization = 0,
                                        NoiseCoupling coupling = NoiseCoupling::kMultiplicative) {
  const RandomnessConfig rc{sigma_noise, sigma_disorder, seed, realization};
  return perturb_schedule(build_schedule(N), sample_randomness(rc, L, N), coupling);
}

/// Largest |<ZZ>| difference between the covariance and state-vector engines.
inline double max_correlator_gap(const PerturbedSchedule& perturbed) {
  const MajoranaCovariance cov = run_protocol(perturbed);
  const DenseState state = apply_circuit_statevector(DenseState::plus_state(perturbed.n_qubits), perturbed);
  double gap = 0.0;
  for (std::size_t b = 0; b + 1 < perturbed.n_qubits; ++b) {
    gap = std::max(gap, std::abs(zz_correlator(cov, b) - zz_expectation(state, b, b + 1)));
  }
  return gap;
}

}  // namespace kzsim::testing
