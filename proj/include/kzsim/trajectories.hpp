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
#include <vector>

#include "kzsim/density_matrix.hpp"
#include "kzsim/protocol.hpp"
#include "kzsim/sampling.hpp"

namespace kzsim {

/// Result of a stochastic Pauli unravelling: for each trajectory the exact
/// defect density of its final pure state, plus one measured bitstring.
struct TrajectorySet {
  std::vector<double> defect_densities;
  std::vector<Bitstring> bitstrings;

  [[nodiscard]] DefectEstimate mean_defect_density() const;
};

/// Same cycle compilation as run_noisy_circuit with the Pauli model, but each
/// channel application samples one Pauli pair with probabilities p_{mu nu}.
/// Trajectory t draws from CounterRng(seed).split(t), so trajectories can be
/// evaluated in any order.
[[nodiscard]] TrajectorySet run_pauli_trajectories(const PerturbedSchedule& perturbed, const PauliNoiseModel& noise,
                                                   std::size_t n_trajectories, std::uint64_t seed);

}  // namespace kzsim
