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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kzsim/density_matrix.hpp"
#include "kzsim/statevector.hpp"

namespace kzsim {

/// Measurement outcome, one '0'/'1' character per qubit, qubit 0 first.
using Bitstring = std::string;

/// Draws `shots` i.i.d. outcomes. Shot s uses CounterRng(seed).uniform(s)
/// against the cumulative distribution in basis-index order.
[[nodiscard]] std::vector<Bitstring> sample_bitstrings(const DenseState& state, std::size_t shots, std::uint64_t seed);
[[nodiscard]] std::vector<Bitstring> sample_bitstrings(const DensityMatrix& rho, std::size_t shots, std::uint64_t seed);
[[nodiscard]] std::vector<Bitstring> sample_from_probabilities(std::span<const double> probabilities,
                                                               std::size_t n_qubits, std::size_t shots,
                                                               std::uint64_t seed);

struct DefectEstimate {
  double d = 0.0;
  double std_error = 0.0;
  std::size_t shots = 0;
};

/// Mean of per-string domain-wall fractions; std_error = sample std / sqrt(shots).
[[nodiscard]] DefectEstimate defect_density_from_bitstrings(std::span<const Bitstring> samples);

/// One string per line; blank lines are ignored. Throws DataError on
/// characters other than '0'/'1' or ragged lengths.
[[nodiscard]] std::vector<Bitstring> read_bitstrings(std::istream& in);
void write_bitstrings(std::ostream& out, std::span<const Bitstring> samples);

/// Synthetic outcomes with independent domain walls: the first bit is
/// uniform and each bond flips with probability `wall_probability`, so the
/// expected defect density equals `wall_probability` exactly.
[[nodiscard]] std::vector<Bitstring> sample_domain_wall_bitstrings(std::size_t n_qubits, double wall_probability,
                                                                   std::size_t shots, std::uint64_t seed);

}  // namespace kzsim
