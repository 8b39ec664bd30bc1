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

#include "kzsim/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "kzsim/rng.hpp"
#include "kzsim/types.hpp"

namespace kzsim {

std::vector<Bitstring> sample_from_probabilities(std::span<const double> probabilities, std::size_t n_qubits,
                                                 std::size_t shots, std::uint64_t seed) {
  if (probabilities.size() != (std::size_t{1} << n_qubits)) {
    throw ConfigError("sample_from_probabilities: need 2^L probabilities");
  }
  std::vector<double> cumulative(probabilities.size());
  double total = 0.0;
  for (std::size_t b = 0; b < probabilities.size(); ++b) {
    total += std::max(0.0, probabilities[b]);
    cumulative[b] = total;
  }
  if (!(total > 0.0)) throw ConfigError("sample_from_probabilities: distribution has no weight");

  const CounterRng rng(seed);
  std::vector<Bitstring> out;
  out.reserve(shots);
  for (std::size_t s = 0; s < shots; ++s) {
    // uniform() lies in (0, 1]; the first index with cumulative >= u is drawn.
    const double u = rng.uniform(s) * total;
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    auto index = static_cast<std::size_t>(it - cumulative.begin());
    // Skip zero-probability entries that share the same cumulative value.
    while (probabilities[index] <= 0.0 && index + 1 < probabilities.size()) ++index;
    Bitstring bits(n_qubits, '0');
    for (std::size_t q = 0; q < n_qubits; ++q) {
      if (index & (std::size_t{1} << (n_qubits - 1 - q))) bits[q] = '1';
    }
    out.push_back(std::move(bits));
  }
  return out;
}

std::vector<Bitstring> sample_bitstrings(const DenseState& state, std::size_t shots, std::uint64_t seed) {
  const auto p = state.probabilities();
  return sample_from_probabilities(p, state.n_qubits(), shots, seed);
}

std::vector<Bitstring> sample_bitstrings(const DensityMatrix& rho, std::size_t shots, std::uint64_t seed) {
  const auto p = rho.probabilities();
  return sample_from_probabilities(p, rho.n_qubits(), shots, seed);
}

DefectEstimate defect_density_from_bitstrings(std::span<const Bitstring> samples) {
  if (samples.empty()) throw DataError("defect_density_from_bitstrings: no samples");
  const std::size_t L = samples.front().size();
  if (L < 2) throw DataError("defect_density_from_bitstrings: strings need at least 2 qubits");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& s : samples) {
    if (s.size() != L) throw DataError("defect_density_from_bitstrings: ragged string lengths");
    std::size_t walls = 0;
    for (std::size_t q = 0; q + 1 < L; ++q) {
      if ((s[q] != '0' && s[q] != '1') || (s[q + 1] != '0' && s[q + 1] != '1')) {
        throw DataError("defect_density_from_bitstrings: characters must be '0' or '1'");
      }
      walls += s[q] != s[q + 1];
    }
    const double d = static_cast<double>(walls) / static_cast<double>(L - 1);
    sum += d;
    sum_sq += d * d;
  }
  const auto n = static_cast<double>(samples.size());
  DefectEstimate est;
  est.shots = samples.size();
  est.d = sum / n;
  if (samples.size() > 1) {
    const double var = std::max(0.0, (sum_sq - n * est.d * est.d) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

std::vector<Bitstring> read_bitstrings(std::istream& in) {
  std::vector<Bitstring> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.find_first_not_of("01") != std::string::npos) {
      throw DataError("bitstring file: line " + std::to_string(out.size() + 1) + " has characters other than 0/1");
    }
    if (!out.empty() && line.size() != out.front().size()) throw DataError("bitstring file: ragged string lengths");
    out.push_back(line);
  }
  return out;
}

void write_bitstrings(std::ostream& out, std::span<const Bitstring> samples) {
  for (const auto& s : samples) out << s << '\n';
}

std::vector<Bitstring> sample_domain_wall_bitstrings(std::size_t n_qubits, double wall_probability, std::size_t shots,
                                                     std::uint64_t seed) {
  if (n_qubits < 2) throw ConfigError("sample_domain_wall_bitstrings: need at least 2 qubits");
  if (!(wall_probability >= 0.0 && wall_probability <= 1.0)) {
    throw ConfigError("sample_domain_wall_bitstrings: wall probability must lie in [0, 1]");
  }
  const CounterRng rng(seed);
  std::vector<Bitstring> out;
  out.reserve(shots);
  std::uint64_t counter = 0;
  for (std::size_t s = 0; s < shots; ++s) {
    Bitstring bits(n_qubits, '0');
    bool value = rng.uniform(counter++) <= 0.5;
    bits[0] = value ? '1' : '0';
    for (std::size_t q = 1; q < n_qubits; ++q) {
      if (rng.uniform(counter++) <= wall_probability) value = !value;
      bits[q] = value ? '1' : '0';
    }
    out.push_back(std::move(bits));
  }
  return out;
}

}  // namespace kzsim
