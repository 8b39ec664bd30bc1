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

#include "kzsim/statevector.hpp"

#include <cmath>
#include <string>

#include "kzsim/types.hpp"

namespace kzsim {
namespace {

void check_qubit(const DenseState& state, std::size_t qubit) {
  if (qubit >= state.n_qubits()) throw ConfigError("qubit index " + std::to_string(qubit) + " out of range");
}

}  // namespace

DenseState::DenseState(std::size_t n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (n_qubits == 0 || n_qubits > kMaxStateVectorQubits) {
    throw ConfigError("DenseState: qubit count must be in [1, " + std::to_string(kMaxStateVectorQubits) + "]");
  }
  if (amplitudes_.size() != (std::size_t{1} << n_qubits)) {
    throw ConfigError("DenseState: amplitude vector must have length 2^L");
  }
}

DenseState DenseState::plus_state(std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > kMaxStateVectorQubits) {
    throw ConfigError("DenseState: qubit count must be in [1, " + std::to_string(kMaxStateVectorQubits) + "]");
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  return DenseState(n_qubits, std::vector<Complex>(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0)));
}

DenseState DenseState::basis_state(std::string_view bits) {
  const std::size_t L = bits.size();
  if (L == 0 || L > kMaxStateVectorQubits) throw ConfigError("basis_state: bad length");
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ConfigError("basis_state: characters must be '0' or '1'");
    index = (index << 1) | static_cast<std::size_t>(c == '1');
  }
  std::vector<Complex> amps(std::size_t{1} << L);
  amps[index] = 1.0;
  return DenseState(L, std::move(amps));
}

double DenseState::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return std::sqrt(sum);
}

std::vector<double> DenseState::probabilities() const {
  std::vector<double> p(amplitudes_.size());
  for (std::size_t b = 0; b < p.size(); ++b) p[b] = std::norm(amplitudes_[b]);
  return p;
}

void apply_x_rotation(DenseState& state, std::size_t qubit, double angle) {
  check_qubit(state, qubit);
  const std::size_t m = state.mask(qubit);
  const double c = std::cos(angle);
  const Complex is(0.0, std::sin(angle));
  auto& a = state.amplitudes();
  for (std::size_t b = 0; b < a.size(); ++b) {
    if (b & m) continue;
    const Complex a0 = a[b];
    const Complex a1 = a[b | m];
    a[b] = c * a0 + is * a1;
    a[b | m] = is * a0 + c * a1;
  }
}

void apply_zz_phase(DenseState& state, std::size_t qubit_a, std::size_t qubit_b, double angle) {
  check_qubit(state, qubit_a);
  check_qubit(state, qubit_b);
  const std::size_t ma = state.mask(qubit_a);
  const std::size_t mb = state.mask(qubit_b);
  const Complex aligned = std::polar(1.0, angle);
  const Complex anti = std::conj(aligned);
  auto& a = state.amplitudes();
  for (std::size_t b = 0; b < a.size(); ++b) {
    const bool parity = ((b & ma) != 0) != ((b & mb) != 0);
    a[b] *= parity ? anti : aligned;
  }
}

void apply_pauli(DenseState& state, std::size_t qubit, Pauli pauli) {
  check_qubit(state, qubit);
  const std::size_t m = state.mask(qubit);
  auto& a = state.amplitudes();
  switch (pauli) {
    case Pauli::kI:
      return;
    case Pauli::kX:
      for (std::size_t b = 0; b < a.size(); ++b) {
        if (!(b & m)) std::swap(a[b], a[b | m]);
      }
      return;
    case Pauli::kY:
      // Y|0> = i|1>, Y|1> = -i|0>
      for (std::size_t b = 0; b < a.size(); ++b) {
        if (b & m) continue;
        const Complex a0 = a[b];
        a[b] = Complex(0.0, -1.0) * a[b | m];
        a[b | m] = Complex(0.0, 1.0) * a0;
      }
      return;
    case Pauli::kZ:
      for (std::size_t b = 0; b < a.size(); ++b) {
        if (b & m) a[b] = -a[b];
      }
      return;
  }
}

DenseState apply_circuit_statevector(DenseState state, const PerturbedSchedule& perturbed) {
  const std::size_t L = perturbed.n_qubits;
  if (state.n_qubits() != L || L < 2) throw ConfigError("apply_circuit_statevector: qubit count mismatch");
  const auto N = static_cast<Eigen::Index>(perturbed.n_steps);
  if (perturbed.field_coeffs.rows() != N || perturbed.bond_coeffs.rows() != N) {
    throw ConfigError("apply_circuit_statevector: coefficient tables do not match N");
  }
  auto& amps = state.amplitudes();
  std::vector<double> spins(L);
  for (Eigen::Index n = 0; n < N; ++n) {
    // The bond layer is diagonal: one pass with the summed phase.
    for (std::size_t b = 0; b < amps.size(); ++b) {
      for (std::size_t q = 0; q < L; ++q) spins[q] = (b & state.mask(q)) ? -1.0 : 1.0;
      double phase = 0.0;
      for (std::size_t q = 0; q + 1 < L; ++q) {
        phase += perturbed.bond_coeffs(n, static_cast<Eigen::Index>(q)) * spins[q] * spins[q + 1];
      }
      amps[b] *= std::polar(1.0, phase);
    }
    for (std::size_t q = 0; q < L; ++q) {
      apply_x_rotation(state, q, perturbed.field_coeffs(n, static_cast<Eigen::Index>(q)));
    }
  }
  return state;
}

double zz_expectation(const DenseState& state, std::size_t qubit_a, std::size_t qubit_b) {
  check_qubit(state, qubit_a);
  check_qubit(state, qubit_b);
  const std::size_t ma = state.mask(qubit_a);
  const std::size_t mb = state.mask(qubit_b);
  double sum = 0.0;
  const auto& a = state.amplitudes();
  for (std::size_t b = 0; b < a.size(); ++b) {
    const bool parity = ((b & ma) != 0) != ((b & mb) != 0);
    sum += parity ? -std::norm(a[b]) : std::norm(a[b]);
  }
  return sum;
}

double z_expectation(const DenseState& state, std::size_t qubit) {
  check_qubit(state, qubit);
  const std::size_t m = state.mask(qubit);
  double sum = 0.0;
  const auto& a = state.amplitudes();
  for (std::size_t b = 0; b < a.size(); ++b) sum += (b & m) ? -std::norm(a[b]) : std::norm(a[b]);
  return sum;
}

double defect_density(const DenseState& state) {
  const std::size_t L = state.n_qubits();
  if (L < 2) throw ConfigError("defect_density: need at least 2 qubits");
  double sum = 0.0;
  for (std::size_t q = 0; q + 1 < L; ++q) sum += 1.0 - zz_expectation(state, q, q + 1);
  return sum / (2.0 * static_cast<double>(L - 1));
}

}  // namespace kzsim
