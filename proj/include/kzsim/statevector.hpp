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

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include "kzsim/protocol.hpp"

namespace kzsim {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxStateVectorQubits = 24;

/// Pure state on L qubits. Qubit 0 is the most significant bit of the
/// basis index, so basis_state("0011") has qubits 2 and 3 set.
class DenseState {
 public:
  DenseState() = default;
  DenseState(std::size_t n_qubits, std::vector<Complex> amplitudes);

  /// |+>^L
  static DenseState plus_state(std::size_t n_qubits);
  /// Computational basis state from a '0'/'1' string, qubit 0 first.
  static DenseState basis_state(std::string_view bits);

  [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
  [[nodiscard]] std::size_t dimension() const { return amplitudes_.size(); }
  [[nodiscard]] const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  [[nodiscard]] std::vector<Complex>& amplitudes() { return amplitudes_; }

  /// Bit mask of qubit q within a basis index.
  [[nodiscard]] std::size_t mask(std::size_t qubit) const { return std::size_t{1} << (n_qubits_ - 1 - qubit); }

  [[nodiscard]] double norm() const;
  [[nodiscard]] std::vector<double> probabilities() const;

 private:
  std::size_t n_qubits_ = 0;
  std::vector<Complex> amplitudes_;
};

enum class Pauli { kI = 0, kX = 1, kY = 2, kZ = 3 };

/// exp(+i angle X_q)
void apply_x_rotation(DenseState& state, std::size_t qubit, double angle);
/// exp(+i angle Z_a Z_b)
void apply_zz_phase(DenseState& state, std::size_t qubit_a, std::size_t qubit_b, double angle);
void apply_pauli(DenseState& state, std::size_t qubit, Pauli pauli);

/// Applies every step of `perturbed`: the bond layer
/// prod_i exp(+i J_{n,i} Z_i Z_{i+1}), then the field layer
/// prod_i exp(+i h_{n,i} X_i).
[[nodiscard]] DenseState apply_circuit_statevector(DenseState state, const PerturbedSchedule& perturbed);

/// <Z_a Z_b>
[[nodiscard]] double zz_expectation(const DenseState& state, std::size_t qubit_a, std::size_t qubit_b);
[[nodiscard]] double z_expectation(const DenseState& state, std::size_t qubit);
[[nodiscard]] double defect_density(const DenseState& state);

}  // namespace kzsim
