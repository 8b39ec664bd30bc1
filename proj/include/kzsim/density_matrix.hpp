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

#include <array>
#include <cstddef>
#include <map>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kzsim/protocol.hpp"
#include "kzsim/statevector.hpp"

namespace kzsim {

inline constexpr std::size_t kMaxDensityMatrixQubits = 8;

using ComplexMatrix = Eigen::MatrixXcd;
using Matrix2c = Eigen::Matrix2cd;

/// Mixed state on L <= 8 qubits, same bit ordering as DenseState.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(std::size_t n_qubits, ComplexMatrix rho);

  static DensityMatrix from_state(const DenseState& state);
  static DensityMatrix maximally_mixed(std::size_t n_qubits);

  [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
  [[nodiscard]] std::size_t dimension() const { return static_cast<std::size_t>(rho_.rows()); }
  [[nodiscard]] const ComplexMatrix& rho() const { return rho_; }
  [[nodiscard]] ComplexMatrix& rho() { return rho_; }
  [[nodiscard]] std::size_t mask(std::size_t qubit) const { return std::size_t{1} << (n_qubits_ - 1 - qubit); }

  [[nodiscard]] Complex trace() const { return rho_.trace(); }
  /// max |rho - rho^dagger|
  [[nodiscard]] double hermiticity_error() const;
  [[nodiscard]] double min_eigenvalue() const;
  [[nodiscard]] std::vector<double> probabilities() const;

 private:
  std::size_t n_qubits_ = 0;
  ComplexMatrix rho_;
};

void apply_x_rotation(DensityMatrix& rho, std::size_t qubit, double angle);
void apply_zz_phase(DensityMatrix& rho, std::size_t qubit_a, std::size_t qubit_b, double angle);

/// rho -> sum_k K_k rho K_k^dagger for 2x2 Kraus operators on one qubit.
void apply_single_qubit_kraus(DensityMatrix& rho, std::size_t qubit, const std::vector<Matrix2c>& kraus);

/// Two-qubit stochastic Pauli channel rates p_{mu nu}, stored at index
/// 4*mu + nu with mu, nu in {I, X, Y, Z} (mu acts on the first qubit).
struct PauliChannelRates {
  std::array<double, 16> rates{};

  /// p_II = 1.
  static PauliChannelRates identity();
  /// p_II = fidelity, remaining probability split evenly over the 15
  /// non-identity pairs.
  static PauliChannelRates depolarizing(double fidelity);

  [[nodiscard]] double operator()(Pauli first, Pauli second) const {
    return rates[4 * static_cast<std::size_t>(first) + static_cast<std::size_t>(second)];
  }

  /// Throws ConfigError unless all rates are >= 0 and sum to 1 within 1e-12.
  void validate() const;
};

void apply_pauli_channel(DensityMatrix& rho, std::size_t qubit_a, std::size_t qubit_b,
                         const PauliChannelRates& rates);

/// Uniform rates with optional per-bond overrides, keyed by (i, i+1).
struct PauliNoiseModel {
  PauliChannelRates default_rates = PauliChannelRates::identity();
  std::map<std::pair<std::size_t, std::size_t>, PauliChannelRates> per_pair;

  [[nodiscard]] const PauliChannelRates& rates_for(std::size_t a, std::size_t b) const;
  void validate() const;
};

/// Parses {"default": [16 rates], "pairs": {"0-1": [16 rates], ...}}.
/// Both keys are optional; rates are listed in the order II, IX, IY, IZ, XI, ...
[[nodiscard]] PauliNoiseModel pauli_noise_model_from_json(const nlohmann::json& j);

enum class CycleKind { kOneQubit, kTwoQubit };

/// Relaxation and dephasing times per qubit and cycle durations, all in
/// seconds. Defaults are the averages reported for a six-qubit device.
struct DampingParams {
  std::vector<double> t1;
  std::vector<double> t2;
  double dt_one_qubit = 32e-9;
  double dt_two_qubit = 176e-9;

  static DampingParams uniform(std::size_t n_qubits, double t1 = 30.1e-6, double t2 = 14.5e-6);
  void validate(std::size_t n_qubits) const;
};

struct GammaLambda {
  std::vector<double> gamma;
  std::vector<double> lambda;
};

/// gamma_i = 1 - exp(-dt / T1_i), lambda_i = 1 - exp(-dt / T2_i).
[[nodiscard]] GammaLambda damping_params_to_gamma_lambda(const DampingParams& params, CycleKind kind);

/// Amplitude damping (gamma) combined with phase damping (lambda):
///   K1 = diag(1, sqrt(1 - gamma - (1 - gamma) lambda))
///   K2 = [[0, sqrt(gamma)], [0, 0]]
///   K3 = diag(0, sqrt((1 - gamma) lambda))
[[nodiscard]] std::vector<Matrix2c> t1t2_kraus(double gamma, double lambda);
void apply_t1t2_channel(DensityMatrix& rho, std::size_t qubit, double gamma, double lambda);

using NoiseModel = std::variant<PauliNoiseModel, DampingParams>;

/// Runs the circuit from |+>^L with each step compiled into three cycles:
/// ZZ gates on even bonds (0-1, 2-3, ...), ZZ gates on odd bonds, then X
/// rotations on every qubit. Pauli channels follow each ZZ gate; T1-T2
/// channels act on every qubit after every cycle with the cycle's duration.
[[nodiscard]] DensityMatrix run_noisy_circuit(const PerturbedSchedule& perturbed, const NoiseModel& noise);

[[nodiscard]] double zz_expectation(const DensityMatrix& rho, std::size_t qubit_a, std::size_t qubit_b);
[[nodiscard]] double defect_density(const DensityMatrix& rho);

}  // namespace kzsim
