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

#include "kzsim/density_matrix.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

#include "kzsim/types.hpp"

namespace kzsim {
namespace {

void check_qubit(const DensityMatrix& rho, std::size_t qubit) {
  if (qubit >= rho.n_qubits()) throw ConfigError("qubit index " + std::to_string(qubit) + " out of range");
}

// Phase picked up by a basis state with bit value `bit` under `pauli`,
// P|bit> = phase |bit ^ flip>.
Complex pauli_phase(Pauli pauli, bool bit) {
  switch (pauli) {
    case Pauli::kY:
      return bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
    case Pauli::kZ:
      return bit ? -1.0 : 1.0;
    default:
      return 1.0;
  }
}

bool flips(Pauli pauli) { return pauli == Pauli::kX || pauli == Pauli::kY; }

PauliChannelRates rates_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 16) throw DataError("Pauli rates must be an array of 16 numbers");
  PauliChannelRates r;
  for (std::size_t k = 0; k < 16; ++k) r.rates[k] = j[k].get<double>();
  return r;
}

}  // namespace

DensityMatrix::DensityMatrix(std::size_t n_qubits, ComplexMatrix rho) : n_qubits_(n_qubits), rho_(std::move(rho)) {
  if (n_qubits == 0 || n_qubits > kMaxDensityMatrixQubits) {
    throw ConfigError("DensityMatrix: qubit count must be in [1, " + std::to_string(kMaxDensityMatrixQubits) + "]");
  }
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  if (rho_.rows() != dim || rho_.cols() != dim) throw ConfigError("DensityMatrix: rho must be 2^L x 2^L");
}

DensityMatrix DensityMatrix::from_state(const DenseState& state) {
  if (state.n_qubits() > kMaxDensityMatrixQubits) throw ConfigError("DensityMatrix: too many qubits");
  const Eigen::Map<const Eigen::VectorXcd> psi(state.amplitudes().data(),
                                               static_cast<Eigen::Index>(state.dimension()));
  return DensityMatrix(state.n_qubits(), psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > kMaxDensityMatrixQubits) throw ConfigError("DensityMatrix: bad qubit count");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  return DensityMatrix(n_qubits, ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  const ComplexMatrix h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::vector<double> DensityMatrix::probabilities() const {
  std::vector<double> p(dimension());
  for (std::size_t b = 0; b < p.size(); ++b) {
    p[b] = std::max(0.0, rho_(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)).real());
  }
  return p;
}

void apply_x_rotation(DensityMatrix& rho, std::size_t qubit, double angle) {
  check_qubit(rho, qubit);
  const auto m = static_cast<Eigen::Index>(rho.mask(qubit));
  const double c = std::cos(angle);
  const Complex is(0.0, std::sin(angle));
  ComplexMatrix& r = rho.rho();
  const Eigen::Index dim = r.rows();
  // rho -> U rho with U = c + i s X.
  for (Eigen::Index a = 0; a < dim; ++a) {
    if (a & m) continue;
    for (Eigen::Index col = 0; col < dim; ++col) {
      const Complex x0 = r(a, col);
      const Complex x1 = r(a | m, col);
      r(a, col) = c * x0 + is * x1;
      r(a | m, col) = is * x0 + c * x1;
    }
  }
  // rho -> rho U^dagger.
  for (Eigen::Index b = 0; b < dim; ++b) {
    if (b & m) continue;
    for (Eigen::Index row = 0; row < dim; ++row) {
      const Complex y0 = r(row, b);
      const Complex y1 = r(row, b | m);
      r(row, b) = c * y0 - is * y1;
      r(row, b | m) = -is * y0 + c * y1;
    }
  }
}

void apply_zz_phase(DensityMatrix& rho, std::size_t qubit_a, std::size_t qubit_b, double angle) {
  check_qubit(rho, qubit_a);
  check_qubit(rho, qubit_b);
  const std::size_t ma = rho.mask(qubit_a);
  const std::size_t mb = rho.mask(qubit_b);
  const std::size_t dim = rho.dimension();
  std::vector<Complex> phase(dim);
  for (std::size_t x = 0; x < dim; ++x) {
    const bool parity = ((x & ma) != 0) != ((x & mb) != 0);
    phase[x] = std::polar(1.0, parity ? -angle : angle);
  }
  ComplexMatrix& r = rho.rho();
  for (std::size_t b = 0; b < dim; ++b) {
    const Complex right = std::conj(phase[b]);
    for (std::size_t a = 0; a < dim; ++a) {
      r(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *= phase[a] * right;
    }
  }
}

void apply_single_qubit_kraus(DensityMatrix& rho, std::size_t qubit, const std::vector<Matrix2c>& kraus) {
  check_qubit(rho, qubit);
  const auto m = static_cast<Eigen::Index>(rho.mask(qubit));
  ComplexMatrix& r = rho.rho();
  const Eigen::Index dim = r.rows();
  for (Eigen::Index b = 0; b < dim; ++b) {
    if (b & m) continue;
    for (Eigen::Index a = 0; a < dim; ++a) {
      if (a & m) continue;
      Matrix2c block;
      block << r(a, b), r(a, b | m), r(a | m, b), r(a | m, b | m);
      Matrix2c out = Matrix2c::Zero();
      for (const auto& k : kraus) out.noalias() += k * block * k.adjoint();
      r(a, b) = out(0, 0);
      r(a, b | m) = out(0, 1);
      r(a | m, b) = out(1, 0);
      r(a | m, b | m) = out(1, 1);
    }
  }
}

PauliChannelRates PauliChannelRates::identity() {
  PauliChannelRates r;
  r.rates[0] = 1.0;
  return r;
}

PauliChannelRates PauliChannelRates::depolarizing(double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw ConfigError("depolarizing: fidelity must be in [0, 1]");
  PauliChannelRates r;
  r.rates.fill((1.0 - fidelity) / 15.0);
  r.rates[0] = fidelity;
  return r;
}

void PauliChannelRates::validate() const {
  for (double p : rates) {
    if (!(p >= 0.0)) throw ConfigError("Pauli rates must be nonnegative");
  }
  const double total = std::accumulate(rates.begin(), rates.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("Pauli rates must sum to 1");
}

void apply_pauli_channel(DensityMatrix& rho, std::size_t qubit_a, std::size_t qubit_b,
                         const PauliChannelRates& rates) {
  check_qubit(rho, qubit_a);
  check_qubit(rho, qubit_b);
  if (qubit_a == qubit_b) throw ConfigError("apply_pauli_channel: qubits must differ");
  rates.validate();
  if (rates.rates[0] == 1.0) return;

  const std::size_t ma = rho.mask(qubit_a);
  const std::size_t mb = rho.mask(qubit_b);
  const std::size_t dim = rho.dimension();
  const ComplexMatrix& in = rho.rho();
  ComplexMatrix out = ComplexMatrix::Zero(in.rows(), in.cols());
  std::vector<Complex> phase(dim);
  for (std::size_t mu = 0; mu < 4; ++mu) {
    for (std::size_t nu = 0; nu < 4; ++nu) {
      const double p = rates.rates[4 * mu + nu];
      if (p == 0.0) continue;
      const auto pa = static_cast<Pauli>(mu);
      const auto pb = static_cast<Pauli>(nu);
      const std::size_t flip = (flips(pa) ? ma : 0) | (flips(pb) ? mb : 0);
      for (std::size_t x = 0; x < dim; ++x) {
        phase[x] = pauli_phase(pa, (x & ma) != 0) * pauli_phase(pb, (x & mb) != 0);
      }
      // (P rho P^dagger)(a, b) = ph(a^f) conj(ph(b^f)) rho(a^f, b^f)
      for (std::size_t b = 0; b < dim; ++b) {
        const std::size_t bs = b ^ flip;
        const Complex right = p * std::conj(phase[bs]);
        for (std::size_t a = 0; a < dim; ++a) {
          const std::size_t as = a ^ flip;
          out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
              phase[as] * right * in(static_cast<Eigen::Index>(as), static_cast<Eigen::Index>(bs));
        }
      }
    }
  }
  rho.rho() = std::move(out);
}

const PauliChannelRates& PauliNoiseModel::rates_for(std::size_t a, std::size_t b) const {
  const auto it = per_pair.find({std::min(a, b), std::max(a, b)});
  return it == per_pair.end() ? default_rates : it->second;
}

void PauliNoiseModel::validate() const {
  default_rates.validate();
  for (const auto& [pair, r] : per_pair) r.validate();
}

PauliNoiseModel pauli_noise_model_from_json(const nlohmann::json& j) {
  PauliNoiseModel model;
  if (!j.is_object()) throw DataError("Pauli rates file must hold a JSON object");
  if (j.contains("default")) model.default_rates = rates_from_json(j.at("default"));
  if (j.contains("pairs")) {
    for (const auto& [key, value] : j.at("pairs").items()) {
      const auto dash = key.find('-');
      if (dash == std::string::npos) throw DataError("Pauli rates pair key must look like \"i-j\": " + key);
      std::size_t a = 0;
      std::size_t b = 0;
      try {
        a = std::stoul(key.substr(0, dash));
        b = std::stoul(key.substr(dash + 1));
      } catch (const std::exception&) {
        throw DataError("Pauli rates pair key must look like \"i-j\": " + key);
      }
      if (a == b) throw DataError("Pauli rates pair key names the same qubit twice: " + key);
      model.per_pair[{std::min(a, b), std::max(a, b)}] = rates_from_json(value);
    }
  }
  try {
    model.validate();
  } catch (const ConfigError& e) {
    throw DataError(e.what());
  }
  return model;
}

DampingParams DampingParams::uniform(std::size_t n_qubits, double t1, double t2) {
  DampingParams p;
  p.t1.assign(n_qubits, t1);
  p.t2.assign(n_qubits, t2);
  return p;
}

void DampingParams::validate(std::size_t n_qubits) const {
  if (t1.size() != n_qubits || t2.size() != n_qubits) throw ConfigError("DampingParams: need T1 and T2 per qubit");
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if (!(t1[q] > 0.0) || !(t2[q] > 0.0)) throw ConfigError("DampingParams: T1 and T2 must be positive");
  }
  if (!(dt_one_qubit > 0.0) || !(dt_two_qubit > 0.0)) throw ConfigError("DampingParams: cycle durations must be positive");
}

GammaLambda damping_params_to_gamma_lambda(const DampingParams& params, CycleKind kind) {
  params.validate(params.t1.size());
  const double dt = kind == CycleKind::kOneQubit ? params.dt_one_qubit : params.dt_two_qubit;
  GammaLambda out;
  for (std::size_t q = 0; q < params.t1.size(); ++q) {
    out.gamma.push_back(-std::expm1(-dt / params.t1[q]));
    out.lambda.push_back(-std::expm1(-dt / params.t2[q]));
  }
  return out;
}

std::vector<Matrix2c> t1t2_kraus(double gamma, double lambda) {
  if (!(gamma >= 0.0 && gamma <= 1.0) || !(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("t1t2_kraus: gamma and lambda must lie in [0, 1]");
  }
  const double dephased = (1.0 - gamma) * lambda;
  Matrix2c k1 = Matrix2c::Zero();
  Matrix2c k2 = Matrix2c::Zero();
  Matrix2c k3 = Matrix2c::Zero();
  k1(0, 0) = 1.0;
  k1(1, 1) = std::sqrt(std::max(0.0, 1.0 - gamma - dephased));
  k2(0, 1) = std::sqrt(gamma);
  k3(1, 1) = std::sqrt(dephased);
  return {k1, k2, k3};
}

void apply_t1t2_channel(DensityMatrix& rho, std::size_t qubit, double gamma, double lambda) {
  if (gamma == 0.0 && lambda == 0.0) {
    check_qubit(rho, qubit);
    return;
  }
  apply_single_qubit_kraus(rho, qubit, t1t2_kraus(gamma, lambda));
}

DensityMatrix run_noisy_circuit(const PerturbedSchedule& perturbed, const NoiseModel& noise) {
  const std::size_t L = perturbed.n_qubits;
  if (L < 2 || L > kMaxDensityMatrixQubits) {
    throw ConfigError("run_noisy_circuit: qubit count must be in [2, " + std::to_string(kMaxDensityMatrixQubits) + "]");
  }
  const auto N = static_cast<Eigen::Index>(perturbed.n_steps);
  if (perturbed.field_coeffs.rows() != N || perturbed.bond_coeffs.rows() != N) {
    throw ConfigError("run_noisy_circuit: coefficient tables do not match N");
  }
  const auto* pauli = std::get_if<PauliNoiseModel>(&noise);
  const auto* damping = std::get_if<DampingParams>(&noise);
  GammaLambda one_qubit;
  GammaLambda two_qubit;
  if (pauli) pauli->validate();
  if (damping) {
    damping->validate(L);
    one_qubit = damping_params_to_gamma_lambda(*damping, CycleKind::kOneQubit);
    two_qubit = damping_params_to_gamma_lambda(*damping, CycleKind::kTwoQubit);
  }
  auto idle = [&](DensityMatrix& rho, const GammaLambda& gl) {
    if (!damping) return;
    for (std::size_t q = 0; q < L; ++q) apply_t1t2_channel(rho, q, gl.gamma[q], gl.lambda[q]);
  };

  DensityMatrix rho = DensityMatrix::from_state(DenseState::plus_state(L));
  for (Eigen::Index n = 0; n < N; ++n) {
    for (std::size_t parity = 0; parity < 2; ++parity) {
      for (std::size_t b = parity; b + 1 < L; b += 2) {
        apply_zz_phase(rho, b, b + 1, perturbed.bond_coeffs(n, static_cast<Eigen::Index>(b)));
        if (pauli) apply_pauli_channel(rho, b, b + 1, pauli->rates_for(b, b + 1));
      }
      idle(rho, two_qubit);
    }
    for (std::size_t q = 0; q < L; ++q) apply_x_rotation(rho, q, perturbed.field_coeffs(n, static_cast<Eigen::Index>(q)));
    idle(rho, one_qubit);
  }
  return rho;
}

double zz_expectation(const DensityMatrix& rho, std::size_t qubit_a, std::size_t qubit_b) {
  check_qubit(rho, qubit_a);
  check_qubit(rho, qubit_b);
  const std::size_t ma = rho.mask(qubit_a);
  const std::size_t mb = rho.mask(qubit_b);
  double sum = 0.0;
  for (std::size_t x = 0; x < rho.dimension(); ++x) {
    const double p = rho.rho()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)).real();
    const bool parity = ((x & ma) != 0) != ((x & mb) != 0);
    sum += parity ? -p : p;
  }
  return sum;
}

double defect_density(const DensityMatrix& rho) {
  const std::size_t L = rho.n_qubits();
  if (L < 2) throw ConfigError("defect_density: need at least 2 qubits");
  double sum = 0.0;
  for (std::size_t q = 0; q + 1 < L; ++q) sum += 1.0 - zz_expectation(rho, q, q + 1);
  return sum / (2.0 * static_cast<double>(L - 1));
}

}  // namespace kzsim
