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

#include "kzsim/majorana.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace kzsim {
namespace {

struct RotationKernel {
  Eigen::Index first;
  Eigen::Index second;
  double c;
  double s;
};

std::vector<RotationKernel> kernels_for(const PlaneRotationLayer& layer, Eigen::Index n_modes) {
  std::vector<RotationKernel> out;
  out.reserve(layer.rotations.size());
  for (const auto& r : layer.rotations) {
    const auto j = static_cast<Eigen::Index>(r.first);
    const auto k = static_cast<Eigen::Index>(r.second);
    if (j >= n_modes || k >= n_modes || j == k) {
      throw ConfigError("apply_layer: rotation index out of range");
    }
    out.push_back({j, k, std::cos(r.angle), std::sin(r.angle)});
  }
  return out;
}

}  // namespace

MajoranaCovariance::MajoranaCovariance(RealMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() % 2 != 0) {
    throw ConfigError("MajoranaCovariance: matrix must be square with even dimension");
  }
}

double MajoranaCovariance::antisymmetry_error() const {
  return (matrix_ + matrix_.transpose()).cwiseAbs().maxCoeff();
}

double MajoranaCovariance::purity_error() const {
  const RealMatrix id = RealMatrix::Identity(matrix_.rows(), matrix_.cols());
  return (matrix_ * matrix_.transpose() - id).cwiseAbs().maxCoeff();
}

void MajoranaCovariance::write_csv(std::ostream& out) const {
  const auto old_precision = out.precision(17);
  for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix_.cols(); ++c) {
      if (c) out << ',';
      out << matrix_(r, c);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

MajoranaCovariance initial_covariance(std::size_t n_qubits) {
  if (n_qubits < 2) throw ConfigError("initial_covariance: need at least 2 qubits");
  const auto modes = static_cast<Eigen::Index>(2 * n_qubits);
  RealMatrix m = RealMatrix::Zero(modes, modes);
  for (Eigen::Index i = 0; i < modes; i += 2) {
    m(i, i + 1) = 1.0;
    m(i + 1, i) = -1.0;
  }
  return MajoranaCovariance(std::move(m));
}

std::pair<PlaneRotationLayer, PlaneRotationLayer> step_layers(const RealVector& field_coeffs,
                                                              const RealVector& bond_coeffs) {
  if (field_coeffs.size() < 2 || bond_coeffs.size() != field_coeffs.size() - 1) {
    throw ConfigError("step_layers: need L field and L-1 bond coefficients");
  }
  PlaneRotationLayer bonds{LayerKind::kBond, {}};
  PlaneRotationLayer fields{LayerKind::kField, {}};
  for (Eigen::Index i = 0; i < bond_coeffs.size(); ++i) {
    if (bond_coeffs(i) == 0.0) continue;
    const auto m = static_cast<std::size_t>(2 * i + 1);
    bonds.rotations.push_back({m, m + 1, kRotationSign * 2.0 * bond_coeffs(i)});
  }
  for (Eigen::Index i = 0; i < field_coeffs.size(); ++i) {
    if (field_coeffs(i) == 0.0) continue;
    const auto m = static_cast<std::size_t>(2 * i);
    fields.rotations.push_back({m, m + 1, kRotationSign * 2.0 * field_coeffs(i)});
  }
  return {std::move(bonds), std::move(fields)};
}

void apply_layer_inplace(MajoranaCovariance& cov, const PlaneRotationLayer& layer) {
  RealMatrix& m = cov.matrix_;
  const Eigen::Index n = m.rows();
  const auto kernels = kernels_for(layer, n);
  if (kernels.empty()) return;

  // Rows: M -> O M.
  for (const auto& k : kernels) {
    double* rj = m.row(k.first).data();
    double* rk = m.row(k.second).data();
    for (Eigen::Index col = 0; col < n; ++col) {
      const double x = rj[col];
      const double y = rk[col];
      rj[col] = k.c * x - k.s * y;
      rk[col] = k.s * x + k.c * y;
    }
  }
  // Columns: M -> M O^T. Pairs are adjacent, so this stays within one row.
  for (Eigen::Index row = 0; row < n; ++row) {
    double* r = m.row(row).data();
    for (const auto& k : kernels) {
      const double x = r[k.first];
      const double y = r[k.second];
      r[k.first] = k.c * x - k.s * y;
      r[k.second] = k.s * x + k.c * y;
    }
  }
}

MajoranaCovariance apply_layer(MajoranaCovariance cov, const PlaneRotationLayer& layer) {
  apply_layer_inplace(cov, layer);
  return cov;
}

MajoranaCovariance run_protocol(const PerturbedSchedule& perturbed, std::vector<double>* defect_trace) {
  const auto L = static_cast<Eigen::Index>(perturbed.n_qubits);
  const auto N = static_cast<Eigen::Index>(perturbed.n_steps);
  if (perturbed.field_coeffs.rows() != N || perturbed.field_coeffs.cols() != L ||
      perturbed.bond_coeffs.rows() != N || perturbed.bond_coeffs.cols() != L - 1) {
    throw ConfigError("run_protocol: coefficient tables do not match (N, L)");
  }
  MajoranaCovariance cov = initial_covariance(perturbed.n_qubits);
  if (defect_trace) {
    defect_trace->clear();
    defect_trace->reserve(perturbed.n_steps);
  }
  for (Eigen::Index step = 0; step < N; ++step) {
    const auto [bonds, fields] =
        step_layers(perturbed.field_coeffs.row(step).transpose(), perturbed.bond_coeffs.row(step).transpose());
    apply_layer_inplace(cov, bonds);
    apply_layer_inplace(cov, fields);
    if (defect_trace) defect_trace->push_back(defect_density(cov));
  }
  return cov;
}

double zz_correlator(const MajoranaCovariance& cov, std::size_t bond) {
  if (bond + 1 >= cov.n_qubits()) {
    throw ConfigError("zz_correlator: bond index " + std::to_string(bond) + " out of range");
  }
  return kCorrelatorSign * cov(2 * bond + 1, 2 * bond + 2);
}

double defect_density(const MajoranaCovariance& cov) {
  const std::size_t bonds = cov.n_qubits() - 1;
  double sum = 0.0;
  for (std::size_t b = 0; b < bonds; ++b) sum += 1.0 - zz_correlator(cov, b);
  return sum / (2.0 * static_cast<double>(bonds));
}

}  // namespace kzsim
