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
#include <iosfwd>
#include <utility>
#include <vector>

#include "kzsim/protocol.hpp"
#include "kzsim/types.hpp"

namespace kzsim {

struct PlaneRotationLayer;

/// Majorana modes, 0-based: a_{2i} = (prod_{j<i} X_j) Z_i and
/// a_{2i+1} = (prod_{j<i} X_j) Y_i. With this string choice
///   X_i         = i a_{2i} a_{2i+1}
///   Z_i Z_{i+1} = i a_{2i+1} a_{2i+2}
/// so both halves of a Trotter step are quadratic with disjoint pairs.
///
/// Stores M(j, k) = (i/2) <[a_j, a_k]>, a 2L x 2L real antisymmetric matrix.
/// A pure Gaussian state has M M^T = 1.
class MajoranaCovariance {
 public:
  MajoranaCovariance() = default;

  /// Takes ownership of a 2L x 2L matrix; no validity checks beyond shape.
  explicit MajoranaCovariance(RealMatrix matrix);

  [[nodiscard]] std::size_t n_qubits() const { return static_cast<std::size_t>(matrix_.rows() / 2); }
  [[nodiscard]] std::size_t n_modes() const { return static_cast<std::size_t>(matrix_.rows()); }
  [[nodiscard]] const RealMatrix& matrix() const { return matrix_; }
  [[nodiscard]] double operator()(std::size_t j, std::size_t k) const {
    return matrix_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  }

  /// max |M + M^T|
  [[nodiscard]] double antisymmetry_error() const;
  /// max |M M^T - 1|
  [[nodiscard]] double purity_error() const;

  /// Debug dump, one matrix row per CSV line.
  void write_csv(std::ostream& out) const;

 private:
  friend void apply_layer_inplace(MajoranaCovariance& cov, const PlaneRotationLayer& layer);
  RealMatrix matrix_;
};

/// Covariance of |+>^L: 2x2 blocks [[0, 1], [-1, 0]] on pairs (2i, 2i+1).
[[nodiscard]] MajoranaCovariance initial_covariance(std::size_t n_qubits);

/// Plane rotation acting on Heisenberg-picture modes:
///   a_first  -> cos(angle) a_first - sin(angle) a_second
///   a_second -> sin(angle) a_first + cos(angle) a_second
struct PlaneRotation {
  std::size_t first = 0;
  std::size_t second = 0;
  double angle = 0.0;
};

enum class LayerKind { kField, kBond };

/// Commuting rotations on disjoint mode pairs. Field layers use pairs
/// (2i, 2i+1); bond layers use pairs (2i+1, 2i+2).
struct PlaneRotationLayer {
  LayerKind kind = LayerKind::kField;
  std::vector<PlaneRotation> rotations;
};

/// exp(+i c P) with P = i a_j a_k rotates the pair (j, k) by
/// kRotationSign * 2c. Calibrated against the state-vector engine.
inline constexpr double kRotationSign = 1.0;
/// <Z_i Z_{i+1}> = kCorrelatorSign * M(2i+1, 2i+2). Calibrated likewise.
inline constexpr double kCorrelatorSign = 1.0;

/// Layers for one Trotter step: returns {bond layer, field layer}; the bond
/// layer acts first. Zero coefficients produce no rotation.
[[nodiscard]] std::pair<PlaneRotationLayer, PlaneRotationLayer> step_layers(
    const RealVector& field_coeffs, const RealVector& bond_coeffs);

/// M -> O M O^T in place. O(L) work per rotation.
void apply_layer_inplace(MajoranaCovariance& cov, const PlaneRotationLayer& layer);

[[nodiscard]] MajoranaCovariance apply_layer(MajoranaCovariance cov, const PlaneRotationLayer& layer);

/// Evolves initial_covariance(L) through every step of `perturbed`. When
/// `defect_trace` is non-null it receives the defect density after each step.
[[nodiscard]] MajoranaCovariance run_protocol(const PerturbedSchedule& perturbed,
                                              std::vector<double>* defect_trace = nullptr);

/// <Z_b Z_{b+1}> for 0-based bond b in [0, L-2].
[[nodiscard]] double zz_correlator(const MajoranaCovariance& cov, std::size_t bond);

/// d = (1 / (2(L-1))) sum_b (1 - <Z_b Z_{b+1}>)
[[nodiscard]] double defect_density(const MajoranaCovariance& cov);

}  // namespace kzsim
