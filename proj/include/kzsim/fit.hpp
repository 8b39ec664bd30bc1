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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "kzsim/curve.hpp"

namespace kzsim {

enum class FitModel { kKzPowerLaw, kNoiseLinear, kDisorderQuadratic, kTotal, kExperimental };

[[nodiscard]] const char* to_string(FitModel model);

/// Closed interval on the abscissa (N, or sigma for sigma sweeps).
struct FitWindow {
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();

  [[nodiscard]] bool contains(double x) const { return x >= min && x <= max; }
};

struct Coefficient {
  std::string name;
  double value = 0.0;
  double error = 0.0;
};

struct ResidualStats {
  std::size_t n_points = 0;
  std::size_t dof = 0;
  double chi2 = 0.0;
  double reduced_chi2 = 0.0;
  /// Root mean square of unweighted residuals in the space the fit was done in.
  double rms = 0.0;
  bool weighted = false;
};

// Flags attached to fits.
inline constexpr const char* kFlagSaturated = "suspected-saturated";
inline constexpr const char* kFlagPoorPowerLaw = "poor-power-law";
inline constexpr const char* kFlagNonpositive = "nonpositive-excluded";
inline constexpr const char* kFlagDegenerate = "degenerate";
inline constexpr const char* kFlagNDependent = "n-dependent";

struct FitResult {
  FitModel model = FitModel::kKzPowerLaw;
  std::vector<Coefficient> coefficients;
  /// Abscissa range actually covered by the fitted points.
  FitWindow window;
  ResidualStats residuals;
  std::vector<std::string> flags;

  [[nodiscard]] const Coefficient& coefficient(const std::string& name) const;
  [[nodiscard]] double value(const std::string& name) const { return coefficient(name).value; }
  [[nodiscard]] double error(const std::string& name) const { return coefficient(name).error; }
  [[nodiscard]] bool has_flag(const std::string& flag) const;
  void add_flag(const std::string& flag);
  /// Throws DataError on an empty window or a negative/NaN error.
  void validate() const;
};

void to_json(nlohmann::json& j, const FitWindow& window);
void to_json(nlohmann::json& j, const FitResult& fit);

struct LinearFit {
  Eigen::VectorXd beta;
  Eigen::MatrixXd covariance;
  ResidualStats stats;
};

/// Least squares y ~ X beta. With `sigma` (all entries > 0) the fit is
/// weighted by 1/sigma^2 and the covariance is scaled by max(1, chi2/dof);
/// with an empty `sigma` the covariance is scaled by the residual variance.
/// Throws DataError for a rank-deficient design or too few rows.
[[nodiscard]] LinearFit linear_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                             const Eigen::VectorXd& sigma = {});

struct PowerLaw {
  double prefactor = 0.0;
  double prefactor_err = 0.0;
  double exponent = 0.0;
  double exponent_err = 0.0;
  ResidualStats stats;
};

/// y = a x^p fitted as log y = log a + p log x. Uses err/y as the log-space
/// error when every err > 0, otherwise an unweighted fit. With
/// `fixed_exponent` only the prefactor is fitted. All x, y must be > 0.
[[nodiscard]] PowerLaw fit_power_law(std::span<const double> x, std::span<const double> y,
                                     std::span<const double> err, const double* fixed_exponent = nullptr);

/// Inverse-variance mean of independent estimates; the error is scaled by
/// sqrt(max(1, chi2/(k-1))) when they disagree.
[[nodiscard]] Coefficient combine_estimates(const std::string& name, std::span<const Coefficient> estimates);

/// Threshold on the rms log residual of the free power-law fit above which
/// a curve is flagged as not following a power law.
inline constexpr double kPoorPowerLawRms = 0.05;
/// Points above this density are flagged as possibly saturated.
inline constexpr double kSaturationThreshold = 0.4;

/// Fixed exponent d = a N^(-1/2) (coefficient "a") and free d = a N^(-alpha)
/// (coefficients "a_free", "alpha"). Needs >= 3 positive points in window.
[[nodiscard]] FitResult fit_kz(const DefectCurve& curve, FitWindow window = {});

/// d - d_ideal against N at the curve's sigma_noise: free log-log fit
/// ("slope", "prefactor") and the slope-one coefficient "a_noise".
[[nodiscard]] FitResult fit_noise_vs_steps(const DefectCurve& noisy, const DefectCurve& ideal, FitWindow window = {});

/// d - d_ideal against sigma at fixed N: free log-log fit ("exponent",
/// "prefactor") and the sigma^2 coefficient "a_noise".
[[nodiscard]] FitResult fit_noise_vs_sigma(const SigmaSweep& sweep, FitWindow sigma_window = {});

struct NoiseLawFit {
  std::vector<FitResult> vs_steps;
  std::vector<FitResult> vs_sigma;
  /// "a_noise" combined over every individual fit.
  FitResult combined;
};

[[nodiscard]] NoiseLawFit fit_noise_law(std::span<const DefectCurve> step_sweeps, const DefectCurve& ideal,
                                        std::span<const SigmaSweep> sigma_sweeps, FitWindow steps_window = {},
                                        FitWindow sigma_window = {});

struct DisorderLawFit {
  /// One "a_disorder" fit per sweep, in input order.
  std::vector<FitResult> per_steps;
  /// Joint "a_disorder" over every point, plus "n_slope" of the per-sweep
  /// coefficients against N (zero when only one sweep is given).
  FitResult combined;
  bool n_independent = true;
};

/// d - d_ideal = a sigma^2 through the origin. Throws DataError when a sweep
/// has fewer than two distinct sigma values with at least one nonzero.
[[nodiscard]] DisorderLawFit fit_disorder_law(std::span<const SigmaSweep> sweeps);

/// N_opt against sigma: free log-log fit ("exponent", "prefactor_free") and
/// the fixed -4/3 coefficient "prefactor". Unweighted.
[[nodiscard]] FitResult fit_n_opt_law(std::span<const double> sigma, std::span<const double> n_opt);

struct SigmaEstimate {
  double sigma_noise = 0.0;
  double sigma_noise_err = 0.0;
  double sigma_disorder = 0.0;
  double sigma_disorder_err = 0.0;
  bool degenerate = false;
};

struct SigmaExtraction {
  /// Coefficients "c_noise" (per step) and "c_disorder" (constant).
  FitResult fit;
  /// d = d_ideal + sigma_noise^2 N + sigma_disorder^2.
  SigmaEstimate unit;
  /// d = d_ideal + a_noise sigma_noise^2 N + a_disorder sigma_disorder^2.
  SigmaEstimate scaled;
  double a_noise = 0.0;
  double a_disorder = 0.0;
};

inline constexpr double kDefaultANoise = 2.42;
inline constexpr double kDefaultADisorder = 1.36;

/// Weighted least squares of d - d_ideal against (N, 1) in the window.
[[nodiscard]] SigmaExtraction extract_sigma(const DefectCurve& measured, const DefectCurve& ideal,
                                            FitWindow window = {1.0, 11.0}, double a_noise = kDefaultANoise,
                                            double a_disorder = kDefaultADisorder);

void to_json(nlohmann::json& j, const SigmaEstimate& estimate);
void to_json(nlohmann::json& j, const SigmaExtraction& extraction);

}  // namespace kzsim
