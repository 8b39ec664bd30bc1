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


#include "kzsim/fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "kzsim/types.hpp"

namespace kzsim {

const char* to_string(FitModel model) {
  switch (model) {
    case FitModel::kKzPowerLaw: return "kz-power-law";
    case FitModel::kNoiseLinear: return "noise-linear";
    case FitModel::kDisorderQuadratic: return "disorder-quadratic";
    case FitModel::kTotal: return "total";
    case FitModel::kExperimental: return "experimental";
  }
  return "unknown";
}

const Coefficient& FitResult::coefficient(const std::string& name) const {
  for (const Coefficient& c : coefficients) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("fit has no coefficient '" + name + "'");
}

bool FitResult::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

void FitResult::add_flag(const std::string& flag) {
  if (!has_flag(flag)) flags.push_back(flag);
}

void FitResult::validate() const {
  if (!(window.min <= window.max)) throw DataError("fit: empty window");
  for (const Coefficient& c : coefficients) {
    if (!(c.error >= 0.0)) throw DataError("fit: coefficient '" + c.name + "' has invalid error");
  }
}

void to_json(nlohmann::json& j, const FitWindow& window) {
  j = nlohmann::json{{"min", window.min}, {"max", window.max}};
}

void to_json(nlohmann::json& j, const FitResult& fit) {
  nlohmann::json coefficients = nlohmann::json::array();
  for (const Coefficient& c : fit.coefficients) {
    coefficients.push_back({{"name", c.name}, {"value", c.value}, {"error", c.error}});
  }
  j = nlohmann::json{{"model", to_string(fit.model)},
                     {"coefficients", coefficients},
                     {"window", fit.window},
                     {"residuals",
                      {{"n_points", fit.residuals.n_points},
                       {"dof", fit.residuals.dof},
                       {"chi2", fit.residuals.chi2},
                       {"reduced_chi2", fit.residuals.reduced_chi2},
                       {"rms", fit.residuals.rms},
                       {"weighted", fit.residuals.weighted}}},
                     {"flags", fit.flags}};
}

LinearFit linear_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& sigma) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (y.size() != n) throw ConfigError("least squares: design and data sizes differ");
  const bool weighted = sigma.size() > 0;
  if (weighted && sigma.size() != n) throw ConfigError("least squares: error vector size differs");
  if (n < p || p == 0) throw DataError("least squares: insufficient points");

  Eigen::MatrixXd a = design;
  Eigen::VectorXd b = y;
  if (weighted) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(sigma(i) > 0.0)) throw DataError("least squares: nonpositive error");
      a.row(i) /= sigma(i);
      b(i) /= sigma(i);
    }
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < p) throw DataError("least squares: degenerate design");

  LinearFit fit;
  fit.beta = qr.solve(b);
  const double chi2 = (b - a * fit.beta).squaredNorm();
  const auto dof = static_cast<std::size_t>(n - p);
  double scale = 1.0;
  if (weighted) {
    scale = dof > 0 ? std::max(1.0, chi2 / static_cast<double>(dof)) : 1.0;
  } else {
    scale = dof > 0 ? chi2 / static_cast<double>(dof) : 0.0;
  }
  fit.covariance = (a.transpose() * a).inverse() * scale;

  fit.stats.n_points = static_cast<std::size_t>(n);
  fit.stats.dof = dof;
  fit.stats.chi2 = chi2;
  fit.stats.reduced_chi2 = dof > 0 ? chi2 / static_cast<double>(dof) : 0.0;
  fit.stats.rms = std::sqrt((y - design * fit.beta).squaredNorm() / static_cast<double>(n));
  fit.stats.weighted = weighted;
  return fit;
}

namespace {

double sd(const LinearFit& fit, Eigen::Index k) { return std::sqrt(std::max(0.0, fit.covariance(k, k))); }

bool all_positive(std::span<const double> v) {
  return !v.empty() && std::all_of(v.begin(), v.end(), [](double e) { return e > 0.0; });
}

Eigen::VectorXd to_vector(std::span<const double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

// Residual vector and its uncertainty against a reference, matched by N.
struct Difference {
  std::vector<double> x, y, err, d;
  std::size_t nonpositive = 0;
};

Difference subtract(const DefectCurve& measured, const DefectCurve& ideal, FitWindow window) {
  Difference out;
  for (const CurvePoint& p : measured.points) {
    const auto n = static_cast<double>(p.n_steps);
    if (!window.contains(n)) continue;
    const CurvePoint* ref = ideal.find(p.n_steps);
    if (ref == nullptr) throw DataError("mismatched grids: no ideal point at N=" + std::to_string(p.n_steps));
    out.x.push_back(n);
    out.y.push_back(p.d - ref->d);
    out.err.push_back(std::hypot(p.err, ref->err));
    out.d.push_back(p.d);
  }
  return out;
}

FitWindow span_of(const std::vector<double>& x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return {*lo, *hi};
}

// Keeps entries with y > 0; returns how many were dropped.
std::size_t keep_positive(std::vector<double>& x, std::vector<double>& y, std::vector<double>& err) {
  std::vector<double> kx, ky, ke;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] > 0.0) {
      kx.push_back(x[i]);
      ky.push_back(y[i]);
      ke.push_back(err[i]);
    }
  }
  const std::size_t dropped = y.size() - ky.size();
  x = std::move(kx);
  y = std::move(ky);
  err = std::move(ke);
  return dropped;
}

// Interval half-width of sqrt over [c - e, c + e].
std::pair<double, double> root_with_error(double c, double e) {
  const double hi = std::sqrt(std::max(0.0, c + e));
  if (c <= 0.0) return {0.0, hi};
  const double lo = std::sqrt(std::max(0.0, c - e));
  return {std::sqrt(c), 0.5 * (hi - lo)};
}

}  // namespace

PowerLaw fit_power_law(std::span<const double> x, std::span<const double> y, std::span<const double> err,
                       const double* fixed_exponent) {
  if (x.size() != y.size() || (!err.empty() && err.size() != y.size())) {
    throw ConfigError("power law: size mismatch");
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::VectorXd lx(n), ly(n), lerr;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DataError("power law: nonpositive value");
    lx(i) = std::log(x[i]);
    ly(i) = std::log(y[i]);
  }
  if (all_positive(err)) {
    lerr.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) lerr(i) = err[i] / y[i];
  }

  PowerLaw out;
  if (fixed_exponent != nullptr) {
    const Eigen::MatrixXd design = Eigen::MatrixXd::Ones(n, 1);
    const LinearFit fit = linear_least_squares(design, ly - *fixed_exponent * lx, lerr);
    out.prefactor = std::exp(fit.beta(0));
    out.prefactor_err = out.prefactor * sd(fit, 0);
    out.exponent = *fixed_exponent;
    out.stats = fit.stats;
  } else {
    Eigen::MatrixXd design(n, 2);
    design.col(0).setOnes();
    design.col(1) = lx;
    const LinearFit fit = linear_least_squares(design, ly, lerr);
    out.prefactor = std::exp(fit.beta(0));
    out.prefactor_err = out.prefactor * sd(fit, 0);
    out.exponent = fit.beta(1);
    out.exponent_err = sd(fit, 1);
    out.stats = fit.stats;
  }
  return out;
}

Coefficient combine_estimates(const std::string& name, std::span<const Coefficient> estimates) {
  if (estimates.empty()) throw DataError("combine: no estimates");
  Coefficient out{name, 0.0, 0.0};
  const std::size_t k = estimates.size();
  const bool weighted = std::all_of(estimates.begin(), estimates.end(), [](const Coefficient& c) {
    return c.error > 0.0;
  });
  if (!weighted) {
    for (const Coefficient& c : estimates) out.value += c.value;
    out.value /= static_cast<double>(k);
    if (k > 1) {
      double ss = 0.0;
      for (const Coefficient& c : estimates) ss += (c.value - out.value) * (c.value - out.value);
      out.error = std::sqrt(ss / static_cast<double>(k - 1) / static_cast<double>(k));
    }
    return out;
  }
  double wsum = 0.0;
  for (const Coefficient& c : estimates) {
    const double w = 1.0 / (c.error * c.error);
    out.value += w * c.value;
    wsum += w;
  }
  out.value /= wsum;
  double chi2 = 0.0;
  for (const Coefficient& c : estimates) chi2 += std::pow((c.value - out.value) / c.error, 2);
  const double scale = k > 1 ? std::max(1.0, chi2 / static_cast<double>(k - 1)) : 1.0;
  out.error = std::sqrt(scale / wsum);
  return out;
}

FitResult fit_kz(const DefectCurve& curve, FitWindow window) {
  std::vector<double> x, y, err;
  FitResult result;
  result.model = FitModel::kKzPowerLaw;
  std::size_t dropped = 0;
  for (const CurvePoint& p : curve.points) {
    const auto n = static_cast<double>(p.n_steps);
    if (!window.contains(n) || p.n_steps <= 0) continue;
    if (p.d > kSaturationThreshold) result.add_flag(kFlagSaturated);
    if (!(p.d > 0.0)) {
      ++dropped;
      continue;
    }
    x.push_back(n);
    y.push_back(p.d);
    err.push_back(p.err);
  }
  if (x.size() < 3) throw DataError("fit_kz: fewer than 3 usable points in window");
  if (dropped > 0) result.add_flag(kFlagNonpositive);

  const double half = -0.5;
  const PowerLaw fixed = fit_power_law(x, y, err, &half);
  const PowerLaw free = fit_power_law(x, y, err);
  result.coefficients = {{"a", fixed.prefactor, fixed.prefactor_err},
                         {"a_free", free.prefactor, free.prefactor_err},
                         {"alpha", -free.exponent, free.exponent_err}};
  result.window = span_of(x);
  result.residuals = free.stats;
  if (free.stats.rms > kPoorPowerLawRms) result.add_flag(kFlagPoorPowerLaw);
  return result;
}

FitResult fit_noise_vs_steps(const DefectCurve& noisy, const DefectCurve& ideal, FitWindow window) {
  const double sigma = noisy.metadata.sigma_noise;
  if (!(sigma > 0.0)) throw DataError("fit_noise_vs_steps: curve has no step noise");
  Difference diff = subtract(noisy, ideal, window);
  FitResult result;
  result.model = FitModel::kNoiseLinear;
  if (std::any_of(diff.d.begin(), diff.d.end(), [](double d) { return d > kSaturationThreshold; })) {
    result.add_flag(kFlagSaturated);
  }
  if (keep_positive(diff.x, diff.y, diff.err) > 0) result.add_flag(kFlagNonpositive);
  if (diff.x.size() < 2) throw DataError("fit_noise_vs_steps: fewer than 2 usable points");

  const double one = 1.0;
  const PowerLaw free = fit_power_law(diff.x, diff.y, diff.err);
  const PowerLaw linear = fit_power_law(diff.x, diff.y, diff.err, &one);
  const double s2 = sigma * sigma;
  result.coefficients = {{"slope", free.exponent, free.exponent_err},
                         {"prefactor", free.prefactor, free.prefactor_err},
                         {"a_noise", linear.prefactor / s2, linear.prefactor_err / s2}};
  result.window = span_of(diff.x);
  result.residuals = free.stats;
  return result;
}

FitResult fit_noise_vs_sigma(const SigmaSweep& sweep, FitWindow sigma_window) {
  std::vector<double> x, y, err;
  FitResult result;
  result.model = FitModel::kNoiseLinear;
  for (const SigmaPoint& p : sweep.points) {
    if (!(p.sigma > 0.0) || !sigma_window.contains(p.sigma)) continue;
    if (p.d > kSaturationThreshold) result.add_flag(kFlagSaturated);
    x.push_back(p.sigma);
    y.push_back(p.d - sweep.d_ideal);
    err.push_back(std::hypot(p.err, sweep.d_ideal_err));
  }
  if (keep_positive(x, y, err) > 0) result.add_flag(kFlagNonpositive);
  if (x.size() < 2) throw DataError("fit_noise_vs_sigma: fewer than 2 usable points");

  const double two = 2.0;
  const PowerLaw free = fit_power_law(x, y, err);
  const PowerLaw quadratic = fit_power_law(x, y, err, &two);
  const auto n = static_cast<double>(sweep.n_steps);
  result.coefficients = {{"exponent", free.exponent, free.exponent_err},
                         {"prefactor", free.prefactor, free.prefactor_err},
                         {"a_noise", quadratic.prefactor / n, quadratic.prefactor_err / n}};
  result.window = span_of(x);
  result.residuals = free.stats;
  return result;
}

NoiseLawFit fit_noise_law(std::span<const DefectCurve> step_sweeps, const DefectCurve& ideal,
                          std::span<const SigmaSweep> sigma_sweeps, FitWindow steps_window,
                          FitWindow sigma_window) {
  NoiseLawFit out;
  std::vector<Coefficient> estimates;
  std::vector<double> steps;
  for (const DefectCurve& curve : step_sweeps) {
    out.vs_steps.push_back(fit_noise_vs_steps(curve, ideal, steps_window));
    estimates.push_back(out.vs_steps.back().coefficient("a_noise"));
    steps.push_back(out.vs_steps.back().window.min);
    steps.push_back(out.vs_steps.back().window.max);
  }
  for (const SigmaSweep& sweep : sigma_sweeps) {
    out.vs_sigma.push_back(fit_noise_vs_sigma(sweep, sigma_window));
    estimates.push_back(out.vs_sigma.back().coefficient("a_noise"));
    steps.push_back(static_cast<double>(sweep.n_steps));
  }
  if (estimates.empty()) throw ConfigError("fit_noise_law: no sweeps given");

  const Coefficient combined = combine_estimates("a_noise", estimates);
  out.combined.model = FitModel::kNoiseLinear;
  out.combined.coefficients = {combined};
  out.combined.window = span_of(steps);
  out.combined.residuals.n_points = estimates.size();
  out.combined.residuals.dof = estimates.size() - 1;
  for (const Coefficient& c : estimates) {
    if (c.error > 0.0) out.combined.residuals.chi2 += std::pow((c.value - combined.value) / c.error, 2);
  }
  if (out.combined.residuals.dof > 0) {
    out.combined.residuals.reduced_chi2 =
        out.combined.residuals.chi2 / static_cast<double>(out.combined.residuals.dof);
  }
  for (const auto* group : {&out.vs_steps, &out.vs_sigma}) {
    for (const FitResult& f : *group) {
      for (const std::string& flag : f.flags) out.combined.add_flag(flag);
    }
  }
  return out;
}

namespace {

FitResult fit_through_origin(const std::vector<double>& sigma, const std::vector<double>& y,
                             const std::vector<double>& err) {
  const auto n = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd design(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) design(i, 0) = sigma[static_cast<std::size_t>(i)] * sigma[static_cast<std::size_t>(i)];
  const LinearFit fit =
      linear_least_squares(design, to_vector(y), all_positive(err) ? to_vector(err) : Eigen::VectorXd{});
  FitResult result;
  result.model = FitModel::kDisorderQuadratic;
  result.coefficients = {{"a_disorder", fit.beta(0), sd(fit, 0)}};
  result.window = span_of(sigma);
  result.residuals = fit.stats;
  return result;
}

}  // namespace

DisorderLawFit fit_disorder_law(std::span<const SigmaSweep> sweeps) {
  if (sweeps.empty()) throw ConfigError("fit_disorder_law: no sweeps given");
  DisorderLawFit out;
  std::vector<double> all_sigma, all_y, all_err;
  std::vector<Coefficient> per_n;
  std::vector<double> n_values;
  bool saturated = false;
  for (const SigmaSweep& sweep : sweeps) {
    std::set<double> distinct;
    std::vector<double> sigma, y, err;
    for (const SigmaPoint& p : sweep.points) {
      if (!(p.sigma > 0.0)) continue;
      distinct.insert(p.sigma);
      saturated = saturated || p.d > kSaturationThreshold;
      sigma.push_back(p.sigma);
      y.push_back(p.d - sweep.d_ideal);
      err.push_back(std::hypot(p.err, sweep.d_ideal_err));
    }
    if (distinct.size() < 2) {
      throw DataError("fit_disorder_law: insufficient spread in sigma at N=" + std::to_string(sweep.n_steps));
    }
    out.per_steps.push_back(fit_through_origin(sigma, y, err));
    per_n.push_back(out.per_steps.back().coefficient("a_disorder"));
    n_values.push_back(static_cast<double>(sweep.n_steps));
    all_sigma.insert(all_sigma.end(), sigma.begin(), sigma.end());
    all_y.insert(all_y.end(), y.begin(), y.end());
    all_err.insert(all_err.end(), err.begin(), err.end());
  }

  out.combined = fit_through_origin(all_sigma, all_y, all_err);
  Coefficient slope{"n_slope", 0.0, 0.0};
  if (std::set<double>(n_values.begin(), n_values.end()).size() >= 2) {
    const auto k = static_cast<Eigen::Index>(per_n.size());
    Eigen::MatrixXd design(k, 2);
    Eigen::VectorXd a(k), e(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      design(i, 0) = 1.0;
      design(i, 1) = n_values[static_cast<std::size_t>(i)];
      a(i) = per_n[static_cast<std::size_t>(i)].value;
      e(i) = per_n[static_cast<std::size_t>(i)].error;
    }
    const bool weighted = (e.array() > 0.0).all();
    const LinearFit fit = linear_least_squares(design, a, weighted ? e : Eigen::VectorXd{});
    slope.value = fit.beta(1);
    slope.error = sd(fit, 1);
  }
  out.combined.coefficients.push_back(slope);
  out.n_independent = std::abs(slope.value) <= 2.0 * slope.error;
  if (!out.n_independent) out.combined.add_flag(kFlagNDependent);
  if (saturated) out.combined.add_flag(kFlagSaturated);
  return out;
}

FitResult fit_n_opt_law(std::span<const double> sigma, std::span<const double> n_opt) {
  if (sigma.size() != n_opt.size()) throw ConfigError("fit_n_opt_law: size mismatch");
  if (sigma.size() < 3) throw DataError("fit_n_opt_law: fewer than 3 points");
  const double four_thirds = -4.0 / 3.0;
  const PowerLaw free = fit_power_law(sigma, n_opt, {});
  const PowerLaw fixed = fit_power_law(sigma, n_opt, {}, &four_thirds);
  FitResult result;
  result.model = FitModel::kTotal;
  result.coefficients = {{"exponent", free.exponent, free.exponent_err},
                         {"prefactor_free", free.prefactor, free.prefactor_err},
                         {"prefactor", fixed.prefactor, fixed.prefactor_err}};
  result.window = span_of(std::vector<double>(sigma.begin(), sigma.end()));
  result.residuals = free.stats;
  return result;
}

SigmaExtraction extract_sigma(const DefectCurve& measured, const DefectCurve& ideal, FitWindow window,
                              double a_noise, double a_disorder) {
  if (!(a_noise > 0.0) || !(a_disorder > 0.0)) throw ConfigError("extract_sigma: coefficients must be positive");
  const Difference diff = subtract(measured, ideal, window);
  if (diff.x.size() < 3) throw DataError("extract_sigma: fewer than 3 points in window");

  const auto n = static_cast<Eigen::Index>(diff.x.size());
  Eigen::MatrixXd design(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = diff.x[static_cast<std::size_t>(i)];
    design(i, 1) = 1.0;
  }
  const LinearFit fit = linear_least_squares(design, to_vector(diff.y),
                                             all_positive(diff.err) ? to_vector(diff.err) : Eigen::VectorXd{});

  SigmaExtraction out;
  out.a_noise = a_noise;
  out.a_disorder = a_disorder;
  out.fit.model = FitModel::kExperimental;
  const Coefficient c_noise{"c_noise", fit.beta(0), sd(fit, 0)};
  const Coefficient c_disorder{"c_disorder", fit.beta(1), sd(fit, 1)};
  out.fit.coefficients = {c_noise, c_disorder};
  out.fit.window = span_of(diff.x);
  out.fit.residuals = fit.stats;
  if (std::any_of(diff.d.begin(), diff.d.end(), [](double d) { return d > kSaturationThreshold; })) {
    out.fit.add_flag(kFlagSaturated);
  }

  auto estimate = [&](double scale_noise, double scale_disorder) {
    SigmaEstimate e;
    std::tie(e.sigma_noise, e.sigma_noise_err) = root_with_error(c_noise.value / scale_noise, c_noise.error / scale_noise);
    std::tie(e.sigma_disorder, e.sigma_disorder_err) =
        root_with_error(c_disorder.value / scale_disorder, c_disorder.error / scale_disorder);
    e.degenerate = c_noise.value < 0.0 || c_disorder.value < 0.0;
    return e;
  };
  out.unit = estimate(1.0, 1.0);
  out.scaled = estimate(a_noise, a_disorder);
  if (out.unit.degenerate) out.fit.add_flag(kFlagDegenerate);
  return out;
}

void to_json(nlohmann::json& j, const SigmaEstimate& e) {
  j = nlohmann::json{{"sigma_noise", e.sigma_noise},
                     {"sigma_noise_err", e.sigma_noise_err},
                     {"sigma_disorder", e.sigma_disorder},
                     {"sigma_disorder_err", e.sigma_disorder_err},
                     {"degenerate", e.degenerate}};
}

void to_json(nlohmann::json& j, const SigmaExtraction& x) {
  j = nlohmann::json{{"fit", x.fit},
                     {"unit_coefficients", x.unit},
                     {"scaled_coefficients", x.scaled},
                     {"a_noise", x.a_noise},
                     {"a_disorder", x.a_disorder}};
}

}  // namespace kzsim
