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


#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "../support/oracle.hpp"
#include "../support/synthetic.hpp"
#include "kzsim/fit.hpp"
#include "kzsim/sampling.hpp"
#include "kzsim/types.hpp"

using namespace kzsim;
using testing::log_grid;
using testing::synthetic_curve;

namespace {

SigmaSweep sigma_sweep(std::int64_t n, double d_ideal, std::span<const double> sigmas,
                       const std::function<double(double)>& excess, double rel_err = 0.0,
                       std::mt19937_64* gen = nullptr) {
  SigmaSweep s{n, d_ideal, 0.0, {}};
  std::normal_distribution<double> normal;
  for (double sigma : sigmas) {
    const double dx = excess(sigma);
    const double err = rel_err * dx;
    s.points.push_back({sigma, d_ideal + dx + (gen != nullptr ? err * normal(*gen) : 0.0), err});
  }
  return s;
}

bool within(double value, double truth, double err, double k = 2.0) { return std::abs(value - truth) <= k * err; }

}  // namespace

TEST_SUITE("fit") {
  TEST_CASE("least squares recovers a straight line") {
    Eigen::MatrixXd X(4, 2);
    X << 1, 0, 1, 1, 1, 2, 1, 3;
    Eigen::VectorXd y(4);
    y << 1, 3, 5, 7;
    const LinearFit fit = linear_least_squares(X, y);
    CHECK(fit.beta(0) == doctest::Approx(1.0));
    CHECK(fit.beta(1) == doctest::Approx(2.0));
    CHECK(fit.stats.dof == 2);
    CHECK_THROWS_AS((void)linear_least_squares(X.topRows(1), y.head(1)), DataError);
  }

  TEST_CASE("exact KZ power law is recovered") {
    const DefectCurve c = synthetic_curve(log_grid(1, 1000, 30), [](double n) { return 0.3 / std::sqrt(n); });
    const FitResult f = fit_kz(c);
    CHECK(f.value("a") == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(f.value("alpha") == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(f.value("a_free") == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(f.model == FitModel::kKzPowerLaw);
    CHECK_FALSE(f.has_flag(kFlagPoorPowerLaw));
    CHECK_NOTHROW(f.validate());
  }

  TEST_CASE("KZ fit respects the window and needs three points") {
    const DefectCurve c = synthetic_curve({1, 2, 60, 100, 200}, [](double n) { return 0.3 / std::sqrt(n); });
    const FitResult f = fit_kz(c, {51.0, 1e9});
    CHECK(f.window.min == 60.0);
    CHECK(f.residuals.n_points == 3);
    CHECK_THROWS_AS((void)fit_kz(c, {101.0, 1e9}), DataError);
  }

  TEST_CASE("exponential finite-size regime is flagged") {
    // KZ decay that crosses over to exp(-N/L^2) suppression for N >> L^2.
    const DefectCurve c = synthetic_curve(log_grid(1, 3000, 30), [](double n) {
      return 0.3 / std::sqrt(n) * std::exp(-n / 400.0);
    });
    CHECK(fit_kz(c).has_flag(kFlagPoorPowerLaw));
  }

  TEST_CASE("saturated points are flagged") {
    const DefectCurve c = synthetic_curve({1, 2, 4, 8}, [](double n) { return 0.5 / std::sqrt(n); });
    CHECK(fit_kz(c).has_flag(kFlagSaturated));
  }

  TEST_CASE("noise law recovers a_noise from both sweep directions") {
    const auto grid = log_grid(11, 3000, 20);
    const auto ideal_f = [](double n) { return 0.323 / std::sqrt(n); };
    const DefectCurve ideal = synthetic_curve(grid, ideal_f);
    const double sigma = 1e-3;
    const DefectCurve noisy =
        synthetic_curve(grid, [&](double n) { return ideal_f(n) + 2.42 * n * sigma * sigma; }, 0.0, nullptr, sigma);
    const FitResult vs_n = fit_noise_vs_steps(noisy, ideal);
    CHECK(vs_n.value("slope") == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(vs_n.value("a_noise") == doctest::Approx(2.42).epsilon(0.01));

    const std::vector<double> sigmas{1e-3, 2e-3, 4e-3, 8e-3};
    const SigmaSweep sweep = sigma_sweep(1000, ideal_f(1000), sigmas, [](double s) { return 2.42 * 1000 * s * s; });
    const FitResult vs_s = fit_noise_vs_sigma(sweep);
    CHECK(vs_s.value("exponent") == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(vs_s.value("a_noise") == doctest::Approx(2.42).epsilon(0.01));

    const std::vector<DefectCurve> curves{noisy};
    const std::vector<SigmaSweep> sweeps{sweep};
    const NoiseLawFit law = fit_noise_law(curves, ideal, sweeps);
    CHECK(law.combined.value("a_noise") == doctest::Approx(2.42).epsilon(0.01));
  }

  TEST_CASE("noise law rejects mismatched grids") {
    const DefectCurve ideal = synthetic_curve({10, 20, 40}, [](double n) { return 0.3 / std::sqrt(n); });
    const DefectCurve noisy =
        synthetic_curve({10, 20, 30}, [](double n) { return 0.3 / std::sqrt(n) + 1e-3 * n; }, 0.0, nullptr, 0.01);
    CHECK_THROWS_WITH_AS((void)fit_noise_vs_steps(noisy, ideal), doctest::Contains("mismatched grids"), DataError);
  }

  TEST_CASE("disorder law recovers a quadratic and its N-independence") {
    const std::vector<double> sigmas{0.0, 0.05, 0.1, 0.2};
    std::vector<SigmaSweep> sweeps;
    for (std::int64_t n : {20, 100, 500}) {
      sweeps.push_back(sigma_sweep(n, 0.323 / std::sqrt(double(n)), sigmas, [](double s) { return 1.36 * s * s; }));
    }
    const DisorderLawFit law = fit_disorder_law(sweeps);
    CHECK(law.combined.value("a_disorder") == doctest::Approx(1.36).epsilon(1e-9));
    CHECK(law.n_independent);
    CHECK(std::abs(law.combined.value("n_slope")) < 1e-9);
    CHECK(law.per_steps.size() == 3);
  }

  TEST_CASE("disorder law flags N dependence") {
    const std::vector<double> sigmas{0.05, 0.1, 0.2};
    std::vector<SigmaSweep> sweeps;
    std::mt19937_64 gen(3);
    for (std::int64_t n : {20, 100, 500}) {
      const double a = 1.0 + 1e-3 * static_cast<double>(n);
      sweeps.push_back(sigma_sweep(n, 0.05, sigmas, [a](double s) { return a * s * s; }, 0.01, &gen));
    }
    const DisorderLawFit law = fit_disorder_law(sweeps);
    CHECK_FALSE(law.n_independent);
    CHECK(law.combined.has_flag(kFlagNDependent));
  }

  TEST_CASE("zero disorder fits to zero") {
    const std::vector<double> sigmas{0.05, 0.1, 0.2};
    std::mt19937_64 gen(4);
    std::normal_distribution<double> normal;
    SigmaSweep s{100, 0.03, 0.0, {}};
    for (double sigma : sigmas) s.points.push_back({sigma, 0.03 + 1e-3 * normal(gen), 1e-3});
    const std::vector<SigmaSweep> sweeps{s};
    const DisorderLawFit law = fit_disorder_law(sweeps);
    CHECK(within(law.combined.value("a_disorder"), 0.0, law.combined.error("a_disorder"), 3.0));
  }

  TEST_CASE("disorder law needs sigma spread") {
    const std::vector<double> sigmas{0.0, 0.1, 0.1};
    const std::vector<SigmaSweep> sweeps{sigma_sweep(10, 0.1, sigmas, [](double s) { return s * s; })};
    CHECK_THROWS_WITH_AS((void)fit_disorder_law(sweeps), doctest::Contains("insufficient spread"), DataError);
  }

  TEST_CASE("N_opt law recovers the -4/3 exponent") {
    std::vector<double> sigma{0.003, 0.005, 0.01, 0.02};
    std::vector<double> n_opt;
    for (double s : sigma) n_opt.push_back(0.164 * std::pow(s, -4.0 / 3.0));
    const FitResult f = fit_n_opt_law(sigma, n_opt);
    CHECK(f.value("exponent") == doctest::Approx(-4.0 / 3.0).epsilon(1e-9));
    CHECK(f.value("prefactor") == doctest::Approx(0.164).epsilon(1e-9));
  }

  TEST_CASE("sigma extraction recovers generating values") {
    const auto grid = log_grid(1, 11, 11);
    const DefectCurve ideal = synthetic_curve(grid, [](double n) { return 0.3 / std::sqrt(n); });
    const double sn = 0.15;
    const double sd = 0.10;
    const DefectCurve measured =
        synthetic_curve(grid, [&](double n) { return 0.3 / std::sqrt(n) + sn * sn * n + sd * sd; });
    const SigmaExtraction x = extract_sigma(measured, ideal);
    CHECK(x.unit.sigma_noise == doctest::Approx(sn).epsilon(1e-9));
    CHECK(x.unit.sigma_disorder == doctest::Approx(sd).epsilon(1e-9));
    CHECK(x.scaled.sigma_noise == doctest::Approx(sn / std::sqrt(kDefaultANoise)).epsilon(1e-9));
    CHECK(x.scaled.sigma_disorder == doctest::Approx(sd / std::sqrt(kDefaultADisorder)).epsilon(1e-9));
    CHECK_FALSE(x.unit.degenerate);
    CHECK(x.fit.model == FitModel::kExperimental);
  }

  TEST_CASE("sigma extraction flags a negative coefficient") {
    const auto grid = log_grid(1, 11, 11);
    const DefectCurve ideal = synthetic_curve(grid, [](double n) { return 0.3 / std::sqrt(n); });
    const DefectCurve measured = synthetic_curve(grid, [](double n) { return 0.3 / std::sqrt(n) + 0.01 - 1e-4 * n; });
    const SigmaExtraction x = extract_sigma(measured, ideal);
    CHECK(x.unit.degenerate);
    CHECK(x.unit.sigma_noise == 0.0);
    CHECK(x.fit.has_flag(kFlagDegenerate));
  }

  TEST_CASE("zero-noise engine data extracts zero sigma") {
    DefectCurve ideal;
    DefectCurve measured;
    for (std::int64_t n = 1; n <= 11; ++n) {
      const PerturbedSchedule p = ideal_schedule(build_schedule(static_cast<std::size_t>(n)), 6);
      const double d = defect_density(run_protocol(p));
      ideal.points.push_back({n, d, 0.0, 1});
      const DefectEstimate est = defect_density_from_bitstrings(
          sample_bitstrings(apply_circuit_statevector(DenseState::plus_state(6), p), 4096, static_cast<std::uint64_t>(n)));
      measured.points.push_back({n, est.d, est.std_error, 4096});
    }
    const SigmaExtraction x = extract_sigma(measured, ideal);
    CHECK(x.unit.sigma_noise <= 2.0 * x.unit.sigma_noise_err + 1e-12);
    CHECK(x.unit.sigma_disorder <= 2.0 * x.unit.sigma_disorder_err + 1e-12);
  }

  TEST_CASE("fit recovery over random trials") {
    std::mt19937_64 gen(2024);
    std::normal_distribution<double> normal;
    const int trials = 100;
    int kz_ok = 0, noise_ok = 0, disorder_ok = 0, sigma_ok = 0;
    const auto grid = log_grid(51, 1000, 15);
    const auto small = log_grid(1, 11, 11);
    for (int t = 0; t < trials; ++t) {
      const DefectCurve kz = synthetic_curve(grid, [](double n) { return 0.323 / std::sqrt(n); }, 0.02, &gen);
      kz_ok += within(fit_kz(kz).value("a"), 0.323, fit_kz(kz).error("a"));

      const DefectCurve ideal = synthetic_curve(grid, [](double n) { return 0.323 / std::sqrt(n); });
      const DefectCurve noisy = synthetic_curve(
          grid, [](double n) { return 0.323 / std::sqrt(n) + 2.42 * n * 1e-6; }, 0.005, &gen, 1e-3);
      const FitResult fn = fit_noise_vs_steps(noisy, ideal);
      noise_ok += within(fn.value("a_noise"), 2.42, fn.error("a_noise"));

      const std::vector<double> sig{0.05, 0.1, 0.15, 0.2};
      const std::vector<SigmaSweep> sweeps{
          sigma_sweep(100, 0.0323, sig, [](double s) { return 1.36 * s * s; }, 0.03, &gen)};
      const DisorderLawFit fd = fit_disorder_law(sweeps);
      disorder_ok += within(fd.combined.value("a_disorder"), 1.36, fd.combined.error("a_disorder"));

      const DefectCurve id6 = synthetic_curve(small, [](double n) { return 0.3 / std::sqrt(n); });
      const DefectCurve m6 = synthetic_curve(
          small, [](double n) { return 0.3 / std::sqrt(n) + 0.0225 * n + 0.01; }, 0.02, &gen);
      const SigmaExtraction xs = extract_sigma(m6, id6);
      sigma_ok += within(xs.fit.value("c_noise"), 0.0225, xs.fit.error("c_noise"));
    }
    // Two standard errors cover about 95% of trials.
    CHECK(kz_ok >= 88);
    CHECK(noise_ok >= 88);
    CHECK(disorder_ok >= 88);
    CHECK(sigma_ok >= 88);
  }

  TEST_CASE("fit results serialize and validate") {
    const DefectCurve c = synthetic_curve(log_grid(1, 100, 10), [](double n) { return 0.3 / std::sqrt(n); });
    nlohmann::json j = fit_kz(c);
    CHECK(j.at("model") == "kz-power-law");
    CHECK(j.at("coefficients").size() == 3);
    FitResult bad;
    bad.coefficients = {{"x", 1.0, -1.0}};
    CHECK_THROWS_AS(bad.validate(), DataError);
  }
}
