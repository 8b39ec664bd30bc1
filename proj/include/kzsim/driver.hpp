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

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "kzsim/curve.hpp"
#include "kzsim/fit.hpp"
#include "kzsim/protocol.hpp"
#include "kzsim/sampling.hpp"

namespace kzsim {

enum class Engine { kMajorana, kStateVector, kDensityMatrix, kTrajectories };
enum class NoiseModelKind { kGaussian, kPauli, kT1T2 };

[[nodiscard]] const char* to_string(Engine engine);
[[nodiscard]] const char* to_string(NoiseModelKind model);
[[nodiscard]] Engine parse_engine(std::string_view name);
[[nodiscard]] NoiseModelKind parse_noise_model(std::string_view name);

struct RunConfig {
  std::string subcommand;

  std::vector<std::size_t> qubits;
  /// Explicit N values; when empty the range below is used.
  std::vector<std::int64_t> steps;
  std::int64_t n_min = 0;
  std::int64_t n_max = -1;
  /// 0: every integer in [n_min, n_max]; otherwise log-spaced count.
  std::size_t n_count = 0;

  std::vector<double> sigma_noise;
  std::vector<double> sigma_disorder;
  std::size_t realizations = 1;
  std::size_t shots = 0;
  std::uint64_t seed = 1;
  Engine engine = Engine::kMajorana;
  NoiseModelKind noise_model = NoiseModelKind::kGaussian;
  NoiseCoupling coupling = NoiseCoupling::kAdditive;

  std::filesystem::path out_dir;
  std::size_t jobs = 1;

  std::optional<double> window_min;
  std::optional<double> window_max;
  std::optional<double> sigma_window_min;
  std::optional<double> sigma_window_max;

  double a_ideal = 0.323;
  double a_noise = kDefaultANoise;
  double a_disorder = kDefaultADisorder;

  // nopt-scan: geometric N grid around the predicted optimum.
  double grid_ratio = 1.03;
  double grid_span = 3.0;

  // dense-compare
  double fidelity = 0.95;
  std::filesystem::path pauli_rates_file;
  double t1 = 30.1e-6;
  double t2 = 14.5e-6;
  double dt_one_qubit = 32e-9;
  double dt_two_qubit = 176e-9;
  bool include_gaussian = false;
  bool write_bitstrings = false;

  // ingest-fit
  std::filesystem::path data_dir;

  /// Text written verbatim as config.ini in the output directory.
  std::string config_text;
};

void to_json(nlohmann::json& j, const RunConfig& config);

/// Explicit list (sorted, deduplicated) or the configured range.
/// Throws ConfigError when empty or negative.
[[nodiscard]] std::vector<std::int64_t> resolved_steps(const RunConfig& config);

/// Geometric integer grid [center / span, center * span] with ratio > 1.
[[nodiscard]] std::vector<std::int64_t> geometric_steps(double center, double span, double ratio);

/// Throws ConfigError for illegal or inconsistent settings of config.subcommand.
void validate(const RunConfig& config);

/// Seed for one grid point; the realization index is applied on top of it
/// by sample_randomness.
[[nodiscard]] std::uint64_t point_seed(std::uint64_t master, std::size_t n_qubits, std::int64_t n_steps,
                                       std::size_t noise_index, std::size_t disorder_index);

/// Defect density of one Gaussian-model realization. Exact unless
/// `shots` > 0, in which case it is estimated from sampled bitstrings (dense
/// engines only).
[[nodiscard]] DefectEstimate realization_defect_density(Engine engine, NoiseCoupling coupling, std::size_t n_qubits,
                                                        std::int64_t n_steps, const RandomnessConfig& randomness,
                                                        std::size_t shots);

/// Mean and standard error over realizations. With one realization the
/// error is its own shot error.
[[nodiscard]] CurvePoint aggregate(std::int64_t n_steps, const std::vector<DefectEstimate>& realizations);

/// Calls body(i) for i in [0, count) on up to `jobs` threads. Each index is
/// run exactly once; the first exception is rethrown after all workers stop.
template <typename Body>
void parallel_for(std::size_t count, std::size_t jobs, Body&& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
          try {
            body(i);
          } catch (...) {
            const std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

/// Output directory of one invocation. Every file written through it is
/// listed in manifest.json by finish().
class OutputDir {
 public:
  OutputDir(std::filesystem::path root, const RunConfig& config);

  [[nodiscard]] const std::filesystem::path& root() const { return root_; }
  void write_text(const std::string& name, const std::string& text);
  void write_json(const std::string& name, const nlohmann::json& value);
  void write_curve(const std::string& stem, const DefectCurve& curve);
  void write_bitstrings(const std::string& name, const std::vector<Bitstring>& samples);
  void finish(const nlohmann::json& summary = {});

 private:
  std::filesystem::path root_;
  std::string subcommand_;
  std::uint64_t seed_;
  std::vector<std::string> files_;
};

}  // namespace kzsim
