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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kzsim/curve.hpp"
#include "kzsim/driver.hpp"
#include "kzsim/fit.hpp"
#include "kzsim/scaling.hpp"

namespace kzsim {

// Default fit windows on N.
inline constexpr double kKzWindowMin = 51.0;
inline constexpr double kNoiseWindowMin = 11.0;
inline constexpr double kIngestWindowMin = 1.0;
inline constexpr double kIngestWindowMax = 11.0;

struct KzScanResult {
  std::vector<DefectCurve> curves;
  /// Per curve; empty when the window held too few points (see errors).
  std::vector<std::optional<FitResult>> fits;
  std::vector<std::string> errors;
};

struct NoiseScanCurve {
  std::size_t noise_index = 0;
  std::size_t disorder_index = 0;
  DefectCurve curve;
};

struct NoiseScanSystem {
  std::size_t n_qubits = 0;
  DefectCurve ideal;
  std::vector<NoiseScanCurve> curves;
  std::optional<NoiseLawFit> noise_law;
  std::optional<DisorderLawFit> disorder_law;
  std::string noise_error;
  std::string disorder_error;
};

struct NoiseScanResult {
  std::vector<NoiseScanSystem> systems;
};

struct NOptEntry {
  double sigma = 0.0;
  DefectCurve curve;
  NOptResult n_opt;
};

struct NOptSystem {
  std::size_t n_qubits = 0;
  std::vector<NOptEntry> entries;
  std::optional<FitResult> law;
  std::string law_error;
};

struct NOptScanResult {
  std::vector<NOptSystem> systems;
  double predicted_prefactor = 0.0;
};

struct DenseCompareSystem {
  std::size_t n_qubits = 0;
  DefectCurve pauli;
  DefectCurve t1t2;
  std::optional<DefectCurve> gaussian;
};

struct DenseCompareResult {
  std::vector<DenseCompareSystem> systems;
};

struct IngestSystem {
  std::size_t n_qubits = 0;
  DefectCurve measured;
  DefectCurve ideal;
  SigmaExtraction extraction;
};

struct IngestResult {
  std::vector<IngestSystem> systems;
  /// Set when at least two sizes were fitted.
  std::optional<bool> sigma_noise_decreases;
  std::optional<bool> sigma_disorder_decreases;
};

/// Each command validates the config, runs, and writes its output directory
/// (config snapshot, curves, fits.json, manifest.json) when out_dir is set.
[[nodiscard]] KzScanResult cmd_kz_scan(const RunConfig& config);
[[nodiscard]] NoiseScanResult cmd_noise_scan(const RunConfig& config);
[[nodiscard]] NOptScanResult cmd_nopt_scan(const RunConfig& config);
[[nodiscard]] DenseCompareResult cmd_dense_compare(const RunConfig& config);
[[nodiscard]] IngestResult cmd_ingest_fit(const RunConfig& config);
[[nodiscard]] nlohmann::json cmd_predict_nopt(const RunConfig& config);
[[nodiscard]] nlohmann::json cmd_random_walk(const RunConfig& config);
/// Domain-wall bitstrings with wall probability
/// d_ideal(L, N) + sigma_noise^2 N + sigma_disorder^2, one file per (L, N).
void cmd_synth_bitstrings(const RunConfig& config);

}  // namespace kzsim
