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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace kzsim {

struct CurvePoint {
  std::int64_t n_steps = 0;
  double d = 0.0;
  double err = 0.0;
  std::int64_t n_realizations = 0;
};

struct CurveMetadata {
  std::size_t n_qubits = 0;
  double sigma_noise = 0.0;
  double sigma_disorder = 0.0;
  std::string engine = "majorana";
  std::uint64_t seed = 0;
};

/// Mean defect density as a function of the number of steps.
struct DefectCurve {
  std::vector<CurvePoint> points;
  CurveMetadata metadata;

  /// Throws DataError unless N is strictly increasing, d in [0, 1], err >= 0.
  void validate() const;
  [[nodiscard]] const CurvePoint* find(std::int64_t n_steps) const;
  [[nodiscard]] std::vector<double> steps() const;
  [[nodiscard]] std::vector<double> values() const;
  [[nodiscard]] std::vector<double> errors() const;
};

/// Formats a double with 17 significant digits; round-trips exactly.
[[nodiscard]] std::string format_double(double value);

/// Header "N,d,err,n_realizations".
void write_curve_csv(std::ostream& out, const DefectCurve& curve);
[[nodiscard]] std::vector<CurvePoint> read_curve_csv(std::istream& in);

void to_json(nlohmann::json& j, const CurveMetadata& metadata);
void from_json(const nlohmann::json& j, CurveMetadata& metadata);

/// Writes <stem>.csv and <stem>.json next to each other.
void save_curve(const std::filesystem::path& stem, const DefectCurve& curve);
[[nodiscard]] DefectCurve load_curve(const std::filesystem::path& stem);

/// Defect density at one N for several perturbation strengths.
struct SigmaPoint {
  double sigma = 0.0;
  double d = 0.0;
  double err = 0.0;
};

struct SigmaSweep {
  std::int64_t n_steps = 0;
  double d_ideal = 0.0;
  double d_ideal_err = 0.0;
  std::vector<SigmaPoint> points;
};

}  // namespace kzsim
