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

#include "kzsim/protocol.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "kzsim/rng.hpp"

namespace kzsim {
namespace {

// Stream tags for the four independent sectors.
constexpr std::uint64_t kNoiseFieldTag = 1;
constexpr std::uint64_t kNoiseBondTag = 2;
constexpr std::uint64_t kDisorderFieldTag = 3;
constexpr std::uint64_t kDisorderBondTag = 4;

constexpr std::uint64_t entry_counter(std::size_t step, std::size_t term) {
  return (static_cast<std::uint64_t>(step) << 32) | static_cast<std::uint64_t>(term);
}

void fill_noise(RealMatrix& table, const CounterRng& rng, double sigma) {
  if (sigma == 0.0) {
    table.setZero();
    return;
  }
  for (Eigen::Index n = 0; n < table.rows(); ++n) {
    for (Eigen::Index i = 0; i < table.cols(); ++i) {
      table(n, i) = sigma * rng.normal(entry_counter(static_cast<std::size_t>(n), static_cast<std::size_t>(i)));
    }
  }
}

void fill_disorder(RealVector& values, const CounterRng& rng, double sigma) {
  if (sigma == 0.0) {
    values.setZero();
    return;
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    values(i) = sigma * rng.normal(entry_counter(0, static_cast<std::size_t>(i)));
  }
}

RealMatrix json_to_matrix(const nlohmann::json& rows, Eigen::Index n_cols) {
  RealMatrix m(static_cast<Eigen::Index>(rows.size()), n_cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != n_cols) {
      throw DataError("ragged matrix row in JSON");
    }
    for (Eigen::Index c = 0; c < n_cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

nlohmann::json matrix_to_json(const RealMatrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_to_json(const RealVector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

RealVector json_to_vector(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

Schedule build_schedule(std::size_t n_steps) {
  if (n_steps == 0) throw ConfigError("build_schedule: n_steps must be at least 1");
  Schedule schedule;
  schedule.n_steps = n_steps;
  schedule.steps.reserve(n_steps);
  const double denom = 2.0 * static_cast<double>(n_steps + 1);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double theta = static_cast<double>(n) * std::numbers::pi / denom;
    schedule.steps.push_back({theta, std::cos(theta), std::sin(theta)});
  }
  return schedule;
}

RandomnessRealization sample_randomness(const RandomnessConfig& config, std::size_t n_qubits,
                                        std::size_t n_steps) {
  if (n_qubits < 2) throw ConfigError("sample_randomness: need at least 2 qubits");
  if (!(config.sigma_noise >= 0.0) || !(config.sigma_disorder >= 0.0)) {
    throw ConfigError("sample_randomness: standard deviations must be nonnegative");
  }
  const CounterRng base = CounterRng(config.seed).split(config.realization_index);
  RandomnessRealization r = zero_randomness(n_qubits, n_steps);
  fill_noise(r.noise_x, base.split(kNoiseFieldTag), config.sigma_noise);
  fill_noise(r.noise_zz, base.split(kNoiseBondTag), config.sigma_noise);
  fill_disorder(r.disorder_x, base.split(kDisorderFieldTag), config.sigma_disorder);
  fill_disorder(r.disorder_zz, base.split(kDisorderBondTag), config.sigma_disorder);
  return r;
}

RandomnessRealization zero_randomness(std::size_t n_qubits, std::size_t n_steps) {
  if (n_qubits < 2) throw ConfigError("zero_randomness: need at least 2 qubits");
  const auto L = static_cast<Eigen::Index>(n_qubits);
  const auto N = static_cast<Eigen::Index>(n_steps);
  RandomnessRealization r;
  r.noise_x = RealMatrix::Zero(N, L);
  r.noise_zz = RealMatrix::Zero(N, L - 1);
  r.disorder_x = RealVector::Zero(L);
  r.disorder_zz = RealVector::Zero(L - 1);
  return r;
}

const char* to_string(NoiseCoupling coupling) {
  return coupling == NoiseCoupling::kAdditive ? "additive" : "multiplicative";
}

NoiseCoupling parse_noise_coupling(std::string_view name) {
  if (name == "additive") return NoiseCoupling::kAdditive;
  if (name == "multiplicative") return NoiseCoupling::kMultiplicative;
  throw ConfigError("unknown noise coupling '" + std::string(name) + "'");
}

PerturbedSchedule perturb_schedule(const Schedule& schedule, const RandomnessRealization& realization,
                                   NoiseCoupling coupling) {
  const auto N = static_cast<Eigen::Index>(schedule.n_steps);
  const Eigen::Index L = realization.noise_x.cols();
  if (schedule.steps.size() != schedule.n_steps || realization.noise_x.rows() != N ||
      realization.noise_zz.rows() != N || realization.noise_zz.cols() != L - 1 ||
      realization.disorder_x.size() != L || realization.disorder_zz.size() != L - 1 || L < 2) {
    throw ConfigError("perturb_schedule: realization shape does not match schedule");
  }
  PerturbedSchedule out;
  out.n_steps = schedule.n_steps;
  out.n_qubits = static_cast<std::size_t>(L);
  out.field_coeffs.resize(N, L);
  out.bond_coeffs.resize(N, L - 1);
  for (Eigen::Index n = 0; n < N; ++n) {
    const auto& step = schedule.steps[static_cast<std::size_t>(n)];
    const bool additive = coupling == NoiseCoupling::kAdditive;
    for (Eigen::Index i = 0; i < L; ++i) {
      const double eta = realization.noise_x(n, i) + realization.disorder_x(i);
      out.field_coeffs(n, i) = additive ? step.hx + eta : step.hx * (1.0 + eta);
    }
    for (Eigen::Index i = 0; i < L - 1; ++i) {
      const double eta = realization.noise_zz(n, i) + realization.disorder_zz(i);
      out.bond_coeffs(n, i) = additive ? step.jz + eta : step.jz * (1.0 + eta);
    }
  }
  return out;
}

PerturbedSchedule ideal_schedule(const Schedule& schedule, std::size_t n_qubits) {
  return perturb_schedule(schedule, zero_randomness(n_qubits, schedule.n_steps));
}

PerturbedSchedule empty_schedule(std::size_t n_qubits) {
  if (n_qubits < 2) throw ConfigError("empty_schedule: need at least 2 qubits");
  const auto L = static_cast<Eigen::Index>(n_qubits);
  PerturbedSchedule out;
  out.n_qubits = n_qubits;
  out.field_coeffs.resize(0, L);
  out.bond_coeffs.resize(0, L - 1);
  return out;
}

void to_json(nlohmann::json& j, const ScheduleStep& step) {
  j = nlohmann::json{{"theta_n", step.theta}, {"hx_n", step.hx}, {"jz_n", step.jz}};
}

void to_json(nlohmann::json& j, const Schedule& schedule) {
  j = nlohmann::json{{"n_steps", schedule.n_steps}, {"steps", schedule.steps}};
}

void from_json(const nlohmann::json& j, Schedule& schedule) {
  schedule.n_steps = j.at("n_steps").get<std::size_t>();
  schedule.steps.clear();
  for (const auto& s : j.at("steps")) {
    schedule.steps.push_back({s.at("theta_n").get<double>(), s.at("hx_n").get<double>(), s.at("jz_n").get<double>()});
  }
  if (schedule.steps.size() != schedule.n_steps) throw DataError("schedule JSON: step count mismatch");
}

void to_json(nlohmann::json& j, const RandomnessConfig& config) {
  j = nlohmann::json{{"sigma_noise", config.sigma_noise},
                     {"sigma_disorder", config.sigma_disorder},
                     {"seed", config.seed},
                     {"realization_index", config.realization_index}};
}

void from_json(const nlohmann::json& j, RandomnessConfig& config) {
  config.sigma_noise = j.at("sigma_noise").get<double>();
  config.sigma_disorder = j.at("sigma_disorder").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.realization_index = j.at("realization_index").get<std::uint64_t>();
}

void to_json(nlohmann::json& j, const RandomnessRealization& r) {
  j = nlohmann::json{{"noise_x", matrix_to_json(r.noise_x)},
                     {"noise_zz", matrix_to_json(r.noise_zz)},
                     {"disorder_x", vector_to_json(r.disorder_x)},
                     {"disorder_zz", vector_to_json(r.disorder_zz)}};
}

void from_json(const nlohmann::json& j, RandomnessRealization& r) {
  r.disorder_x = json_to_vector(j.at("disorder_x"));
  r.disorder_zz = json_to_vector(j.at("disorder_zz"));
  r.noise_x = json_to_matrix(j.at("noise_x"), r.disorder_x.size());
  r.noise_zz = json_to_matrix(j.at("noise_zz"), r.disorder_zz.size());
  if (r.disorder_zz.size() + 1 != r.disorder_x.size() || r.noise_x.rows() != r.noise_zz.rows()) {
    throw DataError("realization JSON: inconsistent shapes");
  }
}

void to_json(nlohmann::json& j, const PerturbedSchedule& p) {
  j = nlohmann::json{{"n_steps", p.n_steps},
                     {"n_qubits", p.n_qubits},
                     {"field_coeffs", matrix_to_json(p.field_coeffs)},
                     {"bond_coeffs", matrix_to_json(p.bond_coeffs)}};
}

}  // namespace kzsim
