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
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kzsim/types.hpp"

namespace kzsim {

/// One Trotter step of the adiabatic path.
struct ScheduleStep {
  double theta = 0.0;  // radians
  double hx = 0.0;     // field coefficient, cos(theta)
  double jz = 0.0;     // bond coefficient, sin(theta)
};

/// The quarter-circle path theta_n = n*pi / (2(N+1)), n = 1..N, from the
/// paramagnet (hx = 1) towards the ferromagnet (jz = 1).
struct Schedule {
  std::size_t n_steps = 0;
  std::vector<ScheduleStep> steps;
};

[[nodiscard]] Schedule build_schedule(std::size_t n_steps);

/// Gaussian multiplicative randomness on the Hamiltonian coefficients.
/// `sigma_noise` is redrawn every step and term; `sigma_disorder` is drawn
/// once per term and held fixed over the protocol.
struct RandomnessConfig {
  double sigma_noise = 0.0;
  double sigma_disorder = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t realization_index = 0;
};

/// Per-term samples for one realization. Rows index steps, columns index
/// qubits (field sector) or bonds (bond sector).
struct RandomnessRealization {
  RealMatrix noise_x;      // N x L
  RealMatrix noise_zz;     // N x (L-1)
  RealVector disorder_x;   // L
  RealVector disorder_zz;  // L-1

  [[nodiscard]] std::size_t n_steps() const { return static_cast<std::size_t>(noise_x.rows()); }
  [[nodiscard]] std::size_t n_qubits() const { return static_cast<std::size_t>(noise_x.cols()); }
};

/// Draws a realization. Entry (n, i) of each sector is
///   sigma * CounterRng(stream).normal((n << 32) | i)
/// with one stream per sector derived from (seed, realization_index), so a
/// given entry does not depend on the L or N it is requested with.
[[nodiscard]] RandomnessRealization sample_randomness(const RandomnessConfig& config,
                                                      std::size_t n_qubits, std::size_t n_steps);

/// All-zero realization of the given shape.
[[nodiscard]] RandomnessRealization zero_randomness(std::size_t n_qubits, std::size_t n_steps);

/// How a realization enters the step coefficients.
///   kMultiplicative: h = hx_n (1 + eta_noise + eta_disorder)
///   kAdditive:       h = hx_n + eta_noise + eta_disorder
/// and likewise for the bond sector with jz_n. The additive form applies
/// the same absolute kick at every point of the path; it is the form whose
/// defect coefficients match the published noise and disorder laws.
enum class NoiseCoupling { kMultiplicative, kAdditive };

[[nodiscard]] const char* to_string(NoiseCoupling coupling);
/// Parses "multiplicative" or "additive"; throws ConfigError otherwise.
[[nodiscard]] NoiseCoupling parse_noise_coupling(std::string_view name);

/// Coefficient tables consumed by both engines:
///   field_coeffs(n, i) = hx_n (1 + noise_x(n, i) + disorder_x(i))
///   bond_coeffs(n, i)  = jz_n (1 + noise_zz(n, i) + disorder_zz(i))
/// for the default multiplicative coupling. Step n evolves exp(+i sum_i J_{n,i} Z_i Z_{i+1}) first, then
/// exp(+i sum_i h_{n,i} X_i).
struct PerturbedSchedule {
  std::size_t n_steps = 0;
  std::size_t n_qubits = 0;
  RealMatrix field_coeffs;  // N x L
  RealMatrix bond_coeffs;   // N x (L-1)
};

[[nodiscard]] PerturbedSchedule perturb_schedule(const Schedule& schedule,
                                                 const RandomnessRealization& realization,
                                                 NoiseCoupling coupling = NoiseCoupling::kMultiplicative);

/// Noiseless coefficient tables for an L-qubit chain.
[[nodiscard]] PerturbedSchedule ideal_schedule(const Schedule& schedule, std::size_t n_qubits);

/// Zero-step protocol; engines return the initial |+...+> state.
[[nodiscard]] PerturbedSchedule empty_schedule(std::size_t n_qubits);

void to_json(nlohmann::json& j, const ScheduleStep& step);
void to_json(nlohmann::json& j, const Schedule& schedule);
void from_json(const nlohmann::json& j, Schedule& schedule);
void to_json(nlohmann::json& j, const RandomnessConfig& config);
void from_json(const nlohmann::json& j, RandomnessConfig& config);
void to_json(nlohmann::json& j, const RandomnessRealization& realization);
void from_json(const nlohmann::json& j, RandomnessRealization& realization);
void to_json(nlohmann::json& j, const PerturbedSchedule& perturbed);

}  // namespace kzsim
