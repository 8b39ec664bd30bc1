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


#include "kzsim/driver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "kzsim/density_matrix.hpp"
#include "kzsim/majorana.hpp"
#include "kzsim/rng.hpp"
#include "kzsim/statevector.hpp"
#include "kzsim/trajectories.hpp"
#include "kzsim/types.hpp"

namespace kzsim {

const char* to_string(Engine engine) {
  switch (engine) {
    case Engine::kMajorana: return "majorana";
    case Engine::kStateVector: return "statevector";
    case Engine::kDensityMatrix: return "density-matrix";
    case Engine::kTrajectories: return "trajectories";
  }
  return "unknown";
}

const char* to_string(NoiseModelKind model) {
  switch (model) {
    case NoiseModelKind::kGaussian: return "gaussian";
    case NoiseModelKind::kPauli: return "pauli";
    case NoiseModelKind::kT1T2: return "t1t2";
  }
  return "unknown";
}

Engine parse_engine(std::string_view name) {
  for (Engine e : {Engine::kMajorana, Engine::kStateVector, Engine::kDensityMatrix, Engine::kTrajectories}) {
    if (name == to_string(e)) return e;
  }
  throw ConfigError("unknown engine '" + std::string(name) + "'");
}

NoiseModelKind parse_noise_model(std::string_view name) {
  for (NoiseModelKind m : {NoiseModelKind::kGaussian, NoiseModelKind::kPauli, NoiseModelKind::kT1T2}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown noise model '" + std::string(name) + "'");
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

std::vector<std::int64_t> resolved_steps_or_empty(const RunConfig& config) {
  try {
    return resolved_steps(config);
  } catch (const ConfigError&) {
    return {};
  }
}

}  // namespace

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"subcommand", c.subcommand},
                     {"L", c.qubits},
                     {"N", resolved_steps_or_empty(c)},
                     {"sigma_noise", c.sigma_noise},
                     {"sigma_disorder", c.sigma_disorder},
                     {"realizations", c.realizations},
                     {"shots", c.shots},
                     {"seed", c.seed},
                     {"engine", to_string(c.engine)},
                     {"noise_model", to_string(c.noise_model)},
                     {"coupling", to_string(c.coupling)},
                     {"window_min", optional_json(c.window_min)},
                     {"window_max", optional_json(c.window_max)},
                     {"sigma_window_min", optional_json(c.sigma_window_min)},
                     {"sigma_window_max", optional_json(c.sigma_window_max)},
                     {"a_ideal", c.a_ideal},
                     {"a_noise", c.a_noise},
                     {"a_disorder", c.a_disorder}};
  if (c.subcommand == "nopt-scan") {
    j["grid_ratio"] = c.grid_ratio;
    j["grid_span"] = c.grid_span;
  }
  if (c.subcommand == "dense-compare") {
    j["fidelity"] = c.fidelity;
    j["pauli_rates"] = c.pauli_rates_file.string();
    j["t1"] = c.t1;
    j["t2"] = c.t2;
    j["dt_one_qubit"] = c.dt_one_qubit;
    j["dt_two_qubit"] = c.dt_two_qubit;
    j["include_gaussian"] = c.include_gaussian;
  }
  if (c.subcommand == "ingest-fit") j["data"] = c.data_dir.string();
}

std::vector<std::int64_t> resolved_steps(const RunConfig& config) {
  std::vector<std::int64_t> out;
  if (!config.steps.empty()) {
    out = config.steps;
  } else if (config.n_max >= config.n_min) {
    if (config.n_count == 0) {
      for (std::int64_t n = config.n_min; n <= config.n_max; ++n) out.push_back(n);
    } else {
      if (config.n_min < 1) throw ConfigError("log-spaced N range needs n-min >= 1");
      const double lo = std::log(static_cast<double>(config.n_min));
      const double hi = std::log(static_cast<double>(config.n_max));
      for (std::size_t k = 0; k < config.n_count; ++k) {
        const double t = config.n_count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(config.n_count - 1);
        out.push_back(std::llround(std::exp(lo + t * (hi - lo))));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw ConfigError("empty N range");
  if (out.front() < 0) throw ConfigError("N must be nonnegative");
  return out;
}

std::vector<std::int64_t> geometric_steps(double center, double span, double ratio) {
  if (!(center > 0.0) || !(span >= 1.0) || !(ratio > 1.0)) throw ConfigError("geometric grid: invalid parameters");
  std::vector<std::int64_t> out;
  for (double x = center / span; x <= center * span * (1.0 + 1e-12); x *= ratio) {
    out.push_back(std::max<std::int64_t>(1, std::llround(x)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

void check_sizes(Engine engine, const std::vector<std::size_t>& qubits) {
  for (std::size_t L : qubits) {
    if (engine == Engine::kDensityMatrix) {
      require(L <= kMaxDensityMatrixQubits, "size overflow: density-matrix engine supports L <= " +
                                                 std::to_string(kMaxDensityMatrixQubits));
    } else if (engine == Engine::kStateVector || engine == Engine::kTrajectories) {
      require(L <= kMaxStateVectorQubits,
              "size overflow: state-vector engines support L <= " + std::to_string(kMaxStateVectorQubits));
    }
  }
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

void validate(const RunConfig& c) {
  const std::string& cmd = c.subcommand;
  for (double s : c.sigma_noise) require(s >= 0.0, "sigma_noise must be nonnegative");
  for (double s : c.sigma_disorder) require(s >= 0.0, "sigma_disorder must be nonnegative");
  require(c.realizations >= 1, "realizations must be >= 1");

  const bool scan = cmd == "kz-scan" || cmd == "noise-scan" || cmd == "nopt-scan";
  if (scan || cmd == "dense-compare" || cmd == "synth-bitstrings") {
    require(!c.qubits.empty(), "no system sizes given");
    for (std::size_t L : c.qubits) require(L >= 2, "L must be >= 2");
  }
  if (scan) {
    require(c.noise_model == NoiseModelKind::kGaussian,
            std::string(to_string(c.noise_model)) + " noise model needs a dense engine; use dense-compare");
    require(c.shots == 0 || c.engine != Engine::kMajorana, "shot sampling needs a dense engine");
    check_sizes(c.engine, c.qubits);
  }
  if (cmd == "kz-scan") {
    require(all_zero(c.sigma_noise) && all_zero(c.sigma_disorder), "kz-scan takes no noise or disorder");
    (void)resolved_steps(c);
  } else if (cmd == "noise-scan") {
    (void)resolved_steps(c);
  } else if (cmd == "nopt-scan") {
    require(!c.sigma_noise.empty(), "nopt-scan needs a sigma_noise grid");
    for (double s : c.sigma_noise) require(s > 0.0, "nopt-scan sigma values must be positive");
    const auto [lo, hi] = std::minmax_element(c.sigma_noise.begin(), c.sigma_noise.end());
    require(*hi >= 10.0 * *lo * (1.0 - 1e-12), "nopt-scan sigma grid must span at least one decade");
    require(c.sigma_disorder.size() <= 1, "nopt-scan takes at most one sigma_disorder value");
    require(c.grid_ratio > 1.0 && c.grid_span > 1.0, "grid ratio and span must exceed 1");
    require(c.a_ideal > 0.0 && c.a_noise > 0.0, "a_ideal and a_noise must be positive");
    if (!c.steps.empty() || c.n_max >= c.n_min) (void)resolved_steps(c);
  } else if (cmd == "dense-compare") {
    require(c.engine == Engine::kDensityMatrix || c.engine == Engine::kTrajectories,
            "pauli and t1t2 models need the density-matrix or trajectories engine");
    require(c.engine != Engine::kTrajectories || c.shots > 0, "trajectories engine needs shots > 0");
    check_sizes(Engine::kDensityMatrix, c.qubits);
    require(c.fidelity > 0.0 && c.fidelity <= 1.0, "fidelity must be in (0, 1]");
    require(c.t1 > 0.0 && c.t2 > 0.0 && c.dt_one_qubit > 0.0 && c.dt_two_qubit > 0.0,
            "T1, T2 and cycle times must be positive");
    if (!c.pauli_rates_file.empty()) {
      require(std::filesystem::is_regular_file(c.pauli_rates_file),
              "pauli rates file not found: " + c.pauli_rates_file.string());
    }
    (void)resolved_steps(c);
  } else if (cmd == "ingest-fit") {
    require(!c.data_dir.empty() && std::filesystem::is_directory(c.data_dir),
            "data directory not found: " + c.data_dir.string());
    require(c.a_noise > 0.0 && c.a_disorder > 0.0, "a_noise and a_disorder must be positive");
  } else if (cmd == "predict-nopt") {
    require(c.a_ideal > 0.0 && c.a_noise > 0.0, "a_ideal and a_noise must be positive");
    require(!c.sigma_noise.empty(), "predict-nopt needs sigma_noise");
    for (double s : c.sigma_noise) require(s > 0.0, "sigma_noise must be positive");
  } else if (cmd == "random-walk") {
    require(!c.sigma_noise.empty(), "random-walk needs sigma_noise");
    (void)resolved_steps(c);
  } else if (cmd == "synth-bitstrings") {
    require(c.shots > 0, "synth-bitstrings needs shots > 0");
    require(c.sigma_noise.size() <= 1 && c.sigma_disorder.size() <= 1, "synth-bitstrings takes one sigma pair");
    (void)resolved_steps(c);
  } else {
    throw ConfigError("unknown subcommand '" + cmd + "'");
  }
}

std::uint64_t point_seed(std::uint64_t master, std::size_t n_qubits, std::int64_t n_steps, std::size_t noise_index,
                         std::size_t disorder_index) {
  std::uint64_t h = mix64(master);
  h = hash_combine(h, n_qubits);
  h = hash_combine(h, static_cast<std::uint64_t>(n_steps));
  h = hash_combine(h, noise_index);
  h = hash_combine(h, disorder_index);
  return h;
}

DefectEstimate realization_defect_density(Engine engine, NoiseCoupling coupling, std::size_t n_qubits,
                                          std::int64_t n_steps, const RandomnessConfig& randomness,
                                          std::size_t shots) {
  if (n_steps < 0) throw ConfigError("N must be nonnegative");
  PerturbedSchedule perturbed;
  if (n_steps == 0) {
    perturbed = empty_schedule(n_qubits);
  } else {
    const auto n = static_cast<std::size_t>(n_steps);
    const Schedule schedule = build_schedule(n);
    if (randomness.sigma_noise == 0.0 && randomness.sigma_disorder == 0.0) {
      perturbed = ideal_schedule(schedule, n_qubits);
    } else {
      perturbed = perturb_schedule(schedule, sample_randomness(randomness, n_qubits, n), coupling);
    }
  }
  const std::uint64_t shot_seed =
      hash_combine(hash_combine(randomness.seed, randomness.realization_index), 0x73686f7473ULL);

  switch (engine) {
    case Engine::kMajorana: {
      if (shots > 0) throw ConfigError("majorana engine cannot sample bitstrings");
      return {defect_density(run_protocol(perturbed)), 0.0, 0};
    }
    case Engine::kStateVector: {
      const DenseState state = apply_circuit_statevector(DenseState::plus_state(n_qubits), perturbed);
      if (shots == 0) return {defect_density(state), 0.0, 0};
      const auto samples = sample_bitstrings(state, shots, shot_seed);
      return defect_density_from_bitstrings(samples);
    }
    case Engine::kDensityMatrix: {
      const DensityMatrix rho = run_noisy_circuit(perturbed, PauliNoiseModel{});
      if (shots == 0) return {defect_density(rho), 0.0, 0};
      const auto samples = sample_bitstrings(rho, shots, shot_seed);
      return defect_density_from_bitstrings(samples);
    }
    case Engine::kTrajectories: {
      const TrajectorySet set = run_pauli_trajectories(perturbed, PauliNoiseModel{}, std::max<std::size_t>(1, shots),
                                                       shot_seed);
      if (shots == 0) return {set.defect_densities.front(), 0.0, 0};
      return defect_density_from_bitstrings(set.bitstrings);
    }
  }
  throw ConfigError("unknown engine");
}

CurvePoint aggregate(std::int64_t n_steps, const std::vector<DefectEstimate>& realizations) {
  if (realizations.empty()) throw DataError("aggregate: no realizations");
  CurvePoint p;
  p.n_steps = n_steps;
  p.n_realizations = static_cast<std::int64_t>(realizations.size());
  const auto count = static_cast<double>(realizations.size());
  double sum = 0.0;
  for (const DefectEstimate& e : realizations) sum += e.d;
  const double mean = sum / count;
  if (realizations.size() == 1) {
    p.err = realizations.front().std_error;
  } else {
    double ss = 0.0;
    for (const DefectEstimate& e : realizations) ss += (e.d - mean) * (e.d - mean);
    p.err = std::sqrt(ss / (count - 1.0) / count);
  }
  p.d = std::clamp(mean, 0.0, 1.0);
  return p;
}

OutputDir::OutputDir(std::filesystem::path root, const RunConfig& config)
    : root_(std::move(root)), subcommand_(config.subcommand), seed_(config.seed) {
  if (root_.empty()) throw ConfigError("no output directory given");
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw ConfigError("cannot create output directory " + root_.string() + ": " + ec.message());
  write_json("config.json", nlohmann::json(config));
  if (!config.config_text.empty()) write_text("config.ini", config.config_text);
}

void OutputDir::write_text(const std::string& name, const std::string& text) {
  const std::filesystem::path path = root_ / name;
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  files_.push_back(name);
}

void OutputDir::write_json(const std::string& name, const nlohmann::json& value) {
  write_text(name, value.dump(2) + "\n");
}

void OutputDir::write_curve(const std::string& stem, const DefectCurve& curve) {
  save_curve(root_ / stem, curve);
  files_.push_back(stem + ".csv");
  files_.push_back(stem + ".json");
}

void OutputDir::write_bitstrings(const std::string& name, const std::vector<Bitstring>& samples) {
  const std::filesystem::path path = root_ / name;
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  kzsim::write_bitstrings(out, samples);
  files_.push_back(name);
}

void OutputDir::finish(const nlohmann::json& summary) {
  std::vector<std::string> files = files_;
  files.push_back("manifest.json");
  std::sort(files.begin(), files.end());
  nlohmann::json manifest{{"tool", "kzsim"},
                          {"version", "1.0.0"},
                          {"subcommand", subcommand_},
                          {"seed", seed_},
                          {"files", files}};
  if (!summary.is_null()) manifest["summary"] = summary;
  std::ofstream out(root_ / "manifest.json", std::ios::binary);
  if (!out) throw DataError("cannot write manifest");
  out << manifest.dump(2) << '\n';
}

}  // namespace kzsim
