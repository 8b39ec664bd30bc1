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


#include "kzsim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "kzsim/density_matrix.hpp"
#include "kzsim/majorana.hpp"
#include "kzsim/rng.hpp"
#include "kzsim/sampling.hpp"
#include "kzsim/statevector.hpp"
#include "kzsim/trajectories.hpp"
#include "kzsim/types.hpp"

namespace kzsim {

namespace {

constexpr std::size_t kNoIndex = ~std::size_t{0};

struct GridPoint {
  std::size_t n_qubits = 0;
  std::int64_t n_steps = 0;
  double sigma_noise = 0.0;
  double sigma_disorder = 0.0;
  std::size_t noise_index = 0;
  std::size_t disorder_index = 0;
};

// Evaluates every grid point, fanning realizations out to the worker pool.
// Noiseless exact points are deterministic, so they are run once.
std::vector<CurvePoint> evaluate_grid(const RunConfig& c, const std::vector<GridPoint>& grid) {
  struct Task {
    std::size_t point;
    std::size_t realization;
  };
  std::vector<Task> tasks;
  std::vector<std::size_t> first(grid.size());
  std::vector<std::size_t> count(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const bool deterministic = grid[k].sigma_noise == 0.0 && grid[k].sigma_disorder == 0.0 && c.shots == 0;
    first[k] = tasks.size();
    count[k] = deterministic ? 1 : c.realizations;
    for (std::size_t r = 0; r < count[k]; ++r) tasks.push_back({k, r});
  }
  std::vector<DefectEstimate> results(tasks.size());
  parallel_for(tasks.size(), c.jobs, [&](std::size_t t) {
    const GridPoint& g = grid[tasks[t].point];
    RandomnessConfig rc;
    rc.sigma_noise = g.sigma_noise;
    rc.sigma_disorder = g.sigma_disorder;
    rc.seed = point_seed(c.seed, g.n_qubits, g.n_steps, g.noise_index, g.disorder_index);
    rc.realization_index = tasks[t].realization;
    results[t] = realization_defect_density(c.engine, c.coupling, g.n_qubits, g.n_steps, rc, c.shots);
  });
  std::vector<CurvePoint> out;
  out.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const std::vector<DefectEstimate> slice(results.begin() + static_cast<std::ptrdiff_t>(first[k]),
                                            results.begin() + static_cast<std::ptrdiff_t>(first[k] + count[k]));
    CurvePoint p = aggregate(grid[k].n_steps, slice);
    p.n_realizations = static_cast<std::int64_t>(c.realizations);
    out.push_back(p);
  }
  return out;
}

DefectCurve make_curve(const RunConfig& c, std::size_t n_qubits, double sigma_noise, double sigma_disorder,
                       std::vector<CurvePoint> points, const std::string& engine) {
  DefectCurve curve;
  curve.points = std::move(points);
  curve.metadata.n_qubits = n_qubits;
  curve.metadata.sigma_noise = sigma_noise;
  curve.metadata.sigma_disorder = sigma_disorder;
  curve.metadata.engine = engine;
  curve.metadata.seed = c.seed;
  curve.validate();
  return curve;
}

FitWindow window_or(const RunConfig& c, double default_min, double default_max) {
  return {c.window_min.value_or(default_min), c.window_max.value_or(default_max)};
}

FitWindow sigma_window(const RunConfig& c) {
  const FitWindow all;
  return {c.sigma_window_min.value_or(all.min), c.sigma_window_max.value_or(all.max)};
}

std::string size_tag(std::size_t n_qubits) { return "L" + std::to_string(n_qubits); }

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

KzScanResult cmd_kz_scan(const RunConfig& config) {
  validate(config);
  const std::vector<std::int64_t> steps = resolved_steps(config);
  std::vector<GridPoint> grid;
  for (std::size_t L : config.qubits) {
    for (std::int64_t n : steps) grid.push_back({L, n, 0.0, 0.0, 0, 0});
  }
  const std::vector<CurvePoint> points = evaluate_grid(config, grid);

  KzScanResult result;
  const FitWindow window = window_or(config, kKzWindowMin, kInf);
  nlohmann::json fits = nlohmann::json::object();
  for (std::size_t s = 0; s < config.qubits.size(); ++s) {
    const std::size_t L = config.qubits[s];
    std::vector<CurvePoint> slice(points.begin() + static_cast<std::ptrdiff_t>(s * steps.size()),
                                  points.begin() + static_cast<std::ptrdiff_t>((s + 1) * steps.size()));
    result.curves.push_back(make_curve(config, L, 0.0, 0.0, std::move(slice), to_string(config.engine)));
    try {
      result.fits.emplace_back(fit_kz(result.curves.back(), window));
      result.errors.emplace_back();
      fits[size_tag(L)] = *result.fits.back();
    } catch (const DataError& e) {
      result.fits.emplace_back();
      result.errors.emplace_back(e.what());
      fits[size_tag(L)] = {{"error", e.what()}};
    }
  }

  if (!config.out_dir.empty()) {
    OutputDir out(config.out_dir, config);
    for (const DefectCurve& curve : result.curves) out.write_curve(size_tag(curve.metadata.n_qubits), curve);
    out.write_json("fits.json", fits);
    out.finish();
  }
  return result;
}

NoiseScanResult cmd_noise_scan(const RunConfig& config) {
  validate(config);
  const std::vector<std::int64_t> steps = resolved_steps(config);
  const std::vector<double> sn = config.sigma_noise.empty() ? std::vector<double>{0.0} : config.sigma_noise;
  const std::vector<double> sd = config.sigma_disorder.empty() ? std::vector<double>{0.0} : config.sigma_disorder;

  // Per size: the ideal curve first, then every (noise, disorder) pair.
  std::vector<GridPoint> grid;
  for (std::size_t L : config.qubits) {
    for (std::int64_t n : steps) grid.push_back({L, n, 0.0, 0.0, kNoIndex, kNoIndex});
    for (std::size_t i = 0; i < sn.size(); ++i) {
      for (std::size_t j = 0; j < sd.size(); ++j) {
        for (std::int64_t n : steps) grid.push_back({L, n, sn[i], sd[j], i, j});
      }
    }
  }
  const std::vector<CurvePoint> points = evaluate_grid(config, grid);
  auto block = [&](std::size_t b) {
    return std::vector<CurvePoint>(points.begin() + static_cast<std::ptrdiff_t>(b * steps.size()),
                                   points.begin() + static_cast<std::ptrdiff_t>((b + 1) * steps.size()));
  };

  NoiseScanResult result;
  nlohmann::json fits = nlohmann::json::object();
  const std::string engine = to_string(config.engine);
  std::size_t b = 0;
  for (std::size_t L : config.qubits) {
    NoiseScanSystem sys;
    sys.n_qubits = L;
    sys.ideal = make_curve(config, L, 0.0, 0.0, block(b++), engine);
    for (std::size_t i = 0; i < sn.size(); ++i) {
      for (std::size_t j = 0; j < sd.size(); ++j) {
        sys.curves.push_back({i, j, make_curve(config, L, sn[i], sd[j], block(b++), engine)});
      }
    }

    std::vector<DefectCurve> step_sweeps;
    std::vector<const DefectCurve*> noise_only;
    std::vector<const DefectCurve*> disorder_only;
    for (const NoiseScanCurve& nc : sys.curves) {
      const CurveMetadata& m = nc.curve.metadata;
      if (m.sigma_noise > 0.0 && m.sigma_disorder == 0.0) noise_only.push_back(&nc.curve);
      if (m.sigma_noise == 0.0 && m.sigma_disorder > 0.0) disorder_only.push_back(&nc.curve);
    }
    const FitWindow steps_window = window_or(config, kNoiseWindowMin, kInf);
    const auto in_window = std::count_if(steps.begin(), steps.end(), [&](std::int64_t n) {
      return steps_window.contains(static_cast<double>(n));
    });
    // A single N supports only the sigma-sweep fit.
    if (in_window >= 2) {
      for (const DefectCurve* curve : noise_only) step_sweeps.push_back(*curve);
    }

    auto sweeps_from = [&](const std::vector<const DefectCurve*>& curves, bool noise) {
      std::vector<SigmaSweep> sweeps;
      for (std::size_t k = 0; k < steps.size(); ++k) {
        SigmaSweep sweep;
        sweep.n_steps = steps[k];
        sweep.d_ideal = sys.ideal.points[k].d;
        sweep.d_ideal_err = sys.ideal.points[k].err;
        for (const DefectCurve* curve : curves) {
          const CurvePoint& p = curve->points[k];
          sweep.points.push_back(
              {noise ? curve->metadata.sigma_noise : curve->metadata.sigma_disorder, p.d, p.err});
        }
        sweeps.push_back(std::move(sweep));
      }
      return sweeps;
    };

    nlohmann::json entry = nlohmann::json::object();
    if (!noise_only.empty()) {
      std::vector<SigmaSweep> sigma_sweeps;
      if (noise_only.size() >= 2) {
        for (SigmaSweep& sweep : sweeps_from(noise_only, true)) {
          if (sweep.n_steps > 0 && steps_window.contains(static_cast<double>(sweep.n_steps))) {
            sigma_sweeps.push_back(std::move(sweep));
          }
        }
      }
      try {
        sys.noise_law = fit_noise_law(step_sweeps, sys.ideal, sigma_sweeps, steps_window, sigma_window(config));
        nlohmann::json law{{"vs_steps", sys.noise_law->vs_steps},
                           {"vs_sigma", sys.noise_law->vs_sigma},
                           {"combined", sys.noise_law->combined}};
        entry["noise_law"] = law;
      } catch (const DataError& e) {
        sys.noise_error = e.what();
        entry["noise_law"] = {{"error", e.what()}};
      }
    }
    if (!disorder_only.empty()) {
      std::vector<SigmaSweep> sweeps;
      for (SigmaSweep& sweep : sweeps_from(disorder_only, false)) {
        if (sweep.n_steps > 0) sweeps.push_back(std::move(sweep));
      }
      try {
        sys.disorder_law = fit_disorder_law(sweeps);
        entry["disorder_law"] = {{"per_steps", sys.disorder_law->per_steps},
                                 {"combined", sys.disorder_law->combined},
                                 {"n_independent", sys.disorder_law->n_independent}};
      } catch (const DataError& e) {
        sys.disorder_error = e.what();
        entry["disorder_law"] = {{"error", e.what()}};
      }
    }
    fits[size_tag(L)] = entry;
    result.systems.push_back(std::move(sys));
  }

  if (!config.out_dir.empty()) {
    OutputDir out(config.out_dir, config);
    for (const NoiseScanSystem& sys : result.systems) {
      const std::string tag = size_tag(sys.n_qubits);
      out.write_curve(tag + "_ideal", sys.ideal);
      for (const NoiseScanCurve& nc : sys.curves) {
        out.write_curve(tag + "_noise" + std::to_string(nc.noise_index) + "_disorder" +
                            std::to_string(nc.disorder_index),
                        nc.curve);
      }
    }
    out.write_json("fits.json", fits);
    out.finish();
  }
  return result;
}

NOptScanResult cmd_nopt_scan(const RunConfig& config) {
  validate(config);
  const double disorder = config.sigma_disorder.empty() ? 0.0 : config.sigma_disorder.front();
  const bool explicit_steps = !config.steps.empty() || config.n_max >= config.n_min;

  std::vector<GridPoint> grid;
  std::vector<std::size_t> block_start;
  for (std::size_t L : config.qubits) {
    for (std::size_t i = 0; i < config.sigma_noise.size(); ++i) {
      const double sigma = config.sigma_noise[i];
      const std::vector<std::int64_t> steps =
          explicit_steps ? resolved_steps(config)
                         : geometric_steps(predict_n_opt(config.a_ideal, config.a_noise, sigma), config.grid_span,
                                           config.grid_ratio);
      block_start.push_back(grid.size());
      for (std::int64_t n : steps) grid.push_back({L, n, sigma, disorder, i, 0});
    }
  }
  block_start.push_back(grid.size());
  const std::vector<CurvePoint> points = evaluate_grid(config, grid);

  NOptScanResult result;
  result.predicted_prefactor = n_opt_prefactor(config.a_ideal, config.a_noise);
  nlohmann::json fits = nlohmann::json::object();
  std::size_t b = 0;
  for (std::size_t L : config.qubits) {
    NOptSystem sys;
    sys.n_qubits = L;
    std::vector<double> sigma_fit, n_fit;
    for (double sigma : config.sigma_noise) {
      std::vector<CurvePoint> slice(points.begin() + static_cast<std::ptrdiff_t>(block_start[b]),
                                    points.begin() + static_cast<std::ptrdiff_t>(block_start[b + 1]));
      ++b;
      NOptEntry e;
      e.sigma = sigma;
      e.curve = make_curve(config, L, sigma, disorder, std::move(slice), to_string(config.engine));
      e.n_opt = find_n_opt(e.curve);
      if (e.n_opt.interior) {
        sigma_fit.push_back(sigma);
        n_fit.push_back(static_cast<double>(e.n_opt.n_opt));
      }
      sys.entries.push_back(std::move(e));
    }
    nlohmann::json entry = nlohmann::json::object();
    try {
      sys.law = fit_n_opt_law(sigma_fit, n_fit);
      entry["law"] = *sys.law;
    } catch (const DataError& e) {
      sys.law_error = e.what();
      entry["law"] = {{"error", e.what()}};
    }
    nlohmann::json table = nlohmann::json::array();
    for (const NOptEntry& e : sys.entries) {
      nlohmann::json row = e.n_opt;
      row["sigma"] = e.sigma;
      table.push_back(row);
    }
    entry["n_opt"] = table;
    entry["predicted_prefactor"] = result.predicted_prefactor;
    fits[size_tag(L)] = entry;
    result.systems.push_back(std::move(sys));
  }

  if (!config.out_dir.empty()) {
    OutputDir out(config.out_dir, config);
    for (const NOptSystem& sys : result.systems) {
      const std::string tag = size_tag(sys.n_qubits);
      std::ostringstream table;
      table << "sigma,n_opt,band_min,band_max,d_min,interior\n";
      for (std::size_t i = 0; i < sys.entries.size(); ++i) {
        const NOptEntry& e = sys.entries[i];
        out.write_curve(tag + "_sigma" + std::to_string(i), e.curve);
        table << format_double(e.sigma) << ',' << e.n_opt.n_opt << ',' << e.n_opt.band_min << ','
              << e.n_opt.band_max << ',' << format_double(e.n_opt.d_min) << ',' << (e.n_opt.interior ? 1 : 0)
              << '\n';
      }
      out.write_text("nopt_" + tag + ".csv", table.str());
    }
    out.write_json("fits.json", fits);
    out.finish();
  }
  return result;
}

namespace {

PauliNoiseModel load_pauli_model(const RunConfig& c) {
  PauliNoiseModel model;
  if (c.pauli_rates_file.empty()) {
    model.default_rates = PauliChannelRates::depolarizing(c.fidelity);
  } else {
    std::ifstream in(c.pauli_rates_file);
    if (!in) throw ConfigError("cannot read " + c.pauli_rates_file.string());
    try {
      model = pauli_noise_model_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("pauli rates file: ") + e.what());
    }
  }
  model.validate();
  return model;
}

DefectEstimate estimate_from(const DensityMatrix& rho, std::size_t shots, std::uint64_t seed,
                             std::vector<Bitstring>* keep) {
  if (shots == 0) return {defect_density(rho), 0.0, 0};
  std::vector<Bitstring> samples = sample_bitstrings(rho, shots, seed);
  const DefectEstimate e = defect_density_from_bitstrings(samples);
  if (keep != nullptr) *keep = std::move(samples);
  return e;
}

enum ModelSlot : std::size_t { kPauliSlot = 0, kT1T2Slot = 1, kGaussianSlot = 2, kSlots = 3 };
constexpr const char* kSlotNames[kSlots] = {"pauli", "t1t2", "gaussian"};

}  // namespace

DenseCompareResult cmd_dense_compare(const RunConfig& config) {
  validate(config);
  const std::vector<std::int64_t> steps = resolved_steps(config);
  const PauliNoiseModel pauli = load_pauli_model(config);
  const double gauss_noise = config.sigma_noise.empty() ? 0.0 : config.sigma_noise.front();
  const double gauss_disorder = config.sigma_disorder.empty() ? 0.0 : config.sigma_disorder.front();
  const bool keep = config.write_bitstrings && config.shots > 0;

  struct Cell {
    DefectEstimate estimate;
    std::vector<Bitstring> samples;
  };
  const std::size_t per_size = steps.size() * kSlots;
  std::vector<Cell> cells(config.qubits.size() * per_size);
  parallel_for(cells.size(), config.jobs, [&](std::size_t t) {
    const std::size_t s = t / per_size;
    const std::size_t k = (t % per_size) / kSlots;
    const std::size_t slot = t % kSlots;
    if (slot == kGaussianSlot && !config.include_gaussian) return;
    const std::size_t L = config.qubits[s];
    const std::int64_t n = steps[k];
    const std::uint64_t seed = hash_combine(point_seed(config.seed, L, n, 0, 0), slot);
    const PerturbedSchedule ideal =
        n == 0 ? empty_schedule(L) : ideal_schedule(build_schedule(static_cast<std::size_t>(n)), L);
    Cell& cell = cells[t];
    std::vector<Bitstring>* sink = keep ? &cell.samples : nullptr;

    if (slot == kPauliSlot) {
      if (config.engine == Engine::kTrajectories) {
        TrajectorySet set = run_pauli_trajectories(ideal, pauli, config.shots, seed);
        cell.estimate = defect_density_from_bitstrings(set.bitstrings);
        if (sink != nullptr) *sink = std::move(set.bitstrings);
      } else {
        cell.estimate = estimate_from(run_noisy_circuit(ideal, pauli), config.shots, seed, sink);
      }
    } else if (slot == kT1T2Slot) {
      DampingParams damping = DampingParams::uniform(L, config.t1, config.t2);
      damping.dt_one_qubit = config.dt_one_qubit;
      damping.dt_two_qubit = config.dt_two_qubit;
      cell.estimate = estimate_from(run_noisy_circuit(ideal, damping), config.shots, seed, sink);
    } else {
      // Gaussian model: shots are split evenly over realizations and pooled.
      std::vector<Bitstring> pooled;
      double exact = 0.0;
      const std::size_t per_real = config.shots == 0 ? 0 : std::max<std::size_t>(1, config.shots / config.realizations);
      for (std::size_t r = 0; r < config.realizations; ++r) {
        RandomnessConfig rc{gauss_noise, gauss_disorder, seed, r};
        PerturbedSchedule p = ideal;
        if (n > 0 && (gauss_noise > 0.0 || gauss_disorder > 0.0)) {
          p = perturb_schedule(build_schedule(static_cast<std::size_t>(n)),
                               sample_randomness(rc, L, static_cast<std::size_t>(n)), config.coupling);
        }
        const DenseState state = apply_circuit_statevector(DenseState::plus_state(L), p);
        if (per_real == 0) {
          exact += defect_density(state);
        } else {
          auto samples = sample_bitstrings(state, per_real, hash_combine(seed, r));
          pooled.insert(pooled.end(), samples.begin(), samples.end());
        }
      }
      if (per_real == 0) {
        cell.estimate = {exact / static_cast<double>(config.realizations), 0.0, 0};
      } else {
        cell.estimate = defect_density_from_bitstrings(pooled);
        if (sink != nullptr) *sink = std::move(pooled);
      }
    }
  });

  DenseCompareResult result;
  nlohmann::json fits = nlohmann::json::object();
  for (std::size_t s = 0; s < config.qubits.size(); ++s) {
    const std::size_t L = config.qubits[s];
    auto curve_for = [&](std::size_t slot, double noise, double disorder) {
      std::vector<CurvePoint> pts;
      for (std::size_t k = 0; k < steps.size(); ++k) {
        const DefectEstimate& e = cells[s * per_size + k * kSlots + slot].estimate;
        const auto count = static_cast<std::int64_t>(config.shots == 0 ? 1 : config.shots);
        pts.push_back({steps[k], std::clamp(e.d, 0.0, 1.0), e.std_error, count});
      }
      std::string engine = slot == kPauliSlot ? to_string(config.engine) : "density-matrix";
      if (slot == kGaussianSlot) engine = "statevector";
      return make_curve(config, L, noise, disorder, std::move(pts), engine + "/" + kSlotNames[slot]);
    };
    DenseCompareSystem sys;
    sys.n_qubits = L;
    sys.pauli = curve_for(kPauliSlot, 0.0, 0.0);
    sys.t1t2 = curve_for(kT1T2Slot, 0.0, 0.0);
    if (config.include_gaussian) sys.gaussian = curve_for(kGaussianSlot, gauss_noise, gauss_disorder);

    nlohmann::json entry = nlohmann::json::object();
    for (const DefectCurve* curve : {&sys.pauli, &sys.t1t2, sys.gaussian ? &*sys.gaussian : nullptr}) {
      if (curve == nullptr) continue;
      const std::string name = curve->metadata.engine.substr(curve->metadata.engine.find('/') + 1);
      entry[name] = {{"n_opt", find_n_opt(*curve)}, {"saturation", curve->points.back().d}};
    }
    fits[size_tag(L)] = entry;
    result.systems.push_back(std::move(sys));
  }

  if (!config.out_dir.empty()) {
    OutputDir out(config.out_dir, config);
    for (std::size_t s = 0; s < result.systems.size(); ++s) {
      const DenseCompareSystem& sys = result.systems[s];
      const std::string tag = size_tag(sys.n_qubits);
      std::ostringstream table;
      table << "N,d_pauli,err_pauli,d_t1t2,err_t1t2";
      if (sys.gaussian) table << ",d_gaussian,err_gaussian";
      table << '\n';
      for (std::size_t k = 0; k < steps.size(); ++k) {
        table << steps[k] << ',' << format_double(sys.pauli.points[k].d) << ','
              << format_double(sys.pauli.points[k].err) << ',' << format_double(sys.t1t2.points[k].d) << ','
              << format_double(sys.t1t2.points[k].err);
        if (sys.gaussian) {
          table << ',' << format_double(sys.gaussian->points[k].d) << ','
                << format_double(sys.gaussian->points[k].err);
        }
        table << '\n';
      }
      out.write_text("dense_" + tag + ".csv", table.str());
      out.write_curve(tag + "_pauli", sys.pauli);
      out.write_curve(tag + "_t1t2", sys.t1t2);
      if (sys.gaussian) out.write_curve(tag + "_gaussian", *sys.gaussian);
      if (keep) {
        for (std::size_t slot = 0; slot < kSlots; ++slot) {
          if (slot == kGaussianSlot && !config.include_gaussian) continue;
          for (std::size_t k = 0; k < steps.size(); ++k) {
            out.write_bitstrings(std::string("bitstrings/") + kSlotNames[slot] + "/" + tag + "_N" +
                                     std::to_string(steps[k]) + ".txt",
                                 cells[s * per_size + k * kSlots + slot].samples);
          }
        }
      }
    }
    out.write_json("fits.json", fits);
    out.finish();
  }
  return result;
}

namespace {

// Exact noiseless defect densities on the given grid.
DefectCurve ideal_curve(const RunConfig& c, std::size_t n_qubits, const std::vector<std::int64_t>& steps) {
  std::vector<CurvePoint> pts(steps.size());
  parallel_for(steps.size(), c.jobs, [&](std::size_t k) {
    const DefectEstimate e = realization_defect_density(Engine::kMajorana, c.coupling, n_qubits, steps[k],
                                                        RandomnessConfig{}, 0);
    pts[k] = {steps[k], std::clamp(e.d, 0.0, 1.0), 0.0, 1};
  });
  DefectCurve curve;
  curve.points = std::move(pts);
  curve.metadata.n_qubits = n_qubits;
  curve.metadata.engine = "majorana";
  curve.metadata.seed = c.seed;
  curve.validate();
  return curve;
}

}  // namespace

IngestResult cmd_ingest_fit(const RunConfig& config) {
  validate(config);
  const std::regex pattern(R"(L(\d+)_N(\d+)\.txt)");
  std::map<std::size_t, std::map<std::int64_t, std::filesystem::path>> files;
  for (const auto& entry : std::filesystem::directory_iterator(config.data_dir)) {
    if (!entry.is_regular_file()) continue;
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (!std::regex_match(name, m, pattern)) continue;
    const auto L = static_cast<std::size_t>(std::stoull(m[1].str()));
    if (!config.qubits.empty() &&
        std::find(config.qubits.begin(), config.qubits.end(), L) == config.qubits.end()) {
      continue;
    }
    files[L][std::stoll(m[2].str())] = entry.path();
  }
  if (files.empty()) throw DataError("no L{L}_N{N}.txt files in " + config.data_dir.string());

  const FitWindow window = window_or(config, kIngestWindowMin, kIngestWindowMax);
  IngestResult result;
  nlohmann::json report = nlohmann::json::object();
  for (const auto& [L, by_n] : files) {
    if (L < 2) throw DataError("bitstring files need L >= 2");
    IngestSystem sys;
    sys.n_qubits = L;
    std::vector<std::int64_t> steps;
    for (const auto& [n, path] : by_n) {
      std::ifstream in(path);
      if (!in) throw DataError("cannot read " + path.string());
      const std::vector<Bitstring> samples = read_bitstrings(in);
      if (samples.empty()) throw DataError("empty file " + path.string());
      if (samples.front().size() != L) {
        throw DataError(path.filename().string() + ": strings have length " + std::to_string(samples.front().size()) +
                        ", expected " + std::to_string(L));
      }
      const DefectEstimate e = defect_density_from_bitstrings(samples);
      sys.measured.points.push_back({n, e.d, e.std_error, static_cast<std::int64_t>(e.shots)});
      steps.push_back(n);
    }
    sys.measured.metadata.n_qubits = L;
    sys.measured.metadata.engine = "measured";
    sys.measured.metadata.seed = config.seed;
    sys.measured.validate();
    sys.ideal = ideal_curve(config, L, steps);
    sys.extraction = extract_sigma(sys.measured, sys.ideal, window, config.a_noise, config.a_disorder);
    report[size_tag(L)] = sys.extraction;
    result.systems.push_back(std::move(sys));
  }

  if (result.systems.size() >= 2) {
    bool noise = true;
    bool disorder = true;
    for (std::size_t k = 1; k < result.systems.size(); ++k) {
      noise = noise && result.systems[k].extraction.unit.sigma_noise < result.systems[k - 1].extraction.unit.sigma_noise;
      disorder = disorder && result.systems[k].extraction.unit.sigma_disorder <
                                 result.systems[k - 1].extraction.unit.sigma_disorder;
    }
    result.sigma_noise_decreases = noise;
    result.sigma_disorder_decreases = disorder;
    report["sigma_noise_decreases_with_L"] = noise;
    report["sigma_disorder_decreases_with_L"] = disorder;
  }

  if (!config.out_dir.empty()) {
    OutputDir out(config.out_dir, config);
    for (const IngestSystem& sys : result.systems) {
      const std::string tag = size_tag(sys.n_qubits);
      out.write_curve(tag + "_measured", sys.measured);
      out.write_curve(tag + "_ideal", sys.ideal);
    }
    out.write_json("fits.json", report);
    out.finish();
  }
  return result;
}

nlohmann::json cmd_predict_nopt(const RunConfig& config) {
  validate(config);
  nlohmann::json predictions = nlohmann::json::array();
  for (double sigma : config.sigma_noise) {
    predictions.push_back({{"sigma_noise", sigma}, {"n_opt", predict_n_opt(config.a_ideal, config.a_noise, sigma)}});
  }
  nlohmann::json result{{"a_ideal", config.a_ideal},
                        {"a_noise", config.a_noise},
                        {"prefactor", n_opt_prefactor(config.a_ideal, config.a_noise)},
                        {"predictions", predictions}};
  if (!config.out_dir.empty()) {
    OutputDir out(config.out_dir, config);
    out.write_json("prediction.json", result);
    out.finish();
  }
  return result;
}

nlohmann::json cmd_random_walk(const RunConfig& config) {
  validate(config);
  const std::vector<std::int64_t> steps = resolved_steps(config);
  struct Row {
    std::int64_t n;
    double sigma;
    std::size_t sigma_index;
    MonteCarloEstimate mc;
  };
  std::vector<Row> rows;
  for (std::int64_t n : steps) {
    for (std::size_t i = 0; i < config.sigma_noise.size(); ++i) rows.push_back({n, config.sigma_noise[i], i, {}});
  }
  parallel_for(rows.size(), config.jobs, [&](std::size_t k) {
    Row& row = rows[k];
    row.mc = random_walk_monte_carlo(static_cast<std::size_t>(row.n), row.sigma, config.realizations,
                                     point_seed(config.seed, 1, row.n, row.sigma_index, 0));
  });
  nlohmann::json table = nlohmann::json::array();
  for (const Row& row : rows) {
    const double prediction = random_walk_prediction(static_cast<double>(row.n), row.sigma);
    const double z = row.mc.std_error > 0.0 ? (row.mc.mean - prediction) / row.mc.std_error : 0.0;
    table.push_back({{"N", row.n},
                     {"sigma_noise", row.sigma},
                     {"prediction", prediction},
                     {"monte_carlo", row.mc.mean},
                     {"std_error", row.mc.std_error},
                     {"realizations", row.mc.samples},
                     {"z", z}});
  }
  if (!config.out_dir.empty()) {
    OutputDir out(config.out_dir, config);
    out.write_json("random_walk.json", table);
    out.finish();
  }
  return table;
}

void cmd_synth_bitstrings(const RunConfig& config) {
  validate(config);
  if (config.out_dir.empty()) throw ConfigError("synth-bitstrings needs an output directory");
  const std::vector<std::int64_t> steps = resolved_steps(config);
  const double sn = config.sigma_noise.empty() ? 0.0 : config.sigma_noise.front();
  const double sd = config.sigma_disorder.empty() ? 0.0 : config.sigma_disorder.front();
  OutputDir out(config.out_dir, config);
  for (std::size_t L : config.qubits) {
    const DefectCurve ideal = ideal_curve(config, L, steps);
    std::vector<std::vector<Bitstring>> samples(steps.size());
    parallel_for(steps.size(), config.jobs, [&](std::size_t k) {
      const double p =
          std::clamp(ideal.points[k].d + sn * sn * static_cast<double>(steps[k]) + sd * sd, 0.0, 1.0);
      samples[k] = sample_domain_wall_bitstrings(L, p, config.shots, point_seed(config.seed, L, steps[k], 0, 0));
    });
    for (std::size_t k = 0; k < steps.size(); ++k) {
      out.write_bitstrings(size_tag(L) + "_N" + std::to_string(steps[k]) + ".txt", samples[k]);
    }
  }
  out.finish();
}

}  // namespace kzsim
