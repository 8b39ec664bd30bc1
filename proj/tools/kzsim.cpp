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


#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kzsim/commands.hpp"
#include "kzsim/types.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct Options {
  kzsim::RunConfig config;
  std::string engine = "majorana";
  std::string noise_model = "gaussian";
  std::string coupling = "additive";
  std::string out;
};

void add_common(CLI::App* sub, Options& o) {
  o.config.subcommand = sub->get_name();
  sub->add_option("--seed", o.config.seed, "master seed")->capture_default_str();
  sub->add_option("--out", o.out, "output directory")->capture_default_str()->configurable(false);
  sub->add_option("--jobs", o.config.jobs, "worker threads")->capture_default_str()->configurable(false);
  sub->add_option("--engine", o.engine, "majorana | statevector | density-matrix | trajectories")
      ->capture_default_str();
  sub->add_option("--shots", o.config.shots, "sampled bitstrings per point (0: exact)")->capture_default_str();
}

void add_grid(CLI::App* sub, Options& o) {
  auto& c = o.config;
  sub->add_option("--L", c.qubits, "system sizes")->capture_default_str();
  sub->add_option("--N", c.steps, "explicit step counts (overrides the range)")->capture_default_str();
  sub->add_option("--n-min", c.n_min, "first N of the range")->capture_default_str();
  sub->add_option("--n-max", c.n_max, "last N of the range")->capture_default_str();
  sub->add_option("--n-count", c.n_count, "log-spaced points in the range (0: every integer)")
      ->capture_default_str();
}

void add_randomness(CLI::App* sub, Options& o) {
  auto& c = o.config;
  sub->add_option("--sigma-noise", c.sigma_noise, "step-noise strengths")->capture_default_str();
  sub->add_option("--sigma-disorder", c.sigma_disorder, "static-disorder strengths")->capture_default_str();
  sub->add_option("--realizations", c.realizations, "random realizations per point")->capture_default_str();
  sub->add_option("--coupling", o.coupling, "additive | multiplicative")->capture_default_str();
  sub->add_option("--noise-model", o.noise_model, "gaussian | pauli | t1t2")->capture_default_str();
}

void add_windows(CLI::App* sub, Options& o) {
  auto& c = o.config;
  sub->add_option("--window-min", c.window_min, "smallest N used by fits");
  sub->add_option("--window-max", c.window_max, "largest N used by fits");
}

void add_coefficients(CLI::App* sub, Options& o) {
  auto& c = o.config;
  sub->add_option("--a-ideal", c.a_ideal, "KZ coefficient")->capture_default_str();
  sub->add_option("--a-noise", c.a_noise, "step-noise coefficient")->capture_default_str();
}

// "[sub]" section holding every configurable option of the subcommand with
// its effective value; loadable again through --config.
std::string snapshot(const CLI::App& sub) {
  std::ostringstream out;
  out << '[' << sub.get_name() << "]\n";
  for (const CLI::Option* opt : sub.get_options()) {
    if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      const std::vector<std::string> results = opt->results();
      if (opt->get_type_size_max() == 0) {
        value = "true";
      } else if (results.size() == 1 && opt->get_items_expected_max() <= 1) {
        value = results.front();
      } else {
        value = "[";
        for (std::size_t k = 0; k < results.size(); ++k) value += (k ? ", " : "") + results[k];
        value += "]";
      }
    } else {
      value = opt->get_default_str();
    }
    if (value.empty() || value == "{}" || value == "[]") continue;
    out << name << " = " << value << '\n';
  }
  return out.str();
}

void finalize(Options& o, const CLI::App& sub) {
  o.config.engine = kzsim::parse_engine(o.engine);
  o.config.noise_model = kzsim::parse_noise_model(o.noise_model);
  o.config.coupling = kzsim::parse_noise_coupling(o.coupling);
  o.config.out_dir = o.out;
  o.config.config_text = snapshot(sub);
}

void print_kz(const kzsim::KzScanResult& r) {
  for (std::size_t k = 0; k < r.curves.size(); ++k) {
    std::cout << "L=" << r.curves[k].metadata.n_qubits << ": ";
    if (r.fits[k]) {
      std::cout << "a=" << r.fits[k]->value("a") << " +- " << r.fits[k]->error("a")
                << "  alpha=" << r.fits[k]->value("alpha") << " +- " << r.fits[k]->error("alpha");
      for (const auto& flag : r.fits[k]->flags) std::cout << " [" << flag << "]";
    } else {
      std::cout << r.errors[k];
    }
    std::cout << '\n';
  }
}

void print_noise(const kzsim::NoiseScanResult& r) {
  for (const auto& sys : r.systems) {
    std::cout << "L=" << sys.n_qubits << ": " << sys.curves.size() << " curves";
    if (sys.noise_law) {
      const auto& c = sys.noise_law->combined.coefficient("a_noise");
      std::cout << "  a_noise=" << c.value << " +- " << c.error;
    } else if (!sys.noise_error.empty()) {
      std::cout << "  noise law: " << sys.noise_error;
    }
    if (sys.disorder_law) {
      const auto& c = sys.disorder_law->combined.coefficient("a_disorder");
      std::cout << "  a_disorder=" << c.value << " +- " << c.error
                << (sys.disorder_law->n_independent ? "" : " [n-dependent]");
    } else if (!sys.disorder_error.empty()) {
      std::cout << "  disorder law: " << sys.disorder_error;
    }
    std::cout << '\n';
  }
}

void print_nopt(const kzsim::NOptScanResult& r) {
  for (const auto& sys : r.systems) {
    std::cout << "L=" << sys.n_qubits << '\n';
    for (const auto& e : sys.entries) {
      std::cout << "  sigma=" << e.sigma << "  N_opt=" << e.n_opt.n_opt << "  band=[" << e.n_opt.band_min << ", "
                << e.n_opt.band_max << "]" << (e.n_opt.interior ? "" : "  [boundary]") << '\n';
    }
    if (sys.law) {
      std::cout << "  exponent=" << sys.law->value("exponent") << " +- " << sys.law->error("exponent")
                << "  prefactor=" << sys.law->value("prefactor") << " +- " << sys.law->error("prefactor") << '\n';
    } else {
      std::cout << "  " << sys.law_error << '\n';
    }
  }
  std::cout << "predicted prefactor " << r.predicted_prefactor << '\n';
}

void print_dense(const kzsim::DenseCompareResult& r) {
  for (const auto& sys : r.systems) {
    std::cout << "L=" << sys.n_qubits << "\n  N  pauli  t1t2" << (sys.gaussian ? "  gaussian" : "") << '\n';
    for (std::size_t k = 0; k < sys.pauli.points.size(); ++k) {
      std::cout << "  " << sys.pauli.points[k].n_steps << "  " << sys.pauli.points[k].d << "  "
                << sys.t1t2.points[k].d;
      if (sys.gaussian) std::cout << "  " << sys.gaussian->points[k].d;
      std::cout << '\n';
    }
  }
}

void print_ingest(const kzsim::IngestResult& r) {
  for (const auto& sys : r.systems) {
    const auto& u = sys.extraction.unit;
    std::cout << "L=" << sys.n_qubits << ": sigma_noise=" << u.sigma_noise << " +- " << u.sigma_noise_err
              << "  sigma_disorder=" << u.sigma_disorder << " +- " << u.sigma_disorder_err
              << (u.degenerate ? "  [degenerate]" : "") << '\n';
  }
  if (r.sigma_noise_decreases) {
    std::cout << "sigma_noise decreases with L: " << (*r.sigma_noise_decreases ? "yes" : "no") << '\n'
              << "sigma_disorder decreases with L: " << (*r.sigma_disorder_decreases ? "yes" : "no") << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kzsim: defect densities of Trotterized transverse-field Ising ramps"};
  app.set_config("--config", "", "key = value config file with [subcommand] sections; flags win");
  app.require_subcommand(1);

  std::map<std::string, Options> options;

  {
    auto* sub = app.add_subcommand("kz-scan", "noiseless defect density against N");
    Options& o = options["kz-scan"];
    o.config.qubits = {32, 64, 128, 256};
    o.config.n_min = 1;
    o.config.n_max = 1000;
    o.config.n_count = 40;
    o.out = "out/kz-scan";
    add_common(sub, o);
    add_grid(sub, o);
    add_windows(sub, o);
    sub->add_option("--sigma-noise", o.config.sigma_noise, "must be zero");
    sub->add_option("--sigma-disorder", o.config.sigma_disorder, "must be zero");
  }
  {
    auto* sub = app.add_subcommand("noise-scan", "defect density with step noise and static disorder");
    Options& o = options["noise-scan"];
    o.config.qubits = {20};
    o.config.n_min = 1;
    o.config.n_max = 3000;
    o.config.n_count = 30;
    o.config.sigma_noise = {1e-3};
    o.config.realizations = 5;
    o.out = "out/noise-scan";
    add_common(sub, o);
    add_grid(sub, o);
    add_randomness(sub, o);
    add_windows(sub, o);
    sub->add_option("--sigma-window-min", o.config.sigma_window_min, "smallest sigma used by sigma fits");
    sub->add_option("--sigma-window-max", o.config.sigma_window_max, "largest sigma used by sigma fits");
  }
  {
    auto* sub = app.add_subcommand("nopt-scan", "optimal depth against noise strength");
    Options& o = options["nopt-scan"];
    o.config.qubits = {20};
    o.config.sigma_noise = {0.003, 0.005, 0.008, 0.012, 0.02, 0.03};
    o.config.realizations = 10;
    o.out = "out/nopt-scan";
    add_common(sub, o);
    add_grid(sub, o);
    add_randomness(sub, o);
    add_coefficients(sub, o);
    sub->add_option("--grid-ratio", o.config.grid_ratio, "ratio of consecutive N around the prediction")
        ->capture_default_str();
    sub->add_option("--grid-span", o.config.grid_span, "N grid covers [N*/span, N* span]")->capture_default_str();
  }
  {
    auto* sub = app.add_subcommand("dense-compare", "pauli, t1t2 and gaussian noise models on a dense engine");
    Options& o = options["dense-compare"];
    o.config.qubits = {6};
    o.config.n_min = 0;
    o.config.n_max = 30;
    o.config.shots = 4096;
    o.engine = "density-matrix";
    o.out = "out/dense-compare";
    add_common(sub, o);
    add_grid(sub, o);
    add_randomness(sub, o);
    auto& c = o.config;
    sub->add_option("--fidelity", c.fidelity, "depolarizing two-qubit gate fidelity")->capture_default_str();
    sub->add_option("--pauli-rates", c.pauli_rates_file, "JSON Pauli rates (overrides --fidelity)");
    sub->add_option("--t1", c.t1, "T1 in seconds")->capture_default_str();
    sub->add_option("--t2", c.t2, "T2 in seconds")->capture_default_str();
    sub->add_option("--dt-1q", c.dt_one_qubit, "one-qubit cycle time in seconds")->capture_default_str();
    sub->add_option("--dt-2q", c.dt_two_qubit, "two-qubit cycle time in seconds")->capture_default_str();
    sub->add_flag("--include-gaussian", c.include_gaussian, "also run the gaussian model");
    sub->add_flag("--write-bitstrings", c.write_bitstrings, "store sampled bitstrings");
  }
  {
    auto* sub = app.add_subcommand("ingest-fit", "effective sigma from measured bitstring files");
    Options& o = options["ingest-fit"];
    o.out = "out/ingest-fit";
    add_common(sub, o);
    add_windows(sub, o);
    auto& c = o.config;
    sub->add_option("--data", c.data_dir, "directory of L{L}_N{N}.txt files")->required();
    sub->add_option("--L", c.qubits, "restrict to these sizes");
    sub->add_option("--a-noise", c.a_noise, "step-noise coefficient for the scaled report")->capture_default_str();
    sub->add_option("--a-disorder", c.a_disorder, "disorder coefficient for the scaled report")
        ->capture_default_str();
  }
  {
    auto* sub = app.add_subcommand("predict-nopt", "closed-form optimal depth");
    Options& o = options["predict-nopt"];
    o.config.sigma_noise = {0.01};
    add_common(sub, o);
    add_coefficients(sub, o);
    sub->add_option("--sigma-noise", o.config.sigma_noise, "step-noise strengths")->capture_default_str();
  }
  {
    auto* sub = app.add_subcommand("random-walk", "single-qubit random walk against its closed form");
    Options& o = options["random-walk"];
    o.config.steps = {10, 100, 1000};
    o.config.sigma_noise = {0.01, 0.05};
    o.config.realizations = 10000;
    add_common(sub, o);
    sub->add_option("--N", o.config.steps, "step counts")->capture_default_str();
    sub->add_option("--sigma-noise", o.config.sigma_noise, "step-noise strengths")->capture_default_str();
    sub->add_option("--realizations", o.config.realizations, "Monte-Carlo samples")->capture_default_str();
  }
  {
    auto* sub = app.add_subcommand("synth-bitstrings", "synthetic bitstring files with known sigma");
    Options& o = options["synth-bitstrings"];
    o.config.qubits = {4, 5, 6};
    o.config.n_min = 0;
    o.config.n_max = 20;
    o.config.shots = 4096;
    o.config.sigma_noise = {0.15};
    o.config.sigma_disorder = {0.10};
    o.out = "out/synth-bitstrings";
    add_common(sub, o);
    add_grid(sub, o);
    sub->add_option("--sigma-noise", o.config.sigma_noise, "step-noise strength")->capture_default_str();
    sub->add_option("--sigma-disorder", o.config.sigma_disorder, "disorder strength")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    Options& o = options.at(chosen->get_name());
    finalize(o, *chosen);
    const std::string& name = o.config.subcommand;
    if (name == "kz-scan") {
      print_kz(kzsim::cmd_kz_scan(o.config));
    } else if (name == "noise-scan") {
      print_noise(kzsim::cmd_noise_scan(o.config));
    } else if (name == "nopt-scan") {
      print_nopt(kzsim::cmd_nopt_scan(o.config));
    } else if (name == "dense-compare") {
      print_dense(kzsim::cmd_dense_compare(o.config));
    } else if (name == "ingest-fit") {
      print_ingest(kzsim::cmd_ingest_fit(o.config));
    } else if (name == "predict-nopt") {
      std::cout << kzsim::cmd_predict_nopt(o.config).dump(2) << '\n';
    } else if (name == "random-walk") {
      std::cout << kzsim::cmd_random_walk(o.config).dump(2) << '\n';
    } else if (name == "synth-bitstrings") {
      kzsim::cmd_synth_bitstrings(o.config);
    }
    if (!o.config.out_dir.empty()) std::cout << "wrote " << o.config.out_dir.string() << '\n';
  } catch (const kzsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const kzsim::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return 0;
}
