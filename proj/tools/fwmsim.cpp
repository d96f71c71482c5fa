// Copyright 2026 The fwmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: simulate, oracle, fit, converge.

#include <CLI11.hpp>

#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "fwm/analytic.hpp"
#include "fwm/errors.hpp"
#include "fwm/evolve.hpp"
#include "fwm/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitFit = 4;

struct SourceArgs {
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;
  bool audit = false;
};

void add_source_options(CLI::App* cmd, SourceArgs& args) {
  auto* cfg = cmd->add_option("--config", args.config_path, "Scenario file (key = value lines)");
  auto* pre = cmd->add_option("--preset", args.preset, "Compiled-in preset name");
  cfg->excludes(pre);
  cmd->add_option("--set", args.overrides, "Override one field, key=value (repeatable)");
  cmd->add_flag("--audit-positivity", args.audit, "Audit the smallest eigenvalue at every output time");
}

fwm::ScenarioConfig resolve(const SourceArgs& args) {
  fwm::ScenarioConfig config;
  if (!args.config_path.empty()) {
    config = fwm::load_config(args.config_path);
  } else if (!args.preset.empty()) {
    config = fwm::preset(args.preset);
  } else {
    throw fwm::ConfigError("one of --config or --preset is required");
  }
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw fwm::ConfigError("--set expects key=value, got '" + kv + "'");
    fwm::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (args.audit) config.audit_positivity = true;
  config.validate();
  return config;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    fwm::write_file_atomic(out_path, content);
  }
}

std::vector<int> parse_cutoffs(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw fwm::ConfigError("--nmax expects comma-separated integers, got '" + text + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon Rabi oscillations in a three-mode Kerr resonator"};
  app.require_subcommand(1);

  SourceArgs sim_args;
  std::string sim_out;
  std::string dump_path;
  auto* simulate = app.add_subcommand("simulate", "Integrate the master equation and write a trajectory CSV");
  add_source_options(simulate, sim_args);
  simulate->add_option("--out", sim_out, "Output CSV (default stdout)");
  simulate->add_option("--dump-config", dump_path, "Write the resolved scenario file and exit");

  std::string formula;
  fwm::OracleParams oracle_params;
  double oracle_t_max = 20.0, oracle_dt = 0.05;
  std::string oracle_out;
  auto* oracle = app.add_subcommand("oracle", "Evaluate closed-form results on a time grid");
  oracle->add_option("--formula", formula, "two_photon_probabilities, two_photon_occupations, weak_pump0, weak_pump12 or eigensystem")->required();
  oracle->add_option("--u", oracle_params.u, "Coupling u");
  oracle->add_option("--gamma", oracle_params.gamma, "Loss rate in units of u");
  oracle->add_option("--delta", oracle_params.delta, "Four-wave mixing detuning in units of u");
  oracle->add_option("--f", oracle_params.f, "Pump amplitude for the weak-pump formulas");
  oracle->add_option("--t-max", oracle_t_max, "Grid end");
  oracle->add_option("--dt", oracle_dt, "Grid spacing");
  oracle->add_option("--out", oracle_out, "Output CSV (default stdout)");

  std::string fit_in, fit_column, fit_out;
  double fit_omega = 2.0 * std::sqrt(2.0), fit_gamma = 0.1, fit_t_min = 0.0,
         fit_t_max = std::numeric_limits<double>::infinity();
  bool fit_free = false;
  auto* fit = app.add_subcommand("fit", "Fit a trajectory column to the two-harmonic damped model");
  fit->add_option("--in", fit_in, "Trajectory CSV")->required();
  fit->add_option("--column", fit_column, "Column to fit, e.g. N0")->required();
  fit->add_option("--omega", fit_omega, "Base frequency (fixed) or detrend hint (free mode)");
  fit->add_option("--gamma-scale", fit_gamma, "Initial decay rate guess");
  fit->add_option("--t-min", fit_t_min, "Ignore samples before this time");
  fit->add_option("--t-max", fit_t_max, "Ignore samples after this time");
  fit->add_flag("--free-omega", fit_free, "Fit the base frequency too");
  fit->add_option("--out", fit_out, "Output CSV (default stdout)");

  SourceArgs conv_args;
  std::string conv_cutoffs = "6,8,10,12";
  std::string conv_out;
  auto* converge = app.add_subcommand("converge", "Compare observables across Fock cutoffs");
  add_source_options(converge, conv_args);
  converge->add_option("--nmax", conv_cutoffs, "Comma-separated cutoffs");
  converge->add_option("--out", conv_out, "Output CSV (default stdout)");

  auto* presets = app.add_subcommand("presets", "List compiled-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*simulate) {
      const auto config = resolve(sim_args);
      if (!dump_path.empty()) {
        emit(dump_path, fwm::serialize_config(config));
        return kExitOk;
      }
      if (config.model.scheme != fwm::PumpScheme::kNone && config.model.delta != 0.0) {
        std::cerr << "warning: driven run with delta != 0 has no reference results; treat as extrapolation\n";
      }
      const auto result = fwm::run_scenario(config);
      emit(sim_out, fwm::format_csv(config, result));
      std::cerr << "accepted steps " << result.stats.accepted << ", rejected " << result.stats.rejected
                << ", sectors " << result.stats.sectors << "\n";
    } else if (*oracle) {
      const std::vector<double> grid = formula == "eigensystem" ? std::vector<double>{0.0}
                                                                 : fwm::uniform_grid(oracle_t_max, oracle_dt);
      emit(oracle_out, fwm::oracle_eval(formula, oracle_params, grid));
    } else if (*fit) {
      fwm::fitkit::FitOptions options;
      options.free_omega = fit_free;
      const auto table = fwm::read_csv(fit_in);
      emit(fit_out, fwm::format_fit(fwm::fit_column(table, fit_column, fit_omega, fit_gamma, fit_t_min, fit_t_max, options)));
    } else if (*converge) {
      const auto config = resolve(conv_args);
      emit(conv_out, fwm::format_convergence(fwm::convergence_sweep(config, parse_cutoffs(conv_cutoffs))));
    } else if (*presets) {
      for (const auto& name : fwm::preset_names()) std::cout << name << "\n";
    }
  } catch (const fwm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fwm::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fwm::FitError& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return kExitFit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
