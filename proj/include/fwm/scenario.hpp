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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fwm/evolve.hpp"
#include "fwm/fitkit.hpp"
#include "fwm/model.hpp"
#include "fwm/observables.hpp"

namespace fwm {

struct InitialState {
  bool vacuum = true;
  Occupation fock;  // used when !vacuum

  bool operator==(const InitialState&) const = default;
};

struct OutputSelection {
  bool occupations = true;
  bool g2 = true;
  std::vector<Occupation> probabilities;
  bool audits = false;

  bool operator==(const OutputSelection&) const = default;
};

/// Everything needed to reproduce one run. Serialised as flat `key = value`
/// lines; see serialize_config for the exact key set.
struct ScenarioConfig {
  ModelSpec model;
  InitialState initial;
  double t_max = 20.0;
  double dt_out = 0.05;
  double tol = 1e-9;
  bool audit_positivity = false;
  OutputSelection outputs;

  bool audited() const { return audit_positivity || outputs.audits; }
  /// Throws ConfigError naming the offending field.
  void validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& config);

/// Applies one `key = value` assignment on top of an existing config.
void apply_setting(ScenarioConfig& config, const std::string& key, const std::string& value);

std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

/// High-Q preset built from rates in s^-1, rescaled to units of u.
ScenarioConfig high_q_preset(double u_per_s, double gamma_per_s, double f_per_s);

struct ScenarioResult {
  std::vector<std::string> header;
  std::vector<ObservableRecord> records;
  EvolveStats stats;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

std::vector<std::string> csv_header(const ScenarioConfig& config);
/// Full-precision CSV. Undefined g2 values are empty fields.
std::string format_csv(const ScenarioConfig& config, const ScenarioResult& result);
std::string format_number(double value);

/// Observable columns of one row, in header order (empty optional for blanks).
std::vector<std::optional<double>> observable_values(const ScenarioConfig& config, const ObservableRecord& rec);

struct ConvergenceReport {
  std::vector<std::string> columns;        // observable column names
  std::vector<int> cutoffs;
  std::vector<std::vector<double>> deviation;  // [cutoff][column], vs largest cutoff
  std::vector<double> max_deviation;           // [cutoff]
};

/// Runs `config` at every cutoff (concurrently where cores allow) and reports
/// the max-abs deviation of each observable from the largest-cutoff run.
ConvergenceReport convergence_sweep(const ScenarioConfig& config, std::vector<int> cutoffs);
std::string format_convergence(const ConvergenceReport& report);

struct OracleParams {
  double u = 1.0;
  double gamma = 0.0;
  double delta = 0.0;
  double f = 0.01;
};

/// Closed-form values as CSV. formula: two_photon_probabilities,
/// two_photon_occupations, weak_pump0, weak_pump12, eigensystem.
std::string oracle_eval(const std::string& formula, const OracleParams& params, const std::vector<double>& t_grid);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Fits one column of a trajectory CSV, using samples with t_min <= t <= t_max.
fitkit::FitResult fit_column(const CsvTable& table, const std::string& column, double omega, double gamma_scale,
                             double t_min, double t_max, const fitkit::FitOptions& options);
std::string format_fit(const fitkit::FitResult& fit);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace fwm
