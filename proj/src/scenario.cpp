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

#include "fwm/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "fwm/analytic.hpp"
#include "fwm/errors.hpp"

namespace fwm {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("field '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("field '" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("field '" + key + "': expected true or false, got '" + text + "'");
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string state_token(const Occupation& o) {
  return "P:" + std::to_string(o.m1) + ":" + std::to_string(o.m2) + ":" + std::to_string(o.m0);
}

std::string state_column(const Occupation& o) {
  return "P_" + std::to_string(o.m1) + "_" + std::to_string(o.m2) + "_" + std::to_string(o.m0);
}

}  // namespace

void apply_setting(ScenarioConfig& config, const std::string& key, const std::string& value) {
  ModelSpec& m = config.model;
  try {
    if (key == "u") {
      m.u = parse_double(key, value);
    } else if (key == "gamma") {
      m.gamma = parse_double(key, value);
    } else if (key == "delta") {
      m.delta = parse_double(key, value);
    } else if (key == "pump_detunings") {
      const auto parts = split(value, ',');
      if (parts.size() != 3) throw ConfigError("field 'pump_detunings': expected three comma-separated values");
      for (std::size_t i = 0; i < 3; ++i) m.pump_detunings[i] = parse_double(key, parts[i]);
    } else if (key == "scheme") {
      m.scheme = parse_pump_scheme(value);
    } else if (key == "envelope.shape") {
      m.envelope.shape = parse_pulse_shape(value);
    } else if (key == "envelope.f0") {
      m.envelope.f0 = parse_double(key, value);
    } else if (key == "envelope.tau") {
      m.envelope.tau = parse_double(key, value);
    } else if (key == "n_max") {
      m.n_max = parse_int(key, value);
    } else if (key == "initial") {
      const auto words = split_ws(value);
      if (words.size() == 1 && words[0] == "vacuum") {
        config.initial = InitialState{};
      } else if (words.size() == 4 && words[0] == "fock") {
        config.initial.vacuum = false;
        config.initial.fock = {parse_int(key, words[1]), parse_int(key, words[2]), parse_int(key, words[3])};
      } else {
        throw ConfigError("field 'initial': expected 'vacuum' or 'fock m1 m2 m0'");
      }
    } else if (key == "t_max") {
      config.t_max = parse_double(key, value);
    } else if (key == "dt_out") {
      config.dt_out = parse_double(key, value);
    } else if (key == "tol") {
      config.tol = parse_double(key, value);
    } else if (key == "audit_positivity") {
      config.audit_positivity = parse_bool(key, value);
    } else if (key == "outputs") {
      OutputSelection sel{false, false, {}, false};
      for (const auto& item : split(value, ',')) {
        if (item == "occupations") {
          sel.occupations = true;
        } else if (item == "g2") {
          sel.g2 = true;
        } else if (item == "audits") {
          sel.audits = true;
        } else if (item.starts_with("P:")) {
          const auto f = split(item.substr(2), ':');
          if (f.size() != 3) throw ConfigError("field 'outputs': bad state '" + item + "', expected P:m1:m2:m0");
          sel.probabilities.push_back({parse_int(key, f[0]), parse_int(key, f[1]), parse_int(key, f[2])});
        } else if (!item.empty()) {
          throw ConfigError("field 'outputs': unknown item '" + item + "'");
        }
      }
      config.outputs = sel;
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("field '" + key + "': " + e.what());
  }
}

void ScenarioConfig::validate() const {
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(t_max > 0.0)) throw ConfigError("field 't_max': must be > 0");
  if (!(dt_out > 0.0)) throw ConfigError("field 'dt_out': must be > 0");
  if (!(tol > 0.0)) throw ConfigError("field 'tol': must be > 0");
  const FockBasis basis(model.n_max);
  if (!initial.vacuum && !basis.contains(initial.fock)) {
    throw ConfigError("field 'initial': Fock state outside cutoff n_max=" + std::to_string(model.n_max));
  }
  for (const auto& o : outputs.probabilities) {
    if (!basis.contains(o)) throw ConfigError("field 'outputs': " + state_token(o) + " outside cutoff");
  }
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig config;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    try {
      apply_setting(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  const ModelSpec& m = c.model;
  std::ostringstream out;
  out << "# fwmsim scenario, rates in units of u, times in units of 1/u\n";
  out << "u = " << exact(m.u) << "\n";
  out << "gamma = " << exact(m.gamma) << "\n";
  out << "delta = " << exact(m.delta) << "\n";
  out << "pump_detunings = " << exact(m.pump_detunings[0]) << ", " << exact(m.pump_detunings[1]) << ", "
      << exact(m.pump_detunings[2]) << "\n";
  out << "scheme = " << to_string(m.scheme) << "\n";
  out << "envelope.shape = " << to_string(m.envelope.shape) << "\n";
  out << "envelope.f0 = " << exact(m.envelope.f0) << "\n";
  out << "envelope.tau = " << exact(m.envelope.tau) << "\n";
  out << "n_max = " << m.n_max << "\n";
  if (c.initial.vacuum) {
    out << "initial = vacuum\n";
  } else {
    out << "initial = fock " << c.initial.fock.m1 << " " << c.initial.fock.m2 << " " << c.initial.fock.m0 << "\n";
  }
  out << "t_max = " << exact(c.t_max) << "\n";
  out << "dt_out = " << exact(c.dt_out) << "\n";
  out << "tol = " << exact(c.tol) << "\n";
  out << "audit_positivity = " << (c.audit_positivity ? "true" : "false") << "\n";
  std::vector<std::string> items;
  if (c.outputs.occupations) items.emplace_back("occupations");
  if (c.outputs.g2) items.emplace_back("g2");
  for (const auto& o : c.outputs.probabilities) items.push_back(state_token(o));
  if (c.outputs.audits) items.emplace_back("audits");
  out << "outputs = ";
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? ", " : "") << items[i];
  out << "\n";
  return out.str();
}

ScenarioConfig high_q_preset(double u_per_s, double gamma_per_s, double f_per_s) {
  if (!(u_per_s > 0.0)) throw ConfigError("physical coupling u must be > 0");
  ScenarioConfig c;
  c.model.u = 1.0;
  c.model.gamma = gamma_per_s / u_per_s;
  c.model.scheme = PumpScheme::kPump0;
  c.model.envelope = {PulseShape::kConstantStep, f_per_s / u_per_s, 1.0};
  c.model.n_max = 10;
  c.t_max = 40.0;
  return c;
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig3_weak", "fig3_strong", "fig4", "fig5_rect", "fig5_halfgauss", "fig5_gauss", "fig6"};
}

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c;
  c.model.gamma = 0.1;
  c.model.n_max = 10;
  auto driven = [&](PumpScheme scheme, PulseShape shape, double f0, double tau, double t_max) {
    c.model.scheme = scheme;
    c.model.envelope = {shape, f0, tau};
    c.t_max = t_max;
  };
  if (name == "fig2") {
    c.model.n_max = 4;
    c.initial = {false, {0, 0, 2}};
    c.t_max = 20.0;
    c.outputs.probabilities = {{0, 0, 2}, {1, 1, 0}, {0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
  } else if (name == "fig3_weak") {
    driven(PumpScheme::kPump12, PulseShape::kConstantStep, 0.1, 1.0, 30.0);
  } else if (name == "fig3_strong") {
    driven(PumpScheme::kPump12, PulseShape::kConstantStep, 1.0, 1.0, 30.0);
  } else if (name == "fig4") {
    driven(PumpScheme::kPump0, PulseShape::kConstantStep, 1.0, 1.0, 30.0);
  } else if (name == "fig5_rect") {
    driven(PumpScheme::kPump0, PulseShape::kRect, 1.0, 2.6, 20.0);
  } else if (name == "fig5_halfgauss") {
    driven(PumpScheme::kPump0, PulseShape::kHalfGaussian, 1.0, 2.6, 20.0);
  } else if (name == "fig5_gauss") {
    driven(PumpScheme::kPump0, PulseShape::kCenteredGaussian, 1.0, 2.6, 20.0);
  } else if (name == "fig6") {
    c = high_q_preset(1.25e7, 2e5, 1.25e7);
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  c.validate();
  return c;
}

std::vector<std::string> csv_header(const ScenarioConfig& config) {
  std::vector<std::string> h{"t"};
  if (config.outputs.occupations) h.insert(h.end(), {"N0", "N1", "N2"});
  if (config.outputs.g2) h.insert(h.end(), {"g2_0", "g2_1", "g2_2"});
  for (const auto& o : config.outputs.probabilities) h.push_back(state_column(o));
  h.emplace_back("trace_err");
  if (config.audited()) h.emplace_back("min_eig");
  return h;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  const FockBasis basis(config.model.n_max);
  const DensityMatrix rho0 =
      make_fock_state(basis, config.initial.vacuum ? Occupation{0, 0, 0} : config.initial.fock);
  EvolveOptions options;
  options.tol = config.tol;
  options.audit_positivity = config.audited();

  ScenarioResult result;
  result.header = csv_header(config);
  result.stats = evolve(rho0, config.model, uniform_grid(config.t_max, config.dt_out), options,
                        [&](const Snapshot& snap) {
                          result.records.push_back(extract_record(snap.rho, snap.t, config.outputs.probabilities,
                                                                  kDefaultG2Threshold, snap.min_eigenvalue));
                        });
  return result;
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

std::vector<std::optional<double>> observable_values(const ScenarioConfig& config, const ObservableRecord& rec) {
  std::vector<std::optional<double>> v;
  if (config.outputs.occupations) v.insert(v.end(), rec.n.begin(), rec.n.end());
  if (config.outputs.g2) v.insert(v.end(), rec.g2.begin(), rec.g2.end());
  v.insert(v.end(), rec.probs.begin(), rec.probs.end());
  return v;
}

std::string format_csv(const ScenarioConfig& config, const ScenarioResult& result) {
  std::string out;
  for (std::size_t i = 0; i < result.header.size(); ++i) out += (i ? "," : "") + result.header[i];
  out += "\n";
  for (const auto& rec : result.records) {
    out += format_number(rec.t);
    for (const auto& v : observable_values(config, rec)) {
      out += ",";
      if (v) out += format_number(*v);
    }
    out += "," + format_number(rec.trace_error);
    if (config.audited()) {
      out += ",";
      if (rec.min_eigenvalue) out += format_number(*rec.min_eigenvalue);
    }
    out += "\n";
  }
  return out;
}

ConvergenceReport convergence_sweep(const ScenarioConfig& config, std::vector<int> cutoffs) {
  if (cutoffs.size() < 2) throw ConfigError("convergence sweep needs at least two cutoffs");
  std::sort(cutoffs.begin(), cutoffs.end());
  cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
  if (cutoffs.size() < 2) throw ConfigError("convergence sweep needs at least two distinct cutoffs");

  std::vector<ScenarioConfig> configs;
  for (int n : cutoffs) {
    ScenarioConfig c = config;
    c.model.n_max = n;
    c.validate();
    configs.push_back(c);
  }

  std::vector<ScenarioResult> results(configs.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < configs.size(); begin += workers) {
    const std::size_t end = std::min(configs.size(), begin + workers);
    std::vector<std::future<ScenarioResult>> jobs;
    for (std::size_t i = begin; i < end; ++i) {
      jobs.push_back(std::async(std::launch::async, [&configs, i] { return run_scenario(configs[i]); }));
    }
    for (std::size_t i = begin; i < end; ++i) results[i] = jobs[i - begin].get();
  }

  ConvergenceReport report;
  report.cutoffs = cutoffs;
  const auto& header = results.back().header;
  const std::size_t n_obs = observable_values(config, results.back().records.front()).size();
  report.columns.assign(header.begin() + 1, header.begin() + 1 + static_cast<long>(n_obs));
  const auto& reference = results.back().records;
  for (const auto& res : results) {
    std::vector<double> dev(n_obs, 0.0);
    for (std::size_t r = 0; r < reference.size(); ++r) {
      const auto a = observable_values(config, res.records[r]);
      const auto b = observable_values(config, reference[r]);
      for (std::size_t k = 0; k < n_obs; ++k) {
        if (a[k] && b[k]) dev[k] = std::max(dev[k], std::abs(*a[k] - *b[k]));
      }
    }
    report.max_deviation.push_back(dev.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end()));
    report.deviation.push_back(std::move(dev));
  }
  return report;
}

std::string format_convergence(const ConvergenceReport& report) {
  std::string out = "n_max";
  for (const auto& c : report.columns) out += ",dev_" + c;
  out += ",max_dev\n";
  for (std::size_t i = 0; i < report.cutoffs.size(); ++i) {
    out += std::to_string(report.cutoffs[i]);
    for (double d : report.deviation[i]) out += "," + format_number(d);
    out += "," + format_number(report.max_deviation[i]) + "\n";
  }
  return out;
}

std::string oracle_eval(const std::string& formula, const OracleParams& p, const std::vector<double>& t_grid) {
  std::string out;
  auto row = [&](std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      out += (first ? "" : ",") + format_number(v);
      first = false;
    }
    out += "\n";
  };
  if (formula == "two_photon_probabilities") {
    out = "t,P_20,P_11,P_10,P_1\n";
    for (double t : t_grid) {
      const auto q = analytic::closed_form_probabilities(t, p.u, p.gamma, p.delta);
      row({t, q.p20, q.p11, q.p10, q.p1_single});
    }
  } else if (formula == "two_photon_occupations") {
    out = "t,N0,N1,N2\n";
    for (double t : t_grid) {
      const auto n = analytic::closed_form_occupations(t, p.u, p.gamma, p.delta);
      row({t, n.n0, n.n1, n.n1});
    }
  } else if (formula == "weak_pump0") {
    out = "t,N1,N2\n";
    for (double t : t_grid) {
      const double n = analytic::perturbative_occupation(t, p.f, p.u, PumpScheme::kPump0);
      row({t, n, n});
    }
  } else if (formula == "weak_pump12") {
    out = "t,N0\n";
    for (double t : t_grid) row({t, analytic::perturbative_occupation(t, p.f, p.u, PumpScheme::kPump12)});
  } else if (formula == "eigensystem") {
    const auto es = analytic::two_photon_eigensystem(p.delta, p.u);
    out = "omega,e_plus,e_minus,amp20_plus,amp11_plus,amp20_minus,amp11_minus\n";
    row({es.omega, es.e_plus, es.e_minus, es.amp_20[0].real(), es.amp_11[0].real(), es.amp_20[1].real(),
         es.amp_11[1].real()});
  } else {
    throw ConfigError("unknown formula '" + formula + "' (expected two_photon_probabilities, two_photon_occupations, weak_pump0, weak_pump12, eigensystem)");
  }
  return out;
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError("CSV has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("CSV is empty");
  table.header = split(trim(line), ',');
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(trim(line), ',');
    if (fields.size() != table.header.size()) {
      throw ConfigError("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                        " fields, got " + std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

fitkit::FitResult fit_column(const CsvTable& table, const std::string& column, double omega, double gamma_scale,
                             double t_min, double t_max, const fitkit::FitOptions& options) {
  const std::size_t tc = table.column("t");
  const std::size_t yc = table.column(column);
  fitkit::TimeSeries series;
  for (const auto& r : table.rows) {
    const double t = parse_double("t", r[tc]);
    if (t < t_min || t > t_max) continue;
    if (r[yc].empty()) throw ConfigError("column '" + column + "' has an empty value at t=" + r[tc]);
    series.t.push_back(t);
    series.y.push_back(parse_double(column, r[yc]));
  }
  try {
    return fitkit::fit_interpolation(series, omega, gamma_scale, options);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("cannot fit column '") + column + "': " + e.what());
  }
}

std::string format_fit(const fitkit::FitResult& fit) {
  std::string out = "b1,alpha1,phi1,b2,alpha2,phi2,omega_fit,residual_rms,dominant\n";
  for (double v : {fit.b1, fit.alpha1, fit.phi1, fit.b2, fit.alpha2, fit.phi2, fit.omega_fit, fit.residual_rms}) {
    out += format_number(v) + ",";
  }
  out += fitkit::to_string(fit.dominant) + "\n";
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace fwm
