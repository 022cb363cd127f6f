// Copyright 2026 The floquet-ising Authors
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

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"

#include "floquet/core.hpp"
#include "floquet/models.hpp"
#include "floquet/observables.hpp"
#include "floquet/propagators.hpp"
#include "floquet/spectra.hpp"

#ifndef FLOQUET_VERSION
#define FLOQUET_VERSION "0.0.0"
#endif

namespace floquet::sweep {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Experiment { norm, echo, ipr, kinks, path };
enum class Spacing { linear, log };
enum class Format { csv, json };
enum class IprMethod { automatic, echo, direct };

inline std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::norm: return "norm";
    case Experiment::echo: return "echo";
    case Experiment::ipr: return "ipr";
    case Experiment::kinks: return "kinks";
    case Experiment::path: return "path";
  }
  return "";
}
inline std::string_view to_string(Spacing s) { return s == Spacing::linear ? "linear" : "log"; }
inline std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "json"; }
inline std::string_view to_string(IprMethod m) {
  switch (m) {
    case IprMethod::automatic: return "auto";
    case IprMethod::echo: return "echo";
    case IprMethod::direct: return "direct";
  }
  return "";
}

/// Largest L for which `ipr_method = auto` uses the exact eigenbasis.
inline constexpr int kAutoDirectIprLimit = 10;

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct OmegaGrid {
  double min = 1.0;
  double max = 100.0;
  int points = 100;
  Spacing spacing = Spacing::log;

  void validate() const {
    if (!(std::isfinite(min) && min > 0.0)) throw ConfigError("omega: MIN must be > 0");
    if (!(std::isfinite(max) && max > min)) throw ConfigError("omega: MAX must be > MIN");
    if (points < 2) throw ConfigError("omega: POINTS must be >= 2");
  }

  std::vector<double> values() const {
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
      const double f = static_cast<double>(k) / (points - 1);
      out[static_cast<std::size_t>(k)] = spacing == Spacing::linear
                                             ? min + (max - min) * f
                                             : std::exp(std::log(min) + (std::log(max) - std::log(min)) * f);
    }
    out.front() = min;
    out.back() = max;
    return out;
  }

  std::string str() const {
    return format_number(min) + ":" + format_number(max) + ":" + std::to_string(points) + ":" +
           std::string(to_string(spacing));
  }
};

inline OmegaGrid default_grid(Experiment e) {
  if (e == Experiment::kinks) return OmegaGrid{1.0, 4.0, 151, Spacing::linear};
  return OmegaGrid{};
}

struct SweepConfig {
  std::optional<Experiment> experiment;
  std::vector<int> lengths{8};
  std::optional<OmegaGrid> omega;
  double theta = kXxxAngle;
  double coupling = 1.0;
  Boundary boundary = Boundary::open;
  int periods = 1000;
  int quadrature_steps = 10000;
  int workers = 1;
  std::string output;  ///< empty writes to stdout
  std::optional<Format> format;
  int samples = 100;
  double kink_threshold = 5.0;
  double tol = 1e-10;
  IprMethod ipr_method = IprMethod::automatic;

  Experiment kind() const {
    if (!experiment) throw ConfigError("experiment missing");
    return *experiment;
  }
  OmegaGrid grid() const { return omega ? *omega : default_grid(kind()); }

  Format resolved_format() const {
    if (format) return *format;
    return output.ends_with(".json") ? Format::json : Format::csv;
  }

  bool direct_ipr(int num_sites) const {
    return ipr_method == IprMethod::direct ||
           (ipr_method == IprMethod::automatic && num_sites <= kAutoDirectIprLimit);
  }

  void validate() const {
    const Experiment e = kind();
    if (lengths.empty()) throw ConfigError("lengths: must be non-empty");
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      if (lengths[i] < 1 || lengths[i] > kMaxSites) {
        throw ConfigError("lengths: each L must lie in [1, " + std::to_string(kMaxSites) + "]");
      }
      if (i > 0 && lengths[i] <= lengths[i - 1]) throw ConfigError("lengths: values must be distinct");
    }
    grid().validate();
    if (!(theta >= 0.0 && theta <= kPi)) throw ConfigError("theta: must lie in [0, pi]");
    if (!std::isfinite(coupling)) throw ConfigError("coupling: must be finite");
    if (periods < 1) throw ConfigError("periods: must be >= 1");
    if (quadrature_steps < 100) throw ConfigError("quadrature_steps: must be >= 100");
    if (workers < 1) throw ConfigError("workers: must be >= 1");
    if (samples < 2) throw ConfigError("samples: must be >= 2");
    if (!(kink_threshold > 0.0)) throw ConfigError("kink_threshold: must be > 0");
    if (!(tol > 0.0 && tol <= 1e-3)) throw ConfigError("tol: must lie in (0, 1e-3]");
    if (format && !output.empty()) {
      const bool json_ext = output.ends_with(".json");
      const bool csv_ext = output.ends_with(".csv");
      if ((*format == Format::csv && json_ext) || (*format == Format::json && csv_ext)) {
        throw ConfigError("format " + std::string(to_string(*format)) + " contradicts output " + output);
      }
    }
    const int largest = lengths.back();
    if (e == Experiment::norm && largest > kDefaultDenseCap) {
      throw ConfigError("lengths: the norm experiment is dense and needs L <= " + std::to_string(kDefaultDenseCap));
    }
    if (e == Experiment::ipr && ipr_method == IprMethod::direct && largest > kDefaultDenseCap) {
      throw ConfigError("lengths: ipr_method = direct needs L <= " + std::to_string(kDefaultDenseCap));
    }
    if (e == Experiment::kinks && grid().points < 5) throw ConfigError("omega: kink scans need at least 5 points");
  }
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Raw key/value settings from one source (file, environment or flags).
using Settings = std::map<std::string, std::string>;

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "experiment", "lengths", "omega",  "theta",   "coupling", "boundary",       "periods",   "quadrature_steps",
      "workers",    "output",  "format", "samples", "tol",      "kink_threshold", "ipr_method"};
  return keys;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

inline double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw ConfigError(key + ": not a number: '" + text + "'");
  return v;
}

inline int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": not an integer: '" + text + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace detail

/// `key = value` lines; `#` starts a comment. Keys may use '-' or '_'.
inline Settings parse_settings(std::string_view text) {
  Settings out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::normalize_key(detail::trim(std::string_view(body).substr(0, eq)));
    std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
      throw ConfigError("unknown key '" + key + "'");
    }
    if (out.contains(key)) throw ConfigError("duplicate key '" + key + "'");
    out[key] = value;
  }
  return out;
}

inline double parse_theta(const std::string& text) {
  if (text == "xxx-point") return kXxxAngle;
  if (text == "xy-point") return kXyAngle;
  return detail::parse_real("theta", text);
}

inline OmegaGrid parse_grid(const std::string& text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() != 4) throw ConfigError("omega: expected MIN:MAX:POINTS:SPACING");
  OmegaGrid g;
  g.min = detail::parse_real("omega", parts[0]);
  g.max = detail::parse_real("omega", parts[1]);
  g.points = detail::parse_int("omega", parts[2]);
  if (parts[3] == "linear") {
    g.spacing = Spacing::linear;
  } else if (parts[3] == "log") {
    g.spacing = Spacing::log;
  } else {
    throw ConfigError("omega: SPACING must be linear or log");
  }
  return g;
}

inline void apply_setting(SweepConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = detail::normalize_key(raw_key);
  if (key == "experiment") {
    static const std::map<std::string, Experiment, std::less<>> names = {{"norm", Experiment::norm},
                                                                         {"echo", Experiment::echo},
                                                                         {"ipr", Experiment::ipr},
                                                                         {"kinks", Experiment::kinks},
                                                                         {"path", Experiment::path}};
    const auto it = names.find(value);
    if (it == names.end()) throw ConfigError("experiment: unknown kind '" + value + "'");
    cfg.experiment = it->second;
  } else if (key == "lengths") {
    cfg.lengths.clear();
    for (const auto& part : detail::split(value, ',')) cfg.lengths.push_back(detail::parse_int("lengths", part));
    std::sort(cfg.lengths.begin(), cfg.lengths.end());
  } else if (key == "omega") {
    cfg.omega = parse_grid(value);
  } else if (key == "theta") {
    cfg.theta = parse_theta(value);
  } else if (key == "coupling") {
    cfg.coupling = detail::parse_real(key, value);
  } else if (key == "boundary") {
    if (value == "open") {
      cfg.boundary = Boundary::open;
    } else if (value == "periodic") {
      cfg.boundary = Boundary::periodic;
    } else {
      throw ConfigError("boundary: must be open or periodic");
    }
  } else if (key == "periods") {
    cfg.periods = detail::parse_int(key, value);
  } else if (key == "quadrature_steps") {
    cfg.quadrature_steps = detail::parse_int(key, value);
  } else if (key == "workers") {
    cfg.workers = detail::parse_int(key, value);
  } else if (key == "output") {
    cfg.output = value;
  } else if (key == "format") {
    if (value == "csv") {
      cfg.format = Format::csv;
    } else if (value == "json") {
      cfg.format = Format::json;
    } else {
      throw ConfigError("format: must be csv or json");
    }
  } else if (key == "samples") {
    cfg.samples = detail::parse_int(key, value);
  } else if (key == "tol") {
    cfg.tol = detail::parse_real(key, value);
  } else if (key == "kink_threshold") {
    cfg.kink_threshold = detail::parse_real(key, value);
  } else if (key == "ipr_method") {
    if (value == "auto") {
      cfg.ipr_method = IprMethod::automatic;
    } else if (value == "echo") {
      cfg.ipr_method = IprMethod::echo;
    } else if (value == "direct") {
      cfg.ipr_method = IprMethod::direct;
    } else {
      throw ConfigError("ipr_method: must be auto, echo or direct");
    }
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

/// Applies layers in order (later layers win) over the defaults and validates.
inline SweepConfig resolve_config(const std::vector<Settings>& layers) {
  SweepConfig cfg;
  for (const auto& layer : layers) {
    for (const auto& [key, value] : layer) apply_setting(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

inline SweepConfig parse_config(std::string_view text) { return resolve_config({parse_settings(text)}); }

/// Canonical settings that reproduce `cfg` exactly. Worker count and output
/// location are left out; they do not change the data.
inline Settings to_settings(const SweepConfig& cfg) {
  Settings s;
  s["experiment"] = std::string(to_string(cfg.kind()));
  std::string lengths;
  for (int n : cfg.lengths) lengths += (lengths.empty() ? "" : ",") + std::to_string(n);
  s["lengths"] = lengths;
  s["omega"] = cfg.grid().str();
  s["theta"] = format_number(cfg.theta);
  s["coupling"] = format_number(cfg.coupling);
  s["boundary"] = std::string(to_string(cfg.boundary));
  s["periods"] = std::to_string(cfg.periods);
  s["quadrature_steps"] = std::to_string(cfg.quadrature_steps);
  s["samples"] = std::to_string(cfg.samples);
  s["tol"] = format_number(cfg.tol);
  s["kink_threshold"] = format_number(cfg.kink_threshold);
  s["ipr_method"] = std::string(to_string(cfg.ipr_method));
  return s;
}

// ---------------------------------------------------------------------------
// Work pool
// ---------------------------------------------------------------------------

template <class T>
struct Outcome {
  T value{};
  std::string error;
  bool ok() const { return error.empty(); }
};

/// Evaluates fn(0..count-1) on `workers` threads. Results land in their own
/// slot, so the output order never depends on scheduling.
template <class Fn>
auto run_pool(std::size_t count, int workers, Fn fn) -> std::vector<Outcome<decltype(fn(std::size_t{}))>> {
  using T = decltype(fn(std::size_t{}));
  std::vector<Outcome<T>> out(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i].value = fn(i);
      } catch (const std::exception& e) {
        out[i].error = *e.what() ? e.what() : "unknown error";
      } catch (...) {
        out[i].error = "unknown error";
      }
    }
  };
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (n <= 1) {
    work();
    return out;
  }
  std::vector<std::jthread> threads;
  threads.reserve(n);
  for (std::size_t t = 0; t < n; ++t) threads.emplace_back(work);
  threads.clear();
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct Row {
  std::vector<double> values;  ///< one per numeric column, NaN on error rows
  std::string method;          ///< ipr only
  std::string error;
};

struct SweepTable {
  SweepConfig config;
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::vector<std::string> warnings;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const Row& r) { return !r.error.empty(); }));
  }
};

inline std::vector<std::string> columns_for(Experiment e) {
  switch (e) {
    case Experiment::norm: return {"L", "omega", "spectral_norm"};
    case Experiment::echo: return {"L", "omega", "echo", "rate"};
    case Experiment::ipr: return {"L", "omega", "ipr", "lambda_ipr", "method"};
    case Experiment::kinks: return {"L", "omega_star", "left_slope", "right_slope", "strength"};
    case Experiment::path: return {"t", "ex", "ey", "ez"};
  }
  return {};
}

namespace detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline Row error_row(std::vector<double> leading, std::size_t numeric_columns, const std::string& message) {
  Row r;
  r.values = std::move(leading);
  r.values.resize(numeric_columns, kNaN);
  r.error = message;
  return r;
}

inline std::size_t numeric_columns(Experiment e) {
  const auto cols = columns_for(e);
  return e == Experiment::ipr ? cols.size() - 1 : cols.size();
}

inline SystemSpec chain_for(const SweepConfig& cfg, int n) { return SystemSpec::chain(n, cfg.coupling, cfg.boundary); }

struct PointTask {
  std::size_t length_index;
  double omega;
};

inline std::vector<PointTask> point_tasks(const SweepConfig& cfg, const std::vector<double>& omegas) {
  std::vector<PointTask> tasks;
  for (std::size_t li = 0; li < cfg.lengths.size(); ++li) {
    for (double w : omegas) tasks.push_back({li, w});
  }
  return tasks;
}

/// Ground state of the lab-frame effective model, once per L.
inline std::vector<Outcome<GroundState>> target_states(const SweepConfig& cfg, std::vector<std::string>& warnings) {
  auto states = run_pool(cfg.lengths.size(), cfg.workers, [&](std::size_t i) {
    const auto spec = chain_for(cfg, cfg.lengths[i]);
    return ground_state(build_effective_lab_frame(spec, DriveField{1.0, cfg.theta, 0.0}), std::min(cfg.tol, 1e-9));
  });
  for (std::size_t i = 0; i < states.size(); ++i) {
    const int n = cfg.lengths[i];
    if (!states[i].ok()) {
      warnings.push_back("L=" + std::to_string(n) + ": ground state failed: " + states[i].error);
    } else if (states[i].value.degenerate || n % 2 == 1) {
      warnings.push_back("L=" + std::to_string(n) +
                         ": degenerate effective ground space; the echo uses the seeded Lanczos representative");
    }
  }
  return states;
}

inline void run_norm(SweepTable& table) {
  const auto& cfg = table.config;
  const auto omegas = cfg.grid().values();
  auto targets = run_pool(cfg.lengths.size(), cfg.workers, [&](std::size_t i) {
    const auto spec = chain_for(cfg, cfg.lengths[i]);
    return full_diagonalize(build_effective_xxz(spec, cfg.theta));
  });
  // First-order Magnus term by quadrature against the closed form, per L.
  nlohmann::ordered_json residuals = nlohmann::ordered_json::object();
  for (int n : cfg.lengths) {
    const auto spec = chain_for(cfg, n);
    const DriveField d{omegas.front(), cfg.theta, 0.0};
    residuals[std::to_string(n)] = max_coefficient_difference(magnus_first_order_terms(spec, d, cfg.quadrature_steps),
                                                              build_effective_lab_frame(spec, d));
  }
  table.diagnostics["magnus_residual"] = residuals;

  const auto tasks = point_tasks(cfg, omegas);
  auto results = run_pool(tasks.size(), cfg.workers, [&](std::size_t i) {
    const auto& t = tasks[i];
    const auto& target = targets[t.length_index];
    if (!target.ok()) throw std::runtime_error("effective model: " + target.error);
    const int n = cfg.lengths[t.length_index];
    return floquet_error_norm(chain_for(cfg, n), DriveField{t.omega, cfg.theta, 0.0}, target.value);
  });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const double n = cfg.lengths[tasks[i].length_index];
    if (results[i].ok()) {
      table.rows.push_back(Row{{n, tasks[i].omega, results[i].value}, {}, {}});
    } else {
      table.rows.push_back(error_row({n, tasks[i].omega}, 3, results[i].error));
    }
  }
}

inline std::vector<Outcome<double>> echo_values(const SweepConfig& cfg, const std::vector<PointTask>& tasks,
                                                const std::vector<Outcome<GroundState>>& states) {
  return run_pool(tasks.size(), cfg.workers, [&](std::size_t i) {
    const auto& t = tasks[i];
    const auto& gs = states[t.length_index];
    if (!gs.ok()) throw std::runtime_error("ground state: " + gs.error);
    const DriveField d{t.omega, cfg.theta, 0.0};
    const auto h = build_ising_drive(chain_for(cfg, cfg.lengths[t.length_index]), d);
    return loschmidt_echo(gs.value.state, h, d.period(), EchoOptions{8, cfg.tol});
  });
}

inline void run_echo(SweepTable& table) {
  const auto& cfg = table.config;
  const auto states = target_states(cfg, table.warnings);
  const auto tasks = point_tasks(cfg, cfg.grid().values());
  const auto echoes = echo_values(cfg, tasks, states);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const int n = cfg.lengths[tasks[i].length_index];
    if (echoes[i].ok()) {
      const RatePoint p = make_rate_point(tasks[i].omega, echoes[i].value, n);
      table.rows.push_back(Row{{static_cast<double>(n), p.omega, p.echo, p.rate}, {}, {}});
    } else {
      table.rows.push_back(error_row({static_cast<double>(n), tasks[i].omega}, 4, echoes[i].error));
    }
  }
}

inline void run_ipr(SweepTable& table) {
  const auto& cfg = table.config;
  const auto states = target_states(cfg, table.warnings);
  const auto tasks = point_tasks(cfg, cfg.grid().values());
  const auto results = run_pool(tasks.size(), cfg.workers, [&](std::size_t i) {
    const auto& t = tasks[i];
    const auto& gs = states[t.length_index];
    if (!gs.ok()) throw std::runtime_error("ground state: " + gs.error);
    const int n = cfg.lengths[t.length_index];
    const auto spec = chain_for(cfg, n);
    const DriveField d{t.omega, cfg.theta, 0.0};
    if (cfg.direct_ipr(n)) return ipr_direct(gs.value.state, full_diagonalize(build_ising_drive(spec, d)));
    return ipr_echo_average(gs.value.state, spec, d, cfg.periods, cfg.tol);
  });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const int n = cfg.lengths[tasks[i].length_index];
    const std::string method = cfg.direct_ipr(n) ? "direct" : "echo";
    Row r;
    if (results[i].ok()) {
      r.values = {static_cast<double>(n), tasks[i].omega, results[i].value, lambda_ipr(results[i].value, n)};
    } else {
      r = error_row({static_cast<double>(n), tasks[i].omega}, 4, results[i].error);
    }
    r.method = method;
    table.rows.push_back(std::move(r));
  }
}

inline void run_kinks(SweepTable& table) {
  const auto& cfg = table.config;
  const auto states = target_states(cfg, table.warnings);
  const auto omegas = cfg.grid().values();
  const auto tasks = point_tasks(cfg, omegas);
  const auto echoes = echo_values(cfg, tasks, states);
  KinkOptions opt;
  opt.threshold = cfg.kink_threshold;
  for (std::size_t li = 0; li < cfg.lengths.size(); ++li) {
    const int n = cfg.lengths[li];
    const double length = n;
    std::vector<RatePoint> points;
    std::string failure;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].length_index != li) continue;
      if (!echoes[i].ok()) {
        failure = "omega=" + format_number(tasks[i].omega) + ": " + echoes[i].error;
        break;
      }
      points.push_back(make_rate_point(tasks[i].omega, echoes[i].value, n));
    }
    if (failure.empty()) {
      try {
        std::vector<std::string> warnings;
        const auto kinks = detect_kinks(points, opt, &warnings);
        for (const auto& w : warnings) table.warnings.push_back("L=" + std::to_string(n) + ": " + w);
        if (kinks.empty()) table.warnings.push_back("L=" + std::to_string(n) + ": no kinks detected");
        for (const auto& k : kinks) {
          table.rows.push_back(Row{{length, k.omega_star, k.left_slope, k.right_slope, k.strength}, {}, {}});
        }
        continue;
      } catch (const std::exception& e) {
        failure = e.what();
      }
    }
    table.rows.push_back(error_row({length}, 5, failure));
  }
}

inline void run_path(SweepTable& table) {
  const auto& cfg = table.config;
  const DriveField d{cfg.grid().min, cfg.theta, 0.0};
  const double period = d.period();
  for (int k = 0; k < cfg.samples; ++k) {
    const double t = k == cfg.samples - 1 ? period : period * k / (cfg.samples - 1);
    const Vec3 e = drive_path(d, t);
    table.rows.push_back(Row{{t, e[0], e[1], e[2]}, {}, {}});
  }
}

}  // namespace detail

inline SweepTable run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepTable table;
  table.config = cfg;
  table.columns = columns_for(cfg.kind());
  switch (cfg.kind()) {
    case Experiment::norm: detail::run_norm(table); break;
    case Experiment::echo: detail::run_echo(table); break;
    case Experiment::ipr: detail::run_ipr(table); break;
    case Experiment::kinks: detail::run_kinks(table); break;
    case Experiment::path: detail::run_path(table); break;
  }
  return table;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

/// ISO-8601 UTC time from SOURCE_DATE_EPOCH, or null when it is unset.
inline nlohmann::ordered_json build_timestamp() {
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  if (epoch == nullptr || *epoch == '\0') return nullptr;
  long long seconds = 0;
  const auto* end = epoch + std::char_traits<char>::length(epoch);
  const auto [ptr, ec] = std::from_chars(epoch, end, seconds);
  if (ec != std::errc() || ptr != end) return nullptr;
  const std::time_t t = static_cast<std::time_t>(seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

inline nlohmann::ordered_json meta(const SweepTable& table) {
  nlohmann::ordered_json m;
  m["engine"] = "floquet-ising";
  m["version"] = FLOQUET_VERSION;
  m["timestamp"] = build_timestamp();
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : to_settings(table.config)) config[key] = value;
  m["config"] = config;
  m["columns"] = table.columns;
  m["failed_rows"] = table.failures();
  m["warnings"] = table.warnings;
  for (const auto& [key, value] : table.diagnostics.items()) m[key] = value;
  return m;
}

inline std::string emit_csv(const SweepTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.values.size(); ++c) out += (c ? "," : "") + format_number(row.values[c]);
    if (table.config.kind() == Experiment::ipr) out += "," + row.method;
    out += '\n';
  }
  return out;
}

inline std::string emit_json(const SweepTable& table) {
  std::string out = "{\"meta\": " + meta(table).dump(2) + ",\n\"rows\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    out += r ? ",\n  {" : "\n  {";
    for (std::size_t c = 0; c < row.values.size(); ++c) {
      const double v = row.values[c];
      out += (c ? ", \"" : "\"") + table.columns[c] + "\": " + (std::isfinite(v) ? format_number(v) : "null");
    }
    if (table.config.kind() == Experiment::ipr) out += ", \"method\": " + nlohmann::json(row.method).dump();
    if (!row.error.empty()) out += ", \"error\": " + nlohmann::json(row.error).dump();
    out += "}";
  }
  out += table.rows.empty() ? "]}\n" : "\n]}\n";
  return out;
}

inline std::string emit(const SweepTable& table, Format format) {
  return format == Format::csv ? emit_csv(table) : emit_json(table);
}

inline void write_output(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open output '" + path + "'");
  f << bytes;
  if (!f.flush()) throw std::runtime_error("cannot write output '" + path + "'");
}

}  // namespace floquet::sweep
