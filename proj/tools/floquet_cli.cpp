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

// floquet <experiment> [options]
//
// Exit codes: 0 success, 1 some rows failed, 2 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "floquet/sweep.hpp"

namespace {

namespace fs = floquet::sweep;

constexpr int kExitFailedRows = 1;
constexpr int kExitConfig = 2;

struct Flag {
  const char* key;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"lengths", "comma-separated chain lengths, e.g. 8,12,16"},
    {"omega", "drive grid MIN:MAX:POINTS:linear|log"},
    {"theta", "drive polar angle in radians, or xxx-point | xy-point"},
    {"coupling", "nearest-neighbour Ising coupling J"},
    {"boundary", "open | periodic"},
    {"periods", "drive periods averaged by the ipr experiment"},
    {"quadrature-steps", "Simpson steps for the Magnus cross-check"},
    {"workers", "worker threads"},
    {"output", "output file (stdout when omitted)"},
    {"format", "csv | json"},
    {"samples", "time samples for the path experiment"},
    {"tol", "Krylov tolerance"},
    {"kink-threshold", "kink detection threshold in units of the local median"},
    {"ipr-method", "auto | echo | direct"},
};

std::string env_name(std::string key) {
  for (auto& c : key) c = c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return "FLOQUET_" + key;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fs::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven Ising chains as Floquet-engineered Heisenberg models", "floquet"};
  app.set_version_flag("--version", FLOQUET_VERSION);

  std::string experiment;
  std::string config_path;
  app.add_option("experiment", experiment, "norm | echo | ipr | kinks | path")->envname("FLOQUET_EXPERIMENT");
  app.add_option("--config", config_path, "key = value settings file")->envname("FLOQUET_CONFIG");

  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::vector<std::string> values(std::size(kFlags));
  for (std::size_t i = 0; i < std::size(kFlags); ++i) {
    const std::string key = kFlags[i].key;
    options.emplace_back(key, app.add_option("--" + key, values[i], kFlags[i].help)->envname(env_name(key)));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  fs::SweepConfig cfg;
  try {
    std::vector<fs::Settings> layers;
    if (!config_path.empty()) layers.push_back(fs::parse_settings(read_file(config_path)));
    fs::Settings cli;
    if (!experiment.empty()) cli["experiment"] = experiment;
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (options[i].second->count() > 0) cli[options[i].first] = values[i];
    }
    layers.push_back(cli);
    cfg = fs::resolve_config(layers);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "floquet: %s\n", e.what());
    return kExitConfig;
  }

  if (!cfg.output.empty()) {
    std::ofstream probe(cfg.output, std::ios::app);
    if (!probe) {
      std::fprintf(stderr, "floquet: cannot write output '%s'\n", cfg.output.c_str());
      return kExitConfig;
    }
  }

  const fs::SweepTable table = fs::run_sweep(cfg);
  const std::string bytes = fs::emit(table, cfg.resolved_format());
  for (const auto& w : table.warnings) std::fprintf(stderr, "floquet: warning: %s\n", w.c_str());
  for (const auto& row : table.rows) {
    if (!row.error.empty()) std::fprintf(stderr, "floquet: row failed: %s\n", row.error.c_str());
  }
  if (cfg.output.empty()) {
    std::fwrite(bytes.data(), 1, bytes.size(), stdout);
  } else {
    try {
      fs::write_output(cfg.output, bytes);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "floquet: %s\n", e.what());
      return kExitFailedRows;
    }
  }
  return table.failures() > 0 ? kExitFailedRows : 0;
}
