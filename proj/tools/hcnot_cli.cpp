// Copyright 2026 The hcnot Authors
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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hcnot/errors.hpp"
#include "hcnot/experiments.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> cross_overlap;
  std::optional<double> ancilla_fidelity;
  std::optional<int> mc_samples;
  std::optional<std::string> input;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON experiment config");
  cmd->add_option("--seed", f.seed, "64-bit RNG seed");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--format", f.format, "json or csv");
  cmd->add_option("--cross-overlap", f.cross_overlap, "cross-source wavepacket overlap");
  cmd->add_option("--ancilla-fidelity", f.ancilla_fidelity, "ancilla Bell-state fidelity");
  cmd->add_option("--mc-samples", f.mc_samples, "Monte-Carlo samples (0 disables)");
  cmd->add_option("--input", f.input, "count table CSV (tomo-fit)");
}

nlohmann::json load_document(const Flags& f) {
  nlohmann::json doc = nlohmann::json::object();
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw hcnot::ConfigError({"cannot open config '" + f.config_path + "'"});
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw hcnot::ConfigError({f.config_path + ": " + e.what()});
    }
    if (!doc.is_object()) throw hcnot::ConfigError({"config must be a JSON object"});
  }
  // Flags win over the file.
  if (f.seed) doc["statistics"]["seed"] = *f.seed;
  if (f.mc_samples) doc["statistics"]["mc_samples"] = *f.mc_samples;
  if (f.out) doc["io"]["output_dir"] = *f.out;
  if (f.format) doc["io"]["format"] = *f.format;
  if (f.input) doc["io"]["input"] = *f.input;
  if (f.cross_overlap) doc["noise"]["cross_overlap"] = *f.cross_overlap;
  if (f.ancilla_fidelity) doc["noise"]["ancilla_fidelity"] = *f.ancilla_fidelity;
  return doc;
}

int execute(const std::string& experiment, const Flags& f) {
  hcnot::ExperimentConfig config;
  try {
    nlohmann::json doc = load_document(f);
    if (!experiment.empty()) doc["experiment"] = experiment;
    config = hcnot::ExperimentConfig::from_json(doc);
  } catch (const hcnot::ConfigError& e) {
    std::cerr << "hcnot: invalid configuration\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << '\n';
    return kExitConfig;
  }

  try {
    const auto output = hcnot::run_experiment(config);
    for (const auto& path : hcnot::write_output(config, output)) {
      std::cout << path.string() << '\n';
    }
    for (const auto& w : output.warnings) std::cerr << "warning: " << w << '\n';
    if (!output.converged) {
      std::cerr << "hcnot: fit did not converge; best iterate written\n";
      return kExitRuntime;
    }
  } catch (const hcnot::ParseError& e) {
    std::cerr << "hcnot: " << config.io.input << ": " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "hcnot: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heralded linear-optical CNOT simulator"};
  app.set_version_flag("--version", std::string(hcnot::kVersion));
  app.require_subcommand(1);

  Flags flags;
  std::string chosen;
  auto* run = app.add_subcommand("run", "run the experiment named in --config");
  add_common(run, flags);
  run->callback([&] { chosen = ""; });
  for (const char* name :
       {"truth-table", "bell-tomo", "hom-scan", "coupling", "coupler-design", "tomo-fit"}) {
    auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    add_common(cmd, flags);
    cmd->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  return execute(chosen, flags);
}
