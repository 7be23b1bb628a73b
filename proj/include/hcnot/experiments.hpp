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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hcnot {

inline constexpr const char* kVersion = HCNOT_VERSION;

enum class Experiment { truth_table, bell_tomo, hom_scan, coupling, coupler_design, tomo_fit };

std::string to_string(Experiment e);
/// Accepts the dashed names used on the command line ("truth-table", ...).
Experiment parse_experiment(const std::string& name);

struct ExperimentConfig {
  Experiment experiment = Experiment::truth_table;

  struct Noise {
    double cross_overlap = 0.88;
    double ancilla_fidelity = 0.945;
    double pair_probability_ct = 0.01;
    double pair_probability_anc = 0.01;
    double pbs_leakage = 0.0;
  } noise;

  struct Statistics {
    /// Per analyzer setting (uniform across settings).
    double integration_time_s = 3600.0;
    /// 0 disables Monte-Carlo error bars.
    int mc_samples = 1000;
    std::uint64_t seed = 1;
    double repetition_rate_hz = 80e6;
    /// Per-photon transmission times detection efficiency.
    double detection_efficiency = 0.1;
  } statistics;

  struct Io {
    std::string output_dir = "hcnot-out";
    std::string format = "json";
    /// Count table read by tomo-fit.
    std::string input;
  } io;

  struct Photonics {
    double smf_mfd_um = 5.0;
    double tec_mfd_um = 10.0;
    double waveguide_mfd_x_um = 8.0;
    double waveguide_mfd_y_um = 11.0;
    double kappa_H = 1.0;
    double kappa_V = 0.5;
    double max_length_mm = 20.0;
    double bandwidth_nm = 3.0;
    double target_extinction = 50.0;
  } photonics;

  /// Parses and validates; every problem found is reported in one
  /// ConfigError. Missing keys keep their defaults, unknown keys are errors.
  static ExperimentConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
  /// Throws ConfigError listing every out-of-range field.
  void validate() const;
  std::vector<std::string> problems() const;
};

/// A plot- or script-ready table. Cells are JSON scalars.
struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct ExperimentOutput {
  nlohmann::json summary;
  std::vector<CsvTable> tables;
  std::vector<std::string> warnings;
  /// False when a fit did not converge; results are still written.
  bool converged = true;
};

ExperimentOutput run_truth_table(const ExperimentConfig& config);
ExperimentOutput run_bell_tomo(const ExperimentConfig& config);
ExperimentOutput run_hom_scan(const ExperimentConfig& config);
ExperimentOutput run_coupling(const ExperimentConfig& config);
ExperimentOutput run_coupler_design(const ExperimentConfig& config);
ExperimentOutput run_tomo_fit(const ExperimentConfig& config);

ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Writes <experiment>.json (summary with config echo and version) and, in
/// csv format, one CSV file per table with the same provenance as leading
/// '#' lines. Returns the paths written.
std::vector<std::filesystem::path> write_output(const ExperimentConfig& config,
                                                const ExperimentOutput& output);

}  // namespace hcnot
