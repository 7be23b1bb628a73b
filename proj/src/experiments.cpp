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

#include "hcnot/experiments.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "hcnot/counting.hpp"
#include "hcnot/errors.hpp"
#include "hcnot/photonics.hpp"
#include "hcnot/protocol.hpp"
#include "hcnot/source.hpp"
#include "hcnot/tomography.hpp"

namespace hcnot {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Experiment, const char*>, 6> kExperimentNames = {{
    {Experiment::truth_table, "truth-table"},
    {Experiment::bell_tomo, "bell-tomo"},
    {Experiment::hom_scan, "hom-scan"},
    {Experiment::coupling, "coupling"},
    {Experiment::coupler_design, "coupler-design"},
    {Experiment::tomo_fit, "tomo-fit"},
}};

// Stream index reserved for count generation; Monte-Carlo samples use
// streams 0 .. n-1 of the same seed.
constexpr std::uint64_t kCountStream = ~std::uint64_t{0};

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, name] : kExperimentNames) {
    if (k == e) return name;
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& [k, n] : kExperimentNames) {
    if (name == n) return k;
  }
  throw ConfigError({"unknown experiment '" + name + "'"});
}

// ---------------------------------------------------------------- config

namespace {

class ConfigReader {
 public:
  ConfigReader(const json& doc, std::vector<std::string>& problems)
      : doc_(doc), problems_(problems) {}

  const json* section(const char* name, std::initializer_list<const char*> keys) {
    if (!doc_.contains(name)) return nullptr;
    const json& s = doc_.at(name);
    if (!s.is_object()) {
      problems_.push_back(std::string(name) + ": expected an object");
      return nullptr;
    }
    for (const auto& [key, value] : s.items()) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) problems_.push_back(std::string(name) + "." + key + ": unknown key");
    }
    return &s;
  }

  void number(const json* s, const char* sec, const char* key, double& out) {
    if (const json* v = find(s, key)) {
      if (v->is_number()) {
        out = v->get<double>();
      } else {
        problems_.push_back(path(sec, key) + ": expected a number");
      }
    }
  }

  void integer(const json* s, const char* sec, const char* key, int& out) {
    if (const json* v = find(s, key)) {
      if (v->is_number_integer() && v->get<long long>() >= INT32_MIN &&
          v->get<long long>() <= INT32_MAX) {
        out = v->get<int>();
      } else {
        problems_.push_back(path(sec, key) + ": expected an integer");
      }
    }
  }

  void unsigned64(const json* s, const char* sec, const char* key, std::uint64_t& out) {
    if (const json* v = find(s, key)) {
      if (v->is_number_unsigned() || (v->is_number_integer() && v->get<long long>() >= 0)) {
        out = v->get<std::uint64_t>();
      } else {
        problems_.push_back(path(sec, key) + ": expected a non-negative 64-bit integer");
      }
    }
  }

  void string(const json* s, const char* sec, const char* key, std::string& out) {
    if (const json* v = find(s, key)) {
      if (v->is_string()) {
        out = v->get<std::string>();
      } else {
        problems_.push_back(path(sec, key) + ": expected a string");
      }
    }
  }

 private:
  static const json* find(const json* s, const char* key) {
    if (!s || !s->contains(key)) return nullptr;
    return &s->at(key);
  }
  static std::string path(const char* sec, const char* key) {
    return std::string(sec) + "." + key;
  }

  const json& doc_;
  std::vector<std::string>& problems_;
};

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError({"config must be a JSON object"});
  ExperimentConfig c;
  std::vector<std::string> problems;
  for (const auto& [key, value] : doc.items()) {
    if (key != "experiment" && key != "noise" && key != "statistics" && key != "io" &&
        key != "photonics" && key != "version") {
      problems.push_back(key + ": unknown key");
    }
  }
  if (doc.contains("experiment")) {
    if (!doc["experiment"].is_string()) {
      problems.push_back("experiment: expected a string");
    } else {
      try {
        c.experiment = parse_experiment(doc["experiment"].get<std::string>());
      } catch (const ConfigError& e) {
        problems.insert(problems.end(), e.problems().begin(), e.problems().end());
      }
    }
  }

  ConfigReader r(doc, problems);
  const json* noise = r.section("noise", {"cross_overlap", "ancilla_fidelity",
                                          "pair_probability_ct", "pair_probability_anc",
                                          "pbs_leakage"});
  r.number(noise, "noise", "cross_overlap", c.noise.cross_overlap);
  r.number(noise, "noise", "ancilla_fidelity", c.noise.ancilla_fidelity);
  r.number(noise, "noise", "pair_probability_ct", c.noise.pair_probability_ct);
  r.number(noise, "noise", "pair_probability_anc", c.noise.pair_probability_anc);
  r.number(noise, "noise", "pbs_leakage", c.noise.pbs_leakage);

  const json* stats = r.section("statistics", {"integration_time_s", "mc_samples", "seed",
                                               "repetition_rate_hz", "detection_efficiency"});
  r.number(stats, "statistics", "integration_time_s", c.statistics.integration_time_s);
  r.integer(stats, "statistics", "mc_samples", c.statistics.mc_samples);
  r.unsigned64(stats, "statistics", "seed", c.statistics.seed);
  r.number(stats, "statistics", "repetition_rate_hz", c.statistics.repetition_rate_hz);
  r.number(stats, "statistics", "detection_efficiency", c.statistics.detection_efficiency);

  const json* io = r.section("io", {"output_dir", "format", "input"});
  r.string(io, "io", "output_dir", c.io.output_dir);
  r.string(io, "io", "format", c.io.format);
  r.string(io, "io", "input", c.io.input);

  const json* ph = r.section("photonics", {"smf_mfd_um", "tec_mfd_um", "waveguide_mfd_x_um",
                                           "waveguide_mfd_y_um", "kappa_H", "kappa_V",
                                           "max_length_mm", "bandwidth_nm",
                                           "target_extinction"});
  r.number(ph, "photonics", "smf_mfd_um", c.photonics.smf_mfd_um);
  r.number(ph, "photonics", "tec_mfd_um", c.photonics.tec_mfd_um);
  r.number(ph, "photonics", "waveguide_mfd_x_um", c.photonics.waveguide_mfd_x_um);
  r.number(ph, "photonics", "waveguide_mfd_y_um", c.photonics.waveguide_mfd_y_um);
  r.number(ph, "photonics", "kappa_H", c.photonics.kappa_H);
  r.number(ph, "photonics", "kappa_V", c.photonics.kappa_V);
  r.number(ph, "photonics", "max_length_mm", c.photonics.max_length_mm);
  r.number(ph, "photonics", "bandwidth_nm", c.photonics.bandwidth_nm);
  r.number(ph, "photonics", "target_extinction", c.photonics.target_extinction);

  const auto range = c.problems();
  problems.insert(problems.end(), range.begin(), range.end());
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

std::vector<std::string> ExperimentConfig::problems() const {
  std::vector<std::string> p;
  auto in = [&](double v, double lo, double hi, const char* name) {
    if (!(v >= lo && v <= hi)) {
      std::ostringstream os;
      os << name << ": " << v << " outside [" << lo << ", " << hi << "]";
      p.push_back(os.str());
    }
  };
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) p.push_back(std::string(name) + ": must be positive");
  };
  in(noise.cross_overlap, 0.0, 1.0, "noise.cross_overlap");
  in(noise.ancilla_fidelity, 0.25, 1.0, "noise.ancilla_fidelity");
  in(noise.pair_probability_ct, 0.0, 0.1, "noise.pair_probability_ct");
  in(noise.pair_probability_anc, 0.0, 0.1, "noise.pair_probability_anc");
  in(noise.pbs_leakage, 0.0, 0.5, "noise.pbs_leakage");
  positive(statistics.integration_time_s, "statistics.integration_time_s");
  if (statistics.mc_samples < 0 || statistics.mc_samples == 1) {
    p.push_back("statistics.mc_samples: must be 0 (off) or at least 2");
  }
  positive(statistics.repetition_rate_hz, "statistics.repetition_rate_hz");
  in(statistics.detection_efficiency, 1e-12, 1.0, "statistics.detection_efficiency");
  if (io.output_dir.empty()) p.push_back("io.output_dir: must not be empty");
  if (io.format != "json" && io.format != "csv") {
    p.push_back("io.format: expected 'json' or 'csv', got '" + io.format + "'");
  }
  if (experiment == Experiment::tomo_fit && io.input.empty()) {
    p.push_back("io.input: tomo-fit needs a count table");
  }
  positive(photonics.smf_mfd_um, "photonics.smf_mfd_um");
  positive(photonics.tec_mfd_um, "photonics.tec_mfd_um");
  positive(photonics.waveguide_mfd_x_um, "photonics.waveguide_mfd_x_um");
  positive(photonics.waveguide_mfd_y_um, "photonics.waveguide_mfd_y_um");
  positive(photonics.kappa_H, "photonics.kappa_H");
  positive(photonics.kappa_V, "photonics.kappa_V");
  if (photonics.kappa_H == photonics.kappa_V) {
    p.push_back("photonics.kappa_H: must differ from kappa_V");
  }
  positive(photonics.max_length_mm, "photonics.max_length_mm");
  if (!(photonics.bandwidth_nm >= 0.0)) p.push_back("photonics.bandwidth_nm: must be >= 0");
  if (!(photonics.target_extinction > 1.0)) {
    p.push_back("photonics.target_extinction: must exceed 1");
  }
  return p;
}

void ExperimentConfig::validate() const {
  auto p = problems();
  if (!p.empty()) throw ConfigError(std::move(p));
}

json ExperimentConfig::to_json() const {
  return json{
      {"experiment", to_string(experiment)},
      {"noise",
       {{"cross_overlap", noise.cross_overlap},
        {"ancilla_fidelity", noise.ancilla_fidelity},
        {"pair_probability_ct", noise.pair_probability_ct},
        {"pair_probability_anc", noise.pair_probability_anc},
        {"pbs_leakage", noise.pbs_leakage}}},
      {"statistics",
       {{"integration_time_s", statistics.integration_time_s},
        {"mc_samples", statistics.mc_samples},
        {"seed", statistics.seed},
        {"repetition_rate_hz", statistics.repetition_rate_hz},
        {"detection_efficiency", statistics.detection_efficiency}}},
      {"io", {{"output_dir", io.output_dir}, {"format", io.format}, {"input", io.input}}},
      {"photonics",
       {{"smf_mfd_um", photonics.smf_mfd_um},
        {"tec_mfd_um", photonics.tec_mfd_um},
        {"waveguide_mfd_x_um", photonics.waveguide_mfd_x_um},
        {"waveguide_mfd_y_um", photonics.waveguide_mfd_y_um},
        {"kappa_H", photonics.kappa_H},
        {"kappa_V", photonics.kappa_V},
        {"max_length_mm", photonics.max_length_mm},
        {"bandwidth_nm", photonics.bandwidth_nm},
        {"target_extinction", photonics.target_extinction}}},
  };
}

// ---------------------------------------------------------------- tables

json CsvTable::to_json() const {
  return json{{"columns", columns}, {"rows", rows}};
}

std::string CsvTable::to_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << (row[i].is_string() ? row[i].get<std::string>() : row[i].dump());
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- helpers

namespace {

json matrix_json(const Eigen::Matrix4cd& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

json table_json(const Eigen::Matrix4d& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    rows.push_back({m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

std::string bits(std::size_t o) {
  return std::string{static_cast<char>('0' + o / 2), static_cast<char>('0' + o % 2)};
}

struct Model {
  SourceConfig ct;
  SourceConfig anc;
  DistinguishabilityModel d;
  double leakage = 0.0;
  double four_fold_scale = 0.0;  // per-pulse probability -> Hz
  double two_fold_scale = 0.0;
};

Model model_of(const ExperimentConfig& c) {
  Model m;
  m.ct = {c.noise.pair_probability_ct, 1.0, 0};
  m.anc = {c.noise.pair_probability_anc, c.noise.ancilla_fidelity, 1};
  m.d = {c.noise.cross_overlap};
  m.leakage = c.noise.pbs_leakage;
  const double eta = c.statistics.detection_efficiency;
  m.two_fold_scale = c.statistics.repetition_rate_hz * eta * eta;
  m.four_fold_scale = m.two_fold_scale * eta * eta;
  return m;
}

BlockedRates rates_for(const Model& m, const QubitPair& input) {
  return combine_rates(four_fold_rates(emission_ensemble(m.ct, m.anc, m.d, input), m.leakage));
}

json mc_json(const MonteCarloResult& mc) {
  return json{{"plug_in", vector_json(mc.plug_in)},
              {"mean", vector_json(mc.mean)},
              {"std", vector_json(mc.std)},
              {"accepted", mc.accepted},
              {"rejected", mc.rejected},
              {"rejection_fraction", mc.rejection_fraction()},
              {"log", mc.log}};
}

const std::array<const char*, 4> kComputationalInputs = {"HH", "HV", "VH", "VV"};

// Records are laid out input-major, then herald, then output.
using HeraldPopulations = std::array<Eigen::Vector4d, kNumHeralds>;

TruthTable table_from_populations(const std::array<HeraldPopulations, 4>& pops,
                                  bool allow_empty_rows) {
  TruthTable t = TruthTable::Zero();
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector4d row = corrected_populations(pops[static_cast<std::size_t>(i)]);
    const double sum = row.sum();
    if (!(sum > 0.0)) {
      if (allow_empty_rows) continue;
      throw EstimatorFailure(std::string("no net counts for input ") + kComputationalInputs[i]);
    }
    t.row(i) = row.transpose() / sum;
  }
  return t;
}

Eigen::VectorXd truth_table_estimator(const std::vector<CountRecord>& records) {
  if (records.size() != 4 * kNumHeralds * 4) {
    throw EstimatorFailure("truth-table estimator expects 64 records");
  }
  std::array<HeraldPopulations, 4> pops{};
  for (std::size_t k = 0; k < records.size(); ++k) {
    pops[k / 16][(k / 4) % 4](static_cast<Eigen::Index>(k % 4)) = noise_subtract(records[k]);
  }
  const TruthTable t = table_from_populations(pops, false);
  Eigen::VectorXd out(17);
  out(0) = truth_table_overlap(t);
  for (int i = 0; i < 16; ++i) out(1 + i) = t(i / 4, i % 4);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- runners

ExperimentOutput run_truth_table(const ExperimentConfig& config) {
  config.validate();
  const Model m = model_of(config);
  const double t_int = config.statistics.integration_time_s;

  std::array<HeraldPopulations, 4> sub{}, raw{};
  std::vector<CountRecord> records;
  CountSampler sampler(config.statistics.seed, kCountStream);
  double total_raw_rate = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string label = kComputationalInputs[i];
    const BlockedRates b = rates_for(m, QubitPair::from_labels(label.substr(0, 1), label.substr(1, 1)));
    for (std::size_t h = 0; h < kNumHeralds; ++h) {
      for (std::size_t o = 0; o < 4; ++o) {
        const auto k = static_cast<Eigen::Index>(o);
        const double r = b.raw[h](k, k).real();
        const double bct = b.blocked_ct[h](k, k).real();
        const double banc = b.blocked_anc[h](k, k).real();
        raw[i][h](k) = r;
        sub[i][h](k) = r - bct - banc;
        total_raw_rate += r * m.four_fold_scale;
        CountRecord rec;
        rec.setting = label;
        rec.outcome = herald_name(h) + ":" + bits(o);
        rec.integration_time = t_int;
        rec.raw = sampler(r * m.four_fold_scale * t_int);
        rec.blocked_ct = sampler(bct * m.four_fold_scale * t_int);
        rec.blocked_anc = sampler(banc * m.four_fold_scale * t_int);
        records.push_back(std::move(rec));
      }
    }
  }

  const TruthTable analytic = table_from_populations(sub, true);
  const TruthTable analytic_raw = table_from_populations(raw, true);

  ExperimentOutput out;
  json sampled;
  Eigen::VectorXd plug;
  try {
    plug = truth_table_estimator(records);
  } catch (const EstimatorFailure& e) {
    out.warnings.push_back(std::string("sampled table unavailable: ") + e.what());
  }
  int negative = 0;
  for (const auto& r : records) negative += subtraction_negative(r) ? 1 : 0;
  if (negative > 0) {
    out.warnings.push_back(std::to_string(negative) + " cells have negative subtracted counts");
  }
  Eigen::VectorXd std_dev = Eigen::VectorXd::Zero(17);
  if (plug.size() == 17) {
    TruthTable t;
    for (int i = 0; i < 16; ++i) t(i / 4, i % 4) = plug(1 + i);
    sampled["truth_table"] = table_json(t);
    sampled["overlap"] = plug(0);
    sampled["negative_cells"] = negative;
    if (config.statistics.mc_samples > 0) {
      const auto mc = monte_carlo(records, truth_table_estimator, config.statistics.mc_samples,
                                  config.statistics.seed);
      std_dev = mc.std;
      sampled["overlap_std"] = mc.std(0);
      sampled["monte_carlo"] = mc_json(mc);
    }
  }

  out.summary = {
      {"inputs", kComputationalInputs},
      {"outputs", kComputationalInputs},
      {"ideal_truth_table", table_json(ideal_truth_table())},
      {"analytic", {{"truth_table", table_json(analytic)},
                    {"overlap", truth_table_overlap(analytic)},
                    {"raw_truth_table", table_json(analytic_raw)},
                    {"raw_overlap", truth_table_overlap(analytic_raw)}}},
      {"sampled", sampled},
      {"mean_four_fold_rate_hz", total_raw_rate / 4.0},
  };

  CsvTable table{"truth_table",
                 {"input", "output", "analytic", "analytic_raw", "sampled", "sampled_std"},
                 {}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      table.rows.push_back({kComputationalInputs[i], kComputationalInputs[j], analytic(i, j),
                            analytic_raw(i, j),
                            plug.size() == 17 ? json(plug(1 + 4 * i + j)) : json(nullptr),
                            std_dev(1 + 4 * i + j)});
    }
  }
  CsvTable counts{"truth_table_counts",
                  {"input", "herald", "output", "raw", "blocked_ct", "blocked_anc"},
                  {}};
  for (const auto& r : records) {
    counts.rows.push_back({r.setting, r.outcome.substr(0, 2), r.outcome.substr(3), r.raw,
                           r.blocked_ct, r.blocked_anc});
  }
  out.tables = {std::move(table), std::move(counts)};
  return out;
}

namespace {

struct BranchFit {
  MleResult mle;
  Compensation comp;
};

BranchFit fit_branch(const CountTable& counts, const Eigen::Vector4cd& target) {
  BranchFit f;
  f.mle = mle_reconstruct(counts);
  f.comp = compensate_local_unitaries(f.mle.rho, target);
  return f;
}

}  // namespace

ExperimentOutput run_bell_tomo(const ExperimentConfig& config) {
  config.validate();
  const Model m = model_of(config);
  const double t_int = config.statistics.integration_time_s;
  const QubitPair input = QubitPair::from_labels("D", "H");
  const BlockedRates b = rates_for(m, input);
  const auto ideal = run_gate(input, NoiseConfig{});
  const auto settings = all_settings();
  CountSampler sampler(config.statistics.seed, kCountStream);

  ExperimentOutput out;
  json branches = json::array();
  CsvTable fid{"bell_tomo_fidelities",
               {"herald", "target", "analytic", "mle", "compensated", "std"},
               {}};
  for (std::size_t h = 0; h < kNumHeralds; ++h) {
    const Bell target = closest_bell(ideal[h].conditional_state);
    const Eigen::Vector4cd psi = bell_vector(target);
    const DensityMatrix2Q sub = b.raw[h] - b.blocked_ct[h] - b.blocked_anc[h];
    const double branch_rate = sub.trace().real();

    std::vector<CountRecord> records;
    for (std::size_t s = 0; s < kNumSettings; ++s) {
      const auto proj = projectors(settings[s]);
      for (std::size_t o = 0; o < 4; ++o) {
        auto rate = [&](const DensityMatrix2Q& mom) {
          return std::max(0.0, (proj[o] * mom).trace().real()) * m.four_fold_scale * t_int;
        };
        CountRecord rec;
        rec.setting = settings[s].label();
        rec.outcome = bits(o);
        rec.integration_time = t_int;
        rec.raw = sampler(rate(b.raw[h]));
        rec.blocked_ct = sampler(rate(b.blocked_ct[h]));
        rec.blocked_anc = sampler(rate(b.blocked_anc[h]));
        records.push_back(std::move(rec));
      }
    }

    json branch{{"herald", herald_name(h)}, {"target", to_string(target)},
                {"four_fold_rate_hz", b.raw[h].trace().real() * m.four_fold_scale}};
    double analytic_f = 0.0;
    if (branch_rate > 0.0) {
      const DensityMatrix2Q rho = sub / branch_rate;
      analytic_f = fidelity(rho, psi);
      branch["analytic_rho"] = matrix_json(rho);
    }
    branch["analytic_fidelity"] = analytic_f;

    json row_mle = nullptr, row_comp = nullptr, row_std = nullptr;
    try {
      const BranchFit fit = fit_branch(count_table_from_records(records), psi);
      branch["rho"] = matrix_json(fit.mle.rho);
      branch["fidelity"] = fidelity(fit.mle.rho, psi);
      branch["compensated_rho"] = matrix_json(fit.comp.rho);
      branch["fidelity_compensated"] = fit.comp.fidelity_after;
      branch["compensation_phases"] = {fit.comp.phi1, fit.comp.phi2};
      branch["mle_iterations"] = fit.mle.iterations;
      branch["mle_converged"] = fit.mle.converged;
      branch["mle_warnings"] = fit.mle.warnings;
      row_mle = fidelity(fit.mle.rho, psi);
      row_comp = fit.comp.fidelity_after;
      if (!fit.mle.converged) {
        out.converged = false;
        out.warnings.push_back(herald_name(h) + ": MLE did not converge");
      }
      if (config.statistics.mc_samples > 0) {
        const Estimator est = [&](const std::vector<CountRecord>& rs) {
          const BranchFit f = fit_branch(count_table_from_records(rs), psi);
          Eigen::VectorXd v(2);
          v << fidelity(f.mle.rho, psi), f.comp.fidelity_after;
          return v;
        };
        const auto mc = monte_carlo(records, est, config.statistics.mc_samples,
                                    config.statistics.seed);
        branch["fidelity_std"] = mc.std(0);
        branch["fidelity_compensated_std"] = mc.std(1);
        branch["monte_carlo"] = mc_json(mc);
        row_std = mc.std(1);
      }
    } catch (const EstimatorFailure& e) {
      out.warnings.push_back(herald_name(h) + ": " + e.what());
    }
    branches.push_back(branch);
    fid.rows.push_back({herald_name(h), to_string(target), analytic_f, row_mle, row_comp, row_std});

    CsvTable counts{"bell_tomo_counts_" + herald_name(h),
                    {"setting_q1", "setting_q2", "outcome", "raw", "blocked_ct", "blocked_anc"},
                    {}};
    for (const auto& r : records) {
      counts.rows.push_back({r.setting.substr(0, 1), r.setting.substr(1, 1), r.outcome, r.raw,
                             r.blocked_ct, r.blocked_anc});
    }
    out.tables.push_back(std::move(counts));
  }
  out.summary = {{"input", "DH"}, {"feed_forward", false}, {"branches", branches}};
  out.tables.insert(out.tables.begin(), std::move(fid));
  return out;
}

ExperimentOutput run_hom_scan(const ExperimentConfig& config) {
  config.validate();
  const Model m = model_of(config);
  const HomScan scan = hom_scan(m.ct, m.anc, m.d, 21);
  ExperimentOutput out;
  out.summary = {{"visibility_model", hom_visibility(m.d)},
                 {"visibility_raw", scan.visibility_raw},
                 {"visibility_subtracted", scan.visibility_subtracted}};
  CsvTable curve{"hom_scan",
                 {"temporal_overlap", "coincidence_raw_hz", "coincidence_subtracted_hz"},
                 {}};
  for (const auto& p : scan.points) {
    curve.rows.push_back({p.temporal_overlap, p.coincidence_raw * m.two_fold_scale,
                          p.coincidence_subtracted * m.two_fold_scale});
  }
  out.tables.push_back(std::move(curve));
  return out;
}

ExperimentOutput run_coupling(const ExperimentConfig& config) {
  config.validate();
  const auto& p = config.photonics;
  const GaussianMode guide = GaussianMode::from_diameters(p.waveguide_mfd_x_um, p.waveguide_mfd_y_um);
  const double smf = overlap_efficiency(GaussianMode::circular_diameter(p.smf_mfd_um), guide);
  const double tec = overlap_efficiency(GaussianMode::circular_diameter(p.tec_mfd_um), guide);
  ExperimentOutput out;
  out.summary = {{"eta", {{"smf", smf}, {"tec", tec}}}, {"ratio", improvement_ratio(tec, smf)}};
  return out;
}

ExperimentOutput run_coupler_design(const ExperimentConfig& config) {
  config.validate();
  const auto& p = config.photonics;
  const PbsDesign d = design_pbs(p.kappa_H, p.kappa_V, p.max_length_mm);
  ExperimentOutput out;
  out.summary = {{"L_mm", d.spec.length_mm},
                 {"leakage", d.leakage},
                 {"leakage_H", d.leakage_H},
                 {"leakage_V", d.leakage_V},
                 {"meets_threshold", d.meets_threshold}};
  if (!d.meets_threshold) {
    out.warnings.push_back("no coupler length within max_length reaches the leakage threshold");
  }
  try {
    const CouplerSpec cal = calibrate_dispersion(d.spec, p.target_extinction, p.bandwidth_nm);
    out.summary["dkappa_H"] = cal.dkappa_H;
    out.summary["dkappa_V"] = cal.dkappa_V;
    out.summary["extinction"] = extinction_over_bandwidth(cal, p.bandwidth_nm);
    CsvTable curve{"extinction_vs_bandwidth", {"bandwidth_nm", "extinction"}, {}};
    const double span = p.bandwidth_nm > 0.0 ? 4.0 * p.bandwidth_nm : 10.0;
    for (int k = 0; k <= 40; ++k) {
      const double bw = span * k / 40.0;
      curve.rows.push_back({bw, extinction_over_bandwidth(cal, bw)});
    }
    out.tables.push_back(std::move(curve));
  } catch (const std::exception& e) {
    out.summary["extinction"] = extinction_over_bandwidth(d.spec, p.bandwidth_nm);
    out.warnings.push_back(std::string("dispersion calibration skipped: ") + e.what());
  }
  return out;
}

ExperimentOutput run_tomo_fit(const ExperimentConfig& config) {
  config.validate();
  std::ifstream in(config.io.input);
  if (!in) throw std::runtime_error("cannot open count table '" + config.io.input + "'");
  const auto records = read_count_table(in, config.statistics.integration_time_s);
  const CountTable counts = count_table_from_records(records);
  const MleResult mle = mle_reconstruct(counts);
  const Bell target = closest_bell(mle.rho);
  const Eigen::Vector4cd psi = bell_vector(target);
  const Compensation comp = compensate_local_unitaries(mle.rho, psi);

  ExperimentOutput out;
  out.converged = mle.converged;
  out.warnings = mle.warnings;
  out.summary = {{"input", config.io.input},
                 {"rho", matrix_json(mle.rho)},
                 {"purity", purity(mle.rho)},
                 {"closest_bell", to_string(target)},
                 {"fidelity", fidelity(mle.rho, psi)},
                 {"fidelity_compensated", comp.fidelity_after},
                 {"compensation_phases", {comp.phi1, comp.phi2}},
                 {"mle_iterations", mle.iterations},
                 {"mle_converged", mle.converged},
                 {"log_likelihood", mle.log_likelihood}};
  if (config.statistics.mc_samples > 0) {
    const Estimator est = [&](const std::vector<CountRecord>& rs) {
      const MleResult r = mle_reconstruct(count_table_from_records(rs));
      Eigen::VectorXd v(2);
      v << fidelity(r.rho, psi), purity(r.rho);
      return v;
    };
    const auto mc = monte_carlo(records, est, config.statistics.mc_samples, config.statistics.seed);
    out.summary["fidelity_std"] = mc.std(0);
    out.summary["purity_std"] = mc.std(1);
    out.summary["monte_carlo"] = mc_json(mc);
  }
  CsvTable rho{"tomo_fit_rho", {"row", "col", "re", "im"}, {}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      rho.rows.push_back({i, j, mle.rho(i, j).real(), mle.rho(i, j).imag()});
    }
  }
  out.tables.push_back(std::move(rho));
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::truth_table: return run_truth_table(config);
    case Experiment::bell_tomo: return run_bell_tomo(config);
    case Experiment::hom_scan: return run_hom_scan(config);
    case Experiment::coupling: return run_coupling(config);
    case Experiment::coupler_design: return run_coupler_design(config);
    case Experiment::tomo_fit: return run_tomo_fit(config);
  }
  throw ContractViolation("unhandled experiment");
}

std::vector<std::filesystem::path> write_output(const ExperimentConfig& config,
                                                const ExperimentOutput& output) {
  namespace fs = std::filesystem;
  const fs::path dir(config.io.output_dir);
  fs::create_directories(dir);
  std::vector<fs::path> written;
  const json echo = config.to_json();

  json doc{{"version", kVersion},
           {"experiment", to_string(config.experiment)},
           {"config", echo},
           {"converged", output.converged},
           {"warnings", output.warnings},
           {"results", output.summary}};
  if (config.io.format == "json") {
    json tables = json::object();
    for (const auto& t : output.tables) tables[t.name] = t.to_json();
    doc["tables"] = tables;
  }
  const fs::path main = dir / (to_string(config.experiment) + ".json");
  {
    std::ofstream f(main);
    if (!f) throw std::runtime_error("cannot write " + main.string());
    f << doc.dump(2) << '\n';
  }
  written.push_back(main);

  if (config.io.format == "csv") {
    for (const auto& t : output.tables) {
      const fs::path path = dir / (t.name + ".csv");
      std::ofstream f(path);
      if (!f) throw std::runtime_error("cannot write " + path.string());
      f << "# hcnot " << kVersion << '\n' << "# config " << echo.dump() << '\n' << t.to_csv();
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace hcnot
