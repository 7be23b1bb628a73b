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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hcnot/counting.hpp"
#include "hcnot/errors.hpp"
#include "hcnot/experiments.hpp"
#include "hcnot/photonics.hpp"
#include "hcnot/protocol.hpp"
#include "hcnot/qubits.hpp"
#include "hcnot/source.hpp"
#include "hcnot/tomography.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

hcnot::NoiseConfig noise_of(double cross_overlap, double ancilla_fidelity, double pbs_leakage) {
  hcnot::NoiseConfig n{cross_overlap, ancilla_fidelity, pbs_leakage};
  n.validate();
  return n;
}

hcnot::Bell bell_of(const std::string& name) {
  for (auto b : hcnot::kAllBell) {
    if (hcnot::to_string(b) == name) return b;
  }
  throw hcnot::ParameterError("unknown Bell state '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(hcnot, m) {
  m.doc() = "Heralded linear-optical CNOT simulator";
  m.attr("__version__") = hcnot::kVersion;

  py::register_exception<hcnot::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<hcnot::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<hcnot::EstimatorFailure>(m, "EstimatorFailure", PyExc_RuntimeError);

  // Gate.
  m.def(
      "herald_probability",
      [](const std::string& control, const std::string& target, double x, double f, double leak) {
        return hcnot::herald_probability(hcnot::QubitPair::from_labels(control, target),
                                         noise_of(x, f, leak));
      },
      "control"_a, "target"_a, "cross_overlap"_a = 1.0, "ancilla_fidelity"_a = 1.0,
      "pbs_leakage"_a = 0.0);
  m.def(
      "run_gate",
      [](const std::string& control, const std::string& target, double x, double f, double leak) {
        py::list out;
        const auto outcomes = hcnot::run_gate(hcnot::QubitPair::from_labels(control, target),
                                              noise_of(x, f, leak));
        for (std::size_t h = 0; h < outcomes.size(); ++h) {
          out.append(py::dict("herald"_a = hcnot::herald_name(h),
                              "probability"_a = outcomes[h].probability,
                              "state"_a = outcomes[h].conditional_state,
                              "corrected_state"_a = hcnot::apply_feedforward(outcomes[h])));
        }
        return out;
      },
      "control"_a, "target"_a, "cross_overlap"_a = 1.0, "ancilla_fidelity"_a = 1.0,
      "pbs_leakage"_a = 0.0,
      "Herald branches for a product input; states are 4x4 in the HH, HV, VH, VV basis.");
  m.def(
      "truth_table",
      [](double x, double f, double leak) { return hcnot::truth_table(noise_of(x, f, leak)); },
      "cross_overlap"_a = 1.0, "ancilla_fidelity"_a = 1.0, "pbs_leakage"_a = 0.0);
  m.def("ideal_truth_table", &hcnot::ideal_truth_table);
  m.def(
      "truth_table_overlap",
      [](const Eigen::Matrix4d& t) { return hcnot::truth_table_overlap(t); }, "table"_a);

  // States.
  m.def(
      "bell_vector", [](const std::string& name) { return hcnot::bell_vector(bell_of(name)); },
      "name"_a);
  m.def("fidelity", &hcnot::fidelity, "rho"_a, "target"_a);
  m.def("purity", &hcnot::purity, "rho"_a);
  m.def("trace_distance", &hcnot::trace_distance, "rho"_a, "sigma"_a);

  // Sources.
  m.def(
      "hom_visibility",
      [](double x) { return hcnot::hom_visibility(hcnot::DistinguishabilityModel{x}); },
      "cross_overlap"_a);

  // Counting.
  m.def("sample_counts", &hcnot::sample_counts, "rate"_a, "time"_a, "seed"_a);
  m.def(
      "noise_subtract",
      [](std::int64_t raw, std::int64_t bct, std::int64_t banc) {
        hcnot::CountRecord r;
        r.raw = raw;
        r.blocked_ct = bct;
        r.blocked_anc = banc;
        r.validate();
        return hcnot::noise_subtract(r);
      },
      "raw"_a, "blocked_ct"_a, "blocked_anc"_a);

  // Tomography.
  m.def(
      "expected_counts",
      [](const hcnot::DensityMatrix2Q& rho, double per_setting) {
        return hcnot::expected_counts(rho, per_setting);
      },
      "rho"_a, "per_setting"_a);
  m.def(
      "mle_reconstruct",
      [](const std::array<double, hcnot::kNumCells>& counts) {
        const auto r = hcnot::mle_reconstruct(counts);
        return py::dict("rho"_a = r.rho, "converged"_a = r.converged,
                        "iterations"_a = r.iterations, "log_likelihood"_a = r.log_likelihood,
                        "warnings"_a = r.warnings);
      },
      "counts"_a, "Counts ordered by setting (HH, HD, HL, DH, ..., LL) then outcome.");
  m.def(
      "compensate_local_unitaries",
      [](const hcnot::DensityMatrix2Q& rho, const Eigen::Vector4cd& target) {
        const auto c = hcnot::compensate_local_unitaries(rho, target);
        return py::dict("rho"_a = c.rho, "phi1"_a = c.phi1, "phi2"_a = c.phi2,
                        "fidelity_before"_a = c.fidelity_before,
                        "fidelity_after"_a = c.fidelity_after);
      },
      "rho"_a, "target"_a);

  // Photonics.
  m.def(
      "overlap_efficiency",
      [](std::pair<double, double> mfd1, std::pair<double, double> mfd2) {
        return hcnot::overlap_efficiency(
            hcnot::GaussianMode::from_diameters(mfd1.first, mfd1.second),
            hcnot::GaussianMode::from_diameters(mfd2.first, mfd2.second));
      },
      "mfd1"_a, "mfd2"_a, "Mode-field diameters (x, y) in micrometres.");
  m.def("improvement_ratio", &hcnot::improvement_ratio, "eta_new"_a, "eta_old"_a);
  m.def(
      "design_pbs",
      [](double kh, double kv, double max_length) {
        const auto d = hcnot::design_pbs(kh, kv, max_length);
        return py::dict("L_mm"_a = d.spec.length_mm, "leakage"_a = d.leakage,
                        "leakage_H"_a = d.leakage_H, "leakage_V"_a = d.leakage_V,
                        "meets_threshold"_a = d.meets_threshold);
      },
      "kappa_H"_a, "kappa_V"_a, "max_length_mm"_a);

  // Whole experiments, config and results as JSON text.
  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto config = hcnot::ExperimentConfig::from_json(nlohmann::json::parse(config_json));
        hcnot::ExperimentOutput out;
        {
          py::gil_scoped_release release;
          out = hcnot::run_experiment(config);
        }
        nlohmann::json tables = nlohmann::json::object();
        for (const auto& t : out.tables) tables[t.name] = t.to_json();
        return nlohmann::json{{"version", hcnot::kVersion},
                              {"config", config.to_json()},
                              {"converged", out.converged},
                              {"warnings", out.warnings},
                              {"results", out.summary},
                              {"tables", tables}}
            .dump();
      },
      "config_json"_a);
}
