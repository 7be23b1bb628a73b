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

#include "hcnot/fock.hpp"

namespace hcnot {

/// Aligned elliptical Gaussian; radii in micrometres (half the mode-field
/// diameter).
struct GaussianMode {
  double wx = 1.0;
  double wy = 1.0;

  static GaussianMode from_diameters(double mfd_x, double mfd_y);
  static GaussianMode circular_diameter(double mfd);
  void validate() const;
};

/// Power overlap of two field profiles along one axis.
double overlap_efficiency_1d(double w1, double w2);

/// Power coupling between two aligned Gaussian modes.
double overlap_efficiency(const GaussianMode& m1, const GaussianMode& m2);

/// eta_new / eta_old - 1.
double improvement_ratio(double eta_new, double eta_old);

/// Identical-guide directional coupler. kappa in 1/mm, lengths in mm,
/// wavelengths in nm, dispersion in (1/mm)/nm.
struct CouplerSpec {
  double kappa_H = 1.0;
  double kappa_V = 0.5;
  double length_mm = 0.0;
  double dkappa_H = 0.0;
  double dkappa_V = 0.0;
  double design_wavelength_nm = 789.0;

  void validate() const;
  double kappa(Pol p, double wavelength_nm) const;
};

/// Fraction of power crossing to the other guide: sin^2(kappa(lambda) L).
double cross_coupling(const CouplerSpec& spec, Pol p, double wavelength_nm);

/// Wrong-port power summed over polarizations at the design wavelength,
/// with H meant to stay in its guide and V meant to cross.
double pbs_leakage(const CouplerSpec& spec);

struct PbsDesign {
  CouplerSpec spec;
  double leakage = 0.0;    // sum of both polarizations
  double leakage_H = 0.0;  // H power in the crossed port
  double leakage_V = 0.0;  // V power left in the input port
  double threshold = 0.0;
  bool meets_threshold = false;
};

/// Searches L in (0, max_length] for the minimum of pbs_leakage; ties go
/// to the shorter device. A result above `threshold` is returned, flagged.
PbsDesign design_pbs(double kappa_H, double kappa_V, double max_length_mm,
                     double threshold = 1e-6);

inline constexpr double kExtinctionCap = 1e6;

/// Right-to-wrong port power ratio of a PBS averaged over a top-hat
/// spectrum of full width `bandwidth_nm` centred on the design wavelength.
/// Capped at kExtinctionCap.
double extinction_over_bandwidth(const CouplerSpec& spec, double bandwidth_nm);

/// Sets dkappa_pol = d * kappa_pol and solves for the relative dispersion d
/// (1/nm) that gives `target_ratio` at `bandwidth_nm`. Returns the updated spec.
CouplerSpec calibrate_dispersion(const CouplerSpec& spec, double target_ratio = 50.0,
                                 double bandwidth_nm = 3.0);

}  // namespace hcnot
