// Copyright 2026 The rydanneal Authors
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

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rydanneal/qubo.hpp"

namespace rydanneal {

inline constexpr double kDefaultClusterEpsilon = 1e-10;

/// Energies grouped within ε of their running mean.
struct Subspace {
  double mean = 0.0;
  Index degeneracy = 0;
  /// Distinct member energies and their multiplicities.
  std::vector<std::pair<double, Index>> members;
};

/// (energy, multiplicity) pairs in increasing energy order.
using LevelList = std::vector<std::pair<double, Index>>;

LevelList level_list(const SpectrumTable& spectrum);

/// Greedy left-to-right clustering: a level opens a new subspace when it is
/// at least ε away from the mean of the current one. Means are
/// degeneracy-weighted.
std::vector<Subspace> cluster_subspaces(const LevelList& levels,
                                        double epsilon = kDefaultClusterEpsilon);
std::vector<Subspace> cluster_subspaces(const SpectrumTable& spectrum,
                                        double epsilon = kDefaultClusterEpsilon);

struct ThreatSet {
  std::vector<Index> members;  // subspace indices α > 0
  bool constant_spectrum = false;
};

/// α > 0 with Ē_α - Ē_0 ≤ G_Δ or D_α ≥ max(1, D_opt/2).
ThreatSet threatening_set(const std::vector<Subspace>& subspaces, double d_opt);

class ZeroGap : public Error {
 public:
  using Error::Error;
};

/// Σ_α D_α exp(-(Ē_α - Ē_0)/G_Δ) over the threat set.
double sigma(const std::vector<Subspace>& subspaces, const ThreatSet& threats, double gap);

struct HardnessValue {
  double value = 0.0;
  bool width_normalized = false;
};

/// Σ / (|E0| · D_opt · G²). When |E0| < 1e-9 the spectral width replaces
/// |E0| and the result is flagged.
HardnessValue hardness_parameter(double e0, double d_opt, double gap, double sigma,
                                 double spectral_width = std::numeric_limits<double>::quiet_NaN());

enum class EnergyConvention {
  Spin,  // Ising energy without its constant term
  Cost,  // full QUBO cost
};

std::string to_string(EnergyConvention c);
EnergyConvention energy_convention_from_string(const std::string& s);

struct HardnessReport {
  std::string name;
  EnergyConvention convention = EnergyConvention::Spin;
  double energy_shift = 0.0;
  double epsilon = kDefaultClusterEpsilon;
  double e0 = 0.0;
  double e_max = 0.0;
  double gap = 0.0;
  Index d_opt = 0;
  Index d_e1 = 0;
  Index threat_count = 0;
  double sigma = 0.0;
  double hp = 0.0;
  bool width_normalized = false;
  bool constant_spectrum = false;
  std::vector<Subspace> subspaces;
  /// Free-form remarks (normalization fallback, reference caveats).
  std::string note;
  bool failed = false;
  std::string error;
};

/// Full report from a spectrum that is already in the desired convention.
HardnessReport hardness_report(const std::string& name, const SpectrumTable& spectrum,
                               double epsilon = kDefaultClusterEpsilon);

/// Builds the energy function for the convention, shifts it, enumerates and
/// reports. Failures are recorded in the row instead of thrown.
HardnessReport hardness_report(const std::string& name, const QuboModel& model,
                               EnergyConvention convention = EnergyConvention::Spin,
                               double energy_shift = 0.0,
                               double epsilon = kDefaultClusterEpsilon);

/// Report from externally supplied spectral quantities: E0, G_Δ, D_opt and
/// the (gap offset, degeneracy) of each threatening subspace.
HardnessReport hardness_from_spectral(const std::string& name, double e0, double gap, Index d_opt,
                                      const std::vector<std::pair<double, Index>>& threats,
                                      double spectral_width =
                                          std::numeric_limits<double>::quiet_NaN());

/// Aligned text table with columns name, E0, G, D_opt, D_E1, threats, Sigma,
/// HP, note.
std::string report_table_text(const std::vector<HardnessReport>& rows);
/// Same columns as CSV with 12 significant digits.
std::string report_table_csv(const std::vector<HardnessReport>& rows);

}  // namespace rydanneal
