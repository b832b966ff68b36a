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

#include "rydanneal/hardness.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace rydanneal {

LevelList level_list(const SpectrumTable& spectrum) {
  LevelList out;
  out.reserve(spectrum.levels.size());
  for (const auto& l : spectrum.levels) out.emplace_back(l.energy, l.degeneracy());
  return out;
}

std::vector<Subspace> cluster_subspaces(const LevelList& levels, double epsilon) {
  if (!(epsilon > 0)) throw InvalidArgument("epsilon must be positive");
  std::vector<Subspace> out;
  double previous = -std::numeric_limits<double>::infinity();
  for (const auto& [e, count] : levels) {
    if (e < previous) throw InvalidArgument("levels must be sorted by energy");
    if (count < 1) throw InvalidArgument("level multiplicity must be positive");
    previous = e;
    if (out.empty() || std::abs(e - out.back().mean) >= epsilon) {
      out.push_back(Subspace{e, count, {{e, count}}});
      continue;
    }
    Subspace& s = out.back();
    s.mean = (s.mean * static_cast<double>(s.degeneracy) + e * static_cast<double>(count)) /
             static_cast<double>(s.degeneracy + count);
    s.degeneracy += count;
    s.members.emplace_back(e, count);
  }
  return out;
}

std::vector<Subspace> cluster_subspaces(const SpectrumTable& spectrum, double epsilon) {
  return cluster_subspaces(level_list(spectrum), epsilon);
}

ThreatSet threatening_set(const std::vector<Subspace>& subspaces, double d_opt) {
  ThreatSet t;
  if (subspaces.size() < 2) {
    t.constant_spectrum = true;
    return t;
  }
  const double gap = subspaces[1].mean - subspaces[0].mean;
  const double d_thresh = std::max(1.0, d_opt / 2.0);
  for (std::size_t a = 1; a < subspaces.size(); ++a) {
    const double offset = subspaces[a].mean - subspaces[0].mean;
    if (offset <= gap || static_cast<double>(subspaces[a].degeneracy) >= d_thresh)
      t.members.push_back(static_cast<Index>(a));
  }
  return t;
}

double sigma(const std::vector<Subspace>& subspaces, const ThreatSet& threats, double gap) {
  if (!(gap > 0)) throw ZeroGap("spectral gap must be positive to evaluate Sigma");
  double total = 0.0;
  for (Index a : threats.members) {
    const auto& s = subspaces.at(static_cast<std::size_t>(a));
    total += static_cast<double>(s.degeneracy) * std::exp(-(s.mean - subspaces[0].mean) / gap);
  }
  return total;
}

HardnessValue hardness_parameter(double e0, double d_opt, double gap, double sigma_value,
                                 double spectral_width) {
  if (!(gap > 0)) throw ZeroGap("spectral gap must be positive to evaluate HP");
  if (!(d_opt > 0)) throw InvalidArgument("D_opt must be positive");
  HardnessValue v;
  double norm = std::abs(e0);
  if (norm < 1e-9) {
    if (!(spectral_width > 0))
      throw InvalidArgument("|E0| vanishes and no spectral width was given for normalization");
    norm = spectral_width;
    v.width_normalized = true;
  }
  v.value = sigma_value / (norm * d_opt * gap * gap);
  return v;
}

std::string to_string(EnergyConvention c) { return c == EnergyConvention::Spin ? "spin" : "cost"; }

EnergyConvention energy_convention_from_string(const std::string& s) {
  if (s == "spin" || s == "ising") return EnergyConvention::Spin;
  if (s == "cost" || s == "qubo") return EnergyConvention::Cost;
  throw InvalidArgument("unknown energy convention '" + s + "' (expected spin or cost)");
}

HardnessReport hardness_report(const std::string& name, const SpectrumTable& spectrum,
                               double epsilon) {
  if (spectrum.levels.empty()) throw InvalidArgument("empty spectrum");
  HardnessReport r;
  r.name = name;
  r.epsilon = epsilon;
  r.subspaces = cluster_subspaces(spectrum, epsilon);
  r.e0 = r.subspaces.front().mean;
  r.e_max = r.subspaces.back().mean;
  r.d_opt = r.subspaces.front().degeneracy;
  const ThreatSet threats = threatening_set(r.subspaces, static_cast<double>(r.d_opt));
  if (threats.constant_spectrum) {
    r.constant_spectrum = true;
    r.note = "constant spectrum: no gap, HP undefined";
    return r;
  }
  r.gap = r.subspaces[1].mean - r.e0;
  r.d_e1 = r.subspaces[1].degeneracy;
  r.threat_count = static_cast<Index>(threats.members.size());
  r.sigma = sigma(r.subspaces, threats, r.gap);
  const HardnessValue hp =
      hardness_parameter(r.e0, static_cast<double>(r.d_opt), r.gap, r.sigma, r.e_max - r.e0);
  r.hp = hp.value;
  r.width_normalized = hp.width_normalized;
  if (hp.width_normalized) r.note = "normalized by spectral width";
  return r;
}

HardnessReport hardness_report(const std::string& name, const QuboModel& model,
                               EnergyConvention convention, double energy_shift, double epsilon) {
  try {
    SpectrumTable spectrum;
    if (convention == EnergyConvention::Spin) {
      IsingModel m = qubo_to_ising(model);
      m.add_constant(energy_shift - m.constant());
      spectrum = enumerate_spectrum(m);
    } else {
      QuboModel q = model;
      q.add_constant(energy_shift);
      spectrum = enumerate_spectrum(q);
    }
    HardnessReport r = hardness_report(name, spectrum, epsilon);
    r.convention = convention;
    r.energy_shift = energy_shift;
    return r;
  } catch (const std::exception& e) {
    HardnessReport r;
    r.name = name;
    r.convention = convention;
    r.energy_shift = energy_shift;
    r.failed = true;
    r.error = e.what();
    return r;
  }
}

HardnessReport hardness_from_spectral(const std::string& name, double e0, double gap, Index d_opt,
                                      const std::vector<std::pair<double, Index>>& threats,
                                      double spectral_width) {
  if (!(gap > 0)) throw ZeroGap("spectral gap must be positive");
  HardnessReport r;
  r.name = name;
  r.e0 = e0;
  r.gap = gap;
  r.d_opt = d_opt;
  r.subspaces.push_back(Subspace{e0, d_opt, {{e0, d_opt}}});
  ThreatSet set;
  for (const auto& [offset, d] : threats) {
    if (!(offset > 0)) throw InvalidArgument("threat offsets must be positive");
    r.subspaces.push_back(Subspace{e0 + offset, d, {{e0 + offset, d}}});
    set.members.push_back(static_cast<Index>(r.subspaces.size() - 1));
    if (offset == gap) r.d_e1 += d;
  }
  r.threat_count = static_cast<Index>(set.members.size());
  r.sigma = sigma(r.subspaces, set, gap);
  const HardnessValue hp =
      hardness_parameter(e0, static_cast<double>(d_opt), gap, r.sigma, spectral_width);
  r.hp = hp.value;
  r.width_normalized = hp.width_normalized;
  r.note = hp.width_normalized ? "from spectral input; normalized by spectral width"
                               : "from spectral input";
  r.e_max = r.subspaces.back().mean;
  return r;
}

namespace {

std::string num(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::vector<std::string> row_cells(const HardnessReport& r) {
  if (r.failed) return {r.name, "-", "-", "-", "-", "-", "-", "-", "failed: " + r.error};
  return {r.name,
          num(r.e0),
          num(r.gap),
          std::to_string(r.d_opt),
          std::to_string(r.d_e1),
          std::to_string(r.threat_count),
          num(r.sigma),
          num(r.hp),
          r.note};
}

const std::vector<std::string> kHeader = {"name", "E0", "G", "D_opt", "D_E1",
                                          "threats", "Sigma", "HP", "note"};

}  // namespace

std::string report_table_text(const std::vector<HardnessReport>& rows) {
  std::vector<std::vector<std::string>> cells{kHeader};
  for (const auto& r : rows) cells.push_back(row_cells(r));
  std::vector<std::size_t> width(kHeader.size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream os;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::string cell = row[c];
      if (c + 1 < row.size()) cell.resize(width[c], ' ');
      line += cell;
      if (c + 1 < row.size()) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  }
  return os.str();
}

std::string report_table_csv(const std::vector<HardnessReport>& rows) {
  std::ostringstream os;
  for (std::size_t c = 0; c < kHeader.size(); ++c) os << (c ? "," : "") << kHeader[c];
  os << '\n';
  for (const auto& r : rows) {
    const auto cells = row_cells(r);
    for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? "," : "") << csv_field(cells[c]);
    os << '\n';
  }
  return os.str();
}

}  // namespace rydanneal
