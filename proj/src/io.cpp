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

#include "rydanneal/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rydanneal {

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

template <typename T>
T get(const Json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw InvalidArgument(what + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(what + ": bad value for '" + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback, const std::string& what) {
  return j.contains(key) ? get<T>(j, key, what) : fallback;
}

Eigen::VectorXd vector_from(const Json& j, const char* key, const std::string& what) {
  const auto v = get<std::vector<double>>(j, key, what);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

template <typename Model>
Json model_json(const Model& m, const char* convention, const Metadata& metadata) {
  Json j;
  j["n"] = m.size();
  j["linear"] = vector_json(m.linear());
  Json quad = Json::array();
  for (const auto& [a, b, c] : m.interactions()) quad.push_back(Json::array({a, b, c}));
  j["quadratic"] = quad;
  j["constant"] = m.constant();
  j["convention"] = convention;
  if (!metadata.empty()) {
    Json meta = Json::object();
    for (const auto& [k, v] : metadata) meta[k] = v;
    j["metadata"] = meta;
  }
  return j;
}

template <typename Model>
Model fill_model(const Json& j) {
  const std::string what = "model";
  const Index n = get<Index>(j, "n", what);
  if (n < 0) throw InvalidArgument("model: n must be nonnegative");
  Model m(n);
  const Eigen::VectorXd lin = j.contains("linear") ? vector_from(j, "linear", what)
                                                   : Eigen::VectorXd::Zero(n);
  if (lin.size() != n) throw InvalidArgument("model: linear has the wrong length");
  for (Index i = 0; i < n; ++i) m.add_linear(i, lin(i));
  if (j.contains("quadratic")) {
    if (!j["quadratic"].is_array()) throw InvalidArgument("model: quadratic must be an array");
    for (const auto& t : j["quadratic"]) {
      if (!t.is_array() || t.size() != 3)
        throw InvalidArgument("model: quadratic entries must be [i, j, coeff]");
      const auto a = t[0].get<Index>(), b = t[1].get<Index>();
      if (a == b) throw InvalidArgument("model: quadratic entry with i == j");
      m.add_quadratic(a, b, t[2].get<double>());
    }
  }
  m.add_constant(get_or<double>(j, "constant", 0.0, what));
  return m;
}

}  // namespace

Json to_json(const QuboModel& m, const Metadata& metadata) {
  return model_json(m, "qubo", metadata);
}

Json to_json(const IsingModel& m, const Metadata& metadata) {
  return model_json(m, "ising", metadata);
}

QuboModel model_from_json(const Json& j, Metadata* metadata) {
  if (!j.is_object()) throw InvalidArgument("model: expected a JSON object");
  const std::string convention = get_or<std::string>(j, "convention", "qubo", "model");
  QuboModel q;
  try {
    if (convention == "qubo")
      q = fill_model<QuboModel>(j);
    else if (convention == "ising")
      q = ising_to_qubo(fill_model<IsingModel>(j));
    else
      throw InvalidArgument("model: unknown convention '" + convention + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("model: ") + e.what());
  }
  if (metadata && j.contains("metadata") && j["metadata"].is_object())
    for (const auto& [k, v] : j["metadata"].items())
      (*metadata)[k] = v.is_string() ? v.get<std::string>() : v.dump();
  return q;
}

Json to_json(const Schedule& s) {
  Json j;
  j["T_us"] = s.duration;
  j["basis"] = to_string(s.basis);
  j["delta"] = {{"initial", s.delta_initial}, {"coefficients", vector_json(s.delta_coefficients)}};
  Json omega = {{"coefficients", vector_json(s.omega_coefficients)},
                {"nonnegative", s.omega_nonnegative}};
  if (std::isfinite(s.omega_max)) omega["max"] = s.omega_max;
  j["omega"] = omega;
  j["sample_count"] = s.sample_count;
  return j;
}

Schedule schedule_from_json(const Json& j) {
  const std::string what = "schedule";
  if (!j.is_object()) throw InvalidArgument("schedule: expected a JSON object");
  Schedule s;
  s.duration = get_or<double>(j, "T_us", s.duration, what);
  s.basis = pulse_basis_from_string(get_or<std::string>(j, "basis", "fourier", what));
  if (j.contains("delta")) {
    const Json& d = j["delta"];
    s.delta_initial = get_or<double>(d, "initial", s.delta_initial, what);
    if (d.contains("coefficients")) s.delta_coefficients = vector_from(d, "coefficients", what);
  }
  if (j.contains("omega")) {
    const Json& o = j["omega"];
    if (o.contains("coefficients")) s.omega_coefficients = vector_from(o, "coefficients", what);
    s.omega_max = get_or<double>(o, "max", s.omega_max, what);
    s.omega_nonnegative = get_or<bool>(o, "nonnegative", false, what);
  }
  s.sample_count = get_or<int>(j, "sample_count", s.sample_count, what);
  s.validate();
  return s;
}

Json to_json(const AtomLayout& l) {
  Json pos = Json::array();
  for (Index i = 0; i < l.size(); ++i) {
    Json row = Json::array();
    for (int d = 0; d < l.dim(); ++d) row.push_back(l.positions(i, d));
    pos.push_back(row);
  }
  return Json{{"dim", l.dim()}, {"positions_um", pos}, {"C6", l.c6}};
}

AtomLayout layout_from_json(const Json& j) {
  const std::string what = "layout";
  const int dim = get<int>(j, "dim", what);
  if (dim != 2 && dim != 3) throw InvalidArgument("layout: dim must be 2 or 3");
  const auto rows = get<std::vector<std::vector<double>>>(j, "positions_um", what);
  AtomLayout l;
  l.c6 = get_or<double>(j, "C6", l.c6, what);
  l.positions.resize(static_cast<Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != static_cast<std::size_t>(dim))
      throw InvalidArgument("layout: position " + std::to_string(i) + " has the wrong dimension");
    for (int d = 0; d < dim; ++d) l.positions(static_cast<Index>(i), d) = rows[i][d];
  }
  return l;
}

Json to_json(const HardwareLimits& l) {
  return Json{{"delta_max", l.delta_max}, {"omega_max", l.omega_max}, {"r_min", l.r_min},
              {"r_far", l.r_far},         {"t_max", l.t_max},         {"C6", l.c6},
              {"lifetime", l.lifetime}};
}

HardwareLimits limits_from_json(const Json& j) {
  const std::string what = "limits";
  HardwareLimits l;
  l.delta_max = get_or<double>(j, "delta_max", l.delta_max, what);
  l.omega_max = get_or<double>(j, "omega_max", l.omega_max, what);
  l.r_min = get_or<double>(j, "r_min", l.r_min, what);
  l.r_far = get_or<double>(j, "r_far", l.r_far, what);
  l.t_max = get_or<double>(j, "t_max", l.t_max, what);
  l.c6 = get_or<double>(j, "C6", l.c6, what);
  l.lifetime = get_or<double>(j, "lifetime", l.lifetime, what);
  l.validate();
  return l;
}

Json to_json(const EncodedTarget& t) {
  Json v = Json::array();
  for (Index i = 0; i < t.size(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < t.size(); ++k) row.push_back(t.interactions(i, k));
    v.push_back(row);
  }
  return Json{{"n", t.size()},         {"V", v},           {"delta", vector_json(t.detunings)},
              {"offset", t.offset},    {"scale", t.scale}, {"gauge", t.gauge}};
}

EncodedTarget encoded_from_json(const Json& j) {
  const std::string what = "encoding";
  EncodedTarget t;
  t.detunings = vector_from(j, "delta", what);
  const Index n = t.detunings.size();
  const auto rows = get<std::vector<std::vector<double>>>(j, "V", what);
  if (static_cast<Index>(rows.size()) != n) throw InvalidArgument("encoding: V has the wrong size");
  t.interactions.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    if (static_cast<Index>(rows[i].size()) != n)
      throw InvalidArgument("encoding: V must be square");
    for (Index k = 0; k < n; ++k) t.interactions(i, k) = rows[i][k];
  }
  if (!t.interactions.isApprox(t.interactions.transpose(), 0.0) ||
      t.interactions.diagonal().cwiseAbs().maxCoeff() != 0.0)
    throw InvalidArgument("encoding: V must be symmetric with zero diagonal");
  t.offset = get_or<double>(j, "offset", 0.0, what);
  t.scale = get_or<double>(j, "scale", 1.0, what);
  t.gauge = get_or<Bitstring>(j, "gauge", 0, what);
  return t;
}

Json to_json(const StagePlan& p) {
  Json stages = Json::array();
  for (const auto& s : p.stages)
    stages.push_back({{"kind", to_string(s.kind)}, {"max_evals", s.max_evals}, {"tolerance", s.tolerance}});
  return Json{{"stages", stages}};
}

StagePlan plan_from_json(const Json& j) {
  const std::string what = "plan";
  if (!j.contains("stages") || !j["stages"].is_array())
    throw InvalidArgument("plan: expected a 'stages' array");
  StagePlan p;
  for (const auto& s : j["stages"]) {
    Stage st;
    st.kind = stage_kind_from_string(get<std::string>(s, "kind", what));
    st.max_evals = get_or<int>(s, "max_evals", st.max_evals, what);
    st.tolerance = get_or<double>(s, "tolerance", st.tolerance, what);
    p.stages.push_back(st);
  }
  p.validate();
  return p;
}

Json to_json(const HardnessReport& r) {
  Json j{{"name", r.name},
         {"convention", to_string(r.convention)},
         {"energy_shift", r.energy_shift},
         {"epsilon", r.epsilon}};
  if (r.failed) {
    j["failed"] = true;
    j["error"] = r.error;
    return j;
  }
  j["E0"] = r.e0;
  j["E_max"] = r.e_max;
  j["G"] = r.gap;
  j["D_opt"] = r.d_opt;
  j["D_E1"] = r.d_e1;
  j["threats"] = r.threat_count;
  j["Sigma"] = r.sigma;
  j["HP"] = r.hp;
  j["width_normalized"] = r.width_normalized;
  j["constant_spectrum"] = r.constant_spectrum;
  j["note"] = r.note;
  Json subs = Json::array();
  for (const auto& s : r.subspaces) subs.push_back({{"mean", s.mean}, {"degeneracy", s.degeneracy}});
  j["subspaces"] = subs;
  return j;
}

HardnessReport hardness_from_json(const Json& j) {
  const std::string what = "hardness";
  HardnessReport r;
  r.name = get<std::string>(j, "name", what);
  r.convention = energy_convention_from_string(get_or<std::string>(j, "convention", "spin", what));
  r.energy_shift = get_or<double>(j, "energy_shift", 0.0, what);
  r.epsilon = get_or<double>(j, "epsilon", kDefaultClusterEpsilon, what);
  r.failed = get_or<bool>(j, "failed", false, what);
  if (r.failed) {
    r.error = get_or<std::string>(j, "error", "", what);
    return r;
  }
  r.e0 = get<double>(j, "E0", what);
  r.e_max = get_or<double>(j, "E_max", r.e0, what);
  r.gap = get<double>(j, "G", what);
  r.d_opt = get<Index>(j, "D_opt", what);
  r.d_e1 = get_or<Index>(j, "D_E1", 0, what);
  r.threat_count = get_or<Index>(j, "threats", 0, what);
  r.sigma = get<double>(j, "Sigma", what);
  r.hp = get<double>(j, "HP", what);
  r.width_normalized = get_or<bool>(j, "width_normalized", false, what);
  r.constant_spectrum = get_or<bool>(j, "constant_spectrum", false, what);
  r.note = get_or<std::string>(j, "note", "", what);
  if (j.contains("subspaces"))
    for (const auto& s : j["subspaces"]) {
      Subspace sub;
      sub.mean = get<double>(s, "mean", what);
      sub.degeneracy = get<Index>(s, "degeneracy", what);
      r.subspaces.push_back(sub);
    }
  return r;
}

std::string trajectory_csv(const Trajectory& traj, const EncodedTarget& t, const std::string& hash) {
  std::ostringstream os;
  if (!hash.empty()) os << "# manifest " << hash << '\n';
  os << "t_us,omega,delta_G";
  for (Index j = 0; j < t.size(); ++j) os << ",delta_" << (j + 1);
  os << ",E,F\n";
  for (const auto& s : traj.samples) {
    os << format_number(s.t) << ',' << format_number(s.omega) << ',' << format_number(s.delta_global);
    for (Index j = 0; j < t.size(); ++j) os << ',' << format_number(s.delta_global * t.detunings(j));
    os << ',' << format_number(s.energy) << ',' << format_number(s.fidelity) << '\n';
  }
  return os.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed while writing '" + path + "'");
}

}  // namespace rydanneal
