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

#include "rydanneal/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rydanneal/hardness.hpp"
#include "rydanneal/io.hpp"
#include "rydanneal/manifest.hpp"
#include "rydanneal/problems.hpp"

namespace rydanneal {
namespace {

class CliExit : public Error {
 public:
  CliExit(int code, const std::string& what) : Error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

[[noreturn]] void usage_error(const std::string& what) { throw CliExit(kExitUsage, what); }

struct Globals {
  std::uint64_t seed = 1;
  std::string config_path;
  std::string out_dir = ".";
  std::string mode = "ideal";
};

struct Context {
  Globals g;
  Json config = Json::object();
  std::ostream& out;
  std::ostream& err;

  void load_config() {
    if (g.config_path.empty()) return;
    config = read_json_file(g.config_path);
    if (!config.is_object()) usage_error("config file must hold a JSON object");
  }

  HardwareLimits limits() const {
    return config.contains("limits") ? limits_from_json(config["limits"]) : HardwareLimits{};
  }

  Schedule schedule() const {
    Schedule s = config.contains("schedule") ? schedule_from_json(config["schedule"]) : Schedule{};
    return s;
  }

  StagePlan plan() const {
    return config.contains("plan") ? plan_from_json(config["plan"]) : StagePlan::default_plan();
  }

  PropagationConfig propagation() const {
    PropagationConfig c;
    if (config.contains("propagation")) {
      const Json& p = config["propagation"];
      c.tolerance = p.value("tolerance", c.tolerance);
      c.initial_steps = p.value("initial_steps", c.initial_steps);
      c.max_doublings = p.value("max_doublings", c.max_doublings);
    }
    return c;
  }

  double threshold(double fallback) const { return config.value("threshold", fallback); }

  std::string path(const std::string& name) const {
    std::filesystem::create_directories(g.out_dir);
    return (std::filesystem::path(g.out_dir) / name).string();
  }

  RunManifest manifest(const std::string& command, const std::string& instance,
                       Json cfg = Json::object()) const {
    RunManifest m;
    m.command = command;
    m.instance = instance;
    m.mode = g.mode;
    m.seed = g.seed;
    if (!config.empty()) cfg["config_file"] = config;
    m.config = std::move(cfg);
    m.created = utc_timestamp();
    return m;
  }
};

Json parse_inline_json(const std::string& text, const std::string& flag) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    usage_error(flag + " is not valid JSON: " + e.what());
  }
}

/// Inline JSON, or a path to a JSON file.
Json json_argument(const std::string& text, const std::string& flag) {
  if (std::filesystem::exists(text)) return read_json_file(text);
  return parse_inline_json(text, flag);
}

struct Resolved {
  std::string ref;
  std::string name;
  bool paper = false;
  QuboModel model;
  Metadata metadata;
};

Resolved resolve_instance(const std::string& ref) {
  if (ref.empty()) usage_error("an instance is required (--instance <built-in name | model.json>)");
  Resolved r;
  r.ref = ref;
  const auto& names = paper_instance_names();
  if (std::find(names.begin(), names.end(), ref) != names.end()) {
    PaperInstance p = paper_instance(ref);
    r.name = ref;
    r.paper = true;
    r.model = p.model;
    r.metadata = p.metadata;
    return r;
  }
  if (!std::filesystem::exists(ref))
    usage_error("unknown instance '" + ref + "': not a built-in instance name and no such file");
  r.model = model_from_json(read_json_file(ref), &r.metadata);
  r.name = std::filesystem::path(ref).stem().string();
  return r;
}

struct Target {
  EncodedTarget encoded;
  RescaleReport rescale;
  std::optional<EmbedResult> embedding;
};

Target make_target(const Context& ctx, const QuboModel& model, int layout_dim) {
  Target t;
  EncodeOptions opts;
  opts.allow_attractive = ctx.g.mode == "ideal";
  try {
    t.encoded = rescale(encode(qubo_to_ising(model), opts), ctx.limits(), &t.rescale);
    if (ctx.g.mode == "physical") {
      t.embedding = embed_layout(t.encoded, layout_dim, ctx.g.seed,
                                 EmbedOptions{16, 400, ctx.limits().r_far, ctx.limits().c6});
      t.encoded = with_layout_interactions(t.encoded, t.embedding->layout);
    }
  } catch (const NotEncodable& e) {
    throw CliExit(kExitEncoding, std::string("encoding failed: ") + e.what());
  } catch (const LimitsUnsatisfiable& e) {
    throw CliExit(kExitEncoding, std::string("encoding failed: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw CliExit(kExitEncoding, std::string("encoding failed: ") + e.what());
  }
  return t;
}

Json target_json(const Target& t) {
  Json j = to_json(t.encoded);
  j["lambda"] = t.rescale.lambda;
  j["binding"] = t.rescale.binding;
  if (t.embedding) {
    j["layout"] = to_json(t.embedding->layout);
    j["layout_residual"] = t.embedding->residual;
    j["layout_leakage"] = t.embedding->leakage;
  }
  return j;
}

/// Cost-convention quality of a final state against the brute-force extremes.
struct CostMetrics {
  double c_opt = 0.0, c_max = 0.0, c_obt = 0.0, ratio = 0.0;
};

CostMetrics cost_metrics(const QuboModel& model, const EncodedTarget& t, const QuantumState& psi) {
  const SpectrumTable spec = enumerate_spectrum(model);
  CostMetrics m;
  m.c_opt = spec.e_min();
  m.c_max = spec.e_max();
  const double norm2 = psi.squaredNorm();
  for (Index b = 0; b < psi.size(); ++b)
    m.c_obt += std::norm(psi(b)) / norm2 * model.energy(to_bitstring(t, static_cast<Bitstring>(b)));
  m.ratio = approximation_ratio(m.c_max, m.c_opt, m.c_obt);
  return m;
}

Json trajectory_json(const Trajectory& traj) {
  Json a = Json::array();
  for (const auto& s : traj.samples)
    a.push_back({{"t_us", s.t}, {"omega", s.omega}, {"delta_G", s.delta_global}, {"E", s.energy},
                 {"F", s.fidelity}, {"norm", s.norm}});
  return a;
}

Json state_json(const QuantumState& psi) {
  Json a = Json::array();
  for (Index b = 0; b < psi.size(); ++b) a.push_back(Json::array({psi(b).real(), psi(b).imag()}));
  return a;
}

Json ground_json(const EncodedTarget& t, const std::vector<Bitstring>& ground) {
  Json a = Json::array();
  for (Bitstring g : ground) a.push_back(bitstring_label(to_bitstring(t, g), t.size()));
  return a;
}

template <typename Fn>
auto with_propagation_errors(Fn&& fn) {
  try {
    return fn();
  } catch (const DegenerateInitialState& e) {
    throw CliExit(kExitPropagation, std::string("propagation failed: ") + e.what());
  } catch (const PropagationError& e) {
    throw CliExit(kExitPropagation, std::string("propagation failed: ") + e.what());
  } catch (const ObjectiveError& e) {
    throw CliExit(kExitPropagation, std::string("propagation failed: ") + e.what());
  }
}

std::string instance_note(const std::string& name) {
  if (name == "qap" || name == "clustering" || name == "protein")
    return "reference D_opt not comparable: depends on unstated penalties or normalization";
  return "";
}

void append_note(HardnessReport& r, const std::string& note) {
  if (note.empty()) return;
  r.note = r.note.empty() ? note : r.note + "; " + note;
}

HardnessReport hardness_row(const Resolved& r, EnergyConvention conv, double shift, double eps) {
  HardnessReport row = hardness_report(r.name, r.model, conv, shift, eps);
  if (r.paper) append_note(row, instance_note(r.name));
  return row;
}

// ---------------------------------------------------------------- commands

struct ProblemArgs {
  std::string paper, family, clauses, constraints, weights, conflicts, flow, distance, matrix,
      sequence, exclusions, out;
  Index n = -1;
  double penalty = -1, penalty_facility = -1, penalty_location = -1, p1 = 0.5, p2 = 2.0;
};

template <typename T>
T json_as(const Json& j, const std::string& flag) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    usage_error(flag + " has the wrong shape: " + e.what());
  }
}

Eigen::MatrixXd matrix_arg(const std::string& text, const std::string& flag) {
  const auto rows = json_as<std::vector<std::vector<double>>>(json_argument(text, flag), flag);
  Eigen::MatrixXd m(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Index>(rows[i].size()) != m.cols()) usage_error(flag + " rows differ in length");
    for (std::size_t k = 0; k < rows[i].size(); ++k) m(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
  }
  return m;
}

TwoSatInstance two_sat_from_args(const ProblemArgs& a) {
  if (a.clauses.empty()) usage_error("--clauses is required for two_sat");
  // Clauses as signed 1-based literals: [[1, 2], [-1, 3]] is (x1 ∨ x2) ∧ (¬x1 ∨ x3).
  const auto cl = json_as<std::vector<std::vector<long>>>(json_argument(a.clauses, "--clauses"), "--clauses");
  TwoSatInstance t;
  Index n = 0;
  for (const auto& c : cl) {
    if (c.size() != 2) usage_error("each clause needs exactly two literals");
    for (long lit : c)
      if (lit == 0) usage_error("literal 0 is not allowed (literals are signed 1-based indices)");
    auto lit = [](long v) { return Literal{static_cast<Index>(std::labs(v) - 1), v < 0}; };
    t.clauses.emplace_back(lit(c[0]), lit(c[1]));
    n = std::max<Index>(n, std::max(std::labs(c[0]), std::labs(c[1])));
  }
  t.n = a.n >= 0 ? a.n : n;
  if (a.penalty > 0) t.penalty = a.penalty;
  return t;
}

XorSatInstance xor_sat_from_args(const ProblemArgs& a, Index n_hint) {
  if (a.constraints.empty()) usage_error("--constraints is required for xor_sat");
  // [[i, j, parity(, weight)]] with 0-based indices.
  const auto cs = json_as<std::vector<std::vector<double>>>(json_argument(a.constraints, "--constraints"),
                                                            "--constraints");
  XorSatInstance x;
  Index n = n_hint;
  for (const auto& c : cs) {
    if (c.size() != 3 && c.size() != 4) usage_error("constraints are [i, j, parity] or [i, j, parity, weight]");
    XorConstraint k{static_cast<Index>(c[0]), static_cast<Index>(c[1]), static_cast<int>(c[2]),
                    c.size() == 4 ? c[3] : 1.0};
    x.constraints.push_back(k);
    n = std::max(n, std::max(k.i, k.j) + 1);
  }
  x.n = a.n >= 0 ? a.n : n;
  return x;
}

ProblemInstance instance_from_args(const ProblemArgs& a) {
  const std::string& f = a.family;
  if (f == "two_sat") return two_sat_from_args(a);
  if (f == "xor_sat") return xor_sat_from_args(a, 0);
  if (f == "mixed") {
    TwoSatInstance t = two_sat_from_args(a);
    XorSatInstance x = xor_sat_from_args(a, t.n);
    t.n = std::max(t.n, x.n);
    x.n = t.n;
    return MixedInstance{t, x};
  }
  if (f == "set_packing") {
    if (a.weights.empty()) usage_error("--weights is required for set_packing");
    const auto w = json_as<std::vector<double>>(json_argument(a.weights, "--weights"), "--weights");
    SetPackingInstance s;
    s.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Index>(w.size()));
    if (!a.conflicts.empty())
      for (const auto& c : json_as<std::vector<std::pair<Index, Index>>>(
               json_argument(a.conflicts, "--conflicts"), "--conflicts"))
        s.conflicts.push_back(c);
    if (a.penalty > 0) s.penalty = a.penalty;
    return s;
  }
  if (f == "qap") {
    if (a.flow.empty() || a.distance.empty()) usage_error("--flow and --distance are required for qap");
    QapInstance q;
    q.flow = matrix_arg(a.flow, "--flow");
    q.distance = matrix_arg(a.distance, "--distance");
    const double fallback = q.flow.size() && q.distance.size()
                                ? 2.0 * q.flow.maxCoeff() * q.distance.maxCoeff() * static_cast<double>(q.flow.rows())
                                : 1.0;
    q.penalty_facility = a.penalty_facility > 0 ? a.penalty_facility : fallback;
    q.penalty_location = a.penalty_location > 0 ? a.penalty_location : fallback;
    return q;
  }
  if (f == "clustering") {
    if (a.matrix.empty()) usage_error("--matrix is required for clustering");
    return ClusteringInstance{matrix_arg(a.matrix, "--matrix")};
  }
  if (f == "protein") {
    if (a.sequence.empty()) usage_error("--sequence is required for protein (e.g. HHPH)");
    ProteinToyInstance p;
    for (char c : a.sequence) {
      if (c == 'H' || c == 'h')
        p.hydrophobic.push_back(1);
      else if (c == 'P' || c == 'p')
        p.hydrophobic.push_back(0);
      else
        usage_error("--sequence may only contain H and P");
    }
    p.exclusions = a.exclusions.empty()
                       ? shared_residue_exclusions(p.length())
                       : json_as<std::vector<std::pair<Index, Index>>>(
                             json_argument(a.exclusions, "--exclusions"), "--exclusions");
    p.penalty_contact = a.p1;
    p.penalty_exclusion = a.p2;
    return p;
  }
  usage_error("unknown family '" + f + "'");
}

int cmd_problem(Context& ctx, const ProblemArgs& a) {
  if (a.paper.empty() == a.family.empty()) usage_error("give exactly one of --paper or --family");
  QuboModel model;
  Metadata meta;
  std::string ref;
  if (!a.paper.empty()) {
    const auto& names = paper_instance_names();
    if (std::find(names.begin(), names.end(), a.paper) == names.end())
      usage_error("unknown built-in instance '" + a.paper + "'");
    PaperInstance p = paper_instance(a.paper);
    model = p.model;
    meta = p.metadata;
    ref = a.paper;
  } else {
    const ProblemInstance inst = instance_from_args(a);
    try {
      model = build(inst);
    } catch (const InvalidArgument& e) {
      throw CliExit(kExitEncoding, std::string("build failed: ") + e.what());
    }
    meta["family"] = family_name(inst);
    ref = a.family;
  }
  const RunManifest m = ctx.manifest("problem", ref, Json{{"family", a.family}, {"paper", a.paper}});
  meta["manifest"] = m.hash();
  Json j = to_json(model, meta);
  j["manifest"] = m.to_json();
  const std::string path = a.out.empty() ? ctx.path("model.json") : a.out;
  write_text_file(path, j.dump(2) + "\n");
  ctx.out << "wrote " << path << " (" << model.size() << " variables)\n";
  return kExitOk;
}

int cmd_encode(Context& ctx, const std::string& instance, int dim) {
  const Resolved r = resolve_instance(instance);
  const Target t = make_target(ctx, r.model, dim);
  const RunManifest m = ctx.manifest("encode", r.ref, Json{{"limits", to_json(ctx.limits())}, {"dim", dim}});
  Json j = target_json(t);
  j["limits"] = to_json(ctx.limits());
  j["manifest"] = m.to_json();
  const std::string path = ctx.path("encoding.json");
  write_text_file(path, j.dump(2) + "\n");
  ctx.out << "n = " << t.encoded.size() << ", lambda = " << format_number(t.rescale.lambda)
          << (t.rescale.binding.empty() ? "" : " (" + t.rescale.binding + ")") << "\n";
  ctx.out << "delta(T):";
  for (Index i = 0; i < t.encoded.size(); ++i) ctx.out << ' ' << format_number(t.encoded.detunings(i));
  ctx.out << "\nV:\n";
  for (Index i = 0; i < t.encoded.size(); ++i) {
    for (Index k = 0; k < t.encoded.size(); ++k)
      ctx.out << (k ? " " : "  ") << format_number(t.encoded.interactions(i, k));
    ctx.out << '\n';
  }
  if (t.encoded.has_attractive())
    ctx.out << "note: target has attractive couplings; simulate in ideal mode only\n";
  ctx.out << "wrote " << path << '\n';
  return kExitOk;
}

int cmd_layout(Context& ctx, const std::string& instance, int dim, int restarts) {
  const Resolved r = resolve_instance(instance);
  EncodedTarget enc;
  try {
    enc = rescale(encode(qubo_to_ising(r.model)), ctx.limits());
  } catch (const Error& e) {
    throw CliExit(kExitEncoding, std::string("encoding failed: ") + e.what());
  }
  EmbedOptions opts{restarts, 400, ctx.limits().r_far, ctx.limits().c6};
  EmbedResult e;
  try {
    e = embed_layout(enc, dim, ctx.g.seed, opts);
  } catch (const InvalidArgument& ex) {
    throw CliExit(kExitEncoding, std::string("layout failed: ") + ex.what());
  }
  const RunManifest m = ctx.manifest("layout", r.ref, Json{{"dim", dim}, {"restarts", restarts}});
  Json j = to_json(e.layout);
  j["residual"] = e.residual;
  j["leakage"] = e.leakage;
  j["stress"] = e.stress;
  j["manifest"] = m.to_json();
  const std::string path = ctx.path("layout.json");
  write_text_file(path, j.dump(2) + "\n");
  ctx.out << "residual " << format_number(e.residual) << ", unwanted-interaction leakage "
          << format_number(e.leakage) << " (relative to max V)\nwrote " << path << '\n';
  return kExitOk;
}

int cmd_validate(Context& ctx, const std::string& instance, const std::string& layout_path, double tol) {
  const Resolved r = resolve_instance(instance);
  if (layout_path.empty()) usage_error("--layout is required");
  const AtomLayout layout = layout_from_json(read_json_file(layout_path));
  EncodedTarget enc;
  try {
    enc = rescale(encode(qubo_to_ising(r.model)), ctx.limits());
  } catch (const Error& e) {
    throw CliExit(kExitEncoding, std::string("encoding failed: ") + e.what());
  }
  const ValidationReport rep = validate(enc, layout, tol);
  ctx.out << "pair  target  realized  error\n";
  for (const auto& p : rep.pairs)
    ctx.out << p.i << '-' << p.j << "  " << format_number(p.target) << "  " << format_number(p.realized)
            << "  " << format_number(p.relative_error) << (p.unwanted ? " (unwanted)" : "") << '\n';
  ctx.out << "max error " << format_number(rep.max_error) << ", worst unwanted "
          << format_number(rep.worst_unwanted) << ": " << (rep.passed ? "PASS" : "FAIL") << '\n';
  return rep.passed ? kExitOk : kExitEncoding;
}

int cmd_spectrum(Context& ctx, const std::string& instance, const std::string& convention, int limit) {
  const Resolved r = resolve_instance(instance);
  const EnergyConvention conv = energy_convention_from_string(convention);
  SpectrumTable spec;
  try {
    if (conv == EnergyConvention::Cost)
      spec = enumerate_spectrum(r.model);
    else
      spec = enumerate_spectrum(qubo_to_ising(r.model));
  } catch (const SpectrumTooLarge& e) {
    usage_error(e.what());
  }
  const RunManifest m = ctx.manifest("spectrum", r.ref, Json{{"convention", convention}});
  Json levels = Json::array();
  for (const auto& l : spec.levels) {
    Json states = Json::array();
    for (Bitstring b : l.states) states.push_back(bitstring_label(b, spec.n));
    levels.push_back({{"energy", l.energy}, {"degeneracy", l.degeneracy()}, {"states", states}});
  }
  Json j{{"n", spec.n}, {"convention", convention}, {"levels", levels}, {"manifest", m.to_json()}};
  const std::string path = ctx.path("spectrum.json");
  write_text_file(path, j.dump(2) + "\n");
  ctx.out << "energy  degeneracy  states\n";
  int shown = 0;
  for (const auto& l : spec.levels) {
    if (shown++ >= limit) break;
    ctx.out << format_number(l.energy) << "  " << l.degeneracy() << "  ";
    for (std::size_t k = 0; k < l.states.size() && k < 8; ++k)
      ctx.out << (k ? "," : "") << bitstring_label(l.states[k], spec.n);
    if (l.states.size() > 8) ctx.out << ",...";
    ctx.out << '\n';
  }
  ctx.out << "wrote " << path << '\n';
  return kExitOk;
}

std::vector<std::string> expand_instances(const std::vector<std::string>& refs) {
  std::vector<std::string> out;
  for (const auto& r : refs) {
    if (r == "all")
      for (const auto& n : paper_instance_names()) out.push_back(n);
    else
      out.push_back(r);
  }
  if (out.empty()) usage_error("at least one --instance is required");
  return out;
}

int cmd_hardness(Context& ctx, const std::vector<std::string>& refs, double eps, double shift,
                 const std::string& convention) {
  const EnergyConvention conv = energy_convention_from_string(convention);
  std::vector<HardnessReport> rows;
  for (const auto& ref : expand_instances(refs)) rows.push_back(hardness_row(resolve_instance(ref), conv, shift, eps));
  const RunManifest m = ctx.manifest("hardness", "", Json{{"instances", refs}, {"epsilon", eps},
                                                         {"energy_shift", shift}, {"convention", convention}});
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  write_text_file(ctx.path("hardness.json"), Json{{"rows", arr}, {"manifest", m.to_json()}}.dump(2) + "\n");
  write_text_file(ctx.path("hardness.csv"), "# manifest " + m.hash() + "\n" + report_table_csv(rows));
  ctx.out << "convention: " << convention << ", epsilon " << format_number(eps) << ", shift "
          << format_number(shift) << '\n'
          << report_table_text(rows);
  return kExitOk;
}

Schedule default_drive(const Context& ctx) {
  Schedule s = ctx.schedule();
  s.omega_max = std::min(s.omega_max, ctx.limits().omega_max);
  if (!ctx.config.contains("schedule") && s.omega_coefficients.size() > 0)
    s.omega_coefficients(0) = 0.1 * ctx.limits().omega_max;
  return s;
}

Json result_json(const RunManifest& m, const Resolved& r, const Target& t, const Schedule& s,
                 const PropagationResult& run, const CostMetrics& cm,
                 const std::vector<Bitstring>& ground) {
  Json j;
  j["manifest"] = m.to_json();
  j["instance"] = r.ref;
  j["mode"] = m.mode;
  j["encoding"] = target_json(t);
  j["schedule"] = to_json(s);
  j["metrics"] = {{"E", run.final_energy},
                  {"F", run.final_fidelity},
                  {"R", cm.ratio},
                  {"R_encoded", approximation_ratio(t.encoded, run.final_energy)},
                  {"C_opt", cm.c_opt},
                  {"C_max", cm.c_max},
                  {"C_obt", cm.c_obt},
                  {"steps", run.steps},
                  {"step_error", run.step_error}};
  j["ground_states"] = ground_json(t.encoded, ground);
  j["final_state"] = state_json(run.state);
  j["trajectory"] = trajectory_json(run.trajectory);
  return j;
}

int cmd_anneal(Context& ctx, const std::string& instance, const std::string& schedule_path, int dim) {
  const Resolved r = resolve_instance(instance);
  const Target t = make_target(ctx, r.model, dim);
  Schedule s = schedule_path.empty() ? default_drive(ctx) : schedule_from_json(read_json_file(schedule_path));
  try {
    s.validate(ctx.limits().t_max);
  } catch (const InvalidArgument& e) {
    usage_error(e.what());
  }
  const std::vector<Bitstring> ground = ground_states(t.encoded);
  const PropagationResult run =
      with_propagation_errors([&] { return propagate(t.encoded, s, ctx.propagation(), ground); });
  const CostMetrics cm = cost_metrics(r.model, t.encoded, run.state);
  const RunManifest m = ctx.manifest("anneal", r.ref, Json{{"schedule", to_json(s)}, {"dim", dim}});
  write_text_file(ctx.path("anneal.json"), result_json(m, r, t, s, run, cm, ground).dump(2) + "\n");
  write_text_file(ctx.path("trajectory.csv"), trajectory_csv(run.trajectory, t.encoded, m.hash()));
  ctx.out << "E(T) = " << format_number(run.final_energy) << ", F(T) = " << format_number(run.final_fidelity)
          << ", R = " << format_number(cm.ratio) << " (" << run.steps << " steps)\n";
  if (s.duration > ctx.limits().lifetime)
    ctx.out << "warning: T exceeds the Rydberg lifetime " << format_number(ctx.limits().lifetime) << " us\n";
  return kExitOk;
}

struct OptimizeOutcome {
  OptimizationResult result;
  CostMetrics metrics;
  Json json;
  RunManifest manifest;
};

OptimizeOutcome optimize(Context& ctx, const Resolved& r, const Target& t, const std::string& plan_path,
                         const std::string& command, int dim) {
  StagePlan plan = plan_path.empty() ? ctx.plan() : plan_from_json(read_json_file(plan_path));
  HybridConfig cfg;
  cfg.schedule = ctx.schedule();
  cfg.omega_max = ctx.limits().omega_max;
  cfg.propagation = ctx.propagation();
  try {
    cfg.schedule.validate(ctx.limits().t_max);
  } catch (const InvalidArgument& e) {
    usage_error(e.what());
  }
  OptimizeOutcome o;
  o.result = with_propagation_errors([&] { return run_hybrid(t.encoded, plan, ctx.g.seed, cfg); });
  o.metrics = cost_metrics(r.model, t.encoded, o.result.final_run.state);
  o.manifest = ctx.manifest(command, r.ref,
                            Json{{"plan", to_json(plan)}, {"schedule", to_json(cfg.schedule)},
                                 {"limits", to_json(ctx.limits())}, {"dim", dim}});
  const std::vector<Bitstring> ground = ground_states(t.encoded);
  o.json = result_json(o.manifest, r, t, o.result.schedule, o.result.final_run, o.metrics, ground);
  o.json["optimizer"] = {{"seed", o.result.seed},
                         {"evaluations", o.result.evaluations},
                         {"budget_exhausted", o.result.budget_exhausted},
                         {"objective_steps", o.result.objective_steps},
                         {"plan", to_json(plan)}};
  Json hist = Json::array();
  for (const auto& h : o.result.history)
    hist.push_back({{"stage", h.stage}, {"evaluation", h.evaluation}, {"E", h.energy}, {"best", h.best}});
  o.json["history"] = hist;
  return o;
}

void print_outcome(const Context& ctx, const OptimizeOutcome& o) {
  ctx.out << "E(T) = " << format_number(o.result.energy) << ", F = " << format_number(o.result.fidelity)
          << ", R = " << format_number(o.metrics.ratio) << " after " << o.result.evaluations << " evaluations"
          << (o.result.budget_exhausted ? " (budget exhausted)" : "") << '\n';
}

int cmd_optimize(Context& ctx, const std::string& instance, const std::string& plan_path,
                 const std::string& out, int dim) {
  const Resolved r = resolve_instance(instance);
  const Target t = make_target(ctx, r.model, dim);
  const OptimizeOutcome o = optimize(ctx, r, t, plan_path, "optimize", dim);
  const std::string path = out.empty() ? ctx.path("result.json") : out;
  write_text_file(path, o.json.dump(2) + "\n");
  write_text_file(ctx.path("trajectory.csv"), trajectory_csv(o.result.final_run.trajectory, t.encoded, o.manifest.hash()));
  print_outcome(ctx, o);
  ctx.out << "wrote " << path << '\n';
  return kExitOk;
}

int cmd_pipeline(Context& ctx, const std::string& instance, const std::string& plan_path, double threshold,
                 int dim, double eps) {
  const Resolved r = resolve_instance(instance);
  const Target t = make_target(ctx, r.model, dim);
  if (t.embedding)
    ctx.out << "layout residual " << format_number(t.embedding->residual) << ", leakage "
            << format_number(t.embedding->leakage) << '\n';
  OptimizeOutcome o = optimize(ctx, r, t, plan_path, "pipeline", dim);
  const HardnessReport h = hardness_row(r, EnergyConvention::Spin, 0.0, eps);
  o.json["hardness"] = to_json(h);
  o.json["threshold"] = threshold;
  o.json["passed"] = o.metrics.ratio >= threshold;
  write_text_file(ctx.path("result.json"), o.json.dump(2) + "\n");
  write_text_file(ctx.path("trajectory.csv"), trajectory_csv(o.result.final_run.trajectory, t.encoded, o.manifest.hash()));
  write_text_file(ctx.path("hardness.csv"), "# manifest " + o.manifest.hash() + "\n" + report_table_csv({h}));
  print_outcome(ctx, o);
  ctx.out << report_table_text({h});
  if (o.metrics.ratio < threshold) {
    ctx.out << "R = " << format_number(o.metrics.ratio) << " is below the threshold " << format_number(threshold) << '\n';
    return kExitQuality;
  }
  return kExitOk;
}

std::vector<HardnessReport> spectral_rows(const Json& j) {
  const Json& rows = j.is_object() && j.contains("rows") ? j["rows"] : j;
  if (!rows.is_array() || rows.empty()) usage_error("--from-spectral needs a nonempty array of rows");
  std::vector<HardnessReport> out;
  for (const auto& row : rows) {
    try {
      const auto threats = row.at("threats").get<std::vector<std::pair<double, Index>>>();
      out.push_back(hardness_from_spectral(
          row.at("name").get<std::string>(), row.at("E0").get<double>(), row.at("G").get<double>(),
          row.at("D_opt").get<Index>(), threats,
          row.value("width", std::numeric_limits<double>::quiet_NaN())));
    } catch (const nlohmann::json::exception& e) {
      usage_error(std::string("malformed spectral row: ") + e.what());
    }
  }
  return out;
}

int cmd_report(Context& ctx, const std::vector<std::string>& files, bool all, const std::string& spectral,
               double eps) {
  std::vector<HardnessReport> rows;
  if (!spectral.empty())
    for (auto& r : spectral_rows(json_argument(spectral, "--from-spectral"))) rows.push_back(std::move(r));
  if (all)
    for (const auto& n : paper_instance_names())
      rows.push_back(hardness_row(resolve_instance(n), EnergyConvention::Spin, 0.0, eps));
  for (const auto& f : files) {
    const Json j = read_json_file(f);
    try {
      if (j.contains("hardness")) {
        HardnessReport h = hardness_from_json(j["hardness"]);
        if (j.contains("metrics")) {
          append_note(h, "R=" + format_number(j["metrics"]["R"].get<double>()) +
                             " F=" + format_number(j["metrics"]["F"].get<double>()));
        }
        rows.push_back(h);
      } else if (j.contains("rows")) {
        for (const auto& r : j["rows"]) rows.push_back(hardness_from_json(r));
      } else {
        rows.push_back(hardness_from_json(j));
      }
    } catch (const InvalidArgument& e) {
      usage_error("'" + f + "': " + e.what());
    } catch (const nlohmann::json::exception& e) {
      usage_error("'" + f + "': " + e.what());
    }
  }
  if (rows.empty()) usage_error("nothing to report: give result files, --all or --from-spectral");
  const RunManifest m = ctx.manifest("report", "", Json{{"files", files}, {"all", all}, {"spectral", spectral}});
  const std::string text = report_table_text(rows);
  write_text_file(ctx.path("report.txt"), text);
  write_text_file(ctx.path("report.csv"), "# manifest " + m.hash() + "\n" + report_table_csv(rows));
  ctx.out << text;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{Globals{}, Json::object(), out, err};
  CLI::App app{"Rydberg-atom annealing of QUBO problems: build, encode, anneal, optimize, assess hardness"};
  app.name("rydanneal");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", ctx.g.seed, "Random seed (layout restarts, optimizer start)");
  app.add_option("--config", ctx.g.config_path, "JSON file with limits, schedule, plan, propagation, threshold");
  app.add_option("--out-dir", ctx.g.out_dir, "Directory for output files");
  app.add_option("--mode", ctx.g.mode, "ideal: target V; physical: layout-derived V")
      ->check(CLI::IsMember({"ideal", "physical"}));

  std::string instance, plan_path, out_path, schedule_path, layout_path, convention = "spin",
                                                                      spectral;
  std::vector<std::string> instances, files;
  int dim = 2, restarts = 16, limit = 20;
  double eps = kDefaultClusterEpsilon, shift = 0.0, tol = 1e-3, threshold = 0.98;
  bool all = false;
  ProblemArgs pa;
  std::function<int()> action;

  auto add_instance = [&](CLI::App* c) {
    c->add_option("--instance,--paper", instance, "Built-in instance name or model JSON path");
  };

  auto* problem = app.add_subcommand("problem", "Build a QUBO model file");
  problem->add_option("--paper", pa.paper, "Built-in instance name");
  problem->add_option("--family", pa.family, "two_sat, xor_sat, mixed, set_packing, qap, clustering, protein");
  problem->add_option("--n", pa.n, "Variable count (inferred when omitted)");
  problem->add_option("--clauses", pa.clauses, "Clauses as signed 1-based literals, e.g. [[1,2],[-1,3]]");
  problem->add_option("--constraints", pa.constraints, "XOR constraints [[i,j,parity(,weight)]], 0-based");
  problem->add_option("--weights", pa.weights, "Set weights [w...]");
  problem->add_option("--conflicts", pa.conflicts, "Conflicting set pairs [[i,j]...]");
  problem->add_option("--penalty", pa.penalty, "Penalty P (SAT family, set packing)");
  problem->add_option("--flow", pa.flow, "QAP flow matrix");
  problem->add_option("--distance", pa.distance, "QAP distance matrix");
  problem->add_option("--penalty-facility", pa.penalty_facility, "QAP P1");
  problem->add_option("--penalty-location", pa.penalty_location, "QAP P2");
  problem->add_option("--matrix", pa.matrix, "Clustering dissimilarity matrix");
  problem->add_option("--sequence", pa.sequence, "Protein H/P sequence");
  problem->add_option("--p1", pa.p1, "Protein contact penalty P1");
  problem->add_option("--p2", pa.p2, "Protein exclusion penalty P2");
  problem->add_option("--exclusions", pa.exclusions, "Protein exclusive contact pairs [[p,q]...]");
  problem->add_option("--out", pa.out, "Output path (default <out-dir>/model.json)");
  problem->callback([&] { action = [&] { return cmd_problem(ctx, pa); }; });

  auto* encode_cmd = app.add_subcommand("encode", "Encode a model as detunings and interactions");
  add_instance(encode_cmd);
  encode_cmd->add_option("--dim", dim, "Layout dimension in physical mode")->check(CLI::IsMember({2, 3}));
  encode_cmd->callback([&] { action = [&] { return cmd_encode(ctx, instance, dim); }; });

  auto* layout = app.add_subcommand("layout", "Embed the interaction matrix as atom positions");
  add_instance(layout);
  layout->add_option("--dim", dim, "2 or 3")->check(CLI::IsMember({2, 3}));
  layout->add_option("--restarts", restarts, "Random restarts")->check(CLI::PositiveNumber);
  layout->callback([&] { action = [&] { return cmd_layout(ctx, instance, dim, restarts); }; });

  auto* validate_cmd = app.add_subcommand("validate", "Compare a layout's interactions with the target");
  add_instance(validate_cmd);
  validate_cmd->add_option("--layout", layout_path, "Layout JSON");
  validate_cmd->add_option("--tol", tol, "Relative tolerance");
  validate_cmd->callback([&] { action = [&] { return cmd_validate(ctx, instance, layout_path, tol); }; });

  auto* spectrum = app.add_subcommand("spectrum", "Enumerate the classical spectrum");
  add_instance(spectrum);
  spectrum->add_option("--convention", convention, "spin or cost");
  spectrum->add_option("--limit", limit, "Levels to print");
  spectrum->callback([&] { action = [&] { return cmd_spectrum(ctx, instance, convention, limit); }; });

  auto* hardness = app.add_subcommand("hardness", "Hardness parameter of one or more instances");
  hardness->add_option("--instance,--paper", instances, "Instance(s); 'all' for every built-in instance");
  hardness->add_option("--epsilon", eps, "Near-degeneracy tolerance");
  hardness->add_option("--energy-shift", shift, "Constant added to every energy");
  hardness->add_option("--convention", convention, "spin (no constant) or cost");
  hardness->callback([&] { action = [&] { return cmd_hardness(ctx, instances, eps, shift, convention); }; });

  auto* anneal = app.add_subcommand("anneal", "Propagate one schedule");
  add_instance(anneal);
  anneal->add_option("--schedule", schedule_path, "Schedule JSON");
  anneal->add_option("--dim", dim, "Layout dimension in physical mode")->check(CLI::IsMember({2, 3}));
  anneal->callback([&] { action = [&] { return cmd_anneal(ctx, instance, schedule_path, dim); }; });

  auto* optimize_cmd = app.add_subcommand("optimize", "Optimize the pulse schedule");
  add_instance(optimize_cmd);
  optimize_cmd->add_option("--plan", plan_path, "Stage plan JSON");
  optimize_cmd->add_option("--out", out_path, "Result path (default <out-dir>/result.json)");
  optimize_cmd->add_option("--dim", dim, "Layout dimension in physical mode")->check(CLI::IsMember({2, 3}));
  optimize_cmd->callback([&] { action = [&] { return cmd_optimize(ctx, instance, plan_path, out_path, dim); }; });

  auto* report = app.add_subcommand("report", "Hardness table from result files or spectral data");
  report->add_option("files", files, "Result or hardness JSON files");
  report->add_flag("--all", all, "Add rows for every built-in instance");
  report->add_option("--from-spectral", spectral,
                     "Rows of {name, E0, G, D_opt, threats: [[offset, D]]} (inline JSON or path)");
  report->add_option("--epsilon", eps, "Near-degeneracy tolerance");
  report->callback([&] { action = [&] { return cmd_report(ctx, files, all, spectral, eps); }; });

  auto* pipeline = app.add_subcommand("pipeline", "Encode, optimize and assess one instance");
  add_instance(pipeline);
  pipeline->add_option("--plan", plan_path, "Stage plan JSON");
  pipeline->add_option("--threshold", threshold, "Minimum approximation ratio for exit code 0");
  pipeline->add_option("--dim", dim, "Layout dimension in physical mode")->check(CLI::IsMember({2, 3}));
  pipeline->add_option("--epsilon", eps, "Near-degeneracy tolerance");
  pipeline->callback([&] {
    action = [&] {
      return cmd_pipeline(ctx, instance, plan_path,
                          pipeline->count("--threshold") ? threshold : ctx.threshold(threshold), dim, eps);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    ctx.load_config();
    return action();
  } catch (const CliExit& e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PropagationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitPropagation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace rydanneal
