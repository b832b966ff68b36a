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

#include "rydanneal/problems.hpp"

#include <cmath>
#include <set>

namespace rydanneal {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

void check_var(Index v, Index n, const char* ctx) {
  require(v >= 0 && v < n, std::string(ctx) + ": variable index " + std::to_string(v) +
                               " out of range [0, " + std::to_string(n) + ")");
}

void check_two_sat(const TwoSatInstance& inst) {
  require(inst.n >= 0, "two-SAT: negative variable count");
  require(inst.penalty > 0, "two-SAT: penalty must be positive");
  for (const auto& [a, b] : inst.clauses) {
    check_var(a.var, inst.n, "two-SAT clause");
    check_var(b.var, inst.n, "two-SAT clause");
  }
}

void check_xor(const XorSatInstance& inst) {
  require(inst.n >= 0, "XOR-SAT: negative variable count");
  for (const auto& c : inst.constraints) {
    check_var(c.i, inst.n, "XOR-SAT constraint");
    check_var(c.j, inst.n, "XOR-SAT constraint");
    require(c.i != c.j, "XOR-SAT: constraint relates a variable to itself");
    require(c.parity == 0 || c.parity == 1, "XOR-SAT: parity must be 0 or 1");
    require(c.weight > 0, "XOR-SAT: constraint weight must be positive");
  }
}

void check_square(const Eigen::MatrixXd& m, const char* what) {
  require(m.rows() == m.cols(), std::string(what) + " must be square");
}

}  // namespace

Eigen::VectorXi SetPackingInstance::degrees() const {
  Eigen::VectorXi d = Eigen::VectorXi::Zero(size());
  for (const auto& [i, j] : conflicts) {
    ++d(i);
    ++d(j);
  }
  return d;
}

bool QapInstance::symmetric() const {
  return flow.isApprox(flow.transpose(), 0.0) && distance.isApprox(distance.transpose(), 0.0);
}

int ProteinToyInstance::contact_reward(Index i, Index j) const {
  const auto hi = hydrophobic.at(static_cast<std::size_t>(i));
  const auto hj = hydrophobic.at(static_cast<std::size_t>(j));
  return (hi == 1 && hj == 1 && std::abs(i - j) > 1) ? 1 : 0;
}

Index protein_pair_index(Index i, Index j, Index length) {
  require(0 <= i && i < j && j < length, "protein: residue pair must satisfy 0 <= i < j < L");
  // 1-based: p = (i-1)L - i(i+1)/2 + j with i, j 1-based.
  const Index i1 = i + 1, j1 = j + 1;
  return (i1 - 1) * length - i1 * (i1 + 1) / 2 + j1 - 1;
}

std::pair<Index, Index> protein_pair_of(Index p, Index length) {
  for (Index i = 0; i < length; ++i)
    for (Index j = i + 1; j < length; ++j)
      if (protein_pair_index(i, j, length) == p) return {i, j};
  throw InvalidArgument("protein: contact index " + std::to_string(p) + " out of range");
}

std::vector<std::pair<Index, Index>> shared_residue_exclusions(Index length) {
  std::vector<std::pair<Index, Index>> pairs;
  std::vector<std::pair<Index, Index>> contacts;
  for (Index i = 0; i < length; ++i)
    for (Index j = i + 1; j < length; ++j) contacts.emplace_back(i, j);
  for (std::size_t a = 0; a < contacts.size(); ++a)
    for (std::size_t b = a + 1; b < contacts.size(); ++b) {
      const auto [i, j] = contacts[a];
      const auto [k, l] = contacts[b];
      if (i == k || i == l || j == k || j == l) {
        Index p = protein_pair_index(i, j, length), q = protein_pair_index(k, l, length);
        if (p > q) std::swap(p, q);
        pairs.emplace_back(p, q);
      }
    }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

QuboModel build_two_sat(const TwoSatInstance& inst) {
  check_two_sat(inst);
  QuboModel q(inst.n);
  // A clause is violated iff both literals are false. A positive literal is
  // false with indicator (1 - x), a negated one with indicator x.
  for (const auto& [a, b] : inst.clauses) {
    const double P = inst.penalty;
    // (α + β x_a)(γ + δ x_b) with false-indicators as affine forms.
    const double alpha = a.negated ? 0.0 : 1.0, beta = a.negated ? 1.0 : -1.0;
    const double gamma = b.negated ? 0.0 : 1.0, delta = b.negated ? 1.0 : -1.0;
    q.add_constant(P * alpha * gamma);
    q.add_linear(a.var, P * beta * gamma);
    q.add_linear(b.var, P * alpha * delta);
    q.add_quadratic(a.var, b.var, P * beta * delta);
  }
  return q;
}

QuboModel build_xor_sat(const XorSatInstance& inst) {
  check_xor(inst);
  QuboModel q(inst.n);
  for (const auto& c : inst.constraints) {
    const double w = c.weight;
    if (c.parity == 1) {
      // (x_i + x_j - 1)² = 1 - x_i - x_j + 2 x_i x_j
      q.add_constant(w).add_linear(c.i, -w).add_linear(c.j, -w).add_quadratic(c.i, c.j, 2 * w);
    } else {
      // (x_i - x_j)² = x_i + x_j - 2 x_i x_j
      q.add_linear(c.i, w).add_linear(c.j, w).add_quadratic(c.i, c.j, -2 * w);
    }
  }
  return q;
}

QuboModel build_mixed(const TwoSatInstance& clauses, const XorSatInstance& parities) {
  if (clauses.n != parities.n)
    throw InvalidArgument("mixed: two-SAT part has " + std::to_string(clauses.n) +
                          " variables but XOR part has " + std::to_string(parities.n));
  return build_two_sat(clauses) + build_xor_sat(parities);
}

QuboModel build_set_packing(const SetPackingInstance& inst) {
  const Index n = inst.size();
  require(inst.penalty > 0, "set packing: penalty must be positive");
  require((inst.weights.array() > 0).all(), "set packing: weights must be positive");
  std::set<std::pair<Index, Index>> seen;
  QuboModel q(n);
  for (Index i = 0; i < n; ++i) q.add_linear(i, -inst.weights(i));
  for (auto [i, j] : inst.conflicts) {
    check_var(i, n, "set packing conflict");
    check_var(j, n, "set packing conflict");
    require(i != j, "set packing: a subset cannot conflict with itself");
    if (i > j) std::swap(i, j);
    require(seen.insert({i, j}).second, "set packing: duplicate conflict pair");
    q.add_quadratic(i, j, inst.penalty);
  }
  return q;
}

QuboModel build_qap(const QapInstance& inst) {
  check_square(inst.flow, "QAP flow matrix");
  check_square(inst.distance, "QAP distance matrix");
  require(inst.flow.rows() == inst.distance.rows(),
          "QAP: flow and distance matrices must have the same size");
  require(inst.flow.diagonal().isZero(0.0) && inst.distance.diagonal().isZero(0.0),
          "QAP: flow and distance matrices must have zero diagonals");
  require(inst.penalty_facility > 0 && inst.penalty_location > 0,
          "QAP: penalties must be positive");
  const Index n = inst.size();
  QuboModel q(n * n);
  const auto& A = inst.flow;
  const auto& B = inst.distance;

  // Σ_{i,k} Σ_{j,l} a_ik b_jl x_ij x_kl, both orderings of each pair. For
  // asymmetric data this yields the symmetrized coupling automatically.
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) {
      if (i == k) continue;
      for (Index j = 0; j < n; ++j)
        for (Index l = 0; l < n; ++l) {
          if (j == l) continue;
          const double c = A(i, k) * B(j, l);
          if (c != 0.0) q.add_quadratic(qap_index(i, j, n), qap_index(k, l, n), c);
        }
    }

  // P (Σ_j x_ij - 1)² = P (1 - Σ_j x_ij + 2 Σ_{j<l} x_ij x_il)
  const auto add_one_hot = [&q](const std::vector<Index>& vars, double P) {
    q.add_constant(P);
    for (std::size_t a = 0; a < vars.size(); ++a) {
      q.add_linear(vars[a], -P);
      for (std::size_t b = a + 1; b < vars.size(); ++b) q.add_quadratic(vars[a], vars[b], 2 * P);
    }
  };
  for (Index i = 0; i < n; ++i) {
    std::vector<Index> row;
    for (Index j = 0; j < n; ++j) row.push_back(qap_index(i, j, n));
    add_one_hot(row, inst.penalty_facility);
  }
  for (Index j = 0; j < n; ++j) {
    std::vector<Index> col;
    for (Index i = 0; i < n; ++i) col.push_back(qap_index(i, j, n));
    add_one_hot(col, inst.penalty_location);
  }
  return q;
}

QuboModel build_binary_clustering(const ClusteringInstance& inst) {
  const auto& W = inst.weights;
  check_square(W, "clustering weight matrix");
  require(W.isApprox(W.transpose(), 0.0), "clustering: weight matrix must be symmetric");
  require(W.diagonal().isZero(0.0), "clustering: weight matrix must have a zero diagonal");
  require((W.array() >= 0).all(), "clustering: weights must be nonnegative");
  const Index n = inst.size();
  QuboModel q(n);
  // -w (x_i + x_j - 2 x_i x_j)
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double w = W(i, j);
      if (w == 0.0) continue;
      q.add_linear(i, -w).add_linear(j, -w).add_quadratic(i, j, 2 * w);
    }
  return q;
}

QuboModel build_protein_toy(const ProteinToyInstance& inst) {
  const Index L = inst.length();
  require(L >= 2, "protein: chain needs at least two residues");
  for (int h : inst.hydrophobic)
    require(h == 0 || h == 1, "protein: hydrophobicity flags must be 0 or 1");
  require(inst.penalty_contact > 0 && inst.penalty_exclusion > 0,
          "protein: penalties must be positive");
  const Index N = inst.variable_count();
  QuboModel q(N);
  for (Index i = 0; i < L; ++i)
    for (Index j = i + 1; j < L; ++j)
      q.add_linear(protein_pair_index(i, j, L), inst.penalty_contact - inst.contact_reward(i, j));
  std::set<std::pair<Index, Index>> seen;
  for (auto [p, r] : inst.exclusions) {
    check_var(p, N, "protein exclusion");
    check_var(r, N, "protein exclusion");
    require(p != r, "protein: exclusion pair must reference two distinct contacts");
    if (p > r) std::swap(p, r);
    require(seen.insert({p, r}).second, "protein: duplicate exclusion pair");
    q.add_quadratic(p, r, inst.penalty_exclusion);
  }
  return q;
}

int violated_clauses(const TwoSatInstance& inst, Bitstring x) {
  int count = 0;
  for (const auto& [a, b] : inst.clauses) {
    const bool va = bit(x, a.var) != a.negated;
    const bool vb = bit(x, b.var) != b.negated;
    if (!va && !vb) ++count;
  }
  return count;
}

int violated_parities(const XorSatInstance& inst, Bitstring x) {
  int count = 0;
  for (const auto& c : inst.constraints)
    if ((bit(x, c.i) ^ bit(x, c.j)) != (c.parity == 1)) ++count;
  return count;
}

double cut_weight(const ClusteringInstance& inst, Bitstring x) {
  double w = 0;
  for (Index i = 0; i < inst.size(); ++i)
    for (Index j = i + 1; j < inst.size(); ++j)
      if (bit(x, i) != bit(x, j)) w += inst.weights(i, j);
  return w;
}

double qap_assignment_cost(const QapInstance& inst, std::span<const Index> perm) {
  const Index n = inst.size();
  require(static_cast<Index>(perm.size()) == n, "QAP: permutation length mismatch");
  double c = 0;
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k)
      c += inst.flow(i, k) * inst.distance(perm[static_cast<std::size_t>(i)],
                                           perm[static_cast<std::size_t>(k)]);
  return c;
}

std::string family_name(const ProblemInstance& inst) {
  static const char* names[] = {"two_sat", "xor_sat", "mixed",  "set_packing",
                                "qap",     "clustering", "protein"};
  return names[inst.index()];
}

QuboModel build(const ProblemInstance& inst) {
  return std::visit(
      [](const auto& v) -> QuboModel {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TwoSatInstance>) return build_two_sat(v);
        else if constexpr (std::is_same_v<T, XorSatInstance>) return build_xor_sat(v);
        else if constexpr (std::is_same_v<T, MixedInstance>) return build_mixed(v.clauses, v.parities);
        else if constexpr (std::is_same_v<T, SetPackingInstance>) return build_set_packing(v);
        else if constexpr (std::is_same_v<T, QapInstance>) return build_qap(v);
        else if constexpr (std::is_same_v<T, ClusteringInstance>) return build_binary_clustering(v);
        else return build_protein_toy(v);
      },
      inst);
}

const std::vector<std::string>& paper_instance_names() {
  static const std::vector<std::string> names{"two_sat", "xor_sat",    "mixed",  "set_packing",
                                              "qap",     "clustering", "protein"};
  return names;
}

namespace {

// (x1 ∨ x2) ∧ (¬x1 ∨ x3), 0-based variables.
TwoSatInstance paper_clauses() {
  TwoSatInstance t;
  t.n = 3;
  t.clauses = {{{0, false}, {1, false}}, {{0, true}, {2, false}}};
  t.penalty = 1.0;
  return t;
}

}  // namespace

PaperInstance paper_instance(const std::string& name) {
  PaperInstance out;
  out.name = name;
  auto& meta = out.metadata;
  if (name == "two_sat") {
    out.instance = paper_clauses();
    meta["description"] = "(x1 or x2) and (not x1 or x3)";
    meta["penalties"] = "P=1 (default, not given in the source)";
  } else if (name == "xor_sat") {
    XorSatInstance x;
    x.n = 3;
    x.constraints = {{0, 1, 1, 1.0}, {1, 2, 1, 1.0}, {2, 0, 1, 1.0}};
    out.instance = x;
    meta["description"] = "x1^x2=1, x2^x3=1, x3^x1=1 (frustrated odd cycle)";
    meta["penalties"] = "unit constraint weight";
  } else if (name == "mixed") {
    XorSatInstance x;
    x.n = 3;
    x.constraints = {{1, 2, 1, 1.0}};
    out.instance = MixedInstance{paper_clauses(), x};
    meta["description"] = "(x1 or x2) and (not x1 or x3), x2^x3=1";
    meta["penalties"] = "P=1 for clauses, unit XOR weight";
  } else if (name == "set_packing") {
    SetPackingInstance s;
    s.weights = Eigen::VectorXd::Ones(4);
    s.conflicts = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};
    s.penalty = 2.0;
    out.instance = s;
    meta["description"] = "max sum x_i s.t. x1+x3<=1, x1+x4<=1, x2+x3<=1, x2+x4<=1";
    meta["penalties"] = "P=2 (default)";
  } else if (name == "qap") {
    QapInstance q;
    q.flow = (Eigen::Matrix2d() << 0, 3, 3, 0).finished();
    q.distance = (Eigen::Matrix2d() << 0, 2, 2, 0).finished();
    const double P = 2.0 * q.flow.maxCoeff() * q.distance.maxCoeff() * 2.0;
    q.penalty_facility = P;
    q.penalty_location = P;
    out.instance = q;
    meta["description"] = "F = [[0,3],[3,0]], D = [[0,2],[2,0]]";
    meta["penalties"] = "P1=P2=2*max(F)*max(D)*n=24 (default)";
    meta["index_map"] = "p = facility*n + location (0-based)";
  } else if (name == "clustering") {
    ClusteringInstance c;
    c.weights.resize(5, 5);
    c.weights << 0, 3, 0, 0, 1,  //
        3, 0, 2, 0, 0,           //
        0, 2, 0, 4, 1,           //
        0, 0, 4, 0, 2,           //
        1, 0, 1, 2, 0;
    out.instance = c;
    meta["description"] = "weighted max-cut on a five-node graph";
  } else if (name == "protein") {
    ProteinToyInstance p;
    p.hydrophobic = {1, 1, 0, 1};
    p.exclusions = shared_residue_exclusions(4);
    p.penalty_contact = 0.5;
    p.penalty_exclusion = 2.0;
    out.instance = p;
    meta["description"] = "HHPH contact-variable toy model, L=4, N=6";
    meta["penalties"] = "P1=0.5, P2=2 (defaults)";
    meta["exclusions"] = "contact pairs sharing a residue (default)";
    meta["note"] =
        "contact-variable model; the positional lattice formulation is not implemented";
  } else {
    throw InvalidArgument("unknown instance '" + name + "'");
  }
  meta["family"] = family_name(out.instance);
  out.model = build(out.instance);
  return out;
}

}  // namespace rydanneal
