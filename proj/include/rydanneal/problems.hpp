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

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rydanneal/qubo.hpp"

namespace rydanneal {

// Problem builders. Every builder emits a QuboModel whose cost is to be
// minimized; the Ising image follows from qubo_to_ising.

struct Literal {
  Index var = 0;
  bool negated = false;
};

struct TwoSatInstance {
  Index n = 0;
  std::vector<std::pair<Literal, Literal>> clauses;
  double penalty = 1.0;
};

struct XorConstraint {
  Index i = 0;
  Index j = 0;
  int parity = 1;  // x_i ⊕ x_j = parity
  double weight = 1.0;
};

struct XorSatInstance {
  Index n = 0;
  std::vector<XorConstraint> constraints;
};

struct MixedInstance {
  TwoSatInstance clauses;
  XorSatInstance parities;
};

struct SetPackingInstance {
  Eigen::VectorXd weights;
  std::vector<std::pair<Index, Index>> conflicts;
  double penalty = 2.0;

  Index size() const { return weights.size(); }
  /// Number of conflicts touching each subset.
  Eigen::VectorXi degrees() const;
};

struct QapInstance {
  Eigen::MatrixXd flow;      // A, facilities × facilities
  Eigen::MatrixXd distance;  // B, locations × locations
  double penalty_facility = 1.0;  // P1: each facility placed once
  double penalty_location = 1.0;  // P2: each location used once

  Index size() const { return flow.rows(); }
  bool symmetric() const;
};

struct ClusteringInstance {
  Eigen::MatrixXd weights;  // symmetric dissimilarities, zero diagonal
  Index size() const { return weights.rows(); }
};

/// Contact-variable toy HP model. One binary variable per residue pair
/// (i, j), i < j; contact rewards follow the hydrophobicity flags.
struct ProteinToyInstance {
  std::vector<int> hydrophobic;  // H_i ∈ {0,1}, length L
  /// Mutually exclusive contact pairs, as pairs of contact-variable indices.
  std::vector<std::pair<Index, Index>> exclusions;
  double penalty_contact = 0.5;    // P1
  double penalty_exclusion = 2.0;  // P2

  Index length() const { return static_cast<Index>(hydrophobic.size()); }
  Index variable_count() const { return length() * (length() - 1) / 2; }
  /// c_ij = 1 iff both residues hydrophobic and |i - j| > 1 (0-based residues).
  int contact_reward(Index i, Index j) const;
};

/// 0-based contact-variable index of residue pair (i, j), i < j < L.
/// Equals the 1-based map p = (i-1)L - i(i+1)/2 + j shifted by one.
Index protein_pair_index(Index i, Index j, Index length);
std::pair<Index, Index> protein_pair_of(Index p, Index length);

/// 0-based QAP variable index of "facility i at location j".
inline Index qap_index(Index facility, Index location, Index n) { return facility * n + location; }

/// Exclusion set of contact pairs that share a residue: ((i,j),(i,k)) etc.
std::vector<std::pair<Index, Index>> shared_residue_exclusions(Index length);

QuboModel build_two_sat(const TwoSatInstance& inst);
QuboModel build_xor_sat(const XorSatInstance& inst);
QuboModel build_mixed(const TwoSatInstance& clauses, const XorSatInstance& parities);
QuboModel build_set_packing(const SetPackingInstance& inst);
QuboModel build_qap(const QapInstance& inst);
QuboModel build_binary_clustering(const ClusteringInstance& inst);
QuboModel build_protein_toy(const ProteinToyInstance& inst);

/// Independent checks used by tests and reports.
int violated_clauses(const TwoSatInstance& inst, Bitstring x);
int violated_parities(const XorSatInstance& inst, Bitstring x);
double cut_weight(const ClusteringInstance& inst, Bitstring x);
/// Σ_{i,k} A_ik B_{π(i)π(k)} for a permutation π (facility → location).
double qap_assignment_cost(const QapInstance& inst, std::span<const Index> perm);

using ProblemInstance = std::variant<TwoSatInstance, XorSatInstance, MixedInstance,
                                     SetPackingInstance, QapInstance, ClusteringInstance,
                                     ProteinToyInstance>;

std::string family_name(const ProblemInstance& inst);
QuboModel build(const ProblemInstance& inst);

struct PaperInstance {
  std::string name;
  ProblemInstance instance;
  QuboModel model;
  std::map<std::string, std::string> metadata;
};

/// Names accepted by paper_instance().
const std::vector<std::string>& paper_instance_names();

/// The small benchmark instances (three-variable SAT family, four-set packing,
/// 2×2 QAP, five-node clustering graph, HHPH toy protein) with the default
/// penalties. Throws InvalidArgument for unknown names.
PaperInstance paper_instance(const std::string& name);

}  // namespace rydanneal
