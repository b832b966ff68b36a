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


#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "rydanneal/problems.hpp"

using namespace rydanneal;

namespace {

// Clause truth evaluated literally; x is a 0/1 vector.
int count_violations(const TwoSatInstance& inst, const std::vector<int>& x) {
  int bad = 0;
  for (const auto& [a, b] : inst.clauses) {
    const bool ta = a.negated ? x[a.var] == 0 : x[a.var] == 1;
    const bool tb = b.negated ? x[b.var] == 0 : x[b.var] == 1;
    bad += (ta || tb) ? 0 : 1;
  }
  return bad;
}

double weighted_parity_violation(const XorSatInstance& inst, const std::vector<int>& x) {
  double bad = 0;
  for (const auto& c : inst.constraints)
    if (((x[c.i] + x[c.j]) % 2) != c.parity) bad += c.weight;
  return bad;
}

TwoSatInstance random_two_sat(Index n, int clauses, std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> var(0, n - 1);
  std::bernoulli_distribution neg(0.5);
  TwoSatInstance t;
  t.n = n;
  t.penalty = 1.5;
  for (int c = 0; c < clauses; ++c) t.clauses.push_back({{var(rng), neg(rng)}, {var(rng), neg(rng)}});
  return t;
}

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("two-clause chain builds the expected polynomial") {
  TwoSatInstance t;
  t.n = 3;
  t.penalty = 2.0;
  t.clauses = {{{0, false}, {1, false}}, {{1, false}, {2, false}}};
  const QuboModel q = build_two_sat(t);
  const double P = 2.0;
  CHECK(q.constant() == 2 * P);
  CHECK(q.linear(0) == -P);
  CHECK(q.linear(1) == -2 * P);
  CHECK(q.linear(2) == -P);
  CHECK(q.quadratic(0, 1) == P);
  CHECK(q.quadratic(1, 2) == P);
  CHECK(q.quadratic(0, 2) == 0.0);
}

TEST_CASE("two-SAT with no clauses is the zero model") {
  TwoSatInstance t;
  t.n = 4;
  const QuboModel q = build_two_sat(t);
  CHECK(q.linear().isZero());
  CHECK(q.quadratic().isZero());
  CHECK(q.constant() == 0.0);
}

TEST_CASE("two-SAT rejects bad input") {
  TwoSatInstance t;
  t.n = 2;
  t.clauses = {{{0, false}, {2, false}}};
  CHECK_THROWS_AS(build_two_sat(t), InvalidArgument);
  t.clauses.clear();
  t.penalty = 0.0;
  CHECK_THROWS_AS(build_two_sat(t), InvalidArgument);
}

TEST_CASE("reference two-SAT instance has four satisfying assignments") {
  const auto p = paper_instance("two_sat");
  const auto& t = std::get<TwoSatInstance>(p.instance);
  int zeros = 0;
  for (Bitstring b = 0; b < 8; ++b) {
    const auto x = oracle::bits_of(b, 3);
    const int v = count_violations(t, x);
    CHECK(oracle::qubo_value(p.model, x) == doctest::Approx(t.penalty * v));
    zeros += v == 0;
  }
  CHECK(zeros == 4);
}

TEST_CASE("property: two-SAT cost is P times the violated clause count") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 2 + trial % 9;
    const TwoSatInstance t = random_two_sat(n, 1 + trial % 12, rng);
    const QuboModel q = build_two_sat(t);
    for (Bitstring b = 0; b < (Bitstring{1} << n); ++b) {
      const auto x = oracle::bits_of(b, n);
      CHECK(q.energy(b) == doctest::Approx(t.penalty * count_violations(t, x)));
      CHECK(violated_clauses(t, b) == count_violations(t, x));
    }
  }
}

TEST_CASE("single XOR constraint") {
  XorSatInstance x;
  x.n = 2;
  x.constraints = {{0, 1, 1, 1.0}};
  const QuboModel q = build_xor_sat(x);
  CHECK(q.constant() == 1.0);
  CHECK(q.linear(0) == -1.0);
  CHECK(q.linear(1) == -1.0);
  CHECK(q.quadratic(0, 1) == 2.0);
  CHECK(qubo_to_ising(q).quadratic(0, 1) == doctest::Approx(0.5));

  x.constraints = {{0, 1, 0, 1.0}};
  CHECK(build_xor_sat(x).energy(0b11) == 0.0);
  CHECK(build_xor_sat(x).energy(0b01) == 1.0);
}

TEST_CASE("frustrated XOR triangle has minimum one with six optima") {
  const auto p = paper_instance("xor_sat");
  const auto values = oracle::all_values(3, [&](const auto& x) { return oracle::qubo_value(p.model, x); });
  CHECK(values.front() == doctest::Approx(1.0));
  CHECK(std::count_if(values.begin(), values.end(), [](double v) { return std::abs(v - 1.0) < 1e-12; }) == 6);
}

TEST_CASE("property: XOR cost is the weighted violation count") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + trial % 8;
    XorSatInstance x;
    x.n = n;
    std::uniform_int_distribution<Index> var(0, n - 1);
    for (int c = 0; c < 1 + trial % 10; ++c) {
      Index i = var(rng), j = var(rng);
      if (i == j) j = (i + 1) % n;
      x.constraints.push_back({i, j, static_cast<int>(rng() % 2), w(rng)});
    }
    const QuboModel q = build_xor_sat(x);
    for (Bitstring b = 0; b < (Bitstring{1} << n); ++b)
      CHECK(q.energy(b) == doctest::Approx(weighted_parity_violation(x, oracle::bits_of(b, n))));
  }
}

TEST_CASE("XOR rejects self constraints and bad parity") {
  XorSatInstance x;
  x.n = 2;
  x.constraints = {{1, 1, 1, 1.0}};
  CHECK_THROWS_AS(build_xor_sat(x), InvalidArgument);
  x.constraints = {{0, 1, 2, 1.0}};
  CHECK_THROWS_AS(build_xor_sat(x), InvalidArgument);
}

TEST_CASE("mixed model adds half a unit to the XOR coupling") {
  TwoSatInstance t;
  t.n = 3;
  t.penalty = 1.2;
  t.clauses = {{{0, false}, {1, false}}, {{1, false}, {2, false}}};
  XorSatInstance x;
  x.n = 3;
  x.constraints = {{0, 1, 1, 1.0}};
  const IsingModel m = qubo_to_ising(build_mixed(t, x));
  const double P = t.penalty;
  CHECK(m.linear(0) == doctest::Approx(P / 4));
  CHECK(m.linear(1) == doctest::Approx(P / 2));
  CHECK(m.linear(2) == doctest::Approx(P / 4));
  CHECK(m.quadratic(0, 1) == doctest::Approx(P / 4 + 0.5));
  CHECK(m.quadratic(1, 2) == doctest::Approx(P / 4));

  XorSatInstance none;
  none.n = 3;
  const QuboModel a = build_mixed(t, none), b = build_two_sat(t);
  for (Bitstring s = 0; s < 8; ++s) CHECK(a.energy(s) == b.energy(s));

  none.n = 4;
  CHECK_THROWS_AS(build_mixed(t, none), InvalidArgument);
}

TEST_CASE("reference mixed instance has exactly two ground states") {
  const auto p = paper_instance("mixed");
  const auto s = enumerate_spectrum(p.model);
  CHECK(s.e_min() == doctest::Approx(0.0));
  // (x1, x2, x3) = (0,1,0) and (1,0,1).
  CHECK(s.levels.front().states == std::vector<Bitstring>{0b010, 0b101});
}

TEST_CASE("set packing fields and couplings") {
  SetPackingInstance s;
  s.weights = Eigen::Vector3d(1.0, 2.0, 3.0);
  s.conflicts = {{0, 1}, {1, 2}};
  s.penalty = 5.0;
  const IsingModel m = qubo_to_ising(build_set_packing(s));
  const Eigen::VectorXi d = s.degrees();
  for (Index i = 0; i < 3; ++i)
    CHECK(m.linear(i) == doctest::Approx(s.weights(i) / 2 - d(i) * s.penalty / 4));
  CHECK(m.quadratic(0, 1) == doctest::Approx(s.penalty / 4));
  CHECK(m.quadratic(0, 2) == 0.0);
}

TEST_CASE("set packing without conflicts selects everything") {
  SetPackingInstance s;
  s.weights = Eigen::VectorXd::Ones(5);
  const auto sp = enumerate_spectrum(build_set_packing(s));
  CHECK(sp.e_min() == -5.0);
  CHECK(sp.levels.front().states == std::vector<Bitstring>{0b11111});
}

TEST_CASE("reference set packing has two optimal packings") {
  const auto sp = enumerate_spectrum(paper_instance("set_packing").model);
  CHECK(sp.e_min() == -2.0);
  CHECK(sp.levels.front().states == std::vector<Bitstring>{0b0011, 0b1100});
}

TEST_CASE("set packing input errors") {
  SetPackingInstance s;
  s.weights = Eigen::VectorXd::Ones(3);
  s.conflicts = {{0, 1}, {1, 0}};
  CHECK_THROWS_AS(build_set_packing(s), InvalidArgument);
  s.conflicts = {{0, 3}};
  CHECK_THROWS_AS(build_set_packing(s), InvalidArgument);
}

TEST_CASE("QAP index map") {
  // Facility 1 at location 2 (1-based) in a 2x2 instance is variable 2.
  CHECK(qap_index(0, 1, 2) + 1 == 2);
  CHECK(qap_index(2, 1, 3) == 7);
}

TEST_CASE("QAP Ising coefficients match the closed forms") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  const Index n = 3;
  QapInstance q;
  q.flow = Eigen::MatrixXd::Zero(n, n);
  q.distance = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = i + 1; k < n; ++k) {
      q.flow(i, k) = q.flow(k, i) = u(rng);
      q.distance(i, k) = q.distance(k, i) = u(rng);
    }
  q.penalty_facility = 7.0;
  q.penalty_location = 9.0;
  const IsingModel m = qubo_to_ising(build_qap(q));
  const double P1 = q.penalty_facility, P2 = q.penalty_location;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      double flow = 0;
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l) flow += q.flow(i, k) * q.distance(j, l);
      CHECK(m.linear(qap_index(i, j, n)) ==
            doctest::Approx(-flow / 2 - (n - 2) * (P1 + P2) / 2));
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l) {
          const Index a = qap_index(i, j, n), b = qap_index(k, l, n);
          if (a >= b) continue;
          double expected = 0;
          if (i == k) expected = P1 / 2;
          else if (j == l) expected = P2 / 2;
          else expected = q.flow(i, k) * q.distance(j, l) / 2;
          CHECK(m.quadratic(a, b) == doctest::Approx(expected));
        }
    }
}

TEST_CASE("reference QAP: both permutations cost twelve") {
  const auto p = paper_instance("qap");
  const auto& q = std::get<QapInstance>(p.instance);
  const std::vector<std::vector<Index>> perms{{0, 1}, {1, 0}};
  for (const auto& perm : perms) {
    double c = 0;
    for (Index i = 0; i < 2; ++i)
      for (Index k = 0; k < 2; ++k) c += q.flow(i, k) * q.distance(perm[i], perm[k]);
    CHECK(c == 12.0);
    CHECK(qap_assignment_cost(q, perm) == 12.0);
    Bitstring b = 0;
    for (Index i = 0; i < 2; ++i) b |= Bitstring{1} << qap_index(i, perm[i], 2);
    CHECK(p.model.energy(b) == doctest::Approx(12.0));
  }
  CHECK(enumerate_spectrum(p.model).levels.front().states.size() == 2);
}

TEST_CASE("property: large QAP penalties put every infeasible state above every feasible one") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (Index n : {2, 3}) {
    for (int trial = 0; trial < 5; ++trial) {
      QapInstance q;
      q.flow = Eigen::MatrixXd::Zero(n, n);
      q.distance = Eigen::MatrixXd::Zero(n, n);
      for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < n; ++k)
          if (i != k) {
            q.flow(i, k) = u(rng);
            q.distance(i, k) = u(rng);
          }
      const double P = n * n * q.flow.maxCoeff() * q.distance.maxCoeff() + 1.0;
      q.penalty_facility = q.penalty_location = P;
      const QuboModel m = build_qap(q);
      double worst_feasible = -1e300, best_infeasible = 1e300;
      for (Bitstring b = 0; b < (Bitstring{1} << (n * n)); ++b) {
        bool feasible = true;
        for (Index i = 0; i < n; ++i) {
          int row = 0, col = 0;
          for (Index j = 0; j < n; ++j) {
            row += bit(b, qap_index(i, j, n));
            col += bit(b, qap_index(j, i, n));
          }
          feasible = feasible && row == 1 && col == 1;
        }
        const double e = m.energy(b);
        if (feasible) worst_feasible = std::max(worst_feasible, e);
        else best_infeasible = std::min(best_infeasible, e);
      }
      CHECK(best_infeasible > worst_feasible);
    }
  }
}

TEST_CASE("QAP input errors") {
  QapInstance q;
  q.flow = Eigen::MatrixXd::Zero(2, 3);
  q.distance = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(build_qap(q), InvalidArgument);
  q.flow = Eigen::MatrixXd::Zero(3, 3);
  CHECK_THROWS_AS(build_qap(q), InvalidArgument);
}

TEST_CASE("clustering: two nodes and zero fields") {
  ClusteringInstance c;
  c.weights = (Eigen::Matrix2d() << 0, 1, 1, 0).finished();
  CHECK(evaluate(build_binary_clustering(c), {0, 1}) == -1.0);
  CHECK(evaluate(build_binary_clustering(c), {1, 1}) == 0.0);

  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const Index n = 6;
  c.weights = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) c.weights(i, j) = c.weights(j, i) = u(rng);
  const IsingModel m = qubo_to_ising(build_binary_clustering(c));
  CHECK(m.linear().isZero(1e-14));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) CHECK(m.quadratic(i, j) == doctest::Approx(c.weights(i, j) / 2));
  // Flipping every spin is a symmetry, so all multiplicities are even.
  for (const auto& lvl : enumerate_spectrum(m).levels) CHECK(lvl.degeneracy() % 2 == 0);
}

TEST_CASE("reference clustering graph has maximum cut eleven") {
  const auto p = paper_instance("clustering");
  const auto& c = std::get<ClusteringInstance>(p.instance);
  double best = 0;
  for (Bitstring b = 0; b < 32; ++b) {
    double cut = 0;
    for (Index i = 0; i < 5; ++i)
      for (Index j = i + 1; j < 5; ++j)
        if (bit(b, i) != bit(b, j)) cut += c.weights(i, j);
    best = std::max(best, cut);
    CHECK(p.model.energy(b) == doctest::Approx(-cut));
  }
  CHECK(best == 11.0);
  CHECK(enumerate_spectrum(p.model).e_min() == -11.0);
}

TEST_CASE("clustering input errors") {
  ClusteringInstance c;
  c.weights = (Eigen::Matrix2d() << 0, 1, 2, 0).finished();
  CHECK_THROWS_AS(build_binary_clustering(c), InvalidArgument);
  c.weights = (Eigen::Matrix2d() << 0, -1, -1, 0).finished();
  CHECK_THROWS_AS(build_binary_clustering(c), InvalidArgument);
}

TEST_CASE("protein pair index") {
  CHECK(protein_pair_index(1, 2, 4) + 1 == 4);  // (2,3) in 1-based terms
  CHECK(protein_pair_index(2, 3, 4) + 1 == 6);  // (3,4)
  ProteinToyInstance p;
  p.hydrophobic = {1, 1, 0, 1};
  CHECK(p.variable_count() == 6);
}

TEST_CASE("property: protein pair index is a bijection onto 0..N-1") {
  for (Index L = 2; L <= 9; ++L) {
    std::set<Index> seen;
    for (Index i = 0; i < L; ++i)
      for (Index j = i + 1; j < L; ++j) {
        const Index p = protein_pair_index(i, j, L);
        CHECK(p >= 0);
        CHECK(p < L * (L - 1) / 2);
        seen.insert(p);
        CHECK(protein_pair_of(p, L) == std::make_pair(i, j));
      }
    CHECK(static_cast<Index>(seen.size()) == L * (L - 1) / 2);
  }
}

TEST_CASE("HHPH contact rewards follow the hydrophobic rule") {
  ProteinToyInstance p;
  p.hydrophobic = {1, 1, 0, 1};
  int total = 0;
  for (Index i = 0; i < 4; ++i)
    for (Index j = i + 1; j < 4; ++j) total += p.contact_reward(i, j);
  CHECK(p.contact_reward(0, 3) == 1);
  CHECK(p.contact_reward(1, 3) == 1);
  CHECK(p.contact_reward(0, 1) == 0);  // chain neighbours never count
  CHECK(p.contact_reward(0, 2) == 0);  // residue 3 is polar
  CHECK(total == 2);
}

TEST_CASE("protein Ising coefficients") {
  const auto inst = std::get<ProteinToyInstance>(paper_instance("protein").instance);
  const IsingModel m = qubo_to_ising(build_protein_toy(inst));
  const Index L = 4;
  const double P1 = inst.penalty_contact, P2 = inst.penalty_exclusion;
  for (Index i = 0; i < L; ++i)
    for (Index j = i + 1; j < L; ++j) {
      const Index p = protein_pair_index(i, j, L);
      int partners = 0;
      for (const auto& [a, b] : inst.exclusions) partners += (a == p || b == p);
      CHECK(m.linear(p) == doctest::Approx(-(P1 - inst.contact_reward(i, j)) / 2 - partners * P2 / 4));
    }
  for (const auto& [a, b] : inst.exclusions) CHECK(m.quadratic(a, b) == doctest::Approx(P2 / 4));
}

TEST_CASE("built-in instance catalogue") {
  CHECK(paper_instance_names().size() == 7);
  for (const auto& name : paper_instance_names()) {
    const auto p = paper_instance(name);
    CHECK(p.name == name);
    CHECK(p.metadata.at("family") == family_name(p.instance));
  }
  CHECK(paper_instance("clustering").model.size() == 5);
  CHECK(paper_instance("qap").model.size() == 4);
  CHECK(paper_instance("protein").model.size() == 6);
  CHECK_THROWS_AS(paper_instance("max_sat"), InvalidArgument);
}

}
