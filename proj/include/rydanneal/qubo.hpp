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

#include <algorithm>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rydanneal/common.hpp"

namespace rydanneal {

enum class Vartype { Binary, Spin };

/// Quadratic polynomial over n binary (x ∈ {0,1}) or spin (s ∈ {-1,+1})
/// variables:
///
///   E(v) = constant + Σ_i linear_i v_i + Σ_{i<j} quadratic_ij v_i v_j
///
/// Couplings live in the strict upper triangle of a dense n×n matrix; the
/// diagonal and lower triangle stay zero. Squared terms are folded on insert
/// (x² = x for binaries, s² = 1 for spins).
template <typename Scalar_, Vartype Kind>
class QuadraticModel {
 public:
  using Scalar = Scalar_;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  static constexpr Vartype vartype = Kind;

  QuadraticModel() = default;
  explicit QuadraticModel(Index n)
      : linear_(Vector::Zero(n)), quadratic_(Matrix::Zero(n, n)) {}

  Index size() const { return linear_.size(); }

  const Vector& linear() const { return linear_; }
  Scalar linear(Index i) const { return linear_(i); }

  /// Strictly upper-triangular coupling matrix.
  const Matrix& quadratic() const { return quadratic_; }
  Scalar quadratic(Index i, Index j) const {
    if (i == j) return Scalar(0);
    return i < j ? quadratic_(i, j) : quadratic_(j, i);
  }

  Scalar constant() const { return constant_; }

  QuadraticModel& add_linear(Index i, Scalar c) {
    check_index(i);
    linear_(i) += c;
    return *this;
  }

  QuadraticModel& add_quadratic(Index i, Index j, Scalar c) {
    check_index(i);
    check_index(j);
    if (i == j) {
      if constexpr (Kind == Vartype::Binary)
        linear_(i) += c;
      else
        constant_ += c;
    } else {
      if (i > j) std::swap(i, j);
      quadratic_(i, j) += c;
    }
    return *this;
  }

  QuadraticModel& add_constant(Scalar c) {
    constant_ += c;
    return *this;
  }

  QuadraticModel& operator+=(const QuadraticModel& other) {
    if (other.size() != size())
      throw InvalidArgument("cannot add models of different sizes (" +
                            std::to_string(size()) + " vs " +
                            std::to_string(other.size()) + ")");
    linear_ += other.linear_;
    quadratic_ += other.quadratic_;
    constant_ += other.constant_;
    return *this;
  }

  friend QuadraticModel operator+(QuadraticModel a, const QuadraticModel& b) {
    a += b;
    return a;
  }

  /// Nonzero couplings as (i, j, coefficient) with i < j, row-major order.
  std::vector<std::tuple<Index, Index, Scalar>> interactions() const {
    std::vector<std::tuple<Index, Index, Scalar>> out;
    for (Index i = 0; i < size(); ++i)
      for (Index j = i + 1; j < size(); ++j)
        if (quadratic_(i, j) != Scalar(0)) out.emplace_back(i, j, quadratic_(i, j));
    return out;
  }

  /// Value of variable i under a packed assignment (bit i = x_i, s_i = 1 - 2 x_i).
  static Scalar value(Bitstring b, Index i) {
    if constexpr (Kind == Vartype::Binary)
      return bit(b, i) ? Scalar(1) : Scalar(0);
    else
      return bit(b, i) ? Scalar(-1) : Scalar(1);
  }

  /// Energy of a packed assignment. Terms are summed in a fixed order, so
  /// equal polynomials give bit-identical results.
  Scalar energy(Bitstring b) const {
    Scalar e = constant_;
    for (Index i = 0; i < size(); ++i) e += linear_(i) * value(b, i);
    for (Index i = 0; i < size(); ++i) {
      const Scalar vi = value(b, i);
      for (Index j = i + 1; j < size(); ++j) e += quadratic_(i, j) * vi * value(b, j);
    }
    return e;
  }

 private:
  void check_index(Index i) const {
    if (i < 0 || i >= size())
      throw InvalidArgument("variable index " + std::to_string(i) +
                            " out of range for model of size " +
                            std::to_string(size()));
  }

  Vector linear_;
  Matrix quadratic_;
  Scalar constant_ = Scalar(0);
};

template <typename Scalar>
using Qubo = QuadraticModel<Scalar, Vartype::Binary>;
template <typename Scalar>
using Ising = QuadraticModel<Scalar, Vartype::Spin>;

using QuboModel = Qubo<double>;
using IsingModel = Ising<double>;

/// x_i = (1 - s_i)/2: x = 0 ↔ s = +1, x = 1 ↔ s = -1.
template <typename Scalar>
Ising<Scalar> qubo_to_ising(const Qubo<Scalar>& q) {
  const Index n = q.size();
  Ising<Scalar> m(n);
  Scalar c = q.constant();
  for (Index i = 0; i < n; ++i) {
    const Scalar a = q.linear(i);
    if (a == Scalar(0)) continue;
    c += a / 2;
    m.add_linear(i, -a / 2);
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const Scalar b = q.quadratic()(i, j);
      if (b == Scalar(0)) continue;
      c += b / 4;
      m.add_linear(i, -b / 4);
      m.add_linear(j, -b / 4);
      m.add_quadratic(i, j, b / 4);
    }
  m.add_constant(c);
  return m;
}

/// Inverse substitution s_i = 1 - 2 x_i.
template <typename Scalar>
Qubo<Scalar> ising_to_qubo(const Ising<Scalar>& m) {
  const Index n = m.size();
  Qubo<Scalar> q(n);
  Scalar c = m.constant();
  for (Index i = 0; i < n; ++i) {
    const Scalar h = m.linear(i);
    if (h == Scalar(0)) continue;
    c += h;
    q.add_linear(i, -2 * h);
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const Scalar J = m.quadratic()(i, j);
      if (J == Scalar(0)) continue;
      c += J;
      q.add_linear(i, -2 * J);
      q.add_linear(j, -2 * J);
      q.add_quadratic(i, j, 4 * J);
    }
  q.add_constant(c);
  return q;
}

/// Packs an explicit assignment (0/1 for binary models, ±1 for spin models).
template <typename Model>
Bitstring pack_assignment(const Model& model, std::span<const int> assignment) {
  if (static_cast<Index>(assignment.size()) != model.size())
    throw InvalidArgument("assignment has length " + std::to_string(assignment.size()) +
                          " but the model has " + std::to_string(model.size()) +
                          " variables");
  if (model.size() > 64) throw InvalidArgument("models above 64 variables cannot be packed");
  Bitstring b = 0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const int v = assignment[i];
    bool set = false;
    if constexpr (Model::vartype == Vartype::Binary) {
      if (v != 0 && v != 1) throw InvalidArgument("binary assignment values must be 0 or 1");
      set = v == 1;
    } else {
      if (v != 1 && v != -1) throw InvalidArgument("spin assignment values must be -1 or +1");
      set = v == -1;
    }
    if (set) b |= Bitstring{1} << i;
  }
  return b;
}

template <typename Model>
typename Model::Scalar evaluate(const Model& model, std::span<const int> assignment) {
  return model.energy(pack_assignment(model, assignment));
}

template <typename Model>
typename Model::Scalar evaluate(const Model& model, std::initializer_list<int> assignment) {
  return evaluate(model, std::span<const int>(assignment.begin(), assignment.size()));
}

/// One exactly-degenerate energy level.
template <typename Scalar>
struct Level {
  Scalar energy;
  std::vector<Bitstring> states;  // sorted ascending

  Index degeneracy() const { return static_cast<Index>(states.size()); }
};

/// Exhaustive classical spectrum, grouped by exact energy equality.
template <typename Scalar>
struct Spectrum {
  Index n = 0;
  std::vector<Level<Scalar>> levels;  // strictly increasing energy

  Scalar e_min() const { return levels.front().energy; }
  Scalar e_max() const { return levels.back().energy; }
  std::size_t state_count() const {
    std::size_t total = 0;
    for (const auto& l : levels) total += l.states.size();
    return total;
  }
};

using SpectrumTable = Spectrum<double>;

inline constexpr Index kDefaultEnumerationCap = 20;

class SpectrumTooLarge : public Error {
 public:
  using Error::Error;
};

template <typename Model>
Spectrum<typename Model::Scalar> enumerate_spectrum(const Model& model,
                                                     Index cap = kDefaultEnumerationCap) {
  using Scalar = typename Model::Scalar;
  const Index n = model.size();
  if (n > cap || n > 62)
    throw SpectrumTooLarge("cannot enumerate " + std::to_string(n) +
                           " variables (cap is " + std::to_string(cap) + ")");
  const Bitstring count = Bitstring{1} << n;
  std::vector<std::pair<Scalar, Bitstring>> all;
  all.reserve(count);
  for (Bitstring b = 0; b < count; ++b) all.emplace_back(model.energy(b), b);
  std::sort(all.begin(), all.end());

  Spectrum<Scalar> table;
  table.n = n;
  for (const auto& [e, b] : all) {
    if (table.levels.empty() || table.levels.back().energy != e)
      table.levels.push_back(Level<Scalar>{e, {}});
    table.levels.back().states.push_back(b);
  }
  return table;
}

template <typename Scalar>
struct GroundSummary {
  Scalar e_opt;
  std::vector<Bitstring> ground;
  Scalar c_opt;
  Scalar c_max;
};

template <typename Scalar>
GroundSummary<Scalar> ground_summary(const Spectrum<Scalar>& table) {
  if (table.levels.empty()) throw InvalidArgument("empty spectrum");
  return {table.e_min(), table.levels.front().states, table.e_min(), table.e_max()};
}

/// Unpacks bit i of b as x_i ∈ {0,1}.
inline std::vector<int> to_bits(Bitstring b, Index n) {
  std::vector<int> x(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = bit(b, i) ? 1 : 0;
  return x;
}

/// Unpacks bit i of b as s_i = 1 - 2 x_i.
inline std::vector<int> to_spins(Bitstring b, Index n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = bit(b, i) ? -1 : 1;
  return s;
}

/// "0101..." with variable 0 first.
inline std::string bitstring_label(Bitstring b, Index n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (Index i = 0; i < n; ++i)
    if (bit(b, i)) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

}  // namespace rydanneal
