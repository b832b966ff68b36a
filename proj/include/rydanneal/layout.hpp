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

#include <cstdint>
#include <vector>

#include "rydanneal/encoding.hpp"

namespace rydanneal {

/// Atom positions (one row per atom, 2 or 3 columns, µm).
struct AtomLayout {
  Eigen::MatrixXd positions;
  double c6 = HardwareLimits{}.c6;

  Index size() const { return positions.rows(); }
  int dim() const { return static_cast<int>(positions.cols()); }
};

/// V_jk = C6 / |r_j - r_k|⁶. Throws InvalidArgument for coincident atoms.
Eigen::MatrixXd layout_interactions(const AtomLayout& layout);

/// Target spacing (C6 / V)^{1/6}.
double interaction_distance(double v, double c6);

struct EmbedOptions {
  int restarts = 16;
  int max_iterations = 400;
  double r_far = HardwareLimits{}.r_far;
  double c6 = HardwareLimits{}.c6;
};

struct EmbedResult {
  AtomLayout layout;
  /// max |C6/r⁶ - V| / max(V) over all pairs, leakage on V = 0 pairs included.
  double residual = 0.0;
  double stress = 0.0;
  /// Largest unwanted interaction on a V = 0 pair, relative to max(V).
  double leakage = 0.0;
};

/// Multi-start Levenberg–Marquardt stress minimization. Positive V pairs
/// contribute relative distance errors, zero pairs a hinge max(0, r_far - r).
/// Infeasible geometries come back with a large residual rather than an error.
EmbedResult embed_layout(const EncodedTarget& t, int dim, std::uint64_t seed,
                         const EmbedOptions& opts = {});

struct PairError {
  Index i = 0, j = 0;
  double target = 0.0;
  double realized = 0.0;
  /// |ΔV|/V on coupled pairs, V_realized / max(V) on uncoupled ones.
  double relative_error = 0.0;
  bool unwanted = false;
};

struct ValidationReport {
  std::vector<PairError> pairs;
  double max_error = 0.0;
  double worst_unwanted = 0.0;
  bool passed = true;
  std::vector<PairError> offending;
};

ValidationReport validate(const EncodedTarget& t, const AtomLayout& layout, double tol);

/// Target with V replaced by the layout's realized interactions (Δ kept).
EncodedTarget with_layout_interactions(const EncodedTarget& t, const AtomLayout& layout);

}  // namespace rydanneal
