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

#include "rydanneal/common.hpp"

namespace rydanneal {

enum class PulseBasis { Fourier, Spline };

std::string to_string(PulseBasis b);
PulseBasis pulse_basis_from_string(const std::string& s);

/// Global detuning envelope Δ_G(t) and Rabi frequency Ω(t) over [0, T].
///
/// Fourier:
///   Δ_G(t) = Δ_G(0)(1 - t/T) + t/T + Σ_n a_n sin(nπt/T)
///   Ω(t)   = Σ_n b_n sin(nπt/T)
/// Spline: a_k (b_k) are values at equally spaced interior knots; Δ_G knots
/// are offsets from the same linear ramp. Either way Δ_G(T) = 1 and
/// Ω(0) = Ω(T) = 0 hold exactly.
struct Schedule {
  double duration = 60.0;  // T, µs
  PulseBasis basis = PulseBasis::Fourier;
  double delta_initial = -1.0;  // Δ_G(0)
  Eigen::VectorXd delta_coefficients = Eigen::VectorXd::Zero(6);
  Eigen::VectorXd omega_coefficients = Eigen::VectorXd::Zero(6);
  /// |Ω| is clipped to this value.
  double omega_max = std::numeric_limits<double>::infinity();
  bool omega_nonnegative = false;
  int sample_count = 201;

  Index parameter_count() const {
    return delta_coefficients.size() + omega_coefficients.size();
  }
  /// Flattened (delta, omega) coefficients.
  Eigen::VectorXd parameters() const;
  Schedule with_parameters(const Eigen::VectorXd& p) const;

  void validate(double t_max = std::numeric_limits<double>::infinity()) const;
};

double delta_profile(const Schedule& s, double t);
double omega_profile(const Schedule& s, double t);

/// Clamped cubic spline through (k·h, values_k), k = 0..m-1, with prescribed
/// end slopes.
double clamped_spline(const Eigen::VectorXd& values, double h, double slope_start,
                      double slope_end, double t);

}  // namespace rydanneal
