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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rydanneal/annealer.hpp"

namespace rydanneal {

enum class StageKind { QuasiNewton, Simplex };

std::string to_string(StageKind k);
StageKind stage_kind_from_string(const std::string& s);

struct Stage {
  StageKind kind = StageKind::QuasiNewton;
  int max_evals = 200;
  /// Dimensionless: objective values are measured in units of energy_scale().
  double tolerance = 1e-9;
};

struct StagePlan {
  std::vector<Stage> stages;

  /// Quasi-Newton, simplex, quasi-Newton with 200/400/200 evaluations.
  static StagePlan default_plan();
  void validate() const;
  int total_budget() const;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

class ObjectiveError : public Error {
 public:
  using Error::Error;
};

/// Central differences with step 1e-4·(1 + |p_i|). Throws ObjectiveError on
/// a non-finite probe value.
Eigen::VectorXd gradient(const Objective& f, const Eigen::VectorXd& p);

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// BFGS on the inverse Hessian with Armijo backtracking and
/// finite-difference gradients. Gradient probes count toward max_evals.
MinimizeResult minimize_quasi_newton(const Objective& f, const Eigen::VectorXd& x0, int max_evals,
                                     double tol);

/// Nelder-Mead with standard coefficients. After convergence the simplex is
/// rebuilt around the best vertex until a restart no longer improves.
MinimizeResult minimize_simplex(const Objective& f, const Eigen::VectorXd& x0, int max_evals,
                                double tol, double initial_step = 0.25);

struct HybridConfig {
  /// Supplies T, basis, coefficient counts and Δ_G(0); its coefficient
  /// values are not used as the starting point.
  Schedule schedule;
  /// Settings for the final, step-doubled propagation of the best schedule.
  PropagationConfig propagation;
  /// Step-doubling tolerance used once to fix the step count of objective calls.
  double calibration_tolerance = 1e-6;
  double omega_max = kTwoPi * 5.0;
  /// b_1 = fraction · omega_max when no explicit start is given.
  double initial_omega_fraction = 0.1;
  /// Seeded Gaussian perturbation of the default start (internal units).
  double jitter = 1e-3;
  /// Radians of accumulated phase per internal unit of any coefficient.
  double phase_unit = 30.0;
  std::optional<Eigen::VectorXd> initial_parameters;
};

struct HistoryEntry {
  int stage = 0;
  int evaluation = 0;
  double energy = 0.0;
  double best = 0.0;
};

struct OptimizationResult {
  Eigen::VectorXd parameters;
  Schedule schedule;
  double energy = 0.0;
  double fidelity = 0.0;
  double ratio = 0.0;
  int evaluations = 0;
  std::vector<HistoryEntry> history;
  std::uint64_t seed = 0;
  bool budget_exhausted = false;
  /// Fixed step count of the objective.
  int objective_steps = 0;
  PropagationResult final_run;
};

/// E(T) for one schedule.
/// Physical size of one internal optimizer unit for each schedule parameter:
/// phase_unit / (energy_scale · T) for Δ_G coefficients, phase_unit / T for Ω.
Eigen::VectorXd parameter_units(const EncodedTarget& t, const HybridConfig& cfg);

double objective_energy(const EncodedTarget& t, const Schedule& s, const PropagationConfig& cfg);

/// Runs the stage plan on E(T). Objective calls use a step count fixed by
/// one calibration at the start; the best schedule is then re-propagated
/// with step doubling and reported.
OptimizationResult run_hybrid(const EncodedTarget& t, const StagePlan& plan, std::uint64_t seed,
                              const HybridConfig& cfg = {});

/// (C_max - C_obt) / (C_max - C_opt); 1 when the cost is constant.
double approximation_ratio(double c_max, double c_opt, double c_obt);

/// Ratio of an energy against the extremes of the target diagonal, clamped
/// to [0, 1].
double approximation_ratio(const EncodedTarget& t, double energy);

}  // namespace rydanneal
