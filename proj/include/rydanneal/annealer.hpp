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

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rydanneal/encoding.hpp"
#include "rydanneal/schedule.hpp"

namespace rydanneal {

using QuantumState = Eigen::VectorXcd;

inline constexpr Index kMaxPropagationAtoms = 10;

/// Time-dependent controls driving the encoded Hamiltonian
///
///   H(t) = Ω(t)/2 Σ_j X_j - Δ_G(t) Σ_j Δ_j(T) n_j + Σ_{k<j} V_kj n_k n_j.
struct Drive {
  double duration = 0.0;
  std::function<double(double)> omega;
  std::function<double(double)> delta_global;
};

Drive make_drive(const Schedule& s);

/// Matrix-free H(t) over the 2^n excitation basis (bit j = n_j).
class RydbergOperator {
 public:
  explicit RydbergOperator(const EncodedTarget& t);

  Index atoms() const { return atoms_; }
  Index dim() const { return detuning_.size(); }

  /// -Σ Δ_j n_j, and Σ V n n, per basis state.
  const Eigen::VectorXd& detuning_part() const { return detuning_; }
  const Eigen::VectorXd& interaction_part() const { return interaction_; }
  /// Target diagonal, i.e. H at Δ_G = 1, Ω = 0.
  Eigen::VectorXd target() const { return detuning_ + interaction_; }

  /// out = (H - shift) ψ with H at the given control values.
  void apply(double omega, double delta_global, const Eigen::Ref<const Eigen::VectorXcd>& psi,
             Eigen::Ref<Eigen::VectorXcd> out, double shift = 0.0) const;
  /// Smallest and largest diagonal entry of H.
  std::pair<double, double> diagonal_range(double delta_global) const;
  /// Upper bound on ‖H‖₂ for the given controls.
  double norm_bound(double omega, double delta_global) const;

  Eigen::MatrixXcd dense(double omega, double delta_global) const;

 private:
  Index atoms_;
  Eigen::VectorXd detuning_;
  Eigen::VectorXd interaction_;
};

/// Dense H(t) for a schedule (small systems, tests and inspection).
Eigen::MatrixXcd hamiltonian_at(const EncodedTarget& t, const Schedule& s, double time);

/// ψ ← exp(-i τ H) ψ by a Taylor series on substeps with τ‖H - c‖ ≤ 4, where
/// c centres the diagonal; truncated once a term falls below tol relative to ‖ψ‖.
void expmv(const RydbergOperator& op, double omega, double delta_global, double tau,
           QuantumState& psi, double tol = 1e-15);

class DegenerateInitialState : public Error {
 public:
  using Error::Error;
};

/// Basis state minimizing the diagonal of H(0). Ties are broken toward
/// |g…g⟩ then |e…e⟩; any other tie throws DegenerateInitialState.
QuantumState initial_state(const EncodedTarget& t, const Schedule& s);
Bitstring initial_basis_state(const EncodedTarget& t, double delta_global_initial);

/// ⟨ψ|H_target|ψ⟩.
double expectation(const QuantumState& psi, const EncodedTarget& t);
double expectation(const QuantumState& psi, const Eigen::VectorXd& target_diag);

/// Σ_g |⟨g|ψ⟩|² over the given basis states.
double fidelity(const QuantumState& psi, std::span<const Bitstring> ground);

/// Basis states within tol of the minimal target energy.
std::vector<Bitstring> ground_states(const EncodedTarget& t, double rel_tol = 1e-9);

struct TrajectorySample {
  double t = 0.0;
  double omega = 0.0;
  double delta_global = 0.0;
  double energy = 0.0;
  double fidelity = 0.0;
  double norm = 1.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
};

struct PropagationConfig {
  /// Convergence target on |E_N(T) - E_2N(T)|, relative to energy_scale().
  double tolerance = 1e-8;
  int initial_steps = 128;
  int max_doublings = 10;
  /// When positive, skip step doubling and use exactly this many steps.
  int fixed_steps = 0;
  int sample_count = 201;
  bool record = true;
};

class PropagationError : public Error {
 public:
  using Error::Error;
};

struct PropagationResult {
  QuantumState state;
  Trajectory trajectory;
  int steps = 0;
  double final_energy = 0.0;
  double final_fidelity = 0.0;
  /// |E_N - E_2N| at acceptance (0 for fixed-step runs).
  double step_error = 0.0;
};

/// Integrates i dψ/dt = H(t)ψ over [0, T] from `initial`. Each step applies
/// a fourth-order commutator-free Magnus pair of exact exponentials.
PropagationResult propagate(const EncodedTarget& t, const Drive& drive, const QuantumState& initial,
                            const PropagationConfig& cfg = {},
                            std::span<const Bitstring> ground = {});

/// Schedule overload: starts from initial_state() and records the ground
/// set of the target (computed when `ground` is empty).
PropagationResult propagate(const EncodedTarget& t, const Schedule& s,
                            const PropagationConfig& cfg = {},
                            std::span<const Bitstring> ground = {});

}  // namespace rydanneal
