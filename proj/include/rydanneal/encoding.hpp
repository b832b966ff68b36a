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

#include <optional>
#include <string>
#include <vector>

#include "rydanneal/qubo.hpp"

namespace rydanneal {

/// Units: ħ = 1, frequencies and energies in rad/µs, time in µs, lengths in µm.
struct HardwareLimits {
  double delta_max = kTwoPi * 20.0;
  double omega_max = kTwoPi * 5.0;
  double r_min = 2.0;
  double r_far = 12.0;
  double t_max = 200.0;
  /// 139 GHz·µm⁶ expressed as 2π × 1.39e5 rad/µs·µm⁶.
  double c6 = kTwoPi * 1.39e5;
  double lifetime = 234.0;  // metadata only

  void validate() const;
  /// Largest interaction realizable at the minimum spacing, C6 / r_min⁶.
  double v_max() const;
  /// Unwanted interaction left at the "far" spacing, C6 / r_far⁶.
  double v_leak() const;
};

/// Rydberg-side image of an Ising model. The diagonal (Ω = 0) Hamiltonian
///
///   H(n) = -Σ_j Δ_j n_j + Σ_{j<k} V_jk n_j n_k
///
/// equals scale · E_ising(x) + offset on every excitation pattern n, where
/// x_j = n_j XOR gauge_j.
struct EncodedTarget {
  Eigen::MatrixXd interactions;  // V, symmetric, zero diagonal
  Eigen::VectorXd detunings;     // Δ_j(T)
  double offset = 0.0;
  double scale = 1.0;
  /// Atoms whose |g⟩/|e⟩ roles are swapped relative to x_j.
  Bitstring gauge = 0;

  Index size() const { return detunings.size(); }
  bool has_attractive() const { return (interactions.array() < 0).any(); }
};

class NotEncodable : public Error {
 public:
  NotEncodable(Index i, Index j, double coupling, const std::string& why);
  Index i() const { return i_; }
  Index j() const { return j_; }
  double coupling() const { return coupling_; }

 private:
  Index i_, j_;
  double coupling_;
};

class LimitsUnsatisfiable : public Error {
 public:
  LimitsUnsatisfiable(std::vector<std::string> binding, const std::string& what)
      : Error(what), binding_(std::move(binding)) {}
  const std::vector<std::string>& binding() const { return binding_; }

 private:
  std::vector<std::string> binding_;
};

struct EncodeOptions {
  /// Try a spin-reversal relabelling when some J_ij < 0.
  bool gauge_fix = true;
  /// Keep negative V (ideal-mode simulation only) instead of throwing.
  bool allow_attractive = false;
};

/// Spin-reversal mask g with J_ij (-1)^{g_i + g_j} ≥ 0 for every coupling, or
/// nothing when the sign pattern is frustrated.
std::optional<Bitstring> find_gauge(const IsingModel& m);

/// Flips s_j → -s_j for every j in mask (h_j and the couplings touching j
/// change sign). Energies are preserved under the matching relabelling.
IsingModel apply_gauge(const IsingModel& m, Bitstring mask);

/// V = 4J and Δ_j = 2h_j + ½ Σ_k V_jk (with x = n), after gauge fixing.
EncodedTarget encode(const IsingModel& m, const EncodeOptions& opts = {});

struct RescaleReport {
  double lambda = 1.0;
  std::string binding;  // which limit set λ, empty when λ = 1
};

/// Uniform rescale so max|Δ| ≤ delta_max, max V ≤ C6/r_min⁶, and every
/// nonzero |V| ≥ C6/r_far⁶. Throws LimitsUnsatisfiable naming the
/// conflicting constraints when no λ satisfies all three.
EncodedTarget rescale(const EncodedTarget& t, const HardwareLimits& limits,
                      RescaleReport* report = nullptr);

/// Diagonal energy of one excitation pattern.
double diagonal_energy(const EncodedTarget& t, Bitstring excitations);
/// Σ_j -Δ_j n_j and Σ V n n over the full 2^n basis (detuning and interaction parts).
Eigen::VectorXd detuning_diagonal(const EncodedTarget& t);
Eigen::VectorXd interaction_diagonal(const EncodedTarget& t);
/// Full target diagonal H_target over the 2^n basis.
Eigen::VectorXd target_diagonal(const EncodedTarget& t);

inline Bitstring to_excitations(const EncodedTarget& t, Bitstring x) { return x ^ t.gauge; }
inline Bitstring to_bitstring(const EncodedTarget& t, Bitstring n) { return n ^ t.gauge; }

/// Classical cost of a target energy: (H - offset) / scale.
inline double to_cost(const EncodedTarget& t, double energy) {
  return (energy - t.offset) / t.scale;
}

/// Largest |Δ_j| or |V_jk|; sets absolute tolerances.
double energy_scale(const EncodedTarget& t);

}  // namespace rydanneal
