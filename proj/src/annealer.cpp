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

#include "rydanneal/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rydanneal {

Drive make_drive(const Schedule& s) {
  return Drive{s.duration, [s](double t) { return omega_profile(s, t); },
               [s](double t) { return delta_profile(s, t); }};
}

RydbergOperator::RydbergOperator(const EncodedTarget& t)
    : atoms_(t.size()), detuning_(detuning_diagonal(t)), interaction_(interaction_diagonal(t)) {}

void RydbergOperator::apply(double omega, double delta_global,
                            const Eigen::Ref<const Eigen::VectorXcd>& psi,
                            Eigen::Ref<Eigen::VectorXcd> out, double shift) const {
  const Index d = dim();
  const double half = 0.5 * omega;
  for (Index b = 0; b < d; ++b) {
    Complex acc = (delta_global * detuning_(b) + interaction_(b) - shift) * psi(b);
    if (half != 0.0) {
      Complex flips = 0.0;
      for (Index j = 0; j < atoms_; ++j) flips += psi(b ^ (Index{1} << j));
      acc += half * flips;
    }
    out(b) = acc;
  }
}

double RydbergOperator::norm_bound(double omega, double delta_global) const {
  const double diag = (delta_global * detuning_ + interaction_).cwiseAbs().maxCoeff();
  return diag + 0.5 * std::abs(omega) * static_cast<double>(atoms_);
}

std::pair<double, double> RydbergOperator::diagonal_range(double delta_global) const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Index b = 0; b < dim(); ++b) {
    const double e = delta_global * detuning_(b) + interaction_(b);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return {lo, hi};
}

Eigen::MatrixXcd RydbergOperator::dense(double omega, double delta_global) const {
  const Index d = dim();
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
  for (Index b = 0; b < d; ++b) {
    H(b, b) = delta_global * detuning_(b) + interaction_(b);
    for (Index j = 0; j < atoms_; ++j) H(b ^ (Index{1} << j), b) += 0.5 * omega;
  }
  return H;
}

Eigen::MatrixXcd hamiltonian_at(const EncodedTarget& t, const Schedule& s, double time) {
  return RydbergOperator(t).dense(omega_profile(s, time), delta_profile(s, time));
}

namespace {

// Scratch vectors reused across the exponentials of one propagation.
struct TaylorWorkspace {
  QuantumState term, next, acc;
};

// ψ ← exp(-iτH)ψ by a truncated Taylor series of exp(-iτ(H - c)), with c the
// diagonal midpoint restored as a phase. Substeps keep θ = τ‖H - c‖ ≤ 4; past
// k ≥ 2θ consecutive terms at least halve, so the tail is below twice the last.
void taylor_expmv(const RydbergOperator& op, double omega, double dg, double tau,
                  QuantumState& psi, double tol, TaylorWorkspace& ws) {
  constexpr double kTheta = 4.0;
  constexpr int kMaxTerms = 60;
  const auto [lo, hi] = op.diagonal_range(dg);
  const double shift = 0.5 * (lo + hi);
  const double bound =
      (0.5 * (hi - lo) + 0.5 * std::abs(omega) * static_cast<double>(op.atoms())) * std::abs(tau);
  const int pieces = std::max(1, static_cast<int>(std::ceil(bound / kTheta)));
  const double dt = tau / pieces;
  const double theta = bound / pieces;
  const Index dim = op.dim();
  ws.term.resize(dim);
  ws.next.resize(dim);
  ws.acc.resize(dim);
  for (int p = 0; p < pieces; ++p) {
    const double scale = psi.norm();
    ws.term = psi;
    ws.acc = psi;
    for (int k = 1;; ++k) {
      op.apply(omega, dg, ws.term, ws.next, shift);
      ws.term = Complex(0.0, -dt / k) * ws.next;
      ws.acc += ws.term;
      if (k >= 2 * theta && ws.term.norm() <= 0.5 * tol * scale) break;
      if (k == kMaxTerms) throw PropagationError("Taylor exponential failed to converge");
    }
    psi.swap(ws.acc);
  }
  psi *= std::polar(1.0, -shift * tau);
}

}  // namespace

void expmv(const RydbergOperator& op, double omega, double delta_global, double tau,
           QuantumState& psi, double tol) {
  TaylorWorkspace ws;
  taylor_expmv(op, omega, delta_global, tau, psi, tol, ws);
}

Bitstring initial_basis_state(const EncodedTarget& t, double dg0) {
  const Eigen::VectorXd diag = dg0 * detuning_diagonal(t) + interaction_diagonal(t);
  const double emin = diag.minCoeff();
  const double tol = 1e-9 * std::max(1.0, std::abs(dg0)) * energy_scale(t);
  std::vector<Bitstring> minimizers;
  for (Index b = 0; b < diag.size(); ++b)
    if (diag(b) - emin <= tol) minimizers.push_back(static_cast<Bitstring>(b));
  if (minimizers.size() == 1) return minimizers.front();
  const Bitstring all_excited = (Bitstring{1} << t.size()) - 1;
  for (Bitstring candidate : {Bitstring{0}, all_excited})
    if (std::find(minimizers.begin(), minimizers.end(), candidate) != minimizers.end())
      return candidate;
  throw DegenerateInitialState(
      "H(0) has " + std::to_string(minimizers.size()) +
      " degenerate ground states and none is a product state |g...g> or |e...e>; choose a "
      "different initial detuning delta_G(0)");
}

QuantumState initial_state(const EncodedTarget& t, const Schedule& s) {
  const Bitstring b = initial_basis_state(t, s.delta_initial);
  QuantumState psi = QuantumState::Zero(Index{1} << t.size());
  psi(static_cast<Index>(b)) = 1.0;
  return psi;
}

double expectation(const QuantumState& psi, const Eigen::VectorXd& target_diag) {
  if (psi.size() != target_diag.size()) throw InvalidArgument("state dimension mismatch");
  const double norm2 = psi.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-6)
    throw InvalidArgument("state is not normalized (|psi|^2 = " + std::to_string(norm2) + ")");
  return psi.cwiseAbs2().dot(target_diag);
}

double expectation(const QuantumState& psi, const EncodedTarget& t) {
  return expectation(psi, target_diagonal(t));
}

double fidelity(const QuantumState& psi, std::span<const Bitstring> ground) {
  double f = 0.0;
  for (Bitstring g : ground) {
    if (static_cast<Index>(g) >= psi.size()) throw InvalidArgument("ground state out of range");
    f += std::norm(psi(static_cast<Index>(g)));
  }
  return f;
}

std::vector<Bitstring> ground_states(const EncodedTarget& t, double rel_tol) {
  const Eigen::VectorXd diag = target_diagonal(t);
  const double emin = diag.minCoeff();
  std::vector<Bitstring> g;
  for (Index b = 0; b < diag.size(); ++b)
    if (diag(b) - emin <= rel_tol * energy_scale(t)) g.push_back(static_cast<Bitstring>(b));
  return g;
}

namespace {

// Commutator-free fourth-order Magnus coefficients (Gauss nodes).
const double kSqrt3 = std::sqrt(3.0);
const double kNode1 = 0.5 - kSqrt3 / 6.0;
const double kNode2 = 0.5 + kSqrt3 / 6.0;
const double kWeightA = 0.25 + kSqrt3 / 6.0;
const double kWeightB = 0.25 - kSqrt3 / 6.0;

struct Integration {
  QuantumState state;
  Trajectory trajectory;
  int steps = 0;
};

Integration integrate(const RydbergOperator& op, const Eigen::VectorXd& target_diag,
                      const Drive& drive, const QuantumState& initial, int steps, int samples,
                      std::span<const Bitstring> ground) {
  const int intervals = samples - 1;
  const int per_interval = std::max(1, (steps + intervals - 1) / intervals);
  const double T = drive.duration;
  const double h = T / (static_cast<double>(per_interval) * intervals);

  Integration out;
  TaylorWorkspace ws;
  out.state = initial;
  out.steps = per_interval * intervals;
  auto record = [&](double t) {
    TrajectorySample s;
    s.t = t;
    s.omega = drive.omega(t);
    s.delta_global = drive.delta_global(t);
    s.norm = out.state.norm();
    s.energy = out.state.cwiseAbs2().dot(target_diag) / (s.norm * s.norm);
    s.fidelity = fidelity(out.state, ground);
    out.trajectory.samples.push_back(s);
  };
  record(0.0);
  long step = 0;
  for (int interval = 0; interval < intervals; ++interval) {
    for (int k = 0; k < per_interval; ++k, ++step) {
      const double t0 = static_cast<double>(step) * h;
      const double o1 = drive.omega(t0 + kNode1 * h), o2 = drive.omega(t0 + kNode2 * h);
      const double d1 = drive.delta_global(t0 + kNode1 * h);
      const double d2 = drive.delta_global(t0 + kNode2 * h);
      // exp(-ih(a H1 + b H2)) then exp(-ih(b H1 + a H2)); a + b = 1/2.
      taylor_expmv(op, 2 * (kWeightA * o1 + kWeightB * o2), 2 * (kWeightA * d1 + kWeightB * d2),
            0.5 * h, out.state, 1e-15, ws);
      taylor_expmv(op, 2 * (kWeightB * o1 + kWeightA * o2), 2 * (kWeightB * d1 + kWeightA * d2),
            0.5 * h, out.state, 1e-15, ws);
    }
    record(interval + 1 == intervals ? T : static_cast<double>(step) * h);
  }
  return out;
}

}  // namespace

PropagationResult propagate(const EncodedTarget& t, const Drive& drive, const QuantumState& initial,
                            const PropagationConfig& cfg, std::span<const Bitstring> ground) {
  if (t.size() > kMaxPropagationAtoms)
    throw PropagationError("propagation supports at most " + std::to_string(kMaxPropagationAtoms) +
                           " atoms, got " + std::to_string(t.size()));
  if (initial.size() != (Index{1} << t.size()))
    throw InvalidArgument("initial state dimension does not match the target");
  if (!(drive.duration > 0)) throw InvalidArgument("drive duration must be positive");

  const RydbergOperator op(t);
  const Eigen::VectorXd target_diag = op.target();
  std::vector<Bitstring> ground_set(ground.begin(), ground.end());
  if (ground_set.empty()) ground_set = ground_states(t);
  const int samples = cfg.record ? std::max(2, cfg.sample_count) : 2;

  auto finish = [&](Integration&& run, double err) {
    PropagationResult r;
    r.state = std::move(run.state);
    r.trajectory = std::move(run.trajectory);
    r.steps = run.steps;
    r.final_energy = r.trajectory.samples.back().energy;
    r.final_fidelity = r.trajectory.samples.back().fidelity;
    r.step_error = err;
    return r;
  };

  if (cfg.fixed_steps > 0)
    return finish(integrate(op, target_diag, drive, initial, cfg.fixed_steps, samples, ground_set),
                  0.0);

  const double tol = cfg.tolerance * energy_scale(t);
  int steps = std::max(1, cfg.initial_steps);
  Integration coarse = integrate(op, target_diag, drive, initial, steps, samples, ground_set);
  for (int d = 0; d < cfg.max_doublings; ++d) {
    Integration fine = integrate(op, target_diag, drive, initial, 2 * coarse.steps, samples, ground_set);
    const double err = std::abs(fine.trajectory.samples.back().energy -
                                coarse.trajectory.samples.back().energy);
    if (err < tol) return finish(std::move(fine), err);
    coarse = std::move(fine);
  }
  throw PropagationError("step doubling did not reach the energy tolerance after " +
                         std::to_string(cfg.max_doublings) + " doublings");
}

PropagationResult propagate(const EncodedTarget& t, const Schedule& s,
                            const PropagationConfig& cfg, std::span<const Bitstring> ground) {
  s.validate();
  PropagationConfig c = cfg;
  c.sample_count = s.sample_count;
  return propagate(t, make_drive(s), initial_state(t, s), c, ground);
}

}  // namespace rydanneal
