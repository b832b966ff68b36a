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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "rydanneal/annealer.hpp"
#include "rydanneal/encoding.hpp"
#include "rydanneal/hardness.hpp"
#include "rydanneal/layout.hpp"
#include "rydanneal/optimizer.hpp"
#include "rydanneal/problems.hpp"

using namespace rydanneal;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

EncodedTarget ideal_target(const QuboModel& q) {
  return rescale(encode(qubo_to_ising(q), {.gauge_fix = true, .allow_attractive = true}),
                 HardwareLimits{});
}

// 1. Hardness formula on the two spectral examples.
void hardness_closure(Outcome& o) {
  const double a = hardness_from_spectral("a", -0.15, 0.30, 4, {{0.30, 4}}).hp;
  const double b = hardness_from_spectral("b", 0.30, 0.60, 6, {{0.60, 2}}).hp;
  o.detail << "HP = " << a << " and " << b << " ";
  o.require(std::abs(a - 27.25) <= 0.01 * 27.25, "first example within 1%");
  o.require(std::abs(b - 1.13) <= 0.01 * 1.13, "second example within 1%");
}

// 2. Ground multiplicities of the reference instances.
void ground_multiplicities(Outcome& o) {
  const std::vector<std::pair<std::string, Index>> targets{
      {"two_sat", 4}, {"xor_sat", 6}, {"mixed", 2}, {"set_packing", 2}};
  for (const auto& [name, d] : targets) {
    const QuboModel q = paper_instance(name).model;
    const auto vals = oracle::all_values(q.size(), [&](const auto& x) { return oracle::qubo_value(q, x); });
    const Index brute = oracle::grouped(vals).front().second;
    const HardnessReport r = hardness_report(name, q, EnergyConvention::Spin, 0.0);
    o.detail << name << "=" << r.d_opt << " ";
    o.require(r.d_opt == d && brute == d, name + " D_opt");
  }
  for (const std::string name : {"qap", "clustering", "protein"}) {
    const HardnessReport r = hardness_report(name, paper_instance(name).model, EnergyConvention::Spin, 0.0);
    o.detail << name << "=" << r.d_opt << "(not a target) ";
    o.require(!r.failed, name + " row computed");
  }
}

// 3. Classical objective values.
void objective_values(Outcome& o) {
  const auto clustering = paper_instance("clustering");
  const auto& W = std::get<ClusteringInstance>(clustering.instance).weights;
  double best_cut = 0;
  for (Bitstring b = 0; b < 32; ++b) {
    double cut = 0;
    for (Index i = 0; i < 5; ++i)
      for (Index j = i + 1; j < 5; ++j)
        if (bit(b, i) != bit(b, j)) cut += W(i, j);
    best_cut = std::max(best_cut, cut);
  }
  const double model_cut = -enumerate_spectrum(clustering.model).e_min();
  o.detail << "max-cut " << best_cut << "/" << model_cut << " ";
  o.require(best_cut == 11.0 && model_cut == 11.0, "max-cut 11");

  const auto qap = paper_instance("qap");
  const auto& inst = std::get<QapInstance>(qap.instance);
  for (const std::vector<Index>& perm : {std::vector<Index>{0, 1}, std::vector<Index>{1, 0}}) {
    double c = 0;
    for (Index i = 0; i < 2; ++i)
      for (Index k = 0; k < 2; ++k) c += inst.flow(i, k) * inst.distance(perm[i], perm[k]);
    Bitstring x = 0;
    for (Index i = 0; i < 2; ++i) x |= Bitstring{1} << qap_index(i, perm[i], 2);
    o.detail << "qap(" << perm[0] << perm[1] << ")=" << c << " ";
    o.require(c == 12.0 && std::abs(qap.model.energy(x) - 12.0) < 1e-12, "QAP permutation cost 12");
  }

  const QuboModel x = paper_instance("xor_sat").model;
  const auto vals = oracle::all_values(3, [&](const auto& v) { return oracle::qubo_value(x, v); });
  o.detail << "xor min " << vals.front();
  o.require(vals.front() == 1.0, "XOR minimum 1");
}

// 4. Encoding exactness and rescale invariance.
void encoding_exactness(Outcome& o) {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  bool argmin_ok = true;
  HardwareLimits tight;
  tight.delta_max = 0.5;
  tight.r_far = 60.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 8;
    const IsingModel m = oracle::random_antiferro(n, rng);
    const EncodedTarget t = encode(m);
    const EncodedTarget r = rescale(t, tight);
    double size = 1.0, err = 0.0;
    Bitstring best_e = 0, best_h = 0;
    double min_e = 1e300, min_h = 1e300;
    for (Bitstring b = 0; b < (Bitstring{1} << n); ++b) {
      const double e = oracle::ising_value(m, oracle::bits_of(b, n));
      const double h = oracle::rydberg_dense(t, 0.0, 1.0)(b ^ t.gauge, b ^ t.gauge).real();
      const double hr = oracle::rydberg_dense(r, 0.0, 1.0)(b ^ r.gauge, b ^ r.gauge).real();
      size = std::max(size, std::abs(e + t.offset));
      err = std::max(err, std::abs(h - (e + t.offset)));
      if (e < min_e) min_e = e, best_e = b;
      if (hr < min_h) min_h = hr, best_h = b;
    }
    worst = std::max(worst, err / size);
    argmin_ok = argmin_ok && best_e == best_h;
  }
  o.detail << "max relative error " << worst << " over 100 models";
  o.require(worst <= 1e-10, "diagonal matches scaled energies");
  o.require(argmin_ok, "argmin preserved under rescale");
}

// 5. Propagator physics.
void propagator_physics(Outcome& o) {
  EncodedTarget one;
  one.interactions = Eigen::MatrixXd::Zero(1, 1);
  one.detunings = Eigen::VectorXd::Ones(1);
  const double omega = 2.3;
  Drive rabi{5.0, [=](double) { return omega; }, [](double) { return 0.0; }};
  QuantumState g = QuantumState::Zero(2);
  g(0) = 1.0;
  PropagationConfig cfg;
  cfg.sample_count = 101;
  const std::vector<Bitstring> excited{1};
  double rabi_err = 0.0;
  for (const auto& s : propagate(one, rabi, g, cfg, excited).trajectory.samples)
    rabi_err = std::max(rabi_err, std::abs(s.fidelity - std::pow(std::sin(omega * s.t / 2), 2)));
  o.detail << "Rabi error " << rabi_err << ", ";
  o.require(rabi_err <= 1e-6, "Rabi closed form");

  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 0.5);
  double norm_err = 0.0;
  for (const auto& name : paper_instance_names()) {
    const EncodedTarget t = ideal_target(paper_instance(name).model);
    Schedule s;
    for (Index k = 0; k < 6; ++k) {
      s.delta_coefficients(k) = gauss(rng);
      s.omega_coefficients(k) = 4.0 * gauss(rng);
    }
    for (const auto& smp : propagate(t, s).trajectory.samples)
      norm_err = std::max(norm_err, std::abs(smp.norm - 1.0));
  }
  o.detail << "norm drift " << norm_err << ", ";
  o.require(norm_err <= 1e-9, "norm preserved");

  const EncodedTarget t = ideal_target(paper_instance("clustering").model);
  QuantumState psi(32);
  for (Index k = 0; k < 32; ++k) psi(k) = Complex(gauss(rng), gauss(rng));
  psi /= psi.norm();
  Schedule flat;
  flat.delta_coefficients(0) = 0.4;
  const PropagationResult r = propagate(t, make_drive(flat), psi);
  const double pop_err = (r.state.cwiseAbs2() - psi.cwiseAbs2()).cwiseAbs().maxCoeff();
  o.detail << "diagonal population drift " << pop_err << ", ";
  o.require(pop_err <= 1e-10, "populations fixed without drive");

  EncodedTarget pair;
  pair.interactions = (Eigen::MatrixXd(2, 2) << 0, 2, 2, 0).finished();
  pair.detunings = Eigen::Vector2d(1.0, 1.0);
  Schedule slow;
  slow.duration = 100.0;
  slow.delta_coefficients = Eigen::VectorXd::Zero(1);
  slow.omega_coefficients = Eigen::VectorXd::Constant(1, 1.0);
  const double F = propagate(pair, slow).final_fidelity;
  o.detail << "adiabatic F " << F;
  o.require(F > 0.99, "adiabatic xor pair");
}

struct InstanceThreshold {
  std::string name;
  double threshold;
};

// 6. Optimized approximation ratios.
void approximation_ratios(Outcome& o) {
  const std::vector<InstanceThreshold> list{{"two_sat", 0.99},    {"xor_sat", 0.99}, {"set_packing", 0.99},
                                            {"clustering", 0.99}, {"mixed", 0.97},   {"qap", 0.97},
                                            {"protein", 0.97}};
  for (const auto& [name, threshold] : list) {
    const auto t0 = std::chrono::steady_clock::now();
    const QuboModel q = paper_instance(name).model;
    const EncodedTarget t = ideal_target(q);
    const OptimizationResult res = run_hybrid(t, StagePlan::default_plan(), 1, {});
    const auto vals = oracle::all_values(q.size(), [&](const auto& x) { return oracle::qubo_value(q, x); });
    double c = 0.0;
    const QuantumState& psi = res.final_run.state;
    for (Index b = 0; b < psi.size(); ++b)
      c += std::norm(psi(b)) * oracle::qubo_value(q, oracle::bits_of(static_cast<Bitstring>(b) ^ t.gauge, q.size()));
    c /= psi.squaredNorm();
    const double R = (vals.back() - c) / (vals.back() - vals.front());
    const double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s R=%.5f F=%.3f %.0fs; ", name.c_str(), R, res.fidelity, secs);
    o.detail << buf;
    o.require(R >= threshold, name + " R >= " + std::to_string(threshold));
    o.require(secs <= 300.0, name + " within five minutes");
  }
}

// 7. Finite-difference gradients against a five-point stencil.
void gradient_check(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& name : paper_instance_names()) {
    const EncodedTarget t = ideal_target(paper_instance(name).model);
    const double escale = energy_scale(t);
    HybridConfig hc;
    const Index nd = hc.schedule.delta_coefficients.size(), np = hc.schedule.parameter_count();
    // The optimizer's own coordinates.
    const Eigen::VectorXd unit = parameter_units(t, hc);
    // Same step count the optimizer would calibrate for its default start.
    Eigen::VectorXd start = Eigen::VectorXd::Zero(np);
    start(nd) = hc.initial_omega_fraction * hc.omega_max;
    PropagationConfig calib;
    calib.tolerance = hc.calibration_tolerance;
    calib.record = false;
    PropagationConfig fixed;
    fixed.fixed_steps = propagate(t, hc.schedule.with_parameters(start), calib).steps;
    fixed.record = false;
    const Objective f = [&](const Eigen::VectorXd& z) {
      return propagate(t, hc.schedule.with_parameters(z.cwiseProduct(unit)), fixed).final_energy / escale;
    };
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    const Eigen::VectorXd z0 = start.cwiseQuotient(unit);
    for (int v = 0; v < 20; ++v) {
      Eigen::VectorXd z = z0;
      for (Index k = 0; k < np; ++k) z(k) += g(rng);
      const Eigen::VectorXd a = gradient(f, z);
      Eigen::VectorXd b(np);
      const double h = 1e-3;
      for (Index k = 0; k < np; ++k) {
        Eigen::VectorXd p = z;
        auto at = [&](double d) {
          p(k) = z(k) + d;
          return f(p);
        };
        b(k) = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
      }
      worst = std::max(worst, (a - b).norm() / std::max(b.norm(), 1e-12));
    }
  }
  const double secs = seconds_since(t0);
  o.detail << "worst relative difference " << worst << " over 140 vectors in " << secs << "s";
  o.require(worst <= 1e-3, "gradient within 1e-3");
  o.require(secs <= 120.0, "gradient check under two minutes");
}

// 8. Layout round trip on realizable geometries, leakage on a star.
void layout_round_trip(Outcome& o) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> step(5.0, 8.0), turn(-0.7, 0.7), coord(0.0, 9.0);
  double worst = 0.0;
  auto check = [&](const Eigen::MatrixXd& pos) {
    AtomLayout l;
    l.positions = pos;
    EncodedTarget t;
    t.interactions = layout_interactions(l);
    t.detunings = Eigen::VectorXd::Ones(pos.rows());
    const EmbedResult r = embed_layout(t, 2, 1);
    const Eigen::MatrixXd back = layout_interactions(r.layout);
    worst = std::max(worst, (back - t.interactions).cwiseAbs().maxCoeff() / t.interactions.maxCoeff());
  };
  for (Index n = 2; n <= 6; ++n) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, 2);
    double heading = 0.0;
    for (Index i = 1; i < n; ++i) {
      heading += turn(rng);
      const double s = step(rng);
      p(i, 0) = p(i - 1, 0) + s * std::cos(heading);
      p(i, 1) = p(i - 1, 1) + s * std::sin(heading);
    }
    check(p);
  }
  for (int k = 0; k < 5; ++k) {
    Eigen::MatrixXd p(3, 2);
    do {
      for (Index c = 0; c < 6; ++c) p(c) = coord(rng);
    } while ((p.row(0) - p.row(1)).norm() < 4 || (p.row(1) - p.row(2)).norm() < 4 ||
             (p.row(0) - p.row(2)).norm() < 4);
    check(p);
  }
  EncodedTarget star;
  star.interactions = Eigen::MatrixXd::Zero(5, 5);
  for (Index j = 1; j < 5; ++j) star.interactions(0, j) = star.interactions(j, 0) = 10.0;
  star.detunings = Eigen::VectorXd::Ones(5);
  const EmbedResult s = embed_layout(star, 2, 1);
  o.detail << "chain/triangle residual " << worst << ", star leakage " << s.leakage;
  o.require(worst <= 1e-6, "round trip within 1e-6");
  o.require(s.leakage > 0.0, "star leakage reported");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"hardness formula closure", hardness_closure},
      {"ground-state multiplicities", ground_multiplicities},
      {"classical objective values", objective_values},
      {"encoding exactness", encoding_exactness},
      {"propagator physics", propagator_physics},
      {"optimized approximation ratios", approximation_ratios},
      {"gradient accuracy", gradient_check},
      {"layout round trip", layout_round_trip},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %zu (%s): %s  %s\n", k + 1, criteria[k].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
