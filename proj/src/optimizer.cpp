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

#include "rydanneal/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace rydanneal {

std::string to_string(StageKind k) { return k == StageKind::QuasiNewton ? "quasi_newton" : "simplex"; }

StageKind stage_kind_from_string(const std::string& s) {
  if (s == "quasi_newton" || s == "bfgs" || s == "gradient") return StageKind::QuasiNewton;
  if (s == "simplex" || s == "nelder_mead") return StageKind::Simplex;
  throw InvalidArgument("unknown stage kind '" + s + "' (expected quasi_newton or simplex)");
}

StagePlan StagePlan::default_plan() {
  return StagePlan{{{StageKind::QuasiNewton, 200, 1e-9},
                    {StageKind::Simplex, 400, 1e-9},
                    {StageKind::QuasiNewton, 200, 1e-9}}};
}

void StagePlan::validate() const {
  if (stages.empty()) throw InvalidArgument("stage plan needs at least one stage");
  for (const auto& s : stages) {
    if (s.max_evals < 1) throw InvalidArgument("stage max_evals must be positive");
    if (!(s.tolerance > 0)) throw InvalidArgument("stage tolerance must be positive");
  }
}

int StagePlan::total_budget() const {
  return std::accumulate(stages.begin(), stages.end(), 0,
                         [](int a, const Stage& s) { return a + s.max_evals; });
}

Eigen::VectorXd gradient(const Objective& f, const Eigen::VectorXd& p) {
  Eigen::VectorXd g(p.size());
  Eigen::VectorXd probe = p;
  for (Index i = 0; i < p.size(); ++i) {
    const double h = 1e-4 * (1.0 + std::abs(p(i)));
    probe(i) = p(i) + h;
    const double up = f(probe);
    probe(i) = p(i) - h;
    const double down = f(probe);
    probe(i) = p(i);
    if (!std::isfinite(up) || !std::isfinite(down))
      throw ObjectiveError("objective is not finite near parameter " + std::to_string(i));
    g(i) = (up - down) / (2 * h);
  }
  return g;
}

namespace {

struct BudgetStop {};

// Counts calls against a budget and remembers the best point seen.
class Counter {
 public:
  Counter(const Objective& f, int budget) : f_(f), budget_(budget) {}

  double operator()(const Eigen::VectorXd& x) {
    if (count_ >= budget_) throw BudgetStop{};
    ++count_;
    const double v = f_(x);
    if (!std::isfinite(v)) throw ObjectiveError("objective returned a non-finite value");
    if (count_ == 1 || v < best_value_) {
      best_value_ = v;
      best_x_ = x;
    }
    return v;
  }

  Objective fn() {
    return [this](const Eigen::VectorXd& x) { return (*this)(x); };
  }

  MinimizeResult result(bool converged, const Eigen::VectorXd& fallback) const {
    MinimizeResult r;
    r.x = count_ > 0 ? best_x_ : fallback;
    r.value = best_value_;
    r.evaluations = count_;
    r.converged = converged;
    return r;
  }

 private:
  const Objective& f_;
  int budget_;
  int count_ = 0;
  double best_value_ = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x_;
};

}  // namespace

MinimizeResult minimize_quasi_newton(const Objective& f, const Eigen::VectorXd& x0, int max_evals,
                                     double tol) {
  Counter counter(f, max_evals);
  const Objective cf = counter.fn();
  const Index n = x0.size();
  bool converged = false;
  try {
    Eigen::VectorXd x = x0;
    double fx = counter(x);
    Eigen::VectorXd g = gradient(cf, x);
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
    bool fresh = true;
    int stall = 0;
    while (true) {
      if (g.norm() <= tol) {
        converged = true;
        break;
      }
      Eigen::VectorXd d = -H * g;
      double slope = g.dot(d);
      if (!(slope < 0)) {
        H.setIdentity();
        fresh = true;
        d = -g;
        slope = -g.squaredNorm();
      }
      double alpha = fresh ? std::min(1.0, 0.5 / d.norm()) : 1.0;
      Eigen::VectorXd xn;
      double fn = fx;
      bool found = false;
      for (int tries = 0; tries < 30; ++tries) {
        xn = x + alpha * d;
        fn = counter(xn);
        if (fn <= fx + 1e-4 * alpha * slope) {
          found = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!found) {
        if (fresh) {
          converged = true;  // no descent even along -g
          break;
        }
        H.setIdentity();
        fresh = true;
        continue;
      }
      const Eigen::VectorXd gn = gradient(cf, xn);
      const Eigen::VectorXd s = xn - x, y = gn - g;
      const double sy = s.dot(y);
      if (sy > 1e-12 * s.norm() * y.norm()) {
        if (fresh) H *= sy / y.squaredNorm();
        const double rho = 1.0 / sy;
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
        H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
            rho * s * s.transpose();
        fresh = false;
      }
      const double decrease = fx - fn;
      x = xn;
      fx = fn;
      g = gn;
      stall = decrease < tol * (1.0 + std::abs(fx)) ? stall + 1 : 0;
      if (stall >= 2) {
        converged = true;
        break;
      }
    }
  } catch (const BudgetStop&) {
  }
  return counter.result(converged, x0);
}

MinimizeResult minimize_simplex(const Objective& f, const Eigen::VectorXd& x0, int max_evals,
                                double tol, double initial_step) {
  Counter counter(f, max_evals);
  const Index n = x0.size();
  bool converged = false;
  try {
    Eigen::VectorXd start = x0;
    double previous_best = std::numeric_limits<double>::infinity();
    while (true) {
      std::vector<Eigen::VectorXd> v(n + 1, start);
      std::vector<double> fv(n + 1);
      for (Index i = 0; i < n; ++i) v[i + 1](i) += initial_step;
      for (Index i = 0; i <= n; ++i) fv[i] = counter(v[i]);
      std::vector<Index> order(n + 1);
      bool local = false;
      while (!local) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return fv[a] < fv[b]; });
        const Index best = order.front(), worst = order.back(), second = order[n - 1];
        double diameter = 0.0;
        for (Index i = 0; i <= n; ++i) diameter = std::max(diameter, (v[i] - v[best]).norm());
        if (fv[worst] - fv[best] <= tol * (1.0 + std::abs(fv[best])) || diameter < 1e-10) {
          local = true;
          break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (Index i = 0; i <= n; ++i)
          if (i != worst) centroid += v[i];
        centroid /= static_cast<double>(n);
        const Eigen::VectorXd xr = centroid + (centroid - v[worst]);
        const double fr = counter(xr);
        if (fr < fv[best]) {
          const Eigen::VectorXd xe = centroid + 2.0 * (centroid - v[worst]);
          const double fe = counter(xe);
          if (fe < fr) {
            v[worst] = xe;
            fv[worst] = fe;
          } else {
            v[worst] = xr;
            fv[worst] = fr;
          }
        } else if (fr < fv[second]) {
          v[worst] = xr;
          fv[worst] = fr;
        } else {
          const bool outside = fr < fv[worst];
          const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                             : Eigen::VectorXd(centroid + 0.5 * (v[worst] - centroid));
          const double fc = counter(xc);
          if (fc < (outside ? fr : fv[worst])) {
            v[worst] = xc;
            fv[worst] = fc;
          } else {
            for (Index i = 0; i <= n; ++i) {
              if (i == best) continue;
              v[i] = v[best] + 0.5 * (v[i] - v[best]);
              fv[i] = counter(v[i]);
            }
          }
        }
      }
      const Index best = *std::min_element(order.begin(), order.end(),
                                           [&](Index a, Index b) { return fv[a] < fv[b]; });
      // Restart around the best vertex until a restart stops paying off.
      if (previous_best - fv[best] <= tol * (1.0 + std::abs(fv[best]))) {
        converged = true;
        break;
      }
      previous_best = fv[best];
      start = v[best];
    }
  } catch (const BudgetStop&) {
  }
  return counter.result(converged, x0);
}

double objective_energy(const EncodedTarget& t, const Schedule& s, const PropagationConfig& cfg) {
  PropagationConfig c = cfg;
  c.record = false;
  return propagate(t, s, c).final_energy;
}

double approximation_ratio(double c_max, double c_opt, double c_obt) {
  if (c_max < c_opt) throw InvalidArgument("C_max must not be below C_opt");
  if (c_max == c_opt) return 1.0;
  return (c_max - c_obt) / (c_max - c_opt);
}

double approximation_ratio(const EncodedTarget& t, double energy) {
  const Eigen::VectorXd diag = target_diagonal(t);
  const double hi = diag.maxCoeff(), lo = diag.minCoeff();
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) return 1.0;
  return std::clamp(approximation_ratio(hi, lo, energy), 0.0, 1.0);
}

Eigen::VectorXd parameter_units(const EncodedTarget& t, const HybridConfig& cfg) {
  if (!(cfg.phase_unit > 0)) throw InvalidArgument("phase_unit must be positive");
  const Schedule& s = cfg.schedule;
  const Index nd = s.delta_coefficients.size();
  Eigen::VectorXd unit(s.parameter_count());
  // Equal phase sensitivity per unit keeps finite-difference steps meaningful
  // for large energy scales.
  unit.head(nd).setConstant(cfg.phase_unit / (energy_scale(t) * s.duration));
  unit.tail(unit.size() - nd).setConstant(cfg.phase_unit / s.duration);
  return unit;
}

OptimizationResult run_hybrid(const EncodedTarget& t, const StagePlan& plan, std::uint64_t seed,
                              const HybridConfig& cfg) {
  plan.validate();
  if (!(cfg.omega_max > 0)) throw InvalidArgument("omega_max must be positive");
  Schedule base = cfg.schedule;
  base.omega_max = std::min(base.omega_max, cfg.omega_max);
  base.validate();

  const Index nd = base.delta_coefficients.size();
  const Index np = base.parameter_count();
  const double escale = energy_scale(t);
  const Eigen::VectorXd unit = parameter_units(t, cfg);

  Eigen::VectorXd z0;
  if (cfg.initial_parameters) {
    if (cfg.initial_parameters->size() != np)
      throw InvalidArgument("initial parameters have the wrong length");
    z0 = cfg.initial_parameters->cwiseQuotient(unit);
  } else {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(np);
    if (np > nd) p(nd) = cfg.initial_omega_fraction * cfg.omega_max;
    z0 = p.cwiseQuotient(unit);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (Index i = 0; i < np; ++i) z0(i) += cfg.jitter * noise(rng);
  }

  const std::vector<Bitstring> ground = ground_states(t);
  auto schedule_of = [&](const Eigen::VectorXd& z) { return base.with_parameters(z.cwiseProduct(unit)); };

  PropagationConfig calib = cfg.propagation;
  calib.tolerance = cfg.calibration_tolerance;
  calib.record = false;
  calib.fixed_steps = 0;
  const int steps = propagate(t, schedule_of(z0), calib, ground).steps;

  PropagationConfig fixed = cfg.propagation;
  fixed.fixed_steps = steps;
  fixed.record = false;

  OptimizationResult res;
  res.seed = seed;
  res.objective_steps = steps;
  int stage_index = 0;
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_z = z0;
  const Objective energy = [&](const Eigen::VectorXd& z) {
    const double e = propagate(t, schedule_of(z), fixed, ground).final_energy;
    ++res.evaluations;
    if (e < best) {
      best = e;
      best_z = z;
    }
    res.history.push_back({stage_index, res.evaluations, e, best});
    return e / escale;
  };

  for (const Stage& stage : plan.stages) {
    const Eigen::VectorXd start = best_z;
    const MinimizeResult m = stage.kind == StageKind::QuasiNewton
                                 ? minimize_quasi_newton(energy, start, stage.max_evals, stage.tolerance)
                                 : minimize_simplex(energy, start, stage.max_evals, stage.tolerance);
    if (!m.converged) res.budget_exhausted = true;
    ++stage_index;
  }

  res.parameters = best_z.cwiseProduct(unit);
  res.schedule = base.with_parameters(res.parameters);
  res.final_run = propagate(t, res.schedule, cfg.propagation, ground);
  res.energy = res.final_run.final_energy;
  res.fidelity = res.final_run.final_fidelity;
  res.ratio = approximation_ratio(t, res.energy);
  return res;
}

}  // namespace rydanneal
