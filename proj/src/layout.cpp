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

#include "rydanneal/layout.hpp"

#include <cmath>
#include <random>

namespace rydanneal {

Eigen::MatrixXd layout_interactions(const AtomLayout& layout) {
  const Index n = layout.size();
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index k = j + 1; k < n; ++k) {
      const double r = (layout.positions.row(j) - layout.positions.row(k)).norm();
      if (!(r > 0))
        throw InvalidArgument("atoms " + std::to_string(j) + " and " + std::to_string(k) +
                              " coincide");
      V(j, k) = V(k, j) = layout.c6 / std::pow(r, 6);
    }
  return V;
}

double interaction_distance(double v, double c6) { return std::pow(c6 / v, 1.0 / 6.0); }

namespace {

struct StressProblem {
  Index n;
  int dim;
  Eigen::MatrixXd target;  // target distance, 0 for uncoupled pairs
  double r_far;

  Index residual_count() const { return n * (n - 1) / 2; }

  void residuals(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac) const {
    r.resize(residual_count());
    if (jac) jac->setZero(residual_count(), x.size());
    Index row = 0;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j, ++row) {
        const Eigen::VectorXd diff = x.segment(i * dim, dim) - x.segment(j * dim, dim);
        const double d = std::max(diff.norm(), 1e-300);
        const double dt = target(i, j);
        double scale;
        if (dt > 0) {
          r(row) = (d - dt) / dt;
          scale = 1.0 / (d * dt);
        } else if (d < r_far) {
          r(row) = r_far - d;
          scale = -1.0 / d;
        } else {
          r(row) = 0.0;
          continue;
        }
        if (jac) {
          jac->block(row, i * dim, 1, dim) = scale * diff.transpose();
          jac->block(row, j * dim, 1, dim) = -scale * diff.transpose();
        }
      }
  }

  double stress(const Eigen::VectorXd& x) const {
    Eigen::VectorXd r;
    residuals(x, r, nullptr);
    return r.squaredNorm();
  }
};

Eigen::VectorXd levenberg_marquardt(const StressProblem& p, Eigen::VectorXd x, int max_iter) {
  Eigen::VectorXd r, r_trial;
  Eigen::MatrixXd J;
  p.residuals(x, r, &J);
  double cost = r.squaredNorm();
  double mu = 1e-3;
  for (int it = 0; it < max_iter && cost > 1e-30; ++it) {
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() < 1e-17) break;
    bool accepted = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::MatrixXd M = A;
      M.diagonal().array() += mu * (A.diagonal().array() + 1e-12);
      const Eigen::VectorXd step = M.ldlt().solve(-g);
      const Eigen::VectorXd trial = x + step;
      p.residuals(trial, r_trial, nullptr);
      const double trial_cost = r_trial.squaredNorm();
      if (trial_cost < cost) {
        const bool tiny = step.norm() < 1e-15 * (1.0 + x.norm());
        x = trial;
        cost = trial_cost;
        mu = std::max(mu / 3.0, 1e-15);
        accepted = !tiny;
        break;
      }
      mu *= 4.0;
    }
    if (!accepted) break;
    p.residuals(x, r, &J);
  }
  return x;
}

double max_interaction_error(const Eigen::MatrixXd& target, const Eigen::MatrixXd& realized,
                             double* leakage) {
  const double vmax = target.maxCoeff();
  double worst = 0.0, leak = 0.0;
  for (Index i = 0; i < target.rows(); ++i)
    for (Index j = i + 1; j < target.cols(); ++j) {
      const double err = std::abs(realized(i, j) - target(i, j)) / vmax;
      worst = std::max(worst, err);
      if (target(i, j) == 0.0) leak = std::max(leak, realized(i, j) / vmax);
    }
  if (leakage) *leakage = leak;
  return worst;
}

AtomLayout to_layout(const Eigen::VectorXd& x, Index n, int dim, double c6) {
  AtomLayout l;
  l.c6 = c6;
  l.positions.resize(n, dim);
  for (Index i = 0; i < n; ++i) l.positions.row(i) = x.segment(i * dim, dim).transpose();
  // Pin atom 0 at the origin so results do not drift with the random start.
  const Eigen::RowVectorXd origin = l.positions.row(0);
  l.positions.rowwise() -= origin;
  return l;
}

EmbedResult score(const StressProblem& p, const Eigen::MatrixXd& V, const Eigen::VectorXd& x,
                  double c6) {
  EmbedResult res;
  res.layout = to_layout(x, p.n, p.dim, c6);
  res.stress = p.stress(x);
  const Eigen::MatrixXd realized = layout_interactions(res.layout);
  res.residual = max_interaction_error(V, realized, &res.leakage);
  return res;
}

bool better(const EmbedResult& a, const EmbedResult& b) {
  if (a.residual != b.residual) return a.residual < b.residual;
  return a.stress < b.stress;
}

}  // namespace

EmbedResult embed_layout(const EncodedTarget& t, int dim, std::uint64_t seed,
                         const EmbedOptions& opts) {
  if (dim != 2 && dim != 3) throw InvalidArgument("layout dimension must be 2 or 3");
  const Index n = t.size();
  const Eigen::MatrixXd& V = t.interactions;
  if ((V.array() < 0).any())
    throw InvalidArgument("cannot embed negative (attractive) interactions");
  if (n <= 1) {
    EmbedResult r;
    r.layout.c6 = opts.c6;
    r.layout.positions = Eigen::MatrixXd::Zero(n, dim);
    return r;
  }
  if (!(V.maxCoeff() > 0))
    throw InvalidArgument("cannot embed a target without any positive interaction");

  StressProblem prob{n, dim, Eigen::MatrixXd::Zero(n, n), opts.r_far};
  double span = opts.r_far;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && V(i, j) > 0) {
        prob.target(i, j) = interaction_distance(V(i, j), opts.c6);
        span = std::max(span, prob.target(i, j));
      }

  std::vector<EmbedResult> candidates;
  if (dim == 3) {
    // The planar optimum lifted into 3D is always a candidate.
    const EmbedResult flat = embed_layout(t, 2, seed, opts);
    Eigen::VectorXd lifted = Eigen::VectorXd::Zero(n * 3);
    for (Index i = 0; i < n; ++i) lifted.segment(i * 3, 2) = flat.layout.positions.row(i).transpose();
    candidates.push_back(score(prob, V, lifted, opts.c6));
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> jitter(0.0, 1e-3 * span);
    Eigen::VectorXd bent = lifted;
    for (Index i = 0; i < n; ++i) bent(i * 3 + 2) += jitter(rng);
    candidates.push_back(score(prob, V, levenberg_marquardt(prob, bent, opts.max_iterations), opts.c6));
  }

  const double box = span * std::max(1.0, std::pow(static_cast<double>(n), 1.0 / dim));
  for (int restart = 0; restart < opts.restarts; ++restart) {
    std::mt19937_64 rng(seed + 0x51ed27ULL * static_cast<std::uint64_t>(restart + 1));
    std::uniform_real_distribution<double> uni(0.0, box);
    Eigen::VectorXd x(n * dim);
    for (Index k = 0; k < x.size(); ++k) x(k) = uni(rng);
    candidates.push_back(score(prob, V, levenberg_marquardt(prob, x, opts.max_iterations), opts.c6));
  }

  EmbedResult best = candidates.front();
  for (const auto& c : candidates)
    if (better(c, best)) best = c;
  return best;
}

ValidationReport validate(const EncodedTarget& t, const AtomLayout& layout, double tol) {
  if (layout.size() != t.size())
    throw InvalidArgument("layout has " + std::to_string(layout.size()) + " atoms, target has " +
                          std::to_string(t.size()));
  const Eigen::MatrixXd realized = layout_interactions(layout);
  const double vmax = t.interactions.size() ? t.interactions.cwiseAbs().maxCoeff() : 0.0;
  ValidationReport rep;
  for (Index i = 0; i < t.size(); ++i)
    for (Index j = i + 1; j < t.size(); ++j) {
      PairError e;
      e.i = i;
      e.j = j;
      e.target = t.interactions(i, j);
      e.realized = realized(i, j);
      if (e.target != 0.0) {
        e.relative_error = std::abs(e.realized - e.target) / std::abs(e.target);
      } else {
        e.unwanted = true;
        e.relative_error = vmax > 0 ? e.realized / vmax : e.realized;
        rep.worst_unwanted = std::max(rep.worst_unwanted, e.relative_error);
      }
      rep.max_error = std::max(rep.max_error, e.relative_error);
      if (e.relative_error > tol) rep.offending.push_back(e);
      rep.pairs.push_back(e);
    }
  rep.passed = rep.offending.empty();
  return rep;
}

EncodedTarget with_layout_interactions(const EncodedTarget& t, const AtomLayout& layout) {
  if (layout.size() != t.size()) throw InvalidArgument("layout size does not match target");
  EncodedTarget out = t;
  out.interactions = layout_interactions(layout);
  return out;
}

}  // namespace rydanneal
