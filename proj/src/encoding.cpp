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

#include "rydanneal/encoding.hpp"

#include <cmath>
#include <deque>
#include <sstream>

namespace rydanneal {

void HardwareLimits::validate() const {
  if (!(delta_max > 0 && omega_max > 0 && r_min > 0 && r_far > 0 && t_max > 0 && c6 > 0 &&
        lifetime > 0))
    throw InvalidArgument("hardware limits must all be positive");
  if (r_far <= r_min) throw InvalidArgument("r_far must exceed r_min");
}

double HardwareLimits::v_max() const { return c6 / std::pow(r_min, 6); }
double HardwareLimits::v_leak() const { return c6 / std::pow(r_far, 6); }

NotEncodable::NotEncodable(Index i, Index j, double coupling, const std::string& why)
    : Error("coupling J(" + std::to_string(i) + "," + std::to_string(j) + ") = " +
            std::to_string(coupling) + " is not encodable: " + why),
      i_(i),
      j_(j),
      coupling_(coupling) {}

std::optional<Bitstring> find_gauge(const IsingModel& m) {
  const Index n = m.size();
  if (n > 64) throw InvalidArgument("gauge search supports at most 64 spins");
  std::vector<int> sign(static_cast<std::size_t>(n), 0);  // +1 keep, -1 flip
  for (Index root = 0; root < n; ++root) {
    if (sign[root] != 0) continue;
    sign[root] = 1;
    std::deque<Index> queue{root};
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      for (Index v = 0; v < n; ++v) {
        const double J = m.quadratic(u, v);
        if (u == v || J == 0.0) continue;
        const int want = J > 0 ? sign[u] : -sign[u];
        if (sign[v] == 0) {
          sign[v] = want;
          queue.push_back(v);
        } else if (sign[v] != want) {
          return std::nullopt;
        }
      }
    }
  }
  Bitstring mask = 0;
  for (Index j = 0; j < n; ++j)
    if (sign[j] < 0) mask |= Bitstring{1} << j;
  return mask;
}

IsingModel apply_gauge(const IsingModel& m, Bitstring mask) {
  const Index n = m.size();
  IsingModel g(n);
  g.add_constant(m.constant());
  for (Index i = 0; i < n; ++i) g.add_linear(i, bit(mask, i) ? -m.linear(i) : m.linear(i));
  for (const auto& [i, j, J] : m.interactions())
    g.add_quadratic(i, j, bit(mask, i) != bit(mask, j) ? -J : J);
  return g;
}

EncodedTarget encode(const IsingModel& model, const EncodeOptions& opts) {
  const Index n = model.size();
  Bitstring mask = 0;
  const bool any_negative = (model.quadratic().array() < 0).any();
  if (any_negative && opts.gauge_fix) {
    if (auto g = find_gauge(model)) mask = *g;
  }
  const IsingModel m = mask ? apply_gauge(model, mask) : model;

  if (!opts.allow_attractive) {
    for (const auto& [i, j, J] : m.interactions())
      if (J < 0)
        throw NotEncodable(i, j, model.quadratic(i, j),
                           "negative coupling needs an attractive interaction (C6 > 0 only "
                           "gives repulsion) and no spin-reversal gauge removes it");
  }

  EncodedTarget t;
  t.gauge = mask;
  t.interactions = Eigen::MatrixXd::Zero(n, n);
  t.interactions.triangularView<Eigen::StrictlyUpper>() = 4.0 * m.quadratic();
  t.interactions.triangularView<Eigen::StrictlyLower>() =
      t.interactions.transpose().triangularView<Eigen::StrictlyLower>();
  t.detunings = 2.0 * m.linear() + 0.5 * t.interactions.rowwise().sum();
  // E(x) = c + Σh + ΣJ + H(n), so H = E - (c + Σh + ΣJ).
  t.offset = -(m.constant() + m.linear().sum() + m.quadratic().sum());
  t.scale = 1.0;
  return t;
}

EncodedTarget rescale(const EncodedTarget& t, const HardwareLimits& limits,
                      RescaleReport* report) {
  limits.validate();
  const double dmax = t.detunings.size() ? t.detunings.cwiseAbs().maxCoeff() : 0.0;
  const double vmax = t.interactions.size() ? t.interactions.cwiseAbs().maxCoeff() : 0.0;
  double vmin = 0.0;
  for (Index i = 0; i < t.interactions.rows(); ++i)
    for (Index j = i + 1; j < t.interactions.cols(); ++j) {
      const double v = std::abs(t.interactions(i, j));
      if (v > 0 && (vmin == 0.0 || v < vmin)) vmin = v;
    }

  double upper = std::numeric_limits<double>::infinity();
  std::string upper_name;
  if (dmax > 0 && limits.delta_max / dmax < upper) {
    upper = limits.delta_max / dmax;
    upper_name = "delta_max";
  }
  if (vmax > 0 && limits.v_max() / vmax < upper) {
    upper = limits.v_max() / vmax;
    upper_name = "r_min";
  }
  const double lower = vmin > 0 ? limits.v_leak() / vmin : 0.0;

  if (lower > upper) {
    std::ostringstream os;
    os << "no uniform rescale fits the limits: " << upper_name << " requires lambda <= "
       << upper << " but r_far (weakest interaction " << vmin
       << " vs leakage floor " << limits.v_leak() << ") requires lambda >= " << lower;
    throw LimitsUnsatisfiable({upper_name, "r_far"}, os.str());
  }

  double lambda = 1.0;
  std::string binding;
  if (upper < 1.0) {
    lambda = upper;
    binding = upper_name;
  }
  if (lambda < lower) {
    lambda = lower;
    binding = "r_far";
  }

  EncodedTarget out = t;
  out.interactions *= lambda;
  out.detunings *= lambda;
  out.offset *= lambda;
  out.scale *= lambda;
  if (report) *report = {lambda, binding};
  return out;
}

double diagonal_energy(const EncodedTarget& t, Bitstring n) {
  double e = 0.0;
  for (Index j = 0; j < t.size(); ++j)
    if (bit(n, j)) e -= t.detunings(j);
  for (Index j = 0; j < t.size(); ++j) {
    if (!bit(n, j)) continue;
    for (Index k = j + 1; k < t.size(); ++k)
      if (bit(n, k)) e += t.interactions(j, k);
  }
  return e;
}

Eigen::VectorXd detuning_diagonal(const EncodedTarget& t) {
  const Index dim = Index{1} << t.size();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
  for (Index b = 0; b < dim; ++b)
    for (Index j = 0; j < t.size(); ++j)
      if (bit(static_cast<Bitstring>(b), j)) d(b) -= t.detunings(j);
  return d;
}

Eigen::VectorXd interaction_diagonal(const EncodedTarget& t) {
  const Index dim = Index{1} << t.size();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
  for (Index b = 0; b < dim; ++b)
    for (Index j = 0; j < t.size(); ++j) {
      if (!bit(static_cast<Bitstring>(b), j)) continue;
      for (Index k = j + 1; k < t.size(); ++k)
        if (bit(static_cast<Bitstring>(b), k)) d(b) += t.interactions(j, k);
    }
  return d;
}

Eigen::VectorXd target_diagonal(const EncodedTarget& t) {
  return detuning_diagonal(t) + interaction_diagonal(t);
}

double energy_scale(const EncodedTarget& t) {
  double s = 0.0;
  if (t.detunings.size()) s = std::max(s, t.detunings.cwiseAbs().maxCoeff());
  if (t.interactions.size()) s = std::max(s, t.interactions.cwiseAbs().maxCoeff());
  return s > 0 ? s : 1.0;
}

}  // namespace rydanneal
