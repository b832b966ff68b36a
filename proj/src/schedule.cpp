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

#include "rydanneal/schedule.hpp"

#include <cmath>
#include <numbers>

namespace rydanneal {

std::string to_string(PulseBasis b) { return b == PulseBasis::Fourier ? "fourier" : "spline"; }

PulseBasis pulse_basis_from_string(const std::string& s) {
  if (s == "fourier") return PulseBasis::Fourier;
  if (s == "spline") return PulseBasis::Spline;
  throw InvalidArgument("unknown pulse basis '" + s + "' (expected fourier or spline)");
}

Eigen::VectorXd Schedule::parameters() const {
  Eigen::VectorXd p(parameter_count());
  p << delta_coefficients, omega_coefficients;
  return p;
}

Schedule Schedule::with_parameters(const Eigen::VectorXd& p) const {
  if (p.size() != parameter_count())
    throw InvalidArgument("expected " + std::to_string(parameter_count()) +
                          " schedule parameters, got " + std::to_string(p.size()));
  Schedule s = *this;
  s.delta_coefficients = p.head(delta_coefficients.size());
  s.omega_coefficients = p.tail(omega_coefficients.size());
  return s;
}

void Schedule::validate(double t_max) const {
  if (!(duration > 0)) throw InvalidArgument("schedule duration must be positive");
  if (duration > t_max)
    throw InvalidArgument("schedule duration " + std::to_string(duration) +
                          " us exceeds T_max " + std::to_string(t_max) + " us");
  if (!std::isfinite(delta_initial)) throw InvalidArgument("delta_initial must be finite");
  if (!delta_coefficients.allFinite() || !omega_coefficients.allFinite())
    throw InvalidArgument("schedule coefficients must be finite");
  if (sample_count < 2) throw InvalidArgument("sample_count must be at least 2");
  if (!(omega_max > 0)) throw InvalidArgument("omega_max must be positive");
}

double clamped_spline(const Eigen::VectorXd& y, double h, double s0, double s1, double t) {
  const Index m = y.size();
  if (m < 2) throw InvalidArgument("spline needs at least two knots");
  // Second derivatives M from the clamped tridiagonal system.
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(m, h / 6.0);
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(m, 2.0 * h / 3.0);
  Eigen::VectorXd rhs(m);
  diag(0) = diag(m - 1) = h / 3.0;
  rhs(0) = (y(1) - y(0)) / h - s0;
  rhs(m - 1) = s1 - (y(m - 1) - y(m - 2)) / h;
  for (Index k = 1; k < m - 1; ++k) rhs(k) = (y(k + 1) - 2 * y(k) + y(k - 1)) / h;
  // Thomas algorithm; the matrix is symmetric with off-diagonal h/6.
  Eigen::VectorXd c(m), d(m);
  c(0) = sub(0) / diag(0);
  d(0) = rhs(0) / diag(0);
  for (Index k = 1; k < m; ++k) {
    const double denom = diag(k) - sub(k) * c(k - 1);
    c(k) = sub(k) / denom;
    d(k) = (rhs(k) - sub(k) * d(k - 1)) / denom;
  }
  Eigen::VectorXd M(m);
  M(m - 1) = d(m - 1);
  for (Index k = m - 2; k >= 0; --k) M(k) = d(k) - c(k) * M(k + 1);

  Index k = std::clamp<Index>(static_cast<Index>(std::floor(t / h)), 0, m - 2);
  const double a = (k + 1) * h - t, b = t - k * h;
  return M(k) * a * a * a / (6 * h) + M(k + 1) * b * b * b / (6 * h) +
         (y(k) / h - M(k) * h / 6) * a + (y(k + 1) / h - M(k + 1) * h / 6) * b;
}

namespace {

void check_time(const Schedule& s, double t) {
  if (!(t >= 0.0 && t <= s.duration))
    throw InvalidArgument("time " + std::to_string(t) + " outside [0, " +
                          std::to_string(s.duration) + "]");
}

double sine_series(const Eigen::VectorXd& c, double t, double T) {
  double v = 0.0;
  for (Index n = 0; n < c.size(); ++n)
    v += c(n) * std::sin(static_cast<double>(n + 1) * std::numbers::pi * t / T);
  return v;
}

}  // namespace

double delta_profile(const Schedule& s, double t) {
  check_time(s, t);
  if (t == 0.0) return s.delta_initial;
  if (t == s.duration) return 1.0;
  const double T = s.duration;
  const double ramp = s.delta_initial * (1.0 - t / T) + t / T;
  if (s.basis == PulseBasis::Fourier) return ramp + sine_series(s.delta_coefficients, t, T);
  const Index m = s.delta_coefficients.size();
  if (m == 0) return ramp;
  Eigen::VectorXd knots = Eigen::VectorXd::Zero(m + 2);
  knots.segment(1, m) = s.delta_coefficients;
  // Offsets vanish at both ends; the ramp itself carries the boundary values.
  return ramp + clamped_spline(knots, T / static_cast<double>(m + 1), 0.0, 0.0, t);
}

double omega_profile(const Schedule& s, double t) {
  check_time(s, t);
  if (t == 0.0 || t == s.duration) return 0.0;
  const double T = s.duration;
  double v = 0.0;
  if (s.basis == PulseBasis::Fourier) {
    v = sine_series(s.omega_coefficients, t, T);
  } else {
    const Index m = s.omega_coefficients.size();
    if (m > 0) {
      Eigen::VectorXd knots = Eigen::VectorXd::Zero(m + 2);
      knots.segment(1, m) = s.omega_coefficients;
      v = clamped_spline(knots, T / static_cast<double>(m + 1), 0.0, 0.0, t);
    }
  }
  if (s.omega_nonnegative) v = std::max(v, 0.0);
  return std::clamp(v, -s.omega_max, s.omega_max);
}

}  // namespace rydanneal
