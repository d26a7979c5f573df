// Copyright 2026 The mollab Authors
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

#include "mollab/mollifier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "mollab/error.hpp"

namespace mollab::mollifier {

Polynomial::Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) {
  require(!c_.empty(), "mollifier polynomial needs at least one coefficient");
  KahanSum s;
  for (double c : c_) s.add(c);
  if (std::abs(s.value() - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "mollifier polynomial must satisfy P(1) = 1, got " << s.value();
    reject(os.str());
  }
}

Polynomial Polynomial::quadratic_family(double theta) { return Polynomial({1.0 + theta, -theta}); }

double Polynomial::operator()(double x) const {
  double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = (acc + *it) * x;
  return acc;
}

double Polynomial::derivative(double x) const {
  double acc = 0;
  for (int j = degree(); j >= 1; --j) acc = acc * x + j * c_[j - 1];
  return acc;
}

double Polynomial::integral() const {
  KahanSum s;
  for (int j = 1; j <= degree(); ++j) s.add(c_[j - 1] / (j + 1));
  return s.value();
}

double Polynomial::integral_of_square() const {
  KahanSum s;
  for (int i = 1; i <= degree(); ++i)
    for (int j = 1; j <= degree(); ++j) s.add(c_[i - 1] * c_[j - 1] / (i + j + 1));
  return s.value();
}

double Polynomial::integral_of_derivative_square() const {
  KahanSum s;
  for (int i = 1; i <= degree(); ++i)
    for (int j = 1; j <= degree(); ++j) s.add(c_[i - 1] * c_[j - 1] * i * j / (i + j - 1));
  return s.value();
}

double Polynomial::max_abs_on_unit_interval() const {
  constexpr int kGrid = 4096;
  double m = 0;
  for (int i = 0; i <= kGrid; ++i) m = std::max(m, std::abs((*this)(static_cast<double>(i) / kGrid)));
  return m;
}

MollifierSpec::MollifierSpec(double theta, double height, double y, Polynomial poly)
    : theta_(theta), height_(height), y_(y), poly_(std::move(poly)) {
  support_ = static_cast<std::uint64_t>(std::floor(y_));
  b_.assign(support_ + 1, 0.0);
  auto mu = arith::mobius_values(support_);
  double log_y = std::log(y_);
  for (std::uint64_t k = 1; k <= support_; ++k) {
    if (mu[k] == 0) continue;
    double arg = (k == 1 || log_y <= 0) ? 1.0 : std::log(y_ / static_cast<double>(k)) / log_y;
    b_[k] = mu[k] * poly_(arg);
  }
}

MollifierSpec MollifierSpec::from_theta(double theta, double height, Polynomial poly) {
  require(theta > 0 && theta < 0.5, "mollifier theta must lie in (0, 1/2)");
  require(height > kTwoPi, "mollifier height T must exceed 2 pi");
  return MollifierSpec(theta, height, std::pow(height, theta), std::move(poly));
}

MollifierSpec MollifierSpec::with_length(double y, double height, Polynomial poly) {
  require(y >= 1, "mollifier length y must be >= 1");
  require(height > 1, "mollifier height T must exceed 1");
  return MollifierSpec(std::log(y) / std::log(height), height, y, std::move(poly));
}

double MollifierSpec::log_height() const { return std::log(height_ / kTwoPi); }

double eval_b(std::uint64_t k, const MollifierSpec& spec) {
  if (k == 0 || k > spec.support_) return 0.0;
  return spec.b_[k];
}

cplx eval_B(cplx s, const MollifierSpec& spec) {
  KahanSumComplex acc;
  for (std::uint64_t k = 1; k <= spec.support(); ++k) {
    double b = eval_b(k, spec);
    if (b != 0.0) acc.add(b * std::exp(-s * std::log(static_cast<double>(k))));
  }
  return acc.value();
}

arith::ArithFnTable coefficient_table(const MollifierSpec& spec, std::uint64_t n) {
  std::vector<double> v(n, 0.0);
  for (std::uint64_t k = 1; k <= std::min(n, spec.support()); ++k) v[k - 1] = eval_b(k, spec);
  return arith::ArithFnTable("b", std::move(v));
}

namespace {

void check_theta(double theta, bool allow_zero) {
  require(theta <= 0.5, "theta must be <= 1/2");
  require(allow_zero ? theta >= 0 : theta > 0, allow_zero ? "theta must be >= 0" : "theta must be > 0");
}

}  // namespace

double predicted_S1_factor(double theta, const Polynomial& p) {
  check_theta(theta, true);
  return 0.5 + theta * p.integral();
}

double predicted_S2_factor(double theta, const Polynomial& p) {
  check_theta(theta, false);
  double ip = p.integral();
  return 1.0 / 3.0 + theta * ip + theta * theta * ip * ip +
         p.integral_of_derivative_square() / (12.0 * theta);
}

double predicted_M11_factor(double theta, const Polynomial& p) {
  check_theta(theta, true);
  return 0.5 - theta * p.integral();
}

double predicted_M21_factor(double theta, const Polynomial& p) {
  check_theta(theta, false);
  double ip = p.integral();
  return 1.0 / 12.0 - 0.5 * theta * ip + 1.5 * theta * p.integral_of_square() -
         0.5 * theta * theta * ip * ip - p.integral_of_derivative_square() / (24.0 * theta);
}

MainTermReport main_terms(double theta, const Polynomial& p) {
  MainTermReport r;
  r.s1_factor = predicted_S1_factor(theta, p);
  r.s2_factor = predicted_S2_factor(theta, p);
  r.m11_factor = predicted_M11_factor(theta, p);
  r.m21_factor = predicted_M21_factor(theta, p);
  r.kappa_star = kappa_star_lower(r.s1_factor, r.s2_factor);
  return r;
}

namespace {

// Quadratic model of the main terms in the raw coefficients c:
//   S1(c) = 1/2 + theta v.c,  S2(c) = 1/3 + theta v.c + theta^2 (v.c)^2 + c'Wc / (12 theta)
struct RatioModel {
  double theta;
  Eigen::VectorXd v;
  Eigen::MatrixXd w;

  RatioModel(double th, int d) : theta(th), v(d), w(d, d) {
    for (int i = 1; i <= d; ++i) {
      v(i - 1) = 1.0 / (i + 1);
      for (int j = 1; j <= d; ++j) w(i - 1, j - 1) = static_cast<double>(i * j) / (i + j - 1);
    }
  }
  double s1(const Eigen::VectorXd& c) const { return 0.5 + theta * v.dot(c); }
  double s2(const Eigen::VectorXd& c) const {
    double vc = v.dot(c);
    return 1.0 / 3.0 + theta * vc + theta * theta * vc * vc + c.dot(w * c) / (12.0 * theta);
  }
  double value(const Eigen::VectorXd& c) const {
    double a = s1(c);
    return a * a / s2(c);
  }
  // Gradient of the ratio projected onto the tangent space sum(c) = const.
  Eigen::VectorXd projected_gradient(const Eigen::VectorXd& c) const {
    double a = s1(c), b = s2(c), vc = v.dot(c);
    Eigen::VectorXd ds1 = theta * v;
    Eigen::VectorXd ds2 = theta * v + 2 * theta * theta * vc * v + (w * c) / (6.0 * theta);
    Eigen::VectorXd g = (2 * a / b) * ds1 - (a * a / (b * b)) * ds2;
    return g.array() - g.mean();
  }
};

}  // namespace

OptimizedPolynomial optimize_P(double theta, int degree) {
  require(degree >= 1, "optimize_P: degree must be >= 1");
  require(theta > 0 && theta <= 0.5, "optimize_P: theta must lie in (0, 1/2]");
  const int d = degree;
  RatioModel model(theta, d);

  // c = G w with w = (w0, z_2..z_d): G e_0 = e_1 and G e_j = e_{j+1} - e_1,
  // so sum(c) = w0. Both main terms become homogeneous in w:
  //   S1 = a'w,  S2 = w'Bw,
  // and sup (a'w)^2 / w'Bw is attained at w = B^{-1} a (Cauchy-Schwarz in the
  // B inner product). Rescaling to w0 = 1 restores P(1) = 1.
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
  g(0, 0) = 1.0;
  for (int j = 1; j < d; ++j) {
    g(j, j) = 1.0;
    g(0, j) = -1.0;
  }
  Eigen::VectorXd u = g.transpose() * model.v;
  Eigen::VectorXd e0 = Eigen::VectorXd::Unit(d, 0);
  Eigen::VectorXd a = 0.5 * e0 + theta * u;
  Eigen::MatrixXd b = (1.0 / 3.0) * e0 * e0.transpose() +
                      (theta / 2.0) * (e0 * u.transpose() + u * e0.transpose()) +
                      theta * theta * u * u.transpose() +
                      (1.0 / (12.0 * theta)) * g.transpose() * model.w * g;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(b);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw Error(ErrorCode::Domain, "optimize_P: normal equations are not positive definite");
  Eigen::VectorXd w = ldlt.solve(a);
  if (!w.allFinite() || std::abs(w(0)) < 1e-14 * w.norm()) {
    std::ostringstream os;
    os << "optimize_P: degenerate stationary point (w0 = " << w(0) << ", theta = " << theta
       << ", degree = " << degree << ")";
    throw Error(ErrorCode::Domain, os.str());
  }
  Eigen::VectorXd c = g * (w / w(0));

  OptimizedPolynomial out{Polynomial::linear(), 0, 0, false};
  constexpr double kGradTol = 1e-10;
  double gnorm = model.projected_gradient(c).norm();
  if (gnorm > kGradTol) {
    // Projected gradient ascent with backtracking from the solve.
    out.used_fallback = true;
    double step = 1.0;
    double f = model.value(c);
    for (int it = 0; it < 20000 && gnorm > kGradTol; ++it) {
      Eigen::VectorXd gr = model.projected_gradient(c);
      bool improved = false;
      for (int k = 0; k < 60; ++k) {
        Eigen::VectorXd trial = c + step * gr;
        double ft = model.value(trial);
        if (ft > f) {
          c = trial;
          f = ft;
          step *= 2;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      gnorm = model.projected_gradient(c).norm();
      if (!improved) break;
    }
  }
  // Fold rounding drift back into c_1 so the constraint holds exactly.
  c(0) += 1.0 - c.sum();
  out.poly = Polynomial(std::vector<double>(c.data(), c.data() + d));
  out.value = model.value(c);
  out.gradient_norm = model.projected_gradient(c).norm();
  return out;
}

double kappa_star_lower(double s1_factor, double s2_factor) {
  require(s2_factor > 0, "kappa_star_lower: s2 factor must be positive");
  return s1_factor * s1_factor / s2_factor;
}

double kappa_d_lower(double kappa_star, double multiplicity_bound) {
  require(kappa_star >= 0 && kappa_star <= 1, "kappa_d_lower: kappa* must lie in [0, 1]");
  return (5.0 + 2.0 * kappa_star - multiplicity_bound) / 6.0;
}

}  // namespace mollab::mollifier
