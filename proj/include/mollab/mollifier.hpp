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

#pragma once

// The mollifier B(s) = sum_{k<=y} mu(k) P(log(y/k)/log y) k^{-s}, the closed
// forms of its first and second mollified-moment main terms, and the
// optimisation of P.

#include <cstdint>
#include <vector>

#include "mollab/arith.hpp"
#include "mollab/numeric.hpp"

namespace mollab::mollifier {

/// P(x) = sum_{j=1}^{d} c_j x^j with P(0) = 0 and P(1) = 1.
class Polynomial {
 public:
  /// Rejects an empty list or |sum c_j - 1| > 1e-12.
  explicit Polynomial(std::vector<double> coefficients);

  /// P(x) = -theta x^2 + (1 + theta) x.
  static Polynomial quadratic_family(double theta);
  static Polynomial linear() { return Polynomial({1.0}); }

  int degree() const { return static_cast<int>(c_.size()); }
  /// c_1..c_d.
  const std::vector<double>& coefficients() const { return c_; }

  double operator()(double x) const;
  double derivative(double x) const;

  double integral() const;                    // int_0^1 P
  double integral_of_square() const;          // int_0^1 P^2
  double integral_of_derivative_square() const;  // int_0^1 P'^2
  double max_abs_on_unit_interval() const;

 private:
  std::vector<double> c_;
};

class MollifierSpec {
 public:
  /// y = T^theta with 0 < theta < 1/2 and T > 2 pi.
  static MollifierSpec from_theta(double theta, double height, Polynomial poly);

  /// Explicit mollifier length y >= 1 at height T > 1; theta = log y / log T
  /// is derived and not range-restricted. Used by desk-scale verifiers whose
  /// (y, T) pairs fall outside 0 < theta < 1/2.
  static MollifierSpec with_length(double y, double height, Polynomial poly);

  double theta() const { return theta_; }
  double height() const { return height_; }
  double y() const { return y_; }
  /// L = log(T / 2 pi).
  double log_height() const;
  const Polynomial& poly() const { return poly_; }
  /// floor(y): b(k) vanishes beyond this.
  std::uint64_t support() const { return support_; }

 private:
  MollifierSpec(double theta, double height, double y, Polynomial poly);
  double theta_, height_, y_;
  Polynomial poly_;
  std::uint64_t support_;
  std::vector<double> b_;  // b(0..support)
  friend double eval_b(std::uint64_t k, const MollifierSpec& spec);
};

/// b(k) = mu(k) P(log(y/k) / log y) for k <= y, else 0.
double eval_b(std::uint64_t k, const MollifierSpec& spec);

/// B(s) = sum_{k<=y} b(k) k^{-s}.
cplx eval_B(cplx s, const MollifierSpec& spec);

/// b on 1..n (zero past y), named "b".
arith::ArithFnTable coefficient_table(const MollifierSpec& spec, std::uint64_t n);

struct MainTermReport {
  double s1_factor = 0;
  double s2_factor = 0;
  double m11_factor = 0;
  double m21_factor = 0;
  double kappa_star = 0;
};

// Bracketed factors of the asymptotic main terms. theta = 1/2 is accepted so
// that the theta -> 1/2^- limits can be evaluated by substitution.
double predicted_S1_factor(double theta, const Polynomial& p);
double predicted_S2_factor(double theta, const Polynomial& p);
double predicted_M11_factor(double theta, const Polynomial& p);
double predicted_M21_factor(double theta, const Polynomial& p);
MainTermReport main_terms(double theta, const Polynomial& p);

inline double predicted_S1_factor(const MollifierSpec& s) { return predicted_S1_factor(s.theta(), s.poly()); }
inline double predicted_S2_factor(const MollifierSpec& s) { return predicted_S2_factor(s.theta(), s.poly()); }

struct OptimizedPolynomial {
  Polynomial poly;
  double value = 0;           // S1_factor^2 / S2_factor at poly
  double gradient_norm = 0;   // projected gradient at the returned point
  bool used_fallback = false; // projected ascent was needed after the solve
};

/// Maximises S1_factor^2 / S2_factor over degree-d polynomials with P(0) = 0,
/// P(1) = 1.
OptimizedPolynomial optimize_P(double theta, int degree);

/// s1^2 / s2.
double kappa_star_lower(double s1_factor, double s2_factor);

/// (5 + 2 kappa* - m) / 6, where m bounds the mean multiplicity (default 1.3275).
double kappa_d_lower(double kappa_star, double multiplicity_bound = 1.3275);

}  // namespace mollab::mollifier
