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

#include "mollab/zeta.hpp"

#include <array>
#include <boost/math/special_functions/bernoulli.hpp>
#include <cmath>

#include "mollab/error.hpp"

namespace mollab::zeta {

namespace {

constexpr int kBernoulliTerms = 24;

// B_{2k} / (2k)! for k = 1..kBernoulliTerms.
const std::array<double, kBernoulliTerms + 1>& bernoulli_over_factorial() {
  static const auto table = [] {
    std::array<double, kBernoulliTerms + 1> t{};
    double fact = 1;
    for (int k = 1; k <= kBernoulliTerms; ++k) {
      fact *= (2.0 * k - 1) * (2.0 * k);
      t[k] = boost::math::bernoulli_b2n<double>(k) / fact;
    }
    return t;
  }();
  return table;
}

// Continuous branch of log Gamma(z) for Re z > 0.
cplx log_gamma(cplx z) {
  cplx shift{};
  while (std::abs(z) < 16) {
    shift += std::log(z);
    z += 1.0;
  }
  cplx z2 = z * z, zpow = z, series{};
  for (int k = 1; k <= 10; ++k) {
    series += boost::math::bernoulli_b2n<double>(k) / ((2.0 * k) * (2.0 * k - 1) * zpow);
    zpow *= z2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi) + series - shift;
}

cplx digamma(cplx z) {
  cplx shift{};
  while (std::abs(z) < 16) {
    shift += 1.0 / z;
    z += 1.0;
  }
  cplx z2 = z * z, zpow = z2, series{};
  for (int k = 1; k <= 10; ++k) {
    series += boost::math::bernoulli_b2n<double>(k) / ((2.0 * k) * zpow);
    zpow *= z2;
  }
  return std::log(z) - 0.5 / z - series - shift;
}

// Taylor coefficients of Psi(1/2 + x) = -cos(2 pi (x^2 - 5/16)) / cos(2 pi x), from
// a discrete Cauchy integral on |x| = 1 (Psi is entire).
constexpr int kPsiTerms = 72;

const std::array<double, kPsiTerms>& psi_taylor() {
  static const auto coeffs = [] {
    constexpr int samples = 256;
    std::array<double, kPsiTerms> a{};
    std::vector<cplx> f(samples);
    for (int j = 0; j < samples; ++j) {
      cplx x = std::polar(1.0, kTwoPi * j / samples);
      f[j] = -std::cos(kTwoPi * (x * x - 5.0 / 16)) / std::cos(kTwoPi * x);
    }
    for (int k = 0; k < kPsiTerms; ++k) {
      cplx s{};
      for (int j = 0; j < samples; ++j) s += f[j] * std::polar(1.0, -kTwoPi * double(k) * j / samples);
      a[k] = s.real() / samples;
    }
    return a;
  }();
  return coeffs;
}

// d^j/dp^j Psi(p) for 0 <= p <= 1.
double psi_derivative(int j, double p) {
  const auto& a = psi_taylor();
  double x = p - 0.5, sum = 0;
  for (int k = kPsiTerms - 1; k >= j; --k) {
    double falling = 1;
    for (int i = 0; i < j; ++i) falling *= k - i;
    sum = sum * x + a[k] * falling;
  }
  return sum;
}

}  // namespace

double rs_theta(double t) {
  require(t >= 0, "rs_theta: t must be non-negative");
  return log_gamma(cplx(0.25, 0.5 * t)).imag() - 0.5 * t * std::log(kPi);
}

double rs_theta_asymptotic(double t) {
  require(t >= 10, "rs_theta_asymptotic: t must be at least 10");
  double inv = 1 / t, inv2 = inv * inv;
  double tail = inv * (1.0 / 48 + inv2 * (7.0 / 5760 + inv2 * (31.0 / 80640 + inv2 * (127.0 / 430080 + inv2 * 511.0 / 1216512))));
  return 0.5 * t * std::log(t / kTwoPi) - 0.5 * t - kPi / 8 + tail;
}

double rs_theta_prime(double t) {
  require(t >= 0, "rs_theta_prime: t must be non-negative");
  return 0.5 * digamma(cplx(0.25, 0.5 * t)).real() - 0.5 * std::log(kPi);
}

cplx zeta_em(cplx s) {
  if (s == cplx(1.0, 0.0)) throw Error(ErrorCode::Domain, "zeta_em: pole at s = 1");
  const auto& bf = bernoulli_over_factorial();
  // Tail terms shrink roughly like (|s| / (2 pi N))^2 per step.
  auto n = static_cast<std::uint64_t>(std::max(20.0, std::ceil(0.5 * std::abs(s))));
  KahanSumComplex sum;
  for (std::uint64_t k = 1; k < n; ++k) sum.add(std::exp(-s * std::log(static_cast<double>(k))));
  double dn = static_cast<double>(n);
  cplx ns = std::exp(-s * std::log(dn));
  sum.add(dn * ns / (s - 1.0));
  sum.add(0.5 * ns);
  cplx term = s * ns / dn;
  for (int k = 1; k <= kBernoulliTerms; ++k) {
    cplx add = bf[k] * term;
    sum.add(add);
    if (std::abs(add) < 1e-17 * std::abs(sum.value())) break;
    term *= (s + (2.0 * k - 1)) * (s + 2.0 * k) / (dn * dn);
  }
  return sum.value();
}

cplx hardy_Z_em(double t) {
  return std::polar(1.0, rs_theta(t)) * zeta_em(cplx(0.5, t));
}

double hardy_Z_rs(double t) {
  require(t >= kTwoPi, "hardy_Z_rs: t must be at least 2 pi");
  double tau = std::sqrt(t / kTwoPi);
  auto n = static_cast<std::uint64_t>(std::floor(tau));
  double p = tau - static_cast<double>(n);
  double theta = rs_theta(t);

  KahanSum main;
  for (std::uint64_t k = 1; k <= n; ++k) {
    double lk = std::log(static_cast<double>(k));
    main.add(std::cos(theta - t * lk) / std::sqrt(static_cast<double>(k)));
  }

  const double pi2 = kPi * kPi, pi4 = pi2 * pi2, pi6 = pi4 * pi2, pi8 = pi4 * pi4;
  auto d = [p](int j) { return psi_derivative(j, p); };
  std::array<double, 5> c{};
  c[0] = d(0);
  c[1] = -d(3) / (96 * pi2);
  c[2] = d(2) / (64 * pi2) + d(6) / (18432 * pi4);
  c[3] = -d(1) / (64 * pi2) - d(5) / (3840 * pi4) - d(9) / (5308416 * pi6);
  c[4] = d(0) / (128 * pi2) + 19 * d(4) / (24576 * pi4) + 11 * d(8) / (5898240 * pi6) + d(12) / (2038431744 * pi8);
  double corr = 0, inv = 1 / tau;
  for (int k = 4; k >= 0; --k) corr = corr * inv + c[k];
  double sign = (n % 2 == 1) ? 1.0 : -1.0;  // (-1)^{N-1}
  return 2 * main.value() + sign * corr / std::sqrt(tau);
}

ZValue hardy_Z_detail(double t) {
  require(t >= 0, "hardy_Z: t must be non-negative");
  ZValue v;
  if (t < kRiemannSiegelThreshold) {
    cplx z = hardy_Z_em(t);
    v.value = z.real();
    v.imag_residue = std::abs(z.imag());
    v.method = ZMethod::EulerMaclaurin;
  } else {
    v.value = hardy_Z_rs(t);
    v.method = ZMethod::RiemannSiegel;
  }
  return v;
}

}  // namespace mollab::zeta
