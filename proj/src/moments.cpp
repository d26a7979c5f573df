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

#include <cmath>

#include "mollab/error.hpp"
#include "mollab/zeta.hpp"

namespace mollab::zeta {

namespace {

// Step for the five-point stencil. Z is smooth on the scale 1/log t, and the
// evaluation noise is near 1e-13, so h ~ 1e-3 balances truncation and noise.
double stencil_step(double gamma) { return 1e-3 * std::pow(std::max(1.0, gamma), -1.0 / 3.0); }

template <class F>
auto five_point(F&& f, double x, double h) {
  return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

}  // namespace

cplx zeta_prime_at_zero(double gamma) {
  require(gamma > 0, "zeta_prime_at_zero: gamma must be positive");
  double h = stencil_step(gamma);
  double zp = five_point([](double t) { return hardy_Z(t); }, gamma, h);
  // zeta(1/2 + it) = e^{-i theta(t)} Z(t) and Z(gamma) = 0.
  return cplx(0, -1) * zp * std::polar(1.0, -rs_theta(gamma));
}

ZetaPrime zeta_prime_at_zero_checked(double gamma) {
  ZetaPrime r;
  r.value = zeta_prime_at_zero(gamma);
  double h = stencil_step(gamma);
  // d/dt zeta(1/2 + it) = i zeta'(1/2 + it).
  cplx dt = five_point([](double t) { return zeta_em(cplx(0.5, t)); }, gamma, h);
  r.direct = cplx(0, -1) * dt;
  r.relative_agreement = std::abs(r.value - r.direct) / std::abs(r.direct);
  r.possible_multiple_zero = std::abs(r.value) < 1e-12;
  return r;
}

MomentResult compute_moments(double t, const mollifier::MollifierSpec& spec, const ZeroList& zeros) {
  require(t > 0, "compute_moments: T must be positive");
  if (zeros.max_height < t)
    reject("compute_moments: zero list reaches " + std::to_string(zeros.max_height) + " < T = " + std::to_string(t));
  std::size_t n = zeros.count_up_to(t);

  std::vector<cplx> terms(n);
  parallel_for(n, worker_threads(), [&](std::size_t i) {
    double g = zeros.ordinates[i];
    terms[i] = eval_B(cplx(0.5, g), spec) * zeta_prime_at_zero(g);
  });
  KahanSumComplex s1;
  KahanSum s2;
  for (const auto& v : terms) {
    s1.add(v);
    s2.add(std::norm(v));
  }
  MomentResult r{t, spec, s1.value(), s2.value(), n, 0.0};
  r.kappa_bound = (r.S2 > 0 && n > 0) ? empirical_kappa_bound(r) : 0.0;
  return r;
}

double empirical_kappa_bound(const MomentResult& result) {
  if (!(result.S2 > 0)) reject("empirical_kappa_bound: S2 must be positive");
  if (result.N_T == 0) reject("empirical_kappa_bound: no zeros below T");
  return std::norm(result.S1) / (result.S2 * static_cast<double>(result.N_T));
}

MomentRatios moment_ratios(const MomentResult& result) {
  MomentRatios m;
  double big_l = result.spec.log_height();
  double base = result.T / kTwoPi;
  m.s1_main = base * big_l * big_l * mollifier::predicted_S1_factor(result.spec);
  m.s2_main = base * big_l * big_l * big_l * mollifier::predicted_S2_factor(result.spec);
  m.s1_ratio = result.S1.real() / m.s1_main;
  m.s2_ratio = result.S2 / m.s2_main;
  return m;
}

}  // namespace mollab::zeta
