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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mollab/error.hpp"
#include "mollab/vaughan.hpp"

namespace mollab::vaughan {

double DyadicPlan::b_bound() const {
  double r = K * Q * T / (D * A0);
  return std::max(A0, r * r);
}

DyadicPlan build_dyadic_plan(const PlanInput& in) {
  require(in.T > kTwoPi, "dyadic plan: T must exceed 2 pi");
  require(in.K >= 1 && in.Q >= 1 && in.D >= 1, "dyadic plan: K, Q, D must be at least 1");
  require(in.y >= 1, "dyadic plan: y must be at least 1");
  for (double mi : in.M) require(mi >= 1, "dyadic plan: every M_i must be at least 1");

  double big_l = std::log(in.T / kTwoPi);
  double eta = std::pow(big_l, in.eta_exponent);
  if (!(in.Q > eta))
    reject("dyadic plan: inadmissible, Q = " + format_double(in.Q) + " must exceed eta = " + format_double(eta));
  if (!(in.D <= in.K))
    reject("dyadic plan: inadmissible, D = " + format_double(in.D) + " exceeds K = " + format_double(in.K));
  if (!(in.K * in.Q <= 4 * in.y))
    reject("dyadic plan: inadmissible, K Q = " + format_double(in.K * in.Q) + " exceeds 4y");

  DyadicPlan p{};
  p.K = in.K;
  p.Q = in.Q;
  p.D = in.D;
  p.y = in.y;
  p.T = in.T;
  p.eta = eta;
  p.M = in.M;
  p.V = in.V;
  p.U = std::pow(in.T, 5);
  double kqt_d = in.K * in.Q * in.T / in.D;
  p.X = kqt_d / kPi;
  double y_sqrt_t = in.y * std::sqrt(in.T);
  p.A0 = std::max(y_sqrt_t, std::pow(kqt_d, 2.0 / 3.0));

  double product = 1;
  for (double mi : in.M) product *= mi;
  // Each M_i may overshoot its band by a factor 2.
  require(product <= p.X * 512, "dyadic plan: prod M_i exceeds X beyond the dyadic slack");

  p.partial_summation_case = std::any_of(in.M.begin(), in.M.end(), [&](double mi) { return mi > y_sqrt_t; });

  double threshold = kqt_d / p.A0;
  auto big = std::max_element(in.M.begin(), in.M.end());
  if (*big >= threshold) {
    p.single_factor = static_cast<int>(big - in.M.begin());
    p.J = 0;
    p.A = *big;
    p.B = product / *big;
    return p;
  }
  p.J = 0;
  double a = 1;
  while (p.J < kSlots && a * in.M[p.J] <= p.A0) a *= in.M[p.J++];
  p.A = a;
  p.B = product / a;
  return p;
}

CheckReport verify_dyadic_plans(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  CheckReport rep;
  rep.check = "dyadic_plan";
  rep.parameters = {{"trials", trials}, {"seed", seed}, {"constant", 16}};
  rep.tolerance = 16;
  std::size_t made = 0, violations = 0, single = 0;
  double worst_ratio = 0, max_a_ratio = 0;
  nlohmann::ordered_json worst;

  while (made < trials) {
    double t = std::exp(std::log(1e3) + unit(rng) * (std::log(1e10) - std::log(1e3)));
    double theta = 0.05 + 0.45 * unit(rng);
    double y = std::pow(t, theta);
    double eta = std::pow(std::log(t / kTwoPi), 2);
    // Dyadic anchors: Q a power of two above eta, then K, D with D <= K and KQ <= 4y.
    double q = std::exp2(std::ceil(std::log2(eta)) + std::floor(unit(rng) * 4));
    if (q <= eta) q *= 2;
    if (q > 4 * y) continue;
    double k_max = std::floor(std::log2(4 * y / q));
    double k = std::exp2(std::floor(unit(rng) * (k_max + 1)));
    double d = std::exp2(std::floor(unit(rng) * (std::log2(k) + 1)));

    PlanInput in;
    in.K = k;
    in.Q = q;
    in.D = d;
    in.y = y;
    in.T = t;
    double x = k * q * t / (kPi * d);
    double cap = std::log(y * std::sqrt(t));
    // Random split of log(prod M_i) <= log X, each factor capped at y T^{1/2}.
    double budget = unit(rng) * std::log(x);
    for (int i = 0; i < kSlots && budget > 0; ++i) {
      double share = i == kSlots - 1 ? budget : budget * unit(rng);
      share = std::min(share, cap);
      in.M[i] = std::exp(share);
      budget -= share;
    }
    for (auto& mi : in.M) mi = std::max(mi, 1.0);
    std::shuffle(in.M.begin(), in.M.end(), rng);

    auto plan = build_dyadic_plan(in);
    ++made;
    if (plan.single_factor) ++single;
    double ratio_a = plan.A / plan.A0;
    double ratio_b = plan.B / plan.b_bound();
    max_a_ratio = std::max(max_a_ratio, ratio_a);
    double ratio = ratio_b;
    if (ratio_a > 1 + 1e-12 || ratio_b > 16) ++violations;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst = {{"T", t}, {"y", y}, {"K", k}, {"Q", q}, {"D", d}, {"A", plan.A}, {"A0", plan.A0}, {"B", plan.B},
               {"B_bound", plan.b_bound()}, {"J", plan.J}};
    }
  }
  rep.worst_case = worst;
  rep.worst_case["single_factor_instances"] = single;
  rep.worst_case["violations"] = violations;
  rep.worst_case["max_A_over_A0"] = max_a_ratio;
  rep.deviation = worst_ratio;
  rep.pass = violations == 0;
  return rep;
}

}  // namespace mollab::vaughan
