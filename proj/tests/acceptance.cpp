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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// A criterion also fails when it exceeds its runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mollab/arith.hpp"
#include "mollab/characters.hpp"
#include "mollab/mollab.h"
#include "mollab/mollifier.hpp"
#include "mollab/vaughan.hpp"
#include "mollab/zeta.hpp"

using namespace mollab;
using mollifier::MollifierSpec;
using mollifier::Polynomial;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Outcome constants() {
  mollab_context* ctx = nullptr;
  if (mollab_context_create(&ctx) != MOLLAB_OK) return {false, "context creation failed"};
  const char* json = nullptr;
  double quad[] = {1.5, -0.5};
  auto st = mollab_report_kappa(ctx, 0.5, quad, 2, &json);
  if (st != MOLLAB_OK) {
    Outcome o{false, mollab_last_error(ctx)};
    mollab_context_destroy(ctx);
    return o;
  }
  auto j = nlohmann::json::parse(json);
  mollab_context_destroy(ctx);
  double ks = j["kappa_star"].get<double>(), kd = j["kappa_d"].get<double>();
  double e1 = std::abs(ks - 19.0 / 27), e2 = std::abs(kd - 0.8466512);
  return {e1 <= 1e-12 && e2 <= 1e-6,
          "|kappa*-19/27|=" + fmt(e1) + " |kappa_d-0.8466512|=" + fmt(e2)};
}

Outcome optimal_polynomial() {
  auto r = mollifier::optimize_P(0.5, 2);
  const auto& c = r.poly.coefficients();
  double ec = std::max(std::abs(c[0] - 1.5), std::abs(c[1] + 0.5));
  double ev = std::abs(r.value - 19.0 / 27);
  Polynomial q({1.5, -0.5});
  double e1 = std::abs(mollifier::predicted_S1_factor(0.5, q) - 19.0 / 24);
  double e2 = std::abs(mollifier::predicted_S2_factor(0.5, q) - 57.0 / 64);
  return {ec <= 1e-6 && ev <= 1e-9 && e1 <= 1e-12 && e2 <= 1e-12,
          "coeff err " + fmt(ec) + ", objective err " + fmt(ev) + ", factor errs " + fmt(e1) + "/" + fmt(e2)};
}

Outcome vaughan_identity() {
  double worst = 0;
  bool ok = true;
  int runs = 0;
  for (int r : {1, 2, 3})
    for (double x : {5.0, 10.0, 30.0}) {
      auto n = static_cast<std::uint64_t>(std::min(1e5, std::floor(std::pow(x, r) + 1e-9)));
      auto rep = vaughan::verify_vaughan({r, x}, n);
      worst = std::max(worst, rep.deviation);
      ok = ok && rep.pass && rep.deviation < 1e-9;
      ++runs;
    }
  return {ok, std::to_string(runs) + " (r,X) pairs, max deviation " + fmt(worst)};
}

Outcome decomposition() {
  struct Setting {
    double y, t, x;
  };
  // n <= 1e4 requires X^3 >= 1e4, hence X >= 22.
  const Setting settings[] = {{20, 1000, 22}, {8, 500, 30}, {30, 2000, 50}};
  double worst = 0;
  bool ok = true;
  for (const auto& s : settings) {
    auto spec = MollifierSpec::with_length(s.y, s.t, Polynomial::quadratic_family(0.5));
    auto rep = vaughan::verify_decomposition(spec, {3, s.x}, 10000);
    worst = std::max(worst, rep.deviation);
    ok = ok && rep.pass;
  }
  return {ok, "3 (y,X) settings on n<=1e4, max relative deviation " + fmt(worst)};
}

Outcome divisor_split() {
  auto spec = MollifierSpec::with_length(20, 1000, Polynomial::quadratic_family(0.5));
  vaughan::VaughanConfig cfg{3, 22};
  const std::uint64_t n_max = 10000, d_max = 30, m_limit = 1000;
  auto terms = vaughan::decompose_a2(spec, cfg, n_max);
  auto fns = vaughan::SlotFunctions::build(spec, std::max(n_max, d_max * m_limit));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
  double worst = 0;
  bool ok = true;
  for (int i = 0; i < 20; ++i) {
    const auto& term = terms[pick(rng)];
    for (std::uint64_t d = 1; d <= d_max; ++d) {
      auto rep = vaughan::split_by_divisor(term, fns, d, m_limit);
      worst = std::max(worst, rep.deviation);
      ok = ok && rep.pass && rep.deviation <= 1e-10;
    }
  }
  return {ok, "20 terms x d<=30, m<=1000, max deviation " + fmt(worst)};
}

Outcome rearrangement() {
  double worst = 0;
  int runs = 0;
  for (int nu : {1, 2})
    for (double y : {6.0, 13.0, 20.0, 30.0})
      for (double t : {100.0, 250.0, 400.0}) {
        auto spec = MollifierSpec::with_length(y, t, Polynomial::quadratic_family(0.5));
        auto n = characters::m_nu_table_limit(spec);
        auto a = nu == 1 ? arith::compute_a1(n) : arith::compute_a2(n, mollifier::coefficient_table(spec, n));
        cplx direct = characters::m_nu_direct(nu, spec, a);
        cplx rearranged = characters::m_nu_rearranged(nu, spec, a);
        worst = std::max(worst, std::abs(direct - rearranged) / std::max(1.0, std::abs(direct)));
        ++runs;
      }
  return {worst <= 1e-8, std::to_string(runs) + " (nu,y,T) cases, max relative deviation " + fmt(worst)};
}

Outcome gauss_sums() {
  double worst = 0;
  std::size_t count = 0;
  for (std::uint64_t q = 1; q <= 100; ++q)
    for (const auto& chi : characters::primitive_characters(q)) {
      worst = std::max(worst, characters::gauss_sum(chi).modulus_sqrt_check);
      ++count;
    }
  return {worst < 1e-9, std::to_string(count) + " primitive characters, max ||tau|-sqrt q| " + fmt(worst)};
}

Outcome zeros_and_counting() {
  auto z = zeta::find_zeros(5000);
  double first = z.ordinates.empty() ? 0 : z.ordinates.front();
  auto c100 = zeta::count_N(100, z);
  auto c5000 = zeta::count_N(5000, z);
  bool ok = std::abs(first - 14.134725) <= 1e-6 && c100.census == 29 && c100.formula.value == 29 &&
            c5000.census == c5000.formula.value;
  std::ostringstream os;
  os.precision(12);
  os << "gamma_1=" << first << ", N(100)=" << c100.census << "/" << c100.formula.value
     << ", N(5000)=" << c5000.census << "/" << c5000.formula.value << " (census/formula)";
  return {ok, os.str()};
}

Outcome moments() {
  auto z = zeta::find_zeros(5000);
  bool ok = true;
  std::ostringstream os;
  os.precision(4);
  os << "bands ReS1 [0.8,1.2], S2 [0.5,1.2];";
  for (double th : {0.2, 0.3, 0.4}) {
    auto spec = MollifierSpec::from_theta(th, 5000, Polynomial({1.5, -0.5}));
    auto m = zeta::compute_moments(5000, spec, z);
    auto r = zeta::moment_ratios(m);
    ok = ok && r.s1_ratio >= 0.8 && r.s1_ratio <= 1.2 && r.s2_ratio >= 0.5 && r.s2_ratio <= 1.2 && m.S2 >= 0 &&
         m.kappa_bound > 0 && m.kappa_bound <= 1.01;
    os << " theta=" << th << ": ReS1 " << r.s1_ratio << ", S2 " << r.s2_ratio << ", kappa " << m.kappa_bound
       << ";";
  }
  return {ok, os.str()};
}

Outcome sieve_monitor() {
  auto s = vaughan::hybrid_large_sieve_sweep(200, 1, 20, 200, 20);
  return {s.max_ratio <= 6 && s.max_phase_deviation <= 1e-10,
          "200 trials, max ratio " + fmt(s.max_ratio) + ", phase deviation " + fmt(s.max_phase_deviation)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "constants reproduction", 1, constants},
      {2, "optimal polynomial recovery", 1, optimal_polynomial},
      {3, "Vaughan identity", 10, vaughan_identity},
      {4, "decomposition reconstruction", 30, decomposition},
      {5, "divisor splitting", 30, divisor_split},
      {6, "rearrangement equivalence", 120, rearrangement},
      {7, "Gauss-sum law", 5, gauss_sums},
      {8, "zeros and counting", 120, zeros_and_counting},
      {9, "moments at desk scale", 600, moments},
      {10, "sieve monitor", 60, sieve_monitor},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.pass && secs < c.budget_seconds;
    if (!pass) ++failures;
    std::printf("%s %2d %s: %s [%.2f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.budget_seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
