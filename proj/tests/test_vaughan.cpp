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
#include <functional>
#include <random>

#include "doctest.h"
#include "mollab/error.hpp"
#include "mollab/vaughan.hpp"

using namespace mollab;
using namespace mollab::vaughan;

namespace {

int mu_trial(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

double lambda_trial(std::uint64_t n) {
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
  }
  return 0.0;
}

// Brute-force coefficient of 1^{j-1} * (-log) * mu_X^j at n by recursion over divisors.
double rhs_bruteforce(int r, double x, std::uint64_t n) {
  std::function<double(int, int, std::uint64_t)> rec = [&](int ones, int mus, std::uint64_t m) -> double {
    if (ones > 0) {
      double s = 0;
      for (std::uint64_t d = 1; d <= m; ++d)
        if (m % d == 0) s += rec(ones - 1, mus, m / d);
      return s;
    }
    if (mus > 0) {
      double s = 0;
      for (std::uint64_t d = 1; d <= std::min<std::uint64_t>(m, static_cast<std::uint64_t>(x)); ++d)
        if (m % d == 0) s += mu_trial(d) * rec(0, mus - 1, m / d);
      return s;
    }
    return -std::log(static_cast<double>(m));
  };
  double total = 0, binom = 1;
  for (int j = 1; j <= r; ++j) {
    binom = binom * (r - j + 1) / j;
    total += (j % 2 == 1 ? 1 : -1) * binom * rec(j - 1, j, n);
  }
  return total;
}

}  // namespace

TEST_CASE("vaughan rhs: worked examples") {
  auto c = vaughan_rhs_coefficients({1, 5}, 10);
  CHECK(c(1) == doctest::Approx(0.0));
  CHECK(c(4) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
  auto c3 = vaughan_rhs_coefficients({3, 10}, 1000);
  for (std::uint64_t n = 1; n <= 1000; ++n) REQUIRE(std::abs(c3(n) + lambda_trial(n)) < 1e-9);
}

TEST_CASE("vaughan rhs: brute-force convolution oracle, including beyond X^r") {
  for (auto [r, x] : {std::pair{2, 5.0}, std::pair{3, 4.0}, std::pair{1, 7.0}}) {
    auto c = vaughan_rhs_coefficients({r, x}, 150);
    for (std::uint64_t n = 1; n <= 150; ++n) REQUIRE(c(n) == doctest::Approx(rhs_bruteforce(r, x, n)).epsilon(1e-11));
  }
}

TEST_CASE("verify_vaughan over the admissible grid") {
  for (int r : {1, 2, 3}) {
    for (double x : {5.0, 10.0, 30.0}) {
      auto n = static_cast<std::uint64_t>(std::min(1e5, std::pow(x, r)));
      auto rep = verify_vaughan({r, x}, n);
      CHECK_MESSAGE(rep.pass, rep.to_json().dump());
    }
  }
  CHECK(verify_vaughan({1, 100}, 100).pass);
  CHECK(verify_vaughan({2, 30}, 900).pass);
  CHECK_THROWS_AS(verify_vaughan({3, 10}, 1001), Error);
  CHECK_THROWS_AS(vaughan_rhs_coefficients({0, 10}, 10), Error);
  CHECK_THROWS_AS(vaughan_rhs_coefficients({3, 10}, kTableBudget + 1), Error);
}

TEST_CASE("verify_vaughan beyond X^r would fail") {
  // The remainder is genuinely nonzero past X^r: the first discrepancy sits at a prime power near X^r.
  auto c = vaughan_rhs_coefficients({1, 5}, 40);
  double worst = 0;
  for (std::uint64_t n = 1; n <= 40; ++n) worst = std::max(worst, std::abs(c(n) + lambda_trial(n)));
  CHECK(worst > 0.1);
}

TEST_CASE("decompose_a2: roles, invariants and reconstruction") {
  auto spec = mollifier::MollifierSpec::with_length(20, 1000, mollifier::Polynomial::quadratic_family(0.4));
  VaughanConfig cfg{3, 10};
  auto terms = decompose_a2(spec, cfg, 1000);
  CHECK(terms.size() > 100);
  MESSAGE("terms for y=20, X=10, n<=1000: " << terms.size());
  for (const auto& t : terms) {
    REQUIRE(t.present[0]);
    REQUIRE(t.present[3]);
    if (t.present[3]) REQUIRE(t.range[3] <= spec.y());
    for (int s = 6; s < 9; ++s)
      if (t.present[s]) REQUIRE(t.range[s] <= cfg.X);
    int ones = t.present[4] + t.present[5], mus = t.present[6] + t.present[7] + t.present[8];
    REQUIRE(ones == mus - 1);
    double expected[] = {0, -3, 3, -1};
    REQUIRE(t.weight == expected[mus]);
  }
  CHECK(slot_role(0) == SlotRole::Log);
  CHECK(slot_role(3) == SlotRole::Mollifier);
  CHECK(slot_role(5) == SlotRole::One);
  CHECK(slot_role(8) == SlotRole::Mobius);

  auto rep = verify_decomposition(spec, cfg, 1000);
  CHECK_MESSAGE(rep.pass, rep.to_json().dump());
  auto fns = SlotFunctions::build(spec, 1000);
  CHECK(reconstruct(terms, fns, 1000)[1] == 0.0);
  CHECK_THROWS_AS(decompose_a2(spec, cfg, 1001), Error);
  CHECK_THROWS_AS(decompose_a2(spec, {2, 10}, 100), Error);
}

TEST_CASE("decompose_a2: reconstruction with a non-integral mollifier length") {
  auto spec = mollifier::MollifierSpec::from_theta(0.35, 5000, mollifier::Polynomial::quadratic_family(0.35));
  auto rep = verify_decomposition(spec, {3, 16}, 4000);
  CHECK_MESSAGE(rep.pass, rep.to_json().dump());
}

TEST_CASE("evaluate_term matches a divisor-recursion oracle") {
  auto spec = mollifier::MollifierSpec::with_length(12, 500, mollifier::Polynomial::quadratic_family(0.3));
  auto terms = decompose_a2(spec, {3, 8}, 400);
  auto fns = SlotFunctions::build(spec, 400);
  std::mt19937_64 rng(7);
  auto f_oracle = [&](const DecompositionTerm& t, int slot, std::uint64_t m) -> double {
    if (!t.present[slot]) return m == 1;
    double big_n = t.range[slot];
    if (!(m > big_n / 2 && m <= big_n)) return 0;
    if (slot < 3) return std::log(static_cast<double>(m));
    if (slot == 3) return mollifier::eval_b(m, spec);
    if (slot < 6) return 1;
    return mu_trial(m);
  };
  for (int trial = 0; trial < 15; ++trial) {
    const auto& t = terms[std::uniform_int_distribution<std::size_t>(0, terms.size() - 1)(rng)];
    std::function<double(int, std::uint64_t)> conv = [&](int slot, std::uint64_t m) -> double {
      if (slot == kSlots - 1) return f_oracle(t, slot, m);
      double s = 0;
      for (std::uint64_t d = 1; d <= m; ++d)
        if (m % d == 0) s += f_oracle(t, slot, d) * conv(slot + 1, m / d);
      return s;
    };
    auto v = evaluate_term(t, fns, 400);
    for (std::uint64_t m = 1; m <= 400; m += 3) REQUIRE(v[m] == doctest::Approx(conv(0, m)).epsilon(1e-12));
  }
}

TEST_CASE("ordered factorizations") {
  CHECK(ordered_factorizations(1).size() == 1);
  CHECK(ordered_factorizations(7).size() == 9);
  CHECK(ordered_factorizations(12).size() == 405);  // C(10,2) * 9
  for (const auto& f : ordered_factorizations(30)) {
    std::uint64_t p = 1;
    for (auto x : f) p *= x;
    REQUIRE(p == 30);
  }
}

TEST_CASE("split_by_divisor") {
  auto spec = mollifier::MollifierSpec::with_length(20, 1000, mollifier::Polynomial::quadratic_family(0.4));
  auto terms = decompose_a2(spec, {3, 22}, 10000);
  auto fns = SlotFunctions::build(spec, 12000);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
  auto one = split_by_divisor(terms[pick(rng)], fns, 1, 500);
  CHECK(one.pass);
  CHECK(one.parameters["factorizations"] == 1);
  for (int i = 0; i < 5; ++i) {
    auto rep = split_by_divisor(terms[pick(rng)], fns, 12, 500);
    CHECK_MESSAGE(rep.pass, rep.to_json().dump());
  }
  CHECK_THROWS_AS(split_by_divisor(terms[0], fns, 30, 1000), Error);  // beyond the tabulated range
}

TEST_CASE("perron truncation") {
  auto a = perron_truncation(10, 1e4, 3);
  CHECK(std::abs(a.value - 1) < 0.01);
  CHECK(a.indicator == 1);
  auto b = perron_truncation(10, 1e4, 30);
  CHECK(std::abs(b.value) < 0.01);
  CHECK(b.indicator == 0);

  // Direct quadrature of the untransformed integrand at small U.
  for (auto [m_big, u, m] : {std::tuple{10.0, 40.0, 7ull}, std::tuple{5.0, 25.0, 6ull}, std::tuple{20.0, 30.0, 21ull}}) {
    double m0 = m_big + 0.5, lambda = std::log(m0 / m), delta = 1 / std::log(m_big);
    double direct = 0;
    for (double t0 = 0; t0 < u; t0 += 0.25)
      direct += gauss_legendre_64(
          [&](double t) { return (delta * std::cos(lambda * t) + t * std::sin(lambda * t)) / (delta * delta + t * t); },
          t0, std::min(u, t0 + 0.25));
    direct *= std::exp(delta * lambda) / kPi;
    CHECK(perron_truncation(m_big, u, m).value == doctest::Approx(direct).epsilon(1e-10));
  }

  std::mt19937_64 rng(11);
  double worst = 0;
  for (int i = 0; i < 40; ++i) {
    double m_big = std::uniform_int_distribution<int>(2, 100)(rng);
    double u = m_big * std::uniform_real_distribution<double>(100, 400)(rng);
    auto m = std::uniform_int_distribution<std::uint64_t>(1, static_cast<std::uint64_t>(3 * m_big))(rng);
    auto r = perron_truncation(m_big, u, m);
    worst = std::max(worst, r.deviation * u / m_big);
  }
  MESSAGE("observed max |result - indicator| U / M = " << worst);
  CHECK(worst <= 5);
  CHECK_THROWS_AS(perron_truncation(1, 10, 1), Error);
}

TEST_CASE("dyadic plan") {
  PlanInput in;
  in.T = 1e6;
  in.y = 1e3;
  in.Q = 256;
  in.K = 8;
  in.D = 2;
  in.M.fill(1);
  auto p = build_dyadic_plan(in);
  CHECK(p.A == 1);
  CHECK(p.B == 1);
  CHECK(p.J == 9);
  CHECK(p.X == doctest::Approx(in.K * in.Q * in.T / (kPi * in.D)).epsilon(1e-12));
  CHECK(p.A0 == doctest::Approx(std::max(in.y * std::sqrt(in.T), std::pow(in.K * in.Q * in.T / in.D, 2.0 / 3))));
  CHECK(p.U == doctest::Approx(std::pow(in.T, 5)));

  in.M[0] = in.y * std::sqrt(in.T);
  p = build_dyadic_plan(in);
  CHECK(p.A == doctest::Approx(in.M[0]));
  CHECK(p.B == 1);
  CHECK_FALSE(p.partial_summation_case);

  auto bad = in;
  bad.Q = 4;
  CHECK_THROWS_WITH_AS(build_dyadic_plan(bad), doctest::Contains("eta"), Error);
  bad = in;
  bad.D = 16;
  CHECK_THROWS_WITH_AS(build_dyadic_plan(bad), doctest::Contains("exceeds K"), Error);
  bad = in;
  bad.K = 64;
  CHECK_THROWS_WITH_AS(build_dyadic_plan(bad), doctest::Contains("4y"), Error);

  auto rep = verify_dyadic_plans(1000, 5);
  CHECK_MESSAGE(rep.pass, rep.to_json().dump());
}

TEST_CASE("hybrid large sieve monitor") {
  std::vector<cplx> h1{1.0};
  CHECK(hybrid_large_sieve_monitor(10, 0, h1).lhs == 0);
  for (std::uint64_t q = 1; q <= 30; ++q) {
    auto rep = hybrid_large_sieve_monitor(q, 5, h1);
    std::size_t prim = 0;
    for (auto m : dyadic_moduli(q)) prim += characters::primitive_characters(m).size();
    REQUIRE(rep.lhs == doctest::Approx(10.0 * prim));
    REQUIRE(rep.ratio <= 2);
  }
  CHECK_THROWS_AS(hybrid_large_sieve_monitor(5, 1, std::vector<cplx>(4)), Error);

  // Numerical t-integral of |sum h_m psi(m) m^{-it}|^2 as an oracle for the kernel form.
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::vector<cplx> h(7);
  for (auto& x : h) x = {g(rng), g(rng)};
  double v = 3;
  double oracle = 0;
  for (auto q : dyadic_moduli(6)) {
    for (const auto& psi : characters::primitive_characters(q)) {
      for (double a = -v; a < v; a += 0.5) {
        oracle += gauss_legendre_64(
            [&](double t) {
              cplx s{};
              for (std::size_t m = 1; m <= h.size(); ++m)
                s += h[m - 1] * psi(static_cast<std::int64_t>(m)) * std::polar(1.0, -t * std::log(double(m)));
              return std::norm(s);
            },
            a, a + 0.5);
      }
    }
  }
  CHECK(hybrid_large_sieve_monitor(6, v, h).lhs == doctest::Approx(oracle).epsilon(1e-10));

  auto sweep = hybrid_large_sieve_sweep(60, 9);
  CHECK(sweep.max_phase_deviation < 1e-10);
  CHECK(sweep.max_ratio <= 6);
}

TEST_CASE("dyadic band convention") {
  CHECK(dyadic_moduli(1) == std::vector<std::uint64_t>{1});
  CHECK(dyadic_moduli(2) == std::vector<std::uint64_t>{2});
  CHECK(dyadic_moduli(8) == std::vector<std::uint64_t>{5, 6, 7, 8});
  CHECK(dyadic_moduli(9) == std::vector<std::uint64_t>{5, 6, 7, 8, 9});
}

TEST_CASE("S(Q, X, d) brute force") {
  // a = indicator of 1 counts primitive characters in the band.
  std::vector<double> ind(100, 0.0);
  ind[0] = 1;
  arith::ArithFnTable delta("delta", ind);
  for (std::uint64_t q : {1, 2, 8, 16}) {
    std::size_t prim = 0;
    for (auto m : dyadic_moduli(q)) prim += characters::primitive_characters(m).size();
    CHECK(s_qxd_bruteforce(q, 50, 1, delta) == doctest::Approx(static_cast<double>(prim)));
  }
  // Q = 1: the band is {1} and the single character is trivial.
  auto a1 = arith::compute_a1(500);
  double best = 0, run = 0;
  for (std::uint64_t m = 1; m <= 500; ++m) {
    run += a1(m);
    best = std::max(best, std::abs(run));
  }
  CHECK(s_qxd_bruteforce(1, 500, 1, a1) == doctest::Approx(best));

  // Independent double loop with characters built from their exponents.
  auto spec = mollifier::MollifierSpec::with_length(10, 1000, mollifier::Polynomial::linear());
  double oracle = 0;
  for (std::uint64_t q = 5; q <= 8; ++q) {
    for (const auto& psi : characters::enumerate_characters(q)) {
      if (!psi.is_primitive()) continue;
      double re = 0, im = 0, mx = 0;
      for (std::uint64_t m = 1; m <= 500; ++m) {
        auto e = psi.exponent(static_cast<std::int64_t>(m));
        if (e < 0) continue;
        double ang = kTwoPi * double(e) / double(psi.exponent_base());
        re += a1(m) * std::cos(ang);
        im += a1(m) * std::sin(ang);
        mx = std::max(mx, std::hypot(re, im));
      }
      oracle += mx;
    }
  }
  CHECK(s_qxd_bruteforce(8, 500, 1, 1, spec) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK_THROWS_AS(s_qxd_bruteforce(16, 2000, 200, 1, spec), Error);
}
