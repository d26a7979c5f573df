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

#include "mollab/vaughan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mollab/error.hpp"

namespace mollab::vaughan {

namespace {

double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// out = f * g on 1..n where g is supported on 1..g_support.
std::vector<double> convolve_short(const std::vector<double>& f, const std::vector<double>& g,
                                   std::uint64_t g_support, std::uint64_t n) {
  std::vector<double> out(n + 1, 0.0);
  for (std::uint64_t d = 1; d <= std::min(g_support, n); ++d) {
    double gd = g[d];
    if (gd == 0) continue;
    for (std::uint64_t m = 1, k = d; k <= n; ++m, k += d) out[k] += gd * f[m];
  }
  return out;
}

// out = f * 1 on 1..n.
std::vector<double> convolve_one(const std::vector<double>& f, std::uint64_t n) {
  std::vector<double> out(n + 1, 0.0);
  for (std::uint64_t m = 1; m <= n; ++m) {
    double fm = f[m];
    if (fm == 0) continue;
    for (std::uint64_t k = m; k <= n; k += m) out[k] += fm;
  }
  return out;
}

}  // namespace

arith::ArithFnTable vaughan_rhs_coefficients(const VaughanConfig& config, std::uint64_t n) {
  require(config.r >= 1, "vaughan: r must be at least 1");
  require(config.X >= 1, "vaughan: X must be at least 1");
  require(n >= 1, "vaughan: N must be at least 1");
  require(n <= kTableBudget, "vaughan: N = " + std::to_string(n) + " exceeds the table budget");

  auto x_support = static_cast<std::uint64_t>(std::floor(config.X));
  auto mu = arith::mobius_values(std::min(x_support, n));
  std::vector<double> mu_x(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) mu_x[i] = mu[i];

  // h_j = (-log) * mu_X^j, built incrementally; term j adds j - 1 copies of 1.
  std::vector<double> h(n + 1, 0.0);
  for (std::uint64_t m = 2; m <= n; ++m) h[m] = -std::log(static_cast<double>(m));

  std::vector<KahanSum> acc(n + 1);
  for (int j = 1; j <= config.r; ++j) {
    h = convolve_short(h, mu_x, mu_x.size() - 1, n);
    std::vector<double> term = h;
    for (int c = 0; c < j - 1; ++c) term = convolve_one(term, n);
    double w = (j % 2 == 1 ? 1.0 : -1.0) * binomial(config.r, j);
    for (std::uint64_t m = 1; m <= n; ++m) acc[m].add(w * term[m]);
  }
  std::vector<double> values(n);
  for (std::uint64_t m = 1; m <= n; ++m) values[m - 1] = acc[m].value();
  return {"vaughan_rhs", std::move(values)};
}

CheckReport verify_vaughan(const VaughanConfig& config, std::uint64_t n) {
  require(config.r >= 1, "vaughan: r must be at least 1");
  require(config.X >= 1, "vaughan: X must be at least 1");
  double zone = std::pow(config.X, config.r);
  if (static_cast<double>(n) > zone * (1 + 1e-12))
    reject("verify_vaughan: N = " + std::to_string(n) + " exceeds X^r = " + format_double(zone) +
           "; the remainder term is nonzero there");

  auto rhs = vaughan_rhs_coefficients(config, n);
  auto lambda = arith::sieve_standard("vonmangoldt", n);

  CheckReport rep;
  rep.check = "vaughan_identity";
  rep.parameters = {{"r", config.r}, {"X", config.X}, {"N", n}};
  rep.tolerance = 1e-9 * std::max(1.0, std::log(static_cast<double>(n)));
  std::uint64_t worst = 1;
  for (std::uint64_t m = 1; m <= n; ++m) {
    double dev = std::abs(rhs(m) + lambda(m));
    if (dev > rep.deviation) {
      rep.deviation = dev;
      worst = m;
    }
  }
  rep.worst_case = {{"n", worst}, {"rhs", rhs(worst)}, {"minus_lambda", -lambda(worst)}};
  rep.pass = rep.deviation <= rep.tolerance;
  return rep;
}

std::vector<std::uint64_t> dyadic_moduli(std::uint64_t big_q) {
  require(big_q >= 1, "dyadic band: Q must be at least 1");
  if (big_q == 1) return {1};
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = big_q / 2 + 1; q <= big_q; ++q)
    if (q >= 2) out.push_back(q);
  return out;
}

double s_qxd_bruteforce(std::uint64_t big_q, std::uint64_t x, std::uint64_t d, const arith::ArithFnTable& a) {
  require(big_q >= 1 && x >= 1 && d >= 1, "s_qxd: Q, X and d must be positive");
  require(big_q * x * d <= kTableBudget, "s_qxd: Q X d exceeds the table budget");
  require(a.limit() >= x * d, "s_qxd: coefficient table shorter than X d");

  KahanSum total;
  for (auto q : dyadic_moduli(big_q)) {
    for (const auto& psi : characters::primitive_characters(q)) {
      cplx partial{};
      double best = 0;
      for (std::uint64_t m = 1; m <= x; ++m) {
        partial += a(m * d) * psi(static_cast<std::int64_t>(m));
        best = std::max(best, std::abs(partial));
      }
      total.add(best);
    }
  }
  return total.value();
}

double s_qxd_bruteforce(std::uint64_t big_q, std::uint64_t x, std::uint64_t d, int nu,
                        const mollifier::MollifierSpec& spec) {
  require(nu == 1 || nu == 2, "s_qxd: nu must be 1 or 2");
  require(big_q >= 1 && x >= 1 && d >= 1, "s_qxd: Q, X and d must be positive");
  require(big_q * x * d <= kTableBudget, "s_qxd: Q X d exceeds the table budget");
  std::uint64_t n = x * d;
  auto a = nu == 1 ? arith::compute_a1(n) : arith::compute_a2(n, mollifier::coefficient_table(spec, n));
  return s_qxd_bruteforce(big_q, x, d, a);
}

}  // namespace mollab::vaughan
