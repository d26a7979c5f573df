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

#include "mollab/numeric.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mollab {

namespace {

struct GaussLegendreRule {
  std::array<double, 64> x{}, w{};
  GaussLegendreRule() {
    constexpr int n = 64;
    for (int i = 0; i < n / 2; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = w[n - 1 - i] = 2.0 / ((1 - z * z) * dp * dp);
    }
  }
};

const GaussLegendreRule& gl64() {
  static const GaussLegendreRule rule;
  return rule;
}

// QUADPACK G7/K15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b, double& kronrod,
          double& err) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double rk = fc * kWgk[7], rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double dx = h * kXgk[j];
    double s = f(c - dx) + f(c + dx);
    rk += kWgk[j] * s;
    if (j % 2 == 1) rg += kWg[j / 2] * s;
  }
  kronrod = rk * h;
  err = std::abs((rk - rg) * h);
}

double adaptive_rec(const std::function<double(double)>& f, double a, double b, double tol,
                    int depth) {
  double k, e;
  gk15(f, a, b, k, e);
  if (e <= tol || depth <= 0) return k;
  double m = 0.5 * (a + b);
  return adaptive_rec(f, a, m, 0.5 * tol, depth - 1) + adaptive_rec(f, m, b, 0.5 * tol, depth - 1);
}

std::atomic<unsigned> g_threads{0};

}  // namespace

double gauss_legendre_64(const std::function<double(double)>& f, double a, double b) {
  const auto& r = gl64();
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < 64; ++i) s += r.w[i] * f(c + h * r.x[i]);
  return s * h;
}

double adaptive_quad(const std::function<double(double)>& f, double a, double b, double tol,
                     int max_depth) {
  return adaptive_rec(f, a, b, tol, max_depth);
}

double sine_integral(double x) {
  if (x < 0) return -sine_integral(-x);
  if (x == 0) return 0;
  if (x <= 2) {
    // Power series; terms alternate and shrink quickly on [0, 2].
    double term = x, sum = x;
    for (int k = 1; k < 40; ++k) {
      term *= -x * x / ((2.0 * k) * (2.0 * k + 1));
      double add = term / (2.0 * k + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  // Continued fraction for E1(ix) (modified Lentz), then Si = pi/2 + Im(h).
  constexpr double tiny = 1e-300;
  cplx b(1.0, x);
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 100000; ++i) {
    double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    cplx del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
  }
  h *= cplx(std::cos(x), -std::sin(x));
  return 0.5 * kPi + h.imag();
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

unsigned worker_threads() {
  unsigned n = g_threads.load();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

void set_worker_threads(unsigned n) { g_threads.store(n); }

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::size_t block = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = t * block, hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mollab
