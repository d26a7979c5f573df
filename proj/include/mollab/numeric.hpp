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

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>

namespace mollab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Neumaier-compensated accumulator.
struct KahanSum {
  double sum = 0, comp = 0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  KahanSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum + comp; }
};

struct KahanSumComplex {
  KahanSum re, im;
  void add(cplx x) {
    re.add(x.real());
    im.add(x.imag());
  }
  KahanSumComplex& operator+=(cplx x) {
    add(x);
    return *this;
  }
  cplx value() const { return {re.value(), im.value()}; }
};

/// e(x) = exp(2 pi i x).
inline cplx unit_phase(double x) {
  // Reduce first so large arguments keep their fractional accuracy.
  double f = x - std::floor(x);
  return {std::cos(kTwoPi * f), std::sin(kTwoPi * f)};
}

/// Fixed 64-node Gauss-Legendre rule on [a, b].
double gauss_legendre_64(const std::function<double(double)>& f, double a, double b);

/// Adaptive Gauss-Kronrod (7/15) quadrature to absolute tolerance `tol`.
double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-13, int max_depth = 40);

/// Sine integral Si(x).
double sine_integral(double x);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

/// Runs body(i) for i in [0, n) over at most `threads` workers. Work is split
/// into contiguous blocks; results must be written to per-index slots.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Process-wide worker cap (0 = hardware concurrency).
unsigned worker_threads();
void set_worker_threads(unsigned n);

}  // namespace mollab
