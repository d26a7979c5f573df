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

// 50-digit Euler-Maclaurin zeta and Stirling log-gamma, used only as test oracles.

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <complex>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;
using Complex = boost::multiprecision::cpp_complex_50;

inline Complex zeta_mp(const Complex& s, int n = 0, int terms = 40) {
  using boost::multiprecision::abs;
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  if (n == 0) n = 30 + static_cast<int>(abs(s).convert_to<double>());
  Complex sum = 0;
  for (int k = 1; k < n; ++k) sum += exp(-s * log(Real(k)));
  Real dn = n;
  Complex ns = exp(-s * log(dn));
  sum += dn * ns / (s - Real(1)) + ns / Real(2);
  Complex term = s * ns / dn;
  Real fact = 1;
  for (int k = 1; k <= terms; ++k) {
    fact *= Real((2 * k - 1) * (2 * k));
    sum += boost::math::bernoulli_b2n<Real>(k) / fact * term;
    term *= (s + Real(2 * k - 1)) * (s + Real(2 * k)) / (dn * dn);
  }
  return sum;
}

inline std::complex<double> zeta(std::complex<double> s) {
  auto z = zeta_mp(Complex(Real(s.real()), Real(s.imag())));
  return {z.real().convert_to<double>(), z.imag().convert_to<double>()};
}

// Im log Gamma(1/4 + it/2) - (t/2) log pi on the continuous branch.
inline double theta(double t) {
  using boost::multiprecision::log;
  Complex z(Real(0.25), Real(t) / 2);
  Complex shift = 0;
  while (abs(z) < 40) {
    shift += log(z);
    z += Real(1);
  }
  Complex series = 0, zpow = z;
  for (int k = 1; k <= 20; ++k) {
    series += boost::math::bernoulli_b2n<Real>(k) / (Real(2 * k) * Real(2 * k - 1) * zpow);
    zpow *= z * z;
  }
  Real pi = boost::math::constants::pi<Real>();
  Complex lg = (z - Real(0.5)) * log(z) - z + log(2 * pi) / 2 + series - shift;
  return (lg.imag() - Real(t) / 2 * log(pi)).convert_to<double>();
}

}  // namespace oracle
