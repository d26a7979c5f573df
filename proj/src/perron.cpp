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
#include <string>

#include "mollab/error.hpp"
#include "mollab/vaughan.hpp"

namespace mollab::vaughan {

// With x = M0/m, lambda = log x and s = delta + it,
//   (1/2 pi i) int x^s ds/s = (x^delta/pi) int_0^U (delta cos(lambda t) + t sin(lambda t)) / (delta^2 + t^2) dt.
// Splitting t/(delta^2 + t^2) = 1/t - delta^2/(t (delta^2 + t^2)) leaves Si(lambda U) plus a
// remainder with a 1/t^2 tail, integrated panel by panel over half periods.
PerronResult perron_truncation(double big_m, double u, std::uint64_t m) {
  require(big_m >= 2, "perron_truncation: M must be at least 2");
  require(u > 0, "perron_truncation: U must be positive");
  require(m >= 1, "perron_truncation: m must be positive");
  double m0 = big_m + 0.5;
  double lambda = std::log(m0 / static_cast<double>(m));
  if (lambda == 0) throw Error(ErrorCode::Domain, "perron_truncation: m coincides with M + 1/2");
  double delta = 1 / std::log(big_m);

  auto remainder = [&](double t) {
    // sin(lambda t)/t is taken by its limit lambda at t = 0.
    double sinc = t == 0 ? lambda : std::sin(lambda * t) / t;
    return delta * (std::cos(lambda * t) - delta * sinc) / (delta * delta + t * t);
  };
  double panel = kPi / std::abs(lambda);
  KahanSum integral;
  for (double a = 0; a < u; a += panel) {
    double b = std::min(u, a + panel);
    integral.add(adaptive_quad(remainder, a, b, 1e-14));
  }

  PerronResult res;
  res.value = std::exp(delta * lambda) / kPi * (sine_integral(lambda * u) + integral.value());
  res.indicator = static_cast<double>(m) <= big_m ? 1.0 : 0.0;
  res.deviation = std::abs(res.value - res.indicator);
  return res;
}

}  // namespace mollab::vaughan
