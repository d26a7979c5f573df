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

// Arithmetic-function tables on [1..N] and exact Dirichlet convolution.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mollab::arith {

/// Values of an arithmetic function on 1..N. Immutable after construction.
class ArithFnTable {
 public:
  /// `values[i]` holds f(i + 1).
  ArithFnTable(std::string name, std::vector<double> values);

  const std::string& name() const { return name_; }
  std::uint64_t limit() const { return values_.size() - 1; }

  /// f(n) for 1 <= n <= limit(). Unchecked.
  double operator()(std::uint64_t n) const { return values_[n]; }
  double at(std::uint64_t n) const;

  /// f(1..N) as a span of length N.
  std::span<const double> values() const { return {values_.data() + 1, values_.size() - 1}; }

  /// Copy restricted to 1..n (n <= limit()).
  ArithFnTable truncated(std::uint64_t n) const;

 private:
  std::string name_;
  std::vector<double> values_;  // values_[0] is a zero pad for n = 0
};

/// Standard functions: "mobius", "vonmangoldt", "log", "one", "tau_2".."tau_9".
ArithFnTable sieve_standard(std::string_view name, std::uint64_t n);

/// Integer Moebius values mu(0..n) with mu(0) = 0.
std::vector<std::int8_t> mobius_values(std::uint64_t n);

/// Smallest prime factor spf(0..n); spf(0) = spf(1) = 0.
std::vector<std::uint32_t> smallest_prime_factors(std::uint64_t n);

/// (f*g)(n) = sum_{de=n} f(d) g(e) on 1..n with compensated accumulation.
ArithFnTable dirichlet_convolve(const ArithFnTable& f, const ArithFnTable& g, std::uint64_t n);

/// a1 = Lambda * log, the coefficients of (zeta'/zeta) zeta'.
ArithFnTable compute_a1(std::uint64_t n);

/// a2 = -Lambda * log * log * b, the coefficients of (zeta'/zeta) zeta'^2 B.
ArithFnTable compute_a2(std::uint64_t n, const ArithFnTable& b);

struct GrowthReport {
  double log_height = 0;     // L = log(T / 2pi)
  double max_abs_poly = 0;   // max |P| on [0, 1]
  double worst_ratio = 0;    // max |a2(n)| / (L^3 tau_9(n) max|P|)
  std::uint64_t worst_index = 0;
  std::uint64_t violations = 0;
};

/// Reports how a2 compares with the envelope L^3 tau_9(n) max|P|. Violations
/// are counted, not treated as errors.
GrowthReport a2_growth_monitor(const ArithFnTable& a2, double log_height, double max_abs_poly);

/// Binary cache: text header line "arithfn <name> <N>" followed by N
/// little-endian IEEE-754 doubles.
void save_table(const std::filesystem::path& path, const ArithFnTable& table);
ArithFnTable load_table(const std::filesystem::path& path);

}  // namespace mollab::arith
