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

#include "mollab/arith.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "mollab/error.hpp"
#include "mollab/numeric.hpp"

namespace mollab::arith {

ArithFnTable::ArithFnTable(std::string name, std::vector<double> values) : name_(std::move(name)) {
  require(!values.empty(), "arithmetic function table '" + name_ + "' must have N >= 1");
  values_.reserve(values.size() + 1);
  values_.push_back(0.0);
  values_.insert(values_.end(), values.begin(), values.end());
}

double ArithFnTable::at(std::uint64_t n) const {
  require(n >= 1 && n <= limit(), "index " + std::to_string(n) + " outside table '" + name_ +
                                      "' of limit " + std::to_string(limit()));
  return values_[n];
}

ArithFnTable ArithFnTable::truncated(std::uint64_t n) const {
  require(n >= 1 && n <= limit(), "cannot truncate '" + name_ + "' to " + std::to_string(n));
  return ArithFnTable(name_, std::vector<double>(values_.begin() + 1, values_.begin() + 1 + n));
}

std::vector<std::uint32_t> smallest_prime_factors(std::uint64_t n) {
  std::vector<std::uint32_t> spf(n + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      if (p > spf[i] || i * p > n) break;
      spf[i * p] = p;
    }
  }
  return spf;
}

std::vector<std::int8_t> mobius_values(std::uint64_t n) {
  auto spf = smallest_prime_factors(n);
  std::vector<std::int8_t> mu(n + 1, 0);
  if (n >= 1) mu[1] = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    std::uint64_t p = spf[i], m = i / p;
    mu[i] = (m % p == 0) ? 0 : static_cast<std::int8_t>(-mu[m]);
  }
  return mu;
}

namespace {

ArithFnTable tau_k(int k, std::uint64_t n) {
  static std::mutex mu;
  static std::map<int, ArithFnTable> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(k);
    if (it != cache.end() && it->second.limit() >= n) return it->second.truncated(n);
  }
  ArithFnTable one = sieve_standard("one", n);
  ArithFnTable acc = one;
  for (int i = 1; i < k; ++i) acc = dirichlet_convolve(acc, one, n);
  ArithFnTable out("tau_" + std::to_string(k), std::vector<double>(acc.values().begin(), acc.values().end()));
  std::lock_guard lock(mu);
  auto it = cache.find(k);
  if (it == cache.end() || it->second.limit() < n) cache.insert_or_assign(k, out);
  return out;
}

}  // namespace

ArithFnTable sieve_standard(std::string_view name, std::uint64_t n) {
  require(n >= 1, "sieve_standard: N must be >= 1");
  std::vector<double> v(n);
  if (name == "one") {
    std::fill(v.begin(), v.end(), 1.0);
  } else if (name == "log") {
    for (std::uint64_t i = 1; i <= n; ++i) v[i - 1] = std::log(static_cast<double>(i));
  } else if (name == "mobius") {
    auto mu = mobius_values(n);
    for (std::uint64_t i = 1; i <= n; ++i) v[i - 1] = mu[i];
  } else if (name == "vonmangoldt") {
    auto spf = smallest_prime_factors(n);
    for (std::uint64_t i = 2; i <= n; ++i) {
      std::uint64_t p = spf[i], m = i;
      while (m % p == 0) m /= p;
      if (m == 1) v[i - 1] = std::log(static_cast<double>(p));
    }
  } else if (name.size() == 5 && name.substr(0, 4) == "tau_" && name[4] >= '2' && name[4] <= '9') {
    return tau_k(name[4] - '0', n);
  } else {
    reject("sieve_standard: unknown function '" + std::string(name) + "'");
  }
  return ArithFnTable(std::string(name), std::move(v));
}

ArithFnTable dirichlet_convolve(const ArithFnTable& f, const ArithFnTable& g, std::uint64_t n) {
  require(n >= 1, "dirichlet_convolve: N must be >= 1");
  require(n <= f.limit() && n <= g.limit(),
          "dirichlet_convolve: N = " + std::to_string(n) + " exceeds input limits (" +
              std::to_string(f.limit()) + ", " + std::to_string(g.limit()) + ")");
  std::vector<KahanSum> acc(n + 1);
  for (std::uint64_t d = 1; d <= n; ++d) {
    double fd = f(d);
    if (fd == 0.0) continue;
    for (std::uint64_t e = 1, m = d; m <= n; ++e, m += d) {
      double ge = g(e);
      if (ge != 0.0) acc[m].add(fd * ge);
    }
  }
  std::vector<double> v(n);
  for (std::uint64_t i = 1; i <= n; ++i) v[i - 1] = acc[i].value();
  return ArithFnTable(f.name() + "*" + g.name(), std::move(v));
}

ArithFnTable compute_a1(std::uint64_t n) {
  auto out = dirichlet_convolve(sieve_standard("vonmangoldt", n), sieve_standard("log", n), n);
  return ArithFnTable("a1", std::vector<double>(out.values().begin(), out.values().end()));
}

ArithFnTable compute_a2(std::uint64_t n, const ArithFnTable& b) {
  require(n >= 1, "compute_a2: N must be >= 1");
  require(b.limit() >= n, "compute_a2: mollifier table of limit " + std::to_string(b.limit()) +
                              " is shorter than N = " + std::to_string(n));
  auto lg = sieve_standard("log", n);
  auto t = dirichlet_convolve(compute_a1(n), lg, n);
  t = dirichlet_convolve(t, b, n);
  std::vector<double> v(t.values().begin(), t.values().end());
  for (auto& x : v) x = -x;
  return ArithFnTable("a2", std::move(v));
}

GrowthReport a2_growth_monitor(const ArithFnTable& a2, double log_height, double max_abs_poly) {
  GrowthReport r;
  r.log_height = log_height;
  r.max_abs_poly = max_abs_poly;
  auto tau9 = sieve_standard("tau_9", a2.limit());
  double scale = std::pow(log_height, 3) * max_abs_poly;
  for (std::uint64_t n = 1; n <= a2.limit(); ++n) {
    double env = scale * tau9(n);
    double ratio = env > 0 ? std::abs(a2(n)) / env : (a2(n) == 0 ? 0.0 : INFINITY);
    if (ratio > r.worst_ratio) {
      r.worst_ratio = ratio;
      r.worst_index = n;
    }
    if (ratio > 1.0) ++r.violations;
  }
  return r;
}

namespace {

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((bits >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return out;
  }
  return bits;
}

}  // namespace

void save_table(const std::filesystem::path& path, const ArithFnTable& table) {
  require(table.name().find_first_of(" \t\n") == std::string::npos,
          "save_table: table names with whitespace cannot be cached");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << "arithfn " << table.name() << ' ' << table.limit() << '\n';
  for (double x : table.values()) {
    std::uint64_t le = to_little_endian(std::bit_cast<std::uint64_t>(x));
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

ArithFnTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic, name;
  std::uint64_t n = 0;
  if (!(hs >> magic >> name >> n) || magic != "arithfn" || n == 0)
    throw Error(ErrorCode::Io, path.string() + ": bad arithfn header '" + header + "'");
  std::vector<double> v(n);
  for (auto& x : v) {
    std::uint64_t le = 0;
    if (!in.read(reinterpret_cast<char*>(&le), sizeof le))
      throw Error(ErrorCode::Io, path.string() + ": truncated payload");
    x = std::bit_cast<double>(to_little_endian(le));
  }
  return ArithFnTable(name, std::move(v));
}

}  // namespace mollab::arith
