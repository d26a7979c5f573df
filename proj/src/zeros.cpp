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
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "mollab/error.hpp"
#include "mollab/report.hpp"
#include "mollab/zeta.hpp"

namespace mollab::zeta {

std::size_t ZeroList::count_up_to(double t) const {
  return static_cast<std::size_t>(std::upper_bound(ordinates.begin(), ordinates.end(), t) - ordinates.begin());
}

namespace {

// Solves theta(g) = n pi by Newton's method from `guess` (theta is increasing past t = 7).
double gram_point(std::int64_t n, double guess) {
  double g = std::max(guess, 7.0);
  for (int it = 0; it < 60; ++it) {
    double step = (rs_theta(g) - static_cast<double>(n) * kPi) / rs_theta_prime(g);
    g = std::max(g - step, 7.0);
    if (std::abs(step) < 1e-13 * g) break;
  }
  return g;
}

// arg zeta(s) increments are summed between consecutive samples; a sample
// interval is split until each increment is below pi/4.
double arg_along(double t, double sigma_from, double sigma_to, cplx z_from, int depth = 0) {
  cplx z_to = zeta_em(cplx(sigma_to, t));
  double d = std::arg(z_to / z_from);
  if (std::abs(d) < kPi / 4 || depth > 40) return d;
  double mid = 0.5 * (sigma_from + sigma_to);
  cplx z_mid = zeta_em(cplx(mid, t));
  return arg_along(t, sigma_from, mid, z_from, depth + 1) + arg_along(t, mid, sigma_to, z_mid, depth + 1);
}

double bisect_zero(double a, double b, double za) {
  for (int it = 0; it < 200 && b - a > 1e-9; ++it) {
    double m = 0.5 * (a + b);
    double zm = hardy_Z(m);
    if (zm == 0) return m;
    if ((zm < 0) == (za < 0)) {
      a = m;
      za = zm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Zeros in (lo, hi] from a grid whose spacing is at most scale * 0.2 / log t.
std::vector<double> scan(double lo, double hi, double scale) {
  std::vector<double> out;
  double t = lo, z = hardy_Z(lo);
  while (t < hi) {
    double h = scale * 0.2 / std::log(std::max(t, std::exp(1.0)));
    double next = std::min(hi, t + h);
    double zn = hardy_Z(next);
    if (zn == 0) {
      out.push_back(next);
    } else if (z != 0 && (zn < 0) != (z < 0)) {
      out.push_back(bisect_zero(t, next, z));
    }
    t = next;
    z = zn;
  }
  return out;
}

}  // namespace

FormulaCount count_formula(double t) {
  require(t > 0, "count_formula: T must be positive");
  FormulaCount fc;
  fc.smooth = rs_theta(t) / kPi + 1;
  // Re zeta(2 + it) > 0, so the vertical leg contributes the principal argument.
  cplx z2 = zeta_em(cplx(2.0, t));
  double arg = std::arg(z2);
  constexpr int pieces = 24;
  cplx z_prev = z2;
  for (int i = 0; i < pieces; ++i) {
    double s0 = 2.0 - 1.5 * i / pieces, s1 = 2.0 - 1.5 * (i + 1) / pieces;
    arg += arg_along(t, s0, s1, z_prev);
    z_prev = zeta_em(cplx(s1, t));
  }
  fc.s_of_t = arg / kPi;
  fc.value = std::llround(fc.smooth + fc.s_of_t);
  return fc;
}

ZeroList find_zeros(double t_max) {
  require(t_max > 0 && t_max <= 1e5, "find_zeros: T must lie in (0, 1e5]");
  ZeroList zl;
  zl.max_height = t_max;
  zl.source = ZeroSource::Computed;
  if (t_max < 14) return zl;

  // Block boundaries at Gram points g_{-1}, g_{s}, g_{2s}, ..., then T.
  double t0 = gram_point(-1, 10.0);
  double span = rs_theta(t_max) / kPi;
  auto total = static_cast<std::int64_t>(std::ceil(std::max(span, 1.0)));
  std::int64_t stride = std::max<std::int64_t>(100, (total + 63) / 64);
  std::vector<double> bounds{t0};
  for (std::int64_t n = stride - 1; n < total; n += stride) {
    double g = gram_point(n, bounds.back() + 1.0);
    if (g >= t_max) break;
    bounds.push_back(g);
  }
  bounds.push_back(t_max);

  const std::size_t blocks = bounds.size() - 1;
  std::vector<std::int64_t> formula(bounds.size(), 0);
  parallel_for(bounds.size() - 1, worker_threads(),
               [&](std::size_t i) { formula[i + 1] = count_formula(bounds[i + 1]).value; });

  std::vector<std::vector<double>> found(blocks);
  std::vector<std::string> failure(blocks);
  parallel_for(blocks, worker_threads(), [&](std::size_t b) {
    std::int64_t expected = formula[b + 1] - formula[b];
    double scale = 1;
    for (int attempt = 0; attempt < 12; ++attempt, scale /= 2) {
      found[b] = scan(bounds[b], bounds[b + 1], scale);
      if (static_cast<std::int64_t>(found[b].size()) == expected) return;
    }
    failure[b] = "find_zeros: census " + std::to_string(found[b].size()) + " in [" + format_double(bounds[b]) +
                 ", " + format_double(bounds[b + 1]) + "] disagrees with the argument-principle count " +
                 std::to_string(expected) + " after step refinement";
  });
  for (const auto& f : failure)
    if (!f.empty()) throw Error(ErrorCode::CheckFailed, f);
  for (auto& f : found) zl.ordinates.insert(zl.ordinates.end(), f.begin(), f.end());
  return zl;
}

CountResult count_N(double t, const ZeroList& zeros) {
  require(zeros.max_height >= t, "count_N: zero list does not reach T");
  CountResult r;
  r.census = static_cast<std::int64_t>(zeros.count_up_to(t));
  r.formula = count_formula(t);
  if (std::llabs(r.census - r.formula.value) >= 2)
    throw Error(ErrorCode::CheckFailed, "count_N: census " + std::to_string(r.census) + " and formula " +
                                            std::to_string(r.formula.value) + " differ at T = " + format_double(t));
  return r;
}

CountResult count_N(double t) { return count_N(t, find_zeros(t)); }

ZeroList ingest_zeros(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "ingest_zeros: cannot open " + path.string());
  ZeroList zl;
  zl.source = ZeroSource::Ingested;
  std::optional<double> declared_height;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string_view tok(line.data() + first, last - first + 1);
    if (tok.front() == '#') {
      constexpr std::string_view key = "max_height=";
      auto pos = tok.find(key);
      if (pos != std::string_view::npos) {
        double h = 0;
        auto s = tok.substr(pos + key.size());
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), h);
        if (ec == std::errc()) declared_height = h;
      }
      continue;
    }
    double v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v))
      reject("ingest_zeros: line " + std::to_string(lineno) + ": not a decimal ordinate");
    if (v <= 14) reject("ingest_zeros: line " + std::to_string(lineno) + ": ordinate below the first zero");
    if (!zl.ordinates.empty() && v <= zl.ordinates.back())
      reject("ingest_zeros: line " + std::to_string(lineno) + ": ordinates are not strictly increasing");
    zl.ordinates.push_back(v);
  }
  if (zl.ordinates.empty()) reject("ingest_zeros: no ordinates in " + path.string());
  zl.max_height = zl.ordinates.back();
  if (declared_height && *declared_height >= zl.max_height) zl.max_height = *declared_height;

  // Cross-check against computed zeros on the overlap with [0, 200].
  double lo = zl.ordinates.front(), hi = std::min(200.0, zl.max_height);
  if (lo <= hi) {
    auto ref = find_zeros(std::min(1e5, hi + 1));
    for (double g : ref.ordinates) {
      if (g < lo - 1e-6 || g > hi) continue;
      auto it = std::lower_bound(zl.ordinates.begin(), zl.ordinates.end(), g - 1e-6);
      if (it == zl.ordinates.end() || std::abs(*it - g) > 1e-6)
        reject("ingest_zeros: computed zero " + format_double(g) + " has no match within 1e-6 in " + path.string());
    }
    for (double g : zl.ordinates) {
      if (g > hi) break;
      auto it = std::lower_bound(ref.ordinates.begin(), ref.ordinates.end(), g - 1e-6);
      if (it == ref.ordinates.end() || std::abs(*it - g) > 1e-6)
        reject("ingest_zeros: ordinate " + format_double(g) + " does not match a computed zero");
    }
  }
  return zl;
}

void write_zeros(const std::filesystem::path& path, const ZeroList& zeros) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "write_zeros: cannot open " + path.string());
  out << "# zeta zero ordinates, source="
      << (zeros.source == ZeroSource::Computed ? "computed" : "ingested") << "\n";
  out << "# max_height=" << format_double(zeros.max_height) << "\n";
  for (double g : zeros.ordinates) out << format_double(g) << "\n";
  if (!out) throw Error(ErrorCode::Io, "write_zeros: write failed for " + path.string());
}

}  // namespace mollab::zeta
