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
#include <random>

#include "mollab/error.hpp"
#include "mollab/vaughan.hpp"

namespace mollab::vaughan {

namespace {

// C_q(a, b) = sum over primitive psi mod q of psi(a) conj(psi(b)), for 0 <= a, b < q.
std::vector<cplx> primitive_gram(std::uint64_t q) {
  std::vector<cplx> c(q * q);
  for (const auto& psi : characters::primitive_characters(q)) {
    for (std::uint64_t a = 0; a < q; ++a) {
      cplx pa = psi(static_cast<std::int64_t>(a));
      if (pa == cplx{}) continue;
      for (std::uint64_t b = 0; b < q; ++b) c[a * q + b] += pa * std::conj(psi(static_cast<std::int64_t>(b)));
    }
  }
  return c;
}

double sieve_lhs(std::uint64_t big_q, double v, const std::vector<cplx>& h, std::size_t* chars) {
  const std::size_t n = h.size();
  // K(m, n) = int_{-V}^{V} (n/m)^{it} dt.
  std::vector<double> kern(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        kern[i * n + j] = 2 * v;
      } else {
        double l = std::log(static_cast<double>(j + 1) / static_cast<double>(i + 1));
        kern[i * n + j] = 2 * std::sin(v * l) / l;
      }
    }
  }
  KahanSum total;
  std::size_t count = 0;
  for (auto q : dyadic_moduli(big_q)) {
    count += characters::primitive_characters(q).size();
    auto c = primitive_gram(q);
    for (std::size_t i = 0; i < n; ++i) {
      if (h[i] == cplx{}) continue;
      KahanSumComplex row;
      for (std::size_t j = 0; j < n; ++j) {
        cplx cq = c[((i + 1) % q) * q + (j + 1) % q];
        if (cq == cplx{}) continue;
        row.add(cq * std::conj(h[j]) * kern[i * n + j]);
      }
      total.add((h[i] * row.value()).real());
    }
  }
  if (chars) *chars = count;
  return total.value();
}

}  // namespace

SieveMonitorReport hybrid_large_sieve_monitor(std::uint64_t big_q, double v, const std::vector<cplx>& h) {
  require(big_q >= 1 && big_q <= 30, "sieve monitor: Q must lie in [1, 30]");
  require(v >= 0 && v <= 50, "sieve monitor: V must lie in [0, 50]");
  require(!h.empty() && h.size() <= 500, "sieve monitor: H must lie in [1, 500]");
  double norm = 0;
  for (auto x : h) norm += std::norm(x);
  require(norm > 0, "sieve monitor: zero coefficient vector");

  SieveMonitorReport rep;
  rep.Q = big_q;
  rep.V = v;
  rep.H = h.size();
  rep.lhs = std::max(0.0, sieve_lhs(big_q, v, h, &rep.characters));
  rep.rhs = (static_cast<double>(big_q * big_q) * v + static_cast<double>(h.size())) * norm;
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

SieveSweep hybrid_large_sieve_sweep(std::size_t trials, std::uint64_t seed, std::uint64_t q_max,
                                    std::uint64_t h_max, double v_max) {
  require(trials >= 1, "sieve sweep: at least one trial");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> q_dist(1, q_max), h_dist(1, h_max);
  std::uniform_real_distribution<double> v_dist(0.0, v_max), phase(0.0, kTwoPi);
  std::normal_distribution<double> gauss;

  // Draw every instance first so the results do not depend on scheduling.
  struct Instance {
    std::uint64_t q, seed;
    double v, phi;
    std::vector<cplx> h;
  };
  std::vector<Instance> inst(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    inst[t].q = q_dist(rng);
    inst[t].v = v_dist(rng);
    inst[t].phi = phase(rng);
    inst[t].seed = seed + t;
    inst[t].h.resize(h_dist(rng));
    for (auto& x : inst[t].h) x = {gauss(rng), gauss(rng)};
  }

  std::vector<SieveMonitorReport> reps(trials);
  std::vector<double> phase_dev(trials);
  parallel_for(trials, worker_threads(), [&](std::size_t t) {
    const auto& in = inst[t];
    reps[t] = hybrid_large_sieve_monitor(in.q, in.v, in.h);
    reps[t].seed = in.seed;
    auto rotated = in.h;
    cplx w = std::polar(1.0, in.phi);
    for (auto& x : rotated) x *= w;
    double lhs2 = sieve_lhs(in.q, in.v, rotated, nullptr);
    phase_dev[t] = std::abs(lhs2 - reps[t].lhs) / std::max(1.0, std::abs(reps[t].lhs));
  });

  SieveSweep out;
  out.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    if (t == 0 || reps[t].ratio > out.max_ratio) {
      out.max_ratio = reps[t].ratio;
      out.worst = reps[t];
    }
    out.max_phase_deviation = std::max(out.max_phase_deviation, phase_dev[t]);
  }
  return out;
}

}  // namespace mollab::vaughan
