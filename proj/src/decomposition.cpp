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
#include <numeric>
#include <string>

#include "mollab/error.hpp"
#include "mollab/vaughan.hpp"

namespace mollab::vaughan {

SlotRole slot_role(int slot) {
  require(slot >= 0 && slot < kSlots, "slot index out of range");
  if (slot < 3) return SlotRole::Log;
  if (slot == 3) return SlotRole::Mollifier;
  if (slot < 6) return SlotRole::One;
  return SlotRole::Mobius;
}

std::uint64_t DecompositionTerm::band_min(int slot) const {
  if (!present[slot]) return 1;
  return static_cast<std::uint64_t>(std::floor(range[slot] / 2)) + 1;
}

std::uint64_t DecompositionTerm::band_max(int slot) const {
  if (!present[slot]) return 1;
  return static_cast<std::uint64_t>(std::floor(range[slot]));
}

SlotFunctions SlotFunctions::build(const mollifier::MollifierSpec& spec, std::uint64_t limit) {
  require(limit >= 1, "slot functions: limit must be positive");
  require(limit <= kTableBudget, "slot functions: limit exceeds the table budget");
  return {arith::sieve_standard("log", limit), mollifier::coefficient_table(spec, limit),
          arith::sieve_standard("one", limit), arith::sieve_standard("mobius", limit)};
}

double SlotFunctions::value(int slot, std::uint64_t m) const {
  switch (slot_role(slot)) {
    case SlotRole::Log: return log(m);
    case SlotRole::Mollifier: return b(m);
    case SlotRole::One: return one(m);
    case SlotRole::Mobius: return mu(m);
  }
  return 0;
}

double SlotFunctions::banded(const DecompositionTerm& term, int slot, std::uint64_t m) const {
  if (!term.present[slot]) return m == 1 ? 1.0 : 0.0;
  if (m < term.band_min(slot) || m > term.band_max(slot)) return 0;
  return value(slot, m);
}

namespace {

// Candidate ranges N for one slot, largest first, restricted to bands that
// meet 1..n_max.
std::vector<double> slot_ranges(SlotRole role, double y, double x, std::uint64_t n_max) {
  std::vector<double> out;
  auto admit = [&](double big_n) {
    auto lo = static_cast<std::uint64_t>(std::floor(big_n / 2)) + 1;
    auto hi = static_cast<std::uint64_t>(std::floor(big_n));
    return hi >= lo && lo <= n_max;
  };
  switch (role) {
    case SlotRole::Log:
    case SlotRole::One: {
      // log vanishes at 1, so its bands start at (1, 2].
      for (double big_n = role == SlotRole::Log ? 2 : 1; std::floor(big_n / 2) + 1 <= n_max; big_n *= 2)
        out.push_back(big_n);
      std::reverse(out.begin(), out.end());
      break;
    }
    case SlotRole::Mollifier:
      for (double big_n = y; big_n >= 1; big_n /= 2)
        if (admit(big_n)) out.push_back(big_n);
      break;
    case SlotRole::Mobius:
      for (double big_n = x; big_n >= 1; big_n /= 2)
        if (admit(big_n)) out.push_back(big_n);
      break;
  }
  return out;
}

// Sparse partial convolution on 1..n: dense values plus the touched index list.
class SparseVec {
 public:
  explicit SparseVec(std::uint64_t n) : vals_(n + 1, 0.0), mark_(n + 1, 0) {}

  void reset_to_delta() {
    clear();
    touch(1);
    vals_[1] = 1;
  }
  void clear() {
    for (auto i : idx_) {
      vals_[i] = 0;
      mark_[i] = 0;
    }
    idx_.clear();
  }
  bool empty() const { return idx_.empty(); }
  std::uint64_t min_index() const {
    std::uint64_t m = vals_.size();
    for (auto i : idx_) m = std::min<std::uint64_t>(m, i);
    return m;
  }

  // *this = src * g, where g(k) = f(k) on lo..hi.
  template <class F>
  void assign_convolution(const SparseVec& src, std::uint64_t lo, std::uint64_t hi, F&& f) {
    clear();
    std::uint64_t n = vals_.size() - 1;
    for (auto m : src.idx_) {
      double v = src.vals_[m];
      if (v == 0) continue;
      std::uint64_t kmax = std::min(hi, n / m);
      for (std::uint64_t k = lo; k <= kmax; ++k) {
        double fk = f(k);
        if (fk == 0) continue;
        std::uint64_t p = m * k;
        touch(p);
        vals_[p] += v * fk;
      }
    }
  }

  // out[m k] += w src[m] f(k) for k on lo..hi.
  template <class F>
  static void accumulate_convolution(const SparseVec& src, std::uint64_t lo, std::uint64_t hi, F&& f, double w,
                                     std::vector<KahanSum>& out) {
    std::uint64_t n = out.size() - 1;
    for (auto m : src.idx_) {
      double v = w * src.vals_[m];
      if (v == 0) continue;
      std::uint64_t kmax = std::min(hi, n / m);
      for (std::uint64_t k = lo; k <= kmax; ++k) {
        double fk = f(k);
        if (fk != 0) out[m * k].add(v * fk);
      }
    }
  }

  const std::vector<std::uint32_t>& indices() const { return idx_; }
  double operator[](std::uint64_t i) const { return vals_[i]; }

 private:
  void touch(std::uint64_t p) {
    if (!mark_[p]) {
      mark_[p] = 1;
      idx_.push_back(static_cast<std::uint32_t>(p));
    }
  }
  std::vector<double> vals_;
  std::vector<std::uint8_t> mark_;
  std::vector<std::uint32_t> idx_;
};

// Slot order for prefix sharing: short-support factors first, the log
// factors (always present, most bands) last.
constexpr std::array<int, kSlots> kEvalOrder = {6, 7, 8, 3, 4, 5, 0, 1, 2};

bool same_slot(const DecompositionTerm& a, const DecompositionTerm& b, int slot) {
  return a.present[slot] == b.present[slot] && (!a.present[slot] || a.range[slot] == b.range[slot]);
}

bool eval_order_less(const DecompositionTerm& a, const DecompositionTerm& b) {
  for (int slot : kEvalOrder) {
    if (a.present[slot] != b.present[slot]) return a.present[slot] < b.present[slot];
    if (a.present[slot] && a.range[slot] != b.range[slot]) return a.range[slot] > b.range[slot];
  }
  return false;
}

// Adds w_t (f_1 * ... * f_9)_t(m) for the terms in [first, last) of `sorted`
// into out[1..n]. Consecutive terms share convolution prefixes.
void accumulate_terms(const std::vector<DecompositionTerm>& sorted, std::size_t first, std::size_t last,
                      const std::vector<double>& weights, const SlotFunctions& fns, std::uint64_t n,
                      std::vector<KahanSum>& out) {
  std::vector<SparseVec> level;
  level.reserve(kSlots);
  for (int i = 0; i < kSlots; ++i) level.emplace_back(n);
  SparseVec delta(n);
  delta.reset_to_delta();
  // holder[i]: buffer containing the product of the first i + 1 factors in
  // evaluation order (absent slots reuse the previous holder).
  std::array<const SparseVec*, kSlots> holder{};

  const DecompositionTerm* prev = nullptr;
  for (std::size_t t = first; t < last; ++t) {
    const auto& term = sorted[t];
    int start = 0;
    if (prev) {
      while (start < kSlots - 1 && same_slot(*prev, term, kEvalOrder[start])) ++start;
    }
    for (int i = start; i < kSlots; ++i) {
      int slot = kEvalOrder[i];
      const SparseVec* src = i == 0 ? &delta : holder[i - 1];
      auto lo = term.band_min(slot), hi = term.band_max(slot);
      auto f = [&](std::uint64_t k) { return fns.value(slot, k); };
      if (i == kSlots - 1) {
        if (!term.present[slot]) {
          for (auto m : src->indices()) out[m].add(weights[t] * (*src)[m]);
        } else {
          SparseVec::accumulate_convolution(*src, lo, hi, f, weights[t], out);
        }
        break;
      }
      if (!term.present[slot]) {
        holder[i] = src;
      } else {
        level[i].assign_convolution(*src, lo, hi, f);
        holder[i] = &level[i];
      }
    }
    prev = &term;
  }
}

std::vector<double> sum_terms(std::vector<DecompositionTerm> terms, std::vector<double> weights,
                              const SlotFunctions& fns, std::uint64_t n) {
  require(n <= fns.limit(), "reconstruct: slot functions are shorter than n");
  std::vector<std::size_t> order(terms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return eval_order_less(terms[a], terms[b]); });
  std::vector<DecompositionTerm> sorted;
  std::vector<double> w;
  sorted.reserve(terms.size());
  for (auto i : order) {
    sorted.push_back(terms[i]);
    w.push_back(weights[i]);
  }

  // Fixed chunking keeps the summation order independent of the thread count.
  const std::size_t chunks = std::min<std::size_t>(sorted.size(), n <= 100000 ? 16 : 2);
  std::vector<std::vector<KahanSum>> partial(chunks, std::vector<KahanSum>(n + 1));
  parallel_for(chunks, worker_threads(), [&](std::size_t c) {
    std::size_t first = sorted.size() * c / chunks, last = sorted.size() * (c + 1) / chunks;
    accumulate_terms(sorted, first, last, w, fns, n, partial[c]);
  });
  std::vector<double> out(n + 1, 0.0);
  for (std::uint64_t m = 1; m <= n; ++m) {
    KahanSum s;
    for (std::size_t c = 0; c < chunks; ++c) s.add(partial[c][m].value());
    out[m] = s.value();
  }
  return out;
}

void enumerate_terms(int slot, const std::array<std::vector<double>, kSlots>& ranges,
                     const std::array<bool, kSlots>& present, double weight, std::uint64_t n_max,
                     std::uint64_t min_product, DecompositionTerm& current, std::vector<DecompositionTerm>& out) {
  if (slot == kSlots) {
    current.weight = weight;
    out.push_back(current);
    return;
  }
  current.present[slot] = present[slot];
  if (!present[slot]) {
    current.range[slot] = 1;
    enumerate_terms(slot + 1, ranges, present, weight, n_max, min_product, current, out);
    return;
  }
  for (double big_n : ranges[slot]) {
    current.range[slot] = big_n;
    std::uint64_t lo = current.band_min(slot);
    if (min_product * lo > n_max) continue;
    enumerate_terms(slot + 1, ranges, present, weight, n_max, min_product * lo, current, out);
  }
}

}  // namespace

std::vector<DecompositionTerm> decompose_a2(const mollifier::MollifierSpec& spec, const VaughanConfig& config,
                                            std::uint64_t n_max) {
  require(config.r == 3, "decompose_a2: only r = 3 is supported");
  require(config.X >= 1, "decompose_a2: X must be at least 1");
  require(n_max >= 1, "decompose_a2: n_max must be positive");
  double zone = std::pow(config.X, 3);
  if (static_cast<double>(n_max) > zone * (1 + 1e-12))
    reject("decompose_a2: n_max = " + std::to_string(n_max) + " exceeds X^3 = " + format_double(zone));

  std::array<std::vector<double>, kSlots> ranges;
  for (int s = 0; s < kSlots; ++s) ranges[s] = slot_ranges(slot_role(s), spec.y(), config.X, n_max);

  std::vector<DecompositionTerm> out;
  for (int j = 1; j <= 3; ++j) {
    std::array<bool, kSlots> present{};
    for (int s = 0; s < 4; ++s) present[s] = true;
    for (int s = 4; s < 4 + j - 1; ++s) present[s] = true;
    for (int s = 6; s < 6 + j; ++s) present[s] = true;
    // a2 = -Lambda * log * log * b and -Lambda = sum_j (-1)^j C(3,j) 1^{j-1} * log * mu^j.
    constexpr double kBinom3[] = {1, 3, 3, 1};
    double weight = (j % 2 == 0 ? 1.0 : -1.0) * kBinom3[j];
    DecompositionTerm current;
    enumerate_terms(0, ranges, present, weight, n_max, 1, current, out);
  }
  return out;
}

std::vector<double> evaluate_term(const DecompositionTerm& term, const SlotFunctions& fns, std::uint64_t n) {
  return sum_terms({term}, {1.0}, fns, n);
}

std::vector<double> reconstruct(const std::vector<DecompositionTerm>& terms, const SlotFunctions& fns,
                                std::uint64_t n) {
  std::vector<double> w;
  w.reserve(terms.size());
  for (const auto& t : terms) w.push_back(t.weight);
  return sum_terms(terms, std::move(w), fns, n);
}

CheckReport verify_decomposition(const mollifier::MollifierSpec& spec, const VaughanConfig& config,
                                 std::uint64_t n_max) {
  auto terms = decompose_a2(spec, config, n_max);
  auto fns = SlotFunctions::build(spec, n_max);
  auto recon = reconstruct(terms, fns, n_max);
  auto a2 = arith::compute_a2(n_max, fns.b);

  CheckReport rep;
  rep.check = "a2_decomposition";
  rep.parameters = {{"y", spec.y()}, {"T", spec.height()}, {"X", config.X}, {"N", n_max},
                    {"terms", terms.size()}};
  rep.tolerance = 1e-9;
  std::uint64_t worst = 1;
  for (std::uint64_t m = 1; m <= n_max; ++m) {
    double dev = std::abs(recon[m] - a2(m)) / std::max(1.0, std::abs(a2(m)));
    if (dev > rep.deviation) {
      rep.deviation = dev;
      worst = m;
    }
  }
  rep.worst_case = {{"n", worst}, {"reconstructed", recon[worst]}, {"a2", a2(worst)}};
  rep.pass = rep.deviation <= rep.tolerance;
  return rep;
}

namespace {

void factorizations_rec(std::uint64_t rem, int slot, std::array<std::uint64_t, kSlots>& cur,
                        std::vector<std::array<std::uint64_t, kSlots>>& out) {
  if (slot == kSlots - 1) {
    cur[slot] = rem;
    out.push_back(cur);
    return;
  }
  for (std::uint64_t e = 1; e <= rem; ++e) {
    if (rem % e) continue;
    cur[slot] = e;
    factorizations_rec(rem / e, slot + 1, cur, out);
  }
}

}  // namespace

std::vector<std::array<std::uint64_t, kSlots>> ordered_factorizations(std::uint64_t d) {
  require(d >= 1, "ordered_factorizations: d must be positive");
  std::vector<std::array<std::uint64_t, kSlots>> out;
  std::array<std::uint64_t, kSlots> cur{};
  factorizations_rec(d, 0, cur, out);
  return out;
}

namespace {

struct SplitState {
  const DecompositionTerm& term;
  const SlotFunctions& fns;
  std::uint64_t m_limit;
  std::vector<SparseVec> level;
  std::vector<KahanSum> rhs;
  std::size_t contributing = 0;
};

// Slot `slot` takes d_slot | rem; `prefix` is d_1 ... d_{slot-1}.
void split_rec(SplitState& st, int slot, std::uint64_t rem, std::uint64_t prefix, const SparseVec& src) {
  if (src.empty()) return;
  const auto& term = st.term;
  auto lo = term.band_min(slot), hi = term.band_max(slot);
  for (std::uint64_t di = 1; di <= rem; ++di) {
    if (rem % di) continue;
    if (slot == kSlots - 1 && di != rem) continue;
    if (!term.present[slot] && di != 1) continue;
    // g(m) = f(m d_i) on the band, and only for m coprime to the prefix.
    std::uint64_t g_lo = (lo + di - 1) / di, g_hi = std::min(hi / di, st.m_limit);
    if (g_lo > g_hi) continue;
    auto g = [&](std::uint64_t m) {
      if (prefix > 1 && gcd_u64(m, prefix) != 1) return 0.0;
      return term.present[slot] ? st.fns.value(slot, m * di) : 1.0;
    };
    if (slot == kSlots - 1) {
      ++st.contributing;
      SparseVec::accumulate_convolution(src, g_lo, g_hi, g, 1.0, st.rhs);
      continue;
    }
    if (!term.present[slot]) {
      split_rec(st, slot + 1, rem, prefix, src);
      continue;
    }
    auto& next = st.level[slot];
    next.assign_convolution(src, g_lo, g_hi, g);
    split_rec(st, slot + 1, rem / di, prefix * di, next);
  }
}

}  // namespace

CheckReport split_by_divisor(const DecompositionTerm& term, const SlotFunctions& fns, std::uint64_t d,
                             std::uint64_t m_limit) {
  require(d >= 1 && m_limit >= 1, "split_by_divisor: d and m_limit must be positive");
  require(m_limit * d <= kTableBudget, "split_by_divisor: m_limit d exceeds the table budget");
  require(m_limit * d <= fns.limit(), "split_by_divisor: slot functions are shorter than m_limit d");

  auto lhs = evaluate_term(term, fns, m_limit * d);

  SplitState st{term, fns, m_limit, {}, std::vector<KahanSum>(m_limit + 1)};
  for (int i = 0; i < kSlots; ++i) st.level.emplace_back(m_limit);
  SparseVec delta(m_limit);
  delta.reset_to_delta();
  split_rec(st, 0, d, 1, delta);

  CheckReport rep;
  rep.check = "divisor_split";
  rep.parameters = {{"d", d},
                    {"m_limit", m_limit},
                    {"factorizations", ordered_factorizations(d).size()},
                    {"contributing", st.contributing}};
  rep.tolerance = 1e-10;
  std::uint64_t worst = 1;
  for (std::uint64_t m = 1; m <= m_limit; ++m) {
    double l = lhs[m * d], r = st.rhs[m].value();
    double dev = std::abs(l - r) / std::max(1.0, std::abs(l));
    if (dev > rep.deviation) {
      rep.deviation = dev;
      worst = m;
    }
  }
  rep.worst_case = {{"m", worst}, {"lhs", lhs[worst * d]}, {"rhs", st.rhs[worst].value()}};
  rep.pass = rep.deviation <= rep.tolerance;
  return rep;
}

}  // namespace mollab::vaughan
