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

// Generalised Vaughan identity for zeta'/zeta, the ninefold dyadic
// decomposition of a2, divisor splitting, Perron truncation, the A/B
// factorisation plan and a numerical hybrid large sieve monitor.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mollab/arith.hpp"
#include "mollab/characters.hpp"
#include "mollab/mollifier.hpp"
#include "mollab/report.hpp"

namespace mollab::vaughan {

struct VaughanConfig {
  int r = 3;
  double X = 10;  // length of the truncated Moebius polynomial M(s)
};

/// Largest table the verifiers will build.
inline constexpr std::uint64_t kTableBudget = 4'000'000;

/// Coefficients of sum_{j=1}^{r} (-1)^{j-1} C(r,j) zeta^{j-1} zeta' M^j on 1..n.
arith::ArithFnTable vaughan_rhs_coefficients(const VaughanConfig& config, std::uint64_t n);

/// Checks rhs(n) = -Lambda(n) for n <= N, which requires N <= X^r.
CheckReport verify_vaughan(const VaughanConfig& config, std::uint64_t n);

// ---------------------------------------------------------------------------
// Decomposition of a2 = -Lambda * log * log * b.

inline constexpr int kSlots = 9;

/// Slot roles: f1 = f2 = f3 = log, f4 = b, f5 = f6 = 1, f7 = f8 = f9 = mu.
enum class SlotRole { Log, Mollifier, One, Mobius };
SlotRole slot_role(int slot);

struct DecompositionTerm {
  /// N_i: slot i carries f_i restricted to (N_i/2, N_i]. Absent slots have
  /// N_i = 1 and carry the convolution identity.
  std::array<double, kSlots> range{};
  std::array<bool, kSlots> present{};
  double weight = 0;

  /// Smallest integer the slot can contribute (1 for identity slots).
  std::uint64_t band_min(int slot) const;
  std::uint64_t band_max(int slot) const;
};

/// f_1..f_9 tabulated on 1..limit.
struct SlotFunctions {
  arith::ArithFnTable log, b, one, mu;
  static SlotFunctions build(const mollifier::MollifierSpec& spec, std::uint64_t limit);
  /// Unrestricted f_slot(m).
  double value(int slot, std::uint64_t m) const;
  /// f_slot(m) restricted to the term's band (identity when the slot is absent).
  double banded(const DecompositionTerm& term, int slot, std::uint64_t m) const;
  std::uint64_t limit() const { return log.limit(); }
};

/// Dyadic terms whose weighted sum reproduces a2 on 1..n_max. Requires r = 3
/// and n_max <= X^3. Terms that vanish identically on 1..n_max are omitted.
std::vector<DecompositionTerm> decompose_a2(const mollifier::MollifierSpec& spec, const VaughanConfig& config,
                                            std::uint64_t n_max);

/// (f_1 * ... * f_9)(n) on 1..n for a single term (without its weight); index 0 unused.
std::vector<double> evaluate_term(const DecompositionTerm& term, const SlotFunctions& fns, std::uint64_t n);

/// Sum of weight * (f_1 * ... * f_9) over all terms on 1..n; index 0 unused.
std::vector<double> reconstruct(const std::vector<DecompositionTerm>& terms, const SlotFunctions& fns,
                                std::uint64_t n);

/// Reconstruction against compute_a2 on 1..n_max, tolerance 1e-9 relative.
CheckReport verify_decomposition(const mollifier::MollifierSpec& spec, const VaughanConfig& config,
                                 std::uint64_t n_max);

/// Ordered factorisations d = d_1 ... d_k.
std::vector<std::array<std::uint64_t, kSlots>> ordered_factorizations(std::uint64_t d);

/// Checks (f_1*...*f_9)(md) = sum_{d = d_1...d_9} (g_1*...*g_9)(m) for m <= m_limit,
/// where g_i(m) = f_i(m d_i) when gcd(m, d_1...d_{i-1}) = 1 and 0 otherwise.
CheckReport split_by_divisor(const DecompositionTerm& term, const SlotFunctions& fns, std::uint64_t d,
                             std::uint64_t m_limit);

// ---------------------------------------------------------------------------

struct PerronResult {
  double value = 0;      // (1/2 pi i) int_{delta-iU}^{delta+iU} (M0/m)^s ds/s
  double indicator = 0;  // [m <= M]
  double deviation = 0;
};

/// Truncated Perron integral with M0 = M + 1/2 and delta = 1/log M.
PerronResult perron_truncation(double big_m, double u, std::uint64_t m);

// ---------------------------------------------------------------------------

struct PlanInput {
  double K = 1, Q = 1, D = 1;
  double y = 1, T = 1;
  std::array<double, kSlots> M{};
  double eta_exponent = 2;  // eta = L^A
  double V = 1;
};

struct DyadicPlan {
  double K, Q, D, y, T;
  double eta;
  double X;   // K Q T / (pi D)
  double A0;  // max{y T^{1/2}, (K Q T / D)^{2/3}}
  std::array<double, kSlots> M;
  /// Factor taken alone as A when some M_i >= KQT/(D A0); otherwise empty.
  std::optional<int> single_factor;
  int J;  // greedy split index (1-based count of leading factors in A)
  double A, B;
  double V, U;  // integration range and Perron height U = T^5
  /// Some M_i > y T^{1/2}: handled by partial summation rather than the sieve.
  bool partial_summation_case;
  double b_bound() const;  // max{A0, (KQT/(D A0))^2}
};

/// Admissibility: Q > eta, D <= K, K Q <= 4y.
DyadicPlan build_dyadic_plan(const PlanInput& in);

/// Random admissible instances; checks A <= A0 and B <= 16 max{A0, (KQT/(D A0))^2}.
CheckReport verify_dyadic_plans(std::size_t trials, std::uint64_t seed);

// ---------------------------------------------------------------------------

/// Moduli q with q ~ Q, i.e. Q/2 < q <= Q; q = 1 only when Q = 1.
std::vector<std::uint64_t> dyadic_moduli(std::uint64_t big_q);

struct SieveMonitorReport {
  double lhs = 0, rhs = 0, ratio = 0;
  std::uint64_t Q = 0, H = 0;
  double V = 0;
  std::uint64_t seed = 0;
  std::size_t characters = 0;
};

/// sum_{q~Q} sum*_psi int_{-V}^{V} |sum_{m<=H} h_m psi(m) m^{-it}|^2 dt against
/// (Q^2 V + H) sum |h_m|^2. `h[m-1]` is h_m.
SieveMonitorReport hybrid_large_sieve_monitor(std::uint64_t big_q, double v, const std::vector<cplx>& h);

struct SieveSweep {
  std::size_t trials = 0;
  double max_ratio = 0;
  SieveMonitorReport worst;
  double max_phase_deviation = 0;  // relative LHS change under a global phase
};

/// Random trials with Q <= q_max, H <= h_max, V <= v_max, seeded.
SieveSweep hybrid_large_sieve_sweep(std::size_t trials, std::uint64_t seed, std::uint64_t q_max = 20,
                                    std::uint64_t h_max = 200, double v_max = 20);

// ---------------------------------------------------------------------------

/// S(Q, X, d) = sum_{q~Q} sum*_psi max_{M <= X} |sum_{m<=M} a(md) psi(m)|.
double s_qxd_bruteforce(std::uint64_t big_q, std::uint64_t x, std::uint64_t d, const arith::ArithFnTable& a);
double s_qxd_bruteforce(std::uint64_t big_q, std::uint64_t x, std::uint64_t d, int nu,
                        const mollifier::MollifierSpec& spec);

}  // namespace mollab::vaughan
