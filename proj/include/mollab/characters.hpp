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

// Dirichlet characters stored as exact root-of-unity exponents, Gauss sums,
// and the additive-to-multiplicative rearrangement of the off-diagonal sums
//   M_nu = sum_{k<=y} sum_{m<=kT/2pi} a_nu(m) b(k)/k e(-m/k).

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mollab/arith.hpp"
#include "mollab/mollifier.hpp"
#include "mollab/numeric.hpp"

namespace mollab::characters {

class DirichletCharacter {
 public:
  std::uint64_t modulus() const { return q_; }
  std::uint64_t conductor() const { return conductor_; }
  /// Values are exp(2 pi i e / L) for an integer exponent e mod L.
  std::uint64_t exponent_base() const { return base_; }
  /// Exponent of chi(a), or -1 when gcd(a, q) > 1.
  std::int64_t exponent(std::int64_t a) const { return exps_[reduce(a)]; }
  bool is_unit(std::int64_t a) const { return exponent(a) >= 0; }

  cplx operator()(std::int64_t a) const {
    auto e = exps_[reduce(a)];
    return e < 0 ? cplx{} : (*roots_)[static_cast<std::size_t>(e)];
  }

  /// Principal character (1 on every unit).
  bool is_principal() const;
  bool is_primitive() const { return conductor_ == q_; }
  /// Generator exponents identifying chi inside the group.
  const std::vector<std::uint32_t>& index() const { return index_; }
  std::string label() const;

  DirichletCharacter conjugate() const;
  /// Pointwise product; both factors must share the modulus.
  DirichletCharacter operator*(const DirichletCharacter& other) const;
  bool operator==(const DirichletCharacter& other) const {
    return q_ == other.q_ && base_ == other.base_ && exps_ == other.exps_;
  }

 private:
  friend std::vector<DirichletCharacter> enumerate_characters(std::uint64_t q);
  DirichletCharacter() = default;
  std::size_t reduce(std::int64_t a) const {
    auto r = a % static_cast<std::int64_t>(q_);
    return static_cast<std::size_t>(r < 0 ? r + static_cast<std::int64_t>(q_) : r);
  }
  void compute_conductor();

  std::uint64_t q_ = 1;
  std::uint64_t base_ = 1;
  std::uint64_t conductor_ = 1;
  std::vector<std::int32_t> exps_;
  std::vector<std::uint32_t> index_;
  std::vector<std::uint32_t> orders_;
  std::shared_ptr<const std::vector<cplx>> roots_;
};

/// All phi(q) characters mod q, built from generators of (Z/qZ)^*.
std::vector<DirichletCharacter> enumerate_characters(std::uint64_t q);
std::vector<DirichletCharacter> primitive_characters(std::uint64_t q);
inline bool is_primitive(const DirichletCharacter& chi) { return chi.is_primitive(); }

std::uint64_t euler_phi(std::uint64_t n);
int mobius(std::uint64_t n);

struct GaussSumResult {
  cplx value;
  double modulus_sqrt_check = 0;  // | |tau| - sqrt(q) |
};

/// tau(chi) = sum_{a mod q} chi(a) e(a/q).
GaussSumResult gauss_sum(const DirichletCharacter& chi);

struct DeltaParams {
  std::uint64_t q = 1, k = 1, d = 1;
  const DirichletCharacter* psi = nullptr;
};

/// delta(q, kq, d, psi) = sum_{l | (d,k)} mu(d/l) / phi(kq/l) conj(psi)(-k/l) psi(d/l) mu(k/l).
/// Requires d | k and gcd(k, q) = 1.
cplx delta_term(const DeltaParams& params);

/// Direct additive form, k outer ascending.
cplx m_nu_direct(int nu, const mollifier::MollifierSpec& spec, const arith::ArithFnTable& a);

struct RearrangedSum {
  cplx total;
  std::vector<cplx> by_modulus;  // by_modulus[q] = contribution of modulus q (index 0 unused)
};

/// Character form with d | k (coprime k, q forced by squarefree support of b).
RearrangedSum m_nu_rearranged_detail(int nu, const mollifier::MollifierSpec& spec,
                                     const arith::ArithFnTable& a);
inline cplx m_nu_rearranged(int nu, const mollifier::MollifierSpec& spec, const arith::ArithFnTable& a) {
  return m_nu_rearranged_detail(nu, spec, a).total;
}

/// Largest m index the M_nu sums touch: floor(y T / 2 pi).
std::uint64_t m_nu_table_limit(const mollifier::MollifierSpec& spec);

/// max_{Y' <= Y} |sum_{h <= Y'} chi(h)|. Rejects the principal character.
double polya_vinogradov_max(const DirichletCharacter& chi, std::uint64_t y_max);

/// max_{Y' <= Y} |sum_{h <= Y', (h, D) = 1} chi(h)|. Rejects the principal character.
double coprime_partial_sum_max(const DirichletCharacter& chi, std::uint64_t y_max, std::uint64_t coprime_to);

}  // namespace mollab::characters
