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

#include "mollab/characters.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "mollab/error.hpp"

namespace mollab::characters {

namespace {

struct PrimePower {
  std::uint64_t p;
  unsigned a;
  std::uint64_t value;
};

std::vector<PrimePower> factor(std::uint64_t n) {
  std::vector<PrimePower> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    PrimePower pp{p, 0, 1};
    while (n % p == 0) {
      n /= p;
      ++pp.a;
      pp.value *= p;
    }
    out.push_back(pp);
  }
  if (n > 1) out.push_back({n, 1, n});
  return out;
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 r = 1 % m, x = b % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t primitive_root_prime_power(const PrimePower& pp) {
  std::uint64_t p = pp.p;
  auto fs = factor(p - 1);
  std::uint64_t g = 2;
  for (;; ++g) {
    bool ok = true;
    for (const auto& f : fs)
      if (powmod(g, (p - 1) / f.p, p) == 1) ok = false;
    if (ok) break;
  }
  if (pp.a >= 2 && powmod(g, p - 1, p * p) == 1) g += p;
  return g;
}

// One cyclic factor of (Z/qZ)^*: a generator's discrete log on residues mod
// `modulus` (a prime power dividing q).
struct CyclicFactor {
  std::uint64_t modulus;
  std::uint32_t order;
  std::vector<std::int32_t> log;  // -1 off the units
};

std::vector<CyclicFactor> unit_group_factors(std::uint64_t q) {
  std::vector<CyclicFactor> out;
  for (const auto& pp : factor(q)) {
    if (pp.p == 2) {
      if (pp.a == 1) continue;
      if (pp.a == 2) {
        out.push_back({4, 2, {-1, 0, -1, 1}});
        continue;
      }
      // (Z/2^a)^* = <-1> x <5>
      CyclicFactor sign{pp.value, 2, std::vector<std::int32_t>(pp.value, -1)};
      CyclicFactor five{pp.value, static_cast<std::uint32_t>(pp.value / 4),
                        std::vector<std::int32_t>(pp.value, -1)};
      std::uint64_t x = 1;
      for (std::uint32_t v = 0; v < five.order; ++v) {
        sign.log[x] = 0;
        five.log[x] = static_cast<std::int32_t>(v);
        sign.log[pp.value - x] = 1;
        five.log[pp.value - x] = static_cast<std::int32_t>(v);
        x = x * 5 % pp.value;
      }
      out.push_back(std::move(sign));
      out.push_back(std::move(five));
      continue;
    }
    std::uint64_t g = primitive_root_prime_power(pp);
    auto order = static_cast<std::uint32_t>(pp.value / pp.p * (pp.p - 1));
    CyclicFactor f{pp.value, order, std::vector<std::int32_t>(pp.value, -1)};
    std::uint64_t x = 1;
    for (std::uint32_t k = 0; k < order; ++k) {
      f.log[x] = static_cast<std::int32_t>(k);
      x = x * g % pp.value;
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

std::uint64_t euler_phi(std::uint64_t n) {
  require(n >= 1, "euler_phi: n must be >= 1");
  std::uint64_t r = n;
  for (const auto& pp : factor(n)) r = r / pp.p * (pp.p - 1);
  return r;
}

int mobius(std::uint64_t n) {
  require(n >= 1, "mobius: n must be >= 1");
  int s = 1;
  for (const auto& pp : factor(n)) {
    if (pp.a > 1) return 0;
    s = -s;
  }
  return s;
}

bool DirichletCharacter::is_principal() const {
  for (auto e : exps_)
    if (e > 0) return false;
  return true;
}

std::string DirichletCharacter::label() const {
  std::ostringstream os;
  os << "chi_" << q_ << '[';
  for (std::size_t i = 0; i < index_.size(); ++i) os << (i ? "," : "") << index_[i];
  os << ']';
  return os.str();
}

DirichletCharacter DirichletCharacter::conjugate() const {
  DirichletCharacter c = *this;
  for (auto& e : c.exps_)
    if (e > 0) e = static_cast<std::int32_t>(base_ - e);
  c.compute_conductor();
  for (std::size_t i = 0; i < c.index_.size(); ++i)
    c.index_[i] = (orders_[i] - c.index_[i]) % orders_[i];
  return c;
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& other) const {
  require(q_ == other.q_ && base_ == other.base_, "character product needs a common modulus");
  DirichletCharacter c = *this;
  for (std::size_t a = 0; a < exps_.size(); ++a)
    if (exps_[a] >= 0) c.exps_[a] = static_cast<std::int32_t>((exps_[a] + other.exps_[a]) % base_);
  c.compute_conductor();
  for (std::size_t i = 0; i < c.index_.size(); ++i)
    c.index_[i] = (index_[i] + other.index_[i]) % orders_[i];
  return c;
}

void DirichletCharacter::compute_conductor() {
  // Smallest f | q with chi(a) = 1 for every unit a == 1 (mod f).
  conductor_ = q_;
  for (std::uint64_t f = 1; f < q_; ++f) {
    if (q_ % f != 0) continue;
    bool trivial = true;
    for (std::uint64_t a = 1; a < q_ && trivial; a += f)
      if (exps_[a] > 0) trivial = false;
    if (trivial) {
      conductor_ = f;
      return;
    }
  }
}

std::vector<DirichletCharacter> enumerate_characters(std::uint64_t q) {
  require(q >= 1, "enumerate_characters: q must be >= 1");
  auto factors = unit_group_factors(q);
  std::uint64_t base = 1;
  for (const auto& f : factors) base = std::lcm(base, static_cast<std::uint64_t>(f.order));

  auto roots = std::make_shared<std::vector<cplx>>(base);
  for (std::uint64_t e = 0; e < base; ++e) (*roots)[e] = unit_phase(static_cast<double>(e) / base);

  // Discrete-log vectors per residue, computed once.
  std::vector<std::vector<std::int32_t>> logs(q);
  std::vector<bool> unit(q);
  for (std::uint64_t a = 0; a < q; ++a) {
    unit[a] = gcd_u64(a, q) == 1;
    if (!unit[a]) continue;
    for (const auto& f : factors) logs[a].push_back(f.log[a % f.modulus]);
  }

  std::vector<std::uint32_t> orders;
  for (const auto& f : factors) orders.push_back(f.order);

  std::vector<DirichletCharacter> out;
  std::vector<std::uint32_t> j(factors.size(), 0);
  for (;;) {
    DirichletCharacter chi;
    chi.q_ = q;
    chi.base_ = base;
    chi.roots_ = roots;
    chi.index_ = j;
    chi.orders_ = orders;
    chi.exps_.assign(q, -1);
    for (std::uint64_t a = 0; a < q; ++a) {
      if (!unit[a]) continue;
      std::uint64_t e = 0;
      for (std::size_t i = 0; i < factors.size(); ++i)
        e += static_cast<std::uint64_t>(j[i]) * static_cast<std::uint64_t>(logs[a][i]) * (base / factors[i].order);
      chi.exps_[a] = static_cast<std::int32_t>(e % base);
    }
    chi.compute_conductor();
    out.push_back(std::move(chi));
    std::size_t i = 0;
    for (; i < j.size(); ++i) {
      if (++j[i] < factors[i].order) break;
      j[i] = 0;
    }
    if (i == j.size()) break;
  }
  return out;
}

std::vector<DirichletCharacter> primitive_characters(std::uint64_t q) {
  auto all = enumerate_characters(q);
  std::vector<DirichletCharacter> out;
  for (auto& c : all)
    if (c.is_primitive()) out.push_back(std::move(c));
  return out;
}

GaussSumResult gauss_sum(const DirichletCharacter& chi) {
  const std::uint64_t q = chi.modulus();
  KahanSumComplex acc;
  for (std::uint64_t a = 0; a < q; ++a) {
    if (!chi.is_unit(static_cast<std::int64_t>(a))) continue;
    acc.add(chi(static_cast<std::int64_t>(a)) * unit_phase(static_cast<double>(a) / q));
  }
  GaussSumResult r;
  r.value = acc.value();
  r.modulus_sqrt_check = std::abs(std::abs(r.value) - std::sqrt(static_cast<double>(q)));
  return r;
}

cplx delta_term(const DeltaParams& p) {
  require(p.psi != nullptr, "delta_term: missing character");
  require(p.q >= 1 && p.k >= 1 && p.d >= 1, "delta_term: q, k, d must be positive");
  require(p.psi->modulus() == p.q, "delta_term: character modulus differs from q");
  require(p.k % p.d == 0, "delta_term: requires d | k");
  require(gcd_u64(p.k, p.q) == 1, "delta_term: requires gcd(k, q) = 1");
  const auto& psi = *p.psi;
  KahanSumComplex acc;
  // l runs over divisors of gcd(d, k) = d.
  for (std::uint64_t l = 1; l <= p.d; ++l) {
    if (p.d % l != 0) continue;
    int mu_dl = mobius(p.d / l), mu_kl = mobius(p.k / l);
    if (mu_dl == 0 || mu_kl == 0) continue;
    cplx chi_d = psi(static_cast<std::int64_t>(p.d / l));
    cplx chi_k = std::conj(psi(-static_cast<std::int64_t>(p.k / l)));
    if (chi_d == cplx{} || chi_k == cplx{}) continue;
    acc.add(static_cast<double>(mu_dl * mu_kl) / static_cast<double>(euler_phi(p.k * p.q / l)) * chi_k * chi_d);
  }
  return acc.value();
}

std::uint64_t m_nu_table_limit(const mollifier::MollifierSpec& spec) {
  return static_cast<std::uint64_t>(std::floor(static_cast<double>(spec.support()) * spec.height() / kTwoPi));
}

namespace {

void check_nu_inputs(int nu, const mollifier::MollifierSpec& spec, const arith::ArithFnTable& a) {
  require(nu == 1 || nu == 2, "M_nu: nu must be 1 or 2");
  auto need = m_nu_table_limit(spec);
  require(a.limit() >= need, "M_nu: coefficient table of limit " + std::to_string(a.limit()) +
                                 " does not cover m <= yT/2pi = " + std::to_string(need));
}

// floor(k T / 2 pi) computed once per k so both forms agree on the cutoff.
std::uint64_t m_cutoff(std::uint64_t k, double height) {
  return static_cast<std::uint64_t>(std::floor(static_cast<double>(k) * height / kTwoPi));
}

}  // namespace

cplx m_nu_direct(int nu, const mollifier::MollifierSpec& spec, const arith::ArithFnTable& a) {
  check_nu_inputs(nu, spec, a);
  KahanSumComplex total;
  for (std::uint64_t k = 1; k <= spec.support(); ++k) {
    double bk = mollifier::eval_b(k, spec);
    if (bk == 0.0) continue;
    KahanSumComplex inner;
    const std::uint64_t mmax = m_cutoff(k, spec.height());
    for (std::uint64_t m = 1; m <= mmax; ++m) {
      double am = a(m);
      if (am == 0.0) continue;
      inner.add(am * unit_phase(-static_cast<double>(m % k) / static_cast<double>(k)));
    }
    total.add(inner.value() * (bk / static_cast<double>(k)));
  }
  return total.value();
}

RearrangedSum m_nu_rearranged_detail(int nu, const mollifier::MollifierSpec& spec,
                                     const arith::ArithFnTable& a) {
  check_nu_inputs(nu, spec, a);
  const std::uint64_t ymax = spec.support();
  RearrangedSum out;
  out.by_modulus.assign(ymax + 1, cplx{});
  parallel_for(ymax, worker_threads(), [&](std::size_t idx) {
    const std::uint64_t q = idx + 1;
    KahanSumComplex per_q;
    for (const auto& psi : primitive_characters(q)) {
      cplx tau_conj = gauss_sum(psi.conjugate()).value;
      KahanSumComplex per_psi;
      for (std::uint64_t k = 1; k * q <= ymax; ++k) {
        // b is supported on squarefree integers, so gcd(k, q) > 1 never contributes.
        if (gcd_u64(k, q) != 1) continue;
        double bkq = mollifier::eval_b(k * q, spec);
        if (bkq == 0.0) continue;
        const std::uint64_t mmax_kq = m_cutoff(k * q, spec.height());
        KahanSumComplex per_k;
        for (std::uint64_t d = 1; d <= k; ++d) {
          if (k % d != 0) continue;
          cplx delta = delta_term({q, k, d, &psi});
          if (delta == cplx{}) continue;
          KahanSumComplex inner;
          const std::uint64_t mmax = mmax_kq / d;
          for (std::uint64_t m = 1; m <= mmax; ++m) {
            double amd = a(m * d);
            if (amd == 0.0) continue;
            cplx chi = psi(static_cast<std::int64_t>(m));
            if (chi == cplx{}) continue;
            inner.add(amd * chi);
          }
          per_k.add(delta * inner.value());
        }
        per_psi.add(per_k.value() * (bkq / static_cast<double>(k * q)));
      }
      per_q.add(tau_conj * per_psi.value());
    }
    out.by_modulus[q] = per_q.value();
  });
  KahanSumComplex total;
  for (std::uint64_t q = 1; q <= ymax; ++q) total.add(out.by_modulus[q]);
  out.total = total.value();
  return out;
}

double polya_vinogradov_max(const DirichletCharacter& chi, std::uint64_t y_max) {
  return coprime_partial_sum_max(chi, y_max, 1);
}

double coprime_partial_sum_max(const DirichletCharacter& chi, std::uint64_t y_max, std::uint64_t coprime_to) {
  require(!chi.is_principal(), "partial character sums of the principal character are unbounded");
  require(coprime_to >= 1, "coprime_partial_sum_max: D must be >= 1");
  cplx s{};
  double best = 0;
  for (std::uint64_t h = 1; h <= y_max; ++h) {
    if (coprime_to > 1 && gcd_u64(h, coprime_to) != 1) continue;
    s += chi(static_cast<std::int64_t>(h));
    best = std::max(best, std::abs(s));
  }
  return best;
}

}  // namespace mollab::characters
