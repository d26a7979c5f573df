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

// Critical-line zeta evaluation, zeros, zeta'(rho) and the mollified moments.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "mollab/mollifier.hpp"
#include "mollab/numeric.hpp"

namespace mollab::zeta {

/// Riemann-Siegel theta via the complex log-gamma function.
double rs_theta(double t);
/// Asymptotic expansion t/2 log(t/2pi) - t/2 - pi/8 + 1/(48t) + ...; for t >= 10.
double rs_theta_asymptotic(double t);
/// theta'(t) = Re psi(1/4 + it/2)/2 - log(pi)/2.
double rs_theta_prime(double t);

/// zeta(s) by Euler-Maclaurin summation; s != 1.
cplx zeta_em(cplx s);

/// Heights at or above this use the Riemann-Siegel formula.
inline constexpr double kRiemannSiegelThreshold = 300;

enum class ZMethod { EulerMaclaurin, RiemannSiegel };

struct ZValue {
  double value = 0;
  double imag_residue = 0;  // |Im e^{i theta} zeta(1/2+it)|; zero by construction on the RS path
  ZMethod method = ZMethod::EulerMaclaurin;
};

ZValue hardy_Z_detail(double t);
inline double hardy_Z(double t) { return hardy_Z_detail(t).value; }

/// e^{i theta(t)} zeta(1/2 + it) from Euler-Maclaurin; real up to rounding.
cplx hardy_Z_em(double t);
/// Riemann-Siegel main sum plus corrections C_0..C_4; t >= 2 pi.
double hardy_Z_rs(double t);

// ---------------------------------------------------------------------------

enum class ZeroSource { Computed, Ingested };

struct ZeroList {
  std::vector<double> ordinates;
  ZeroSource source = ZeroSource::Computed;
  double max_height = 0;  // every zero with 0 < gamma <= max_height is listed

  std::size_t count_up_to(double t) const;
};

/// Sign-change scan seeded at Gram points, bisection to 1e-9, completeness
/// checked against the argument-principle count at each block boundary.
ZeroList find_zeros(double t_max);

/// One ordinate per line, '#' comments; an optional "# max_height=<t>" line.
ZeroList ingest_zeros(const std::filesystem::path& path);
void write_zeros(const std::filesystem::path& path, const ZeroList& zeros);

/// theta(T)/pi + 1 + S(T), with S(T) = arg zeta(1/2+iT)/pi continued along
/// 2 -> 2+iT -> 1/2+iT. T must not be an ordinate.
struct FormulaCount {
  double smooth = 0;  // theta(T)/pi + 1
  double s_of_t = 0;
  std::int64_t value = 0;
};
FormulaCount count_formula(double t);

struct CountResult {
  std::int64_t census = 0;
  FormulaCount formula;
};
/// Both methods; throws CheckFailed when they differ by 2 or more.
CountResult count_N(double t);
CountResult count_N(double t, const ZeroList& zeros);

// ---------------------------------------------------------------------------

struct ZetaPrime {
  cplx value;                // -i Z'(gamma) e^{-i theta(gamma)}
  cplx direct;               // i^{-1} d/dt zeta(1/2+it) by central differences of zeta_em
  double relative_agreement = 0;
  bool possible_multiple_zero = false;  // |Z'(gamma)| < 1e-12
};

cplx zeta_prime_at_zero(double gamma);
ZetaPrime zeta_prime_at_zero_checked(double gamma);

struct MomentResult {
  double T;
  mollifier::MollifierSpec spec;
  cplx S1;
  double S2;
  std::uint64_t N_T;
  double kappa_bound;
};

/// S1 = sum B(rho) zeta'(rho), S2 = sum |B(rho) zeta'(rho)|^2 over 0 < gamma <= T.
MomentResult compute_moments(double t, const mollifier::MollifierSpec& spec, const ZeroList& zeros);

/// |S1|^2 / (S2 N_T).
double empirical_kappa_bound(const MomentResult& result);

struct MomentRatios {
  double s1_main = 0;  // T L^2/(2 pi) times the predicted S1 factor
  double s2_main = 0;  // T L^3/(2 pi) times the predicted S2 factor
  double s1_ratio = 0; // Re S1 / s1_main
  double s2_ratio = 0;
};
MomentRatios moment_ratios(const MomentResult& result);

}  // namespace mollab::zeta
