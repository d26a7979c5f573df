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

#include "mollab/mollab.h"

#include <algorithm>
#include <cmath>
#include <new>
#include <optional>
#include <random>
#include <string>

#include "mollab/arith.hpp"
#include "mollab/characters.hpp"
#include "mollab/error.hpp"
#include "mollab/mollifier.hpp"
#include "mollab/report.hpp"
#include "mollab/vaughan.hpp"
#include "mollab/zeta.hpp"

using nlohmann::ordered_json;

struct mollab_context {
  std::string last_error;
  std::string json;
};

struct mollab_table {
  mollab::arith::ArithFnTable table;
};

struct mollab_zeros {
  mollab::zeta::ZeroList zeros;
};

namespace {

using namespace mollab;

mollab_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return MOLLAB_INVALID_ARGUMENT;
    case ErrorCode::Domain: return MOLLAB_DOMAIN;
    case ErrorCode::Io: return MOLLAB_IO;
    case ErrorCode::CheckFailed: return MOLLAB_CHECK_FAILED;
  }
  return MOLLAB_INTERNAL;
}

template <class F>
mollab_status guarded(mollab_context* ctx, F&& body) {
  if (!ctx) return MOLLAB_INVALID_ARGUMENT;
  ctx->last_error.clear();
  try {
    body();
    return MOLLAB_OK;
  } catch (const Error& e) {
    ctx->last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return MOLLAB_INTERNAL;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return MOLLAB_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) reject(std::string("null argument: ") + what);
}

const char* publish(mollab_context* ctx, const ordered_json& j) {
  ctx->json = j.dump(2);
  return ctx->json.c_str();
}

mollifier::Polynomial poly_from(double theta, const double* coeffs, std::size_t n) {
  if (coeffs && n > 0) return mollifier::Polynomial(std::vector<double>(coeffs, coeffs + n));
  return mollifier::Polynomial::quadratic_family(theta);
}

mollifier::MollifierSpec spec_from(const mollab_spec* s) {
  need(s, "spec");
  if (s->y > 0) {
    require(s->T > 1, "spec: T must exceed 1");
    double theta = std::log(s->y) / std::log(s->T);
    return mollifier::MollifierSpec::with_length(s->y, s->T, poly_from(theta, s->coeffs, s->n_coeffs));
  }
  return mollifier::MollifierSpec::from_theta(s->theta, s->T, poly_from(s->theta, s->coeffs, s->n_coeffs));
}

ordered_json spec_json(const mollifier::MollifierSpec& spec) {
  return {{"theta", spec.theta()}, {"T", spec.height()}, {"y", spec.y()}, {"poly", spec.poly().coefficients()}};
}

ordered_json cplx_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

}  // namespace

extern "C" {

const char* mollab_version(void) { return "0.1.0"; }

mollab_status mollab_context_create(mollab_context** out) {
  if (!out) return MOLLAB_INVALID_ARGUMENT;
  *out = new (std::nothrow) mollab_context();
  return *out ? MOLLAB_OK : MOLLAB_INTERNAL;
}

void mollab_context_destroy(mollab_context* ctx) { delete ctx; }

const char* mollab_last_error(const mollab_context* ctx) { return ctx ? ctx->last_error.c_str() : "null context"; }

mollab_status mollab_set_threads(mollab_context* ctx, unsigned threads) {
  return guarded(ctx, [&] { set_worker_threads(threads); });
}

mollab_status mollab_table_standard(mollab_context* ctx, const char* name, uint64_t n, mollab_table** out) {
  return guarded(ctx, [&] {
    need(name, "name");
    need(out, "out");
    *out = new mollab_table{arith::sieve_standard(name, n)};
  });
}

mollab_status mollab_table_coefficients(mollab_context* ctx, int nu, const mollab_spec* spec, uint64_t n,
                                        mollab_table** out) {
  return guarded(ctx, [&] {
    need(out, "out");
    require(nu == 1 || nu == 2, "nu must be 1 or 2");
    require(n >= 1, "table size must be positive");
    if (nu == 1) {
      *out = new mollab_table{arith::compute_a1(n)};
    } else {
      auto s = spec_from(spec);
      *out = new mollab_table{arith::compute_a2(n, mollifier::coefficient_table(s, n))};
    }
  });
}

mollab_status mollab_table_load(mollab_context* ctx, const char* path, mollab_table** out) {
  return guarded(ctx, [&] {
    need(path, "path");
    need(out, "out");
    *out = new mollab_table{arith::load_table(path)};
  });
}

mollab_status mollab_table_save(mollab_context* ctx, const mollab_table* table, const char* path) {
  return guarded(ctx, [&] {
    need(table, "table");
    need(path, "path");
    arith::save_table(path, table->table);
  });
}

uint64_t mollab_table_size(const mollab_table* table) { return table ? table->table.limit() : 0; }
const double* mollab_table_values(const mollab_table* table) {
  return table ? table->table.values().data() : nullptr;
}
void mollab_table_destroy(mollab_table* table) { delete table; }

mollab_status mollab_rearrangement_table_limit(mollab_context* ctx, const mollab_spec* spec, uint64_t* out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = characters::m_nu_table_limit(spec_from(spec));
  });
}

mollab_status mollab_report_kappa(mollab_context* ctx, double theta, const double* coeffs, size_t n_coeffs,
                                  const char** json) {
  return guarded(ctx, [&] {
    need(json, "json");
    auto p = poly_from(theta, coeffs, n_coeffs);
    auto mt = mollifier::main_terms(theta, p);
    double kstar = mollifier::kappa_star_lower(mt.s1_factor, mt.s2_factor);
    ordered_json j;
    j["theta"] = theta;
    j["poly"] = p.coefficients();
    j["s1_factor"] = mt.s1_factor;
    j["s2_factor"] = mt.s2_factor;
    j["m11_factor"] = mt.m11_factor;
    j["m21_factor"] = mt.m21_factor;
    j["kappa_star"] = kstar;
    j["kappa_d"] = mollifier::kappa_d_lower(std::min(1.0, kstar));
    *json = publish(ctx, j);
  });
}

mollab_status mollab_optimize_poly(mollab_context* ctx, double theta, int degree, const char** json) {
  return guarded(ctx, [&] {
    need(json, "json");
    auto opt = mollifier::optimize_P(theta, degree);
    auto mt = mollifier::main_terms(theta, opt.poly);
    ordered_json j;
    j["theta"] = theta;
    j["degree"] = degree;
    j["poly"] = opt.poly.coefficients();
    j["kappa_star"] = opt.value;
    j["kappa_d"] = mollifier::kappa_d_lower(std::min(1.0, opt.value));
    j["s1_factor"] = mt.s1_factor;
    j["s2_factor"] = mt.s2_factor;
    j["gradient_norm"] = opt.gradient_norm;
    j["used_fallback"] = opt.used_fallback;
    *json = publish(ctx, j);
  });
}

mollab_status mollab_verify_vaughan(mollab_context* ctx, int r, double x, uint64_t n, int* pass,
                                    const char** json) {
  return guarded(ctx, [&] {
    need(pass, "pass");
    need(json, "json");
    auto rep = vaughan::verify_vaughan({r, x}, n);
    *pass = rep.pass;
    *json = publish(ctx, rep.to_json());
  });
}

mollab_status mollab_verify_rearrangement(mollab_context* ctx, int nu, const mollab_spec* spec,
                                          const mollab_table* table, int* pass, const char** json) {
  return guarded(ctx, [&] {
    need(pass, "pass");
    need(json, "json");
    require(nu == 1 || nu == 2, "nu must be 1 or 2");
    auto s = spec_from(spec);
    auto limit = characters::m_nu_table_limit(s);
    std::optional<arith::ArithFnTable> computed;
    if (!table) {
      computed = nu == 1 ? arith::compute_a1(limit) : arith::compute_a2(limit, mollifier::coefficient_table(s, limit));
    }
    const auto& a = table ? table->table : *computed;
    auto direct = characters::m_nu_direct(nu, s, a);
    auto rearr = characters::m_nu_rearranged(nu, s, a);
    CheckReport rep;
    rep.check = "rearrangement";
    rep.parameters = spec_json(s);
    rep.parameters["nu"] = nu;
    rep.parameters["table_limit"] = limit;
    rep.tolerance = 1e-8;
    rep.deviation = std::abs(rearr - direct) / std::max(1.0, std::abs(direct));
    rep.worst_case = {{"direct", cplx_json(direct)}, {"rearranged", cplx_json(rearr)}};
    rep.pass = rep.deviation <= rep.tolerance;
    *pass = rep.pass;
    *json = publish(ctx, rep.to_json());
  });
}

mollab_status mollab_verify_split(mollab_context* ctx, const mollab_spec* spec, double x, uint64_t n_max,
                                  uint64_t d_max, uint64_t m_limit, size_t terms, uint64_t seed, int* pass,
                                  const char** json) {
  return guarded(ctx, [&] {
    need(pass, "pass");
    need(json, "json");
    require(d_max >= 1 && m_limit >= 1 && terms >= 1, "d_max, m_limit and terms must be positive");
    auto s = spec_from(spec);
    vaughan::VaughanConfig cfg{3, x};
    auto recon = vaughan::verify_decomposition(s, cfg, n_max);
    auto list = vaughan::decompose_a2(s, cfg, n_max);
    auto fns = vaughan::SlotFunctions::build(s, std::max(n_max, d_max * m_limit));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, list.size() - 1);
    double worst = 0;
    bool ok = true;
    ordered_json worst_case = ordered_json::object();
    for (std::size_t t = 0; t < terms; ++t) {
      std::size_t idx = pick(rng);
      for (std::uint64_t d = 1; d <= d_max; ++d) {
        auto rep = vaughan::split_by_divisor(list[idx], fns, d, m_limit);
        ok = ok && rep.pass;
        if (rep.deviation >= worst) {
          worst = rep.deviation;
          worst_case = rep.worst_case;
          worst_case["term_index"] = idx;
          worst_case["d"] = d;
        }
      }
    }
    ordered_json j;
    j["check"] = "divisor_split";
    j["parameters"] = spec_json(s);
    j["parameters"]["X"] = x;
    j["parameters"]["n_max"] = n_max;
    j["parameters"]["d_max"] = d_max;
    j["parameters"]["m_limit"] = m_limit;
    j["parameters"]["terms"] = terms;
    j["parameters"]["seed"] = seed;
    j["reconstruction"] = recon.to_json();
    j["worst_case"] = worst_case;
    j["deviation"] = worst;
    j["tolerance"] = 1e-10;
    j["pass"] = ok && recon.pass;
    *pass = ok && recon.pass;
    *json = publish(ctx, j);
  });
}

mollab_status mollab_monitor_sieve(mollab_context* ctx, size_t trials, uint64_t seed, uint64_t q_max,
                                   uint64_t h_max, double v_max, double ratio_limit, int* pass,
                                   const char** json) {
  return guarded(ctx, [&] {
    need(pass, "pass");
    need(json, "json");
    auto sweep = vaughan::hybrid_large_sieve_sweep(trials, seed, q_max, h_max, v_max);
    ordered_json j;
    j["check"] = "hybrid_large_sieve";
    j["parameters"] = {{"trials", trials}, {"seed", seed}, {"Q_max", q_max}, {"H_max", h_max}, {"V_max", v_max}};
    j["worst_case"] = {{"Q", sweep.worst.Q},         {"V", sweep.worst.V},     {"H", sweep.worst.H},
                       {"seed", sweep.worst.seed},   {"lhs", sweep.worst.lhs}, {"rhs", sweep.worst.rhs},
                       {"characters", sweep.worst.characters}};
    j["max_ratio"] = sweep.max_ratio;
    j["ratio_limit"] = ratio_limit;
    j["phase_deviation"] = sweep.max_phase_deviation;
    j["phase_tolerance"] = 1e-10;
    bool ok = sweep.max_ratio <= ratio_limit && sweep.max_phase_deviation <= 1e-10;
    j["pass"] = ok;
    *pass = ok;
    *json = publish(ctx, j);
  });
}

mollab_status mollab_perron(mollab_context* ctx, double m_big, double u, uint64_t m, double* value) {
  return guarded(ctx, [&] {
    need(value, "value");
    *value = vaughan::perron_truncation(m_big, u, m).value;
  });
}

mollab_status mollab_zeros_find(mollab_context* ctx, double t, mollab_zeros** out) {
  return guarded(ctx, [&] {
    need(out, "out");
    *out = new mollab_zeros{zeta::find_zeros(t)};
  });
}

mollab_status mollab_zeros_ingest(mollab_context* ctx, const char* path, mollab_zeros** out) {
  return guarded(ctx, [&] {
    need(path, "path");
    need(out, "out");
    *out = new mollab_zeros{zeta::ingest_zeros(path)};
  });
}

mollab_status mollab_zeros_write(mollab_context* ctx, const mollab_zeros* zeros, const char* path) {
  return guarded(ctx, [&] {
    need(zeros, "zeros");
    need(path, "path");
    zeta::write_zeros(path, zeros->zeros);
  });
}

size_t mollab_zeros_size(const mollab_zeros* zeros) { return zeros ? zeros->zeros.ordinates.size() : 0; }
const double* mollab_zeros_data(const mollab_zeros* zeros) {
  return zeros ? zeros->zeros.ordinates.data() : nullptr;
}
double mollab_zeros_max_height(const mollab_zeros* zeros) { return zeros ? zeros->zeros.max_height : 0; }
int mollab_zeros_is_computed(const mollab_zeros* zeros) {
  return zeros && zeros->zeros.source == zeta::ZeroSource::Computed;
}
void mollab_zeros_destroy(mollab_zeros* zeros) { delete zeros; }

mollab_status mollab_count_zeros(mollab_context* ctx, double t, const mollab_zeros* zeros, int64_t* census,
                                 int64_t* formula) {
  return guarded(ctx, [&] {
    need(census, "census");
    need(formula, "formula");
    auto r = zeros ? zeta::count_N(t, zeros->zeros) : zeta::count_N(t);
    *census = r.census;
    *formula = r.formula.value;
  });
}

mollab_status mollab_compute_moments(mollab_context* ctx, const mollab_spec* spec, const mollab_zeros* zeros,
                                     mollab_moments* out) {
  return guarded(ctx, [&] {
    need(zeros, "zeros");
    need(out, "out");
    auto s = spec_from(spec);
    auto m = zeta::compute_moments(s.height(), s, zeros->zeros);
    auto r = zeta::moment_ratios(m);
    *out = mollab_moments{m.T,        s.theta(), s.y(),         m.S1.real(), m.S1.imag(),
                          m.S2,       m.N_T,     m.kappa_bound, r.s1_ratio,  r.s2_ratio};
  });
}

}  // extern "C"
