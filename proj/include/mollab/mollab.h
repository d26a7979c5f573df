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

#ifndef MOLLAB_MOLLAB_H_
#define MOLLAB_MOLLAB_H_

/* C interface to mollab. Every call reports a status code; on failure the
 * message is available from mollab_last_error(ctx). JSON strings returned
 * through `const char**` belong to the context and stay valid until the next
 * call on that context. */

#include <stddef.h>
#include <stdint.h>

#if defined(MOLLAB_BUILDING_LIBRARY)
#define MOLLAB_API __attribute__((visibility("default")))
#else
#define MOLLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mollab_status {
  MOLLAB_OK = 0,
  MOLLAB_INVALID_ARGUMENT = 1,
  MOLLAB_DOMAIN = 2,
  MOLLAB_IO = 3,
  MOLLAB_CHECK_FAILED = 4,
  MOLLAB_INTERNAL = 5
} mollab_status;

typedef struct mollab_context mollab_context;
typedef struct mollab_table mollab_table;
typedef struct mollab_zeros mollab_zeros;

/* Mollifier: y = T^theta unless y > 0 is given. A null coefficient list
 * selects P(x) = (1 + theta) x - theta x^2. */
typedef struct mollab_spec {
  double theta;
  double T;
  double y;
  const double* coeffs;
  size_t n_coeffs;
} mollab_spec;

MOLLAB_API const char* mollab_version(void);

MOLLAB_API mollab_status mollab_context_create(mollab_context** out);
MOLLAB_API void mollab_context_destroy(mollab_context* ctx);
MOLLAB_API const char* mollab_last_error(const mollab_context* ctx);
/* 0 restores the hardware default. */
MOLLAB_API mollab_status mollab_set_threads(mollab_context* ctx, unsigned threads);

/* ---- arithmetic tables ------------------------------------------------ */

/* "mobius", "vonmangoldt", "log", "one", "tau_2".."tau_9". */
MOLLAB_API mollab_status mollab_table_standard(mollab_context* ctx, const char* name, uint64_t n,
                                               mollab_table** out);
/* a_1 (nu = 1) or a_2 (nu = 2, needs spec) on 1..n. */
MOLLAB_API mollab_status mollab_table_coefficients(mollab_context* ctx, int nu, const mollab_spec* spec,
                                                   uint64_t n, mollab_table** out);
MOLLAB_API mollab_status mollab_table_load(mollab_context* ctx, const char* path, mollab_table** out);
MOLLAB_API mollab_status mollab_table_save(mollab_context* ctx, const mollab_table* table, const char* path);
MOLLAB_API uint64_t mollab_table_size(const mollab_table* table);
/* values[i] = f(i + 1). */
MOLLAB_API const double* mollab_table_values(const mollab_table* table);
MOLLAB_API void mollab_table_destroy(mollab_table* table);

/* Limit of the a_nu table needed by the rearrangement check for this spec. */
MOLLAB_API mollab_status mollab_rearrangement_table_limit(mollab_context* ctx, const mollab_spec* spec,
                                                          uint64_t* out);

/* ---- constants and the mollifier --------------------------------------- */

MOLLAB_API mollab_status mollab_report_kappa(mollab_context* ctx, double theta, const double* coeffs,
                                             size_t n_coeffs, const char** json);
MOLLAB_API mollab_status mollab_optimize_poly(mollab_context* ctx, double theta, int degree, const char** json);

/* ---- verifiers: *pass receives 1 or 0; the JSON report is always set ---- */

MOLLAB_API mollab_status mollab_verify_vaughan(mollab_context* ctx, int r, double x, uint64_t n, int* pass,
                                               const char** json);
/* `table` may be null; it is then computed. */
MOLLAB_API mollab_status mollab_verify_rearrangement(mollab_context* ctx, int nu, const mollab_spec* spec,
                                                     const mollab_table* table, int* pass, const char** json);
/* Reconstruction of a_2 on 1..n_max, then divisor splitting for d <= d_max and
 * m <= m_limit across `terms` terms drawn with `seed`. */
MOLLAB_API mollab_status mollab_verify_split(mollab_context* ctx, const mollab_spec* spec, double x,
                                             uint64_t n_max, uint64_t d_max, uint64_t m_limit, size_t terms,
                                             uint64_t seed, int* pass, const char** json);
MOLLAB_API mollab_status mollab_monitor_sieve(mollab_context* ctx, size_t trials, uint64_t seed, uint64_t q_max,
                                              uint64_t h_max, double v_max, double ratio_limit, int* pass,
                                              const char** json);
MOLLAB_API mollab_status mollab_perron(mollab_context* ctx, double m_big, double u, uint64_t m, double* value);

/* ---- zeros and moments ------------------------------------------------- */

MOLLAB_API mollab_status mollab_zeros_find(mollab_context* ctx, double t, mollab_zeros** out);
MOLLAB_API mollab_status mollab_zeros_ingest(mollab_context* ctx, const char* path, mollab_zeros** out);
MOLLAB_API mollab_status mollab_zeros_write(mollab_context* ctx, const mollab_zeros* zeros, const char* path);
MOLLAB_API size_t mollab_zeros_size(const mollab_zeros* zeros);
MOLLAB_API const double* mollab_zeros_data(const mollab_zeros* zeros);
MOLLAB_API double mollab_zeros_max_height(const mollab_zeros* zeros);
/* 1 when computed, 0 when ingested. */
MOLLAB_API int mollab_zeros_is_computed(const mollab_zeros* zeros);
MOLLAB_API void mollab_zeros_destroy(mollab_zeros* zeros);

MOLLAB_API mollab_status mollab_count_zeros(mollab_context* ctx, double t, const mollab_zeros* zeros,
                                            int64_t* census, int64_t* formula);

typedef struct mollab_moments {
  double T;
  double theta;
  double y;
  double s1_re;
  double s1_im;
  double s2;
  uint64_t n_t;
  double kappa_bound;
  double s1_ratio; /* Re S1 over its predicted main term */
  double s2_ratio;
} mollab_moments;

MOLLAB_API mollab_status mollab_compute_moments(mollab_context* ctx, const mollab_spec* spec,
                                                const mollab_zeros* zeros, mollab_moments* out);

#ifdef __cplusplus
}
#endif

#endif /* MOLLAB_MOLLAB_H_ */
