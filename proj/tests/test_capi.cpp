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

// Exercises the shared library through its C interface only.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "mollab/mollab.h"

namespace {

struct Ctx {
  mollab_context* p = nullptr;
  Ctx() { REQUIRE(mollab_context_create(&p) == MOLLAB_OK); }
  ~Ctx() { mollab_context_destroy(p); }
  std::string error() const { return mollab_last_error(p); }
};

nlohmann::json parse(const char* s) { return nlohmann::json::parse(s); }

}  // namespace

TEST_CASE("context lifecycle and null safety") {
  CHECK(std::string(mollab_version()).size() > 0);
  CHECK(mollab_context_create(nullptr) == MOLLAB_INVALID_ARGUMENT);
  mollab_context_destroy(nullptr);
  mollab_table_destroy(nullptr);
  mollab_zeros_destroy(nullptr);
  CHECK(mollab_table_size(nullptr) == 0);
  CHECK(mollab_table_values(nullptr) == nullptr);
  CHECK(mollab_zeros_data(nullptr) == nullptr);
  CHECK(std::string(mollab_last_error(nullptr)) == "null context");

  Ctx c;
  CHECK(mollab_set_threads(c.p, 2) == MOLLAB_OK);
  CHECK(mollab_set_threads(c.p, 0) == MOLLAB_OK);
  const char* json = nullptr;
  CHECK(mollab_report_kappa(nullptr, 0.5, nullptr, 0, &json) == MOLLAB_INVALID_ARGUMENT);
  CHECK(mollab_report_kappa(c.p, 0.5, nullptr, 0, nullptr) == MOLLAB_INVALID_ARGUMENT);
  CHECK(c.error().find("null") != std::string::npos);
}

TEST_CASE("report_kappa and optimize_poly") {
  Ctx c;
  const char* json = nullptr;
  double quad[] = {1.5, -0.5};
  REQUIRE(mollab_report_kappa(c.p, 0.5, quad, 2, &json) == MOLLAB_OK);
  auto j = parse(json);
  CHECK(std::abs(j["s1_factor"].get<double>() - 19.0 / 24) < 1e-14);
  CHECK(std::abs(j["s2_factor"].get<double>() - 57.0 / 64) < 1e-14);
  CHECK(std::abs(j["kappa_star"].get<double>() - 19.0 / 27) < 1e-14);
  CHECK(std::abs(j["kappa_d"].get<double>() - 0.8466512) < 1e-6);

  REQUIRE(mollab_report_kappa(c.p, 0.5, nullptr, 0, &json) == MOLLAB_OK);
  CHECK(std::abs(parse(json)["kappa_star"].get<double>() - 19.0 / 27) < 1e-14);

  double bad[] = {1.0, 1.0};
  CHECK(mollab_report_kappa(c.p, 0.5, bad, 2, &json) == MOLLAB_INVALID_ARGUMENT);
  CHECK(!c.error().empty());
  CHECK(mollab_report_kappa(c.p, 0.0, quad, 2, &json) != MOLLAB_OK);

  REQUIRE(mollab_optimize_poly(c.p, 0.5, 3, &json) == MOLLAB_OK);
  auto o = parse(json);
  CHECK(o["kappa_star"].get<double>() >= 19.0 / 27 - 1e-12);
  CHECK(o["poly"].size() == 3);
  CHECK(mollab_optimize_poly(c.p, 0.5, 0, &json) == MOLLAB_INVALID_ARGUMENT);
}

TEST_CASE("tables") {
  Ctx c;
  mollab_table* t = nullptr;
  REQUIRE(mollab_table_standard(c.p, "mobius", 30, &t) == MOLLAB_OK);
  REQUIRE(mollab_table_size(t) == 30);
  const double* v = mollab_table_values(t);
  CHECK(v[0] == 1);
  CHECK(v[1] == -1);
  CHECK(v[3] == 0);
  CHECK(v[29] == -1);

  auto path = std::filesystem::temp_directory_path() / "mollab_capi_table.bin";
  REQUIRE(mollab_table_save(c.p, t, path.c_str()) == MOLLAB_OK);
  mollab_table* back = nullptr;
  REQUIRE(mollab_table_load(c.p, path.c_str(), &back) == MOLLAB_OK);
  REQUIRE(mollab_table_size(back) == 30);
  for (int i = 0; i < 30; ++i) CHECK(mollab_table_values(back)[i] == v[i]);
  mollab_table_destroy(back);
  mollab_table_destroy(t);
  std::filesystem::remove(path);

  CHECK(mollab_table_standard(c.p, "no_such_function", 10, &t) == MOLLAB_INVALID_ARGUMENT);
  CHECK(mollab_table_load(c.p, "/nonexistent/dir/x.bin", &t) == MOLLAB_IO);

  mollab_spec spec{0.0, 300, 20, nullptr, 0};
  REQUIRE(mollab_table_coefficients(c.p, 1, &spec, 50, &t) == MOLLAB_OK);
  CHECK(mollab_table_size(t) == 50);
  mollab_table_destroy(t);
  CHECK(mollab_table_coefficients(c.p, 3, &spec, 50, &t) == MOLLAB_INVALID_ARGUMENT);
}

TEST_CASE("verifiers") {
  Ctx c;
  int pass = 0;
  const char* json = nullptr;
  REQUIRE(mollab_verify_vaughan(c.p, 3, 10, 1000, &pass, &json) == MOLLAB_OK);
  CHECK(pass == 1);
  CHECK(parse(json)["pass"] == true);
  CHECK(mollab_verify_vaughan(c.p, 3, 10, 1001, &pass, &json) == MOLLAB_INVALID_ARGUMENT);
  CHECK(c.error().find("1000") != std::string::npos);
  CHECK(mollab_verify_vaughan(c.p, 0, 10, 100, &pass, &json) == MOLLAB_INVALID_ARGUMENT);

  mollab_spec spec{0.0, 300, 20, nullptr, 0};
  REQUIRE(mollab_verify_rearrangement(c.p, 1, &spec, nullptr, &pass, &json) == MOLLAB_OK);
  CHECK(pass == 1);

  REQUIRE(mollab_verify_split(c.p, &spec, 22, 2000, 12, 200, 5, 3, &pass, &json) == MOLLAB_OK);
  CHECK(pass == 1);
  CHECK(parse(json)["reconstruction"]["pass"] == true);

  REQUIRE(mollab_monitor_sieve(c.p, 20, 7, 10, 50, 10, 6, &pass, &json) == MOLLAB_OK);
  CHECK(pass == 1);

  double value = 0;
  REQUIRE(mollab_perron(c.p, 100, 1e4, 50, &value) == MOLLAB_OK);
  CHECK(std::abs(value - 1) < 5 * 100 / 1e4);
  REQUIRE(mollab_perron(c.p, 100, 1e4, 150, &value) == MOLLAB_OK);
  CHECK(std::abs(value) < 5 * 100 / 1e4);
}

TEST_CASE("zeros and moments") {
  Ctx c;
  mollab_zeros* z = nullptr;
  REQUIRE(mollab_zeros_find(c.p, 100, &z) == MOLLAB_OK);
  CHECK(mollab_zeros_size(z) == 29);
  CHECK(mollab_zeros_is_computed(z) == 1);
  CHECK(std::abs(mollab_zeros_data(z)[0] - 14.134725141734694) < 1e-8);
  CHECK(mollab_zeros_max_height(z) == 100);

  int64_t census = -1, formula = -1;
  REQUIRE(mollab_count_zeros(c.p, 100, z, &census, &formula) == MOLLAB_OK);
  CHECK(census == 29);
  CHECK(formula == 29);
  REQUIRE(mollab_count_zeros(c.p, 50, nullptr, &census, &formula) == MOLLAB_OK);
  CHECK(census == 10);

  auto path = std::filesystem::temp_directory_path() / "mollab_capi_zeros.txt";
  REQUIRE(mollab_zeros_write(c.p, z, path.c_str()) == MOLLAB_OK);
  mollab_zeros* back = nullptr;
  REQUIRE(mollab_zeros_ingest(c.p, path.c_str(), &back) == MOLLAB_OK);
  CHECK(mollab_zeros_size(back) == 29);
  CHECK(mollab_zeros_is_computed(back) == 0);
  std::filesystem::remove(path);

  mollab_spec spec{0.3, 100, 0, nullptr, 0};
  mollab_moments m{};
  REQUIRE(mollab_compute_moments(c.p, &spec, back, &m) == MOLLAB_OK);
  CHECK(m.n_t == 29);
  CHECK(m.s2 > 0);
  CHECK(m.kappa_bound > 0);
  CHECK(m.kappa_bound <= 1.01);

  spec.T = 500;
  CHECK(mollab_compute_moments(c.p, &spec, back, &m) == MOLLAB_INVALID_ARGUMENT);
  CHECK(c.error().find("100") != std::string::npos);
  mollab_zeros_destroy(back);
  mollab_zeros_destroy(z);

  CHECK(mollab_zeros_find(c.p, -5, &z) == MOLLAB_INVALID_ARGUMENT);
  CHECK(mollab_zeros_ingest(c.p, "/nonexistent/zeros.txt", &z) == MOLLAB_IO);
}
