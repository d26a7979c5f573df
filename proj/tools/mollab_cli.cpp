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

// mollab-cli: front end over the C interface.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mollab/mollab.h"

namespace fs = std::filesystem;

namespace {

// Exit codes: 0 all checks passed, 1 rejection or failed check, 2 usage error.
struct Exit {
  int code;
  std::string message;
};

struct Options {
  std::string config;
  std::string output;
  std::string format = "auto";
  std::string cache_dir;
  bool no_cache = false;
  unsigned threads = 0;
  std::uint64_t seed = 1;
};

std::string num(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string join(const std::vector<double>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? std::string(1, sep) : "") + num(v[i]);
  return out;
}

class Context {
 public:
  Context() {
    if (mollab_context_create(&ctx_) != MOLLAB_OK) throw Exit{1, "cannot create context"};
  }
  ~Context() { mollab_context_destroy(ctx_); }
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;
  mollab_context* get() const { return ctx_; }
  void check(mollab_status s) const {
    if (s != MOLLAB_OK) throw Exit{1, mollab_last_error(ctx_)};
  }

 private:
  mollab_context* ctx_ = nullptr;
};

using ZerosPtr = std::unique_ptr<mollab_zeros, decltype(&mollab_zeros_destroy)>;
using TablePtr = std::unique_ptr<mollab_table, decltype(&mollab_table_destroy)>;

// FNV-1a; cache file names must be stable across builds and platforms.
std::string key_hash(const std::string& key) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

class Cache {
 public:
  explicit Cache(const Options& o) {
    if (o.no_cache) return;
    if (!o.cache_dir.empty()) {
      dir_ = o.cache_dir;
    } else if (const char* env = std::getenv("MOLLAB_CACHE_DIR"); env && *env) {
      dir_ = env;
    } else if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
      dir_ = fs::path(xdg) / "mollab";
    } else if (const char* home = std::getenv("HOME"); home && *home) {
      dir_ = fs::path(home) / ".cache" / "mollab";
    }
  }
  bool enabled() const { return !dir_.empty(); }
  fs::path path(const std::string& prefix, const std::string& key, const std::string& ext) const {
    return dir_ / (prefix + "-" + key_hash(key) + ext);
  }
  void prepare() const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
  }

 private:
  fs::path dir_;
};

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::trunc);
      if (!file_) throw Exit{1, "cannot open output file " + path};
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string resolve_format(const Options& o, const std::string& fallback) {
  return o.format == "auto" ? fallback : o.format;
}

void emit_check(const Options& o, const char* json, int pass) {
  Sink sink(o.output);
  if (resolve_format(o, "json") == "json") {
    sink.out() << json << "\n";
  } else {
    auto j = nlohmann::json::parse(json);
    sink.out() << "check,pass,deviation,tolerance\n"
               << j.value("check", "") << "," << (pass ? "true" : "false") << "," << num(j.value("deviation", 0.0))
               << "," << num(j.value("tolerance", 0.0)) << "\n";
  }
}

mollab_spec make_spec(double theta, double t, double y, const std::vector<double>& poly) {
  return mollab_spec{theta, t, y, poly.empty() ? nullptr : poly.data(), poly.size()};
}

ZerosPtr obtain_zeros(const Context& ctx, const Options& o, double t, const std::string& source) {
  mollab_zeros* z = nullptr;
  if (source != "compute") {
    ctx.check(mollab_zeros_ingest(ctx.get(), source.c_str(), &z));
    return {z, &mollab_zeros_destroy};
  }
  Cache cache(o);
  fs::path file;
  if (cache.enabled()) {
    file = cache.path("zeros", "zeros|v1|T=" + num(t), ".txt");
    if (fs::exists(file) && mollab_zeros_ingest(ctx.get(), file.string().c_str(), &z) == MOLLAB_OK &&
        mollab_zeros_max_height(z) >= t)
      return {z, &mollab_zeros_destroy};
    if (z) mollab_zeros_destroy(z);
    z = nullptr;
  }
  ctx.check(mollab_zeros_find(ctx.get(), t, &z));
  ZerosPtr out(z, &mollab_zeros_destroy);
  if (cache.enabled()) {
    cache.prepare();
    // A failed cache write only costs a recomputation next time.
    mollab_zeros_write(ctx.get(), out.get(), file.string().c_str());
  }
  return out;
}

// ---- subcommands ------------------------------------------------------------

struct KappaArgs {
  double theta = 0.5;
  std::vector<double> poly;
};

int run_report_kappa(const Context& ctx, const Options& o, const KappaArgs& a) {
  const char* json = nullptr;
  ctx.check(mollab_report_kappa(ctx.get(), a.theta, a.poly.empty() ? nullptr : a.poly.data(), a.poly.size(), &json));
  Sink sink(o.output);
  if (resolve_format(o, "csv") == "json") {
    sink.out() << json << "\n";
    return 0;
  }
  auto j = nlohmann::json::parse(json);
  auto& os = sink.out();
  os << "quantity,value\n";
  os << "theta," << num(j["theta"].get<double>()) << "\n";
  os << "poly," << join(j["poly"].get<std::vector<double>>(), ';') << "\n";
  for (const char* k : {"s1_factor", "s2_factor", "m11_factor", "m21_factor", "kappa_star", "kappa_d"})
    os << k << "," << num(j[k].get<double>()) << "\n";
  return 0;
}

struct OptimizeArgs {
  double theta = 0.5;
  int degree = 2;
};

int run_optimize(const Context& ctx, const Options& o, const OptimizeArgs& a) {
  const char* json = nullptr;
  ctx.check(mollab_optimize_poly(ctx.get(), a.theta, a.degree, &json));
  Sink sink(o.output);
  if (resolve_format(o, "csv") == "json") {
    sink.out() << json << "\n";
    return 0;
  }
  auto j = nlohmann::json::parse(json);
  sink.out() << "theta,degree,poly,kappa_star,kappa_d,s1_factor,s2_factor\n"
             << num(a.theta) << "," << a.degree << "," << join(j["poly"].get<std::vector<double>>(), ';') << ","
             << num(j["kappa_star"].get<double>()) << "," << num(j["kappa_d"].get<double>()) << ","
             << num(j["s1_factor"].get<double>()) << "," << num(j["s2_factor"].get<double>()) << "\n";
  return 0;
}

struct VaughanArgs {
  int r = 3;
  double x = 10;
  std::uint64_t n = 1000;
};

int run_verify_vaughan(const Context& ctx, const Options& o, const VaughanArgs& a) {
  int pass = 0;
  const char* json = nullptr;
  ctx.check(mollab_verify_vaughan(ctx.get(), a.r, a.x, a.n, &pass, &json));
  emit_check(o, json, pass);
  return pass ? 0 : 1;
}

struct RearrangeArgs {
  int nu = 1;
  double y = 20;
  double t = 300;
  std::vector<double> poly;
};

int run_verify_rearrangement(const Context& ctx, const Options& o, const RearrangeArgs& a) {
  auto spec = make_spec(0, a.t, a.y, a.poly);
  std::uint64_t limit = 0;
  ctx.check(mollab_rearrangement_table_limit(ctx.get(), &spec, &limit));

  Cache cache(o);
  mollab_table* raw = nullptr;
  fs::path file;
  if (cache.enabled()) {
    std::string key = "a|v1|nu=" + std::to_string(a.nu) + "|N=" + std::to_string(limit);
    if (a.nu == 2) key += "|y=" + num(a.y) + "|T=" + num(a.t) + "|P=" + join(a.poly, ';');
    file = cache.path("a" + std::to_string(a.nu), key, ".tbl");
    if (fs::exists(file) && mollab_table_load(ctx.get(), file.string().c_str(), &raw) != MOLLAB_OK) raw = nullptr;
    if (raw && mollab_table_size(raw) != limit) {
      mollab_table_destroy(raw);
      raw = nullptr;
    }
  }
  if (!raw) {
    ctx.check(mollab_table_coefficients(ctx.get(), a.nu, &spec, limit, &raw));
    if (cache.enabled()) {
      cache.prepare();
      mollab_table_save(ctx.get(), raw, file.string().c_str());
    }
  }
  TablePtr table(raw, &mollab_table_destroy);
  int pass = 0;
  const char* json = nullptr;
  ctx.check(mollab_verify_rearrangement(ctx.get(), a.nu, &spec, table.get(), &pass, &json));
  emit_check(o, json, pass);
  return pass ? 0 : 1;
}

struct SplitArgs {
  double y = 20;
  double t = 1000;
  double x = 22;
  std::uint64_t n_max = 10000;
  std::uint64_t d_max = 30;
  std::uint64_t m_limit = 1000;
  std::size_t terms = 20;
  std::vector<double> poly;
};

int run_verify_split(const Context& ctx, const Options& o, const SplitArgs& a) {
  auto spec = make_spec(0, a.t, a.y, a.poly);
  int pass = 0;
  const char* json = nullptr;
  ctx.check(mollab_verify_split(ctx.get(), &spec, a.x, a.n_max, a.d_max, a.m_limit, a.terms, o.seed, &pass, &json));
  emit_check(o, json, pass);
  return pass ? 0 : 1;
}

struct MomentsArgs {
  double t = 1000;
  double theta = 0.3;
  double y = 0;
  std::vector<double> poly;
  std::string zeros = "compute";
};

int run_moments(const Context& ctx, const Options& o, const MomentsArgs& a) {
  auto zeros = obtain_zeros(ctx, o, a.t, a.zeros);
  auto spec = make_spec(a.theta, a.t, a.y, a.poly);
  mollab_moments m{};
  ctx.check(mollab_compute_moments(ctx.get(), &spec, zeros.get(), &m));
  std::vector<double> poly = a.poly;
  if (poly.empty()) poly = {1 + m.theta, -m.theta};
  Sink sink(o.output);
  if (resolve_format(o, "csv") == "json") {
    nlohmann::ordered_json j{{"T", m.T},           {"theta", m.theta},   {"y", m.y},
                             {"poly", poly},       {"ReS1", m.s1_re},    {"ImS1", m.s1_im},
                             {"S2", m.s2},         {"N", m.n_t},         {"kappa_bound", m.kappa_bound},
                             {"s1_ratio", m.s1_ratio}, {"s2_ratio", m.s2_ratio}};
    sink.out() << j.dump(2) << "\n";
  } else {
    sink.out() << "T,theta,poly,ReS1,ImS1,S2,N,kappa_bound\n"
               << num(m.T) << "," << num(m.theta) << "," << join(poly, ';') << "," << num(m.s1_re) << ","
               << num(m.s1_im) << "," << num(m.s2) << "," << m.n_t << "," << num(m.kappa_bound) << "\n";
  }
  return 0;
}

struct ZerosFindArgs {
  double t = 100;
};

int run_zeros_find(const Context& ctx, const Options& o, const ZerosFindArgs& a) {
  auto zeros = obtain_zeros(ctx, o, a.t, "compute");
  std::int64_t census = 0, formula = 0;
  ctx.check(mollab_count_zeros(ctx.get(), a.t, zeros.get(), &census, &formula));
  std::cerr << "N(" << num(a.t) << "): census " << census << ", formula " << formula << "\n";
  if (!o.output.empty() && o.output != "-") {
    ctx.check(mollab_zeros_write(ctx.get(), zeros.get(), o.output.c_str()));
  } else {
    const double* d = mollab_zeros_data(zeros.get());
    std::cout << "# max_height=" << num(mollab_zeros_max_height(zeros.get())) << "\n";
    for (std::size_t i = 0; i < mollab_zeros_size(zeros.get()); ++i) std::cout << num(d[i]) << "\n";
  }
  return census == formula ? 0 : 1;
}

struct ZerosIngestArgs {
  std::string file;
};

int run_zeros_ingest(const Context& ctx, const Options& o, const ZerosIngestArgs& a) {
  auto zeros = obtain_zeros(ctx, o, 0, a.file);
  std::size_t n = mollab_zeros_size(zeros.get());
  const double* d = mollab_zeros_data(zeros.get());
  Sink sink(o.output);
  if (resolve_format(o, "csv") == "json") {
    nlohmann::ordered_json j{{"file", a.file},
                             {"count", n},
                             {"first", d[0]},
                             {"last", d[n - 1]},
                             {"max_height", mollab_zeros_max_height(zeros.get())}};
    sink.out() << j.dump(2) << "\n";
  } else {
    sink.out() << "file,count,first,last,max_height\n"
               << a.file << "," << n << "," << num(d[0]) << "," << num(d[n - 1]) << ","
               << num(mollab_zeros_max_height(zeros.get())) << "\n";
  }
  return 0;
}

struct SieveArgs {
  std::size_t trials = 200;
  std::uint64_t q_max = 20;
  std::uint64_t h_max = 200;
  double v_max = 20;
  double ratio_limit = 6;
};

int run_monitor_sieve(const Context& ctx, const Options& o, const SieveArgs& a) {
  int pass = 0;
  const char* json = nullptr;
  ctx.check(mollab_monitor_sieve(ctx.get(), a.trials, o.seed, a.q_max, a.h_max, a.v_max, a.ratio_limit, &pass,
                                 &json));
  emit_check(o, json, pass);
  return pass ? 0 : 1;
}

// ---- config file ------------------------------------------------------------

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Exit{2, "cannot read config file " + path};
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Exit{2, path + ":" + std::to_string(lineno) + ": expected key=value"};
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

// Config entries become flags unless the command line already sets them.
std::vector<std::string> merge_config(CLI::App& app, std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;
  auto kv = read_config(config_path);

  CLI::App* target = &app;
  for (std::size_t i = 1; i < args.size(); ++i) {
    auto* sub = target->get_subcommand_no_throw(args[i]);
    if (sub) target = sub;
  }
  std::vector<std::string> globals, locals;
  for (const auto& [key, value] : kv) {
    std::string flag = "--" + key;
    if (given_on_command_line(args, flag)) continue;
    CLI::Option* opt = target != &app ? target->get_option_no_throw(flag) : nullptr;
    auto& dst = opt ? locals : globals;
    if (!opt) opt = app.get_option_no_throw(flag);
    if (!opt || key == "config") continue;
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1" || value == "yes") dst.push_back(flag);
    } else {
      dst.push_back(flag);
      dst.push_back(value);
    }
  }
  std::vector<std::string> out{args[0]};
  out.insert(out.end(), globals.begin(), globals.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  out.insert(out.end(), locals.begin(), locals.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mollab: verification laboratory for mollified zeta moments"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config, "flat key=value config file; command-line flags win");
  app.add_option("--output,-o", opt.output, "write the report here instead of stdout");
  app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"auto", "csv", "json"}));
  app.add_option("--cache-dir", opt.cache_dir, "cache directory (default $MOLLAB_CACHE_DIR)");
  app.add_flag("--no-cache", opt.no_cache, "neither read nor write cached tables and zero lists");
  app.add_option("--threads", opt.threads, "worker thread cap (0: hardware default)");
  app.add_option("--seed", opt.seed, "seed for randomized sweeps");

  KappaArgs kappa;
  auto* c_kappa = app.add_subcommand("report-kappa", "kappa* and kappa_d from the predicted main terms");
  c_kappa->add_option("--theta", kappa.theta, "mollifier exponent");
  c_kappa->add_option("--poly", kappa.poly, "coefficients c1,...,cd of P (default: the quadratic family)")
      ->delimiter(',');

  OptimizeArgs optim;
  auto* c_opt = app.add_subcommand("optimize-poly", "maximize S1^2/S2 over P of given degree");
  c_opt->add_option("--theta", optim.theta, "mollifier exponent");
  c_opt->add_option("--degree", optim.degree, "polynomial degree");

  VaughanArgs va;
  auto* c_va = app.add_subcommand("verify-vaughan", "check the generalized Vaughan identity coefficientwise");
  c_va->add_option("--r", va.r, "number of binomial terms");
  c_va->add_option("--X", va.x, "Moebius truncation");
  c_va->add_option("--N", va.n, "largest n checked (at most X^r)");

  RearrangeArgs ra;
  auto* c_ra = app.add_subcommand("verify-rearrangement", "M_nu directly and via Dirichlet characters");
  c_ra->add_option("--nu", ra.nu, "1 or 2")->check(CLI::IsMember({1, 2}));
  c_ra->add_option("--y", ra.y, "mollifier length");
  c_ra->add_option("--T", ra.t, "height");
  c_ra->add_option("--poly", ra.poly, "coefficients of P")->delimiter(',');

  SplitArgs sa;
  auto* c_sa = app.add_subcommand("verify-split", "a2 decomposition and divisor splitting");
  c_sa->add_option("--y", sa.y, "mollifier length");
  c_sa->add_option("--T", sa.t, "height");
  c_sa->add_option("--X", sa.x, "Moebius truncation (n-max <= X^3)");
  c_sa->add_option("--n-max", sa.n_max, "reconstruction range");
  c_sa->add_option("--d-max", sa.d_max, "largest divisor d");
  c_sa->add_option("--m-limit", sa.m_limit, "range of m");
  c_sa->add_option("--terms", sa.terms, "number of random terms");
  c_sa->add_option("--poly", sa.poly, "coefficients of P")->delimiter(',');

  MomentsArgs ma;
  auto* c_mo = app.add_subcommand("moments", "empirical S1, S2 and the simple-zero bound");
  c_mo->add_option("--T", ma.t, "height");
  c_mo->add_option("--theta", ma.theta, "mollifier exponent, y = T^theta");
  c_mo->add_option("--y", ma.y, "explicit mollifier length (overrides theta)");
  c_mo->add_option("--poly", ma.poly, "coefficients of P")->delimiter(',');
  c_mo->add_option("--zeros", ma.zeros, "zero table path, or 'compute'");

  auto* c_ze = app.add_subcommand("zeros", "locate or ingest zeta zeros");
  c_ze->require_subcommand(1);
  ZerosFindArgs zf;
  auto* c_zf = c_ze->add_subcommand("find", "locate zeros up to T");
  c_zf->add_option("--T", zf.t, "height");
  ZerosIngestArgs zi;
  auto* c_zi = c_ze->add_subcommand("ingest", "validate a zero table");
  c_zi->add_option("--file", zi.file, "zero table path")->required();

  SieveArgs sv;
  auto* c_sv = app.add_subcommand("monitor-sieve", "random trials of the hybrid large sieve");
  c_sv->add_option("--trials", sv.trials, "number of trials");
  c_sv->add_option("--q-max", sv.q_max, "largest Q");
  c_sv->add_option("--h-max", sv.h_max, "largest H");
  c_sv->add_option("--v-max", sv.v_max, "largest V");
  c_sv->add_option("--ratio-limit", sv.ratio_limit, "pass threshold for the observed ratio");

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = merge_config(app, std::move(args));
    std::vector<char*> cargs;
    for (auto& a : args) cargs.push_back(a.data());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help();
    return 2;
  } catch (const Exit& e) {
    std::cerr << "mollab-cli: " << e.message << "\n";
    return e.code;
  }

  try {
    Context ctx;
    if (opt.threads) ctx.check(mollab_set_threads(ctx.get(), opt.threads));
    if (*c_kappa) return run_report_kappa(ctx, opt, kappa);
    if (*c_opt) return run_optimize(ctx, opt, optim);
    if (*c_va) return run_verify_vaughan(ctx, opt, va);
    if (*c_ra) return run_verify_rearrangement(ctx, opt, ra);
    if (*c_sa) return run_verify_split(ctx, opt, sa);
    if (*c_mo) return run_moments(ctx, opt, ma);
    if (*c_zf) return run_zeros_find(ctx, opt, zf);
    if (*c_zi) return run_zeros_ingest(ctx, opt, zi);
    if (*c_sv) return run_monitor_sieve(ctx, opt, sv);
  } catch (const Exit& e) {
    std::cerr << "mollab-cli: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "mollab-cli: " << e.what() << "\n";
    return 1;
  }
  std::cerr << app.help();
  return 2;
}
