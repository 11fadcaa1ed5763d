// Copyright 2026 The hwr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// hwr: command-line front end. Every run writes <out>/<subcommand>.csv and
// <out>/<subcommand>.json. Exit 0 when clean, 1 on any bound violation or
// invariant failure, 2 on invalid configuration.

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hwr/catmap/density.hpp"
#include "hwr/catmap/que.hpp"
#include "hwr/heiwei/invariants.hpp"
#include "hwr/spectra/norm_one.hpp"
#include "hwr/spectra/decompose.hpp"
#include "hwr/sums/csum.hpp"

namespace {

using hwr::DomainError;
using json = nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::vector<std::uint32_t> p;
  std::vector<unsigned> m{1};
  std::vector<std::size_t> N{1};
  std::string torus = "all";
  std::string a_path;
  std::uint32_t max_prime = 0;
  std::uint64_t xi_max = 0;
  std::uint64_t seed = 1;
  std::size_t jobs = hwr::default_jobs();
  std::string out = "hwr_out";
  bool quick = false;

  json a_config;  // contents of --A, when given

  json to_json() const {
    json j{{"subcommand", subcommand}, {"p", p},           {"m", m},       {"N", N},
           {"torus", torus},           {"A", a_path},      {"max_prime", max_prime},
           {"xi_max", xi_max},         {"seed", seed},     {"out", out}};
    if (subcommand == "selftest") j["quick"] = quick;
    return j;
  }
};

/// Result of one subcommand: CSV body, JSON summary, and failures.
struct Outcome {
  std::string csv_header;
  std::vector<std::string> rows;
  json summary;
  std::uint64_t failures = 0;
  std::string witness;

  void fail(const std::string& w) {
    if (failures++ == 0) witness = w;
  }
};

std::string timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

// ---- validation -------------------------------------------------------------

std::vector<hwr::TorusKind> torus_kinds(const std::string& desc, std::size_t n, std::uint64_t q) {
  std::vector<hwr::TorusKind> out;
  if (desc == "all") {
    for (auto& k : hwr::TorusKind::all(n))
      if (k.is_maximal(q)) out.push_back(k);
    return out;
  }
  std::stringstream ss(desc);
  for (std::string part; std::getline(ss, part, ';');) out.push_back(hwr::TorusKind::parse(part, n));
  return out;
}

void validate_field_params(const RunConfig& c, bool needs_rep) {
  if (c.p.empty()) throw ConfigError("--p: at least one prime required");
  for (auto p : c.p)
    if (p < 3 || !hwr::nt::is_prime(p)) throw ConfigError("--p: odd primes only, got " + std::to_string(p));
  for (auto m : c.m)
    if (m < 1 || m > 6) throw ConfigError("--m: extension degree must be in [1, 6]");
  for (auto n : c.N)
    if (n < 1 || n > 4) throw ConfigError("--N: rank must be in [1, 4]");
  for (auto p : c.p)
    for (auto m : c.m)
      for (auto n : c.N) {
        const std::uint64_t q = hwr::nt::ipow(p, m);
        if (needs_rep && q == 3 && n == 1) throw ConfigError("q = 3, N = 1 is excluded");
        if (needs_rep && hwr::nt::ipow(q, static_cast<unsigned>(n)) > 343)
          throw ConfigError("q^N = " + std::to_string(hwr::nt::ipow(q, static_cast<unsigned>(n))) +
                            " exceeds the dense-operator limit 343");
        try {
          torus_kinds(c.torus, n, q);
        } catch (const DomainError& e) {
          throw ConfigError(std::string("--torus: ") + e.what());
        }
      }
}

hwr::LatticeAutomorphism load_matrix(RunConfig& c) {
  if (c.a_path.empty()) throw ConfigError("--A: path to a JSON matrix is required for " + c.subcommand);
  std::ifstream in(c.a_path);
  if (!in) throw ConfigError("--A: cannot open " + c.a_path);
  try {
    c.a_config = json::parse(in);
    return hwr::LatticeAutomorphism::from_json(c.a_config);
  } catch (const std::exception& e) {
    throw ConfigError("--A: " + std::string(e.what()));
  }
}

// Fields of the config file fill in flags that were not given.
void apply_file_defaults(RunConfig& c, const CLI::App& sub) {
  const json& j = c.a_config;
  if (!j.is_object()) return;
  if (sub.count("--max-prime") == 0 && j.contains("primes") && j["primes"].contains("max"))
    c.max_prime = j["primes"]["max"].get<std::uint32_t>();
  if (sub.count("--xi-max") == 0 && j.contains("xi_window") && j["xi_window"].contains("max_coeff"))
    c.xi_max = j["xi_window"]["max_coeff"].get<std::uint64_t>();
  if (sub.count("--seed") == 0 && j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
}

std::vector<std::uint32_t> sweep_primes(const RunConfig& c, std::uint32_t default_max) {
  if (!c.p.empty()) {
    for (auto p : c.p)
      if (p < 3 || !hwr::nt::is_prime(p)) throw ConfigError("--p: odd primes only, got " + std::to_string(p));
    return c.p;
  }
  const std::uint32_t x = c.max_prime ? c.max_prime : default_max;
  if (x < 3) throw ConfigError("--max-prime must be at least 3");
  return hwr::nt::primes_up_to(x, 3);
}

// ---- subcommands ------------------------------------------------------------

template <class Fn>
void for_each_torus(const RunConfig& c, Fn&& fn) {
  for (auto p : c.p)
    for (auto m : c.m)
      for (auto n : c.N) {
        hwr::SympSpace s(hwr::Field::extension(p, m), n);
        for (auto& kind : torus_kinds(c.torus, n, s.field().q())) fn(s, kind);
      }
}

Outcome verify_bounds(const RunConfig& c) {
  Outcome o;
  o.csv_header = hwr::SumReport::csv_header();
  o.summary = json::array();
  for_each_torus(c, [&](const hwr::SympSpace& s, const hwr::TorusKind& kind) {
    hwr::Torus t = hwr::build_maximal_torus(s, kind);
    auto ms = hwr::module_structure(t);
    hwr::BoundOptions opt;
    opt.seed = c.seed;
    opt.jobs = c.jobs;
    auto r = hwr::bound_report(t, &ms, opt);
    auto rows = r.csv_rows();
    o.rows.insert(o.rows.end(), rows.begin(), rows.end());
    o.summary.push_back(r.to_json());
    if (!r.within_bound()) o.fail(r.to_json()["witness"].dump());
  });
  return o;
}

Outcome multiplicities(const RunConfig& c) {
  Outcome o;
  o.csv_header = hwr::multiplicity_csv_header() + ",predicted";
  o.summary = json::array();
  for (auto p : c.p)
    for (auto m : c.m)
      for (auto n : c.N) {
        hwr::SympSpace s(hwr::Field::extension(p, m), n);
        hwr::WeilRep rep(s, c.seed);
        for (auto& kind : torus_kinds(c.torus, n, s.field().q())) {
          hwr::Torus t = hwr::build_maximal_torus(s, kind);
          auto d = hwr::decompose(rep, t);
          auto rows = hwr::multiplicity_csv_rows(t, d);
          std::uint64_t mismatches = 0;
          for (std::size_t i = 0; i < rows.size(); ++i) {
            auto pred = hwr::predicted_multiplicity(t, d.characters[i]);
            rows[i] += "," + (pred ? std::to_string(*pred) : std::string());
            if (pred && *pred != d.multiplicities[i]) {
              ++mismatches;
              o.fail(rows[i]);
            }
          }
          o.rows.insert(o.rows.end(), rows.begin(), rows.end());
          o.summary.push_back({{"q", s.field().q()},
                               {"N", n},
                               {"torus", kind.to_string()},
                               {"dimension", d.total_dimension()},
                               {"mismatches", mismatches}});
        }
      }
  return o;
}

Outcome self_reducibility(const RunConfig& c) {
  Outcome o;
  o.csv_header = "p,m,N,torus,trace_checks,sign_failures,phase_failures,samples,max_operator_distance,tol,ok";
  o.summary = json::array();
  for (auto p : c.p)
    for (auto m : c.m)
      for (auto n : c.N) {
        hwr::SympSpace s(hwr::Field::extension(p, m), n);
        hwr::WeilRep rep(s, c.seed);
        for (auto& kind : torus_kinds(c.torus, n, s.field().q())) {
          hwr::Torus t = hwr::build_maximal_torus(s, kind);
          auto ms = hwr::module_structure(t);
          hwr::SelfReducibilityOptions opt;
          opt.seed = c.seed;
          auto r = hwr::restrict_to_extension(rep, ms, t, opt);
          std::ostringstream row;
          row.precision(6);
          row << p << ',' << m << ',' << n << ',' << kind.to_string() << ',' << r.trace_checks << ','
              << r.sign_failures << ',' << r.phase_failures << ',' << r.samples << ',' << r.max_operator_distance
              << ',' << r.tol << ',' << (r.ok() ? 1 : 0);
          o.rows.push_back(row.str());
          json j = r.to_json();
          j["q"] = s.field().q();
          j["N"] = n;
          j["torus"] = kind.to_string();
          o.summary.push_back(j);
          if (!r.ok()) o.fail(row.str());
        }
      }
  return o;
}

Outcome que(RunConfig& c, const CLI::App& sub) {
  auto a = load_matrix(c);
  apply_file_defaults(c, sub);
  auto primes = sweep_primes(c, 97);
  if (a.N() > 1)
    for (auto p : primes)
      if (hwr::nt::ipow(p, static_cast<unsigned>(a.N())) > 343)
        throw ConfigError("p^N exceeds the dense-operator limit 343 at p = " + std::to_string(p));
  auto r = hwr::hecke_que_sweep(a, primes, {c.xi_max}, c.jobs);
  Outcome o;
  o.csv_header = hwr::QueReport::csv_header();
  o.rows = r.csv_rows();
  o.summary = r.to_json();
  for (auto& row : r.rows) {
    if (row.violations) o.fail("p=" + std::to_string(row.p) + "," + row.witness);
    if (row.observable_violations) o.fail("p=" + std::to_string(row.p) + ",observable");
    if (!row.skipped() && !row.rank_paths_agree) o.fail("p=" + std::to_string(row.p) + ",rank paths disagree");
  }
  return o;
}

Outcome statistical(RunConfig& c, const CLI::App& sub) {
  auto a = load_matrix(c);
  apply_file_defaults(c, sub);
  auto primes = sweep_primes(c, 97);
  if (a.N() > 1)
    for (auto p : primes)
      if (hwr::nt::ipow(p, static_cast<unsigned>(a.N())) > 343)
        throw ConfigError("p^N exceeds the dense-operator limit 343 at p = " + std::to_string(p));
  auto r = hwr::statistical_state_sweep(a, primes, {c.xi_max}, c.jobs);
  Outcome o;
  o.csv_header = hwr::StatReport::csv_header();
  o.rows = r.csv_rows();
  o.summary = r.to_json();
  for (auto& row : r.rows) {
    if (row.violations) o.fail("p=" + std::to_string(row.p) + "," + row.witness);
    if (row.max_trace_defect > 1e-10) o.fail("p=" + std::to_string(row.p) + ",trace defect");
  }
  return o;
}

Outcome rank_density(RunConfig& c, const CLI::App& sub) {
  auto a = load_matrix(c);
  apply_file_defaults(c, sub);
  const std::uint32_t x = c.max_prime ? c.max_prime : 100000;
  if (x < 3) throw ConfigError("--max-prime must be at least 3");
  auto r = hwr::rank_density_sweep(a, x, c.jobs);
  Outcome o;
  o.csv_header = hwr::DensityReport::csv_header();
  o.rows = r.csv_rows();
  o.summary = r.to_json();
  o.summary["genericity"] = [&] {
    auto g = hwr::check_genericity(a);
    return json{{"regular", g.regular}, {"strongly_generic", g.strongly_generic}, {"generic", g.generic}};
  }();
  double total = 0;
  for (unsigned k = 1; k <= r.N; ++k) total += r.delta(k);
  if (r.used() > 0 && std::abs(total - 1.0) > 1e-12) o.fail("frequencies do not sum to 1");
  return o;
}

// Invariant suite. --quick: q in {5, 7}, N = 1.
Outcome selftest(const RunConfig& c) {
  Outcome o;
  o.csv_header = "check,params,value,tol,ok";
  o.summary = json::object();
  auto record = [&](const std::string& check, const std::string& params, double value, double tol) {
    std::ostringstream row;
    row.precision(6);
    const bool ok = value <= tol;
    row << check << ',' << params << ',' << value << ',' << tol << ',' << (ok ? 1 : 0);
    o.rows.push_back(row.str());
    if (!ok) o.fail(row.str());
  };
  struct Level {
    std::uint32_t p;
    unsigned m;
    std::size_t n;
  };
  std::vector<Level> levels{{5, 1, 1}, {7, 1, 1}};
  if (!c.quick) levels.insert(levels.end(), {{11, 1, 1}, {3, 2, 1}, {3, 1, 2}, {5, 1, 2}});
  for (auto lv : levels) {
    hwr::SympSpace s(hwr::Field::extension(lv.p, lv.m), lv.n);
    const std::string params = "q=" + std::to_string(s.field().q()) + ";N=" + std::to_string(lv.n);
    auto inv = hwr::weil_invariants(s, c.quick ? 30 : 100, c.seed);
    record("weil_invariants", params, inv.worst(), inv.tol);
    hwr::WeilRep rep(s, c.seed);
    for (auto& kind : torus_kinds("all", lv.n, s.field().q())) {
      hwr::Torus t = hwr::build_maximal_torus(s, kind);
      const std::string tp = params + ";torus=" + kind.to_string();
      auto d = hwr::decompose(rep, t);
      double mism = 0;
      for (std::size_t i = 0; i < d.characters.size(); ++i) {
        auto pred = hwr::predicted_multiplicity(t, d.characters[i]);
        if (pred && *pred != d.multiplicities[i]) ++mism;
      }
      record("multiplicity_law", tp, mism, 0);
      auto ms = hwr::module_structure(t);
      hwr::BoundOptions bo;
      bo.seed = c.seed;
      bo.jobs = c.jobs;
      bo.keep_rows = false;
      auto br = hwr::bound_report(t, &ms, bo);
      record("sum_bound_ratio", tp, br.max_ratio, 1.0 + 1e-9);
      // A degree-one block over F_3 would need the excluded SL(2, F_3) model.
      const bool f3_block = s.field().q() == 3 && std::any_of(kind.blocks.begin(), kind.blocks.end(),
                                                               [](const hwr::BlockKind& b) { return b.degree == 1; });
      if (!f3_block) {
        hwr::SelfReducibilityOptions so;
        so.seed = c.seed;
        so.samples = c.quick ? 10 : 50;
        auto sr = hwr::restrict_to_extension(rep, ms, t, so);
        record("self_reducibility_trace", tp, static_cast<double>(sr.sign_failures + sr.phase_failures), 0);
        record("self_reducibility_operator", tp, sr.max_operator_distance, sr.tol);
      }
      record("rank_paths", tp, static_cast<double>(hwr::symplectic_rank(t).r != ms.rank()), 0);
    }
  }
  double cr = 0;
  for (auto [p, m] : hwr::odd_prime_powers(c.quick ? 49 : 199)) cr += hwr::check_norm_one_sign(p, m).ok() ? 0 : 1;
  record("norm_one_sign", c.quick ? "q<=49" : "q<=199", cr, 0);

  hwr::LatticeAutomorphism cat({{2, 1}, {1, 1}});
  std::vector<std::uint32_t> primes = c.quick ? std::vector<std::uint32_t>{7, 11, 13} : hwr::nt::primes_up_to(61, 3);
  auto qr = hwr::hecke_que_sweep(cat, primes, {}, c.jobs);
  record("que_violations", "cat", static_cast<double>(qr.violations()), 0);
  record("que_rank_paths", "cat", qr.rank_paths_agree() ? 0 : 1, 0);
  auto st = hwr::statistical_state_sweep(cat, primes, {}, c.jobs);
  record("statistical_violations", "cat", static_cast<double>(st.violations()), 0);
  record("statistical_trace", "cat", st.max_trace_defect(), 1e-10);
  auto dens = hwr::rank_density_sweep(hwr::density_test_element(), c.quick ? 10000 : 100000, c.jobs);
  record("density_sum", "sp4", std::abs(dens.delta(1) + dens.delta(2) - 1.0), 1e-12);
  o.summary = {{"checks", o.rows.size()}, {"failures", o.failures}};
  return o;
}

// ---- output -----------------------------------------------------------------

void write_outputs(const RunConfig& c, const Outcome& o, const std::string& stamp) {
  namespace fs = std::filesystem;
  fs::create_directories(c.out);
  const fs::path base = fs::path(c.out) / c.subcommand;
  std::ofstream csv(base.string() + ".csv");
  csv << "# config: " << c.to_json().dump() << "\n# timestamp: " << stamp << "\n" << o.csv_header << "\n";
  for (auto& r : o.rows) csv << r << "\n";
  json j{{"config", c.to_json()},     {"timestamp", stamp},       {"summary", o.summary},
         {"failures", o.failures},    {"exit_status", o.failures ? 1 : 0}};
  if (!o.witness.empty()) j["witness"] = o.witness;
  std::ofstream(base.string() + ".json") << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weil representation, exponential sum and quantum cat map experiments"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "primes (comma separated)")->delimiter(',');
    sub->add_option("--m", cfg.m, "extension degrees")->delimiter(',');
    sub->add_option("--N", cfg.N, "symplectic ranks")->delimiter(',');
    sub->add_option("--torus", cfg.torus, "torus types: all, or ';'-separated descriptors like split,inert");
    sub->add_option("--A", cfg.a_path, "JSON file with the integer matrix A (or a full config)");
    sub->add_option("--max-prime", cfg.max_prime, "prime bound for sweeps");
    sub->add_option("--xi-max", cfg.xi_max, "exponent entries in [0, xi-max); 0 means all residues");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "output directory");
  };
  std::vector<std::pair<std::string, std::string>> subs{
      {"verify-bounds", "exponential sum bounds over torus types"},
      {"multiplicities", "eigenspace dimensions of tori in the Weil representation"},
      {"self-reducibility", "restriction to the module structure"},
      {"que", "Hecke eigenstate bounds for a cat map"},
      {"statistical", "density operators on rho(A) eigenspaces"},
      {"rank-density", "frequencies of the symplectic rank mod p"},
      {"selftest", "invariant suite"}};
  for (auto& [name, help] : subs) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    if (name == "selftest") sub->add_flag("--quick", cfg.quick, "q in {5, 7}, N = 1");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  const bool field_cmd =
      cfg.subcommand == "verify-bounds" || cfg.subcommand == "multiplicities" || cfg.subcommand == "self-reducibility";
  if (field_cmd && sub->count("--p") == 0) cfg.p = {5, 7};
  if (cfg.subcommand == "self-reducibility" && sub->count("--torus") == 0) cfg.torus = "irr";

  const std::string stamp = timestamp();
  Outcome o;
  try {
    if (field_cmd) validate_field_params(cfg, cfg.subcommand != "verify-bounds");
    if (cfg.subcommand == "verify-bounds") o = verify_bounds(cfg);
    else if (cfg.subcommand == "multiplicities") o = multiplicities(cfg);
    else if (cfg.subcommand == "self-reducibility") o = self_reducibility(cfg);
    else if (cfg.subcommand == "que") o = que(cfg, *sub);
    else if (cfg.subcommand == "statistical") o = statistical(cfg, *sub);
    else if (cfg.subcommand == "rank-density") o = rank_density(cfg, *sub);
    else o = selftest(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "hwr: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "hwr: invalid configuration: " << e.what() << "\n";
    return 2;
  }

  write_outputs(cfg, o, stamp);
  std::cout << json{{"subcommand", cfg.subcommand}, {"rows", o.rows.size()}, {"failures", o.failures},
                    {"out", cfg.out}}
                   .dump()
            << "\n";
  if (o.failures) {
    std::cerr << "hwr: " << o.failures << " failure(s); first witness: " << o.witness << "\n";
    return 1;
  }
  return 0;
}
