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

/**
 * @file que.hpp
 * @brief Hecke eigenstates of a quantized cat map at level p.
 *
 * The torus quantization at Planck constant 1/p is realized through the
 * Weil representation of Sp(2N, F_p): an integer exponent xi acts by
 * pi(xi mod p), and A acts by rho(A mod p). The Hecke torus is the
 * centralizer of A mod p. For an eigenstate phi in H_chi the finite-level
 * bound checked is
 *
 *   |<phi, pi(xi) phi>| <= m_chi * prod_{alpha in S_xi} 2 sqrt(p^{N_alpha}) / |T_alpha|
 *
 * where S_xi is the set of blocks of T_A mod p on which xi has a nonzero
 * component. A xi whose block component does not generate its block under
 * the torus is excluded, as is xi = 0.
 */

#ifndef HWR_CATMAP_QUE_HPP
#define HWR_CATMAP_QUE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hwr/catmap/lattice.hpp"
#include "hwr/spectra/decompose.hpp"
#include "hwr/sums/csum.hpp"
#include "hwr/util/parallel.hpp"

namespace hwr {

/// Exponent window: integer entries in [0, max_coeff), capped at p; 0 means all residues.
struct XiWindow {
  std::uint64_t max_coeff = 0;
  std::uint64_t extent(std::uint32_t p) const { return max_coeff == 0 ? p : std::min<std::uint64_t>(max_coeff, p); }
};

/// Why a prime is not run, or nullopt.
inline std::optional<std::string> que_skip_reason(const LatticeAutomorphism& a, std::uint32_t p) {
  if (p < 3 || !nt::is_prime(p)) throw DomainError("odd prime required, got " + std::to_string(p));
  if (a.disc() % p == 0) return "p divides disc(charpoly)";
  if (a.N() == 1 && p == 3) return "SL(2,F_3) excluded";
  return std::nullopt;
}

/// A lattice exponent reduced mod p, with its block support.
struct Exponent {
  std::vector<std::int64_t> xi;
  FqVector residue;
  std::uint64_t table_index = 0;
  std::vector<std::size_t> support;  // blocks of T_A mod p
  bool zero = false;
  bool admissible = false;  // each supported component generates its block
  double block_bound = 0;   // prod over support of 2 sqrt(p^{N_alpha}) / |T_alpha|
};

/// Fixed trigonometric polynomials f = a0 + sum a_xi e(xi . x).
struct Observable {
  std::string name;
  cplx a0;
  std::vector<std::pair<std::vector<std::int64_t>, cplx>> terms;
};

inline std::vector<Observable> test_observables(std::size_t n) {
  auto vec = [n](std::initializer_list<std::int64_t> head) {
    std::vector<std::int64_t> v(2 * n, 0);
    std::copy(head.begin(), head.end(), v.begin());
    return v;
  };
  std::vector<std::int64_t> ones(2 * n, 1), minus(2 * n, -1);
  return {
      {"cos_x1", 0.0, {{vec({1}), 0.5}, {vec({-1}), 0.5}}},
      {"one_plus_cos_diag", 1.0, {{ones, 0.5}, {minus, 0.5}}},
      {"mixed", 0.5, {{vec({2, -1}), 1.0 / 3.0}, {vec({-1, 3}), cplx(0, 0.25)}}},
  };
}

namespace detail {

/// Everything built once per prime: rep, Hecke torus, blocks, eigenstates.
struct HeckeLevel {
  std::uint32_t p;
  Field k;
  SympSpace space;
  std::unique_ptr<WeilRep> rep;
  FqMatrix a;
  Torus t;
  SympModuleStructure ms;
  EigenDecomposition d;
  unsigned cheap_rank = 0;
  std::vector<double> block_factor;  // 2 sqrt(p^{N_alpha}) / |T_alpha|

  HeckeLevel(const LatticeAutomorphism& lat, std::uint32_t prime)
      : p(prime),
        k(Field::prime(prime)),
        space(k, lat.N()),
        rep(std::make_unique<WeilRep>(space)),
        a(lat.mod_p(k)),
        t(centralizer_torus(space, a)),
        ms(module_structure(t)),
        d(decompose(*rep, t)) {
    auto kind = rank_from_charpoly(k, lat.charpoly().mod_p(k));
    cheap_rank = kind ? static_cast<unsigned>(kind->blocks.size()) : 0;
    for (auto& b : ms.blocks())
      block_factor.push_back(2.0 * std::sqrt(std::pow(static_cast<double>(p), b.kind.degree)) /
                             static_cast<double>(b.kind.order(p)));
  }

  Exponent exponent(const std::vector<std::int64_t>& xi) const {
    Exponent e;
    e.xi = xi;
    e.residue = vec_from_ints(k, xi);
    e.table_index = rep->table_index(e.residue);
    e.zero = std::all_of(e.residue.begin(), e.residue.end(), [](FieldElem x) { return x.code == 0; });
    if (e.zero) return e;
    e.admissible = true;
    e.block_bound = 1.0;
    for (std::size_t i = 0; i < ms.blocks().size(); ++i) {
      const auto& b = ms.blocks()[i];
      FqVector part = b.idempotent * e.residue;
      if (std::all_of(part.begin(), part.end(), [](FieldElem x) { return x.code == 0; })) continue;
      e.support.push_back(i);
      e.block_bound *= block_factor[i];
      if (orbit_span_rank(t, part) != 2 * b.kind.degree) e.admissible = false;
    }
    return e;
  }

  std::vector<Exponent> window(const XiWindow& w) const {
    const std::uint64_t ext = w.extent(p), n = 2 * space.N();
    const std::uint64_t total = nt::ipow(ext, static_cast<unsigned>(n));
    std::vector<Exponent> out;
    out.reserve(total);
    std::vector<std::int64_t> xi(n, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t r = idx;
      for (auto& c : xi) {
        c = static_cast<std::int64_t>(r % ext);
        r /= ext;
      }
      out.push_back(exponent(xi));
    }
    return out;
  }

  /// Phase index of chi(A); characters with equal index share a rho(A)-eigenvalue.
  std::uint64_t a_phase(std::size_t c) const {
    auto idx = t.find(a);
    if (!idx) throw std::logic_error("A is not in its own centralizer torus");
    return d.characters[c].phase_index(t.exponents(*idx));
  }

  std::string torus_label() const { return ms.kind().to_string(); }
};

inline std::string xi_string(const std::vector<std::int64_t>& xi) {
  std::string s;
  for (std::size_t i = 0; i < xi.size(); ++i) s += (i ? ";" : "") + std::to_string(xi[i]);
  return s;
}

inline std::string fmt(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

}  // namespace detail

struct QuePrimeRow {
  std::uint32_t p = 0;
  std::string skipped_reason;
  std::string torus;
  unsigned r_p = 0;
  bool rank_paths_agree = true;
  std::uint64_t torus_order = 0;
  std::uint64_t n_eigenstates = 0;
  std::uint64_t xi_checked = 0, xi_excluded = 0;
  std::uint64_t checks = 0, violations = 0, plain_violations = 0;
  std::uint64_t excluded_over_bound = 0;  // excluded (state, xi) pairs above the block bound
  double max_ratio = 0;        // against m_chi * block bound
  double max_ratio_plain = 0;  // block bound alone
  double max_asymptotic = 0;   // |W| sqrt(p^N) / (2^{r_p} m_chi)
  double max_abs = 0;
  double max_eigen_defect = 0;  // ||rho(A) phi - chi(A) phi||
  std::uint64_t observable_checks = 0, observable_skipped = 0, observable_violations = 0;
  double max_observable_ratio = 0;
  std::string witness, plain_witness;

  bool skipped() const { return !skipped_reason.empty(); }

  nlohmann::json to_json() const {
    nlohmann::json j{{"p", p}};
    if (skipped()) {
      j["skipped_reason"] = skipped_reason;
      return j;
    }
    j.update({{"torus", torus},
              {"r_p", r_p},
              {"rank_paths_agree", rank_paths_agree},
              {"torus_order", torus_order},
              {"n_eigenstates", n_eigenstates},
              {"xi_checked", xi_checked},
              {"xi_excluded", xi_excluded},
              {"checks", checks},
              {"violations", violations},
              {"plain_violations", plain_violations},
              {"excluded_over_bound", excluded_over_bound},
              {"max_ratio", max_ratio},
              {"max_ratio_plain", max_ratio_plain},
              {"max_asymptotic_ratio", max_asymptotic},
              {"max_abs", max_abs},
              {"max_eigen_defect", max_eigen_defect},
              {"observable_checks", observable_checks},
              {"observable_skipped", observable_skipped},
              {"observable_violations", observable_violations},
              {"max_observable_ratio", max_observable_ratio}});
    if (!witness.empty()) j["witness"] = witness;
    if (!plain_witness.empty()) j["plain_witness"] = plain_witness;
    return j;
  }
};

/**
 * One prime of the Hecke QUE sweep. Every eigenstate from the spectral
 * decomposition is tested against every exponent in the window, and the
 * three test observables are checked on each state.
 */
inline QuePrimeRow hecke_que_experiment(const LatticeAutomorphism& lat, std::uint32_t p, const XiWindow& w = {}) {
  QuePrimeRow row;
  row.p = p;
  if (auto why = que_skip_reason(lat, p)) {
    row.skipped_reason = *why;
    return row;
  }
  detail::HeckeLevel lv(lat, p);
  const WeilRep& rep = *lv.rep;
  row.torus = lv.torus_label();
  row.r_p = static_cast<unsigned>(lv.ms.rank());
  row.rank_paths_agree = lv.cheap_rank == row.r_p;
  row.torus_order = lv.t.size();
  const double tol = rep.tol();
  const double sqrt_pn = std::sqrt(std::pow(static_cast<double>(p), static_cast<double>(lat.N())));

  auto xis = lv.window(w);
  for (auto& e : xis) {
    if (e.zero) continue;
    if (e.admissible)
      ++row.xi_checked;
    else
      ++row.xi_excluded;
  }
  struct ObsTerms {
    bool usable = true;
    std::vector<std::pair<Exponent, cplx>> terms;
  };
  std::vector<ObsTerms> obs;
  const auto observables = test_observables(lat.N());
  for (auto& o : observables) {
    ObsTerms ot;
    for (auto& [xi, coef] : o.terms) {
      Exponent e = lv.exponent(xi);
      if (e.zero || !e.admissible) ot.usable = false;
      ot.terms.emplace_back(std::move(e), coef);
    }
    obs.push_back(std::move(ot));
  }

  Operator ra = rep.weil_op(lv.a);
  auto a_idx = lv.t.find(lv.a);
  for (std::size_t c = 0; c < lv.d.characters.size(); ++c) {
    const std::uint64_t m = lv.d.multiplicities[c];
    if (!m) continue;
    const cplx lambda = lv.d.characters[c].value(lv.t.exponents(*a_idx));
    const auto& basis = lv.d.eigenbases[c];
    for (Eigen::Index s = 0; s < basis.cols(); ++s) {
      ++row.n_eigenstates;
      Eigen::VectorXcd phi = basis.col(s);
      row.max_eigen_defect = std::max(row.max_eigen_defect, (ra.matrix() * phi - lambda * phi).norm());
      auto table = rep.wigner_table(phi);
      for (auto& e : xis) {
        if (e.zero) continue;
        const double v = std::abs(table[e.table_index]);
        if (!e.admissible) {
          if (v > e.block_bound + tol) ++row.excluded_over_bound;
          continue;
        }
        const double bound = static_cast<double>(m) * e.block_bound;
        ++row.checks;
        row.max_abs = std::max(row.max_abs, v);
        row.max_ratio = std::max(row.max_ratio, v / bound);
        row.max_ratio_plain = std::max(row.max_ratio_plain, v / e.block_bound);
        row.max_asymptotic =
            std::max(row.max_asymptotic, v * sqrt_pn / (std::pow(2.0, row.r_p) * static_cast<double>(m)));
        auto describe = [&](double b) {
          return "chi=" + lv.d.characters[c].to_string() + ",state=" + std::to_string(s) + ",xi=" +
                 detail::xi_string(e.xi) + ",abs=" + detail::fmt(v) + ",bound=" + detail::fmt(b);
        };
        if (v > bound + tol && row.violations++ == 0) row.witness = describe(bound);
        if (v > e.block_bound + tol && row.plain_violations++ == 0) row.plain_witness = describe(e.block_bound);
      }
      for (auto& ot : obs) {
        if (!ot.usable) {
          ++row.observable_skipped;
          continue;
        }
        ++row.observable_checks;
        cplx dev = 0;
        double bound = 0;
        for (auto& [e, coef] : ot.terms) {
          dev += coef * table[e.table_index];
          bound += std::abs(coef) * static_cast<double>(m) * e.block_bound;
        }
        const double r = std::abs(dev) / bound;
        row.max_observable_ratio = std::max(row.max_observable_ratio, r);
        if (std::abs(dev) > bound + tol) ++row.observable_violations;
      }
    }
  }
  return row;
}

struct StatPrimeRow {
  std::uint32_t p = 0;
  std::string skipped_reason;
  std::string torus;
  unsigned r_p = 0;
  std::uint64_t torus_order = 0;
  std::uint64_t n_eigenspaces = 0;
  std::uint64_t max_multiplicity = 0;  // m = max_chi dim H_chi
  std::uint64_t xi_checked = 0, xi_excluded = 0;
  std::uint64_t checks = 0, violations = 0;
  double max_ratio = 0;
  double max_abs = 0;
  double max_trace_defect = 0;  // |Tr D_lambda - 1|
  double max_commutator = 0;    // ||[D_lambda, rho(A)]||_max
  std::string witness;

  bool skipped() const { return !skipped_reason.empty(); }

  nlohmann::json to_json() const {
    nlohmann::json j{{"p", p}};
    if (skipped()) {
      j["skipped_reason"] = skipped_reason;
      return j;
    }
    j.update({{"torus", torus},
              {"r_p", r_p},
              {"torus_order", torus_order},
              {"n_eigenspaces", n_eigenspaces},
              {"max_multiplicity", max_multiplicity},
              {"xi_checked", xi_checked},
              {"xi_excluded", xi_excluded},
              {"checks", checks},
              {"violations", violations},
              {"max_ratio", max_ratio},
              {"max_abs", max_abs},
              {"max_trace_defect", max_trace_defect},
              {"max_commutator", max_commutator}});
    if (!witness.empty()) j["witness"] = witness;
    return j;
  }
};

/**
 * Density operators D_lambda = P_lambda / dim H_lambda on the eigenspaces
 * of rho(A), tested against m * prod_{alpha in S_xi} 2 sqrt(p^{N_alpha}) / |T_alpha|.
 */
inline StatPrimeRow statistical_state_experiment(const LatticeAutomorphism& lat, std::uint32_t p,
                                                 const XiWindow& w = {}) {
  StatPrimeRow row;
  row.p = p;
  if (auto why = que_skip_reason(lat, p)) {
    row.skipped_reason = *why;
    return row;
  }
  detail::HeckeLevel lv(lat, p);
  const WeilRep& rep = *lv.rep;
  row.torus = lv.torus_label();
  row.r_p = static_cast<unsigned>(lv.ms.rank());
  row.torus_order = lv.t.size();
  const auto dim = static_cast<Eigen::Index>(rep.dim());

  std::map<std::uint64_t, std::vector<std::size_t>> groups;
  for (std::size_t c = 0; c < lv.d.characters.size(); ++c) {
    if (!lv.d.multiplicities[c]) continue;
    row.max_multiplicity = std::max(row.max_multiplicity, lv.d.multiplicities[c]);
    groups[lv.a_phase(c)].push_back(c);
  }
  row.n_eigenspaces = groups.size();
  auto xis = lv.window(w);
  for (auto& e : xis) {
    if (e.zero) continue;
    if (e.admissible)
      ++row.xi_checked;
    else
      ++row.xi_excluded;
  }
  const Eigen::MatrixXcd ra = rep.weil_op(lv.a).matrix();
  const double m = static_cast<double>(row.max_multiplicity);
  for (auto& [phase, members] : groups) {
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(dim, dim);
    std::uint64_t mult = 0;
    for (auto c : members) {
      proj += lv.d.projectors[c].matrix();
      mult += lv.d.multiplicities[c];
    }
    Eigen::MatrixXcd dl = proj / static_cast<double>(mult);
    row.max_trace_defect = std::max(row.max_trace_defect, std::abs(dl.trace() - 1.0));
    row.max_commutator = std::max(row.max_commutator, Operator::max_abs(dl * ra - ra * dl));
    auto table = rep.pi_trace_table(dl);
    for (auto& e : xis) {
      if (e.zero || !e.admissible) continue;
      const double v = std::abs(table[e.table_index]);
      const double bound = m * e.block_bound;
      ++row.checks;
      row.max_abs = std::max(row.max_abs, v);
      row.max_ratio = std::max(row.max_ratio, v / bound);
      if (v > bound + rep.tol() && row.violations++ == 0)
        row.witness = "lambda_phase=" + std::to_string(phase) + ",xi=" + detail::xi_string(e.xi) +
                      ",abs=" + detail::fmt(v) + ",bound=" + detail::fmt(bound);
    }
  }
  return row;
}

/// Rows for a list of primes, one work item per prime; order follows `primes`.
template <class Row, class Fn>
std::vector<Row> sweep_primes(const std::vector<std::uint32_t>& primes, std::size_t jobs, Fn&& fn) {
  std::vector<Row> rows(primes.size());
  parallel_for(primes.size(), jobs, [&](std::size_t i) { rows[i] = fn(primes[i]); });
  return rows;
}

struct QueReport {
  nlohmann::json matrix;
  XiWindow window;
  std::vector<QuePrimeRow> rows;

  std::uint64_t violations() const {
    std::uint64_t v = 0;
    for (auto& r : rows) v += r.violations + r.observable_violations;
    return v;
  }
  std::uint64_t plain_violations() const {
    std::uint64_t v = 0;
    for (auto& r : rows) v += r.plain_violations;
    return v;
  }
  std::uint64_t excluded_over_bound() const {
    std::uint64_t v = 0;
    for (auto& r : rows) v += r.excluded_over_bound;
    return v;
  }
  std::uint64_t excluded() const {
    std::uint64_t v = 0;
    for (auto& r : rows) v += r.xi_excluded;
    return v;
  }
  bool rank_paths_agree() const {
    return std::all_of(rows.begin(), rows.end(), [](auto& r) { return r.skipped() || r.rank_paths_agree; });
  }

  static std::string csv_header() { return "p,r_p,torus_order,max_wigner_ratio,n_eigenstates,skipped_reason"; }
  std::vector<std::string> csv_rows() const {
    std::vector<std::string> out;
    for (auto& r : rows) {
      if (r.skipped())
        out.push_back(std::to_string(r.p) + ",,,,," + r.skipped_reason);
      else
        out.push_back(std::to_string(r.p) + "," + std::to_string(r.r_p) + "," + std::to_string(r.torus_order) + "," +
                      detail::fmt(r.max_ratio) + "," + std::to_string(r.n_eigenstates) + ",");
    }
    return out;
  }

  /// Per prime: ratio against the recorded bound, the bound without m_chi,
  /// and the scaled form |W| sqrt(p^N) / (2^r m_chi).
  nlohmann::json trend_table() const {
    nlohmann::json t = nlohmann::json::array();
    for (auto& r : rows)
      if (!r.skipped())
        t.push_back({{"p", r.p},
                     {"max_ratio", r.max_ratio},
                     {"max_ratio_plain", r.max_ratio_plain},
                     {"max_asymptotic_ratio", r.max_asymptotic}});
    return t;
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"A", matrix}, {"xi_max", window.max_coeff}};
    j["primes"] = nlohmann::json::array();
    for (auto& r : rows) j["primes"].push_back(r.to_json());
    j["violations"] = violations();
    j["plain_violations"] = plain_violations();
    j["xi_excluded"] = excluded();
    j["excluded_over_bound"] = excluded_over_bound();
    j["rank_paths_agree"] = rank_paths_agree();
    j["trend"] = trend_table();
    return j;
  }
};

inline QueReport hecke_que_sweep(const LatticeAutomorphism& lat, const std::vector<std::uint32_t>& primes,
                                 const XiWindow& w = {}, std::size_t jobs = 1) {
  QueReport rep{lat.to_json(), w, {}};
  rep.rows = sweep_primes<QuePrimeRow>(primes, jobs, [&](std::uint32_t p) { return hecke_que_experiment(lat, p, w); });
  return rep;
}

struct StatReport {
  nlohmann::json matrix;
  XiWindow window;
  std::vector<StatPrimeRow> rows;

  std::uint64_t violations() const {
    std::uint64_t v = 0;
    for (auto& r : rows) v += r.violations;
    return v;
  }
  double max_trace_defect() const {
    double d = 0;
    for (auto& r : rows) d = std::max(d, r.max_trace_defect);
    return d;
  }
  double max_commutator() const {
    double d = 0;
    for (auto& r : rows) d = std::max(d, r.max_commutator);
    return d;
  }

  static std::string csv_header() { return "p,r_p,torus_order,max_trace_ratio,n_eigenspaces,skipped_reason"; }
  std::vector<std::string> csv_rows() const {
    std::vector<std::string> out;
    for (auto& r : rows) {
      if (r.skipped())
        out.push_back(std::to_string(r.p) + ",,,,," + r.skipped_reason);
      else
        out.push_back(std::to_string(r.p) + "," + std::to_string(r.r_p) + "," + std::to_string(r.torus_order) + "," +
                      detail::fmt(r.max_ratio) + "," + std::to_string(r.n_eigenspaces) + ",");
    }
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"A", matrix}, {"xi_max", window.max_coeff}};
    j["primes"] = nlohmann::json::array();
    nlohmann::json trend = nlohmann::json::array();
    for (auto& r : rows) {
      j["primes"].push_back(r.to_json());
      if (!r.skipped()) trend.push_back({{"p", r.p}, {"max_ratio", r.max_ratio}});
    }
    j["violations"] = violations();
    j["max_trace_defect"] = max_trace_defect();
    j["max_commutator"] = max_commutator();
    j["trend"] = trend;
    return j;
  }
};

inline StatReport statistical_state_sweep(const LatticeAutomorphism& lat, const std::vector<std::uint32_t>& primes,
                                          const XiWindow& w = {}, std::size_t jobs = 1) {
  StatReport rep{lat.to_json(), w, {}};
  rep.rows = sweep_primes<StatPrimeRow>(primes, jobs,
                                        [&](std::uint32_t p) { return statistical_state_experiment(lat, p, w); });
  return rep;
}

}  // namespace hwr

#endif  // HWR_CATMAP_QUE_HPP
