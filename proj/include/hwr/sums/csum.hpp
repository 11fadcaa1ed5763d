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
 * @file csum.hpp
 * @brief The torus exponential sums
 *
 *   c_chi(v) = sum_{g in T, g != I} chi(g)^-1 sigma((-1)^N det(g - I)) psi(omega((g-I)^-1 v, v)/2)
 *
 * which equal |T| Tr(pi(v) P_chi) for v != 0. The direct path sums over T
 * in V; the reduced path multiplies one-dimensional sums over the fields
 * K_alpha of the module structure.
 */

#ifndef HWR_SUMS_CSUM_HPP
#define HWR_SUMS_CSUM_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hwr/heiwei/weil.hpp"
#include "hwr/spectra/decompose.hpp"
#include "hwr/util/parallel.hpp"

namespace hwr {

/// Error raised when a non-identity torus element fixes a nonzero vector.
class SingularElementError : public DomainError {
 public:
  SingularElementError(std::size_t index, const FqMatrix& g)
      : DomainError("det(g - I) = 0 for torus element " + std::to_string(index) + ": " + g.to_json().dump()),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// All-characters evaluation of c_chi(v) by summing over T in V.
class DirectSum {
 public:
  explicit DirectSum(const Torus& t) : t_(t), roots_(t.size()) {
    const SympSpace& s = t.space();
    const std::size_t n = t.size();
    inv_.reserve(n);
    sign_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const FqMatrix& g = t.element(i);
      if (g.is_identity()) {
        inv_.emplace_back(s.field(), 0, 0);
        sign_.push_back(0);
        continue;
      }
      FqMatrix m = g - s.identity();
      if (m.det().code == 0) throw SingularElementError(i, g);
      inv_.push_back(m.inverse());
      sign_.push_back(ch_rho(s, g));
    }
    chars_ = torus_characters(t);
    // conj(chi_c(g_i)) as an index into the |T|-th roots of unity.
    phase_.resize(n * n);
    std::vector<std::vector<std::uint64_t>> exps(n);
    for (std::size_t i = 0; i < n; ++i) exps[i] = t.exponents(i);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t i = 0; i < n; ++i) phase_[c * n + i] = (n - chars_[c].phase_index(exps[i])) % n;
  }

  const std::vector<TorusCharacter>& characters() const { return chars_; }

  /// c_chi(v) for every character, in character order.
  std::vector<cplx> all(const FqVector& v) const {
    const SympSpace& s = t_.space();
    const Field& f = s.field();
    const std::size_t n = t_.size();
    std::vector<cplx> term(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!sign_[i]) continue;
      term[i] = static_cast<double>(sign_[i]) * f.psi(f.mul(f.half(), s.omega(inv_[i] * v, v)));
    }
    std::vector<cplx> out(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!sign_[i]) continue;
        acc += roots_[phase_[c * n + i]] * term[i];
      }
      out[c] = acc;
    }
    return out;
  }

 private:
  const Torus& t_;
  RootsOfUnity roots_;
  std::vector<FqMatrix> inv_;
  std::vector<int> sign_;
  std::vector<TorusCharacter> chars_;
  std::vector<std::uint32_t> phase_;
};

/// Per-block one-dimensional sums over K_alpha, multiplied together.
class ReducedSum {
 public:
  ReducedSum(const SympModuleStructure& ms, const Torus& t) : ms_(ms), t_(t) {
    const auto& blocks = ms.blocks();
    for (std::size_t i = 0; i < t.generators().size(); ++i) {
      const FqMatrix& g = t.generators()[i];
      std::optional<std::size_t> alpha;
      for (std::size_t a = 0; a < blocks.size(); ++a) {
        if (g * blocks[a].idempotent == blocks[a].idempotent) continue;
        if (alpha) throw DomainError("reduced sum needs one torus generator per block");
        alpha = a;
      }
      if (!alpha) throw DomainError("torus generator acts trivially");
      Factor fac;
      fac.alpha = *alpha;
      fac.order = t.orders()[i];
      const Field& K = blocks[*alpha].K;
      KMatrix h = ms.kmatrix(*alpha, g), pw = {K.one(), K.zero(), K.zero(), K.one()};
      for (std::uint64_t j = 0; j < fac.order; ++j) {
        fac.powers.push_back(pw);
        pw = mul(K, pw, h);
      }
      if (pw != KMatrix{K.one(), K.zero(), K.zero(), K.one()}) throw DomainError("generator order mismatch on block");
      factors_.push_back(std::move(fac));
    }
    std::set<std::size_t> seen;
    for (auto& f : factors_) seen.insert(f.alpha);
    if (seen.size() != blocks.size()) throw DomainError("torus generators do not cover every block");
  }

  /// One-dimensional sum over the cyclic factor i, for all its characters:
  /// out[k] = sum_j exp(-2 pi i jk/n) term(h^j), with term(I) = |K| [v_alpha = 0].
  std::vector<cplx> factor_sums(std::size_t i, const FqVector& v) const {
    const auto& fac = factors_.at(i);
    const Field& K = ms_.blocks()[fac.alpha].K;
    auto [k1, k2] = ms_.kcoords(fac.alpha, v);
    const std::uint64_t n = fac.order;
    std::vector<cplx> term(n);
    term[0] = (k1.code == 0 && k2.code == 0) ? static_cast<double>(K.q()) : 0.0;
    for (std::uint64_t j = 1; j < n; ++j) {
      const KMatrix& m = fac.powers[j];
      FieldElem a = K.sub(m[0], K.one()), d = K.sub(m[3], K.one());
      FieldElem det = K.sub(K.mul(a, d), K.mul(m[1], m[2]));
      if (det.code == 0) throw DomainError("torus element with eigenvalue 1 on a block");
      FieldElem w1 = K.div(K.sub(K.mul(d, k1), K.mul(m[1], k2)), det);
      FieldElem w2 = K.div(K.sub(K.mul(a, k2), K.mul(m[2], k1)), det);
      FieldElem ob = K.sub(K.mul(w1, k2), K.mul(w2, k1));
      term[j] = static_cast<double>(K.legendre(K.neg(det))) * K.psi(K.mul(K.half(), ob));
    }
    RootsOfUnity zeta(n);
    std::vector<cplx> out(n, 0.0);
    for (std::uint64_t k = 0; k < n; ++k)
      for (std::uint64_t j = 0; j < n; ++j) out[k] += std::conj(zeta[(j * k) % n]) * term[j];
    return out;
  }

  /// c_chi(v) for every character of T, in character order.
  std::vector<cplx> all(const FqVector& v) const {
    std::vector<std::vector<cplx>> per;
    for (std::size_t i = 0; i < factors_.size(); ++i) per.push_back(factor_sums(i, v));
    std::vector<cplx> out(t_.size());
    for (std::size_t c = 0; c < t_.size(); ++c) {
      auto e = t_.exponents(c);
      cplx prod = 1.0;
      for (std::size_t i = 0; i < factors_.size(); ++i) prod *= per[i][e[i]];
      out[c] = prod;
    }
    return out;
  }

 private:
  struct Factor {
    std::size_t alpha = 0;
    std::uint64_t order = 0;
    std::vector<KMatrix> powers;
  };

  static KMatrix mul(const Field& K, const KMatrix& x, const KMatrix& y) {
    return {K.add(K.mul(x[0], y[0]), K.mul(x[1], y[2])), K.add(K.mul(x[0], y[1]), K.mul(x[1], y[3])),
            K.add(K.mul(x[2], y[0]), K.mul(x[3], y[2])), K.add(K.mul(x[2], y[1]), K.mul(x[3], y[3]))};
  }

  const SympModuleStructure& ms_;
  const Torus& t_;
  std::vector<Factor> factors_;
};

inline cplx c_chi_direct(const Torus& t, const TorusCharacter& chi, const FqVector& v) {
  if (vec_is_zero(v)) throw DomainError("c_chi needs v != 0");
  DirectSum ds(t);
  auto all = ds.all(v);
  for (std::size_t c = 0; c < all.size(); ++c)
    if (ds.characters()[c] == chi) return all[c];
  throw DomainError("character does not belong to the torus");
}

inline cplx c_chi_reduced(const SympModuleStructure& ms, const Torus& t, const TorusCharacter& chi, const FqVector& v) {
  if (vec_is_zero(v)) throw DomainError("c_chi needs v != 0");
  ReducedSum rs(ms, t);
  cplx out = 1.0;
  for (std::size_t i = 0; i < t.generators().size(); ++i) out *= rs.factor_sums(i, v)[chi.exponents().at(i)];
  return out;
}

/// |T| Tr(pi(v) P_chi), from an eigenspace decomposition.
inline cplx c_chi_operator(const WeilRep& rep, const EigenDecomposition& d, std::size_t chi_index, const FqVector& v) {
  const auto& p = d.projectors.at(chi_index).matrix();
  cplx tr = (rep.pi_op(v).matrix() * p).trace();
  std::uint64_t order = d.characters.at(chi_index).group_order();
  return static_cast<double>(order) * tr;
}

/// Dimension of the span of the T-orbit of v (Krylov closure under generators).
inline std::size_t orbit_span_rank(const Torus& t, const FqVector& v) {
  const Field& f = t.field();
  std::vector<FqVector> span{v}, frontier{v};
  auto rank_of = [&](const std::vector<FqVector>& vs) { return FqMatrix::from_columns(f, vs).rank(); };
  std::size_t r = vec_is_zero(v) ? 0 : 1;
  while (!frontier.empty()) {
    std::vector<FqVector> next;
    for (auto& w : frontier)
      for (auto& g : t.generators()) {
        FqVector gw = g * w;
        span.push_back(gw);
        std::size_t r2 = rank_of(span);
        if (r2 > r) {
          r = r2;
          next.push_back(gw);
        } else {
          span.pop_back();
        }
      }
    frontier = std::move(next);
  }
  return r;
}

/// v lies in no proper T-invariant subspace.
inline bool is_admissible(const Torus& t, const FqVector& v) { return orbit_span_rank(t, v) == t.space().dim(); }

enum class SumMethod { Auto, Direct, Reduced };

struct BoundOptions {
  SumMethod method = SumMethod::Auto;
  std::uint64_t exhaustive_limit = 6561;  // q^{2N} at or below this: all v
  std::size_t sample_size = 4096;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  bool keep_rows = true;
  std::optional<std::vector<FqVector>> vectors;  // overrides the v-range
};

struct SumRow {
  std::size_t chi = 0;
  FqVector v;
  cplx value;
  double abs = 0, bound = 0, ratio = 0;
  bool admissible = true;
};

struct SumReport {
  std::uint32_t p = 0;
  unsigned m = 0;
  std::size_t N = 0;
  std::string torus;
  std::uint64_t seed = 0;
  std::size_t rank = 0;            // symplectic rank r
  double bound = 0;                // 2^r sqrt(q^N)
  double es_bound = 0;             // 2^N sqrt(q^N)
  std::size_t vectors = 0, admissible_vectors = 0;
  bool exhaustive = false;
  std::string method;
  double max_ratio = 0;            // over admissible v
  double max_abs = 0;
  double max_ratio_es = 0;
  double max_ratio_inadmissible = 0;
  std::optional<SumRow> witness;   // argmax over admissible v
  std::optional<SumRow> inadmissible_witness;
  std::vector<std::string> chi_labels;
  std::vector<double> per_chi_max;  // max |c_chi| over admissible v
  std::vector<SumRow> rows;

  bool within_bound(double tol = 1e-8) const { return max_abs <= bound + tol; }

  static std::string serialize(const FqVector& v) {
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ";" : "") << v[i].code;
    return s.str();
  }

  static std::string csv_header() { return "p,m,N,torus,chi,v,re,im,abs,bound,ratio,admissible"; }

  std::vector<std::string> csv_rows() const {
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (auto& r : rows) {
      std::ostringstream s;
      s.precision(12);
      s << p << ',' << m << ',' << N << ',' << torus << ',' << chi_labels[r.chi] << ',' << serialize(r.v) << ','
        << r.value.real() << ',' << r.value.imag() << ',' << r.abs << ',' << r.bound << ',' << r.ratio << ','
        << (r.admissible ? 1 : 0);
      out.push_back(s.str());
    }
    return out;
  }

  nlohmann::json to_json() const {
    auto wit = [&](const std::optional<SumRow>& w) -> nlohmann::json {
      if (!w) return nullptr;
      return {{"chi", chi_labels[w->chi]}, {"v", serialize(w->v)}, {"re", w->value.real()},
              {"im", w->value.imag()}, {"abs", w->abs}, {"ratio", w->ratio}};
    };
    return {{"p", p}, {"m", m}, {"N", N}, {"torus", torus}, {"seed", seed}, {"rank", rank}, {"bound", bound},
            {"es_bound", es_bound}, {"vectors", vectors}, {"admissible_vectors", admissible_vectors},
            {"exhaustive", exhaustive}, {"method", method}, {"max_ratio", max_ratio}, {"max_abs", max_abs},
            {"max_ratio_es", max_ratio_es}, {"max_ratio_inadmissible", max_ratio_inadmissible},
            {"witness", wit(witness)}, {"inadmissible_witness", wit(inadmissible_witness)}};
  }
};

/// The v-range: every nonzero v, or a seeded sample plus Hamming weight <= 2.
inline std::vector<FqVector> bound_vectors(const SympSpace& s, const BoundOptions& opt, bool* exhaustive = nullptr) {
  const Field& f = s.field();
  const std::size_t n = s.dim();
  const std::uint64_t total = nt::ipow(f.q(), static_cast<unsigned>(n));
  std::vector<FqVector> out;
  if (total <= opt.exhaustive_limit) {
    if (exhaustive) *exhaustive = true;
    for (std::uint64_t i = 1; i < total; ++i) out.push_back(vec_from_index(f, n, i));
    return out;
  }
  if (exhaustive) *exhaustive = false;
  std::set<std::vector<std::uint32_t>> seen;
  auto add = [&](const FqVector& v) {
    if (vec_is_zero(v)) return;
    std::vector<std::uint32_t> key;
    for (auto x : v) key.push_back(x.code);
    if (seen.insert(key).second) out.push_back(v);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::uint64_t a = 1; a < f.q(); ++a) {
      FqVector v(n, f.zero());
      v[i] = f.elem(a);
      add(v);
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::uint64_t b = 1; b < f.q(); ++b) {
          v[j] = f.elem(b);
          add(v);
          v[j] = f.zero();
        }
    }
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::uint64_t> d(0, f.q() - 1);
  for (std::size_t k = 0; k < opt.sample_size; ++k) {
    FqVector v(n);
    for (auto& x : v) x = f.elem(d(rng));
    add(v);
  }
  return out;
}

/**
 * |c_chi(v)| against 2^r sqrt(q^N) over all characters and the v-range.
 * Vectors inside a proper T-invariant subspace are recorded but kept out
 * of max_ratio. `ms` is needed for the reduced path.
 */
inline SumReport bound_report(const Torus& t, const SympModuleStructure* ms, const BoundOptions& opt = {}) {
  const SympSpace& s = t.space();
  const Field& f = s.field();
  SumReport rep;
  rep.p = f.p();
  rep.m = f.m();
  rep.N = s.N();
  rep.torus = t.descriptor();
  rep.seed = opt.seed;
  rep.rank = ms ? ms->rank() : symplectic_rank(t).r;
  const double qn = std::pow(static_cast<double>(f.q()), static_cast<double>(s.N()));
  rep.bound = std::pow(2.0, static_cast<double>(rep.rank)) * std::sqrt(qn);
  rep.es_bound = std::pow(2.0, static_cast<double>(s.N())) * std::sqrt(qn);
  auto chars = torus_characters(t);
  for (auto& c : chars) rep.chi_labels.push_back(c.to_string());
  rep.per_chi_max.assign(chars.size(), 0.0);

  std::vector<FqVector> vs = opt.vectors ? *opt.vectors : bound_vectors(s, opt, &rep.exhaustive);
  rep.vectors = vs.size();
  if (vs.empty()) return rep;

  std::optional<DirectSum> direct;
  std::optional<ReducedSum> reduced;
  if (opt.method != SumMethod::Reduced) {
    try {
      direct.emplace(t);
    } catch (const SingularElementError&) {
      if (opt.method == SumMethod::Direct) throw;
    }
  }
  if (!direct) {
    if (!ms) throw DomainError("reduced path needs the module structure");
    reduced.emplace(*ms, t);
  }
  rep.method = direct ? "direct" : "reduced";

  std::vector<std::vector<cplx>> values(vs.size());
  std::vector<char> adm(vs.size());
  parallel_for(vs.size(), opt.jobs, [&](std::size_t i) {
    values[i] = direct ? direct->all(vs[i]) : reduced->all(vs[i]);
    adm[i] = is_admissible(t, vs[i]);
  });

  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (adm[i]) ++rep.admissible_vectors;
    for (std::size_t c = 0; c < chars.size(); ++c) {
      SumRow row{c, vs[i], values[i][c], std::abs(values[i][c]), rep.bound, 0.0, adm[i] != 0};
      row.ratio = row.abs / rep.bound;
      if (row.admissible) {
        rep.per_chi_max[c] = std::max(rep.per_chi_max[c], row.abs);
        rep.max_abs = std::max(rep.max_abs, row.abs);
        rep.max_ratio_es = std::max(rep.max_ratio_es, row.abs / rep.es_bound);
        if (!rep.witness || row.ratio > rep.max_ratio) {
          rep.max_ratio = row.ratio;
          rep.witness = row;
        }
      } else if (!rep.inadmissible_witness || row.ratio > rep.max_ratio_inadmissible) {
        rep.max_ratio_inadmissible = row.ratio;
        rep.inadmissible_witness = row;
      }
      if (opt.keep_rows) rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

}  // namespace hwr

#endif  // HWR_SUMS_CSUM_HPP
