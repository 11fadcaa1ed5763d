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
 * @file weil.hpp
 * @brief Schroedinger model of the Heisenberg representation and the Weil
 * representation of Sp(V), built from the Heisenberg-Weil character.
 *
 * Model: V = L + L' in a symplectic basis, H = functions on L = F_q^N, and
 *   pi(a + b, z) f(x) = psi(z + b.x + a.b/2) f(x + a).
 * For g with det(g - I) != 0,
 *   rho(g) = q^-N sigma((-1)^N det(g - I)) sum_v psi(omega((g-I)^-1 v, v)/2) pi(v),
 * which is Fourier inversion over the orthogonal basis {pi(v)}. Other g are
 * factored into two such elements.
 */

#ifndef HWR_HEIWEI_WEIL_HPP
#define HWR_HEIWEI_WEIL_HPP

#include <cstdint>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "hwr/gfq/characters.hpp"
#include "hwr/heiwei/heisenberg.hpp"
#include "hwr/symp/module.hpp"
#include "hwr/symp/torus.hpp"

namespace hwr {

/// sigma((-1)^N det(g - I)); throws when g - I is singular.
inline int ch_rho(const SympSpace& space, const FqMatrix& g) {
  const Field& f = space.field();
  FieldElem d = (g - space.identity()).det();
  if (d.code == 0) throw DomainError("character formula undefined: det(g - I) = 0");
  if (space.N() % 2) d = f.neg(d);
  return f.legendre(d);
}

/// Phase argument omega((g-I)^-1 v, v)/2 + z of the Heisenberg-Weil character.
inline FieldElem ch_tau_phase(const SympSpace& space, const FqMatrix& g, const HeisenbergElem& h) {
  const Field& f = space.field();
  auto w = (g - space.identity()).solve(h.v);
  if (!w) throw DomainError("character formula undefined: det(g - I) = 0");
  return f.add(f.mul(f.half(), space.omega(*w, h.v)), h.z);
}

/// sigma((-1)^N det(g - I)) psi(omega((g-I)^-1 v, v)/2 + z).
inline cplx ch_tau(const SympSpace& space, const FqMatrix& g, const HeisenbergElem& h) {
  int s = ch_rho(space, g);
  return static_cast<double>(s) * space.field().psi(ch_tau_phase(space, g, h));
}

/// The linearization is not pinned down by the character formula for SL(2, F_3).
inline bool weil_excluded(const Field& f, std::size_t n) { return f.q() == 3 && n == 1; }

class WeilRep {
 public:
  static constexpr std::size_t kDefaultCacheBytes = std::size_t{256} << 20;
  static constexpr int kMaxFactorRetries = 64;

  explicit WeilRep(SympSpace space, std::uint64_t seed = 0x7765696cULL, std::size_t cache_bytes = kDefaultCacheBytes)
      : space_(std::move(space)), seed_(seed), cache_bytes_(cache_bytes) {
    const Field& f = space_.field();
    if (weil_excluded(f, space_.N())) throw DomainError("Weil representation of SL(2, F_3) is excluded");
    const std::size_t n = space_.N();
    dim_ = nt::ipow(f.q(), static_cast<unsigned>(n));
    if (dim_ > (1u << 12)) throw DomainError("model dimension q^N too large for dense operators");
    tol_ = 1e-9 * static_cast<double>(dim_);
    add_.resize(dim_ * dim_);
    dot_.resize(dim_ * dim_);
    std::vector<FqVector> vecs(dim_);
    for (std::uint64_t i = 0; i < dim_; ++i) vecs[i] = vec_from_index(f, n, i);
    for (std::uint64_t a = 0; a < dim_; ++a)
      for (std::uint64_t x = 0; x < dim_; ++x) {
        add_[a * dim_ + x] = static_cast<std::uint32_t>(vec_index(f, vec_add(f, vecs[x], vecs[a])));
        FieldElem s = f.zero();
        for (std::size_t i = 0; i < n; ++i) s = f.add(s, f.mul(vecs[a][i], vecs[x][i]));
        dot_[a * dim_ + x] = f.trace_index(s);
      }
  }

  WeilRep(const WeilRep&) = delete;
  WeilRep& operator=(const WeilRep&) = delete;

  const SympSpace& space() const { return space_; }
  const Field& field() const { return space_.field(); }
  std::uint64_t dim() const { return dim_; }
  double tol() const { return tol_; }
  std::uint64_t seed() const { return seed_; }

  Operator identity() const { return Operator::identity(static_cast<Eigen::Index>(dim_), tol_); }

  Operator pi_op(const HeisenbergElem& h) const {
    const Field& f = space_.field();
    auto [ai, bi, ab] = split(h.v);
    const auto& roots = f.roots_p();
    const std::uint32_t p = f.p();
    std::uint32_t c = f.trace_index(f.add(h.z, f.mul(f.half(), ab)));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (std::uint64_t x = 0; x < dim_; ++x) m(x, add_[ai * dim_ + x]) = roots[(c + dot_[bi * dim_ + x]) % p];
    return {std::move(m), tol_};
  }

  Operator pi_op(const FqVector& v) const { return pi_op(HeisenbergElem{v, field().zero()}); }

  /**
   * Tr(pi(v) M) for every v at once, indexed by a + b * q^N with (a, b) the
   * standard coordinates of v. O(q^{3N}) instead of q^{2N} dense products.
   */
  std::vector<cplx> pi_trace_table(const Eigen::MatrixXcd& m) const {
    if (static_cast<std::uint64_t>(m.rows()) != dim_ || static_cast<std::uint64_t>(m.cols()) != dim_)
      throw DomainError("pi_trace_table: operator has wrong size");
    return table([&](std::uint64_t a, std::uint64_t x) { return m(add_[a * dim_ + x], x); });
  }

  /// <phi, pi(v) phi> for every v, same indexing as pi_trace_table.
  std::vector<cplx> wigner_table(const Eigen::VectorXcd& phi) const {
    if (static_cast<std::uint64_t>(phi.size()) != dim_) throw DomainError("wigner_table: vector has wrong size");
    return table([&](std::uint64_t a, std::uint64_t x) { return std::conj(phi(x)) * phi(add_[a * dim_ + x]); });
  }

  /// Index of v in the tables above.
  std::uint64_t table_index(const FqVector& v) const {
    auto [ai, bi, ab] = split(v);
    return ai + bi * dim_;
  }

  static bool generic(const SympSpace& space, const FqMatrix& g) { return (g - space.identity()).det().code != 0; }

  /// rho(g), cached. Throws DomainError if g is not symplectic.
  Operator weil_op(const FqMatrix& g) const {
    if (!space_.is_symplectic(g)) throw DomainError("matrix is not symplectic");
    if (g.is_identity()) return identity();
    auto key = g.key();
    {
      std::shared_lock lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    Operator r = build(g);
    std::unique_lock lock(mu_);
    const std::size_t bytes = dim_ * dim_ * sizeof(cplx);
    if (cached_bytes_ + bytes <= cache_bytes_ && cache_.emplace(std::move(key), r).second) cached_bytes_ += bytes;
    return r;
  }

  std::size_t cache_size() const {
    std::shared_lock lock(mu_);
    return cache_.size();
  }

 private:
  struct Split {
    std::uint64_t a, b;
    FieldElem ab;
  };

  Split split(const FqVector& v) const {
    const Field& f = space_.field();
    const std::size_t n = space_.N();
    if (v.size() != 2 * n) throw DomainError("vector has wrong dimension");
    FqVector s = space_.is_standard() ? v : space_.to_standard(v);
    FqVector a(s.begin(), s.begin() + n), b(s.begin() + n, s.end());
    FieldElem ab = f.zero();
    for (std::size_t i = 0; i < n; ++i) ab = f.add(ab, f.mul(a[i], b[i]));
    return {vec_index(f, a), vec_index(f, b), ab};
  }

  // sum_x psi(1/2 a.b + b.x) u(a, x), for every (a, b).
  template <class U>
  std::vector<cplx> table(U&& u) const {
    const Field& f = space_.field();
    const auto& roots = f.roots_p();
    const std::uint32_t p = f.p(), half = (p + 1) / 2;
    std::vector<cplx> out(dim_ * dim_);
    std::vector<cplx> row(dim_);
    for (std::uint64_t a = 0; a < dim_; ++a) {
      for (std::uint64_t x = 0; x < dim_; ++x) row[x] = u(a, x);
      for (std::uint64_t b = 0; b < dim_; ++b) {
        const std::uint32_t* dot = &dot_[b * dim_];
        const std::uint32_t c = static_cast<std::uint32_t>((std::uint64_t{half} * dot[a]) % p);
        cplx s = 0;
        for (std::uint64_t x = 0; x < dim_; ++x) s += roots[(c + dot[x]) % p] * row[x];
        out[a + b * dim_] = s;
      }
    }
    return out;
  }

  Operator build(const FqMatrix& g) const {
    if (generic(space_, g)) return build_generic(g);
    std::mt19937_64 rng(seed_ ^ MatrixKeyHash{}(g.key()));
    for (int t = 0; t < kMaxFactorRetries; ++t) {
      FqMatrix r = random_symplectic(space_, rng);
      if (!generic(space_, r)) continue;
      FqMatrix g1 = g * r.inverse();
      if (!generic(space_, g1)) continue;
      return {build_generic(g1).matrix() * build_generic(r).matrix(), tol_};
    }
    throw std::runtime_error("no generic factorization found for rho(g)");
  }

  Operator build_generic(const FqMatrix& g) const {
    const Field& f = space_.field();
    const std::size_t n = space_.N();
    const std::uint32_t p = f.p();
    const auto& roots = f.roots_p();
    int ch = ch_rho(space_, g);
    // Q(s) = omega_std((gs - I)^-1 s, s) / 2 in symplectic coordinates s.
    FqMatrix gs = space_.is_standard() ? g : space_.symplectic_basis().inverse() * g * space_.symplectic_basis();
    FqMatrix mq = ((gs - FqMatrix::identity(f, 2 * n)).inverse()).transpose() * standard_gram(f, n);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
    FqVector s(2 * n);
    for (std::uint64_t ai = 0; ai < dim_; ++ai) {
      FqVector a = vec_from_index(f, n, ai);
      for (std::uint64_t bi = 0; bi < dim_; ++bi) {
        FqVector b = vec_from_index(f, n, bi);
        std::copy(a.begin(), a.end(), s.begin());
        std::copy(b.begin(), b.end(), s.begin() + n);
        FieldElem quad = f.zero(), ab = f.zero();
        for (std::size_t i = 0; i < 2 * n; ++i) {
          if (s[i].code == 0) continue;
          FieldElem row = f.zero();
          for (std::size_t j = 0; j < 2 * n; ++j) row = f.add(row, f.mul(mq(i, j), s[j]));
          quad = f.add(quad, f.mul(s[i], row));
        }
        for (std::size_t i = 0; i < n; ++i) ab = f.add(ab, f.mul(a[i], b[i]));
        std::uint32_t c = f.trace_index(f.mul(f.half(), f.add(quad, ab)));
        for (std::uint64_t x = 0; x < dim_; ++x) m(x, add_[ai * dim_ + x]) += roots[(c + dot_[bi * dim_ + x]) % p];
      }
    }
    m *= static_cast<double>(ch) / static_cast<double>(dim_);
    return {std::move(m), tol_};
  }

  SympSpace space_;
  std::uint64_t seed_;
  std::size_t cache_bytes_;
  std::uint64_t dim_ = 0;
  double tol_ = 0.0;
  std::vector<std::uint32_t> add_;  // index of x + a, at [a * dim + x]
  std::vector<std::uint32_t> dot_;  // trace index of b.x, at [b * dim + x]

  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::vector<std::uint32_t>, Operator, MatrixKeyHash> cache_;
  mutable std::size_t cached_bytes_ = 0;
};

struct SelfReducibilityOptions {
  std::size_t samples = 50;
  std::uint64_t seed = 1;
  std::size_t vectors_per_element = 8;
  std::uint64_t max_dim = 343;
  bool operator_level = true;
};

struct SelfReducibilityReport {
  std::size_t trace_checks = 0;          // torus elements with det(g - I) != 0
  std::size_t sign_failures = 0;         // sigma identity
  std::size_t phase_checks = 0;
  std::size_t phase_failures = 0;        // psi identity
  std::size_t skipped_singular = 0;
  bool operator_level = false;
  std::size_t samples = 0;
  double max_operator_distance = 0.0;
  double max_heisenberg_distance = 0.0;  // alignment check on a k-basis of V
  double tol = 0.0;

  bool trace_identity_ok() const { return sign_failures == 0 && phase_failures == 0; }
  bool ok() const {
    return trace_identity_ok() && (!operator_level || (max_operator_distance <= tol && max_heisenberg_distance <= tol));
  }

  nlohmann::json to_json() const {
    return {{"trace_checks", trace_checks}, {"sign_failures", sign_failures}, {"phase_checks", phase_checks},
            {"phase_failures", phase_failures}, {"skipped_singular", skipped_singular},
            {"operator_level", operator_level}, {"samples", samples},
            {"max_operator_distance", max_operator_distance},
            {"max_heisenberg_distance", max_heisenberg_distance}, {"tol", tol}, {"ok", ok()}};
  }
};

namespace detail {

inline FieldElem kdet_minus_identity(const Field& K, const KMatrix& g) {
  FieldElem a = K.sub(g[0], K.one()), d = K.sub(g[3], K.one());
  return K.sub(K.mul(a, d), K.mul(g[1], g[2]));
}

/// The tensor product over blocks of the rank-one Weil representations,
/// together with the intertwiner U from the model of V.
class BlockTensorModel {
 public:
  BlockTensorModel(const WeilRep& rep, const SympModuleStructure& ms, std::uint64_t seed) : rep_(rep), ms_(ms) {
    for (auto& b : ms.blocks()) {
      if (weil_excluded(b.K, 1)) throw DomainError("block field F_3 of degree 1: Weil representation excluded");
      reps_.push_back(std::make_unique<WeilRep>(SympSpace(b.K, 1), seed));
    }
    build_intertwiner();
  }

  /// tensor over blocks of pi_bar_alpha(v_alpha).
  Eigen::MatrixXcd pi_bar(const FqVector& v) const {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t a = 0; a < reps_.size(); ++a) {
      auto [k1, k2] = ms_.kcoords(a, v);
      r = kron(r, reps_[a]->pi_op(FqVector{k1, k2}).matrix());
    }
    return r;
  }

  Eigen::MatrixXcd rho_bar(const std::vector<KMatrix>& gs) const {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t a = 0; a < reps_.size(); ++a) {
      const Field& K = ms_.blocks()[a].K;
      FqMatrix m(K, 2, 2);
      m(0, 0) = gs[a][0];
      m(0, 1) = gs[a][1];
      m(1, 0) = gs[a][2];
      m(1, 1) = gs[a][3];
      r = kron(r, reps_[a]->weil_op(m).matrix());
    }
    return r;
  }

  /// U X U^dagger.
  Eigen::MatrixXcd align(const Eigen::MatrixXcd& x) const { return u_ * x * u_.adjoint(); }

  const WeilRep& block_rep(std::size_t a) const { return *reps_.at(a); }

 private:
  void build_intertwiner() {
    const Field& k = rep_.field();
    const std::size_t nb = ms_.blocks().size();
    const auto dim = static_cast<Eigen::Index>(rep_.dim());
    // u0: the line fixed by pi over the Lagrangian sum K_alpha f_alpha.
    std::vector<FqVector> l0;
    for (std::size_t a = 0; a < nb; ++a) {
      const auto& b = ms_.blocks()[a];
      for (auto& zj : b.kbasis->basis()) l0.push_back(ms_.from_kcoords(a, b.K.zero(), zj));
    }
    Eigen::MatrixXcd p0 = Eigen::MatrixXcd::Zero(dim, dim);
    const std::uint64_t n0 = rep_.dim();
    for (std::uint64_t idx = 0; idx < n0; ++idx) {
      FqVector w(rep_.space().dim(), k.zero());
      std::uint64_t t = idx;
      for (auto& bv : l0) {
        w = vec_add(k, w, vec_scale(k, bv, k.elem(t % k.q())));
        t /= k.q();
      }
      p0 += rep_.pi_op(w).matrix();
    }
    Eigen::Index best = 0;
    p0.colwise().norm().maxCoeff(&best);
    Eigen::VectorXcd u0 = p0.col(best).normalized();
    // U: pi(w) u0 -> tensor of delta_{-kappa_alpha} for w = sum kappa_alpha e_alpha.
    u_ = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<std::uint64_t> sizes;
    for (auto& b : ms_.blocks()) sizes.push_back(b.K.q());
    for (std::uint64_t idx = 0; idx < n0; ++idx) {
      std::uint64_t t = idx, row = 0;
      FqVector w(rep_.space().dim(), k.zero());
      for (std::size_t a = nb; a-- > 0;) {
        const Field& K = ms_.blocks()[a].K;
        FieldElem kappa = K.elem(t % sizes[a]);
        t /= sizes[a];
        w = vec_add(k, w, ms_.from_kcoords(a, kappa, K.zero()));
      }
      std::uint64_t mult = 1;
      t = idx;
      for (std::size_t a = nb; a-- > 0;) {
        const Field& K = ms_.blocks()[a].K;
        row += K.neg(K.elem(t % sizes[a])).code * mult;
        mult *= sizes[a];
        t /= sizes[a];
      }
      u_.row(static_cast<Eigen::Index>(row)) = (rep_.pi_op(w).matrix() * u0).adjoint();
    }
  }

  const WeilRep& rep_;
  const SympModuleStructure& ms_;
  std::vector<std::unique_ptr<WeilRep>> reps_;
  Eigen::MatrixXcd u_;
};

}  // namespace detail

/**
 * Compares rho restricted along iota: prod SL(2, K_alpha) -> Sp(V) with the
 * tensor product of the Weil representations of SL(2, K_alpha) for the
 * character psi o Tr. Trace-level identities are checked on `elements`
 * (typically all of T); the operator-level distance on random samples.
 */
inline SelfReducibilityReport restrict_to_extension(const WeilRep& rep, const SympModuleStructure& ms,
                                                    const std::vector<FqMatrix>& elements,
                                                    const SelfReducibilityOptions& opt = {}) {
  const SympSpace& space = rep.space();
  const Field& k = space.field();
  const std::size_t nb = ms.blocks().size();
  SelfReducibilityReport rep_out;
  rep_out.tol = rep.tol();
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::uint64_t> coeff(0, k.q() - 1);

  for (const auto& g : elements) {
    if (!WeilRep::generic(space, g)) {
      ++rep_out.skipped_singular;
      continue;
    }
    ++rep_out.trace_checks;
    std::vector<KMatrix> gk;
    int rhs = 1;
    for (std::size_t a = 0; a < nb; ++a) {
      const Field& K = ms.blocks()[a].K;
      gk.push_back(ms.kmatrix(a, g));
      rhs *= K.legendre(K.neg(detail::kdet_minus_identity(K, gk.back())));
    }
    if (ch_rho(space, g) != rhs) ++rep_out.sign_failures;
    for (std::size_t s = 0; s < opt.vectors_per_element; ++s) {
      FqVector v(space.dim());
      for (auto& x : v) x = k.elem(coeff(rng));
      std::uint32_t lhs = k.trace_index(ch_tau_phase(space, g, {v, k.zero()}));
      std::uint64_t sum = 0;
      for (std::size_t a = 0; a < nb; ++a) {
        const Field& K = ms.blocks()[a].K;
        auto [k1, k2] = ms.kcoords(a, v);
        const auto& m = gk[a];
        // (g_alpha - I)^-1 (k1, k2) by the adjugate.
        FieldElem det = detail::kdet_minus_identity(K, m);
        FieldElem a11 = K.sub(m[0], K.one()), a22 = K.sub(m[3], K.one());
        FieldElem w1 = K.div(K.sub(K.mul(a22, k1), K.mul(m[1], k2)), det);
        FieldElem w2 = K.div(K.sub(K.mul(a11, k2), K.mul(m[2], k1)), det);
        FieldElem ob = K.sub(K.mul(w1, k2), K.mul(w2, k1));
        sum += K.trace_index(K.mul(K.half(), ob));
      }
      ++rep_out.phase_checks;
      if (lhs != sum % k.p()) ++rep_out.phase_failures;
    }
  }

  if (!opt.operator_level) return rep_out;
  if (rep.dim() > opt.max_dim)
    throw DomainError("self-reducibility operator check refused: q^N = " + std::to_string(rep.dim()) + " exceeds " +
                      std::to_string(opt.max_dim));
  rep_out.operator_level = true;
  detail::BlockTensorModel model(rep, ms, opt.seed);
  for (std::size_t i = 0; i < space.dim(); ++i) {
    FqVector v(space.dim(), k.zero());
    v[i] = k.one();
    double d = Operator::max_abs(model.align(rep.pi_op(v).matrix()) - model.pi_bar(v));
    rep_out.max_heisenberg_distance = std::max(rep_out.max_heisenberg_distance, d);
  }
  for (std::size_t s = 0; s < opt.samples; ++s) {
    std::vector<KMatrix> gs;
    for (std::size_t a = 0; a < nb; ++a) {
      FqMatrix m = s == 0 ? FqMatrix::identity(ms.blocks()[a].K, 2)
                          : random_symplectic(model.block_rep(a).space(), rng);
      gs.push_back({m(0, 0), m(0, 1), m(1, 0), m(1, 1)});
    }
    FqMatrix g = ms.embed(gs);
    double d = Operator::max_abs(model.align(rep.weil_op(g).matrix()) - model.rho_bar(gs));
    rep_out.max_operator_distance = std::max(rep_out.max_operator_distance, d);
    ++rep_out.samples;
  }
  return rep_out;
}

inline SelfReducibilityReport restrict_to_extension(const WeilRep& rep, const SympModuleStructure& ms, const Torus& t,
                                                    const SelfReducibilityOptions& opt = {}) {
  return restrict_to_extension(rep, ms, t.elements(), opt);
}

}  // namespace hwr

#endif  // HWR_HEIWEI_WEIL_HPP
