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
 * @file module.hpp
 * @brief The symplectic module structure (K, V, omega_bar) attached to a
 * maximal torus, and the symplectic rank.
 *
 * A = Z(T, End V) is a commutative semisimple algebra of dimension 2N. Its
 * primitive idempotents come from the Frobenius-fixed subalgebra. The
 * symplectic transpose Theta permutes them; each Theta-orbit is a block
 * V_alpha, and K_alpha is the Theta-fixed part of the corresponding summand
 * of A. An orbit of size two is a split block, a fixed idempotent an inert
 * one. K_alpha is identified with F_{q^d} through the minimal polynomial of
 * a generating element.
 */

#ifndef HWR_SYMP_MODULE_HPP
#define HWR_SYMP_MODULE_HPP

#include <algorithm>
#include <array>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "hwr/gfq/extension_basis.hpp"
#include "hwr/symp/torus.hpp"

namespace hwr {

namespace detail {

inline FqVector vectorize(const FqMatrix& m) { return m.data(); }

inline FqMatrix unvectorize(const Field& f, std::size_t n, const FqVector& v) {
  FqMatrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i * n + j];
  return m;
}

// Basis (as matrices) of the span of the given matrices.
inline std::vector<FqMatrix> span_basis(const Field& f, const std::vector<FqMatrix>& ms) {
  if (ms.empty()) return {};
  const std::size_t n = ms[0].rows();
  FqMatrix rows(f, ms.size(), n * n);
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = 0; j < n * n; ++j) rows(i, j) = ms[i].data()[j];
  auto e = rows.reduce(true);
  std::vector<FqMatrix> out;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    FqVector v(n * n);
    for (std::size_t j = 0; j < n * n; ++j) v[j] = rows(r, j);
    out.push_back(unvectorize(f, n, v));
  }
  return out;
}

// Coordinates of X in the basis, or nullopt when X is outside the span.
inline std::optional<FqVector> coords_in(const Field& f, const std::vector<FqMatrix>& basis, const FqMatrix& x) {
  const std::size_t n = x.rows();
  FqMatrix cols(f, n * n, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < n * n; ++i) cols(i, j) = basis[j].data()[i];
  return cols.solve(x.data());
}

// Minimal polynomial of x inside an algebra with unit `unit`.
inline Poly minimal_polynomial(const Field& f, const FqMatrix& unit, const FqMatrix& x) {
  std::vector<FqMatrix> powers{unit};
  while (true) {
    FqMatrix next = powers.back() * x;
    auto c = coords_in(f, powers, next);
    if (c) {
      std::vector<FieldElem> co(powers.size() + 1);
      for (std::size_t i = 0; i < powers.size(); ++i) co[i] = f.neg((*c)[i]);
      co.back() = f.one();
      return Poly(std::move(co));
    }
    powers.push_back(std::move(next));
  }
}

inline FqMatrix linear_combination(const Field& f, const std::vector<FqMatrix>& basis, const FqVector& c) {
  FqMatrix r(f, basis[0].rows(), basis[0].cols());
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (c[i].code) r = r + basis[i].scaled(c[i]);
  return r;
}

}  // namespace detail

/// Z(T, End V): basis of the commutant of the torus generators.
inline std::vector<FqMatrix> centralizer_algebra(const Torus& t) {
  const Field& f = t.field();
  const std::size_t n = t.space().dim();
  // X g - g X = 0 for every generator, unknowns X_{ij} in row-major order.
  FqMatrix sys(f, n * n * t.generators().size(), n * n);
  std::size_t row0 = 0;
  for (const auto& g : t.generators()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t row = row0 + i * n + j;
        // (X g)_{ij} = sum_k X_{ik} g_{kj};  (g X)_{ij} = sum_k g_{ik} X_{kj}
        for (std::size_t k = 0; k < n; ++k) {
          sys(row, i * n + k) = f.add(sys(row, i * n + k), g(k, j));
          sys(row, k * n + j) = f.sub(sys(row, k * n + j), g(i, k));
        }
      }
    row0 += n * n;
  }
  std::vector<FqMatrix> out;
  for (auto& v : sys.nullspace()) out.push_back(detail::unvectorize(f, n, v));
  return out;
}

/// One block (V_alpha, K_alpha, omega_bar_alpha).
struct ModuleBlock {
  BlockKind kind;
  Field K;                                // F_{q^d}
  std::shared_ptr<const ExtensionBasis> kbasis;  // power basis of zeta over k
  FqMatrix idempotent;                    // projector of V onto V_alpha
  std::vector<FqVector> basis;            // k-basis of V_alpha (2d vectors)
  std::vector<FqMatrix> zeta_powers;      // action of zeta^j, j < d (zero off V_alpha)
  FqMatrix trace_form_inv;                // inverse of [Tr(zeta^{i+j})]
  FqVector e, f;                          // omega_bar(e, f) = 1
};

/// 2x2 matrix [[a, b], [c, d]] over K_alpha.
using KMatrix = std::array<FieldElem, 4>;

class SympModuleStructure {
 public:
  SympModuleStructure(SympSpace space, std::vector<ModuleBlock> blocks)
      : space_(std::move(space)), blocks_(std::move(blocks)) {}

  const SympSpace& space() const { return space_; }
  const std::vector<ModuleBlock>& blocks() const { return blocks_; }
  std::size_t rank() const { return blocks_.size(); }

  TorusKind kind() const {
    TorusKind k;
    for (auto& b : blocks_) k.blocks.push_back(b.kind);
    return k;
  }

  /// Matrix of y in K_alpha acting on V (zero outside V_alpha).
  FqMatrix action(std::size_t alpha, FieldElem y) const {
    const auto& b = blocks_.at(alpha);
    auto c = b.kbasis->coords(y);
    return detail::linear_combination(space_.field(), b.zeta_powers, c);
  }

  FqVector project(std::size_t alpha, const FqVector& v) const { return blocks_.at(alpha).idempotent * v; }

  /// omega_bar_alpha(u, v) for u, v in V (projected to V_alpha first):
  /// the unique y with Tr(kappa y) = omega(kappa u, v) for all kappa.
  FieldElem omega_bar(std::size_t alpha, const FqVector& u, const FqVector& v) const {
    const auto& b = blocks_.at(alpha);
    const Field& k = space_.field();
    FqVector pu = b.idempotent * u, pv = b.idempotent * v;
    FqVector t(b.zeta_powers.size());
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = space_.omega(b.zeta_powers[j] * pu, pv);
    (void)k;
    return b.kbasis->combine(b.trace_form_inv * t);
  }

  /// (kappa1, kappa2) with v_alpha = kappa1 e + kappa2 f.
  std::pair<FieldElem, FieldElem> kcoords(std::size_t alpha, const FqVector& v) const {
    const auto& b = blocks_.at(alpha);
    return {omega_bar(alpha, v, b.f), omega_bar(alpha, b.e, v)};
  }

  FqVector from_kcoords(std::size_t alpha, FieldElem k1, FieldElem k2) const {
    const auto& b = blocks_.at(alpha);
    return vec_add(space_.field(), action(alpha, k1) * b.e, action(alpha, k2) * b.f);
  }

  /// A K-linear map of V_alpha (e.g. a torus element) as a 2x2 matrix over K.
  KMatrix kmatrix(std::size_t alpha, const FqMatrix& g) const {
    const auto& b = blocks_.at(alpha);
    FqVector ge = g * b.e, gf = g * b.f;
    return {omega_bar(alpha, ge, b.f), omega_bar(alpha, gf, b.f), omega_bar(alpha, b.e, ge), omega_bar(alpha, b.e, gf)};
  }

  /// iota: prod SL(2, K_alpha) -> Sp(V).
  FqMatrix embed(const std::vector<KMatrix>& gs) const {
    if (gs.size() != blocks_.size()) throw DomainError("embed: one 2x2 matrix per block required");
    const Field& k = space_.field();
    const std::size_t n = space_.dim();
    std::vector<FqVector> cols;
    for (std::size_t i = 0; i < n; ++i) {
      FqVector x(n, k.zero());
      x[i] = k.one();
      FqVector img(n, k.zero());
      for (std::size_t a = 0; a < blocks_.size(); ++a) {
        const Field& K = blocks_[a].K;
        auto [k1, k2] = kcoords(a, x);
        const auto& g = gs[a];
        FieldElem n1 = K.add(K.mul(g[0], k1), K.mul(g[1], k2));
        FieldElem n2 = K.add(K.mul(g[2], k1), K.mul(g[3], k2));
        img = vec_add(k, img, from_kcoords(a, n1, n2));
      }
      cols.push_back(img);
    }
    return FqMatrix::from_columns(k, cols);
  }

  /// Tr o omega_bar = omega on basis pairs, blocks mutually orthogonal, and
  /// omega_bar invariant under the given matrices. Throws on failure.
  void verify(const std::vector<FqMatrix>& invariant_under) const {
    const Field& k = space_.field();
    for (std::size_t a = 0; a < blocks_.size(); ++a) {
      const auto& b = blocks_[a];
      const auto& emb = b.kbasis->embedding();
      for (auto& u : b.basis)
        for (auto& v : b.basis) {
          FieldElem ob = omega_bar(a, u, v);
          if (emb.trace(ob) != space_.omega(u, v)) throw std::runtime_error("Tr(omega_bar) != omega");
          for (auto& g : invariant_under)
            if (omega_bar(a, g * u, g * v) != ob) throw std::runtime_error("omega_bar is not torus invariant");
        }
      if (omega_bar(a, b.e, b.f) != b.K.one()) throw std::runtime_error("K-basis is not symplectic");
      for (std::size_t c = 0; c < a; ++c)
        for (auto& u : b.basis)
          for (auto& v : blocks_[c].basis)
            if (space_.omega(u, v) != k.zero()) throw std::runtime_error("blocks are not orthogonal");
    }
  }

 private:
  SympSpace space_;
  std::vector<ModuleBlock> blocks_;
};

/**
 * Canonical symplectic module structure of a maximal torus. Throws
 * DomainError when the commutant has the wrong dimension (T not maximal).
 */
inline SympModuleStructure module_structure(const Torus& t, std::uint64_t seed = 0x6d6f64ULL) {
  const SympSpace& space = t.space();
  const Field& k = space.field();
  const std::size_t n = space.dim();
  auto alg = centralizer_algebra(t);
  if (alg.size() != n) throw DomainError("torus is not maximal: commutant has dimension " + std::to_string(alg.size()));
  const FqMatrix id = space.identity();

  // Frobenius-fixed subalgebra: X^q = X.
  std::vector<FqMatrix> diff;
  for (auto& b : alg) diff.push_back(b.pow(static_cast<std::int64_t>(k.q())) - b);
  FqMatrix fm(k, n * n, alg.size());
  for (std::size_t j = 0; j < alg.size(); ++j)
    for (std::size_t i = 0; i < n * n; ++i) fm(i, j) = diff[j].data()[i];
  std::vector<FqMatrix> berlekamp;
  for (auto& c : fm.nullspace()) berlekamp.push_back(detail::linear_combination(k, alg, c));

  // Split the unit into primitive idempotents.
  PolyRing R(k);
  std::vector<FqMatrix> idem{id};
  for (const auto& b : berlekamp) {
    std::vector<FieldElem> roots;
    for (auto& pf : R.factor(detail::minimal_polynomial(k, id, b))) {
      if (pf.factor.degree() != 1) throw std::runtime_error("Frobenius-fixed element with non-rational eigenvalue");
      roots.push_back(k.neg(pf.factor.coeffs[0]));
    }
    std::vector<FqMatrix> next;
    for (const auto& e : idem) {
      for (auto lam : roots) {
        FqMatrix proj = id;
        for (auto mu : roots)
          if (mu != lam) proj = proj * (b - id.scaled(mu)).scaled(k.inv(k.sub(lam, mu)));
        FqMatrix piece = e * proj;
        if (!piece.is_zero()) next.push_back(std::move(piece));
      }
    }
    idem = std::move(next);
  }
  std::sort(idem.begin(), idem.end(), [](const FqMatrix& a, const FqMatrix& b) { return a.key() < b.key(); });

  // Theta-orbits.
  std::vector<bool> used(idem.size(), false);
  std::vector<ModuleBlock> blocks;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < idem.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    FqMatrix th = symplectic_transpose(space, idem[i]);
    FqMatrix eps = idem[i];
    BlockKind kind;
    if (th == idem[i]) {
      kind.type = BlockKind::Type::Inert;
    } else {
      auto it = std::find(idem.begin(), idem.end(), th);
      if (it == idem.end()) throw std::runtime_error("Theta does not permute the idempotents");
      used[static_cast<std::size_t>(it - idem.begin())] = true;
      eps = eps + th;
      kind.type = BlockKind::Type::Split;
    }
    // A_alpha = eps A, K_alpha = its Theta-fixed part.
    std::vector<FqMatrix> a_alpha;
    for (auto& b : alg) a_alpha.push_back(eps * b);
    a_alpha = detail::span_basis(k, a_alpha);
    std::vector<FqMatrix> fix_diff;
    for (auto& b : a_alpha) fix_diff.push_back(symplectic_transpose(space, b) - b);
    FqMatrix sys(k, n * n, a_alpha.size());
    for (std::size_t j = 0; j < a_alpha.size(); ++j)
      for (std::size_t r = 0; r < n * n; ++r) sys(r, j) = fix_diff[j].data()[r];
    std::vector<FqMatrix> k_alpha;
    for (auto& c : sys.nullspace()) k_alpha.push_back(detail::linear_combination(k, a_alpha, c));
    const unsigned d = static_cast<unsigned>(k_alpha.size());
    kind.degree = d;

    std::vector<FqVector> vbasis;
    {
      std::vector<FqVector> cols;
      for (std::size_t j = 0; j < n; ++j) cols.push_back(eps.column(j));
      FqMatrix rows = FqMatrix::from_columns(k, cols).transpose();
      auto e = rows.reduce(true);
      for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        FqVector v(n);
        for (std::size_t c = 0; c < n; ++c) v[c] = rows(r, c);
        vbasis.push_back(v);
      }
    }
    if (vbasis.size() != 2 * d) throw DomainError("torus is not maximal: block is not free of rank 2 over K");

    // A generating element kappa of K_alpha.
    FqMatrix kappa = k_alpha[0];
    Poly mu = detail::minimal_polynomial(k, eps, kappa);
    std::uniform_int_distribution<std::uint64_t> coeff(0, k.q() - 1);
    for (std::size_t tries = 0; mu.degree() != static_cast<int>(d); ++tries) {
      if (tries < k_alpha.size()) {
        kappa = k_alpha[tries];
      } else {
        FqVector c(k_alpha.size());
        for (auto& x : c) x = k.elem(coeff(rng));
        kappa = detail::linear_combination(k, k_alpha, c);
      }
      mu = detail::minimal_polynomial(k, eps, kappa);
      if (tries > 10000) throw std::runtime_error("no generating element of K_alpha found");
    }
    Field K = Field::extension(k.p(), k.m() * d);
    Embedding emb(k, K);
    FieldElem zeta = K.zero();
    bool found = false;
    for (std::uint64_t c = 0; c < K.q() && !found; ++c) {
      FieldElem y = K.elem(c), val = K.zero();
      for (std::size_t j = mu.coeffs.size(); j-- > 0;) val = K.add(K.mul(val, y), emb.up(mu.coeffs[j]));
      if (val == K.zero()) {
        zeta = y;
        found = true;
      }
    }
    if (!found) throw std::runtime_error("minimal polynomial has no root in K");
    auto kb = std::make_shared<const ExtensionBasis>(emb, ExtensionBasis::power_basis(emb, zeta));
    std::vector<FqMatrix> zp{eps};
    for (unsigned j = 1; j < d; ++j) zp.push_back(zp.back() * kappa);
    FqMatrix tf(k, d, d);
    for (unsigned a = 0; a < d; ++a)
      for (unsigned b = 0; b < d; ++b) tf(a, b) = emb.trace(K.pow(zeta, a + b));

    ModuleBlock blk{kind, K, kb, eps, vbasis, zp, tf.inverse(), {}, {}};
    blocks.push_back(std::move(blk));
  }

  SympModuleStructure tmp(space, blocks);
  // K-symplectic basis per block.
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    auto& b = blocks[a];
    FqVector e = b.basis[0];
    bool ok = false;
    for (auto& w : b.basis) {
      FieldElem ob = tmp.omega_bar(a, e, w);
      if (ob.code) {
        b.e = e;
        b.f = tmp.action(a, b.K.inv(ob)) * w;
        ok = true;
        break;
      }
    }
    if (!ok) throw std::runtime_error("omega_bar is degenerate");
  }
  SympModuleStructure out(space, std::move(blocks));
  out.verify(t.generators());
  return out;
}

/// Result of symplectic_rank.
struct RankResult {
  TorusKind xi;
  unsigned r = 0;
  bool cheap_path = true;  // false when no regular element was found
};

/// Rank from the characteristic polynomial of a regular torus element alone.
inline std::optional<TorusKind> rank_from_charpoly(const Field& k, const Poly& f) {
  PolyRing R(k);
  if (!R.is_squarefree(f)) return std::nullopt;
  try {
    auto paired = detail::pair_reciprocal_factors(R, R.factor(f));
    TorusKind kind;
    for (auto& pf : paired) kind.blocks.push_back(pf.kind);
    return kind;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

/**
 * Symplectic type and rank. Uses the characteristic polynomial of a regular
 * torus element (generator products first, then a scan); falls back to the
 * full module structure when the torus has no regular element, which can
 * happen for very small q.
 */
inline RankResult symplectic_rank(const Torus& t) {
  const Field& k = t.field();
  std::vector<FqMatrix> candidates;
  FqMatrix prod = t.space().identity();
  for (auto& g : t.generators()) {
    candidates.push_back(g);
    prod = prod * g;
  }
  candidates.push_back(prod);
  auto try_one = [&](const FqMatrix& g) -> std::optional<RankResult> {
    auto kind = rank_from_charpoly(k, g.charpoly());
    if (!kind) return std::nullopt;
    return RankResult{*kind, static_cast<unsigned>(kind->blocks.size()), true};
  };
  for (auto& g : candidates)
    if (auto r = try_one(g)) return *r;
  for (auto& g : t.elements())
    if (auto r = try_one(g)) return *r;
  auto ms = module_structure(t);
  return RankResult{ms.kind(), static_cast<unsigned>(ms.rank()), false};
}

/// |Z(T, Sp)| by enumerating the commutant algebra; for maximality checks
/// on small spaces.
inline std::uint64_t centralizer_order_in_sp(const Torus& t, std::uint64_t max_enumeration = 1u << 20) {
  const SympSpace& space = t.space();
  const Field& k = space.field();
  auto alg = centralizer_algebra(t);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < alg.size(); ++i) {
    total *= k.q();
    if (total > max_enumeration) throw DomainError("commutant too large to enumerate");
  }
  std::uint64_t count = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    FqMatrix x = detail::linear_combination(k, alg, vec_from_index(k, alg.size(), idx));
    if (space.is_symplectic(x)) ++count;
  }
  return count;
}

/// Sort key used to compare torus types irrespective of block order.
inline TorusKind sorted_kind(TorusKind k) {
  std::sort(k.blocks.begin(), k.blocks.end());
  return k;
}

}  // namespace hwr

#endif  // HWR_SYMP_MODULE_HPP
