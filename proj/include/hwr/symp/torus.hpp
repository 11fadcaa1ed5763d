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
 * @file torus.hpp
 * @brief Maximal tori in Sp(2N, F_q): explicit construction by block type and
 * centralizers of regular elements.
 *
 * A torus is stored as one cyclic generator per block. Elements are
 * enumerated lexicographically in the exponent tuple, the first generator's
 * exponent being the most significant, so element 0 is the identity.
 */

#ifndef HWR_SYMP_TORUS_HPP
#define HWR_SYMP_TORUS_HPP

#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "hwr/gfq/extension_basis.hpp"
#include "hwr/gfq/poly.hpp"
#include "hwr/symp/space.hpp"

namespace hwr {

/// One block of a torus: split (F_{q^d}^*) or inert (norm-one in F_{q^{2d}}).
struct BlockKind {
  enum class Type { Split, Inert };
  Type type = Type::Split;
  unsigned degree = 1;

  friend bool operator==(const BlockKind&, const BlockKind&) = default;
  friend auto operator<=>(const BlockKind& a, const BlockKind& b) {
    if (a.degree != b.degree) return a.degree <=> b.degree;
    return static_cast<int>(a.type) <=> static_cast<int>(b.type);
  }

  std::uint64_t order(std::uint64_t q) const {
    std::uint64_t qd = nt::ipow(q, degree);
    return type == Type::Split ? qd - 1 : qd + 1;
  }

  std::string to_string() const {
    std::string t = type == Type::Split ? "split" : "inert";
    return degree == 1 ? t : t + std::to_string(degree);
  }
};

/// Torus type: list of blocks. Text form "split,inert2" (degree suffix
/// optional, default 1); "irr" is an alias for a single inert block of
/// degree N.
struct TorusKind {
  std::vector<BlockKind> blocks;

  friend bool operator==(const TorusKind&, const TorusKind&) = default;

  std::size_t half_dim() const {
    std::size_t n = 0;
    for (auto& b : blocks) n += b.degree;
    return n;
  }

  std::uint64_t order(std::uint64_t q) const {
    std::uint64_t o = 1;
    for (auto& b : blocks) o *= b.order(q);
    return o;
  }

  /// Over F_3 a split block of degree one is {+1, -1}, which is central in
  /// SL(2); such a torus is not self-centralizing.
  bool is_maximal(std::uint64_t q) const {
    for (auto& b : blocks)
      if (q == 3 && b.type == BlockKind::Type::Split && b.degree == 1) return false;
    return true;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < blocks.size(); ++i) s += (i ? "," : "") + blocks[i].to_string();
    return s;
  }

  static TorusKind parse(const std::string& text, std::size_t n) {
    TorusKind k;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "irr" || item == "irreducible") {
        k.blocks.push_back({BlockKind::Type::Inert, static_cast<unsigned>(n)});
        continue;
      }
      BlockKind b;
      std::string rest;
      if (item.rfind("split", 0) == 0) {
        b.type = BlockKind::Type::Split;
        rest = item.substr(5);
      } else if (item.rfind("inert", 0) == 0) {
        b.type = BlockKind::Type::Inert;
        rest = item.substr(5);
      } else {
        throw DomainError("unknown torus block '" + item + "'");
      }
      if (!rest.empty()) {
        if (rest.find_first_not_of("0123456789") != std::string::npos) throw DomainError("bad block degree in '" + item + "'");
        b.degree = static_cast<unsigned>(std::stoul(rest));
      }
      if (b.degree == 0) throw DomainError("block degree must be positive");
      k.blocks.push_back(b);
    }
    if (k.blocks.empty()) throw DomainError("empty torus descriptor");
    return k;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& b : blocks)
      arr.push_back({{"type", b.type == BlockKind::Type::Split ? "split" : "inert"}, {"degree", b.degree}});
    return {{"blocks", arr}};
  }

  static TorusKind from_json(const nlohmann::json& j) {
    TorusKind k;
    for (auto& b : j.at("blocks")) {
      std::string t = b.at("type");
      BlockKind bk;
      if (t == "split") bk.type = BlockKind::Type::Split;
      else if (t == "inert" || t == "irreducible") bk.type = BlockKind::Type::Inert;
      else throw DomainError("unknown block type '" + t + "'");
      bk.degree = b.value("degree", 1u);
      k.blocks.push_back(bk);
    }
    return k;
  }

  /// All torus types for half-dimension n (blocks in non-decreasing order).
  static std::vector<TorusKind> all(std::size_t n) {
    std::vector<TorusKind> out;
    std::vector<BlockKind> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t left) {
      if (left == 0) {
        out.push_back({cur});
        return;
      }
      for (unsigned d = 1; d <= left; ++d)
        for (auto t : {BlockKind::Type::Split, BlockKind::Type::Inert}) {
          BlockKind b{t, d};
          if (!cur.empty() && b < cur.back()) continue;
          cur.push_back(b);
          rec(left - d);
          cur.pop_back();
        }
    };
    rec(n);
    return out;
  }
};

/// Commutative subgroup given as a direct product of cyclic groups.
class Torus {
 public:
  Torus(SympSpace space, std::vector<FqMatrix> generators, std::vector<std::uint64_t> orders,
        std::optional<TorusKind> kind = std::nullopt)
      : space_(std::move(space)), generators_(std::move(generators)), orders_(std::move(orders)), kind_(std::move(kind)) {
    if (generators_.size() != orders_.size()) throw DomainError("one order per generator required");
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      if (!space_.is_symplectic(generators_[i])) throw DomainError("torus generator is not symplectic");
      if (!generators_[i].pow(static_cast<std::int64_t>(orders_[i])).is_identity())
        throw DomainError("torus generator order mismatch");
      for (std::size_t j = 0; j < i; ++j)
        if (!(generators_[i] * generators_[j] == generators_[j] * generators_[i]))
          throw DomainError("torus generators do not commute");
    }
    enumerate();
  }

  const SympSpace& space() const { return space_; }
  const Field& field() const { return space_.field(); }
  const std::vector<FqMatrix>& generators() const { return generators_; }
  const std::vector<std::uint64_t>& orders() const { return orders_; }
  const std::optional<TorusKind>& kind() const { return kind_; }
  std::size_t size() const { return elements_.size(); }
  const FqMatrix& element(std::size_t i) const { return elements_.at(i); }
  const std::vector<FqMatrix>& elements() const { return elements_; }

  std::vector<std::uint64_t> exponents(std::size_t index) const {
    std::vector<std::uint64_t> e(orders_.size());
    for (std::size_t i = orders_.size(); i-- > 0;) {
      e[i] = index % orders_[i];
      index /= orders_[i];
    }
    return e;
  }

  std::size_t index(const std::vector<std::uint64_t>& e) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i) idx = idx * orders_[i] + e.at(i) % orders_[i];
    return idx;
  }

  /// Index of a matrix in the enumeration, if present.
  std::optional<std::size_t> find(const FqMatrix& g) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (elements_[i] == g) return i;
    return std::nullopt;
  }

  std::string descriptor() const { return kind_ ? kind_->to_string() : "custom"; }

 private:
  void enumerate() {
    std::size_t total = 1;
    for (auto o : orders_) total *= o;
    elements_.reserve(total);
    std::vector<std::vector<FqMatrix>> powers(generators_.size());
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      FqMatrix x = space_.identity();
      for (std::uint64_t k = 0; k < orders_[i]; ++k) {
        powers[i].push_back(x);
        x = x * generators_[i];
      }
    }
    std::unordered_set<std::vector<std::uint32_t>, MatrixKeyHash> seen;
    for (std::size_t idx = 0; idx < total; ++idx) {
      auto e = exponents(idx);
      FqMatrix g = space_.identity();
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) g = g * powers[i][e[i]];
      if (!seen.insert(g.key()).second) throw DomainError("torus generators are not independent");
      elements_.push_back(std::move(g));
    }
  }

  SympSpace space_;
  std::vector<FqMatrix> generators_;
  std::vector<std::uint64_t> orders_;
  std::optional<TorusKind> kind_;
  std::vector<FqMatrix> elements_;
};

namespace detail {

// Block of dimension 2d in local standard coordinates: the generator matrix.
inline FqMatrix local_block_generator(const Field& k, BlockKind b) {
  const std::uint32_t p = k.p();
  const unsigned d = b.degree;
  const unsigned m = k.m();
  if (b.type == BlockKind::Type::Split) {
    // V = K + K, omega((x1, y1), (x2, y2)) = Tr(x1 y2 - y1 x2), action (a, 1/a).
    Field big = Field::extension(p, m * d);
    ExtensionBasis eb(Embedding(k, big));
    const auto& bs = eb.basis();
    FieldElem a = big.generator(), ainv = big.inv(a);
    FqMatrix gram(k, 2 * d, 2 * d), act(k, 2 * d, 2 * d);
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j < d; ++j) {
        FieldElem t = eb.embedding().trace(big.mul(bs[i], bs[j]));
        gram(i, d + j) = t;
        gram(d + j, i) = k.neg(t);
      }
    for (unsigned j = 0; j < d; ++j) {
      auto cx = eb.coords(big.mul(a, bs[j]));
      auto cy = eb.coords(big.mul(ainv, bs[j]));
      for (unsigned i = 0; i < d; ++i) {
        act(i, j) = cx[i];
        act(d + i, d + j) = cy[i];
      }
    }
    std::vector<FqVector> span;
    for (unsigned i = 0; i < 2 * d; ++i) {
      FqVector e(2 * d, k.zero());
      e[i] = k.one();
      span.push_back(e);
    }
    FqMatrix s = FqMatrix::from_columns(k, symplectic_gram_schmidt(gram, span));
    return s.inverse() * act * s;
  }
  // V = L = F_{q^{2d}}, omega(x, y) = Tr_{L/k}(delta x conj(y)) with
  // conj(delta) = -delta, action by a norm-one generator.
  Field big = Field::extension(p, 2 * m * d);
  ExtensionBasis eb(Embedding(k, big));
  const auto& bs = eb.basis();
  const std::uint64_t qd = nt::ipow(k.q(), d);
  FieldElem gamma = big.generator();
  FieldElem delta = big.pow(gamma, static_cast<std::int64_t>((qd + 1) / 2));
  FieldElem c = big.pow(gamma, static_cast<std::int64_t>(qd - 1));
  auto conj = [&](FieldElem x) { return big.pow(x, static_cast<std::int64_t>(qd)); };
  FqMatrix gram(k, 2 * d, 2 * d), act(k, 2 * d, 2 * d);
  for (unsigned i = 0; i < 2 * d; ++i)
    for (unsigned j = 0; j < 2 * d; ++j)
      gram(i, j) = eb.embedding().trace(big.mul(delta, big.mul(bs[i], conj(bs[j]))));
  for (unsigned j = 0; j < 2 * d; ++j) {
    auto cc = eb.coords(big.mul(c, bs[j]));
    for (unsigned i = 0; i < 2 * d; ++i) act(i, j) = cc[i];
  }
  std::vector<FqVector> span;
  for (unsigned i = 0; i < 2 * d; ++i) {
    FqVector e(2 * d, k.zero());
    e[i] = k.one();
    span.push_back(e);
  }
  FqMatrix s = FqMatrix::from_columns(k, symplectic_gram_schmidt(gram, span));
  return s.inverse() * act * s;
}

}  // namespace detail

/**
 * Maximal torus of the given type. Block alpha with offset s and degree d
 * occupies the coordinates e_{s..s+d-1} and f_{s..s+d-1}.
 */
inline Torus build_maximal_torus(const SympSpace& space, const TorusKind& kind) {
  const Field& k = space.field();
  const std::size_t n = space.N();
  if (kind.half_dim() != n) throw DomainError("torus block dimensions do not sum to 2N");
  std::vector<FqMatrix> gens;
  std::vector<std::uint64_t> orders;
  std::size_t offset = 0;
  for (const auto& b : kind.blocks) {
    FqMatrix local = detail::local_block_generator(k, b);
    const unsigned d = b.degree;
    auto global = [&](unsigned i) { return i < d ? offset + i : n + offset + (i - d); };
    FqMatrix g = FqMatrix::identity(k, 2 * n);
    for (unsigned i = 0; i < 2 * d; ++i)
      for (unsigned j = 0; j < 2 * d; ++j) g(global(i), global(j)) = local(i, j);
    const FqMatrix& bs = space.symplectic_basis();
    if (!space.is_standard()) g = bs * g * bs.inverse();
    gens.push_back(std::move(g));
    orders.push_back(b.order(k.q()));
    offset += d;
  }
  return Torus(space, std::move(gens), std::move(orders), kind);
}

namespace detail {

// Least-code element of F_q[x]/(g) of order q^{deg g} - 1.
inline Poly primitive_residue(const PolyRing& R, const Poly& g) {
  const Field& f = R.field();
  const unsigned n = static_cast<unsigned>(g.degree());
  const std::uint64_t order = nt::ipow(f.q(), n) - 1;
  auto divisors = nt::prime_divisors(order);
  for (std::uint64_t c = 1; c <= order; ++c) {
    Poly h(vec_from_index(f, n, c));
    bool ok = true;
    for (auto l : divisors) {
      Poly r = R.powmod(h, order / l, g);
      if (r == R.one()) {
        ok = false;
        break;
      }
    }
    if (ok) return h;
  }
  throw DomainError("no primitive residue found");  // cannot happen
}

/// Reciprocal-dual pairing of the irreducible factors of a squarefree,
/// self-reciprocal polynomial. Returns blocks with their component
/// polynomial (the factor, or the product of a factor with its dual).
struct PairedFactor {
  BlockKind kind;
  Poly factor;  // g
  Poly dual;    // g* (equal to g for inert blocks)
};

inline std::vector<PairedFactor> pair_reciprocal_factors(const PolyRing& R, const std::vector<PolyFactor>& fac) {
  std::vector<PairedFactor> out;
  std::vector<bool> used(fac.size(), false);
  for (std::size_t i = 0; i < fac.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const Poly& g = fac[i].factor;
    if (g.coeffs[0].code == 0) throw DomainError("degenerate centralizer: zero eigenvalue");
    Poly gs = R.reciprocal_dual(g);
    if (gs == g) {
      if (g.degree() % 2) throw DomainError("degenerate centralizer: self-dual factor of odd degree");
      out.push_back({{BlockKind::Type::Inert, static_cast<unsigned>(g.degree() / 2)}, g, g});
      continue;
    }
    std::size_t j = i + 1;
    while (j < fac.size() && (used[j] || fac[j].factor != gs)) ++j;
    if (j == fac.size()) throw DomainError("degenerate centralizer: factor without reciprocal partner");
    used[j] = true;
    out.push_back({{BlockKind::Type::Split, static_cast<unsigned>(g.degree())}, g, gs});
  }
  return out;
}

}  // namespace detail

/**
 * Z(A, Sp) for a regular semisimple A. The commutant of A in End(V) is
 * F_q[A] = F_q[x]/(f) with f the characteristic polynomial; the symplectic
 * transpose acts there as h(x) -> h(1/x), and the torus is its norm-one
 * group. Each block contributes the generator a / Theta(a) with a primitive
 * in that block's component and 1 elsewhere.
 */
inline Torus centralizer_torus(const SympSpace& space, const FqMatrix& a) {
  if (!space.is_symplectic(a)) throw DomainError("centralizer_torus: A is not symplectic");
  const Field& k = space.field();
  PolyRing R(k);
  Poly f = a.charpoly();
  if (!R.is_squarefree(f)) throw DomainError("degenerate centralizer: characteristic polynomial is not squarefree");
  auto paired = detail::pair_reciprocal_factors(R, R.factor(f));
  Poly xinv = R.invmod(R.x(), f);
  std::vector<FqMatrix> gens;
  std::vector<std::uint64_t> orders;
  TorusKind kind;
  for (const auto& pf : paired) {
    Poly comp = pf.factor;
    Poly cofactor = R.div_exact(f, comp);
    Poly idem = R.mod(R.mul(cofactor, R.invmod(cofactor, comp)), f);
    Poly h = detail::primitive_residue(R, pf.factor);
    Poly el = R.add(R.one(), R.mulmod(idem, R.sub(h, R.one()), f));
    Poly theta = R.compose_mod(el, xinv, f);
    Poly u = R.mulmod(el, R.invmod(theta, f), f);
    gens.push_back(a.eval_poly(u));
    orders.push_back(pf.kind.order(k.q()));
    kind.blocks.push_back(pf.kind);
  }
  return Torus(space, std::move(gens), std::move(orders), kind);
}

}  // namespace hwr

#endif  // HWR_SYMP_TORUS_HPP
