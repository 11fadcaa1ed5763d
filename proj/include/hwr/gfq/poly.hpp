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
 * @file poly.hpp
 * @brief Univariate polynomials over F_q and their factorization.
 *
 * Factorization runs square-free decomposition, distinct-degree splitting and
 * Cantor-Zassenhaus equal-degree splitting. The random choices in the last
 * step come from a seeded mt19937_64; the returned factor list is sorted, so
 * the output does not depend on the seed.
 */

#ifndef HWR_GFQ_POLY_HPP
#define HWR_GFQ_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hwr/gfq/field.hpp"

namespace hwr {

/// Polynomial with coefficients low to high; never has a zero leading
/// coefficient (the zero polynomial is empty).
struct Poly {
  std::vector<FieldElem> coeffs;

  Poly() = default;
  explicit Poly(std::vector<FieldElem> c) : coeffs(std::move(c)) { trim(); }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }
  FieldElem lead() const { return coeffs.back(); }
  FieldElem operator[](std::size_t i) const { return i < coeffs.size() ? coeffs[i] : FieldElem{0}; }

  void trim() {
    while (!coeffs.empty() && coeffs.back().code == 0) coeffs.pop_back();
  }

  friend bool operator==(const Poly&, const Poly&) = default;
  friend auto operator<=>(const Poly& a, const Poly& b) {
    if (a.coeffs.size() != b.coeffs.size()) return a.coeffs.size() <=> b.coeffs.size();
    // Compare from the top so that monic polynomials of equal degree are
    // ordered by their remaining coefficients, high to low.
    for (std::size_t i = a.coeffs.size(); i-- > 0;) {
      if (a.coeffs[i] != b.coeffs[i]) return a.coeffs[i] <=> b.coeffs[i];
    }
    return std::strong_ordering::equal;
  }
};

struct PolyFactor {
  Poly factor;
  unsigned multiplicity = 1;
  friend bool operator==(const PolyFactor&, const PolyFactor&) = default;
};

/// Arithmetic in F_q[x].
class PolyRing {
 public:
  explicit PolyRing(Field field) : field_(std::move(field)) {}

  const Field& field() const { return field_; }

  Poly constant(FieldElem c) const { return Poly({c}); }
  Poly one() const { return constant(field_.one()); }
  Poly x() const { return Poly({field_.zero(), field_.one()}); }

  /// Polynomial from integer coefficients (low to high) reduced into F_p.
  Poly from_ints(std::initializer_list<std::int64_t> c) const { return from_ints(std::vector<std::int64_t>(c)); }
  Poly from_ints(const std::vector<std::int64_t>& c) const {
    std::vector<FieldElem> out;
    for (auto v : c) out.push_back(field_.from_int(v));
    return Poly(std::move(out));
  }

  bool is_monic(const Poly& f) const { return !f.is_zero() && f.lead() == field_.one(); }

  Poly add(const Poly& a, const Poly& b) const {
    std::vector<FieldElem> r(std::max(a.coeffs.size(), b.coeffs.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_.add(a[i], b[i]);
    return Poly(std::move(r));
  }

  Poly sub(const Poly& a, const Poly& b) const {
    std::vector<FieldElem> r(std::max(a.coeffs.size(), b.coeffs.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_.sub(a[i], b[i]);
    return Poly(std::move(r));
  }

  Poly scale(const Poly& a, FieldElem s) const {
    std::vector<FieldElem> r(a.coeffs.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = field_.mul(a.coeffs[i], s);
    return Poly(std::move(r));
  }

  Poly mul(const Poly& a, const Poly& b) const {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<FieldElem> r(a.coeffs.size() + b.coeffs.size() - 1, field_.zero());
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
      if (a.coeffs[i].code == 0) continue;
      for (std::size_t j = 0; j < b.coeffs.size(); ++j)
        r[i + j] = field_.add(r[i + j], field_.mul(a.coeffs[i], b.coeffs[j]));
    }
    return Poly(std::move(r));
  }

  /// Quotient and remainder; b must be nonzero.
  std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) const {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    std::vector<FieldElem> rem = a.coeffs;
    const std::size_t n = b.coeffs.size();
    if (rem.size() < n) return {Poly{}, a};
    std::vector<FieldElem> quot(rem.size() - n + 1, field_.zero());
    const FieldElem lead_inv = field_.inv(b.lead());
    for (std::size_t k = rem.size(); k-- >= n;) {
      FieldElem c = field_.mul(rem[k], lead_inv);
      quot[k - n + 1] = c;
      if (c.code == 0) continue;
      for (std::size_t i = 0; i < n; ++i) rem[k - n + 1 + i] = field_.sub(rem[k - n + 1 + i], field_.mul(c, b.coeffs[i]));
    }
    rem.resize(n - 1);
    return {Poly(std::move(quot)), Poly(std::move(rem))};
  }

  Poly mod(const Poly& a, const Poly& b) const { return divmod(a, b).second; }
  Poly div_exact(const Poly& a, const Poly& b) const {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw DomainError("polynomial division is not exact");
    return q;
  }

  Poly monic(const Poly& a) const {
    if (a.is_zero()) return a;
    return scale(a, field_.inv(a.lead()));
  }

  /// Monic gcd (zero if both inputs are zero).
  Poly gcd(Poly a, Poly b) const {
    while (!b.is_zero()) {
      Poly r = mod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }

  /// Extended gcd: returns (g, s, t) with s a + t b = g, g monic.
  std::tuple<Poly, Poly, Poly> xgcd(const Poly& a, const Poly& b) const {
    Poly r0 = a, r1 = b, s0 = one(), s1{}, t0{}, t1 = one();
    while (!r1.is_zero()) {
      auto [q, r] = divmod(r0, r1);
      r0 = std::move(r1);
      r1 = std::move(r);
      Poly s2 = sub(s0, mul(q, s1)), t2 = sub(t0, mul(q, t1));
      s0 = std::move(s1);
      s1 = std::move(s2);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    FieldElem li = field_.inv(r0.lead());
    return {scale(r0, li), scale(s0, li), scale(t0, li)};
  }

  /// Inverse of a modulo f; throws if gcd(a, f) != 1.
  Poly invmod(const Poly& a, const Poly& f) const {
    auto [g, s, t] = xgcd(mod(a, f), f);
    if (g.degree() != 0) throw DomainError("polynomial not invertible modulo f");
    return mod(s, f);
  }

  Poly mulmod(const Poly& a, const Poly& b, const Poly& f) const { return mod(mul(a, b), f); }

  Poly powmod(Poly base, std::uint64_t e, const Poly& f) const {
    Poly r = mod(one(), f);
    base = mod(base, f);
    while (e) {
      if (e & 1) r = mulmod(r, base, f);
      base = mulmod(base, base, f);
      e >>= 1;
    }
    return r;
  }

  /// a(b(x)) mod f.
  Poly compose_mod(const Poly& a, const Poly& b, const Poly& f) const {
    Poly r{};
    for (std::size_t i = a.coeffs.size(); i-- > 0;) r = add(mulmod(r, b, f), constant(a.coeffs[i]));
    return mod(r, f);
  }

  Poly derivative(const Poly& a) const {
    if (a.coeffs.size() <= 1) return {};
    std::vector<FieldElem> r(a.coeffs.size() - 1);
    for (std::size_t i = 1; i < a.coeffs.size(); ++i)
      r[i - 1] = field_.mul(field_.from_int(static_cast<std::int64_t>(i)), a.coeffs[i]);
    return Poly(std::move(r));
  }

  FieldElem eval(const Poly& a, FieldElem x) const {
    FieldElem r = field_.zero();
    for (std::size_t i = a.coeffs.size(); i-- > 0;) r = field_.add(field_.mul(r, x), a.coeffs[i]);
    return r;
  }

  /// Reciprocal dual f*(x) = x^{deg f} f(1/x) / f(0); requires f(0) != 0.
  Poly reciprocal_dual(const Poly& f) const {
    if (f.is_zero() || f.coeffs[0].code == 0) throw DomainError("reciprocal dual needs f(0) != 0");
    std::vector<FieldElem> r(f.coeffs.rbegin(), f.coeffs.rend());
    return scale(Poly(std::move(r)), field_.inv(f.coeffs[0]));
  }

  bool is_squarefree(const Poly& f) const { return gcd(f, derivative(f)).degree() == 0; }

  /// x^{q^k} mod f for k = 0..kmax.
  std::vector<Poly> frobenius_powers(const Poly& f, std::size_t kmax) const {
    std::vector<Poly> out;
    out.push_back(mod(x(), f));
    for (std::size_t k = 1; k <= kmax; ++k) out.push_back(powmod(out.back(), field_.q(), f));
    return out;
  }

  /// Rabin's irreducibility test over F_q.
  bool is_irreducible(const Poly& f) const {
    const int n = f.degree();
    if (n <= 0) return false;
    if (n == 1) return true;
    auto frob = frobenius_powers(f, static_cast<std::size_t>(n));
    if (frob[n] != frob[0]) return false;
    for (std::uint64_t l : nt::prime_divisors(static_cast<std::uint64_t>(n))) {
      if (gcd(f, sub(frob[n / l], x())).degree() != 0) return false;
    }
    return true;
  }

  /// Factorization of a monic polynomial of degree >= 1 into monic
  /// irreducibles with multiplicities, sorted by (degree, coefficients).
  std::vector<PolyFactor> factor(const Poly& f, std::uint64_t seed = 0x5eedf00dULL) const {
    if (f.degree() < 1) throw DomainError("factor: degree must be >= 1");
    if (!is_monic(f)) throw DomainError("factor: polynomial must be monic");
    std::mt19937_64 rng(seed);
    std::vector<PolyFactor> out;
    for (auto& [sqf, mult] : squarefree_decomposition(f)) {
      for (auto& [part, d] : distinct_degree(sqf)) {
        std::vector<Poly> pieces;
        equal_degree(part, d, rng, pieces);
        for (auto& g : pieces) out.push_back({std::move(g), mult});
      }
    }
    std::sort(out.begin(), out.end(), [](const PolyFactor& a, const PolyFactor& b) {
      if (a.factor != b.factor) return a.factor < b.factor;
      return a.multiplicity < b.multiplicity;
    });
    return out;
  }

  /// Square-free decomposition: pairs (g_i, i) with f = prod g_i^i, g_i
  /// square-free and pairwise coprime.
  std::vector<std::pair<Poly, unsigned>> squarefree_decomposition(const Poly& f) const {
    std::vector<std::pair<Poly, unsigned>> out;
    sff(monic(f), 1, out);
    return out;
  }

  /// Distinct-degree split of a square-free monic f: pairs (g, d) where g is
  /// the product of all irreducible factors of degree d.
  std::vector<std::pair<Poly, unsigned>> distinct_degree(const Poly& f) const {
    std::vector<std::pair<Poly, unsigned>> out;
    Poly rest = f;
    Poly h = mod(x(), rest);
    unsigned d = 1;
    while (rest.degree() >= 2 * static_cast<int>(d)) {
      h = powmod(h, field_.q(), rest);
      Poly g = gcd(rest, sub(h, x()));
      if (g.degree() > 0) {
        out.emplace_back(g, d);
        rest = div_exact(rest, g);
        h = mod(h, rest);
      }
      ++d;
    }
    if (rest.degree() > 0) out.emplace_back(rest, static_cast<unsigned>(rest.degree()));
    return out;
  }

  std::string to_string(const Poly& f) const {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = f.coeffs.size(); i-- > 0;) {
      if (f.coeffs[i].code == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << coeff_str(f.coeffs[i]);
      if (i >= 1) os << "*x";
      if (i >= 2) os << "^" << i;
    }
    return os.str();
  }

 private:
  std::string coeff_str(FieldElem c) const {
    if (field_.is_prime_field()) return std::to_string(c.code);
    std::ostringstream os;
    os << "[";
    auto v = field_.coeffs(c);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "]";
    return os.str();
  }

  // p-th root of a polynomial whose exponents are all multiples of p.
  Poly pth_root(const Poly& f) const {
    const std::uint32_t p = field_.p();
    std::vector<FieldElem> r;
    for (std::size_t i = 0; i < f.coeffs.size(); i += p) {
      // a^{1/p} = a^{q/p} since Frobenius has order m.
      r.push_back(field_.pow(f.coeffs[i], static_cast<std::int64_t>(field_.q() / p)));
    }
    return Poly(std::move(r));
  }

  void sff(const Poly& f, unsigned mult, std::vector<std::pair<Poly, unsigned>>& out) const {
    Poly c = gcd(f, derivative(f));
    Poly w = div_exact(f, c);
    unsigned i = 1;
    while (w.degree() > 0) {
      Poly y = gcd(w, c);
      Poly fac = div_exact(w, y);
      if (fac.degree() > 0) out.emplace_back(fac, i * mult);
      w = y;
      c = div_exact(c, y);
      ++i;
    }
    if (c.degree() > 0) sff(pth_root(c), mult * field_.p(), out);
  }

  void equal_degree(const Poly& f, unsigned d, std::mt19937_64& rng, std::vector<Poly>& out) const {
    const int n = f.degree();
    if (n == static_cast<int>(d)) {
      out.push_back(f);
      return;
    }
    std::uniform_int_distribution<std::uint64_t> coeff(0, field_.q() - 1);
    for (;;) {
      std::vector<FieldElem> hc(static_cast<std::size_t>(n));
      for (auto& c : hc) c = field_.elem(coeff(rng));
      Poly h(std::move(hc));
      if (h.degree() < 1) continue;
      Poly g = gcd(h, f);
      if (g.degree() <= 0) {
        // h^{(q^d - 1)/2} = (h^{1 + q + ... + q^{d-1}})^{(q-1)/2}
        Poly t = mod(h, f), u = t;
        for (unsigned j = 1; j < d; ++j) {
          u = powmod(u, field_.q(), f);
          t = mulmod(t, u, f);
        }
        t = powmod(t, (field_.q() - 1) / 2, f);
        g = gcd(sub(t, one()), f);
      }
      if (g.degree() > 0 && g.degree() < n) {
        equal_degree(g, d, rng, out);
        equal_degree(div_exact(f, g), d, rng, out);
        return;
      }
    }
  }

  Field field_;
};

/// Free-function form of PolyRing::factor.
inline std::vector<PolyFactor> factor_poly(const Field& field, const Poly& f) { return PolyRing(field).factor(f); }

}  // namespace hwr

#endif  // HWR_GFQ_POLY_HPP
