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
 * @file lattice.hpp
 * @brief Integer symplectic matrices and their characteristic polynomials.
 *
 * Exact arithmetic throughout (cpp_int). Irreducibility over Q is decided
 * by reduction mod small primes with an exact fallback for degree <= 4.
 */

#ifndef HWR_CATMAP_LATTICE_HPP
#define HWR_CATMAP_LATTICE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "hwr/symp/module.hpp"
#include "hwr/util/numtheory.hpp"

namespace hwr {

using bigint = boost::multiprecision::cpp_int;

/// Integer polynomial, coefficients low to high, trimmed.
class ZPoly {
 public:
  ZPoly() = default;
  explicit ZPoly(std::vector<bigint> c) : c_(std::move(c)) { trim(); }
  static ZPoly from_ints(const std::vector<std::int64_t>& c) {
    std::vector<bigint> b(c.begin(), c.end());
    return ZPoly(std::move(b));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<bigint>& coeffs() const { return c_; }
  bigint operator[](std::size_t i) const { return i < c_.size() ? c_[i] : bigint(0); }
  const bigint& lead() const { return c_.back(); }

  friend bool operator==(const ZPoly&, const ZPoly&) = default;

  friend ZPoly operator*(const ZPoly& a, const ZPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<bigint> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return ZPoly(std::move(r));
  }

  /// Exact division by a monic polynomial; nullopt when it leaves a remainder.
  std::optional<ZPoly> div_monic(const ZPoly& d) const {
    if (d.is_zero() || d.lead() != 1) throw DomainError("div_monic: divisor must be monic");
    std::vector<bigint> r = c_;
    if (degree() < d.degree()) return is_zero() ? std::optional<ZPoly>(ZPoly{}) : std::nullopt;
    std::vector<bigint> quot(r.size() - d.c_.size() + 1);
    for (std::size_t k = quot.size(); k-- > 0;) {
      bigint t = r[k + d.c_.size() - 1];
      quot[k] = t;
      for (std::size_t j = 0; j < d.c_.size(); ++j) r[k + j] -= t * d.c_[j];
    }
    for (auto& x : r)
      if (x != 0) return std::nullopt;
    return ZPoly(std::move(quot));
  }

  ZPoly derivative() const {
    std::vector<bigint> r;
    for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * static_cast<long long>(i));
    return ZPoly(std::move(r));
  }

  /// x^deg f(1/x), scaled to be monic when f(0) = +-1.
  ZPoly reciprocal() const {
    std::vector<bigint> r(c_.rbegin(), c_.rend());
    ZPoly out(std::move(r));
    if (!out.is_zero() && out.lead() == -1)
      for (auto& x : out.c_) x = -x;
    return out;
  }

  /// Reduction into F_p[x].
  Poly mod_p(const Field& f) const {
    const bigint p = f.p();
    std::vector<FieldElem> out;
    for (auto& x : c_) {
      bigint r = x % p;
      if (r < 0) r += p;
      out.push_back(f.from_int(r.convert_to<std::int64_t>()));
    }
    return Poly(std::move(out));
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      bigint a = abs(c_[i]);
      s += c_[i] < 0 ? (s.empty() ? "-" : " - ") : (s.empty() ? "" : " + ");
      if (a != 1 || i == 0) s += a.str();
      if (i >= 1) s += "x";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<bigint> c_;
};

namespace detail {

/// Fraction-free Gaussian elimination.
inline bigint bareiss_det(std::vector<std::vector<bigint>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  bigint sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && m[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(m[k], m[s]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

inline std::vector<bigint> divisors(bigint n) {
  n = abs(n);
  std::vector<bigint> out;
  for (bigint d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    if (d * d != n) out.push_back(n / d);
  }
  return out;
}

}  // namespace detail

/// Res(f, g) through the Sylvester matrix.
inline bigint resultant(const ZPoly& f, const ZPoly& g) {
  const int m = f.degree(), n = g.degree();
  if (m < 0 || n < 0) return 0;
  const auto size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<bigint>> s(size, std::vector<bigint>(size, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s[i][i + j] = f[static_cast<std::size_t>(m - j)];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s[n + i][i + j] = g[static_cast<std::size_t>(n - j)];
  return detail::bareiss_det(std::move(s));
}

inline bigint discriminant(const ZPoly& f) {
  const int n = f.degree();
  if (n < 1) throw DomainError("discriminant of a constant");
  bigint r = resultant(f, f.derivative()) / f.lead();
  return (n * (n - 1) / 2) % 2 ? bigint(-r) : r;
}

inline bool is_perfect_square(const bigint& n) {
  if (n < 0) return false;
  bigint r = boost::multiprecision::sqrt(n);
  return r * r == n;
}

/**
 * Irreducible factors over Q of a monic integer polynomial. Factors found
 * irreducible mod a good prime are final; otherwise degree <= 4 pieces are
 * split exactly (integer roots, then quadratic pairs). Larger undecided
 * pieces raise DomainError.
 */
inline std::vector<ZPoly> factor_over_q(const ZPoly& f) {
  if (f.is_zero() || f.lead() != 1) throw DomainError("factor_over_q: monic input required");
  auto irreducible_mod_some_prime = [](const ZPoly& g) {
    if (g.degree() <= 1) return true;
    bigint disc = discriminant(g);
    if (disc == 0) return false;
    for (auto p : nt::primes_up_to(200, 3)) {
      if (disc % p == 0) continue;
      Field k = Field::prime(static_cast<std::uint32_t>(p));
      if (PolyRing(k).is_irreducible(g.mod_p(k))) return true;
    }
    return false;
  };
  std::vector<ZPoly> out;
  ZPoly g = f;
  // Linear factors: integer roots divide the constant term.
  bool again = true;
  while (again && g.degree() >= 1) {
    again = false;
    if (g[0] == 0) {
      out.push_back(ZPoly({0, 1}));
      g = *g.div_monic(out.back());
      again = true;
      continue;
    }
    for (auto& d : detail::divisors(g[0])) {
      for (const bigint& r : {d, bigint(-d)}) {
        ZPoly lin({bigint(-r), bigint(1)});
        if (auto q = g.div_monic(lin)) {
          out.push_back(lin);
          g = *q;
          again = true;
          break;
        }
      }
      if (again) break;
    }
  }
  if (g.degree() < 1) return out;
  if (g.degree() <= 3 || irreducible_mod_some_prime(g)) {
    out.push_back(g);
    return out;
  }
  if (g.degree() == 4) {
    // (x^2 + a x + b)(x^2 + c x + d): b d = g0, so b runs over divisors.
    for (auto& d0 : detail::divisors(g[0])) {
      for (const bigint& b : {d0, bigint(-d0)}) {
        const bigint d = g[0] / b;
        // a + c = g3, a d + b c = g1; solve when b != d, else use the x^2 coefficient.
        std::vector<bigint> as;
        if (b != d) {
          bigint num = g[1] - b * g[3];
          if (num % (d - b) != 0) continue;
          as.push_back(num / (d - b));
        } else {
          // a c = g2 - 2b, a + c = g3: integer roots of t^2 - g3 t + (g2 - 2b).
          bigint disc = g[3] * g[3] - 4 * (g[2] - 2 * b);
          if (!is_perfect_square(disc)) continue;
          bigint s = boost::multiprecision::sqrt(disc);
          if ((g[3] + s) % 2 != 0) continue;
          as.push_back((g[3] + s) / 2);
        }
        for (auto& a : as) {
          ZPoly q1({b, a, 1});
          if (auto q2 = g.div_monic(q1)) {
            out.push_back(q1);
            out.push_back(*q2);
            return out;
          }
        }
      }
    }
    out.push_back(g);
    return out;
  }
  throw DomainError("factor_over_q: cannot decide irreducibility in degree " + std::to_string(g.degree()));
}

inline bool is_irreducible_over_q(const ZPoly& f) { return factor_over_q(f).size() == 1; }

using IntMatrix = std::vector<std::vector<std::int64_t>>;

struct Genericity {
  bool regular = false;
  bool strongly_generic = false;
  bool generic = false;
};

/**
 * A in Sp(2N, Z). The symplectic form is the standard J = [[0, I], [-I, 0]]
 * on (x, xi) coordinates, matching SympSpace's default Gram matrix.
 */
class LatticeAutomorphism {
 public:
  explicit LatticeAutomorphism(IntMatrix mat) : mat_(std::move(mat)) {
    const std::size_t n = mat_.size();
    if (n == 0 || n % 2) throw DomainError("lattice automorphism: even, nonzero dimension required");
    for (auto& row : mat_)
      if (row.size() != n) throw DomainError("lattice automorphism: matrix is not square");
    if (!is_symplectic()) throw DomainError("lattice automorphism: matrix is not symplectic over Z");
    charpoly_ = compute_charpoly();
  }

  static LatticeAutomorphism from_json(const nlohmann::json& j) {
    const nlohmann::json& m = j.is_object() ? j.at("A") : j;
    if (!m.is_array()) throw DomainError("lattice automorphism: expected an array of rows");
    IntMatrix mat;
    for (auto& row : m) {
      if (!row.is_array()) throw DomainError("lattice automorphism: expected an array of rows");
      std::vector<std::int64_t> r;
      for (auto& x : row) {
        if (!x.is_number_integer()) throw DomainError("lattice automorphism: integer entries required");
        r.push_back(x.get<std::int64_t>());
      }
      mat.push_back(std::move(r));
    }
    return LatticeAutomorphism(std::move(mat));
  }

  nlohmann::json to_json() const { return mat_; }

  const IntMatrix& mat() const { return mat_; }
  std::size_t dim() const { return mat_.size(); }
  std::size_t N() const { return mat_.size() / 2; }
  const ZPoly& charpoly() const { return charpoly_; }
  bigint disc() const { return discriminant(charpoly_); }

  FqMatrix mod_p(const Field& f) const {
    std::vector<std::int64_t> flat;
    for (auto& row : mat_) flat.insert(flat.end(), row.begin(), row.end());
    return FqMatrix::from_ints(f, dim(), dim(), flat);
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j)
        if (mat_[i][j] != (i == j)) return false;
    return true;
  }

 private:
  bool is_symplectic() const {
    const std::size_t n = dim(), h = n / 2;
    auto jmat = [&](std::size_t i, std::size_t j) -> bigint {
      if (i < h && j == i + h) return 1;
      if (i >= h && j + h == i) return -1;
      return 0;
    };
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        bigint s = 0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            bigint jj = jmat(i, j);
            if (jj != 0) s += bigint(mat_[i][a]) * jj * mat_[j][b];
          }
        if (s != jmat(a, b)) return false;
      }
    return true;
  }

  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
  ZPoly compute_charpoly() const {
    const std::size_t n = dim();
    using Mat = std::vector<std::vector<bigint>>;
    Mat a(n, std::vector<bigint>(n)), m(n, std::vector<bigint>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i][j] = mat_[i][j];
    std::vector<bigint> c(n + 1, 0);
    c[n] = 1;
    for (std::size_t k = 1; k <= n; ++k) {
      Mat next(n, std::vector<bigint>(n, 0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          bigint s = 0;
          for (std::size_t l = 0; l < n; ++l) s += a[i][l] * m[l][j];
          next[i][j] = s + (i == j ? c[n - k + 1] : bigint(0));
        }
      m = std::move(next);
      bigint tr = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
      c[n - k] = -tr / static_cast<long long>(k);
    }
    return ZPoly(std::move(c));
  }

  IntMatrix mat_;
  ZPoly charpoly_;
};

/**
 * Regular: charpoly squarefree over Q (nonzero discriminant). Strongly
 * generic: irreducible over Q. Generic: regular, and every rational factor
 * is its own reciprocal dual; a factor g != g* would span an invariant
 * isotropic subspace ker g(A).
 */
inline Genericity check_genericity(const LatticeAutomorphism& a) {
  Genericity g;
  const ZPoly& f = a.charpoly();
  g.regular = discriminant(f) != 0;
  auto factors = factor_over_q(f);
  g.strongly_generic = g.regular && factors.size() == 1;
  g.generic = g.regular;
  for (auto& h : factors)
    if (h.reciprocal() != h) g.generic = false;
  return g;
}

/**
 * The Sp(4, Z) element used for density sweeps: [[0, I], [-I, S]] with S
 * symmetric. Its eigenvalues satisfy lambda + 1/lambda = eig(S), so with
 * disc(det(y - S)) a non-square the quartic is irreducible and the two
 * roots of det(y - S) mod p decide the rank. First hit in a fixed scan.
 */
inline LatticeAutomorphism density_test_element() {
  for (std::int64_t s11 = 2; s11 <= 6; ++s11)
    for (std::int64_t s22 = s11; s22 <= 6; ++s22)
      for (std::int64_t s12 = 1; s12 <= 3; ++s12) {
        const std::int64_t tr = s11 + s22, det = s11 * s22 - s12 * s12;
        if (is_perfect_square(bigint(tr * tr - 4 * det))) continue;
        // Both eigenvalues of S outside [-2, 2]: hyperbolic.
        if (det <= 0 || tr - 2 <= 0 || det - 2 * tr + 4 <= 0 || s11 + s22 <= 4) continue;
        LatticeAutomorphism a({{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, s11, s12}, {0, -1, s12, s22}});
        if (check_genericity(a).strongly_generic) return a;
      }
  throw DomainError("density_test_element: scan exhausted");
}

}  // namespace hwr

#endif  // HWR_CATMAP_LATTICE_HPP
