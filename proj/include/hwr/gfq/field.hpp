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
 * @file field.hpp
 * @brief Exact arithmetic in F_p and F_{p^m} for odd p.
 *
 * An element of F_{p^m} = F_p[x]/(f) is stored as a single integer code
 * c = c_0 + c_1 p + ... + c_{m-1} p^{m-1}, where c_i are the coefficients of
 * its residue polynomial in the power basis 1, x, ..., x^{m-1}. The modulus f
 * is the least monic irreducible polynomial of degree m in the order induced
 * by the same encoding, so codes are reproducible across runs.
 *
 * Prime fields use plain 64-bit modular arithmetic. Extension fields keep
 * exp/log tables with respect to a stored primitive element and are limited
 * to q <= 2^22.
 */

#ifndef HWR_GFQ_FIELD_HPP
#define HWR_GFQ_FIELD_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hwr/util/numtheory.hpp"

namespace hwr {

/// Element of a finite field, tied to the Field that produced it.
struct FieldElem {
  std::uint32_t code = 0;
  friend constexpr auto operator<=>(const FieldElem&, const FieldElem&) = default;
};

/// Table of the n-th roots of unity exp(2 pi i k / n).
class RootsOfUnity {
 public:
  explicit RootsOfUnity(std::uint64_t n) : n_(n), table_(n) {
    for (std::uint64_t k = 0; k < n; ++k) {
      double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      table_[k] = {std::cos(angle), std::sin(angle)};
    }
  }
  std::uint64_t order() const { return n_; }
  const std::complex<double>& operator[](std::uint64_t k) const { return table_[k % n_]; }

 private:
  std::uint64_t n_;
  std::vector<std::complex<double>> table_;
};

namespace detail {

// Dense polynomials over F_p with coefficients stored low to high. This is
// the minimum needed to search for and verify an extension modulus before any
// Field exists.
using RawPoly = std::vector<std::uint64_t>;

inline void raw_trim(RawPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline RawPoly raw_mod(RawPoly a, const RawPoly& f, std::uint64_t p) {
  raw_trim(a);
  const std::size_t n = f.size() - 1;
  std::uint64_t lead_inv = nt::invmod(f.back(), p);
  while (a.size() > n) {
    std::uint64_t c = nt::mulmod(a.back(), lead_inv, p);
    std::size_t shift = a.size() - 1 - n;
    for (std::size_t i = 0; i <= n; ++i) {
      a[shift + i] = (a[shift + i] + p - nt::mulmod(c, f[i], p)) % p;
    }
    raw_trim(a);
  }
  return a;
}

inline RawPoly raw_mulmod(const RawPoly& a, const RawPoly& b, const RawPoly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  RawPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + nt::mulmod(a[i], b[j], p)) % p;
  return raw_mod(std::move(r), f, p);
}

inline RawPoly raw_powmod(RawPoly base, std::uint64_t e, const RawPoly& f, std::uint64_t p) {
  RawPoly r{1};
  base = raw_mod(std::move(base), f, p);
  while (e) {
    if (e & 1) r = raw_mulmod(r, base, f, p);
    base = raw_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

inline RawPoly raw_gcd(RawPoly a, RawPoly b, std::uint64_t p) {
  raw_trim(a);
  raw_trim(b);
  while (!b.empty()) {
    RawPoly r = raw_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Rabin's test: f of degree n is irreducible over F_p iff x^{p^n} = x mod f
/// and gcd(x^{p^{n/l}} - x, f) = 1 for every prime l | n.
inline bool raw_is_irreducible(const RawPoly& f, std::uint64_t p) {
  const std::size_t n = f.size() - 1;
  if (n == 0) return false;
  if (n == 1) return true;
  std::vector<RawPoly> frob(n + 1);
  frob[0] = raw_mod(RawPoly{0, 1}, f, p);
  for (std::size_t k = 1; k <= n; ++k) frob[k] = raw_powmod(frob[k - 1], p, f, p);
  if (frob[n] != frob[0]) return false;
  for (std::uint64_t l : nt::prime_divisors(n)) {
    RawPoly h = frob[n / l];
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    RawPoly g = raw_gcd(h, f, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

/**
 * The finite field F_q, q = p^m, p an odd prime.
 *
 * Immutable after construction; copies share their tables. All member
 * functions are const and safe to call concurrently.
 */
class Field {
 public:
  /// F_p for an odd prime p < 2^20.
  static Field prime(std::uint32_t p) { return Field(p, std::vector<std::uint32_t>{0, 1}); }

  /// F_{p^m} with the least irreducible modulus of degree m.
  static Field extension(std::uint32_t p, unsigned m) {
    if (m == 1) return prime(p);
    check_prime(p);
    std::uint64_t count = nt::ipow(p, m);
    for (std::uint64_t c = 0; c < count; ++c) {
      detail::RawPoly f(m + 1);
      std::uint64_t t = c;
      for (unsigned i = 0; i < m; ++i) {
        f[i] = t % p;
        t /= p;
      }
      f[m] = 1;
      if (f[0] == 0) continue;
      if (detail::raw_is_irreducible(f, p)) {
        return Field(p, std::vector<std::uint32_t>(f.begin(), f.end()));
      }
    }
    throw DomainError("no irreducible modulus found");  // unreachable
  }

  /// F_p[x]/(modulus); the monic modulus is given low to high and is
  /// verified irreducible.
  Field(std::uint32_t p, std::vector<std::uint32_t> modulus) {
    check_prime(p);
    if (modulus.size() < 2 || modulus.back() != 1)
      throw DomainError("field modulus must be monic of degree >= 1");
    for (auto c : modulus)
      if (c >= p) throw DomainError("field modulus coefficient not reduced mod p");
    detail::RawPoly raw(modulus.begin(), modulus.end());
    if (!detail::raw_is_irreducible(raw, p)) throw DomainError("field modulus is reducible");
    auto impl = std::make_shared<Impl>();
    impl->p = p;
    impl->m = static_cast<unsigned>(modulus.size() - 1);
    impl->q = nt::ipow(p, impl->m);
    if (impl->m > 1 && impl->q > (1u << 22)) throw DomainError("extension field too large (q > 2^22)");
    impl->modulus = std::move(modulus);
    impl_ = std::move(impl);
    init();
  }

  std::uint32_t p() const { return impl_->p; }
  unsigned m() const { return impl_->m; }
  std::uint64_t q() const { return impl_->q; }
  const std::vector<std::uint32_t>& modulus() const { return impl_->modulus; }
  bool is_prime_field() const { return impl_->m == 1; }

  FieldElem zero() const { return {0}; }
  FieldElem one() const { return {1}; }
  FieldElem generator() const { return impl_->generator; }

  FieldElem elem(std::uint64_t code) const {
    if (code >= impl_->q) throw DomainError("field element code out of range");
    return {static_cast<std::uint32_t>(code)};
  }

  /// Image of an integer under Z -> F_p -> F_q.
  FieldElem from_int(std::int64_t v) const {
    std::int64_t p = impl_->p;
    std::int64_t r = v % p;
    if (r < 0) r += p;
    return {static_cast<std::uint32_t>(r)};
  }

  /// Element with the given power-basis coefficients (little-endian).
  FieldElem from_coeffs(std::span<const std::uint32_t> coeffs) const {
    if (coeffs.size() > impl_->m) throw DomainError("too many coefficients for field degree");
    std::uint64_t code = 0, mult = 1;
    for (auto c : coeffs) {
      code += static_cast<std::uint64_t>(c % impl_->p) * mult;
      mult *= impl_->p;
    }
    return {static_cast<std::uint32_t>(code)};
  }

  std::vector<std::uint32_t> coeffs(FieldElem a) const {
    std::vector<std::uint32_t> out(impl_->m);
    std::uint32_t c = a.code;
    for (unsigned i = 0; i < impl_->m; ++i) {
      out[i] = c % impl_->p;
      c /= impl_->p;
    }
    return out;
  }

  bool is_zero(FieldElem a) const { return a.code == 0; }
  bool in_prime_field(FieldElem a) const { return a.code < impl_->p; }

  FieldElem add(FieldElem a, FieldElem b) const {
    const std::uint32_t p = impl_->p;
    if (impl_->m == 1) {
      std::uint32_t s = a.code + b.code;
      return {s >= p ? s - p : s};
    }
    std::uint32_t x = a.code, y = b.code, r = 0, mult = 1;
    for (unsigned i = 0; i < impl_->m; ++i) {
      std::uint32_t s = x % p + y % p;
      if (s >= p) s -= p;
      r += s * mult;
      mult *= p;
      x /= p;
      y /= p;
    }
    return {r};
  }

  FieldElem neg(FieldElem a) const {
    const std::uint32_t p = impl_->p;
    if (impl_->m == 1) return {a.code == 0 ? 0 : p - a.code};
    std::uint32_t x = a.code, r = 0, mult = 1;
    for (unsigned i = 0; i < impl_->m; ++i) {
      std::uint32_t d = x % p;
      r += (d == 0 ? 0 : p - d) * mult;
      mult *= p;
      x /= p;
    }
    return {r};
  }

  FieldElem sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }

  FieldElem mul(FieldElem a, FieldElem b) const {
    if (impl_->m == 1) {
      return {static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.code) * b.code % impl_->p)};
    }
    if (a.code == 0 || b.code == 0) return {0};
    std::uint64_t e = static_cast<std::uint64_t>(impl_->log[a.code]) + impl_->log[b.code];
    if (e >= impl_->q - 1) e -= impl_->q - 1;
    return {impl_->exp[e]};
  }

  FieldElem inv(FieldElem a) const {
    if (a.code == 0) throw DomainError("inverse of zero");
    if (impl_->m == 1) return {static_cast<std::uint32_t>(nt::invmod(a.code, impl_->p))};
    std::uint64_t l = impl_->log[a.code];
    return {impl_->exp[l == 0 ? 0 : impl_->q - 1 - l]};
  }

  FieldElem div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }

  /// a^e for any integer e (negative exponents invert).
  FieldElem pow(FieldElem a, std::int64_t e) const {
    if (e < 0) {
      a = inv(a);
      e = -e;
    }
    if (a.code == 0) return {e == 0 ? 1u : 0u};
    if (impl_->m == 1) return {static_cast<std::uint32_t>(nt::powmod(a.code, static_cast<std::uint64_t>(e), impl_->p))};
    std::uint64_t order = impl_->q - 1;
    std::uint64_t l = nt::mulmod(impl_->log[a.code], static_cast<std::uint64_t>(e) % order, order);
    return {impl_->exp[l]};
  }

  FieldElem half() const { return impl_->half; }

  /// Frobenius a -> a^p.
  FieldElem frobenius(FieldElem a) const { return pow(a, impl_->p); }

  /// Legendre character: +1 on squares, -1 on non-squares.
  int legendre(FieldElem a) const {
    if (a.code == 0) throw DomainError("legendre symbol of zero");
    if (impl_->m == 1) {
      return nt::powmod(a.code, (impl_->p - 1) / 2, impl_->p) == 1 ? 1 : -1;
    }
    return impl_->log[a.code] % 2 == 0 ? 1 : -1;
  }

  /// Absolute trace Tr_{F_q/F_p}(a) as an integer in [0, p).
  std::uint32_t trace_index(FieldElem a) const {
    if (impl_->m == 1) return a.code;
    std::uint64_t s = 0;
    std::uint32_t c = a.code;
    for (unsigned i = 0; i < impl_->m; ++i) {
      s += static_cast<std::uint64_t>(c % impl_->p) * impl_->trace_basis[i];
      c /= impl_->p;
    }
    return static_cast<std::uint32_t>(s % impl_->p);
  }

  /// Standard additive character exp(2 pi i Tr(a) / p).
  std::complex<double> psi(FieldElem a) const { return roots_p()[trace_index(a)]; }

  /// Shared table of p-th roots of unity, built on first use.
  const RootsOfUnity& roots_p() const {
    std::call_once(impl_->roots_once, [this] { impl_->roots = std::make_unique<RootsOfUnity>(impl_->p); });
    return *impl_->roots;
  }

  /// Multiplicative order of a nonzero element.
  std::uint64_t order(FieldElem a) const {
    if (a.code == 0) throw DomainError("order of zero");
    std::uint64_t n = impl_->q - 1;
    for (std::uint64_t l : nt::prime_divisors(impl_->q - 1)) {
      while (n % l == 0 && pow(a, static_cast<std::int64_t>(n / l)) == one()) n /= l;
    }
    return n;
  }

  /// Discrete log base generator(); only available for extension fields.
  std::uint64_t log(FieldElem a) const {
    if (a.code == 0) throw DomainError("log of zero");
    if (impl_->m == 1) {
      // Baby-step tables are not kept for prime fields; fall back to a scan.
      FieldElem x = one();
      for (std::uint64_t k = 0; k < impl_->q - 1; ++k) {
        if (x == a) return k;
        x = mul(x, impl_->generator);
      }
      throw DomainError("log: element not reached");
    }
    return impl_->log[a.code];
  }

  friend bool operator==(const Field& a, const Field& b) {
    return a.impl_ == b.impl_ || (a.p() == b.p() && a.modulus() == b.modulus());
  }

  std::string name() const {
    return impl_->m == 1 ? "F_" + std::to_string(impl_->p)
                         : "F_" + std::to_string(impl_->p) + "^" + std::to_string(impl_->m);
  }

 private:
  struct Impl {
    std::uint32_t p = 0;
    unsigned m = 0;
    std::uint64_t q = 0;
    std::vector<std::uint32_t> modulus;
    FieldElem generator;
    FieldElem half;
    std::vector<std::uint32_t> exp, log;
    std::vector<std::uint32_t> trace_basis;
    mutable std::once_flag roots_once;
    mutable std::unique_ptr<RootsOfUnity> roots;
  };

  static void check_prime(std::uint32_t p) {
    if (p < 3 || p % 2 == 0 || !nt::is_prime(p)) throw DomainError("field characteristic must be an odd prime");
    if (p >= (1u << 20)) throw DomainError("characteristic must be < 2^20");
  }

  detail::RawPoly raw_of(std::uint64_t code) const {
    detail::RawPoly r(impl_->m);
    for (unsigned i = 0; i < impl_->m; ++i) {
      r[i] = code % impl_->p;
      code /= impl_->p;
    }
    return r;
  }

  std::uint32_t code_of(const detail::RawPoly& r) const {
    std::uint64_t code = 0, mult = 1;
    for (std::size_t i = 0; i < r.size(); ++i) {
      code += r[i] * mult;
      mult *= impl_->p;
    }
    return static_cast<std::uint32_t>(code);
  }

  void init() {
    Impl& d = *std::const_pointer_cast<Impl>(impl_);
    const std::uint64_t order = d.q - 1;
    auto divisors = nt::prime_divisors(order);
    if (d.m == 1) {
      for (std::uint64_t g = 2; g < d.p; ++g) {
        bool ok = std::all_of(divisors.begin(), divisors.end(),
                              [&](std::uint64_t l) { return nt::powmod(g, order / l, d.p) != 1; });
        if (ok) {
          d.generator = {static_cast<std::uint32_t>(g)};
          break;
        }
      }
      d.half = {static_cast<std::uint32_t>((d.p + 1) / 2)};
      return;
    }
    detail::RawPoly f(d.modulus.begin(), d.modulus.end());
    for (std::uint64_t c = 2; c < d.q; ++c) {
      detail::RawPoly g = raw_of(c);
      bool ok = std::all_of(divisors.begin(), divisors.end(), [&](std::uint64_t l) {
        detail::RawPoly r = detail::raw_powmod(g, order / l, f, d.p);
        return !(r.size() == 1 && r[0] == 1);
      });
      if (ok) {
        d.generator = {static_cast<std::uint32_t>(c)};
        break;
      }
    }
    d.exp.assign(order, 0);
    d.log.assign(d.q, 0);
    detail::RawPoly g = raw_of(d.generator.code), x{1};
    for (std::uint64_t k = 0; k < order; ++k) {
      std::uint32_t code = code_of(x);
      d.exp[k] = code;
      d.log[code] = static_cast<std::uint32_t>(k);
      x = detail::raw_mulmod(x, g, f, d.p);
    }
    d.half = inv(from_int(2));
    // Tr(x^i) = sum_j (x^i)^{p^j}, which lies in F_p.
    d.trace_basis.assign(d.m, 0);
    for (unsigned i = 0; i < d.m; ++i) {
      std::vector<std::uint32_t> mono(d.m, 0);
      mono[i] = 1;
      FieldElem xi = from_coeffs(mono), conj = xi, s = zero();
      for (unsigned j = 0; j < d.m; ++j) {
        s = add(s, conj);
        conj = frobenius(conj);
      }
      if (!in_prime_field(s)) throw DomainError("trace left the prime field");  // cannot happen
      d.trace_basis[i] = s.code;
    }
  }

  std::shared_ptr<const Impl> impl_;
};

}  // namespace hwr

#endif  // HWR_GFQ_FIELD_HPP
