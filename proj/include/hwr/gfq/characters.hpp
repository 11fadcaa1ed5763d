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

#ifndef HWR_GFQ_CHARACTERS_HPP
#define HWR_GFQ_CHARACTERS_HPP

#include <complex>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hwr/gfq/field.hpp"

namespace hwr {

/// Quadratic character of F_q^*; throws on zero.
inline int legendre_sigma(const Field& field, FieldElem a) { return field.legendre(a); }

/// exp(2 pi i Tr_{F_q/F_p}(t) / p).
inline std::complex<double> additive_psi(const Field& field, FieldElem t) { return field.psi(t); }

/**
 * Embedding of a subfield F_{p^a} into F_{p^b}, a | b.
 *
 * The image of the small field's generator x is the root of its modulus in
 * the big field with the least code, so the embedding is reproducible.
 */
class Embedding {
 public:
  Embedding(Field small, Field big) : small_(std::move(small)), big_(std::move(big)) {
    if (small_.p() != big_.p() || big_.m() % small_.m() != 0)
      throw DomainError("subfield embedding needs equal characteristic and dividing degrees");
    degree_ = big_.m() / small_.m();
    const std::uint64_t qs = small_.q();
    FieldElem beta = big_.zero();
    if (!small_.is_prime_field()) {
      // Candidates: the multiplicative group of the unique subfield of size qs.
      const std::uint64_t step = (big_.q() - 1) / (qs - 1);
      const FieldElem h = big_.pow(big_.generator(), static_cast<std::int64_t>(step));
      bool found = false;
      FieldElem y = big_.one();
      for (std::uint64_t k = 0; k + 1 < qs; ++k, y = big_.mul(y, h)) {
        if (eval_modulus(y) == big_.zero() && (!found || y.code < beta.code)) {
          beta = y;
          found = true;
        }
      }
      if (!found) throw DomainError("no root of the subfield modulus");  // cannot happen
    }
    up_.resize(qs);
    down_.reserve(qs);
    for (std::uint64_t c = 0; c < qs; ++c) {
      FieldElem img = big_.zero();
      if (small_.is_prime_field()) {
        img = big_.from_int(static_cast<std::int64_t>(c));
      } else {
        auto digits = small_.coeffs(small_.elem(c));
        FieldElem pw = big_.one();
        for (auto d : digits) {
          img = big_.add(img, big_.mul(big_.from_int(d), pw));
          pw = big_.mul(pw, beta);
        }
      }
      up_[c] = img;
      down_.emplace(img.code, static_cast<std::uint32_t>(c));
    }
  }

  const Field& small() const { return small_; }
  const Field& big() const { return big_; }
  unsigned degree() const { return degree_; }

  FieldElem up(FieldElem a) const { return up_.at(a.code); }

  bool in_image(FieldElem a) const { return down_.count(a.code) != 0; }

  FieldElem down(FieldElem a) const {
    auto it = down_.find(a.code);
    if (it == down_.end()) throw DomainError("element does not lie in the subfield");
    return {it->second};
  }

  /// Relative trace: sum of the conjugates a^{qs^j}, j < degree.
  FieldElem trace(FieldElem a) const {
    FieldElem s = big_.zero(), c = a;
    for (unsigned j = 0; j < degree_; ++j) {
      s = big_.add(s, c);
      c = big_.pow(c, static_cast<std::int64_t>(small_.q()));
    }
    return down(s);
  }

  /// Relative norm: product of the conjugates.
  FieldElem norm(FieldElem a) const {
    if (a.code == 0) return small_.zero();
    // N(a) = a^{(qb - 1)/(qs - 1)}
    return down(big_.pow(a, static_cast<std::int64_t>((big_.q() - 1) / (small_.q() - 1))));
  }

 private:
  FieldElem eval_modulus(FieldElem y) const {
    const auto& f = small_.modulus();
    FieldElem r = big_.zero();
    for (std::size_t i = f.size(); i-- > 0;) r = big_.add(big_.mul(r, y), big_.from_int(f[i]));
    return r;
  }

  Field small_, big_;
  unsigned degree_ = 1;
  std::vector<FieldElem> up_;
  std::unordered_map<std::uint32_t, std::uint32_t> down_;
};

/// (Tr, N) of a in big down to small.
inline std::pair<FieldElem, FieldElem> trace_norm(const Field& big, const Field& small, FieldElem a) {
  Embedding e(small, big);
  return {e.trace(a), e.norm(a)};
}

/// Element as its little-endian coefficient array.
inline nlohmann::json to_json(const Field& field, FieldElem a) { return field.coeffs(a); }

inline FieldElem elem_from_json(const Field& field, const nlohmann::json& j) {
  auto c = j.get<std::vector<std::uint32_t>>();
  for (auto v : c)
    if (v >= field.p()) throw DomainError("coefficient not reduced mod p");
  return field.from_coeffs(c);
}

}  // namespace hwr

#endif  // HWR_GFQ_CHARACTERS_HPP
