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

#ifndef HWR_GFQ_EXTENSION_BASIS_HPP
#define HWR_GFQ_EXTENSION_BASIS_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "hwr/gfq/characters.hpp"

namespace hwr {

/**
 * A basis of F_{q^d} as a vector space over a subfield F_q, with a full
 * coordinate table. Meant for the small fields used in the experiments
 * (q^d up to a few hundred thousand).
 */
class ExtensionBasis {
 public:
  /// Power basis 1, theta, ..., theta^{d-1}; theta defaults to the big
  /// field's primitive element, which generates it over every subfield.
  explicit ExtensionBasis(Embedding emb) : ExtensionBasis(emb, power_basis(emb, emb.big().generator())) {}

  ExtensionBasis(Embedding emb, std::vector<FieldElem> basis) : emb_(std::move(emb)), basis_(std::move(basis)) {
    const Field& big = emb_.big();
    const Field& small = emb_.small();
    if (basis_.size() != emb_.degree()) throw DomainError("basis size must equal the extension degree");
    table_.assign(big.q(), kUnset);
    const std::uint64_t qs = small.q();
    std::uint64_t total = big.q();
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t t = idx;
      FieldElem x = big.zero();
      for (auto b : basis_) {
        x = big.add(x, big.mul(emb_.up(small.elem(t % qs)), b));
        t /= qs;
      }
      if (table_[x.code] != kUnset) throw DomainError("basis elements are linearly dependent");
      table_[x.code] = static_cast<std::uint32_t>(idx);
    }
  }

  static std::vector<FieldElem> power_basis(const Embedding& emb, FieldElem theta) {
    std::vector<FieldElem> b;
    FieldElem x = emb.big().one();
    for (unsigned i = 0; i < emb.degree(); ++i) {
      b.push_back(x);
      x = emb.big().mul(x, theta);
    }
    return b;
  }

  const Embedding& embedding() const { return emb_; }
  const std::vector<FieldElem>& basis() const { return basis_; }
  unsigned degree() const { return emb_.degree(); }

  /// Coordinates over the small field.
  std::vector<FieldElem> coords(FieldElem x) const {
    std::uint64_t idx = table_.at(x.code);
    std::vector<FieldElem> c(basis_.size());
    const std::uint64_t qs = emb_.small().q();
    for (auto& ci : c) {
      ci = emb_.small().elem(idx % qs);
      idx /= qs;
    }
    return c;
  }

  FieldElem combine(const std::vector<FieldElem>& c) const {
    const Field& big = emb_.big();
    FieldElem x = big.zero();
    for (std::size_t i = 0; i < basis_.size(); ++i) x = big.add(x, big.mul(emb_.up(c.at(i)), basis_[i]));
    return x;
  }

 private:
  static constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  Embedding emb_;
  std::vector<FieldElem> basis_;
  std::vector<std::uint32_t> table_;
};

}  // namespace hwr

#endif  // HWR_GFQ_EXTENSION_BASIS_HPP
