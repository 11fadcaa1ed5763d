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
 * @file norm_one.hpp
 * @brief The sign of -det(g - I) on rank-one tori.
 *
 * For c of norm one in F_{q^2}, c != 1:
 *   ((c - 1)^2 / c)^{(q-1)/2} = -c^{(q+1)/2},
 * i.e. sigma(-det(g - I)) = -sigma_T(g) on an inert torus. For c in F_q^*,
 * c != 1, the same left side equals +c^{(q-1)/2} = sigma_T(g).
 */

#ifndef HWR_SPECTRA_NORM_ONE_HPP
#define HWR_SPECTRA_NORM_ONE_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "hwr/gfq/field.hpp"
#include "hwr/util/numtheory.hpp"

namespace hwr {

struct NormOneResult {
  std::uint64_t q = 0;
  std::uint64_t inert_checked = 0, inert_failures = 0;
  std::uint64_t split_checked = 0, split_failures = 0;
  bool ok() const { return inert_failures == 0 && split_failures == 0; }
};

inline NormOneResult check_norm_one_sign(std::uint32_t p, unsigned m) {
  if (p == 2) throw DomainError("odd characteristic required");
  const Field big = Field::extension(p, 2 * m);
  const std::uint64_t q = nt::ipow(p, m);
  NormOneResult r;
  r.q = q;
  const FieldElem gamma = big.generator();
  const auto e_minus = static_cast<std::int64_t>((q - 1) / 2), e_plus = static_cast<std::int64_t>((q + 1) / 2);
  auto lhs = [&](FieldElem c) {
    FieldElem cm1 = big.sub(c, big.one());
    return big.pow(big.div(big.mul(cm1, cm1), c), e_minus);
  };
  // Norm-one group: powers of gamma^{q-1}.
  const FieldElem u = big.pow(gamma, static_cast<std::int64_t>(q - 1));
  FieldElem c = u;
  for (std::uint64_t k = 1; k <= q; ++k, c = big.mul(c, u)) {
    ++r.inert_checked;
    if (lhs(c) != big.neg(big.pow(c, e_plus))) ++r.inert_failures;
  }
  // F_q^*: powers of gamma^{q+1}.
  const FieldElem w = big.pow(gamma, static_cast<std::int64_t>(q + 1));
  c = w;
  for (std::uint64_t k = 1; k + 1 < q; ++k, c = big.mul(c, w)) {
    ++r.split_checked;
    if (lhs(c) != big.pow(c, e_minus)) ++r.split_failures;
  }
  return r;
}

/// (p, m) for all odd prime powers p^m <= bound.
inline std::vector<std::pair<std::uint32_t, unsigned>> odd_prime_powers(std::uint64_t bound) {
  std::vector<std::pair<std::uint32_t, unsigned>> out;
  for (auto p : nt::primes_up_to(static_cast<std::uint32_t>(bound), 3)) {
    std::uint64_t q = p;
    for (unsigned m = 1; q <= bound; ++m, q *= p) out.emplace_back(static_cast<std::uint32_t>(p), m);
  }
  std::sort(out.begin(), out.end(), [](auto a, auto b) { return nt::ipow(a.first, a.second) < nt::ipow(b.first, b.second); });
  return out;
}

}  // namespace hwr

#endif  // HWR_SPECTRA_NORM_ONE_HPP
