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
 * @file density.hpp
 * @brief Frequencies of the symplectic rank of A mod p over primes p <= x.
 *
 * Only the characteristic polynomial is reduced and factored; no torus or
 * representation is built, so x = 10^5 runs in seconds.
 */

#ifndef HWR_CATMAP_DENSITY_HPP
#define HWR_CATMAP_DENSITY_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hwr/catmap/lattice.hpp"
#include "hwr/util/parallel.hpp"

namespace hwr {

struct DensityPrime {
  std::uint32_t p = 0;
  unsigned r = 0;  // 0 when skipped
  std::string kind;
  std::string skipped_reason;
};

struct DensityReport {
  nlohmann::json matrix;
  std::uint64_t x = 0;
  std::size_t N = 0;
  std::vector<DensityPrime> primes;
  std::vector<std::uint64_t> counts, counts_half;  // index r - 1; half: primes <= x / 2

  std::uint64_t used() const { return total(counts); }
  std::uint64_t skipped() const { return primes.size() - used(); }

  /// delta(r) at x, or at x / 2.
  double delta(unsigned r, bool half = false) const {
    const auto& c = half ? counts_half : counts;
    const std::uint64_t t = total(c);
    return t == 0 || r < 1 || r > c.size() ? 0.0 : static_cast<double>(c[r - 1]) / static_cast<double>(t);
  }

  /// max_r |delta(r; x) - delta(r; x/2)|.
  double max_shift() const {
    double s = 0;
    for (unsigned r = 1; r <= N; ++r) s = std::max(s, std::abs(delta(r) - delta(r, true)));
    return s;
  }

  static std::string csv_header() { return "p,r_p,torus,skipped_reason"; }
  std::vector<std::string> csv_rows() const {
    std::vector<std::string> out;
    out.reserve(primes.size());
    for (auto& d : primes)
      out.push_back(std::to_string(d.p) + "," + (d.r ? std::to_string(d.r) : "") + "," + d.kind + "," +
                    d.skipped_reason);
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"A", matrix}, {"max_prime", x}, {"N", N}, {"primes_used", used()}, {"primes_skipped", skipped()}};
    nlohmann::json delta_j = nlohmann::json::object(), half_j = nlohmann::json::object();
    for (unsigned r = 1; r <= N; ++r) {
      delta_j[std::to_string(r)] = delta(r);
      half_j[std::to_string(r)] = delta(r, true);
    }
    j["delta"] = delta_j;
    j["delta_half"] = half_j;
    j["max_shift"] = max_shift();
    return j;
  }

 private:
  static std::uint64_t total(const std::vector<std::uint64_t>& c) {
    std::uint64_t t = 0;
    for (auto v : c) t += v;
    return t;
  }
};

inline DensityPrime rank_at_prime(const LatticeAutomorphism& a, const bigint& disc, std::uint32_t p) {
  DensityPrime d;
  d.p = p;
  if (disc % p == 0) {
    d.skipped_reason = "p divides disc(charpoly)";
    return d;
  }
  Field k = Field::prime(p);
  auto kind = rank_from_charpoly(k, a.charpoly().mod_p(k));
  if (!kind) {
    d.skipped_reason = "characteristic polynomial not regular mod p";
    return d;
  }
  d.r = static_cast<unsigned>(kind->blocks.size());
  d.kind = sorted_kind(*kind).to_string();
  return d;
}

/// Empirical delta(r) over odd primes p <= x with p not dividing the discriminant.
inline DensityReport rank_density_sweep(const LatticeAutomorphism& a, std::uint32_t x, std::size_t jobs = 1) {
  const bigint disc = a.disc();
  if (disc == 0) throw DomainError("rank_density_sweep: A is not regular");
  DensityReport rep;
  rep.matrix = a.to_json();
  rep.x = x;
  rep.N = a.N();
  rep.counts.assign(rep.N, 0);
  rep.counts_half.assign(rep.N, 0);
  auto ps = nt::primes_up_to(x, 3);
  rep.primes.resize(ps.size());
  parallel_for(ps.size(), jobs, [&](std::size_t i) { rep.primes[i] = rank_at_prime(a, disc, ps[i]); });
  for (auto& d : rep.primes) {
    if (!d.r) continue;
    ++rep.counts[d.r - 1];
    if (d.p <= x / 2) ++rep.counts_half[d.r - 1];
  }
  return rep;
}

}  // namespace hwr

#endif  // HWR_CATMAP_DENSITY_HPP
