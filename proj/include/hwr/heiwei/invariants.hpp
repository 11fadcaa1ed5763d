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
 * @file invariants.hpp
 * @brief Randomized property checks of the Heisenberg-Weil representation.
 */

#ifndef HWR_HEIWEI_INVARIANTS_HPP
#define HWR_HEIWEI_INVARIANTS_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "hwr/heiwei/weil.hpp"

namespace hwr {

inline FqVector random_vector(const Field& f, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, f.q() - 1);
  FqVector v(n);
  for (auto& x : v) x = f.elem(d(rng));
  return v;
}

/// Largest observed defect per property; each is compared against tol = 1e-9 q^N.
struct InvariantReport {
  std::uint64_t q = 0;
  std::size_t N = 0;
  std::size_t samples = 0;
  std::size_t trace_samples = 0;  // generic elements, where the character formula applies
  double tol = 0;
  double egorov = 0;
  double homomorphism = 0;
  double unitarity = 0;
  double trace_formula = 0;
  double orthogonality = 0;
  double parseval = 0;

  double worst() const { return std::max({egorov, homomorphism, unitarity, trace_formula, orthogonality, parseval}); }
  bool ok() const { return worst() <= tol; }

  nlohmann::json to_json() const {
    return {{"q", q},
            {"N", N},
            {"samples", samples},
            {"trace_samples", trace_samples},
            {"tol", tol},
            {"egorov", egorov},
            {"homomorphism", homomorphism},
            {"unitarity", unitarity},
            {"trace_formula", trace_formula},
            {"orthogonality", orthogonality},
            {"parseval", parseval},
            {"ok", ok()}};
  }
};

/**
 * `samples` random draws for each property:
 *   rho(g) pi(h) rho(g)^* = pi(g h), rho(g) rho(g') = rho(g g'), rho unitary,
 *   Tr rho(g) and Tr rho(g) pi(h) against the closed forms (generic g),
 *   Tr pi(v) pi(w)^* = q^N [v = w], sum_v |<phi, pi(v) phi>|^2 = q^N.
 */
inline InvariantReport weil_invariants(const SympSpace& s, std::size_t samples, std::uint64_t seed) {
  const Field& f = s.field();
  WeilRep rep(s, seed);
  InvariantReport r;
  r.q = f.q();
  r.N = s.N();
  r.samples = samples;
  r.tol = rep.tol();
  std::mt19937_64 rng(seed);
  const std::uint64_t nv = rep.dim() * rep.dim();
  std::normal_distribution<double> gauss;
  for (std::size_t t = 0; t < samples; ++t) {
    FqMatrix g = random_symplectic(s, rng), g2 = random_symplectic(s, rng);
    HeisenbergElem h{random_vector(f, s.dim(), rng), f.elem(rng() % f.q())};
    Operator a = rep.weil_op(g), b = rep.weil_op(g2);
    r.unitarity = std::max(r.unitarity, a.unitarity_defect());
    r.egorov = std::max(r.egorov, (a * rep.pi_op(h) * a.adjoint()).distance(rep.pi_op(act(g, h))));
    r.homomorphism = std::max(r.homomorphism, (a * b).distance(rep.weil_op(g * g2)));
    if (WeilRep::generic(s, g)) {
      ++r.trace_samples;
      r.trace_formula = std::max(r.trace_formula, std::abs(a.trace() - static_cast<double>(ch_rho(s, g))));
      r.trace_formula = std::max(r.trace_formula, std::abs((a * rep.pi_op(h)).trace() - ch_tau(s, g, h)));
    }
    FqVector v = random_vector(f, s.dim(), rng), w = rng() % 2 ? v : random_vector(f, s.dim(), rng);
    cplx ip = (rep.pi_op(v).matrix() * rep.pi_op(w).matrix().adjoint()).trace();
    r.orthogonality = std::max(r.orthogonality, std::abs(ip - (v == w ? static_cast<double>(rep.dim()) : 0.0)));
    Eigen::VectorXcd phi(static_cast<Eigen::Index>(rep.dim()));
    for (auto& x : phi) x = {gauss(rng), gauss(rng)};
    phi.normalize();
    auto table = rep.wigner_table(phi);
    double total = 0;
    for (std::uint64_t i = 0; i < nv; ++i) total += std::norm(table[i]);
    r.parseval = std::max(r.parseval, std::abs(total - static_cast<double>(rep.dim())));
  }
  return r;
}

}  // namespace hwr

#endif  // HWR_HEIWEI_INVARIANTS_HPP
