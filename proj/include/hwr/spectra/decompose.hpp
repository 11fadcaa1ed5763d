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
 * @file decompose.hpp
 * @brief Characters of a torus, the character-space decomposition of the
 * Weil representation restricted to it, and Wigner coefficients.
 */

#ifndef HWR_SPECTRA_DECOMPOSE_HPP
#define HWR_SPECTRA_DECOMPOSE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hwr/heiwei/weil.hpp"

namespace hwr {

/// chi(g_1^{e_1} ... g_r^{e_r}) = prod exp(2 pi i k_j e_j / n_j).
class TorusCharacter {
 public:
  TorusCharacter(std::vector<std::uint64_t> orders, std::vector<std::uint64_t> exponents)
      : orders_(std::move(orders)), exps_(std::move(exponents)) {
    if (orders_.size() != exps_.size()) throw DomainError("one exponent per cyclic factor required");
    total_ = 1;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (exps_[i] >= orders_[i]) throw DomainError("character exponent out of range");
      total_ *= orders_[i];
    }
  }

  const std::vector<std::uint64_t>& exponents() const { return exps_; }
  const std::vector<std::uint64_t>& orders() const { return orders_; }
  /// |T|; values are |T|-th roots of unity.
  std::uint64_t group_order() const { return total_; }

  /// chi(g) = exp(2 pi i index / |T|) for g with exponent tuple e.
  std::uint64_t phase_index(const std::vector<std::uint64_t>& e) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i)
      s = (s + nt::mulmod(exps_[i] * (total_ / orders_[i]) % total_, e[i] % orders_[i], total_)) % total_;
    return s;
  }

  cplx value(const std::vector<std::uint64_t>& e) const {
    double a = 2.0 * std::numbers::pi * static_cast<double>(phase_index(e)) / static_cast<double>(total_);
    return {std::cos(a), std::sin(a)};
  }

  bool is_trivial() const {
    for (auto e : exps_)
      if (e) return false;
    return true;
  }
  /// All values are +-1.
  bool is_real() const {
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if ((2 * exps_[i]) % orders_[i]) return false;
    return true;
  }
  /// The restriction to factor i is the quadratic character of that factor.
  bool is_quadratic_on(std::size_t i) const { return orders_[i] % 2 == 0 && exps_[i] == orders_[i] / 2; }

  std::string to_string() const {
    std::ostringstream s;
    for (std::size_t i = 0; i < exps_.size(); ++i) s << (i ? ";" : "") << exps_[i];
    return s.str();
  }

  friend bool operator==(const TorusCharacter&, const TorusCharacter&) = default;

 private:
  std::vector<std::uint64_t> orders_, exps_;
  std::uint64_t total_ = 1;
};

/// All |T| characters, lexicographic in the exponent tuple.
inline std::vector<TorusCharacter> torus_characters(const Torus& t) {
  std::vector<TorusCharacter> out;
  out.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out.emplace_back(t.orders(), t.exponents(i));
  return out;
}

/// Index of the unique character with values +-1, not all +1, found by
/// evaluating on every element. Empty when there is none or more than one.
inline std::optional<std::size_t> quadratic_character(const Torus& t, const std::vector<TorusCharacter>& chars) {
  std::optional<std::size_t> found;
  for (std::size_t c = 0; c < chars.size(); ++c) {
    bool real = true, trivial = true;
    for (std::size_t i = 0; i < t.size() && real; ++i) {
      cplx v = chars[c].value(t.exponents(i));
      if (std::abs(v.imag()) > 1e-9 || std::abs(std::abs(v.real()) - 1.0) > 1e-9) real = false;
      if (v.real() < 0) trivial = false;
    }
    if (!real || trivial) continue;
    if (found) return std::nullopt;
    found = c;
  }
  return found;
}

/**
 * Multiplicity predicted by the block law: 2^l with l the number of split
 * blocks on which chi restricts to the quadratic character, and 0 if chi
 * restricts to the quadratic character of an inert block. Needs a torus
 * with one generator per block.
 */
inline std::optional<std::uint64_t> predicted_multiplicity(const Torus& t, const TorusCharacter& chi) {
  if (!t.kind() || t.kind()->blocks.size() != t.orders().size()) return std::nullopt;
  std::uint64_t m = 1;
  for (std::size_t a = 0; a < t.orders().size(); ++a) {
    if (!chi.is_quadratic_on(a)) continue;
    if (t.kind()->blocks[a].type == BlockKind::Type::Inert) return 0;
    m *= 2;
  }
  return m;
}

struct EigenDecomposition {
  std::vector<TorusCharacter> characters;
  std::vector<std::uint64_t> multiplicities;
  std::vector<double> raw_traces;
  std::vector<Operator> projectors;
  std::vector<Eigen::MatrixXcd> eigenbases;  // dim x m_chi, orthonormal columns

  std::uint64_t total_dimension() const {
    std::uint64_t s = 0;
    for (auto m : multiplicities) s += m;
    return s;
  }
};

namespace detail {

/// Modified Gram-Schmidt over the columns of p, largest first, keeping m.
inline Eigen::MatrixXcd projector_basis(const Eigen::MatrixXcd& p, std::uint64_t m) {
  const Eigen::Index dim = p.rows();
  Eigen::MatrixXcd q(dim, static_cast<Eigen::Index>(m));
  if (m == 0) return q;
  Eigen::VectorXd norms = p.colwise().norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return norms(a) > norms(b); });
  Eigen::Index got = 0;
  for (Eigen::Index c : order) {
    if (got == static_cast<Eigen::Index>(m)) break;
    Eigen::VectorXcd v = p.col(c);
    for (Eigen::Index j = 0; j < got; ++j) v -= q.col(j).dot(v) * q.col(j);
    double n = v.norm();
    if (n < 1e-6) continue;
    q.col(got++) = v / n;
  }
  if (got != static_cast<Eigen::Index>(m)) throw std::runtime_error("projector columns do not span its trace");
  return q;
}

}  // namespace detail

/**
 * P_chi = |T|^-1 sum_g chi(g)^-1 rho(g), assembled as a product over the
 * cyclic factors of the per-factor spectral projectors.
 */
inline EigenDecomposition decompose(const WeilRep& rep, const Torus& t, std::uint64_t max_dim = 343) {
  if (rep.dim() > max_dim) throw DomainError("decompose: q^N exceeds " + std::to_string(max_dim));
  const auto dim = static_cast<Eigen::Index>(rep.dim());
  const auto& orders = t.orders();
  // factor_proj[i][k] = n_i^-1 sum_j exp(-2 pi i jk / n_i) rho(g_i)^j
  std::vector<std::vector<Eigen::MatrixXcd>> factor_proj(orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const std::uint64_t n = orders[i];
    RootsOfUnity zeta(n);
    Eigen::MatrixXcd r = rep.weil_op(t.generators()[i]).matrix();
    std::vector<Eigen::MatrixXcd> acc(n, Eigen::MatrixXcd::Zero(dim, dim));
    Eigen::MatrixXcd pw = Eigen::MatrixXcd::Identity(dim, dim);
    for (std::uint64_t j = 0; j < n; ++j) {
      for (std::uint64_t k = 0; k < n; ++k) acc[k] += std::conj(zeta[(j * k) % n]) * pw;
      pw = pw * r;
    }
    if (Operator::max_abs(pw - Eigen::MatrixXcd::Identity(dim, dim)) > rep.tol())
      throw std::runtime_error("rho(g)^n != I for a torus generator");
    for (auto& a : acc) a /= static_cast<double>(n);
    factor_proj[i] = std::move(acc);
  }
  EigenDecomposition out;
  out.characters = torus_characters(t);
  for (const auto& chi : out.characters) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(dim, dim);
    for (std::size_t i = 0; i < orders.size(); ++i) p = p * factor_proj[i][chi.exponents()[i]];
    double tr = p.trace().real();
    double rounded = std::round(tr);
    if (std::abs(tr - rounded) > 0.01 || rounded < 0)
      throw std::runtime_error("projector trace " + std::to_string(tr) + " is not an integer");
    auto m = static_cast<std::uint64_t>(rounded);
    out.raw_traces.push_back(tr);
    out.multiplicities.push_back(m);
    out.eigenbases.push_back(detail::projector_basis(p, m));
    out.projectors.emplace_back(std::move(p), rep.tol());
  }
  return out;
}

/// <phi | pi(v) phi>.
inline cplx wigner(const WeilRep& rep, const Eigen::VectorXcd& phi, const FqVector& v) {
  if (std::abs(phi.norm() - 1.0) > 1e-9) throw DomainError("wigner: phi must be a unit vector");
  return phi.dot(rep.pi_op(v) * phi);
}

/// Rows (p, m, N, torus_descriptor, chi_exponents, multiplicity).
inline std::string multiplicity_csv_header() { return "p,m,N,torus,chi,multiplicity"; }

inline std::vector<std::string> multiplicity_csv_rows(const Torus& t, const EigenDecomposition& d) {
  const Field& f = t.field();
  std::vector<std::string> rows;
  for (std::size_t c = 0; c < d.characters.size(); ++c) {
    std::ostringstream s;
    s << f.p() << ',' << f.m() << ',' << t.space().N() << ',' << t.descriptor() << ',' << d.characters[c].to_string()
      << ',' << d.multiplicities[c];
    rows.push_back(s.str());
  }
  return rows;
}

}  // namespace hwr

#endif  // HWR_SPECTRA_DECOMPOSE_HPP
