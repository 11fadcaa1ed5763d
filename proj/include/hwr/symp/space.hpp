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
 * @file space.hpp
 * @brief Symplectic spaces over F_q and the group Sp(2N, F_q).
 *
 * The standard form is omega(u, v) = u^T J v with J = [[0, I], [-I, 0]], so
 * the first N basis vectors e_i and the last N vectors f_i satisfy
 * omega(e_i, f_j) = delta_ij.
 */

#ifndef HWR_SYMP_SPACE_HPP
#define HWR_SYMP_SPACE_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "hwr/symp/matrix.hpp"

namespace hwr {

inline FqMatrix standard_gram(const Field& f, std::size_t n) {
  FqMatrix j(f, 2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    j(i, n + i) = f.one();
    j(n + i, i) = f.from_int(-1);
  }
  return j;
}

/**
 * Symplectic Gram-Schmidt. Given vectors spanning a subspace on which the
 * form with Gram matrix `gram` is nondegenerate, returns e_1..e_n, f_1..f_n
 * (in that order) with omega(e_i, f_j) = delta_ij and all other pairings 0.
 */
inline std::vector<FqVector> symplectic_gram_schmidt(const FqMatrix& gram, std::vector<FqVector> span) {
  const Field& f = gram.field();
  auto omega = [&](const FqVector& u, const FqVector& v) {
    FieldElem s = f.zero();
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i].code == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) s = f.add(s, f.mul(u[i], f.mul(gram(i, j), v[j])));
    }
    return s;
  };
  std::vector<FqVector> es, fs;
  while (true) {
    std::size_t i = 0;
    while (i < span.size() && vec_is_zero(span[i])) ++i;
    if (i == span.size()) break;
    FqVector e = span[i];
    std::size_t j = 0;
    FieldElem w = f.zero();
    for (; j < span.size(); ++j) {
      w = omega(e, span[j]);
      if (w.code) break;
    }
    if (j == span.size()) throw DomainError("form is degenerate on the given span");
    FqVector fv = vec_scale(f, span[j], f.inv(w));
    for (auto& x : span) {
      // x - omega(x, f) e + omega(x, e) f is orthogonal to both e and f.
      FieldElem a = omega(x, fv), b = omega(x, e);
      x = vec_add(f, vec_sub(f, x, vec_scale(f, e, a)), vec_scale(f, fv, b));
    }
    es.push_back(std::move(e));
    fs.push_back(std::move(fv));
  }
  es.insert(es.end(), fs.begin(), fs.end());
  return es;
}

/// (V, omega) of dimension 2N over F_q.
class SympSpace {
 public:
  SympSpace(Field field, std::size_t n) : field_(std::move(field)), n_(n), gram_(standard_gram(field_, n)),
        basis_(FqMatrix::identity(field_, 2 * n)), basis_inv_(basis_) {
    if (n == 0) throw DomainError("symplectic space needs N >= 1");
  }

  SympSpace(Field field, FqMatrix gram) : field_(std::move(field)), n_(gram.rows() / 2), gram_(std::move(gram)),
        basis_(field_, 0, 0), basis_inv_(field_, 0, 0) {
    if (!gram_.square() || gram_.rows() % 2 || gram_.rows() == 0) throw DomainError("gram must be square of even size");
    for (std::size_t i = 0; i < gram_.rows(); ++i) {
      if (gram_(i, i).code) throw DomainError("gram must have zero diagonal");
      for (std::size_t j = 0; j < i; ++j)
        if (gram_(i, j) != field_.neg(gram_(j, i))) throw DomainError("gram must be antisymmetric");
    }
    if (gram_.det().code == 0) throw DomainError("gram must be invertible");
    std::vector<FqVector> std_basis;
    for (std::size_t i = 0; i < gram_.rows(); ++i) {
      FqVector e(gram_.rows(), field_.zero());
      e[i] = field_.one();
      std_basis.push_back(e);
    }
    basis_ = FqMatrix::from_columns(field_, symplectic_gram_schmidt(gram_, std_basis));
    basis_inv_ = basis_.inverse();
  }

  const Field& field() const { return field_; }
  std::size_t N() const { return n_; }
  std::size_t dim() const { return 2 * n_; }
  const FqMatrix& gram() const { return gram_; }
  bool is_standard() const { return gram_ == standard_gram(field_, n_); }

  /// Columns: a symplectic basis (e_1..e_N, f_1..f_N) of this space.
  const FqMatrix& symplectic_basis() const { return basis_; }
  /// Coordinates of v in the symplectic basis.
  FqVector to_standard(const FqVector& v) const { return basis_inv_ * v; }
  FqVector from_standard(const FqVector& v) const { return basis_ * v; }

  FieldElem omega(const FqVector& u, const FqVector& v) const {
    FieldElem s = field_.zero();
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i].code == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) {
        FieldElem g = gram_(i, j);
        if (g.code) s = field_.add(s, field_.mul(u[i], field_.mul(g, v[j])));
      }
    }
    return s;
  }

  bool is_symplectic(const FqMatrix& m) const {
    return m.rows() == dim() && m.cols() == dim() && m.transpose() * gram_ * m == gram_;
  }

  FqMatrix identity() const { return FqMatrix::identity(field_, dim()); }

 private:
  Field field_;
  std::size_t n_;
  FqMatrix gram_;
  FqMatrix basis_, basis_inv_;
};

/// R^t = gram^{-1} R^T gram, so that omega(R v, u) = omega(v, R^t u).
inline FqMatrix symplectic_transpose(const SympSpace& space, const FqMatrix& r) {
  return space.gram().inverse() * r.transpose() * space.gram();
}

/// An element of Sp(V, omega); symplecticity is checked on construction.
class SympGroupElement {
 public:
  SympGroupElement(const SympSpace& space, FqMatrix mat) : mat_(std::move(mat)) {
    if (!space.is_symplectic(mat_)) throw DomainError("matrix is not symplectic");
  }

  const FqMatrix& mat() const { return mat_; }
  operator const FqMatrix&() const { return mat_; }

  friend bool operator==(const SympGroupElement& a, const SympGroupElement& b) { return a.mat_ == b.mat_; }

 private:
  FqMatrix mat_;
};

/// Transvection x -> x + c omega(u, x) u.
inline FqMatrix transvection(const SympSpace& space, const FqVector& u, FieldElem c) {
  const Field& f = space.field();
  FqMatrix col = FqMatrix::from_columns(f, {u});
  FqMatrix row = col.transpose() * space.gram();
  return space.identity() + (col * row).scaled(c);
}

/// Random element of Sp as a product of random transvections.
template <class Rng>
FqMatrix random_symplectic(const SympSpace& space, Rng& rng, std::size_t steps = 0) {
  const Field& f = space.field();
  if (steps == 0) steps = 4 * space.dim() + 4;
  std::uniform_int_distribution<std::uint64_t> coeff(0, f.q() - 1);
  FqMatrix g = space.identity();
  for (std::size_t s = 0; s < steps; ++s) {
    FqVector u(space.dim());
    for (auto& x : u) x = f.elem(coeff(rng));
    g = g * transvection(space, u, f.elem(coeff(rng)));
  }
  return g;
}

}  // namespace hwr

#endif  // HWR_SYMP_SPACE_HPP
