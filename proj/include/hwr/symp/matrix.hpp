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
 * @file matrix.hpp
 * @brief Dense matrices over F_q.
 */

#ifndef HWR_SYMP_MATRIX_HPP
#define HWR_SYMP_MATRIX_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hwr/gfq/field.hpp"
#include "hwr/gfq/poly.hpp"

namespace hwr {

using FqVector = std::vector<FieldElem>;

class FqMatrix {
 public:
  FqMatrix(Field field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols) {}

  static FqMatrix identity(const Field& f, std::size_t n) {
    FqMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = f.one();
    return m;
  }

  /// Row-major integer entries reduced mod p.
  static FqMatrix from_ints(const Field& f, std::size_t rows, std::size_t cols, const std::vector<std::int64_t>& v) {
    if (v.size() != rows * cols) throw DomainError("matrix entry count mismatch");
    FqMatrix m(f, rows, cols);
    for (std::size_t i = 0; i < v.size(); ++i) m.data_[i] = f.from_int(v[i]);
    return m;
  }

  static FqMatrix from_columns(const Field& f, const std::vector<FqVector>& cols) {
    if (cols.empty()) throw DomainError("from_columns needs at least one column");
    FqMatrix m(f, cols[0].size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j].at(i);
    return m;
  }

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  FieldElem& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  FieldElem operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<FieldElem>& data() const { return data_; }

  FqVector column(std::size_t j) const {
    FqVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  friend bool operator==(const FqMatrix& a, const FqMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  FqMatrix operator*(const FqMatrix& b) const {
    if (cols_ != b.rows_) throw DomainError("matrix product dimension mismatch");
    const Field& f = field_;
    FqMatrix r(f, rows_, b.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        FieldElem a = (*this)(i, k);
        if (a.code == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) = f.add(r(i, j), f.mul(a, b(k, j)));
      }
    return r;
  }

  FqVector operator*(const FqVector& v) const {
    if (v.size() != cols_) throw DomainError("matrix-vector dimension mismatch");
    FqVector r(rows_, field_.zero());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) r[i] = field_.add(r[i], field_.mul((*this)(i, k), v[k]));
    return r;
  }

  FqMatrix operator+(const FqMatrix& b) const { return zip(b, [&](FieldElem x, FieldElem y) { return field_.add(x, y); }); }
  FqMatrix operator-(const FqMatrix& b) const { return zip(b, [&](FieldElem x, FieldElem y) { return field_.sub(x, y); }); }

  FqMatrix scaled(FieldElem s) const {
    FqMatrix r = *this;
    for (auto& x : r.data_) x = field_.mul(x, s);
    return r;
  }

  FqMatrix transpose() const {
    FqMatrix r(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  bool is_identity() const { return *this == identity(field_, rows_); }
  bool is_zero() const {
    for (auto x : data_)
      if (x.code) return false;
    return true;
  }

  FqMatrix pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    FqMatrix r = identity(field_, rows_), b = *this;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  /// Row echelon form in place; returns pivot columns and the determinant
  /// factor accumulated from swaps and pivots.
  struct Echelon {
    std::vector<std::size_t> pivots;
    FieldElem det_factor;
  };
  Echelon reduce(bool full = true) {
    const Field& f = field_;
    Echelon e{{}, f.one()};
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
      std::size_t piv = row;
      while (piv < rows_ && (*this)(piv, col).code == 0) ++piv;
      if (piv == rows_) continue;
      if (piv != row) {
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(piv, j), (*this)(row, j));
        e.det_factor = f.neg(e.det_factor);
      }
      FieldElem pv = (*this)(row, col);
      e.det_factor = f.mul(e.det_factor, pv);
      FieldElem inv = f.inv(pv);
      for (std::size_t j = col; j < cols_; ++j) (*this)(row, j) = f.mul((*this)(row, j), inv);
      for (std::size_t i = full ? 0 : row + 1; i < rows_; ++i) {
        if (i == row) continue;
        FieldElem c = (*this)(i, col);
        if (c.code == 0) continue;
        for (std::size_t j = col; j < cols_; ++j) (*this)(i, j) = f.sub((*this)(i, j), f.mul(c, (*this)(row, j)));
      }
      e.pivots.push_back(col);
      ++row;
    }
    return e;
  }

  std::size_t rank() const {
    FqMatrix m = *this;
    return m.reduce(false).pivots.size();
  }

  FieldElem det() const {
    if (!square()) throw DomainError("determinant of a non-square matrix");
    FqMatrix m = *this;
    auto e = m.reduce(false);
    return e.pivots.size() == rows_ ? e.det_factor : field_.zero();
  }

  FqMatrix inverse() const {
    if (!square()) throw DomainError("inverse of a non-square matrix");
    const std::size_t n = rows_;
    FqMatrix aug(field_, n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
      aug(i, n + i) = field_.one();
    }
    auto e = aug.reduce(true);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw DomainError("matrix is singular");
    FqMatrix r(field_, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
    return r;
  }

  /// Basis of the right null space {x : M x = 0}.
  std::vector<FqVector> nullspace() const {
    FqMatrix m = *this;
    auto e = m.reduce(true);
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<FqVector> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
      if (is_pivot[free]) continue;
      FqVector x(cols_, field_.zero());
      x[free] = field_.one();
      for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = field_.neg(m(r, free));
      basis.push_back(std::move(x));
    }
    return basis;
  }

  /// Some solution of M x = b, or nullopt if inconsistent.
  std::optional<FqVector> solve(const FqVector& b) const {
    if (b.size() != rows_) throw DomainError("solve: dimension mismatch");
    FqMatrix aug(field_, rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_) = b[i];
    }
    auto e = aug.reduce(true);
    if (!e.pivots.empty() && e.pivots.back() == cols_) return std::nullopt;
    FqVector x(cols_, field_.zero());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = aug(r, cols_);
    return x;
  }

  /// Characteristic polynomial det(x I - M) via Hessenberg reduction.
  Poly charpoly() const {
    if (!square()) throw DomainError("charpoly of a non-square matrix");
    const Field& f = field_;
    const std::size_t n = rows_;
    FqMatrix h = *this;
    for (std::size_t m = 1; m + 1 < n; ++m) {
      std::size_t i = m;
      while (i < n && h(i, m - 1).code == 0) ++i;
      if (i == n) continue;
      if (i != m) {
        for (std::size_t j = 0; j < n; ++j) std::swap(h(i, j), h(m, j));
        for (std::size_t j = 0; j < n; ++j) std::swap(h(j, i), h(j, m));
      }
      FieldElem inv = f.inv(h(m, m - 1));
      for (std::size_t j = m + 1; j < n; ++j) {
        FieldElem u = f.mul(h(j, m - 1), inv);
        if (u.code == 0) continue;
        for (std::size_t k = 0; k < n; ++k) h(j, k) = f.sub(h(j, k), f.mul(u, h(m, k)));
        for (std::size_t k = 0; k < n; ++k) h(k, m) = f.add(h(k, m), f.mul(u, h(k, j)));
      }
    }
    PolyRing R(f);
    std::vector<Poly> p(n + 1);
    p[0] = R.one();
    for (std::size_t m = 1; m <= n; ++m) {
      p[m] = R.mul(R.sub(R.x(), R.constant(h(m - 1, m - 1))), p[m - 1]);
      FieldElem t = f.one();
      for (std::size_t i = 1; i < m; ++i) {
        t = f.mul(t, h(m - i, m - i - 1));
        p[m] = R.sub(p[m], R.scale(p[m - i - 1], f.mul(t, h(m - i - 1, m - 1))));
      }
    }
    return p[n];
  }

  /// Evaluate a polynomial at this matrix (Horner).
  FqMatrix eval_poly(const Poly& g) const {
    FqMatrix r(field_, rows_, cols_);
    FqMatrix id = identity(field_, rows_);
    for (std::size_t i = g.coeffs.size(); i-- > 0;) r = r * (*this) + id.scaled(g.coeffs[i]);
    return r;
  }

  /// Entry codes, row-major; a stable key for caches.
  std::vector<std::uint32_t> key() const {
    std::vector<std::uint32_t> k(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) k[i] = data_[i].code;
    return k;
  }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < rows_; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < cols_; ++j) row.push_back((*this)(i, j).code);
      rows.push_back(row);
    }
    return rows;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < rows_; ++i) {
      s += "[";
      for (std::size_t j = 0; j < cols_; ++j) s += (j ? " " : "") + std::to_string((*this)(i, j).code);
      s += "]";
    }
    return s;
  }

 private:
  template <class Op>
  FqMatrix zip(const FqMatrix& b, Op op) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw DomainError("matrix shape mismatch");
    FqMatrix r(field_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = op(data_[i], b.data_[i]);
    return r;
  }

  Field field_;
  std::size_t rows_, cols_;
  std::vector<FieldElem> data_;
};

/// Hash for FqMatrix keys.
struct MatrixKeyHash {
  std::size_t operator()(const std::vector<std::uint32_t>& k) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : k) h = (h ^ x) * 1099511628211ULL;
    return h;
  }
};

inline FqVector vec_add(const Field& f, const FqVector& a, const FqVector& b) {
  FqVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.add(a[i], b[i]);
  return r;
}

inline FqVector vec_sub(const Field& f, const FqVector& a, const FqVector& b) {
  FqVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.sub(a[i], b[i]);
  return r;
}

inline FqVector vec_scale(const Field& f, const FqVector& a, FieldElem s) {
  FqVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], s);
  return r;
}

inline bool vec_is_zero(const FqVector& a) {
  for (auto x : a)
    if (x.code) return false;
  return true;
}

/// Vector with the given integer coordinates reduced mod p.
inline FqVector vec_from_ints(const Field& f, const std::vector<std::int64_t>& v) {
  FqVector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = f.from_int(v[i]);
  return r;
}

/// The i-th vector of F_q^n in base-q order (coordinate 0 least significant).
inline FqVector vec_from_index(const Field& f, std::size_t n, std::uint64_t index) {
  FqVector r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = f.elem(index % f.q());
    index /= f.q();
  }
  return r;
}

inline std::uint64_t vec_index(const Field& f, const FqVector& v) {
  std::uint64_t idx = 0, mult = 1;
  for (auto x : v) {
    idx += x.code * mult;
    mult *= f.q();
  }
  return idx;
}

}  // namespace hwr

#endif  // HWR_SYMP_MATRIX_HPP
