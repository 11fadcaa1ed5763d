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
 * @file heisenberg.hpp
 * @brief The Heisenberg group V x F_q and dense complex operators.
 */

#ifndef HWR_HEIWEI_HEISENBERG_HPP
#define HWR_HEIWEI_HEISENBERG_HPP

#include <complex>
#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "hwr/symp/space.hpp"

namespace hwr {

using cplx = std::complex<double>;

/// (v, z) in H(V) = V x F_q.
struct HeisenbergElem {
  FqVector v;
  FieldElem z{0};

  friend bool operator==(const HeisenbergElem&, const HeisenbergElem&) = default;
};

/// (v, z)(v', z') = (v + v', z + z' + omega(v, v')/2).
inline HeisenbergElem heisenberg_compose(const SympSpace& space, const HeisenbergElem& a, const HeisenbergElem& b) {
  const Field& f = space.field();
  if (a.v.size() != space.dim() || b.v.size() != space.dim()) throw DomainError("Heisenberg element has wrong dimension");
  return {vec_add(f, a.v, b.v), f.add(f.add(a.z, b.z), f.mul(f.half(), space.omega(a.v, b.v)))};
}

/// g . (v, z) = (g v, z).
inline HeisenbergElem act(const FqMatrix& g, const HeisenbergElem& h) { return {g * h.v, h.z}; }

/**
 * Dense complex operator on the q^N-dimensional model space, carrying the
 * comparison tolerance for its dimension.
 */
class Operator {
 public:
  Operator() = default;
  Operator(Eigen::MatrixXcd m, double tol) : m_(std::move(m)), tol_(tol) {}

  static Operator identity(Eigen::Index dim, double tol) { return {Eigen::MatrixXcd::Identity(dim, dim), tol}; }

  Eigen::Index dim() const { return m_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  double tol() const { return tol_; }
  cplx trace() const { return m_.trace(); }

  Operator adjoint() const { return {m_.adjoint(), tol_}; }
  Operator operator*(const Operator& o) const { return {m_ * o.m_, tol_}; }
  Eigen::VectorXcd operator*(const Eigen::VectorXcd& v) const { return m_ * v; }
  Operator scaled(cplx s) const { return {m_ * s, tol_}; }

  double distance(const Operator& o) const { return max_abs(m_ - o.m_); }
  bool approx_equal(const Operator& o) const { return distance(o) <= tol_; }

  /// max |U U^dagger - I|.
  double unitarity_defect() const {
    return max_abs(m_ * m_.adjoint() - Eigen::MatrixXcd::Identity(dim(), dim()));
  }
  bool is_unitary() const { return unitarity_defect() <= tol_; }

  static double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

 private:
  Eigen::MatrixXcd m_;
  double tol_ = 0.0;
};

/// Kronecker product, first factor most significant.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

}  // namespace hwr

#endif  // HWR_HEIWEI_HEISENBERG_HPP
