// Copyright 2026 The Sketchlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "sketchlab/errors.hpp"
#include "sketchlab/types.hpp"

namespace sketchlab {

// Default relative rank cutoff: singular values <= max(m,n)*eps*s_max are
// treated as zero.
inline double default_rank_tolerance(std::size_t rows, std::size_t cols) {
  return static_cast<double>(std::max(rows, cols)) *
         std::numeric_limits<double>::epsilon();
}

// Thin SVD. Throws NumericalFailure if the decomposition does not converge.
inline SvdFactorization svd(const Matrix& a) {
  Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success)
    throw NumericalFailure("SVD did not converge");
  SvdFactorization f;
  f.u = dec.matrixU();
  f.singular_values = dec.singularValues();
  f.vt = dec.matrixV().transpose();
  f.rank_tolerance = default_rank_tolerance(
      static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()));
  return f;
}

// Moore-Penrose pseudoinverse via SVD with relative cutoff rel_tol (pass 0
// for the default max(m,n)*eps convention).
inline Matrix pseudoinverse(const Matrix& a, double rel_tol = 0.0) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix::Zero(a.cols(), a.rows());
  if (rel_tol == 0.0)
    rel_tol = default_rank_tolerance(static_cast<std::size_t>(a.rows()),
                                     static_cast<std::size_t>(a.cols()));
  const SvdFactorization f = svd(a);
  const Eigen::Index p = f.singular_values.size();
  const double cutoff =
      p > 0 ? rel_tol * f.singular_values(0) : 0.0;
  Vector inv = Vector::Zero(p);
  for (Eigen::Index i = 0; i < p; ++i)
    if (f.singular_values(i) > cutoff) inv(i) = 1.0 / f.singular_values(i);
  return f.vt.transpose() * inv.asDiagonal() * f.u.transpose();
}

namespace detail {

// Orthonormal basis of the row space of x (columns of the result), computed
// by rank-revealing QR of x^T.
inline Matrix row_space_basis(const Matrix& x) {
  const Eigen::Index n = x.cols();
  if (x.rows() == 0 || x.size() == 0) return Matrix::Zero(n, 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(x.transpose());
  const Eigen::Index r = qr.rank();
  if (r == 0) return Matrix::Zero(n, 0);
  Matrix q = qr.householderQ() * Matrix::Identity(n, r);
  return q;
}

}  // namespace detail

// Residual projection of the row space of x: the orthogonal projection onto
// the null space of x, I - x^+ x. Symmetric idempotent with rank
// n - rank(x).
inline Matrix residual_projection(const Matrix& x) {
  const Eigen::Index n = x.cols();
  const Matrix q = detail::row_space_basis(x);
  Matrix p = Matrix::Identity(n, n);
  if (q.cols() > 0) {
    p.selfadjointView<Eigen::Lower>().rankUpdate(q, -1.0);
    p = Matrix(p.selfadjointView<Eigen::Lower>());
  }
  return p;
}

// Appending a row x_k to a matrix with row-space projection p_minus updates
// the projection by
//   (I - P) x_k x_k^T (I - P) / (x_k^T (I - P) x_k)
// and the pseudoinverse applied to the new row is
//   (X^T X)^+ x_k = (I - P) x_k / (x_k^T (I - P) x_k).
// Throws DegenerateUpdate when the denominator is below 1e-10 * |x_k|^2,
// i.e. the new row already lies in the row space.
inline std::pair<Matrix, Vector> pinv_rank_one_update(const Matrix& x_minus,
                                                      const Matrix& p_minus,
                                                      const Vector& new_row) {
  const Eigen::Index n = new_row.size();
  if (p_minus.rows() != n || p_minus.cols() != n)
    throw Error("projection dimension does not match the new row");
  if (x_minus.rows() > 0 && x_minus.cols() != n)
    throw Error("x_minus column count does not match the new row");
  const Vector residual = new_row - p_minus * new_row;
  const double denom = new_row.dot(residual);
  const double floor = 1e-10 * new_row.squaredNorm();
  if (!(denom > floor))
    throw DegenerateUpdate("new row lies in the existing row space");
  Matrix proj_update = (residual * residual.transpose()) / denom;
  Vector pinv_row = residual / denom;
  return {std::move(proj_update), std::move(pinv_row)};
}

// Stable rank |A|_F^2 / |A|_2^2. Throws ZeroMatrix for the zero matrix.
inline double stable_rank(const Matrix& a) {
  const double fro2 = a.squaredNorm();
  if (fro2 == 0.0) throw ZeroMatrix("stable rank of the zero matrix");
  Eigen::BDCSVD<Matrix> dec(a);
  const double top = dec.singularValues()(0);
  return fro2 / (top * top);
}

// Trace norm (nuclear norm), the sum of singular values.
inline double trace_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> dec(a);
  return dec.singularValues().sum();
}

// Eigenvalue interval of B^{-1/2} M B^{-1/2} for symmetric PSD M and
// symmetric positive definite B; the product is symmetrized before the
// eigensolve to absorb round-off from Monte Carlo averaging.
inline PsdInterval psd_interval(const Matrix& mean_proj,
                                const Matrix& surrogate) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig_b(surrogate);
  if (eig_b.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition of the surrogate failed");
  const Vector& lam = eig_b.eigenvalues();
  if (lam(0) <= 0.0)
    throw SingularSurrogate("surrogate is not positive definite");
  const Matrix inv_sqrt = eig_b.eigenvectors() *
                          lam.array().rsqrt().matrix().asDiagonal() *
                          eig_b.eigenvectors().transpose();
  Matrix c = inv_sqrt * mean_proj * inv_sqrt;
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig_c(c);
  if (eig_c.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition of the congruence failed");
  PsdInterval out;
  out.eigenvalues = eig_c.eigenvalues();
  out.lo = out.eigenvalues(0);
  out.hi = out.eigenvalues(out.eigenvalues.size() - 1);
  return out;
}

// Empirical discrepancy of a PSD interval around 1.
inline double epsilon_hat(const PsdInterval& interval) {
  return std::max(1.0 - interval.lo, interval.hi - 1.0);
}

}  // namespace sketchlab
