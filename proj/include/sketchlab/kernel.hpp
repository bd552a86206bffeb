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

#include <cmath>

#include <Eigen/Dense>

#include "sketchlab/errors.hpp"
#include "sketchlab/linalg.hpp"
#include "sketchlab/types.hpp"

namespace sketchlab {

// Radial basis function kernel bandwidth.
struct KernelConfig {
  double sigma = 1.0;
};

// Gram matrix K_ij = exp(-|x_i - x_j|^2 / (2 sigma^2)) for row-sample points.
inline Matrix rbf_kernel(const Matrix& points, const KernelConfig& config) {
  if (config.sigma <= 0.0) throw Error("kernel bandwidth must be positive");
  const Eigen::Index m = points.rows();
  const Vector sq = points.rowwise().squaredNorm();
  Matrix dist = sq.replicate(1, m) + sq.transpose().replicate(m, 1) -
                2.0 * points * points.transpose();
  Matrix k = (-dist.cwiseMax(0.0) / (2.0 * config.sigma * config.sigma))
                 .array()
                 .exp()
                 .matrix();
  return ((k + k.transpose()) / 2.0).eval();
}

// Symmetric PSD square root via eigendecomposition; small negative
// eigenvalues from round-off are clamped to zero.
inline Matrix psd_sqrt(const Matrix& k) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(
      Matrix(((k + k.transpose()) / 2.0)));
  if (eig.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition failed");
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Matrix s = eig.eigenvectors() * root.asDiagonal() *
             eig.eigenvectors().transpose();
  return ((s + s.transpose()) / 2.0).eval();
}

// Sketched Nystrom approximation K~ = C^T W^+ C with C = SK and
// W = S K S^T, symmetrized against round-off. K - K~ is PSD in exact
// arithmetic.
inline Matrix nystrom_approx(const Matrix& k, const Matrix& s) {
  const Matrix c = s * k;
  const Matrix w = c * s.transpose();
  Matrix approx = c.transpose() * (pseudoinverse(w) * c);
  return ((approx + approx.transpose()) / 2.0).eval();
}

// Trace-norm error |K - K~|_* of the Nystrom approximation. Since the
// residual is PSD this is tr(K) - tr(K~), which never needs an SVD.
inline double nystrom_trace_error(const Matrix& k, const Matrix& approx) {
  const double err = k.trace() - approx.trace();
  return err > 0.0 ? err : 0.0;
}

}  // namespace sketchlab
