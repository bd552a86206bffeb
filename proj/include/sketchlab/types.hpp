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

#include <Eigen/Dense>
#include <cstddef>

namespace sketchlab {

// Column-major dense real matrix / vector types used throughout.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Thin SVD A = U diag(s) Vt. rank_tolerance is relative: the numerical rank
// is the count of singular values > rank_tolerance * s(0).
struct SvdFactorization {
  Matrix u;                 // m x p, orthonormal columns
  Vector singular_values;   // length p, non-increasing, >= 0
  Matrix vt;                // p x n, orthonormal rows
  double rank_tolerance;

  std::size_t rank() const {
    if (singular_values.size() == 0) return 0;
    const double cutoff = rank_tolerance * singular_values(0);
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < singular_values.size(); ++i)
      if (singular_values(i) > cutoff) ++r;
    return r;
  }
};

// Eigenvalue range of a congruence-transformed matrix; lo <= min(eig),
// max(eig) <= hi.
struct PsdInterval {
  double lo;
  double hi;
  Vector eigenvalues;  // sorted ascending
};

}  // namespace sketchlab
