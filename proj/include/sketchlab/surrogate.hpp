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
#include <cstddef>
#include <numeric>
#include <vector>

#include "sketchlab/errors.hpp"
#include "sketchlab/spectrum.hpp"
#include "sketchlab/types.hpp"

namespace sketchlab {

inline constexpr double kGammaTol = 1e-10;

// Solution of the implicit gamma equation
//   sum_i gamma*s_i / (gamma*s_i + 1) = k.
struct GammaSolution {
  double gamma = 0.0;
  std::size_t k = 0;
  double residual = 0.0;
  std::size_t iterations = 0;
};

// Eigen-domain form of the surrogate residual projection
// (gamma A^T A + I)^{-1}: eigenvalues diag(i) = 1/(gamma*s_i + 1) on the
// rows of basis_vt, eigenvalue 1 elsewhere.
struct SurrogateProjection {
  GammaSolution gamma;
  Matrix basis_vt;  // p x n, orthonormal rows
  Vector diag;      // length n: p surrogate eigenvalues then padding ones
};

enum class SketchMethod { Kaczmarz, RSN, JacSketch };

// Stochastic condition number surrogate for a sketched iterative method.
struct ConditionNumberSurrogate {
  double kappa_bar = 0.0;
  SketchMethod method = SketchMethod::Kaczmarz;
  double gamma = 0.0;
};

namespace detail {

inline double gamma_map(const std::vector<double>& values, double gamma) {
  double acc = 0.0;
  for (double v : values) {
    const double gv = gamma * v;
    acc += gv / (gv + 1.0);
  }
  return acc;
}

inline std::size_t positive_count(const std::vector<double>& values) {
  std::size_t r = 0;
  for (double v : values)
    if (v > 0.0) ++r;
  return r;
}

}  // namespace detail

// Solves the implicit equation by bracketed bisection: the map is strictly
// increasing in gamma, the upper bracket doubles from 1 until it encloses k,
// and iteration stops at absolute residual 1e-10 (at most 200 steps).
// Requires k < rank(s); k = 0 yields gamma = 0.
inline GammaSolution solve_gamma(const Spectrum& s, std::size_t k) {
  GammaSolution sol;
  sol.k = k;
  if (k == 0) return sol;
  if (k >= detail::positive_count(s.values))
    throw KExceedsRank("sketch size k must be below the spectrum rank");

  const double target = static_cast<double>(k);
  double hi = 1.0;
  std::size_t iterations = 0;
  while (detail::gamma_map(s.values, hi) < target) {
    hi *= 2.0;
    ++iterations;
  }
  double lo = 0.0;
  double mid = hi;
  double residual = std::abs(detail::gamma_map(s.values, hi) - target);
  for (std::size_t i = 0; i < 200; ++i) {
    mid = 0.5 * (lo + hi);
    const double value = detail::gamma_map(s.values, mid);
    residual = std::abs(value - target);
    ++iterations;
    if (residual <= kGammaTol) break;
    if (value < target)
      lo = mid;
    else
      hi = mid;
  }
  if (residual > kGammaTol)
    throw NumericalFailure("gamma bisection did not reach tolerance");
  sol.gamma = mid;
  sol.residual = residual;
  sol.iterations = iterations;
  return sol;
}

// Surrogate residual projection in the basis vt (p x n with orthonormal
// rows, p <= n). Eigenvalues beyond the spectrum length, and beyond p, are 1.
inline SurrogateProjection surrogate_projection(const Spectrum& s,
                                                const Matrix& vt,
                                                std::size_t k) {
  SurrogateProjection p;
  p.gamma = solve_gamma(s, k);
  p.basis_vt = vt;
  const Eigen::Index n = vt.cols();
  p.diag = Vector::Ones(n);
  const std::size_t limit =
      std::min(s.values.size(), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < limit; ++i)
    p.diag(static_cast<Eigen::Index>(i)) =
        1.0 / (p.gamma.gamma * s.values[i] + 1.0);
  return p;
}

// Dense n x n form of the surrogate projection:
//   I + Vt^T (D - I) Vt with D the leading block of diag.
inline Matrix surrogate_matrix(const SurrogateProjection& p) {
  const Eigen::Index n = p.basis_vt.cols();
  const Eigen::Index rows = p.basis_vt.rows();
  Matrix m = Matrix::Identity(n, n);
  const Vector shift = p.diag.head(rows).array() - 1.0;
  m.noalias() +=
      p.basis_vt.transpose() * shift.asDiagonal() * p.basis_vt;
  return 0.5 * (m + m.transpose());
}

// Predicted expected squared-Frobenius low-rank error: k / gamma.
// k = 0 returns the full squared Frobenius mass of the spectrum.
inline double predict_frobenius_error(const Spectrum& s, std::size_t k) {
  if (k == 0)
    return std::accumulate(s.values.begin(), s.values.end(), 0.0);
  const GammaSolution g = solve_gamma(s, k);
  return static_cast<double>(k) / g.gamma;
}

// Predicted expected trace-norm Nystrom error: the same law with kernel
// eigenvalues in place of squared singular values.
inline double predict_nystrom_error(const Spectrum& kernel_eigs,
                                    std::size_t k) {
  return predict_frobenius_error(kernel_eigs, k);
}

// Closed-form gamma for the exponential profile s_i = C*alpha^(i-1):
//   gamma ~= (alpha^(-k) - 1) * sqrt(alpha) / C.
inline double explicit_gamma_exponential(double alpha, double c,
                                         std::size_t k) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidProfile("exponential rate alpha must lie in (0,1)");
  if (c <= 0.0) throw InvalidProfile("scale constant C must be positive");
  if (k < 1) throw InvalidProfile("sketch size k must be at least 1");
  return (std::pow(alpha, -static_cast<double>(k)) - 1.0) *
         std::sqrt(alpha) / c;
}

// Closed-form error for the exponential profile:
//   C/sqrt(alpha) * k / (alpha^(-k) - 1) = k / gamma.
inline double explicit_error_exponential(double alpha, double c,
                                         std::size_t k) {
  return static_cast<double>(k) / explicit_gamma_exponential(alpha, c, k);
}

// Closed-form gamma for the polynomial profile s_i = C*i^(-beta):
//   gamma ~= ((k + 1/2) * (beta/pi) * sin(pi/beta))^beta / C.
inline double explicit_gamma_polynomial(double beta, double c,
                                        std::size_t k) {
  if (!(beta >= 2.0))
    throw InvalidProfile("polynomial rate beta must be at least 2");
  if (c <= 0.0) throw InvalidProfile("scale constant C must be positive");
  if (k < 1) throw InvalidProfile("sketch size k must be at least 1");
  const double pi = 3.14159265358979323846;
  const double base = (static_cast<double>(k) + 0.5) * (beta / pi) *
                      std::sin(pi / beta);
  return std::pow(base, beta) / c;
}

// Closed-form error for the polynomial profile:
//   C * k/(k+1/2)^beta * ((pi/beta)/sin(pi/beta))^beta = k / gamma.
inline double explicit_error_polynomial(double beta, double c,
                                        std::size_t k) {
  return static_cast<double>(k) / explicit_gamma_polynomial(beta, c, k);
}

// Stochastic condition number kappa_bar = v/(v + 1/gamma) where v is the
// smallest (Kaczmarz, JacSketch) or smallest positive (RSN) value of the
// spectrum the method's convergence is governed by.
inline ConditionNumberSurrogate kappa_surrogate(const Spectrum& s,
                                                std::size_t k,
                                                SketchMethod method) {
  ConditionNumberSurrogate out;
  out.method = method;
  const GammaSolution g = solve_gamma(s, k);
  out.gamma = g.gamma;
  double v = 0.0;
  if (method == SketchMethod::RSN) {
    for (auto it = s.values.rbegin(); it != s.values.rend(); ++it)
      if (*it > 0.0) {
        v = *it;
        break;
      }
  } else {
    v = s.values.back();
  }
  out.kappa_bar = g.gamma > 0.0 ? v / (v + 1.0 / g.gamma) : 0.0;
  return out;
}

// Expected iterate deviation after t sketch-and-project steps:
// (surrogate projection)^t applied to delta0 in the vt basis.
inline Vector predicted_trajectory(const Spectrum& s, const Matrix& vt,
                                   std::size_t k, const Vector& delta0,
                                   std::size_t t) {
  const SurrogateProjection p = surrogate_projection(s, vt, k);
  if (t == 0) return delta0;
  const Eigen::Index rows = p.basis_vt.rows();
  Vector coeff = p.basis_vt * delta0;
  Vector scale(rows);
  for (Eigen::Index i = 0; i < rows; ++i)
    scale(i) = std::pow(p.diag(i), static_cast<double>(t)) - 1.0;
  return delta0 + p.basis_vt.transpose() * scale.cwiseProduct(coeff).eval();
}

}  // namespace sketchlab
