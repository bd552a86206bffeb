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
#include <cstdint>
#include <numeric>
#include <vector>

#include "sketchlab/errors.hpp"
#include "sketchlab/linalg.hpp"
#include "sketchlab/rng.hpp"
#include "sketchlab/types.hpp"

namespace sketchlab {

// Ordered squared singular values with their scale constant C. values are
// non-increasing, non-negative, and at least one entry is positive.
struct Spectrum {
  std::vector<double> values;
  double scale_c = 1.0;
};

enum class DecayKind { Exponential, Polynomial, Explicit };

// Description of a spectrum: an exponential decay C*alpha^(i-1) with
// alpha in (0,1), a polynomial decay C*i^(-beta) with beta >= 2, or an
// explicit list of squared singular values.
struct DecayProfile {
  DecayKind kind = DecayKind::Exponential;
  double alpha = 0.0;
  double beta = 0.0;
  double c = 1.0;
  std::size_t length = 0;
  bool normalize_frobenius = false;
  std::vector<double> explicit_values;
};

// Materializes a decay profile. With normalize_frobenius the scale is chosen
// so the squared values sum to 1.
inline Spectrum profile_spectrum(const DecayProfile& p) {
  if (p.kind != DecayKind::Explicit && p.length < 1)
    throw InvalidProfile("profile length must be at least 1");
  if (p.c <= 0.0) throw InvalidProfile("scale constant C must be positive");

  Spectrum s;
  s.scale_c = p.c;
  switch (p.kind) {
    case DecayKind::Exponential: {
      if (!(p.alpha > 0.0 && p.alpha < 1.0))
        throw InvalidProfile("exponential rate alpha must lie in (0,1)");
      s.values.resize(p.length);
      double v = p.c;
      for (std::size_t i = 0; i < p.length; ++i, v *= p.alpha) s.values[i] = v;
      break;
    }
    case DecayKind::Polynomial: {
      if (!(p.beta >= 2.0))
        throw InvalidProfile("polynomial rate beta must be at least 2");
      s.values.resize(p.length);
      for (std::size_t i = 0; i < p.length; ++i)
        s.values[i] =
            p.c * std::pow(static_cast<double>(i + 1), -p.beta);
      break;
    }
    case DecayKind::Explicit: {
      if (p.explicit_values.empty())
        throw InvalidProfile("explicit profile has no values");
      double prev = p.explicit_values.front();
      bool positive = false;
      for (double v : p.explicit_values) {
        if (v < 0.0 || v > prev)
          throw InvalidProfile(
              "explicit values must be non-increasing and non-negative");
        positive = positive || v > 0.0;
        prev = v;
      }
      if (!positive) throw InvalidProfile("explicit profile is all zero");
      s.values = p.explicit_values;
      break;
    }
  }

  if (p.normalize_frobenius) {
    const double sum =
        std::accumulate(s.values.begin(), s.values.end(), 0.0);
    for (double& v : s.values) v /= sum;
    s.scale_c /= sum;
  }
  return s;
}

namespace detail {

// Deterministic Haar-like orthonormal factor: QR of a seeded Gaussian block
// with the R diagonal sign fixed to +.
inline Matrix haar_factor(std::size_t rows, std::size_t cols,
                          std::uint64_t seed, std::uint32_t stream) {
  Matrix g(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i)
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rng::normal(seed, stream, 0, static_cast<std::uint32_t>(i),
                      static_cast<std::uint32_t>(j));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() *
             Matrix::Identity(static_cast<Eigen::Index>(rows),
                              static_cast<Eigen::Index>(cols));
  const Matrix r = qr.matrixQR()
                       .topLeftCorner(static_cast<Eigen::Index>(cols),
                                      static_cast<Eigen::Index>(cols))
                       .template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(cols); ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace detail

// Builds an m x n matrix (m >= n >= length(s)) whose squared singular values
// equal s padded with zeros; the singular factors are deterministic
// Haar-like orthonormal matrices derived from the seed.
inline Matrix synthesize_matrix(const Spectrum& s, std::size_t m,
                                std::size_t n, std::uint64_t seed) {
  if (n < s.values.size())
    throw Error("target width is smaller than the spectrum length");
  if (m < n) throw Error("row count must be at least the column count");
  const Matrix u = detail::haar_factor(m, n, seed, rng::kStreamSynthesisU);
  const Matrix v = detail::haar_factor(n, n, seed, rng::kStreamSynthesisV);
  Vector sing = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < s.values.size(); ++i)
    sing(static_cast<Eigen::Index>(i)) = std::sqrt(s.values[i]);
  return u * sing.asDiagonal() * v.transpose();
}

// Builds an m x m symmetric PSD matrix with eigenvalues s padded with zeros.
inline Matrix synthesize_psd(const Spectrum& s, std::size_t m,
                             std::uint64_t seed) {
  if (m < s.values.size())
    throw Error("target size is smaller than the spectrum length");
  const Matrix q = detail::haar_factor(m, m, seed, rng::kStreamSynthesisV);
  Vector eigs = Vector::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < s.values.size(); ++i)
    eigs(static_cast<Eigen::Index>(i)) = s.values[i];
  Matrix k = q * eigs.asDiagonal() * q.transpose();
  return 0.5 * (k + k.transpose());
}

// Squared singular values of a matrix, non-increasing. Throws ZeroMatrix on
// the zero matrix (a spectrum needs one positive value).
inline Spectrum spectrum_of(const Matrix& a) {
  if (a.squaredNorm() == 0.0)
    throw ZeroMatrix("spectrum of the zero matrix");
  Eigen::BDCSVD<Matrix> dec(a);
  const Vector& sv = dec.singularValues();
  Spectrum s;
  s.values.resize(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    s.values[static_cast<std::size_t>(i)] = sv(i) * sv(i);
  return s;
}

}  // namespace sketchlab
