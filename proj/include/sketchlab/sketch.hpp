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
#include <utility>
#include <vector>

#include "sketchlab/accumulate.hpp"
#include "sketchlab/errors.hpp"
#include "sketchlab/linalg.hpp"
#include "sketchlab/rng.hpp"
#include "sketchlab/surrogate.hpp"
#include "sketchlab/types.hpp"

namespace sketchlab {

enum class SketchFamily { Gaussian, Rademacher };

// One family of sketch draws: k x m matrices with i.i.d. mean-zero
// unit-variance entries, fully determined by (seed, trial).
struct SketchSpec {
  SketchFamily family = SketchFamily::Gaussian;
  std::size_t k = 1;
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of the expected residual projection plus per-trial
// low-rank errors and the discrepancy against a surrogate.
struct MonteCarloReport {
  std::size_t trials = 0;
  Matrix mean_residual;
  std::vector<double> per_trial_error;
  double mean_error = 0.0;
  double std_error = 0.0;
  double epsilon_hat = 0.0;
};

// Draws the sketch for a given trial. Entries are addressed by
// (seed, stream, trial, row, col), so a draw with larger k or m extends a
// smaller one and no scaling by 1/sqrt(k) is applied (residual projections
// are invariant to row scaling).
inline Matrix draw_sketch(const SketchSpec& spec, std::size_t m,
                          std::size_t trial,
                          std::uint32_t stream = rng::kStreamSketch) {
  Matrix s(static_cast<Eigen::Index>(spec.k), static_cast<Eigen::Index>(m));
  const auto t = static_cast<std::uint32_t>(trial);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < spec.k; ++i) {
      const auto row = static_cast<std::uint32_t>(i);
      const auto col = static_cast<std::uint32_t>(j);
      s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          spec.family == SketchFamily::Gaussian
              ? rng::normal(spec.seed, stream, t, row, col)
              : rng::rademacher(spec.seed, stream, t, row, col);
    }
  return s;
}

// Residual projection of the sketched matrix: I - (SA)^+ SA.
inline Matrix sketched_residual(const Matrix& a, const Matrix& s) {
  return residual_projection(Matrix(s * a));
}

// Squared-Frobenius low-rank approximation error
//   |A - A (SA)^+ SA|_F^2 = tr(A^T A P_perp),
// evaluated as |A|_F^2 - |A Q|_F^2 with Q an orthonormal row-space basis of
// SA (Pythagoras; avoids forming the n x n projection).
inline double low_rank_error(const Matrix& a, const Matrix& s) {
  const double total = a.squaredNorm();
  if (s.rows() == 0) return total;
  const Matrix q = detail::row_space_basis(Matrix(s * a));
  if (q.cols() == 0) return total;
  const double captured = Matrix(a * q).squaredNorm();
  const double err = total - captured;
  return err > 0.0 ? err : 0.0;
}

namespace detail {

struct TrialResult {
  Matrix residual;
  double error;
};

inline TrialResult residual_trial(const Matrix& a, const SketchSpec& spec,
                                  std::size_t trial) {
  const Matrix s =
      draw_sketch(spec, static_cast<std::size_t>(a.rows()), trial);
  const Eigen::Index n = a.cols();
  const Matrix q = row_space_basis(Matrix(s * a));
  TrialResult r;
  r.residual = Matrix::Identity(n, n);
  if (q.cols() > 0) {
    r.residual.selfadjointView<Eigen::Lower>().rankUpdate(q, -1.0);
    r.residual = Matrix(r.residual.selfadjointView<Eigen::Lower>());
  }
  const double captured = q.cols() > 0 ? Matrix(a * q).squaredNorm() : 0.0;
  const double err = a.squaredNorm() - captured;
  r.error = err > 0.0 ? err : 0.0;
  return r;
}

}  // namespace detail

// Runs `trials` independent sketch draws, averaging residual projections and
// recording per-trial errors. Trials may run on SKETCHLAB_THREADS threads;
// the mean is reduced by fixed-order pairwise summation in trial order, so
// the report is bit-identical for every thread count.
inline MonteCarloReport monte_carlo(const Matrix& a, const SketchSpec& spec,
                                    std::size_t trials,
                                    const SurrogateProjection& surrogate) {
  if (trials < 1) throw Error("at least one Monte Carlo trial is required");
  MonteCarloReport report;
  report.trials = trials;
  report.per_trial_error.resize(trials);

  PairwiseAccumulator<Matrix> residual_sum;
  ordered_parallel_for<detail::TrialResult>(
      trials, trial_thread_count(),
      [&](std::size_t t) { return detail::residual_trial(a, spec, t); },
      [&](std::size_t t, detail::TrialResult r) {
        report.per_trial_error[t] = r.error;
        residual_sum.add(std::move(r.residual));
      });
  report.mean_residual =
      residual_sum.total() / static_cast<double>(trials);

  PairwiseAccumulator<double> err_sum;
  for (double e : report.per_trial_error) err_sum.add(e);
  report.mean_error = err_sum.total() / static_cast<double>(trials);
  if (trials > 1) {
    PairwiseAccumulator<double> dev_sum;
    for (double e : report.per_trial_error) {
      const double d = e - report.mean_error;
      dev_sum.add(d * d);
    }
    report.std_error =
        std::sqrt(dev_sum.total() / static_cast<double>(trials - 1));
  }

  const PsdInterval interval =
      psd_interval(report.mean_residual, surrogate_matrix(surrogate));
  report.epsilon_hat = epsilon_hat(interval);
  return report;
}

}  // namespace sketchlab
