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
#include <optional>
#include <utility>
#include <vector>

#include "sketchlab/accumulate.hpp"
#include "sketchlab/errors.hpp"
#include "sketchlab/linalg.hpp"
#include "sketchlab/rng.hpp"
#include "sketchlab/sketch.hpp"
#include "sketchlab/spectrum.hpp"
#include "sketchlab/surrogate.hpp"
#include "sketchlab/types.hpp"

namespace sketchlab {

// Iterate of a sketch-and-project run; history retention is opt-in to bound
// memory on long runs.
struct KaczmarzState {
  Vector iterate;
  std::size_t step = 0;
  bool retain_history = false;
  std::vector<Vector> history;
};

// Linear system A x = b; x_star is the known solution of synthetic systems.
struct LinearSystem {
  Matrix a;
  Vector b;
  std::optional<Vector> x_star;
};

// One generalized Kaczmarz step with sketch s:
//   x' = x + (SA)^+ S (b - A x),
// the projection of x onto the affine set {SA x = Sb}. A degenerate SA
// simply leaves the null component untouched.
inline KaczmarzState kaczmarz_step(const LinearSystem& sys,
                                   const KaczmarzState& state,
                                   const Matrix& s) {
  const Matrix sa = s * sys.a;
  const Vector rhs = s * (sys.b - sys.a * state.iterate);
  KaczmarzState next;
  next.iterate = state.iterate + pseudoinverse(sa) * rhs;
  next.step = state.step + 1;
  next.retain_history = state.retain_history;
  if (state.retain_history) {
    next.history = state.history;
    next.history.push_back(next.iterate);
  }
  return next;
}

// Per-step Monte Carlo summary of kaczmarz runs: mean iterates and the mean
// and standard deviation of squared errors |x^t - x*|^2. Index 0 is the
// starting point.
struct KaczmarzRunReport {
  std::vector<Vector> mean_iterates;
  std::vector<double> mean_sq_errors;
  std::vector<double> std_sq_errors;
};

namespace detail {

struct KaczmarzTrial {
  std::vector<Vector> iterates;   // length steps + 1
  std::vector<double> sq_errors;  // length steps + 1
};

}  // namespace detail

// Runs `trials` independent sketch-and-project chains of `steps` steps with
// a fresh sketch per step (independent across steps and trials), averaging
// iterates and squared errors per step with deterministic fixed-order
// pairwise reduction. x* falls back to the minimum-norm solution when the
// system does not carry one.
inline KaczmarzRunReport kaczmarz_run(const LinearSystem& sys,
                                      const SketchSpec& spec,
                                      const Vector& x0, std::size_t steps,
                                      std::size_t trials) {
  if (trials < 1) throw Error("at least one trial is required");
  const Vector x_star =
      sys.x_star ? *sys.x_star : Vector(pseudoinverse(sys.a) * sys.b);
  const auto m = static_cast<std::size_t>(sys.a.rows());

  auto one_trial = [&](std::size_t t) {
    detail::KaczmarzTrial out;
    out.iterates.reserve(steps + 1);
    out.sq_errors.reserve(steps + 1);
    KaczmarzState state{x0, 0, false, {}};
    out.iterates.push_back(state.iterate);
    out.sq_errors.push_back((state.iterate - x_star).squaredNorm());
    for (std::size_t j = 0; j < steps; ++j) {
      const Matrix s = draw_sketch(
          spec, m, t, rng::kStreamKaczmarz + static_cast<std::uint32_t>(j));
      state = kaczmarz_step(sys, state, s);
      out.iterates.push_back(state.iterate);
      out.sq_errors.push_back((state.iterate - x_star).squaredNorm());
    }
    return out;
  };

  std::vector<PairwiseAccumulator<Vector>> iterate_sums(steps + 1);
  std::vector<PairwiseAccumulator<double>> err_sums(steps + 1);
  std::vector<PairwiseAccumulator<double>> err_sq_sums(steps + 1);
  ordered_parallel_for<detail::KaczmarzTrial>(
      trials, trial_thread_count(), one_trial,
      [&](std::size_t, detail::KaczmarzTrial r) {
        for (std::size_t j = 0; j <= steps; ++j) {
          iterate_sums[j].add(std::move(r.iterates[j]));
          err_sums[j].add(r.sq_errors[j]);
          err_sq_sums[j].add(r.sq_errors[j] * r.sq_errors[j]);
        }
      });

  KaczmarzRunReport report;
  report.mean_iterates.resize(steps + 1);
  report.mean_sq_errors.resize(steps + 1);
  report.std_sq_errors.resize(steps + 1);
  const double t = static_cast<double>(trials);
  for (std::size_t j = 0; j <= steps; ++j) {
    report.mean_iterates[j] = iterate_sums[j].total() / t;
    const double mean = err_sums[j].total() / t;
    report.mean_sq_errors[j] = mean;
    if (trials > 1) {
      const double ex2 = err_sq_sums[j].total() / t;
      const double var = (ex2 - mean * mean) * t / (t - 1.0);
      report.std_sq_errors[j] = var > 0.0 ? std::sqrt(var) : 0.0;
    } else {
      report.std_sq_errors[j] = 0.0;
    }
  }
  return report;
}

// Worst-case per-step contraction factor of the expected squared error:
// 1 - kappa_bar with kappa_bar = s_min/(s_min + 1/gamma). Requires a
// positive smallest spectrum value.
inline double worst_case_rate(const Spectrum& s, std::size_t k) {
  if (s.values.back() <= 0.0)
    throw SingularSystem("worst-case rate needs a positive smallest value");
  const ConditionNumberSurrogate kappa =
      kappa_surrogate(s, k, SketchMethod::Kaczmarz);
  return 1.0 - kappa.kappa_bar;
}

// One randomized subspace Newton step on a quadratic with Hessian h and
// gradient g at x:
//   x' = x - (1/L) S^T (S H S^T)^+ S g.
// For quadratics the relative smoothness constant L is 1.
inline Vector rsn_quadratic_step(const Matrix& h, const Vector& g,
                                 const Vector& x, const Matrix& s,
                                 double smoothness_l = 1.0) {
  if (smoothness_l <= 0.0)
    throw Error("smoothness constant must be positive");
  const Matrix w = s * h * s.transpose();
  const Vector sg = s * g;
  return x - (1.0 / smoothness_l) *
                 (s.transpose() * (pseudoinverse(w) * sg));
}

// Mean sketched minimum-norm bias against the ridge bias with penalty
// 1/gamma. ridge_valid is false when k reaches the rank of A (the gamma
// equation has no solution; the min-norm bias is still estimated).
struct BiasComparison {
  Vector mean_min_norm_bias;
  Vector ridge_bias;
  bool ridge_valid = false;
  double mc_std_of_mean = 0.0;
};

// Estimates E[argmin{|x| : SAx = Sb}] - x* over `trials` sketch draws and
// compares with the ridge bias (A^T A + I/gamma)^{-1} A^T b - x*.
inline BiasComparison min_norm_vs_ridge(const LinearSystem& sys,
                                        const SketchSpec& spec,
                                        std::size_t trials) {
  if (trials < 1) throw Error("at least one trial is required");
  const Vector x_star =
      sys.x_star ? *sys.x_star : Vector(pseudoinverse(sys.a) * sys.b);
  const auto m = static_cast<std::size_t>(sys.a.rows());
  const Eigen::Index n = sys.a.cols();

  PairwiseAccumulator<Vector> sum;
  PairwiseAccumulator<Vector> sum_sq;
  ordered_parallel_for<Vector>(
      trials, trial_thread_count(),
      [&](std::size_t t) {
        const Matrix s = draw_sketch(spec, m, t);
        const Matrix sa = s * sys.a;
        return Vector(pseudoinverse(sa) * (s * sys.b));
      },
      [&](std::size_t, Vector x) {
        sum_sq.add(x.cwiseProduct(x));
        sum.add(std::move(x));
      });

  BiasComparison out;
  const double t = static_cast<double>(trials);
  const Vector mean = sum.total() / t;
  out.mean_min_norm_bias = mean - x_star;
  if (trials > 1) {
    const Vector ex2 = sum_sq.total() / t;
    const double tr_cov =
        ((ex2 - mean.cwiseProduct(mean)).cwiseMax(0.0).sum()) * t / (t - 1.0);
    out.mc_std_of_mean = std::sqrt(tr_cov / t);
  }

  const Spectrum spectrum = spectrum_of(sys.a);
  const std::size_t rank = [&] {
    std::size_t r = 0;
    const double top = spectrum.values.front();
    const double cut = default_rank_tolerance(m, static_cast<std::size_t>(n));
    for (double v : spectrum.values)
      if (v > cut * cut * top) ++r;
    return r;
  }();
  if (spec.k < rank) {
    const GammaSolution g = solve_gamma(spectrum, spec.k);
    const Matrix reg = sys.a.transpose() * sys.a +
                       Matrix::Identity(n, n) / g.gamma;
    out.ridge_bias =
        reg.ldlt().solve(sys.a.transpose() * sys.b) - x_star;
    out.ridge_valid = true;
  } else {
    out.ridge_bias = Vector::Zero(n);
    out.ridge_valid = false;
  }
  return out;
}

}  // namespace sketchlab
