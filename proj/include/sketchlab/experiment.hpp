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
#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sketchlab/accumulate.hpp"
#include "sketchlab/errors.hpp"
#include "sketchlab/io.hpp"
#include "sketchlab/kernel.hpp"
#include "sketchlab/linalg.hpp"
#include "sketchlab/rng.hpp"
#include "sketchlab/sketch.hpp"
#include "sketchlab/solvers.hpp"
#include "sketchlab/spectrum.hpp"
#include "sketchlab/surrogate.hpp"
#include "sketchlab/types.hpp"

namespace sketchlab {

enum class ExperimentMode { LowRank, Nystrom, Kaczmarz, GammaTable };

// Full description of one experiment sweep. Exactly one of input_path and
// profile must be set; k_grid is strictly increasing; trials >= 1.
struct ExperimentConfig {
  std::string input_path;
  DecayProfile profile;
  bool has_profile = false;
  SketchFamily family = SketchFamily::Gaussian;
  std::uint64_t seed = 0;
  std::vector<std::size_t> k_grid;
  std::size_t trials = 10;
  ExperimentMode mode = ExperimentMode::LowRank;
  double sigma = 1.0;
  std::size_t steps = 5;
  std::string output_path;
  bool normalize = false;
  bool compute_epsilon = false;
  bool diagonal_realization = false;
  // Emit predicted and closed-form columns only; no matrix is realized for
  // profile inputs and no trials run. empirical columns are 0.
  bool predictions_only = false;
};

namespace detail {

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw Error("trials must be at least 1");
  if (cfg.k_grid.empty()) throw Error("k grid must not be empty");
  for (std::size_t i = 0; i + 1 < cfg.k_grid.size(); ++i)
    if (cfg.k_grid[i + 1] <= cfg.k_grid[i])
      throw Error("k grid must be strictly increasing");
  if (cfg.has_profile == !cfg.input_path.empty())
    throw Error("exactly one of an input path and a profile is required");
  if (cfg.mode == ExperimentMode::Kaczmarz && cfg.steps < 1)
    throw Error("kaczmarz mode needs at least one step");
}

// Data staged for a sweep: the realized matrix (a kernel matrix in nystrom
// mode, empty in gamma-table profile runs) and the spectrum driving all
// predictions.
struct StagedData {
  Matrix a;
  Spectrum spectrum;
  DecayKind kind = DecayKind::Explicit;
  bool closed_forms = false;
  double alpha = 0.0;
  double beta = 0.0;
};

inline StagedData stage_data(const ExperimentConfig& cfg) {
  StagedData d;
  if (cfg.has_profile) {
    DecayProfile p = cfg.profile;
    if (cfg.normalize) p.normalize_frobenius = true;
    d.spectrum = profile_spectrum(p);
    d.kind = p.kind;
    d.closed_forms = p.kind != DecayKind::Explicit;
    d.alpha = p.alpha;
    d.beta = p.beta;
    const std::size_t n = d.spectrum.values.size();
    if (cfg.predictions_only || cfg.mode == ExperimentMode::GammaTable) {
      // Predictions need only the spectrum.
    } else if (cfg.mode == ExperimentMode::Nystrom) {
      d.a = synthesize_psd(d.spectrum, n, cfg.seed);
    } else {
      if (cfg.diagonal_realization) {
        Vector root(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
          root(static_cast<Eigen::Index>(i)) = std::sqrt(d.spectrum.values[i]);
        d.a = root.asDiagonal();
      } else {
        d.a = synthesize_matrix(d.spectrum, n, n, cfg.seed);
      }
    }
  } else {
    Matrix loaded = load_matrix(cfg.input_path);
    if (cfg.mode == ExperimentMode::Nystrom) {
      Matrix kernel = rbf_kernel(loaded, KernelConfig{cfg.sigma});
      if (cfg.normalize) kernel /= kernel.norm();
      Eigen::SelfAdjointEigenSolver<Matrix> eig(kernel);
      if (eig.info() != Eigen::Success)
        throw NumericalFailure("kernel eigendecomposition failed");
      const Eigen::Index m = kernel.rows();
      d.spectrum.values.resize(static_cast<std::size_t>(m));
      for (Eigen::Index i = 0; i < m; ++i) {
        const double v = eig.eigenvalues()(m - 1 - i);
        d.spectrum.values[static_cast<std::size_t>(i)] = v > 0.0 ? v : 0.0;
      }
      d.a = std::move(kernel);
    } else {
      if (cfg.normalize) {
        const double norm = loaded.norm();
        if (norm == 0.0) throw ZeroMatrix("cannot normalize a zero matrix");
        loaded /= norm;
      }
      d.spectrum = spectrum_of(loaded);
      d.a = std::move(loaded);
    }
  }
  return d;
}

inline void warn_k_exceeds_rank(std::size_t k) {
  std::cerr << "warning: k=" << k
            << " reaches the positive spectrum size; predicted column omitted"
            << std::endl;
}

// Closed-form prediction for decay profiles; absent for explicit spectra,
// k = 0, and gamma-table mode uses the gamma variant instead.
inline std::optional<double> closed_form_error(const StagedData& d,
                                               std::size_t k) {
  if (!d.closed_forms || k == 0) return std::nullopt;
  if (d.kind == DecayKind::Exponential)
    return explicit_error_exponential(d.alpha, d.spectrum.scale_c, k);
  return explicit_error_polynomial(d.beta, d.spectrum.scale_c, k);
}

inline std::optional<double> closed_form_gamma(const StagedData& d,
                                               std::size_t k) {
  if (!d.closed_forms || k == 0) return std::nullopt;
  if (d.kind == DecayKind::Exponential)
    return explicit_gamma_exponential(d.alpha, d.spectrum.scale_c, k);
  return explicit_gamma_polynomial(d.beta, d.spectrum.scale_c, k);
}

// Mean and sample standard deviation of per-trial scalars, reduced in trial
// order by pairwise summation for thread-count independence.
template <typename Worker>
std::pair<double, double> empirical_stats(std::size_t trials,
                                          Worker&& worker) {
  std::vector<double> errors(trials);
  ordered_parallel_for<double>(trials, trial_thread_count(), worker,
                               [&](std::size_t t, double e) { errors[t] = e; });
  PairwiseAccumulator<double> sum;
  for (double e : errors) sum.add(e);
  const double mean = sum.total() / static_cast<double>(trials);
  double std_dev = 0.0;
  if (trials > 1) {
    PairwiseAccumulator<double> dev;
    for (double e : errors) dev.add((e - mean) * (e - mean));
    std_dev = std::sqrt(dev.total() / static_cast<double>(trials - 1));
  }
  return {mean, std_dev};
}

}  // namespace detail

// Runs the configured sweep, one row per k in k_grid. Deterministic given
// the seed: identical configs produce identical rows at every thread count.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  detail::validate_config(cfg);
  const detail::StagedData d = detail::stage_data(cfg);
  const auto m = static_cast<std::size_t>(d.a.rows());

  Matrix vt;
  if (cfg.mode == ExperimentMode::LowRank && cfg.compute_epsilon &&
      !cfg.predictions_only) {
    if (cfg.has_profile && cfg.diagonal_realization)
      vt = Matrix::Identity(d.a.cols(), d.a.cols());
    else
      vt = svd(d.a).vt;
  }

  // Kaczmarz runs share one synthetic system across the k grid.
  LinearSystem sys;
  double delta0_sq = 0.0;
  if (cfg.mode == ExperimentMode::Kaczmarz) {
    const Eigen::Index n =
        d.a.size() > 0 ? d.a.cols()
                       : static_cast<Eigen::Index>(d.spectrum.values.size());
    Vector x_star(n);
    for (Eigen::Index i = 0; i < n; ++i)
      x_star(i) = rng::normal(cfg.seed, rng::kStreamData, 0,
                              static_cast<std::uint32_t>(i), 0);
    delta0_sq = x_star.squaredNorm();
    if (!cfg.predictions_only) {
      sys.a = d.a;
      sys.b = d.a * x_star;
      sys.x_star = std::move(x_star);
    }
  }

  std::vector<ResultRow> rows;
  rows.reserve(cfg.k_grid.size());
  for (const std::size_t k : cfg.k_grid) {
    ResultRow row;
    row.k = k;
    const SketchSpec spec{cfg.family, k, cfg.seed};

    switch (cfg.mode) {
      case ExperimentMode::LowRank: {
        bool have_gamma = true;
        try {
          row.predicted = predict_frobenius_error(d.spectrum, k);
        } catch (const KExceedsRank&) {
          have_gamma = false;
          detail::warn_k_exceeds_rank(k);
        }
        row.closed_form = detail::closed_form_error(d, k);
        if (cfg.predictions_only) break;
        if (cfg.compute_epsilon && have_gamma) {
          const MonteCarloReport report = monte_carlo(
              d.a, spec, cfg.trials, surrogate_projection(d.spectrum, vt, k));
          row.empirical_mean = report.mean_error;
          row.empirical_std = report.std_error;
          row.epsilon_hat = report.epsilon_hat;
        } else {
          const auto [mean, std_dev] =
              detail::empirical_stats(cfg.trials, [&](std::size_t t) {
                return low_rank_error(d.a, draw_sketch(spec, m, t));
              });
          row.empirical_mean = mean;
          row.empirical_std = std_dev;
        }
        break;
      }
      case ExperimentMode::Nystrom: {
        try {
          row.predicted = predict_nystrom_error(d.spectrum, k);
        } catch (const KExceedsRank&) {
          detail::warn_k_exceeds_rank(k);
        }
        row.closed_form = detail::closed_form_error(d, k);
        if (cfg.predictions_only) break;
        const auto [mean, std_dev] =
            detail::empirical_stats(cfg.trials, [&](std::size_t t) {
              const Matrix s = draw_sketch(spec, m, t);
              return nystrom_trace_error(d.a, nystrom_approx(d.a, s));
            });
        row.empirical_mean = mean;
        row.empirical_std = std_dev;
        break;
      }
      case ExperimentMode::Kaczmarz: {
        try {
          const double rate = worst_case_rate(d.spectrum, k);
          row.predicted =
              std::pow(rate, static_cast<double>(cfg.steps)) * delta0_sq;
        } catch (const KExceedsRank&) {
          detail::warn_k_exceeds_rank(k);
        } catch (const SingularSystem&) {
          std::cerr << "warning: singular system, no worst-case rate"
                    << std::endl;
        }
        if (cfg.predictions_only) break;
        const KaczmarzRunReport report = kaczmarz_run(
            sys, spec, Vector::Zero(sys.a.cols()), cfg.steps, cfg.trials);
        row.empirical_mean = report.mean_sq_errors[cfg.steps];
        row.empirical_std = report.std_sq_errors[cfg.steps];
        break;
      }
      case ExperimentMode::GammaTable: {
        try {
          row.predicted = solve_gamma(d.spectrum, k).gamma;
        } catch (const KExceedsRank&) {
          detail::warn_k_exceeds_rank(k);
        }
        row.closed_form = detail::closed_form_gamma(d, k);
        row.empirical_mean = 0.0;
        row.empirical_std = 0.0;
        break;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Runs the sweep and writes the CSV when output_path is set.
inline std::vector<ResultRow> run_to_csv(const ExperimentConfig& cfg) {
  std::vector<ResultRow> rows = run_experiment(cfg);
  if (!cfg.output_path.empty()) write_csv(rows, cfg.output_path);
  return rows;
}

}  // namespace sketchlab
