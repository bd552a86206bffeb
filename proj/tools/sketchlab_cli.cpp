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

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sketchlab/sketchlab.hpp"

namespace {

struct Options {
  std::string input;
  std::string profile;
  std::string family = "gaussian";
  std::int64_t k = -1;
  std::string k_grid;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  double sigma = 1.0;
  std::size_t steps = 5;
  std::string out;
  bool normalize = false;
  bool epsilon = false;
  bool diagonal = false;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_real(const std::string& token, const std::string& what) {
  try {
    return sketchlab::detail::parse_double(token, 0);
  } catch (const sketchlab::ParseError&) {
    throw sketchlab::ParseError("invalid " + what + " '" + token + "'", 0);
  }
}

std::size_t parse_count(const std::string& token, const std::string& what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw sketchlab::ParseError("invalid " + what + " '" + token + "'", 0);
  return static_cast<std::size_t>(value);
}

// Profile grammar: exp:ALPHA:N[:C] | poly:BETA:N[:C] | flat:N.
sketchlab::DecayProfile parse_profile(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  sketchlab::DecayProfile p;
  const std::string& kind = parts.front();
  const auto need = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi)
      throw sketchlab::ParseError("malformed profile '" + text + "'", 0);
  };
  if (kind == "exp" || kind == "poly") {
    need(3, 4);
    const double decay = parse_real(parts[1], "decay parameter");
    if (kind == "exp") {
      p.kind = sketchlab::DecayKind::Exponential;
      p.alpha = decay;
    } else {
      p.kind = sketchlab::DecayKind::Polynomial;
      p.beta = decay;
    }
    p.length = parse_count(parts[2], "profile length");
    if (parts.size() == 4) p.c = parse_real(parts[3], "scale constant");
  } else if (kind == "flat") {
    need(2, 2);
    p.kind = sketchlab::DecayKind::Explicit;
    p.explicit_values.assign(parse_count(parts[1], "profile length"), 1.0);
  } else {
    throw sketchlab::ParseError("unknown profile kind '" + kind + "'", 0);
  }
  return p;
}

// Grid grammar: K | A:B (step 1) | A:B:STEP, bounds inclusive.
std::vector<std::size_t> parse_k_grid(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() > 3)
    throw sketchlab::ParseError("malformed k grid '" + text + "'", 0);
  if (parts.size() == 1) return {parse_count(parts[0], "sketch size")};
  const std::size_t lo = parse_count(parts[0], "grid start");
  const std::size_t hi = parse_count(parts[1], "grid end");
  const std::size_t step =
      parts.size() == 3 ? parse_count(parts[2], "grid step") : 1;
  if (step < 1 || hi < lo)
    throw sketchlab::ParseError("malformed k grid '" + text + "'", 0);
  std::vector<std::size_t> grid;
  for (std::size_t k = lo; k <= hi; k += step) grid.push_back(k);
  return grid;
}

void add_common(CLI::App* cmd, Options& opt, bool with_trials) {
  cmd->add_option("--input", opt.input, "libsvm or dense CSV data file");
  cmd->add_option("--profile", opt.profile,
                  "synthetic spectrum: exp:ALPHA:N[:C] | poly:BETA:N[:C] | "
                  "flat:N");
  cmd->add_option("--family", opt.family, "sketch family")
      ->check(CLI::IsMember({"gaussian", "rademacher"}));
  cmd->add_option("--k", opt.k, "single sketch size");
  cmd->add_option("--k-grid", opt.k_grid, "sketch sizes A:B:STEP (inclusive)");
  if (with_trials)
    cmd->add_option("--trials", opt.trials, "Monte Carlo trials (default 10)");
  cmd->add_option("--seed", opt.seed, "RNG seed (default 0)");
  cmd->add_option("--out", opt.out, "output CSV path (default stdout)");
  cmd->add_flag("--normalize", opt.normalize,
                "scale the data to unit Frobenius norm");
}

sketchlab::ExperimentConfig build_config(const Options& opt,
                                         sketchlab::ExperimentMode mode) {
  sketchlab::ExperimentConfig cfg;
  cfg.mode = mode;
  if (!opt.input.empty() && !opt.profile.empty())
    throw sketchlab::Error("pass exactly one of --input and --profile");
  if (!opt.profile.empty()) {
    cfg.profile = parse_profile(opt.profile);
    cfg.has_profile = true;
  } else if (!opt.input.empty()) {
    cfg.input_path = opt.input;
  } else {
    throw sketchlab::Error("pass one of --input and --profile");
  }
  if (opt.k >= 0 && !opt.k_grid.empty())
    throw sketchlab::Error("pass exactly one of --k and --k-grid");
  if (opt.k >= 0)
    cfg.k_grid = {static_cast<std::size_t>(opt.k)};
  else if (!opt.k_grid.empty())
    cfg.k_grid = parse_k_grid(opt.k_grid);
  else
    throw sketchlab::Error("pass one of --k and --k-grid");
  cfg.family = opt.family == "rademacher"
                   ? sketchlab::SketchFamily::Rademacher
                   : sketchlab::SketchFamily::Gaussian;
  cfg.seed = opt.seed;
  cfg.trials = opt.trials;
  cfg.sigma = opt.sigma;
  cfg.steps = opt.steps;
  cfg.output_path = opt.out;
  cfg.normalize = opt.normalize;
  cfg.compute_epsilon = opt.epsilon;
  cfg.diagonal_realization = opt.diagonal;
  return cfg;
}

int run(const Options& opt, sketchlab::ExperimentMode mode,
        bool predictions_only) {
  sketchlab::ExperimentConfig cfg = build_config(opt, mode);
  cfg.predictions_only = predictions_only;
  const std::vector<sketchlab::ResultRow> rows = sketchlab::run_to_csv(cfg);
  if (cfg.output_path.empty()) std::cout << sketchlab::format_csv(rows);
  for (const sketchlab::ResultRow& row : rows)
    if (row.predicted) return 0;
  return 3;  // every requested k exceeded the positive spectrum size
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sketchlab: sketched projections, solvers, and experiments"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* predict = app.add_subcommand(
      "predict", "theoretical low-rank error table (no trials)");
  add_common(predict, opt, false);

  CLI::App* mc = app.add_subcommand(
      "mc", "Monte Carlo low-rank approximation error vs prediction");
  add_common(mc, opt, true);
  mc->add_flag("--epsilon", opt.epsilon,
               "also estimate the surrogate discrepancy (costly)");
  mc->add_flag("--diag", opt.diagonal,
               "realize profiles as diagonal matrices");

  CLI::App* kaczmarz = app.add_subcommand(
      "kaczmarz", "sketch-and-project solver error vs worst-case envelope");
  add_common(kaczmarz, opt, true);
  kaczmarz->add_option("--steps", opt.steps, "solver steps (default 5)");
  kaczmarz->add_flag("--diag", opt.diagonal,
                     "realize profiles as diagonal matrices");

  CLI::App* nystrom = app.add_subcommand(
      "nystrom", "Nystrom trace-norm error vs prediction");
  add_common(nystrom, opt, true);
  nystrom->add_option("--sigma", opt.sigma, "RBF bandwidth (default 1)");

  CLI::App* gamma = app.add_subcommand(
      "gamma", "implicit vs closed-form gamma table (no trials)");
  add_common(gamma, opt, false);

  CLI11_PARSE(app, argc, argv);

  try {
    using sketchlab::ExperimentMode;
    if (predict->parsed()) return run(opt, ExperimentMode::LowRank, true);
    if (mc->parsed()) return run(opt, ExperimentMode::LowRank, false);
    if (kaczmarz->parsed()) return run(opt, ExperimentMode::Kaczmarz, false);
    if (nystrom->parsed()) return run(opt, ExperimentMode::Nystrom, false);
    return run(opt, ExperimentMode::GammaTable, true);
  } catch (const sketchlab::ParseError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const sketchlab::KExceedsRank& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
