// Copyright 2026 The hyptrade Authors
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

#ifndef HYPTRADE_OPTIMIZER_H_
#define HYPTRADE_OPTIMIZER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hyptrade/bayes.h"
#include "hyptrade/model.h"

namespace hyptrade {

// Slack allowed when comparing a utility rate with its threshold.
inline constexpr double kGuaranteeTolerance = 1e-9;

struct GuaranteeConfig {
  double lambda = 0.0;
  // Adds ln(8 p_max) / k to the threshold.
  bool include_correction = false;
  int k = 1;
  double s = 1.0;

  double EffectiveThreshold(const Prior& prior) const;
};

struct GuaranteeResult {
  bool pass = false;
  double margin = 0.0;  // utility_rate - threshold
  double utility_rate = 0.0;
  double threshold = 0.0;
};

// (1/k) min grouped utility Chernoff information against the threshold.
GuaranteeResult GuaranteeCheck(const OutputLaws& laws,
                               const GuaranteeConfig& config,
                               const Prior& prior);

// (1/k) min grouped privacy Chernoff information; +inf when a required
// evaluation is undefined (disjoint supports).
double PrivacyObjective(const OutputLaws& laws);

struct SearchConfig {
  int grid_points_per_parameter = 101;
  int restarts = 32;
  std::uint64_t seed = 2018;
  double local_step_tolerance = 1e-6;
  // Threads used for grid evaluation. Results do not depend on it.
  int workers = 1;
};

void ValidateSearchConfig(const SearchConfig& search);

// Free parameters of a kernel under the supply constraint. Rows with a single
// admissible output are fixed; a row with m admissible outputs contributes
// its first m - 1 output probabilities (outputs in ascending block order).
class KernelParameterization {
 public:
  struct FreeRow {
    std::size_t row;  // x_block * |Z|^k + z_block
    std::vector<std::size_t> outputs;
  };

  // Throws Error(kInfeasible) when some input pair has no admissible output.
  KernelParameterization(const Alphabet& x_alphabet, const Alphabet& z_alphabet,
                         int k, double s);

  int k() const { return k_; }
  double s() const { return s_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<FreeRow>& free_rows() const { return free_rows_; }
  const std::vector<std::vector<std::size_t>>& feasible_outputs() const {
    return feasible_;
  }

  bool InDomain(std::span<const double> params) const;
  PolicyKernel Build(std::span<const double> params) const;
  // Inverse of Build. Throws Error(kInvalidInput) if the kernel does not
  // satisfy this parameterization's constraint.
  std::vector<double> Extract(const PolicyKernel& kernel) const;
  // Parameters joined by ';'.
  static std::string Format(std::span<const double> params);

 private:
  Alphabet x_alphabet_;
  Alphabet z_alphabet_;
  int k_;
  double s_;
  std::vector<std::vector<std::size_t>> feasible_;
  std::vector<FreeRow> free_rows_;
  std::size_t dimension_ = 0;
};

struct TradeoffPoint {
  double lambda = 0.0;
  double s = 0.0;
  int k = 1;
  bool include_correction = false;
  double threshold = 0.0;
  double privacy_rate = 0.0;  // nats per slot
  double utility_rate = 0.0;  // nats per slot
  bool feasible = false;
  std::vector<double> params;
  PolicyKernel kernel;
  SearchConfig search;
};

// Minimizes the privacy Chernoff rate over kernels of one (k, s) geometry.
//
// With at most four free parameters every point of the product simplex grid
// is scored once at construction (the scores do not depend on lambda), and
// each Optimize call filters them by its threshold and zooms in on the best
// one with successively finer local grids. Larger geometries use seeded
// random starts followed by pairwise mass-transfer descent.
class PolicySearch {
 public:
  PolicySearch(const SourceModel& model, int k, double s,
               const SearchConfig& search);

  const KernelParameterization& parameterization() const { return param_; }
  bool exhaustive() const { return param_.dimension() <= kMaxGridDimension; }

  // `warm_starts` are extra candidate kernels of the same k; those outside
  // the constraint are ignored. `seed` drives the random starts.
  TradeoffPoint Optimize(double lambda, bool include_correction,
                         std::span<const PolicyKernel> warm_starts,
                         std::uint64_t seed) const;
  TradeoffPoint Optimize(double lambda, bool include_correction) const;

  static constexpr std::size_t kMaxGridDimension = 4;

 private:
  struct Score {
    double utility = 0.0;
    double privacy = 0.0;
  };
  struct Candidate {
    std::vector<double> params;
    Score score;
  };

  Score Evaluate(std::span<const double> params) const;
  std::vector<double> GridParams(std::size_t index) const;
  void ScoreGrid();
  Candidate Zoom(Candidate start, double threshold) const;
  Candidate Descend(Candidate start, double threshold) const;
  TradeoffPoint Finish(const Candidate& best, double lambda,
                       bool include_correction) const;

  SourceModel model_;
  SearchConfig search_;
  KernelParameterization param_;
  // Per law index: output-law contribution of the fixed rows, and the input
  // weight p(x^k | u,p) p(z^k) of every row.
  std::array<std::vector<double>, 4> fixed_part_;
  std::array<std::vector<double>, 4> row_weight_;
  // Per free row, its simplex grid as parameter slices.
  std::vector<std::vector<std::vector<double>>> row_grids_;
  std::size_t grid_size_ = 0;
  std::vector<Score> grid_scores_;
};

TradeoffPoint OptimizePolicy(const SourceModel& model,
                             const GuaranteeConfig& config,
                             const SearchConfig& search);

// Seed of the (lambda_index, s_index) sweep point.
std::uint64_t PointSeed(std::uint64_t seed, std::size_t lambda_index,
                        std::size_t s_index);

// One optimized point per (lambda, s) pair, ordered s-major then lambda, with
// `config.lambda` and `config.s` ignored. Once every point is optimized,
// each point also considers the kernels found for the other points, since a
// kernel feasible for a stricter guarantee or a smaller slack stays feasible
// for a looser one.
std::vector<TradeoffPoint> TradeoffSweep(const SourceModel& model,
                                         std::span<const double> lambdas,
                                         std::span<const double> s_values,
                                         const GuaranteeConfig& config,
                                         const SearchConfig& search);

struct MonotonicityReport {
  TradeoffPoint at_k;
  TradeoffPoint at_n;  // n = k * l
  // The l-fold repetition of the k-optimal kernel, judged at n.
  double extended_privacy_rate = 0.0;
  double extended_utility_rate = 0.0;
  bool extended_feasible = false;
  double slack = 1e-3;
  bool holds = false;  // at_k.privacy_rate >= at_n.privacy_rate - slack
};

// Compares optimized privacy rates at block lengths k and n = k * l. The
// n-level search is seeded with the repetition of the k-level optimum.
MonotonicityReport MonotonicityCheck(const SourceModel& model,
                                     const GuaranteeConfig& config, int l,
                                     const SearchConfig& search,
                                     double slack = 1e-3);

struct AsymptoticReport {
  TradeoffPoint best;
  std::vector<TradeoffPoint> per_k;
  // Always true: a finite-k optimum only bounds the asymptotic minimum
  // privacy error exponent from above.
  bool upper_bound = true;
};

AsymptoticReport AsymptoticGuarantee(const SourceModel& model,
                                     const GuaranteeConfig& config, int k_max,
                                     const SearchConfig& search);

}  // namespace hyptrade

#endif  // HYPTRADE_OPTIMIZER_H_
