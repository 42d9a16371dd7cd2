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

#include "hyptrade/optimizer.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "hyptrade/divergence.h"
#include "hyptrade/error.h"
#include "hyptrade/numeric.h"
#include "hyptrade/sampling.h"

namespace hyptrade {
namespace {

// The search accepts slightly less slack than the final re-check so that a
// kernel it accepts is never rejected by the independent recomputation.
constexpr double kSearchFeasibilityTolerance = 0.5 * kGuaranteeTolerance;
// Grids larger than this are refused rather than enumerated.
constexpr double kMaxGridPoints = 5e7;
constexpr std::size_t kDescentStarts = 4;
constexpr std::size_t kMaxDescentEvaluations = 200000;

double GroupedChernoffRate(const std::array<std::vector<double>, 4>& laws,
                           TestTarget target, int k) {
  double best = kInf;
  for (std::size_t first : GroupMembers(target, 1)) {
    for (std::size_t second : GroupMembers(target, 0)) {
      best = std::min(
          best, Chernoff(laws[first], laws[second], ZeroPolicy::kAllowZeros)
                    .value);
    }
  }
  return best / k;
}

}  // namespace

double GuaranteeConfig::EffectiveThreshold(const Prior& prior) const {
  double threshold = lambda;
  if (include_correction) threshold += std::log(8.0 * prior.pmax()) / k;
  return threshold;
}

GuaranteeResult GuaranteeCheck(const OutputLaws& laws,
                               const GuaranteeConfig& config,
                               const Prior& prior) {
  if (config.k != laws.k) {
    throw Error(ErrorCode::kInvalidInput,
                "guarantee configured for k = " + std::to_string(config.k) +
                    " but laws have k = " + std::to_string(laws.k));
  }
  if (!(config.lambda >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "lambda must be non-negative");
  }
  GuaranteeResult result;
  result.utility_rate =
      MinGroupedChernoff(laws, TestTarget::kUtility).value / laws.k;
  result.threshold = config.EffectiveThreshold(prior);
  result.margin = result.utility_rate - result.threshold;
  result.pass = result.margin >= -kGuaranteeTolerance;
  return result;
}

double PrivacyObjective(const OutputLaws& laws) {
  return MinGroupedChernoff(laws, TestTarget::kPrivacy).value / laws.k;
}

void ValidateSearchConfig(const SearchConfig& search) {
  if (search.grid_points_per_parameter < 2) {
    throw Error(ErrorCode::kInvalidInput,
                "need at least 2 grid points per parameter");
  }
  if (search.restarts < 1) {
    throw Error(ErrorCode::kInvalidInput, "need at least one restart");
  }
  if (!(search.local_step_tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidInput,
                "local step tolerance must be positive");
  }
  if (search.workers < 1) {
    throw Error(ErrorCode::kInvalidInput, "need at least one worker");
  }
}

KernelParameterization::KernelParameterization(const Alphabet& x_alphabet,
                                               const Alphabet& z_alphabet,
                                               int k, double s)
    : x_alphabet_(x_alphabet), z_alphabet_(z_alphabet), k_(k), s_(s) {
  CheckFeasibleGeometry(x_alphabet, z_alphabet, k, s);
  feasible_ = FeasibleOutputTable(x_alphabet, z_alphabet, k, s);
  for (std::size_t r = 0; r < feasible_.size(); ++r) {
    if (feasible_[r].size() >= 2) {
      free_rows_.push_back({r, feasible_[r]});
      dimension_ += feasible_[r].size() - 1;
    }
  }
}

bool KernelParameterization::InDomain(std::span<const double> params) const {
  if (params.size() != dimension_) return false;
  std::size_t offset = 0;
  for (const FreeRow& fr : free_rows_) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < fr.outputs.size(); ++i) {
      const double p = params[offset + i];
      if (!(p >= 0.0) || p > 1.0) return false;
      sum += p;
    }
    if (sum > 1.0 + 1e-12) return false;
    offset += fr.outputs.size() - 1;
  }
  return true;
}

PolicyKernel KernelParameterization::Build(
    std::span<const double> params) const {
  if (!InDomain(params)) {
    throw Error(ErrorCode::kInvalidInput,
                "kernel parameters are outside the simplex product");
  }
  const std::size_t xb = BlockCount(x_alphabet_.size(), k_);
  std::vector<double> weights(feasible_.size() * xb, 0.0);
  for (std::size_t r = 0; r < feasible_.size(); ++r) {
    if (feasible_[r].size() == 1) weights[r * xb + feasible_[r][0]] = 1.0;
  }
  std::size_t offset = 0;
  for (const FreeRow& fr : free_rows_) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < fr.outputs.size(); ++i) {
      weights[fr.row * xb + fr.outputs[i]] = params[offset + i];
      sum += params[offset + i];
    }
    weights[fr.row * xb + fr.outputs.back()] = std::max(0.0, 1.0 - sum);
    offset += fr.outputs.size() - 1;
  }
  return PolicyKernel(x_alphabet_, z_alphabet_, k_, s_, std::move(weights));
}

std::vector<double> KernelParameterization::Extract(
    const PolicyKernel& kernel) const {
  if (kernel.k() != k_ || !(kernel.x_alphabet() == x_alphabet_) ||
      !(kernel.z_alphabet() == z_alphabet_)) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "kernel shape differs from the parameterization");
  }
  RequireValidPolicy(kernel.WithSlack(s_));
  std::vector<double> params;
  params.reserve(dimension_);
  const std::size_t xb = kernel.x_blocks();
  for (const FreeRow& fr : free_rows_) {
    for (std::size_t i = 0; i + 1 < fr.outputs.size(); ++i) {
      params.push_back(kernel.weights()[fr.row * xb + fr.outputs[i]]);
    }
  }
  return params;
}

std::string KernelParameterization::Format(std::span<const double> params) {
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i > 0) out += ";";
    out += FormatDouble(params[i]);
  }
  return out;
}

PolicySearch::PolicySearch(const SourceModel& model, int k, double s,
                           const SearchConfig& search)
    : model_(model),
      search_(search),
      param_(model.x_alphabet(), model.z_alphabet(), k, s) {
  ValidateSearchConfig(search);
  const std::size_t xb = BlockCount(model.x_alphabet().size(), k);
  const std::size_t zb = BlockCount(model.z_alphabet().size(), k);
  std::vector<double> noise_blocks(zb);
  for (std::size_t z = 0; z < zb; ++z) {
    double w = 1.0;
    for (std::size_t sym : DecodeBlock(z, model.z_alphabet().size(), k)) {
      w *= model.noise()[sym];
    }
    noise_blocks[z] = w;
  }
  for (int u = 0; u < 2; ++u) {
    for (int p = 0; p < 2; ++p) {
      const std::size_t j = LawIndex(u, p);
      const auto source = model.source(u, p);
      row_weight_[j].assign(xb * zb, 0.0);
      fixed_part_[j].assign(xb, 0.0);
      for (std::size_t x = 0; x < xb; ++x) {
        double wx = 1.0;
        for (std::size_t sym : DecodeBlock(x, source.size(), k)) {
          wx *= source[sym];
        }
        for (std::size_t z = 0; z < zb; ++z) {
          const std::size_t r = x * zb + z;
          row_weight_[j][r] = wx * noise_blocks[z];
          const auto& outs = param_.feasible_outputs()[r];
          if (outs.size() == 1) fixed_part_[j][outs[0]] += row_weight_[j][r];
        }
      }
    }
  }
  if (exhaustive()) ScoreGrid();
}

PolicySearch::Score PolicySearch::Evaluate(
    std::span<const double> params) const {
  std::array<std::vector<double>, 4> laws = fixed_part_;
  std::size_t offset = 0;
  for (const auto& fr : param_.free_rows()) {
    const std::size_t m = fr.outputs.size();
    double rest = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      double w;
      if (i + 1 < m) {
        w = params[offset + i];
        rest -= w;
      } else {
        w = std::max(0.0, rest);
      }
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < 4; ++j) {
        laws[j][fr.outputs[i]] += row_weight_[j][fr.row] * w;
      }
    }
    offset += m - 1;
  }
  const int k = param_.k();
  return {GroupedChernoffRate(laws, TestTarget::kUtility, k),
          GroupedChernoffRate(laws, TestTarget::kPrivacy, k)};
}

std::vector<double> PolicySearch::GridParams(std::size_t index) const {
  std::vector<std::size_t> digits(row_grids_.size());
  for (std::size_t i = row_grids_.size(); i-- > 0;) {
    digits[i] = index % row_grids_[i].size();
    index /= row_grids_[i].size();
  }
  std::vector<double> params;
  params.reserve(param_.dimension());
  for (std::size_t i = 0; i < row_grids_.size(); ++i) {
    const auto& slice = row_grids_[i][digits[i]];
    params.insert(params.end(), slice.begin(), slice.end());
  }
  return params;
}

void PolicySearch::ScoreGrid() {
  const int resolution = search_.grid_points_per_parameter - 1;
  double total = 1.0;
  for (const auto& fr : param_.free_rows()) {
    std::vector<std::vector<double>> slices;
    const int parts = static_cast<int>(fr.outputs.size());
    ForEachComposition(parts, resolution, [&](std::span<const int> counts) {
      std::vector<double> slice(parts - 1);
      for (int i = 0; i + 1 < parts; ++i) {
        slice[i] = static_cast<double>(counts[i]) / resolution;
      }
      slices.push_back(std::move(slice));
    });
    total *= static_cast<double>(slices.size());
    if (total > kMaxGridPoints) {
      throw Error(ErrorCode::kSizeCap,
                  "policy grid exceeds " + FormatDouble(kMaxGridPoints) +
                      " points; lower grid_points_per_parameter");
    }
    row_grids_.push_back(std::move(slices));
  }
  grid_size_ = static_cast<std::size_t>(total);
  grid_scores_.resize(grid_size_);

  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(search_.workers), grid_size_);
  auto score_range = [this](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      grid_scores_[i] = Evaluate(GridParams(i));
    }
  };
  if (workers <= 1) {
    score_range(0, grid_size_);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> failures(workers);
  const std::size_t chunk = (grid_size_ + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(grid_size_, begin + chunk);
    threads.emplace_back([&, w, begin, end] {
      try {
        score_range(begin, end);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

namespace {

struct Ranking {
  double threshold;

  bool Feasible(double utility) const {
    return utility >= threshold - kSearchFeasibilityTolerance;
  }
  // Feasible beats infeasible; then lower privacy, or higher utility while
  // still infeasible.
  template <typename S>
  bool Better(const S& a, const S& b) const {
    const bool fa = Feasible(a.utility);
    const bool fb = Feasible(b.utility);
    if (fa != fb) return fa;
    if (fa) return a.privacy < b.privacy;
    return a.utility > b.utility;
  }
};

}  // namespace

PolicySearch::Candidate PolicySearch::Zoom(Candidate start,
                                           double threshold) const {
  const std::size_t d = param_.dimension();
  if (d == 0) return start;
  const Ranking rank{threshold};
  constexpr int kHalfWidth = 4;
  constexpr int kSide = 2 * kHalfWidth + 1;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < d; ++i) combos *= kSide;

  double step = 1.0 / (search_.grid_points_per_parameter - 1);
  Candidate best = std::move(start);
  std::vector<double> trial(d);
  while (step > search_.local_step_tolerance) {
    const double spacing = step / kHalfWidth;
    const std::vector<double> center = best.params;
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t rest = c;
      bool moved = false;
      for (std::size_t i = 0; i < d; ++i) {
        const int offset = static_cast<int>(rest % kSide) - kHalfWidth;
        rest /= kSide;
        trial[i] = center[i] + offset * spacing;
        moved |= offset != 0;
      }
      if (!moved || !param_.InDomain(trial)) continue;
      const Score score = Evaluate(trial);
      if (rank.Better(score, best.score)) best = {trial, score};
    }
    step *= 0.5;
  }
  return best;
}

PolicySearch::Candidate PolicySearch::Descend(Candidate start,
                                              double threshold) const {
  const Ranking rank{threshold};
  const auto& rows = param_.free_rows();
  // Full per-row pmfs; parameters drop the last entry of each.
  std::vector<std::vector<double>> pmfs;
  std::size_t offset = 0;
  for (const auto& fr : rows) {
    std::vector<double> pmf(fr.outputs.size());
    double rest = 1.0;
    for (std::size_t i = 0; i + 1 < pmf.size(); ++i) {
      pmf[i] = start.params[offset + i];
      rest -= pmf[i];
    }
    pmf.back() = std::max(0.0, rest);
    pmfs.push_back(std::move(pmf));
    offset += fr.outputs.size() - 1;
  }
  auto to_params = [&] {
    std::vector<double> params;
    params.reserve(param_.dimension());
    for (const auto& pmf : pmfs) params.insert(params.end(), pmf.begin(), pmf.end() - 1);
    return params;
  };

  Candidate best = std::move(start);
  std::size_t evaluations = 0;
  double step = 0.25;
  while (step > search_.local_step_tolerance &&
         evaluations < kMaxDescentEvaluations) {
    bool improved = false;
    for (auto& pmf : pmfs) {
      for (std::size_t to = 0; to < pmf.size(); ++to) {
        for (std::size_t from = 0; from < pmf.size(); ++from) {
          if (to == from || pmf[from] <= 0.0) continue;
          const double amount = std::min(step, pmf[from]);
          pmf[to] += amount;
          pmf[from] -= amount;
          std::vector<double> params = to_params();
          ++evaluations;
          const Score score = Evaluate(params);
          if (rank.Better(score, best.score)) {
            best = {std::move(params), score};
            improved = true;
          } else {
            pmf[to] -= amount;
            pmf[from] += amount;
          }
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

TradeoffPoint PolicySearch::Finish(const Candidate& best, double lambda,
                                   bool include_correction) const {
  PolicyKernel kernel = param_.Build(best.params);
  const OutputLaws laws = InducedOutputLaws(model_, kernel);
  const GuaranteeConfig config{lambda, include_correction, param_.k(),
                               param_.s()};
  const GuaranteeResult guarantee =
      GuaranteeCheck(laws, config, model_.prior());
  return TradeoffPoint{lambda,
                       param_.s(),
                       param_.k(),
                       include_correction,
                       guarantee.threshold,
                       PrivacyObjective(laws),
                       guarantee.utility_rate,
                       guarantee.pass,
                       best.params,
                       std::move(kernel),
                       search_};
}

TradeoffPoint PolicySearch::Optimize(double lambda,
                                     bool include_correction) const {
  return Optimize(lambda, include_correction, {}, search_.seed);
}

TradeoffPoint PolicySearch::Optimize(double lambda, bool include_correction,
                                     std::span<const PolicyKernel> warm_starts,
                                     std::uint64_t seed) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidInput, "lambda must be finite and >= 0");
  }
  const GuaranteeConfig config{lambda, include_correction, param_.k(),
                               param_.s()};
  const double threshold = config.EffectiveThreshold(model_.prior());
  const Ranking rank{threshold};

  std::vector<Candidate> starts;
  for (const PolicyKernel& kernel : warm_starts) {
    std::vector<double> params;
    try {
      params = param_.Extract(kernel);
    } catch (const Error&) {
      continue;
    }
    const Score score = Evaluate(params);
    starts.push_back({std::move(params), score});
  }

  if (exhaustive()) {
    std::size_t best_index = 0;
    for (std::size_t i = 1; i < grid_size_; ++i) {
      if (rank.Better(grid_scores_[i], grid_scores_[best_index])) best_index = i;
    }
    Candidate best{GridParams(best_index), grid_scores_[best_index]};
    for (const Candidate& c : starts) {
      if (rank.Better(c.score, best.score)) best = c;
    }
    return Finish(Zoom(std::move(best), threshold), lambda, include_correction);
  }

  std::mt19937_64 rng(seed);
  for (int r = 0; r < search_.restarts; ++r) {
    std::vector<double> params;
    params.reserve(param_.dimension());
    for (const auto& fr : param_.free_rows()) {
      const std::vector<double> draw =
          RandomSimplexPoint(rng, fr.outputs.size());
      params.insert(params.end(), draw.begin(), draw.end() - 1);
    }
    const Score score = Evaluate(params);
    starts.push_back({std::move(params), score});
  }
  std::stable_sort(starts.begin(), starts.end(),
                   [&](const Candidate& a, const Candidate& b) {
                     return rank.Better(a.score, b.score);
                   });
  Candidate best = starts.front();
  const std::size_t runs = std::min(kDescentStarts, starts.size());
  for (std::size_t i = 0; i < runs; ++i) {
    Candidate local = Descend(starts[i], threshold);
    if (rank.Better(local.score, best.score)) best = std::move(local);
  }
  return Finish(best, lambda, include_correction);
}

TradeoffPoint OptimizePolicy(const SourceModel& model,
                             const GuaranteeConfig& config,
                             const SearchConfig& search) {
  if (config.k > kDefaultBlockCap) {
    throw Error(ErrorCode::kSizeCap,
                "block length " + std::to_string(config.k) +
                    " exceeds the search cap of " +
                    std::to_string(kDefaultBlockCap));
  }
  PolicySearch searcher(model, config.k, config.s, search);
  return searcher.Optimize(config.lambda, config.include_correction, {},
                           search.seed);
}

std::uint64_t PointSeed(std::uint64_t seed, std::size_t lambda_index,
                        std::size_t s_index) {
  return SplitMix64(seed ^ SplitMix64((static_cast<std::uint64_t>(s_index)
                                       << 32) ^
                                      lambda_index));
}

std::vector<TradeoffPoint> TradeoffSweep(const SourceModel& model,
                                         std::span<const double> lambdas,
                                         std::span<const double> s_values,
                                         const GuaranteeConfig& config,
                                         const SearchConfig& search) {
  if (config.k > kDefaultBlockCap) {
    throw Error(ErrorCode::kSizeCap, "block length exceeds the search cap");
  }
  std::vector<TradeoffPoint> points;
  points.reserve(lambdas.size() * s_values.size());
  for (std::size_t si = 0; si < s_values.size(); ++si) {
    const PolicySearch searcher(model, config.k, s_values[si], search);
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      points.push_back(searcher.Optimize(lambdas[li], config.include_correction,
                                         {}, PointSeed(search.seed, li, si)));
    }
  }

  // Cross-point candidate exchange, repeated until nothing changes.
  bool changed = true;
  for (int pass = 0; changed && pass < 4; ++pass) {
    changed = false;
    for (TradeoffPoint& target : points) {
      const KernelParameterization param(model.x_alphabet(), model.z_alphabet(),
                                         config.k, target.s);
      for (const TradeoffPoint& source : points) {
        if (&source == &target || !source.feasible) continue;
        PolicyKernel kernel = source.kernel.WithSlack(target.s);
        if (!ValidatePolicy(kernel).ok()) continue;
        const OutputLaws laws = InducedOutputLaws(model, kernel);
        const GuaranteeResult g = GuaranteeCheck(
            laws,
            {target.lambda, target.include_correction, config.k, target.s},
            model.prior());
        if (!g.pass) continue;
        const double privacy = PrivacyObjective(laws);
        if (!target.feasible || privacy < target.privacy_rate) {
          target.params = param.Extract(kernel);
          target.kernel = std::move(kernel);
          target.privacy_rate = privacy;
          target.utility_rate = g.utility_rate;
          target.feasible = true;
          changed = true;
        }
      }
    }
  }
  return points;
}

MonotonicityReport MonotonicityCheck(const SourceModel& model,
                                     const GuaranteeConfig& config, int l,
                                     const SearchConfig& search,
                                     double slack) {
  if (l < 1) throw Error(ErrorCode::kInvalidInput, "need l >= 1");
  const int n = config.k * l;
  if (n > kDefaultBlockCap) {
    throw Error(ErrorCode::kSizeCap,
                "n = k * l = " + std::to_string(n) + " exceeds the block cap");
  }
  MonotonicityReport report{OptimizePolicy(model, config, search),
                            OptimizePolicy(model, config, search)};
  report.slack = slack;
  const PolicyKernel extended = BlockwiseExtend(report.at_k.kernel, l);
  const OutputLaws laws = InducedOutputLaws(model, extended);
  GuaranteeConfig at_n = config;
  at_n.k = n;
  const GuaranteeResult g = GuaranteeCheck(laws, at_n, model.prior());
  report.extended_privacy_rate = PrivacyObjective(laws);
  report.extended_utility_rate = g.utility_rate;
  report.extended_feasible = g.pass;
  if (l > 1) {
    const PolicySearch searcher(model, n, config.s, search);
    const PolicyKernel warm[] = {extended};
    report.at_n = searcher.Optimize(config.lambda, config.include_correction,
                                    warm, search.seed);
  }
  report.holds =
      report.at_k.privacy_rate >= report.at_n.privacy_rate - report.slack;
  return report;
}

AsymptoticReport AsymptoticGuarantee(const SourceModel& model,
                                     const GuaranteeConfig& config, int k_max,
                                     const SearchConfig& search) {
  if (k_max < 1 || k_max > kDefaultBlockCap) {
    throw Error(ErrorCode::kSizeCap,
                "k_max must lie in [1, " + std::to_string(kDefaultBlockCap) +
                    "]");
  }
  AsymptoticReport report{OptimizePolicy(model, {config.lambda,
                                                 config.include_correction, 1,
                                                 config.s},
                                         search),
                          {}};
  report.per_k.push_back(report.best);
  for (int k = 2; k <= k_max; ++k) {
    std::vector<PolicyKernel> warm;
    for (int d = 1; d < k; ++d) {
      if (k % d == 0) warm.push_back(BlockwiseExtend(report.per_k[d - 1].kernel, k / d));
    }
    const PolicySearch searcher(model, k, config.s, search);
    report.per_k.push_back(searcher.Optimize(
        config.lambda, config.include_correction, warm, search.seed));
  }
  for (const TradeoffPoint& p : report.per_k) {
    const bool better = p.feasible && (!report.best.feasible ||
                                       p.privacy_rate < report.best.privacy_rate);
    if (better) report.best = p;
  }
  return report;
}

}  // namespace hyptrade
