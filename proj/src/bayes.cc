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

#include "hyptrade/bayes.h"

#include <algorithm>
#include <cmath>

#include "hyptrade/divergence.h"
#include "hyptrade/error.h"
#include "hyptrade/numeric.h"

namespace hyptrade {
namespace {

void RequireSingleSlot(const OutputLaws& laws, const char* what) {
  if (laws.k != 1) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + " needs per-slot laws (k = 1), got k = " +
                    std::to_string(laws.k));
  }
}

void RequireFullSupport(const OutputLaws& laws, const char* what) {
  if (!laws.full_support()) {
    throw Error(ErrorCode::kSupport,
                std::string(what) + " needs full-support laws");
  }
}

std::array<std::vector<double>, 4> LogLaws(const OutputLaws& laws) {
  std::array<std::vector<double>, 4> logs;
  for (std::size_t j = 0; j < 4; ++j) {
    logs[j].resize(laws.laws[j].size());
    for (std::size_t y = 0; y < logs[j].size(); ++y) {
      const double w = laws.laws[j][y];
      logs[j][y] = w > 0.0 ? std::log(w) : kNegInf;
    }
  }
  return logs;
}

std::array<double, 4> LogPrior(const std::array<double, 4>& weights) {
  std::array<double, 4> out;
  for (std::size_t j = 0; j < 4; ++j) {
    out[j] = weights[j] > 0.0 ? std::log(weights[j]) : kNegInf;
  }
  return out;
}

// ln of the prior-weighted likelihood of hypothesis value h.
double GroupLogMass(TestTarget target, int h,
                    const std::array<double, 4>& log_prior,
                    const std::array<double, 4>& log_likelihood) {
  const auto members = GroupMembers(target, h);
  const double terms[2] = {log_prior[members[0]] + log_likelihood[members[0]],
                           log_prior[members[1]] + log_likelihood[members[1]]};
  return LogSumExp(terms);
}

ErrorProbability FromLog(double log_value) {
  return {std::exp(log_value), log_value};
}

}  // namespace

const char* TargetName(TestTarget target) {
  return target == TestTarget::kUtility ? "utility" : "privacy";
}

TestTarget ParseTarget(const std::string& name) {
  if (name == "utility") return TestTarget::kUtility;
  if (name == "privacy") return TestTarget::kPrivacy;
  throw Error(ErrorCode::kInvalidInput,
              "target must be 'utility' or 'privacy', got '" + name + "'");
}

std::array<std::size_t, 2> GroupMembers(TestTarget target, int h) {
  if (target == TestTarget::kUtility) return {LawIndex(h, 0), LawIndex(h, 1)};
  return {LawIndex(0, h), LawIndex(1, h)};
}

TypeVector TypeVector::Create(std::vector<int> counts) {
  int n = 0;
  for (int c : counts) {
    if (c < 0) throw Error(ErrorCode::kInvalidInput, "negative type count");
    n += c;
  }
  return {std::move(counts), n};
}

std::vector<double> TypeVector::Empirical() const {
  if (n <= 0) throw Error(ErrorCode::kInvalidInput, "empty type");
  std::vector<double> t(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    t[i] = static_cast<double>(counts[i]) / n;
  }
  return t;
}

const char* MethodName(ExponentMethod method) {
  switch (method) {
    case ExponentMethod::kChernoff:
      return "chernoff";
    case ExponentMethod::kTForm:
      return "t-form";
    case ExponentMethod::kSanov:
      return "sanov";
  }
  return "unknown";
}

int MapDecision(std::span<const double> observation, const OutputLaws& laws,
                const std::array<double, 4>& prior_weights,
                TestTarget target) {
  const std::size_t k = static_cast<std::size_t>(laws.k);
  if (observation.empty() || observation.size() % k != 0) {
    throw Error(ErrorCode::kInvalidInput,
                "observation length " + std::to_string(observation.size()) +
                    " is not a positive multiple of the block length " +
                    std::to_string(k));
  }
  for (double w : prior_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidInput, "prior weights must be >= 0");
    }
  }
  const auto logs = LogLaws(laws);
  std::array<double, 4> log_likelihood{};
  std::vector<std::size_t> symbols(k);
  for (std::size_t start = 0; start < observation.size(); start += k) {
    for (std::size_t i = 0; i < k; ++i) {
      symbols[i] = laws.x_alphabet.IndexOrThrow(observation[start + i]);
    }
    const std::size_t block = EncodeBlock(symbols, laws.x_alphabet.size());
    for (std::size_t j = 0; j < 4; ++j) log_likelihood[j] += logs[j][block];
  }
  const auto log_prior = LogPrior(prior_weights);
  const double mass0 = GroupLogMass(target, 0, log_prior, log_likelihood);
  const double mass1 = GroupLogMass(target, 1, log_prior, log_likelihood);
  return mass0 >= mass1 ? 0 : 1;
}

int MapDecision(std::span<const double> observation, const OutputLaws& laws,
                const Prior& prior, TestTarget target) {
  return MapDecision(observation, laws, prior.joint(), target);
}

ErrorProbability ExactMinError(const OutputLaws& laws, const Prior& prior,
                               TestTarget target, int n_blocks,
                               double enumeration_cap) {
  if (n_blocks < 1) {
    throw Error(ErrorCode::kInvalidInput, "need at least one block");
  }
  const double sequences =
      std::pow(static_cast<double>(laws.blocks()), n_blocks);
  if (sequences > enumeration_cap) {
    throw Error(ErrorCode::kSizeCap,
                "enumerating " + FormatDouble(sequences) +
                    " sequences exceeds the cap of " +
                    FormatDouble(enumeration_cap) +
                    "; use the type-class method (k = 1) instead");
  }
  const auto logs = LogLaws(laws);
  const auto log_prior = LogPrior(prior.joint());
  const std::size_t blocks = laws.blocks();

  // Depth-first walk over block sequences; partial[d] holds the four
  // log-likelihoods of the first d blocks.
  std::vector<std::array<double, 4>> partial(n_blocks + 1);
  partial[0] = {0.0, 0.0, 0.0, 0.0};
  std::vector<std::size_t> choice(n_blocks, 0);
  LogSumAccumulator total;
  int depth = 0;
  while (true) {
    if (depth == n_blocks) {
      const double mass0 = GroupLogMass(target, 0, log_prior, partial[depth]);
      const double mass1 = GroupLogMass(target, 1, log_prior, partial[depth]);
      total.Add(std::min(mass0, mass1));
      // Backtrack to the deepest position with an untried block.
      --depth;
      while (depth >= 0 && ++choice[depth] == blocks) {
        choice[depth] = 0;
        --depth;
      }
      if (depth < 0) break;
    }
    for (std::size_t j = 0; j < 4; ++j) {
      partial[depth + 1][j] = partial[depth][j] + logs[j][choice[depth]];
    }
    ++depth;
  }
  return FromLog(total.Total());
}

ErrorProbability ExactMinErrorIid(const OutputLaws& laws, const Prior& prior,
                                  TestTarget target, int n) {
  RequireSingleSlot(laws, "type-class enumeration");
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "need n >= 1");
  const auto logs = LogLaws(laws);
  const auto log_prior = LogPrior(prior.joint());
  const double log_n_factorial = std::lgamma(n + 1.0);
  LogSumAccumulator total;
  std::array<double, 4> log_class{};
  ForEachComposition(
      static_cast<int>(laws.blocks()), n, [&](std::span<const int> counts) {
        double log_multinomial = log_n_factorial;
        for (int c : counts) log_multinomial -= std::lgamma(c + 1.0);
        for (std::size_t j = 0; j < 4; ++j) {
          double lp = log_multinomial;
          for (std::size_t a = 0; a < counts.size(); ++a) {
            if (counts[a] > 0) lp += counts[a] * logs[j][a];
          }
          log_class[j] = lp;
        }
        const double mass0 = GroupLogMass(target, 0, log_prior, log_class);
        const double mass1 = GroupLogMass(target, 1, log_prior, log_class);
        total.Add(std::min(mass0, mass1));
      });
  return FromLog(total.Total());
}

int TypeTestDecision(const TypeVector& type, const OutputLaws& laws,
                     TestTarget target) {
  RequireSingleSlot(laws, "type test");
  if (type.counts.size() != laws.blocks()) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "type and laws have different alphabets");
  }
  const std::vector<double> t = type.Empirical();
  double nearest[2];
  for (int h = 0; h < 2; ++h) {
    nearest[h] = kInf;
    for (std::size_t j : GroupMembers(target, h)) {
      nearest[h] = std::min(
          nearest[h], KlDivergence(t, laws.laws[j], ZeroPolicy::kAllowZeros));
    }
  }
  return nearest[0] > nearest[1] ? 1 : 0;
}

ExponentReport MinGroupedChernoff(const OutputLaws& laws, TestTarget target) {
  ExponentReport best{kInf, {}, ExponentMethod::kChernoff};
  for (std::size_t first : GroupMembers(target, 1)) {
    for (std::size_t second : GroupMembers(target, 0)) {
      const double c =
          Chernoff(laws.laws[first], laws.laws[second], ZeroPolicy::kAllowZeros)
              .value;
      if (c < best.value) best = {c, {first, second}, ExponentMethod::kChernoff};
    }
  }
  return best;
}

ExponentReport ExponentTheorem1(const OutputLaws& laws, TestTarget target) {
  ExponentReport report = MinGroupedChernoff(laws, target);
  report.value /= laws.k;
  return report;
}

ExponentReport ExponentT(const OutputLaws& laws, TestTarget target) {
  RequireSingleSlot(laws, "T-form exponent");
  RequireFullSupport(laws, "T-form exponent");
  ExponentReport best{kInf, {}, ExponentMethod::kTForm};
  for (int h = 0; h < 2; ++h) {
    const auto others = GroupMembers(target, 1 - h);
    for (std::size_t own : GroupMembers(target, h)) {
      for (int i = 0; i < 2; ++i) {
        const double t = TDivergence(laws.laws[own], laws.laws[others[i]],
                                     laws.laws[others[1 - i]])
                             .value;
        if (t < best.value) best = {t, {own, others[i]}, ExponentMethod::kTForm};
      }
    }
  }
  return best;
}

ExponentReport ExponentSanov(const OutputLaws& laws, TestTarget target,
                             double grid_step) {
  RequireSingleSlot(laws, "Sanov-form exponent");
  RequireFullSupport(laws, "Sanov-form exponent");
  if (laws.blocks() > kPrimalOracleMaxAlphabet) {
    throw Error(ErrorCode::kSizeCap,
                "Sanov-form exponent supports alphabets of at most " +
                    std::to_string(kPrimalOracleMaxAlphabet) + " symbols");
  }
  const int resolution = GridResolution(grid_step);
  ExponentReport best{kInf, {}, ExponentMethod::kSanov};
  std::vector<double> t(laws.blocks());
  ForEachComposition(
      static_cast<int>(laws.blocks()), resolution,
      [&](std::span<const int> counts) {
        for (std::size_t a = 0; a < t.size(); ++a) {
          t[a] = static_cast<double>(counts[a]) / resolution;
        }
        double nearest[2];
        std::size_t nearest_law[2];
        for (int h = 0; h < 2; ++h) {
          nearest[h] = kInf;
          for (std::size_t j : GroupMembers(target, h)) {
            const double d =
                KlDivergence(t, laws.laws[j], ZeroPolicy::kAllowZeros);
            if (d < nearest[h]) {
              nearest[h] = d;
              nearest_law[h] = j;
            }
          }
        }
        // t in the region deciding 0 errs on value-1 laws and vice versa;
        // boundary points belong to both regions.
        for (int decided = 0; decided < 2; ++decided) {
          const bool in_region = decided == 0 ? nearest[0] <= nearest[1]
                                              : nearest[0] >= nearest[1];
          if (!in_region) continue;
          const int truth = 1 - decided;
          if (nearest[truth] < best.value) {
            best = {nearest[truth],
                    {nearest_law[truth], nearest_law[decided]},
                    ExponentMethod::kSanov};
          }
        }
      });
  return best;
}

double ExponentLowerBound(const OutputLaws& laws, const Prior& prior,
                          TestTarget target, int n_blocks) {
  if (n_blocks < 1) {
    throw Error(ErrorCode::kInvalidInput, "need at least one block");
  }
  // Chernoff information tensorizes over i.i.d. blocks.
  const double block_chernoff = MinGroupedChernoff(laws, target).value;
  const double slots = static_cast<double>(laws.k) * n_blocks;
  return block_chernoff / laws.k - std::log(8.0 * prior.pmax()) / slots;
}

}  // namespace hyptrade
