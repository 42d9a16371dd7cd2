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

#ifndef HYPTRADE_BAYES_H_
#define HYPTRADE_BAYES_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hyptrade/model.h"

namespace hyptrade {

// Which hypothesis the composite test decides. A utility test groups the four
// laws by u, a privacy test groups them by p.
enum class TestTarget { kUtility, kPrivacy };

const char* TargetName(TestTarget target);
TestTarget ParseTarget(const std::string& name);

// Law indices (see LawIndex) that make up hypothesis value `h`.
std::array<std::size_t, 2> GroupMembers(TestTarget target, int h);

// Occurrence counts of each symbol in a sequence of length n.
struct TypeVector {
  std::vector<int> counts;
  int n = 0;

  static TypeVector Create(std::vector<int> counts);
  std::vector<double> Empirical() const;
};

enum class ExponentMethod { kChernoff, kTForm, kSanov };
const char* MethodName(ExponentMethod method);

struct ExponentReport {
  double value = 0.0;  // nats per slot
  // Law indices of the optimal pair. For the Chernoff form the first entry is
  // from hypothesis value 1 and the second from value 0.
  std::array<std::size_t, 2> argmin_pair{};
  ExponentMethod method = ExponentMethod::kChernoff;
};

// Maximum a posteriori decision on a sequence of whole blocks. Returns 0 when
// the prior-weighted likelihood of hypothesis value 0 is at least that of
// value 1, so ties decide 0.
int MapDecision(std::span<const double> observation, const OutputLaws& laws,
                const std::array<double, 4>& prior_weights, TestTarget target);
int MapDecision(std::span<const double> observation, const OutputLaws& laws,
                const Prior& prior, TestTarget target);

// A probability kept together with its natural log, which stays exact when
// the value itself underflows.
struct ErrorProbability {
  double value = 0.0;
  double log_value = 0.0;

  // (1/slots) ln(1/alpha).
  double ExponentPerSlot(long slots) const {
    return -log_value / static_cast<double>(slots);
  }
};

inline constexpr double kDefaultEnumerationCap = 4194304.0;  // 2^22

// Minimal Bayes error of the composite test from n_blocks i.i.d. blocks, by
// enumerating every output sequence. Throws Error(kSizeCap) when
// |X|^(k * n_blocks) exceeds `enumeration_cap`.
ErrorProbability ExactMinError(const OutputLaws& laws, const Prior& prior,
                               TestTarget target, int n_blocks,
                               double enumeration_cap = kDefaultEnumerationCap);

// The same quantity for k = 1 laws, summed over type classes instead of
// sequences. Exact; every probability is carried in log space.
ErrorProbability ExactMinErrorIid(const OutputLaws& laws, const Prior& prior,
                                  TestTarget target, int n);

// Asymptotic type test: decides 1 iff the smallest divergence from the type to
// a value-0 law exceeds the smallest divergence to a value-1 law.
int TypeTestDecision(const TypeVector& type, const OutputLaws& laws,
                     TestTarget target);

// Smallest grouped Chernoff information between a value-1 law and a value-0
// law, per block (not divided by k). Zero-mass symbols are tolerated.
ExponentReport MinGroupedChernoff(const OutputLaws& laws, TestTarget target);

// Error exponent as the minimal Chernoff information rate.
ExponentReport ExponentTheorem1(const OutputLaws& laws, TestTarget target);

// Error exponent as the minimum of eight T divergences. Requires k = 1 and
// full-support laws.
ExponentReport ExponentT(const OutputLaws& laws, TestTarget target);

// Error exponent by brute force over the simplex grid: every grid pmf is put
// in the decision region(s) of the type test (both on ties), and the smallest
// divergence to a law of the opposite hypothesis value is taken. Requires
// k = 1, full support and at most four symbols.
ExponentReport ExponentSanov(const OutputLaws& laws, TestTarget target,
                             double grid_step);

// Lower bound on (1/n) ln(1/alpha) for n = k * n_blocks slots:
// min grouped Chernoff of the n-slot laws / n - ln(8 p_max) / n.
double ExponentLowerBound(const OutputLaws& laws, const Prior& prior,
                          TestTarget target, int n_blocks = 1);

}  // namespace hyptrade

#endif  // HYPTRADE_BAYES_H_
