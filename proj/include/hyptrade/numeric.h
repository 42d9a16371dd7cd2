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

#ifndef HYPTRADE_NUMERIC_H_
#define HYPTRADE_NUMERIC_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace hyptrade {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// log(sum(exp(v))). Returns -inf for an empty span or all -inf entries.
double LogSumExp(std::span<const double> values);

// Streaming log-sum-exp. Terms are folded in call order, so a fixed
// traversal order gives bit-identical totals.
class LogSumAccumulator {
 public:
  void Add(double log_term);
  double Total() const;

 private:
  double max_ = kNegInf;
  double scaled_sum_ = 0.0;
};

struct ScalarMaximum {
  double argmax;
  double value;
};

// Golden-section search for the maximum of a concave function on [lo, hi].
// Stops once the bracket is narrower than `tolerance`; the reported point is
// the bracket midpoint unless an endpoint scores strictly higher.
template <typename F>
ScalarMaximum GoldenSectionMaximize(F&& f, double lo, double hi,
                                    double tolerance) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  ScalarMaximum best{0.5 * (a + b), f(0.5 * (a + b))};
  const double f_lo = f(lo);
  if (f_lo > best.value) best = {lo, f_lo};
  const double f_hi = f(hi);
  if (f_hi > best.value) best = {hi, f_hi};
  return best;
}

// Visits every vector of `parts` non-negative integers summing to `total`,
// in lexicographic order of the counts.
void ForEachComposition(
    int parts, int total,
    const std::function<void(std::span<const int>)>& visit);

// Number of such vectors, C(total + parts - 1, parts - 1), as a double.
double CountCompositions(int parts, int total);

// Shortest decimal text that parses back to exactly `value`.
std::string FormatDouble(double value);

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace hyptrade

#endif  // HYPTRADE_NUMERIC_H_
