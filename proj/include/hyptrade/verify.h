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

#ifndef HYPTRADE_VERIFY_H_
#define HYPTRADE_VERIFY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyptrade/model.h"

namespace hyptrade {

// Closed-form primal T on a binary alphabet. Both constraints are linear in
// the mass t on the first symbol, so the feasible set is an interval that
// contains q1 and the convex objective is minimized by clamping q2 into it.
struct BinaryPrimal {
  double value = 0.0;
  double argmin = 0.0;  // mass on the first symbol
  double lo = 0.0;      // feasible interval
  double hi = 1.0;
};
BinaryPrimal ExactBinaryPrimalT(std::span<const double> q1,
                                std::span<const double> q2,
                                std::span<const double> q3);

// Worst-case gap between the grid primal at `grid_step` and the exact binary
// primal: the largest |d/dt D(t||q2)| within one step of the optimum, times
// the step.
double BinaryGridResolutionError(std::span<const double> q1,
                                 std::span<const double> q2,
                                 std::span<const double> q3, double grid_step);

struct VerifyOptions {
  std::uint64_t seed = 2018;
  // Random cases per suite; 0 keeps each suite's default.
  int trials = 0;
  // Replaces the bundled example in the suites that use it.
  std::optional<SourceModel> model;
};

struct SuiteResult {
  std::string name;
  long checks = 0;
  long failures = 0;
  double worst_delta = 0.0;
  std::string tolerance;
  double seconds = 0.0;

  bool passed() const { return failures == 0; }
  std::string Summary() const;
};

const std::vector<std::string>& SuiteNames();

// `suite` is one of SuiteNames() or "all". Throws Error(kInvalidInput) for an
// unknown name.
std::vector<SuiteResult> RunVerify(const std::string& suite,
                                   const VerifyOptions& options);

}  // namespace hyptrade

#endif  // HYPTRADE_VERIFY_H_
