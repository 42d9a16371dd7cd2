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

#include "hyptrade/pmf.h"

#include <cmath>
#include <set>

#include "hyptrade/error.h"
#include "hyptrade/numeric.h"

namespace hyptrade {

Pmf Pmf::Create(std::vector<std::string> labels, std::vector<double> probs,
                double sum_tolerance) {
  if (labels.size() != probs.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "pmf has " + std::to_string(labels.size()) + " labels but " +
                    std::to_string(probs.size()) + " weights");
  }
  if (probs.empty()) throw Error(ErrorCode::kInvalidInput, "pmf is empty");
  if (std::set<std::string>(labels.begin(), labels.end()).size() !=
      labels.size()) {
    throw Error(ErrorCode::kInvalidInput, "pmf labels are not distinct");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "pmf weight for '" + labels[i] +
                      "' is negative or not finite: " + FormatDouble(probs[i]));
    }
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > sum_tolerance) {
    throw Error(ErrorCode::kInvalidInput,
                "pmf weights sum to " + FormatDouble(sum) + ", not 1");
  }
  return Pmf(std::move(labels), std::move(probs));
}

Pmf Pmf::Bernoulli(double theta) {
  return Create({"0", "1"}, {theta, 1.0 - theta});
}

Pmf Pmf::FromWeights(std::vector<double> probs, double sum_tolerance) {
  std::vector<std::string> labels;
  labels.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    labels.push_back(std::to_string(i));
  }
  return Create(std::move(labels), std::move(probs), sum_tolerance);
}

bool Pmf::full_support() const {
  for (double p : probs_) {
    if (!(p > 0.0)) return false;
  }
  return true;
}

}  // namespace hyptrade
