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

#ifndef HYPTRADE_PMF_H_
#define HYPTRADE_PMF_H_

#include <span>
#include <string>
#include <vector>

namespace hyptrade {

inline constexpr double kPmfSumTolerance = 1e-12;

// A probability mass function over an ordered, labeled finite alphabet.
class Pmf {
 public:
  // Validates non-negative weights summing to one within `sum_tolerance` and
  // distinct labels. Throws Error(kInvalidInput) otherwise.
  static Pmf Create(std::vector<std::string> labels, std::vector<double> probs,
                    double sum_tolerance = kPmfSumTolerance);

  // Binary pmf on labels {"0", "1"} with mass `theta` on "0".
  static Pmf Bernoulli(double theta);

  // Labels "0", "1", ... for a bare weight vector.
  static Pmf FromWeights(std::vector<double> probs,
                         double sum_tolerance = kPmfSumTolerance);

  std::size_t size() const { return probs_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

  bool full_support() const;
  bool SameAlphabet(const Pmf& other) const { return labels_ == other.labels_; }

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  Pmf(std::vector<std::string> labels, std::vector<double> probs)
      : labels_(std::move(labels)), probs_(std::move(probs)) {}

  std::vector<std::string> labels_;
  std::vector<double> probs_;
};

}  // namespace hyptrade

#endif  // HYPTRADE_PMF_H_
