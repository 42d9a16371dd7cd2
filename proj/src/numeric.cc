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

#include "hyptrade/numeric.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "hyptrade/error.h"

namespace hyptrade {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid input";
    case ErrorCode::kAlphabetMismatch:
      return "alphabet mismatch";
    case ErrorCode::kSupport:
      return "support violation";
    case ErrorCode::kNumerical:
      return "numerical error";
    case ErrorCode::kSizeCap:
      return "size cap exceeded";
    case ErrorCode::kInfeasible:
      return "infeasible";
    case ErrorCode::kIo:
      return "i/o error";
  }
  return "unknown";
}

double LogSumExp(std::span<const double> values) {
  double max = kNegInf;
  for (double v : values) max = std::max(max, v);
  if (max == kNegInf) return kNegInf;
  if (max == kInf) return kInf;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

void LogSumAccumulator::Add(double log_term) {
  if (log_term == kNegInf) return;
  if (log_term <= max_) {
    scaled_sum_ += std::exp(log_term - max_);
  } else {
    scaled_sum_ = scaled_sum_ * std::exp(max_ - log_term) + 1.0;
    max_ = log_term;
  }
}

double LogSumAccumulator::Total() const {
  if (max_ == kNegInf) return kNegInf;
  return max_ + std::log(scaled_sum_);
}

void ForEachComposition(
    int parts, int total,
    const std::function<void(std::span<const int>)>& visit) {
  if (parts <= 0 || total < 0) return;
  std::vector<int> counts(parts, 0);
  // Depth-first fill; the last part takes whatever is left.
  std::function<void(int, int)> fill = [&](int index, int remaining) {
    if (index == parts - 1) {
      counts[index] = remaining;
      visit(counts);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[index] = c;
      fill(index + 1, remaining - c);
    }
  };
  fill(0, total);
}

double CountCompositions(int parts, int total) {
  if (parts <= 0 || total < 0) return 0.0;
  return std::round(std::exp(std::lgamma(total + parts) -
                             std::lgamma(parts) - std::lgamma(total + 1.0)));
}

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) {
    throw Error(ErrorCode::kNumerical, "cannot format floating-point value");
  }
  return std::string(buffer, end);
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace hyptrade
