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

#include "hyptrade/divergence.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyptrade/error.h"
#include "hyptrade/numeric.h"

namespace hyptrade {
namespace {

void CheckSameSize(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "operands have alphabet sizes " + std::to_string(a) + " and " +
                    std::to_string(b));
  }
  if (a == 0) throw Error(ErrorCode::kInvalidInput, "empty alphabet");
}

void CheckFullSupport(std::span<const double> q, const char* which) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] > 0.0)) {
      throw Error(ErrorCode::kSupport,
                  std::string(which) + " has zero mass at symbol " +
                      std::to_string(i) + " but full support is required");
    }
  }
}

void CheckSameAlphabet(const Pmf& a, const Pmf& b) {
  if (!a.SameAlphabet(b)) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "pmfs are defined on different labeled alphabets");
  }
}

double Clamp(double value, const char* what) {
  if (value >= 0.0 || std::isnan(value)) {
    if (std::isnan(value)) {
      throw Error(ErrorCode::kNumerical, std::string(what) + " is NaN");
    }
    return value == 0.0 ? 0.0 : value;  // drops the sign of -0
  }
  if (value > -kClampTolerance) return 0.0;
  throw Error(ErrorCode::kNumerical, std::string(what) + " evaluated to " +
                                         FormatDouble(value) + " < 0");
}

std::vector<double> Logs(std::span<const double> q) {
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = std::log(q[i]);
  return out;
}

// -ln sum_a exp(base[a] + mu * slope_mu[a] + nu * slope_nu[a]).
struct DualObjective {
  std::vector<double> base;
  std::vector<double> slope_mu;
  std::vector<double> slope_nu;

  double operator()(double mu, double nu) const {
    double max = kNegInf;
    const std::size_t n = base.size();
    for (std::size_t i = 0; i < n; ++i) {
      max = std::max(max, base[i] + mu * slope_mu[i] + nu * slope_nu[i]);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += std::exp(base[i] + mu * slope_mu[i] + nu * slope_nu[i] - max);
    }
    return -(max + std::log(sum));
  }
};

}  // namespace

double KlDivergence(std::span<const double> p, std::span<const double> q,
                    ZeroPolicy zeros) {
  CheckSameSize(p.size(), q.size());
  if (zeros == ZeroPolicy::kRequireFullSupport) {
    CheckFullSupport(p, "first pmf");
    CheckFullSupport(q, "second pmf");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (!(q[i] > 0.0)) {
      throw Error(ErrorCode::kSupport,
                  "second pmf has zero mass at symbol " + std::to_string(i) +
                      " where the first is positive");
    }
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return Clamp(sum, "KL divergence");
}

double KlDivergence(const Pmf& p, const Pmf& q, ZeroPolicy zeros) {
  CheckSameAlphabet(p, q);
  return KlDivergence(p.probs(), q.probs(), zeros);
}

ChernoffResult Chernoff(std::span<const double> q1, std::span<const double> q2,
                        ZeroPolicy zeros) {
  CheckSameSize(q1.size(), q2.size());
  if (zeros == ZeroPolicy::kRequireFullSupport) {
    CheckFullSupport(q1, "first pmf");
    CheckFullSupport(q2, "second pmf");
  }
  DualObjective objective;
  for (std::size_t i = 0; i < q1.size(); ++i) {
    if (!(q1[i] > 0.0) || !(q2[i] > 0.0)) continue;
    const double l1 = std::log(q1[i]);
    const double l2 = std::log(q2[i]);
    objective.base.push_back(l2);
    objective.slope_mu.push_back(l1 - l2);
    objective.slope_nu.push_back(0.0);
  }
  if (objective.base.empty()) return {kInf, 0.5};
  // Equal laws make the objective constant; skip the rounding in the sum.
  if (std::equal(q1.begin(), q1.end(), q2.begin())) return {0.0, 0.5};
  const ScalarMaximum best = GoldenSectionMaximize(
      [&](double mu) { return objective(mu, 0.0); }, 0.0, 1.0,
      kArgumentTolerance);
  return {Clamp(best.value, "Chernoff information"), best.argmax};
}

ChernoffResult Chernoff(const Pmf& q1, const Pmf& q2, ZeroPolicy zeros) {
  CheckSameAlphabet(q1, q2);
  return Chernoff(q1.probs(), q2.probs(), zeros);
}

double TMuNu(std::span<const double> q1, std::span<const double> q2,
             std::span<const double> q3, DualPoint point) {
  CheckSameSize(q1.size(), q2.size());
  CheckSameSize(q1.size(), q3.size());
  CheckFullSupport(q1, "first pmf");
  CheckFullSupport(q2, "second pmf");
  CheckFullSupport(q3, "third pmf");
  std::vector<double> exponents(q1.size());
  for (std::size_t i = 0; i < q1.size(); ++i) {
    exponents[i] = (point.mu + point.nu) * std::log(q1[i]) +
                   (1.0 - point.mu) * std::log(q2[i]) -
                   point.nu * std::log(q3[i]);
  }
  return -LogSumExp(exponents);
}

double TMuNu(const Pmf& q1, const Pmf& q2, const Pmf& q3, DualPoint point) {
  CheckSameAlphabet(q1, q2);
  CheckSameAlphabet(q1, q3);
  return TMuNu(q1.probs(), q2.probs(), q3.probs(), point);
}

TDivergenceResult TDivergence(std::span<const double> q1,
                              std::span<const double> q2,
                              std::span<const double> q3) {
  CheckSameSize(q1.size(), q2.size());
  CheckSameSize(q1.size(), q3.size());
  CheckFullSupport(q1, "first pmf");
  CheckFullSupport(q2, "second pmf");
  CheckFullSupport(q3, "third pmf");

  const std::vector<double> l1 = Logs(q1);
  const std::vector<double> l2 = Logs(q2);
  const std::vector<double> l3 = Logs(q3);
  DualObjective objective{l2, {}, {}};
  objective.slope_mu.resize(l1.size());
  objective.slope_nu.resize(l1.size());
  for (std::size_t i = 0; i < l1.size(); ++i) {
    objective.slope_mu[i] = l1[i] - l2[i];
    objective.slope_nu[i] = l1[i] - l3[i];
  }

  const double d12 = KlDivergence(q1, q2);
  const double d13 = KlDivergence(q1, q3);
  // Height of the triangle along nu; zero collapses it onto nu = 0.
  const double height = d13 > 0.0 ? d12 / d13 : 0.0;

  auto profile = [&](double nu) {
    const double mu_hi =
        height > 0.0 ? std::max(0.0, 1.0 - nu / height) : 1.0;
    return GoldenSectionMaximize([&](double mu) { return objective(mu, nu); },
                                 0.0, mu_hi, kArgumentTolerance);
  };

  TDivergenceResult result;
  if (height == 0.0) {
    const ScalarMaximum inner = profile(0.0);
    result = {inner.value, {inner.argmax, 0.0}};
  } else {
    const ScalarMaximum outer = GoldenSectionMaximize(
        [&](double nu) { return profile(nu).value; }, 0.0, height,
        kArgumentTolerance * std::max(1.0, height));
    const ScalarMaximum inner = profile(outer.argmax);
    result = {inner.value, {inner.argmax, outer.argmax}};
  }
  result.value = Clamp(result.value, "T divergence");
  return result;
}

TDivergenceResult TDivergence(const Pmf& q1, const Pmf& q2, const Pmf& q3) {
  CheckSameAlphabet(q1, q2);
  CheckSameAlphabet(q1, q3);
  return TDivergence(q1.probs(), q2.probs(), q3.probs());
}

int GridResolution(double grid_step) {
  if (!(grid_step > 0.0) || grid_step > 1.0) {
    throw Error(ErrorCode::kInvalidInput,
                "grid step must lie in (0, 1], got " + FormatDouble(grid_step));
  }
  const double inverse = 1.0 / grid_step;
  const double rounded = std::round(inverse);
  if (std::abs(inverse - rounded) > 1e-9 * inverse || rounded > 1e7) {
    throw Error(ErrorCode::kInvalidInput,
                "grid step " + FormatDouble(grid_step) +
                    " does not divide 1 into a whole number of cells");
  }
  return static_cast<int>(rounded);
}

PrimalTResult PrimalTOracle(std::span<const double> q1,
                            std::span<const double> q2,
                            std::span<const double> q3, double grid_step) {
  CheckSameSize(q1.size(), q2.size());
  CheckSameSize(q1.size(), q3.size());
  if (q1.size() > kPrimalOracleMaxAlphabet) {
    throw Error(ErrorCode::kSizeCap,
                "primal T oracle supports alphabets of at most " +
                    std::to_string(kPrimalOracleMaxAlphabet) + " symbols");
  }
  CheckFullSupport(q1, "first pmf");
  CheckFullSupport(q2, "second pmf");
  CheckFullSupport(q3, "third pmf");
  const int resolution = GridResolution(grid_step);
  const int parts = static_cast<int>(q1.size());

  PrimalTResult result;
  result.value = kInf;
  std::vector<double> t(q1.size());
  ForEachComposition(parts, resolution, [&](std::span<const int> counts) {
    ++result.points_evaluated;
    for (int i = 0; i < parts; ++i) {
      t[i] = static_cast<double>(counts[i]) / resolution;
    }
    const double to_q1 = KlDivergence(t, q1, ZeroPolicy::kAllowZeros);
    const double to_q2 = KlDivergence(t, q2, ZeroPolicy::kAllowZeros);
    if (to_q1 > to_q2) return;
    if (to_q1 > KlDivergence(t, q3, ZeroPolicy::kAllowZeros)) return;
    if (to_q2 < result.value) {
      result.value = to_q2;
      result.feasible = true;
      result.argmin = t;
    }
  });
  return result;
}

PrimalTResult PrimalTOracle(const Pmf& q1, const Pmf& q2, const Pmf& q3,
                            double grid_step) {
  CheckSameAlphabet(q1, q2);
  CheckSameAlphabet(q1, q3);
  return PrimalTOracle(q1.probs(), q2.probs(), q3.probs(), grid_step);
}

}  // namespace hyptrade
