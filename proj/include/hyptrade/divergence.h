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

#ifndef HYPTRADE_DIVERGENCE_H_
#define HYPTRADE_DIVERGENCE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "hyptrade/pmf.h"

namespace hyptrade {

// All divergences are in nats.

enum class ZeroPolicy {
  // Every weight of every operand must be positive.
  kRequireFullSupport,
  // Zero weights are tolerated where the quantity stays finite (0 ln 0 = 0).
  // KL still rejects p(a) > 0 with q(a) = 0.
  kAllowZeros,
};

// Results in (-kClampTolerance, 0) are rounded up to zero; anything more
// negative is reported as Error(kNumerical).
inline constexpr double kClampTolerance = 1e-12;

// Argument tolerance of every one-dimensional golden-section search.
inline constexpr double kArgumentTolerance = 1e-10;

struct DualPoint {
  double mu = 0.0;
  double nu = 0.0;
};

// sum_a p(a) ln(p(a) / q(a)).
double KlDivergence(std::span<const double> p, std::span<const double> q,
                    ZeroPolicy zeros = ZeroPolicy::kRequireFullSupport);
double KlDivergence(const Pmf& p, const Pmf& q,
                    ZeroPolicy zeros = ZeroPolicy::kRequireFullSupport);

struct ChernoffResult {
  double value = 0.0;
  double mu = 0.0;  // maximizing exponent on q1
};

// max over mu in [0, 1] of -ln sum_a q1(a)^mu q2(a)^(1-mu).
//
// Under kAllowZeros the sum runs over the common support (the continuous
// extension from the open interval); disjoint supports give +inf.
ChernoffResult Chernoff(std::span<const double> q1, std::span<const double> q2,
                        ZeroPolicy zeros = ZeroPolicy::kRequireFullSupport);
ChernoffResult Chernoff(const Pmf& q1, const Pmf& q2,
                        ZeroPolicy zeros = ZeroPolicy::kRequireFullSupport);

// -ln sum_a q1(a)^(mu+nu) q2(a)^(1-mu) q3(a)^(-nu), full support required.
double TMuNu(std::span<const double> q1, std::span<const double> q2,
             std::span<const double> q3, DualPoint point);
double TMuNu(const Pmf& q1, const Pmf& q2, const Pmf& q3, DualPoint point);

struct TDivergenceResult {
  double value = 0.0;
  DualPoint argmax;
};

// Maximum of TMuNu over mu in [0, 1], nu >= 0.
//
// The search is confined to the triangle with corners (0, 0), (1, 0) and
// (0, D(q1||q2) / D(q1||q3)); outside it the objective is provably
// non-positive. When D(q1||q3) vanishes the triangle collapses onto nu = 0.
// TMuNu is jointly concave, so the maximum over the triangle is the maximum
// over nu of a concave profile whose inner maximum over mu is again found by
// golden section.
TDivergenceResult TDivergence(std::span<const double> q1,
                              std::span<const double> q2,
                              std::span<const double> q3);
TDivergenceResult TDivergence(const Pmf& q1, const Pmf& q2, const Pmf& q3);

struct PrimalTResult {
  double value = 0.0;  // +inf when no grid point is feasible
  bool feasible = false;
  std::size_t points_evaluated = 0;
  std::vector<double> argmin;
};

inline constexpr std::size_t kPrimalOracleMaxAlphabet = 4;

// Brute-force primal form of T: min D(t||q2) subject to D(t||q1) <= D(t||q2)
// and D(t||q1) <= D(t||q3), over the simplex grid {counts / N} with
// N = 1 / grid_step. Independent of the dual search above.
PrimalTResult PrimalTOracle(std::span<const double> q1,
                            std::span<const double> q2,
                            std::span<const double> q3, double grid_step);
PrimalTResult PrimalTOracle(const Pmf& q1, const Pmf& q2, const Pmf& q3,
                            double grid_step);

// Number of grid points along each simplex axis for `grid_step`; throws
// unless 1 / grid_step is an integer within 1e-9.
int GridResolution(double grid_step);

}  // namespace hyptrade

#endif  // HYPTRADE_DIVERGENCE_H_
