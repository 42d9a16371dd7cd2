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

#include "hyptrade/verify.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include "hyptrade/bayes.h"
#include "hyptrade/divergence.h"
#include "hyptrade/error.h"
#include "hyptrade/numeric.h"
#include "hyptrade/optimizer.h"
#include "hyptrade/sampling.h"

namespace hyptrade {
namespace {

constexpr double kIdentityTolerance = 1e-6;
constexpr double kPrimalFloor = 1e-3;
constexpr double kPrimalGridStep = 1e-3;
constexpr double kTFormTolerance = 1e-6;
constexpr double kSanovTolerance = 2e-3;
constexpr double kSanovGridStep = 1e-3;
constexpr double kConvergenceTolerance = 0.02;
constexpr double kTensorTolerance = 1e-9;

// Seeds of distinct suites never coincide.
std::mt19937_64 SuiteRng(std::uint64_t seed, std::uint64_t salt) {
  return std::mt19937_64(SplitMix64(seed ^ SplitMix64(salt)));
}

int Trials(const VerifyOptions& options, int fallback) {
  return options.trials > 0 ? options.trials : fallback;
}

SourceModel FixtureOf(const VerifyOptions& options) {
  return options.model ? *options.model : ExampleModel();
}

void Record(SuiteResult& r, double delta, bool ok) {
  ++r.checks;
  if (!ok) ++r.failures;
  if (std::isfinite(delta)) r.worst_delta = std::max(r.worst_delta, delta);
  if (!std::isfinite(delta) && !ok) r.worst_delta = kInf;
}

// Laws induced by the identity policy at the smallest slack admitting it.
OutputLaws IdentityLaws(const SourceModel& model) {
  const double s = std::max(0.0, model.z_alphabet().values().back());
  return InducedOutputLaws(
      model, IdentityPolicy(model.x_alphabet(), model.z_alphabet(), 1, s));
}

SuiteResult MinIdentitySuite(const VerifyOptions& options) {
  SuiteResult r;
  r.name = "min-identity";
  r.tolerance = FormatDouble(kIdentityTolerance);
  auto rng = SuiteRng(options.seed, 1);
  const int trials = Trials(options, 200);
  for (int i = 0; i < trials; ++i) {
    const std::size_t size = 2 + static_cast<std::size_t>(i % 4);
    const auto q1 = RandomPmf(rng, size);
    const auto q2 = RandomPmf(rng, size);
    const auto q3 = RandomPmf(rng, size);
    const double t = std::min(TDivergence(q1, q2, q3).value,
                              TDivergence(q1, q3, q2).value);
    const double c = std::min(Chernoff(q1, q2).value, Chernoff(q1, q3).value);
    const double delta = std::abs(t - c);
    Record(r, delta, delta <= kIdentityTolerance);
  }
  return r;
}

SuiteResult PrimalDualSuite(const VerifyOptions& options) {
  SuiteResult r;
  r.name = "primal-dual";
  r.tolerance = "max(" + FormatDouble(kPrimalFloor) +
                ", grid resolution error at step " +
                FormatDouble(kPrimalGridStep) + ")";
  auto rng = SuiteRng(options.seed, 2);
  const int trials = Trials(options, 50);
  for (int i = 0; i < trials; ++i) {
    const auto q1 = RandomBernoulli(rng);
    const auto q2 = RandomBernoulli(rng);
    const auto q3 = RandomBernoulli(rng);
    const double dual = TDivergence(q1, q2, q3).value;
    const PrimalTResult grid = PrimalTOracle(q1, q2, q3, kPrimalGridStep);
    const double tolerance =
        std::max(kPrimalFloor,
                 BinaryGridResolutionError(q1, q2, q3, kPrimalGridStep));
    const double delta = grid.feasible ? std::abs(dual - grid.value) : kInf;
    Record(r, delta, delta <= tolerance);
  }
  return r;
}

SuiteResult ExponentSuite(const VerifyOptions& options) {
  SuiteResult r;
  r.name = "exponents";
  r.tolerance = "T " + FormatDouble(kTFormTolerance) + ", Sanov " +
                FormatDouble(kSanovTolerance);
  auto rng = SuiteRng(options.seed, 3);
  std::vector<OutputLaws> cases{IdentityLaws(FixtureOf(options))};
  const int trials = Trials(options, 20);
  for (int i = 0; i < trials; ++i) {
    cases.push_back(SourceLaws(RandomModel(rng, 2)));
  }
  for (const OutputLaws& laws : cases) {
    for (TestTarget target : {TestTarget::kUtility, TestTarget::kPrivacy}) {
      const double c = ExponentTheorem1(laws, target).value;
      const double t = ExponentT(laws, target).value;
      Record(r, std::abs(c - t), std::abs(c - t) <= kTFormTolerance);
      if (laws.blocks() <= kPrimalOracleMaxAlphabet) {
        const double s = ExponentSanov(laws, target, kSanovGridStep).value;
        Record(r, std::abs(c - s), std::abs(c - s) <= kSanovTolerance);
      }
    }
  }
  return r;
}

SuiteResult BoundSuite(const VerifyOptions& options) {
  SuiteResult r;
  r.name = "bound";
  r.tolerance = "none (exact inequality)";
  const SourceModel model = FixtureOf(options);
  auto rng = SuiteRng(options.seed, 4);
  const int trials = Trials(options, 50);
  constexpr int kEnumerationMax = 10;
  constexpr int kTypeLengths[] = {100, 400};
  for (int i = 0; i < trials; ++i) {
    const PolicyKernel kernel = RandomKernel(
        rng, model.x_alphabet(), model.z_alphabet(), 1,
        std::max(1.0, model.z_alphabet().values().back()));
    const OutputLaws laws = InducedOutputLaws(model, kernel);
    for (TestTarget target : {TestTarget::kUtility, TestTarget::kPrivacy}) {
      auto check = [&](int n, const ErrorProbability& alpha) {
        const double bound =
            ExponentLowerBound(laws, model.prior(), target, n);
        const double exponent = alpha.ExponentPerSlot(n);
        Record(r, std::max(0.0, bound - exponent), exponent >= bound);
      };
      for (int n = 1; n <= kEnumerationMax; ++n) {
        check(n, ExactMinError(laws, model.prior(), target, n));
      }
      for (int n : kTypeLengths) {
        check(n, ExactMinErrorIid(laws, model.prior(), target, n));
      }
    }
  }
  return r;
}

SuiteResult ConvergenceSuite(const VerifyOptions& options) {
  SuiteResult r;
  r.name = "convergence";
  r.tolerance = FormatDouble(kConvergenceTolerance) +
                " at n = 800, gap decreasing in n";
  const SourceModel model = FixtureOf(options);
  const OutputLaws laws = IdentityLaws(model);
  constexpr int kLengths[] = {100, 200, 400, 800};
  for (TestTarget target : {TestTarget::kUtility, TestTarget::kPrivacy}) {
    const double exponent = ExponentTheorem1(laws, target).value;
    double previous = kInf;
    for (int n : kLengths) {
      const double estimate =
          ExactMinErrorIid(laws, model.prior(), target, n).ExponentPerSlot(n);
      const double gap = std::abs(estimate - exponent);
      Record(r, gap, gap < previous);
      previous = gap;
    }
    Record(r, previous, previous <= kConvergenceTolerance);
  }
  return r;
}

SuiteResult TensorizationSuite(const VerifyOptions& options) {
  SuiteResult r;
  r.name = "tensorization";
  r.tolerance = FormatDouble(kTensorTolerance);
  const SourceModel model = FixtureOf(options);
  auto rng = SuiteRng(options.seed, 6);
  const int trials = Trials(options, 20);
  const double s = std::max(1.0, model.z_alphabet().values().back());
  for (int i = 0; i < trials; ++i) {
    const PolicyKernel kernel =
        RandomKernel(rng, model.x_alphabet(), model.z_alphabet(), 1, s);
    const OutputLaws base = InducedOutputLaws(model, kernel);
    for (int l : {2, 3}) {
      const OutputLaws extended =
          InducedOutputLaws(model, BlockwiseExtend(kernel, l));
      const OutputLaws product = ProductLaws(base, l);
      double law_delta = 0.0;
      for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t y = 0; y < extended.blocks(); ++y) {
          law_delta = std::max(
              law_delta, std::abs(extended.laws[j][y] - product.laws[j][y]));
        }
      }
      Record(r, law_delta, law_delta <= kTensorTolerance);
      for (TestTarget target : {TestTarget::kUtility, TestTarget::kPrivacy}) {
        const double per_slot = ExponentTheorem1(extended, target).value;
        const double base_rate = ExponentTheorem1(base, target).value;
        const double delta = std::abs(per_slot - base_rate);
        Record(r, delta, delta <= kTensorTolerance);
      }
    }
  }
  return r;
}

SuiteResult MonotonicitySuite(const VerifyOptions& options) {
  SuiteResult r;
  r.name = "monotonicity";
  constexpr double kSlack = 1e-3;
  r.tolerance = "slack " + FormatDouble(kSlack) + ", extension " +
                FormatDouble(kTensorTolerance);
  const SourceModel model = FixtureOf(options);
  SearchConfig search;
  search.seed = options.seed;
  const GuaranteeConfig config{0.1, false, 1, 1.0};
  const MonotonicityReport report =
      MonotonicityCheck(model, config, 2, search, kSlack);
  Record(r,
         std::max(0.0, report.at_n.privacy_rate - report.at_k.privacy_rate),
         report.holds);
  Record(r, 0.0, report.at_k.feasible && report.extended_feasible);
  const double delta =
      std::abs(report.extended_privacy_rate - report.at_k.privacy_rate);
  Record(r, delta, delta <= kTensorTolerance);
  return r;
}

using SuiteFn = std::function<SuiteResult(const VerifyOptions&)>;

const std::vector<std::pair<std::string, SuiteFn>>& Suites() {
  static const auto* suites = new std::vector<std::pair<std::string, SuiteFn>>{
      {"min-identity", MinIdentitySuite},           {"primal-dual", PrimalDualSuite},
      {"exponents", ExponentSuite},      {"bound", BoundSuite},
      {"convergence", ConvergenceSuite}, {"tensorization", TensorizationSuite},
      {"monotonicity", MonotonicitySuite}};
  return *suites;
}

double BinaryKlSlope(double t, double q) {
  return std::log(t / q) - std::log((1.0 - t) / (1.0 - q));
}

}  // namespace

BinaryPrimal ExactBinaryPrimalT(std::span<const double> q1,
                                std::span<const double> q2,
                                std::span<const double> q3) {
  if (q1.size() != 2 || q2.size() != 2 || q3.size() != 2) {
    throw Error(ErrorCode::kInvalidInput, "binary pmfs required");
  }
  BinaryPrimal out;
  // D(t||q1) - D(t||qj) = c1 + t (c0 - c1) <= 0.
  for (auto qj : {q2, q3}) {
    const double c0 = std::log(qj[0] / q1[0]);
    const double c1 = std::log(qj[1] / q1[1]);
    const double slope = c0 - c1;
    if (slope > 0.0) {
      out.hi = std::min(out.hi, -c1 / slope);
    } else if (slope < 0.0) {
      out.lo = std::max(out.lo, -c1 / slope);
    }
  }
  out.argmin = std::clamp(q2[0], out.lo, out.hi);
  const double t[] = {out.argmin, 1.0 - out.argmin};
  out.value = KlDivergence(t, q2, ZeroPolicy::kAllowZeros);
  return out;
}

double BinaryGridResolutionError(std::span<const double> q1,
                                 std::span<const double> q2,
                                 std::span<const double> q3,
                                 double grid_step) {
  const BinaryPrimal exact = ExactBinaryPrimalT(q1, q2, q3);
  const double lo = std::max(exact.argmin - grid_step, 0.5 * grid_step);
  const double hi = std::min(exact.argmin + grid_step, 1.0 - 0.5 * grid_step);
  // D(.||q2) is convex, so its slope is extreme at the window ends.
  const double slope = std::max(std::abs(BinaryKlSlope(lo, q2[0])),
                                std::abs(BinaryKlSlope(hi, q2[0])));
  return grid_step * slope;
}

std::string SuiteResult::Summary() const {
  return name + ": " + (passed() ? "PASS" : "FAIL") +
         " checks=" + std::to_string(checks) +
         " failures=" + std::to_string(failures) +
         " worst_delta=" + FormatDouble(worst_delta) + " tol=" + tolerance;
}

const std::vector<std::string>& SuiteNames() {
  static const auto* names = [] {
    auto* out = new std::vector<std::string>;
    for (const auto& [name, fn] : Suites()) out->push_back(name);
    return out;
  }();
  return *names;
}

std::vector<SuiteResult> RunVerify(const std::string& suite,
                                   const VerifyOptions& options) {
  std::vector<SuiteResult> results;
  for (const auto& [name, fn] : Suites()) {
    if (suite != "all" && suite != name) continue;
    const auto start = std::chrono::steady_clock::now();
    SuiteResult result = fn(options);
    result.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    results.push_back(std::move(result));
  }
  if (results.empty()) {
    throw Error(ErrorCode::kInvalidInput, "unknown verification suite '" +
                                              suite + "'");
  }
  return results;
}

}  // namespace hyptrade
