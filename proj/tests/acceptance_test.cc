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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hyptrade/bayes.h"
#include "hyptrade/divergence.h"
#include "hyptrade/model.h"
#include "hyptrade/numeric.h"
#include "hyptrade/optimizer.h"
#include "hyptrade/sampling.h"

namespace hyptrade {
namespace {

constexpr std::uint64_t kSeed = 2018;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::mt19937_64 RngFor(int criterion) {
  return std::mt19937_64(SplitMix64(kSeed + criterion));
}

std::string Num(double v) { return FormatDouble(v); }

OutputLaws ExampleIdentityLaws() {
  const SourceModel model = ExampleModel();
  return InducedOutputLaws(
      model, IdentityPolicy(model.x_alphabet(), model.z_alphabet(), 1, 1.0));
}

Outcome MinIdentity() {
  auto rng = RngFor(1);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t size = 2 + static_cast<std::size_t>(i % 4);
    const auto q1 = RandomPmf(rng, size);
    const auto q2 = RandomPmf(rng, size);
    const auto q3 = RandomPmf(rng, size);
    const double t = std::min(TDivergence(q1, q2, q3).value,
                              TDivergence(q1, q3, q2).value);
    const double c = std::min(Chernoff(q1, q2).value, Chernoff(q1, q3).value);
    worst = std::max(worst, std::abs(t - c));
  }
  return {worst <= 1e-6, "200 triples, worst |delta| = " + Num(worst)};
}

Outcome PrimalDual() {
  auto rng = RngFor(2);
  double worst = 0.0;
  int violations = 0;
  for (int i = 0; i < 50; ++i) {
    const auto q1 = RandomBernoulli(rng);
    const auto q2 = RandomBernoulli(rng);
    const auto q3 = RandomBernoulli(rng);
    const PrimalTResult grid = PrimalTOracle(q1, q2, q3, 1e-3);
    const double delta = grid.feasible
                             ? std::abs(TDivergence(q1, q2, q3).value - grid.value)
                             : kInf;
    worst = std::max(worst, delta);
    if (!(delta <= 1e-3)) ++violations;
  }
  return {violations == 0, "50 binary triples, " + std::to_string(violations) +
                               " above 1e-3, worst |delta| = " + Num(worst)};
}

Outcome ThreeWay() {
  std::vector<OutputLaws> cases{ExampleIdentityLaws()};
  auto rng = RngFor(3);
  for (int i = 0; i < 20; ++i) cases.push_back(SourceLaws(RandomModel(rng, 2)));
  double worst = 0.0;
  for (const OutputLaws& laws : cases) {
    for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
      const double c = ExponentTheorem1(laws, t).value;
      const double tf = ExponentT(laws, t).value;
      const double s = ExponentSanov(laws, t, 1e-3).value;
      worst = std::max({worst, std::abs(c - tf), std::abs(c - s),
                        std::abs(tf - s)});
    }
  }
  return {worst <= 2e-3, "21 models x 2 targets, worst pairwise delta = " +
                             Num(worst)};
}

Outcome Convergence() {
  const OutputLaws laws = ExampleIdentityLaws();
  Outcome out;
  for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
    const double exponent = ExponentTheorem1(laws, t).value;
    double previous = kInf;
    std::string gaps;
    for (int n : {100, 200, 400, 800}) {
      const double gap = std::abs(
          ExactMinErrorIid(laws, Prior::Uniform(), t, n).ExponentPerSlot(n) -
          exponent);
      if (!(gap < previous)) out.pass = false;
      previous = gap;
      gaps += (gaps.empty() ? "" : " ") + Num(gap);
    }
    if (!(previous <= 0.02)) out.pass = false;
    out.detail += std::string(out.detail.empty() ? "" : "; ") + TargetName(t) +
                  " gaps " + gaps;
  }
  return out;
}

Outcome Bound() {
  const SourceModel model = ExampleModel();
  auto rng = RngFor(5);
  long checks = 0;
  long violations = 0;
  double tightest = kInf;
  for (int i = 0; i < 50; ++i) {
    const double s = i % 2 == 0 ? 1.0 : 2.0;
    const OutputLaws laws = InducedOutputLaws(
        model,
        RandomKernel(rng, model.x_alphabet(), model.z_alphabet(), 1, s));
    for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
      auto check = [&](int n, const ErrorProbability& alpha) {
        const double margin = alpha.ExponentPerSlot(n) -
                              ExponentLowerBound(laws, model.prior(), t, n);
        ++checks;
        if (!(margin >= 0.0)) ++violations;
        tightest = std::min(tightest, margin);
      };
      for (int n = 1; n <= 10; ++n) {
        check(n, ExactMinError(laws, model.prior(), t, n));
      }
      for (int n : {100, 400}) {
        check(n, ExactMinErrorIid(laws, model.prior(), t, n));
      }
    }
  }
  return {violations == 0, std::to_string(checks) + " checks, " +
                               std::to_string(violations) +
                               " violations, smallest margin " + Num(tightest)};
}

Outcome Figure() {
  std::vector<double> lambdas;
  for (int i = 0; i <= 16; ++i) lambdas.push_back(i / 100.0);
  const std::vector<double> s_values{1.0, 2.0};
  const std::vector<TradeoffPoint> points = TradeoffSweep(
      ExampleModel(), lambdas, s_values, {0.0, false, 1, 1.0}, SearchConfig{});
  const std::size_t m = lambdas.size();
  bool feasible = points.size() == 2 * m;
  bool monotone = true;
  bool ordered = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    feasible = feasible && points[i].feasible;
    if (i % m > 0 && points[i].privacy_rate < points[i - 1].privacy_rate - 1e-4) {
      monotone = false;
    }
  }
  for (std::size_t i = 0; i < m && points.size() == 2 * m; ++i) {
    if (points[m + i].privacy_rate > points[i].privacy_rate) ordered = false;
  }
  std::ostringstream detail;
  detail << "(a) feasible " << (feasible ? "yes" : "no") << ", (b) monotone "
         << (monotone ? "yes" : "no") << ", (c) s=2 <= s=1 "
         << (ordered ? "yes" : "no") << "; s=1 at 0.16 = "
         << Num(points[m - 1].privacy_rate) << ", s=2 at 0.08 = "
         << Num(points[m + 8].privacy_rate);
  return {feasible && monotone && ordered, detail.str()};
}

Outcome Monotonicity() {
  const MonotonicityReport r = MonotonicityCheck(
      ExampleModel(), {0.1, false, 1, 1.0}, 2, SearchConfig{}, 1e-3);
  const double ext_delta =
      std::abs(r.extended_privacy_rate - r.at_k.privacy_rate);
  const bool pass = r.at_k.privacy_rate >= r.at_n.privacy_rate - 1e-3 &&
                    r.extended_feasible && ext_delta <= 1e-9;
  return {pass, "opt_1 = " + Num(r.at_k.privacy_rate) +
                    ", opt_2 = " + Num(r.at_n.privacy_rate) +
                    ", extension feasible " +
                    (r.extended_feasible ? "yes" : "no") +
                    ", extension rate delta " + Num(ext_delta)};
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome Determinism() {
  const std::string cli = HYPTRADE_CLI_PATH;
  const std::string a = "acceptance_run_a.csv";
  const std::string b = "acceptance_run_b.csv";
  for (const std::string& out : {a, b}) {
    const std::string cmd =
        "\"" + cli + "\" tradeoff --seed 2018 --out-csv " + out + " > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "cli run failed"};
  }
  const std::string csv_a = ReadFile(a);
  const std::string csv_b = ReadFile(b);
  const bool same = !csv_a.empty() && csv_a == csv_b;
  return {same, std::to_string(csv_a.size()) + " bytes, " +
                    (same ? "identical" : "different")};
}

}  // namespace
}  // namespace hyptrade

int main() {
  using namespace hyptrade;
  const std::vector<Criterion> criteria{
      {1, "min-T equals min-Chernoff identity", 10, MinIdentity},
      {2, "T primal-dual agreement", 30, PrimalDual},
      {3, "three-way exponent consistency", 60, ThreeWay},
      {4, "exponent convergence", 20, Convergence},
      {5, "error exponent lower bound", 60, Bound},
      {6, "trade-off curve reproduction", 120, Figure},
      {7, "block-length monotonicity", 120, Monotonicity},
      {8, "determinism", 300, Determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    const bool in_budget = seconds < c.budget_seconds;
    const bool pass = outcome.pass && in_budget;
    if (!pass) ++failed;
    std::printf("%s criterion %d (%s): %s [%.2fs, budget %.0fs%s]\n",
                pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail.c_str(),
                seconds, c.budget_seconds, in_budget ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
