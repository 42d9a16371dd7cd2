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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hyptrade/bayes.h"
#include "hyptrade/error.h"
#include "hyptrade/model.h"
#include "hyptrade/numeric.h"
#include "hyptrade/sampling.h"

namespace hyptrade {
namespace {

// 30-digit reference values for the example model's source laws.
constexpr double kUtilityExponent = 0.180940148250486259669768381089;
constexpr double kPrivacyExponent = 0.0101245165799591635713076424483;
constexpr double kLn2 = 0.693147180559945309417232121458;

const Alphabet kBinary = Alphabet::Create({0.0, 1.0});

OutputLaws ExampleLaws() {
  return InducedOutputLaws(ExampleModel(),
                           IdentityPolicy(kBinary, kBinary, 1, 1.0));
}

OutputLaws IdenticalLaws() {
  return SourceLaws(SourceModel::Create(
      kBinary, kBinary, Prior::Uniform(),
      {std::vector<double>{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}},
      {0.5, 0.5}));
}

// Bayes error by listing every binary sequence of length n.
double BruteForceError(const OutputLaws& laws, const Prior& prior,
                       TestTarget target, int n) {
  double total = 0.0;
  for (std::size_t seq = 0; seq < (std::size_t{1} << n); ++seq) {
    double side[2] = {0.0, 0.0};
    for (int h = 0; h < 2; ++h) {
      for (std::size_t j : GroupMembers(target, h)) {
        double p = prior.joint()[j];
        for (int i = 0; i < n; ++i) p *= laws.laws[j][(seq >> i) & 1];
        side[h] += p;
      }
    }
    total += std::min(side[0], side[1]);
  }
  return total;
}

TEST(GroupTest, Members) {
  EXPECT_EQ(GroupMembers(TestTarget::kUtility, 1),
            (std::array<std::size_t, 2>{2, 3}));
  EXPECT_EQ(GroupMembers(TestTarget::kPrivacy, 0),
            (std::array<std::size_t, 2>{0, 2}));
  EXPECT_EQ(ParseTarget("privacy"), TestTarget::kPrivacy);
  EXPECT_THROW(ParseTarget("other"), Error);
}

TEST(MapDecisionTest, TiesDecideZero) {
  const OutputLaws laws = IdenticalLaws();
  for (double y : {0.0, 1.0}) {
    const double obs[] = {y};
    EXPECT_EQ(MapDecision(obs, laws, Prior::Uniform(), TestTarget::kUtility),
              0);
    EXPECT_EQ(MapDecision(obs, laws, Prior::Uniform(), TestTarget::kPrivacy),
              0);
  }
}

TEST(MapDecisionTest, ExampleSingleObservation) {
  // Utility likelihood at y = 0: u = 0 side 0.1 + 0.25, u = 1 side 0.8 + 0.9.
  const double zero[] = {0.0};
  const double one[] = {1.0};
  const OutputLaws laws = ExampleLaws();
  EXPECT_EQ(MapDecision(zero, laws, Prior::Uniform(), TestTarget::kUtility), 1);
  EXPECT_EQ(MapDecision(one, laws, Prior::Uniform(), TestTarget::kUtility), 0);
}

TEST(MapDecisionTest, InvariantToPriorScaling) {
  std::mt19937_64 rng(41);
  const OutputLaws laws = ExampleLaws();
  for (int i = 0; i < 50; ++i) {
    std::array<double, 4> w;
    for (double& v : w) v = 0.05 + Uniform01(rng);
    const double scale = 0.01 + 10 * Uniform01(rng);
    std::array<double, 4> scaled = w;
    for (double& v : scaled) v *= scale;
    std::vector<double> obs(5);
    for (double& v : obs) v = Uniform01(rng) < 0.5 ? 0.0 : 1.0;
    for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
      EXPECT_EQ(MapDecision(obs, laws, w, t), MapDecision(obs, laws, scaled, t));
    }
  }
}

TEST(MapDecisionTest, RejectsBadObservations) {
  const OutputLaws laws = InducedOutputLaws(
      ExampleModel(), IdentityPolicy(kBinary, kBinary, 2, 1.0));
  const double odd[] = {0.0, 1.0, 1.0};
  EXPECT_THROW(MapDecision(odd, laws, Prior::Uniform(), TestTarget::kUtility),
               Error);
  const double unknown[] = {0.0, 2.0};
  EXPECT_THROW(
      MapDecision(unknown, laws, Prior::Uniform(), TestTarget::kUtility),
      Error);
}

TEST(ExactErrorTest, SingleSlotHandValues) {
  // Utility: min(0.0875, 0.425) + min(0.4125, 0.075).
  EXPECT_NEAR(ExactMinError(ExampleLaws(), Prior::Uniform(),
                            TestTarget::kUtility, 1)
                  .value,
              0.1625, 1e-15);
  // Privacy: min(0.225, 0.2875) + min(0.275, 0.2125).
  EXPECT_NEAR(ExactMinError(ExampleLaws(), Prior::Uniform(),
                            TestTarget::kPrivacy, 1)
                  .value,
              0.4375, 1e-15);
}

TEST(ExactErrorTest, IdenticalLawsAreBlind) {
  for (int n : {1, 3, 7}) {
    EXPECT_NEAR(ExactMinError(IdenticalLaws(), Prior::Uniform(),
                              TestTarget::kUtility, n)
                    .value,
                0.5, 1e-12);
    EXPECT_NEAR(ExactMinErrorIid(IdenticalLaws(), Prior::Uniform(),
                                 TestTarget::kPrivacy, n * 50)
                    .value,
                0.5, 1e-10);
  }
}

TEST(ExactErrorTest, MatchesBruteForceAndTypeClasses) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 10; ++i) {
    const OutputLaws laws = SourceLaws(RandomModel(rng, 2));
    const Prior prior = Prior::Create({0.1, 0.2, 0.3, 0.4});
    for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
      for (int n = 1; n <= 6; ++n) {
        const double enumerated = ExactMinError(laws, prior, t, n).value;
        EXPECT_NEAR(enumerated, BruteForceError(laws, prior, t, n), 1e-14);
        EXPECT_NEAR(enumerated, ExactMinErrorIid(laws, prior, t, n).value,
                    1e-12);
      }
    }
  }
}

TEST(ExactErrorTest, TernaryTypeClassesMatchEnumeration) {
  std::mt19937_64 rng(43);
  const OutputLaws laws = SourceLaws(RandomModel(rng, 3));
  for (int n = 1; n <= 5; ++n) {
    EXPECT_NEAR(
        ExactMinError(laws, Prior::Uniform(), TestTarget::kUtility, n).value,
        ExactMinErrorIid(laws, Prior::Uniform(), TestTarget::kUtility, n)
            .value,
        1e-12);
  }
}

TEST(ExactErrorTest, SizeCapPointsToTypeClasses) {
  try {
    ExactMinError(ExampleLaws(), Prior::Uniform(), TestTarget::kUtility, 30);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSizeCap);
  }
}

TEST(ExactErrorTest, MonotoneAndBelowConstantDecision) {
  const OutputLaws laws = ExampleLaws();
  for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
    double previous = 1.0;
    for (int n = 1; n <= 800; n += (n < 20 ? 1 : 39)) {
      const ErrorProbability a =
          ExactMinErrorIid(laws, Prior::Uniform(), t, n);
      EXPECT_LE(a.log_value, std::log(previous) + 1e-12) << n;
      EXPECT_LE(a.value, 0.5 + 1e-15);
      EXPECT_GE(a.value, 0.0);
      previous = std::exp(a.log_value);
    }
  }
}

TEST(ExactErrorTest, LogValueSurvivesUnderflow) {
  std::vector<double> l0{0.01, 0.99}, l1{0.99, 0.01};
  const OutputLaws laws = SourceLaws(SourceModel::Create(
      kBinary, kBinary, Prior::Uniform(), {l0, l0, l1, l1}, {0.5, 0.5}));
  const ErrorProbability a =
      ExactMinErrorIid(laws, Prior::Uniform(), TestTarget::kUtility, 2000);
  EXPECT_TRUE(std::isfinite(a.log_value));
  EXPECT_LT(a.log_value, -700.0);
}

TEST(TypeTestTest, OwnLawDecides) {
  const OutputLaws laws = ExampleLaws();
  // Type (1, 9) of length 10 equals the (0,0) law; (9, 1) equals (1,1).
  EXPECT_EQ(TypeTestDecision(TypeVector::Create({1, 9}), laws,
                             TestTarget::kUtility),
            0);
  EXPECT_EQ(TypeTestDecision(TypeVector::Create({9, 1}), laws,
                             TestTarget::kUtility),
            1);
}

TEST(TypeTestTest, AgreesWithMapAtLength400) {
  const OutputLaws laws = ExampleLaws();
  const int n = 400;
  for (TestTarget target : {TestTarget::kUtility, TestTarget::kPrivacy}) {
    double disagreement = 0.0;
    for (int c0 = 0; c0 <= n; ++c0) {
      const TypeVector type = TypeVector::Create({c0, n - c0});
      const double log_binom =
          std::lgamma(n + 1.0) - std::lgamma(c0 + 1.0) - std::lgamma(n - c0 + 1.0);
      double mass = 0.0;
      for (std::size_t j = 0; j < 4; ++j) {
        mass += 0.25 * std::exp(log_binom + c0 * std::log(laws.laws[j][0]) +
                                (n - c0) * std::log(laws.laws[j][1]));
      }
      std::vector<double> seq(n, 1.0);
      std::fill(seq.begin(), seq.begin() + c0, 0.0);
      if (TypeTestDecision(type, laws, target) !=
          MapDecision(seq, laws, Prior::Uniform(), target)) {
        disagreement += mass;
      }
    }
    EXPECT_LE(disagreement, 1e-3) << TargetName(target);
  }
}

TEST(ExponentTest, ExampleChernoffForm) {
  const ExponentReport u = ExponentTheorem1(ExampleLaws(), TestTarget::kUtility);
  EXPECT_NEAR(u.value, kUtilityExponent, 1e-12);
  EXPECT_EQ(u.argmin_pair, (std::array<std::size_t, 2>{LawIndex(1, 0),
                                                       LawIndex(0, 1)}));
  const ExponentReport p = ExponentTheorem1(ExampleLaws(), TestTarget::kPrivacy);
  EXPECT_NEAR(p.value, kPrivacyExponent, 1e-12);
  EXPECT_EQ(p.argmin_pair, (std::array<std::size_t, 2>{LawIndex(1, 1),
                                                       LawIndex(1, 0)}));
}

TEST(ExponentTest, IdenticalLawsGiveZero) {
  for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
    EXPECT_EQ(ExponentTheorem1(IdenticalLaws(), t).value, 0.0);
    EXPECT_NEAR(ExponentT(IdenticalLaws(), t).value, 0.0, 1e-12);
    EXPECT_NEAR(ExponentSanov(IdenticalLaws(), t, 1e-2).value, 0.0, 1e-12);
  }
}

TEST(ExponentTest, ThreeFormsAgreeOnExample) {
  for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
    const double c = ExponentTheorem1(ExampleLaws(), t).value;
    EXPECT_NEAR(ExponentT(ExampleLaws(), t).value, c, 1e-6);
    EXPECT_NEAR(ExponentSanov(ExampleLaws(), t, 1e-3).value, c, 2e-3);
  }
}

TEST(ExponentTest, ThreeFormsAgreeOnRandomModels) {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 10; ++i) {
    const OutputLaws laws = SourceLaws(RandomModel(rng, 2 + i % 2));
    for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
      const double c = ExponentTheorem1(laws, t).value;
      EXPECT_NEAR(ExponentT(laws, t).value, c, 1e-6);
      const double step = laws.blocks() == 2 ? 1e-3 : 5e-3;
      EXPECT_NEAR(ExponentSanov(laws, t, step).value, c, 5e-3);
    }
  }
}

TEST(ExponentTest, SanovStableAcrossResolutions) {
  for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
    EXPECT_NEAR(ExponentSanov(ExampleLaws(), t, 1e-2).value,
                ExponentSanov(ExampleLaws(), t, 1e-3).value, 1e-2);
  }
}

TEST(ExponentTest, TFormNeedsSingleSlot) {
  const OutputLaws laws = InducedOutputLaws(
      ExampleModel(), IdentityPolicy(kBinary, kBinary, 2, 1.0));
  EXPECT_THROW(ExponentT(laws, TestTarget::kUtility), Error);
  EXPECT_NEAR(ExponentTheorem1(laws, TestTarget::kUtility).value,
              kUtilityExponent, 1e-9);
}

TEST(BoundTest, SingleSlotUniformPrior) {
  EXPECT_NEAR(ExponentLowerBound(ExampleLaws(), Prior::Uniform(),
                                 TestTarget::kUtility),
              kUtilityExponent - kLn2, 1e-12);
  for (int n : {1, 4}) {
    EXPECT_NEAR(ExponentLowerBound(IdenticalLaws(), Prior::Uniform(),
                                   TestTarget::kPrivacy, n),
                -kLn2 / n, 1e-15);
  }
}

TEST(BoundTest, HoldsForExactErrors) {
  const OutputLaws laws = ExampleLaws();
  for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
    for (int n = 1; n <= 12; ++n) {
      EXPECT_GE(ExactMinError(laws, Prior::Uniform(), t, n).ExponentPerSlot(n),
                ExponentLowerBound(laws, Prior::Uniform(), t, n));
    }
    for (int n : {50, 100, 200, 400, 800}) {
      EXPECT_GE(
          ExactMinErrorIid(laws, Prior::Uniform(), t, n).ExponentPerSlot(n),
          ExponentLowerBound(laws, Prior::Uniform(), t, n));
    }
  }
}

TEST(ConvergenceTest, GapShrinksOnExample) {
  const OutputLaws laws = ExampleLaws();
  for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
    const double exponent = ExponentTheorem1(laws, t).value;
    double previous = kInf;
    for (int n : {100, 200, 400, 800}) {
      const double gap = std::abs(
          ExactMinErrorIid(laws, Prior::Uniform(), t, n).ExponentPerSlot(n) -
          exponent);
      EXPECT_LT(gap, previous) << n;
      previous = gap;
    }
    EXPECT_LE(previous, 0.02);
  }
}

}  // namespace
}  // namespace hyptrade
