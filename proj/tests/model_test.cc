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
#include "hyptrade/sampling.h"

namespace hyptrade {
namespace {

const Alphabet kBinary = Alphabet::Create({0.0, 1.0});

template <typename F>
ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

std::vector<std::vector<double>> OutputValues(const Alphabet& x,
                                              std::span<const double> xb,
                                              std::span<const double> zb,
                                              double s) {
  std::vector<std::vector<double>> out;
  const int k = static_cast<int>(xb.size());
  for (std::size_t y : FeasibleOutputs(x, xb, zb, s)) {
    out.push_back(BlockValues(x, y, k));
  }
  return out;
}

// At s = 1 on the example, rows (0,0) and (1,1) are free with q(0|.) = a, b.
PolicyKernel TwoParameterKernel(double a, double b) {
  // Rows ordered (x,z) = (0,0), (0,1), (1,0), (1,1); columns y = 0, 1.
  return PolicyKernel(kBinary, kBinary, 1, 1.0,
                      {a, 1 - a, 1, 0, 0, 1, b, 1 - b});
}

TEST(AlphabetTest, Validation) {
  EXPECT_EQ(CodeOf([] { Alphabet::Create({}); }), ErrorCode::kInvalidInput);
  EXPECT_EQ(CodeOf([] { Alphabet::Create({1.0, 0.0}); }),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(CodeOf([] { Alphabet::Create({0.0, 0.0}); }),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(kBinary.IndexOrThrow(1.0), 1u);
  EXPECT_FALSE(kBinary.IndexOf(0.5).has_value());
}

TEST(BlockTest, MixedRadixFirstSymbolMostSignificant) {
  EXPECT_EQ(BlockCount(2, 3), 8u);
  const std::vector<std::size_t> symbols{1, 0, 1};
  EXPECT_EQ(EncodeBlock(symbols, 2), 5u);
  EXPECT_EQ(DecodeBlock(5, 2, 3), symbols);
  EXPECT_EQ(BlockLabel(kBinary, 5, 3), "1,0,1");
  EXPECT_EQ(ParseBlockLabel(kBinary, "1,0,1", 3), 5u);
  EXPECT_EQ(CodeOf([] { ParseBlockLabel(kBinary, "1,0", 3); }),
            ErrorCode::kInvalidInput);
}

TEST(PriorTest, Validation) {
  EXPECT_EQ(CodeOf([] { Prior::Create({0.5, 0.5, 0.5, 0.5}); }),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(CodeOf([] { Prior::Create({1.2, -0.2, 0.0, 0.0}); }),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(Prior::Uniform().pmax(), 0.25);
  EXPECT_EQ(Prior::Create({0.1, 0.2, 0.3, 0.4}).pmax(), 0.4);
}

TEST(SourceModelTest, RequiresFullSupport) {
  EXPECT_EQ(CodeOf([] {
              SourceModel::Create(kBinary, kBinary, Prior::Uniform(),
                                  {std::vector<double>{1.0, 0.0},
                                   {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}},
                                  {0.5, 0.5});
            }),
            ErrorCode::kSupport);
}

TEST(FeasibleOutputsTest, SingleSlotExamples) {
  const double x1[] = {1.0}, z0[] = {0.0}, x0[] = {0.0}, z1[] = {1.0};
  EXPECT_EQ(OutputValues(kBinary, x1, z0, 1.0),
            (std::vector<std::vector<double>>{{1.0}}));
  EXPECT_EQ(OutputValues(kBinary, x0, z1, 2.0),
            (std::vector<std::vector<double>>{{0.0}, {1.0}}));
  EXPECT_EQ(OutputValues(kBinary, x0, z1, 1.0),
            (std::vector<std::vector<double>>{{0.0}}));
}

TEST(FeasibleOutputsTest, TwoSlotAverageConstraint) {
  const double x[] = {1.0, 1.0}, z[] = {0.0, 0.0};
  EXPECT_EQ(OutputValues(kBinary, x, z, 1.0),
            (std::vector<std::vector<double>>{{1.0, 1.0}}));
  // Sum y - 1 must lie in [0, 2]: every block but (0,0).
  const double x2[] = {1.0, 0.0}, z2[] = {0.0, 0.0};
  EXPECT_EQ(OutputValues(kBinary, x2, z2, 1.0),
            (std::vector<std::vector<double>>{{0.0, 1.0}, {1.0, 0.0},
                                              {1.0, 1.0}}));
}

TEST(FeasibleOutputsTest, EmptyGeometryNamesThePair) {
  const Alphabet z = Alphabet::Create({0.0, 3.0});
  try {
    CheckFeasibleGeometry(kBinary, z, 1, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
}

TEST(InducedLawsTest, IdentityGivesSourceLaws) {
  const SourceModel model = ExampleModel();
  const OutputLaws laws =
      InducedOutputLaws(model, IdentityPolicy(kBinary, kBinary, 1, 1.0));
  for (int u = 0; u < 2; ++u) {
    for (int p = 0; p < 2; ++p) {
      for (std::size_t y = 0; y < 2; ++y) {
        EXPECT_NEAR(laws.law(u, p)[y], model.source(u, p)[y], 1e-15);
      }
    }
  }
}

TEST(InducedLawsTest, IdentityTwoSlotIsProduct) {
  const SourceModel model = ExampleModel();
  const OutputLaws laws =
      InducedOutputLaws(model, IdentityPolicy(kBinary, kBinary, 2, 1.0));
  const auto source = model.source(1, 0);
  EXPECT_NEAR(laws.law(1, 0)[EncodeBlock(std::vector<std::size_t>{0, 1}, 2)],
              source[0] * source[1], 1e-15);
}

TEST(InducedLawsTest, ConstantPolicyMakesLawsEqual) {
  const SourceModel model = ExampleModel();
  const OutputLaws laws =
      InducedOutputLaws(model, ConstantPolicy(kBinary, kBinary, 1, 2.0, 1));
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(laws.laws[j][0], 0.0);
    EXPECT_NEAR(laws.laws[j][1], 1.0, 1e-15);
  }
  EXPECT_EQ(MinGroupedChernoff(laws, TestTarget::kPrivacy).value, 0.0);
}

TEST(InducedLawsTest, TwoParameterHandExpansion) {
  // p(y=0 | u,p) = px0 pz0 a + px0 pz1 + px1 pz1 b with a = 0.3, b = 0.6.
  const OutputLaws laws =
      InducedOutputLaws(ExampleModel(), TwoParameterKernel(0.3, 0.6));
  EXPECT_NEAR(laws.law(0, 0)[0], 0.518, 1e-15);
  EXPECT_NEAR(laws.law(0, 1)[0], 0.575, 1e-15);
  EXPECT_NEAR(laws.law(1, 0)[0], 0.784, 1e-15);
  EXPECT_NEAR(laws.law(1, 1)[0], 0.822, 1e-15);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(laws.laws[j][0] + laws.laws[j][1], 1.0, 1e-15);
  }
}

TEST(InducedLawsTest, RejectsInvalidPolicyAndMismatch) {
  const SourceModel model = ExampleModel();
  EXPECT_EQ(CodeOf([&] {
              InducedOutputLaws(model, TwoParameterKernel(1.3, 0.6));
            }),
            ErrorCode::kInvalidInput);
  const Alphabet other = Alphabet::Create({0.0, 2.0});
  EXPECT_EQ(CodeOf([&] {
              InducedOutputLaws(model, IdentityPolicy(other, kBinary, 1, 1.0));
            }),
            ErrorCode::kAlphabetMismatch);
}

TEST(ValidatePolicyTest, Examples) {
  const Alphabet z0 = Alphabet::Create({0.0});
  EXPECT_TRUE(ValidatePolicy(IdentityPolicy(kBinary, z0, 1, 0.0)).ok());

  // Row (x=1, z=0) puts half its mass on the infeasible y = 0.
  PolicyKernel bad = TwoParameterKernel(0.3, 0.6);
  bad.mutable_row(1, 0)[0] = 0.5;
  bad.mutable_row(1, 0)[1] = 0.5;
  const PolicyReport report = ValidatePolicy(bad);
  ASSERT_EQ(report.violations.size(), 1u);
  const PolicyViolation& v = report.violations[0];
  EXPECT_EQ(v.kind, PolicyViolation::Kind::kInfeasibleOutput);
  EXPECT_EQ(v.x_block, std::vector<double>{1.0});
  EXPECT_EQ(v.z_block, std::vector<double>{0.0});
  EXPECT_EQ(v.y_block, std::vector<double>{0.0});

  PolicyKernel short_row = TwoParameterKernel(0.3, 0.6);
  short_row.mutable_row(0, 0)[1] = 0.68;
  const PolicyReport norm = ValidatePolicy(short_row);
  ASSERT_EQ(norm.violations.size(), 1u);
  EXPECT_EQ(norm.violations[0].kind, PolicyViolation::Kind::kNormalization);
}

TEST(BlockwiseExtendTest, SingleRepetitionIsIdentical) {
  std::mt19937_64 rng(31);
  const PolicyKernel k = RandomKernel(rng, kBinary, kBinary, 1, 2.0);
  EXPECT_EQ(BlockwiseExtend(k, 1), k);
}

TEST(BlockwiseExtendTest, RowsAreProducts) {
  const PolicyKernel base = TwoParameterKernel(0.3, 0.6);
  const PolicyKernel ext = BlockwiseExtend(base, 2);
  EXPECT_EQ(ext.rows(), 16u);
  EXPECT_TRUE(ValidatePolicy(ext).ok());
  // x = (0,1), z = (0,1): rows (0,0) and (1,1) of the base kernel.
  const auto row = ext.row(1, 1);
  for (std::size_t y = 0; y < 4; ++y) {
    EXPECT_NEAR(row[y], base.row(0, 0)[y / 2] * base.row(1, 1)[y % 2], 1e-15);
  }
}

TEST(BlockwiseExtendTest, CommutesWithInducedLaws) {
  std::mt19937_64 rng(32);
  const SourceModel model = ExampleModel();
  for (int i = 0; i < 10; ++i) {
    const PolicyKernel k = RandomKernel(rng, kBinary, kBinary, 1, 1.0);
    for (int l : {2, 3}) {
      const OutputLaws ext = InducedOutputLaws(model, BlockwiseExtend(k, l));
      const OutputLaws prod = ProductLaws(InducedOutputLaws(model, k), l);
      for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t y = 0; y < ext.blocks(); ++y) {
          EXPECT_NEAR(ext.laws[j][y], prod.laws[j][y], 1e-14);
        }
      }
      for (TestTarget t : {TestTarget::kUtility, TestTarget::kPrivacy}) {
        EXPECT_NEAR(ExponentTheorem1(ext, t).value,
                    ExponentTheorem1(InducedOutputLaws(model, k), t).value,
                    1e-9);
      }
    }
  }
}

TEST(InducedLawsTest, LinearInThePolicy) {
  std::mt19937_64 rng(33);
  const SourceModel model = ExampleModel();
  for (int i = 0; i < 10; ++i) {
    const PolicyKernel a = RandomKernel(rng, kBinary, kBinary, 1, 2.0);
    const PolicyKernel b = RandomKernel(rng, kBinary, kBinary, 1, 2.0);
    const double tau = Uniform01(rng);
    const OutputLaws mixed = InducedOutputLaws(model, MixPolicies(a, b, tau));
    const OutputLaws la = InducedOutputLaws(model, a);
    const OutputLaws lb = InducedOutputLaws(model, b);
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t y = 0; y < 2; ++y) {
        EXPECT_NEAR(mixed.laws[j][y],
                    tau * la.laws[j][y] + (1 - tau) * lb.laws[j][y], 1e-12);
      }
    }
  }
}

TEST(InducedLawsTest, DataProcessingBoundsUtility) {
  std::mt19937_64 rng(34);
  const SourceModel model = ExampleModel();
  const double source_rate =
      ExponentTheorem1(SourceLaws(model), TestTarget::kUtility).value;
  for (int i = 0; i < 50; ++i) {
    const PolicyKernel k = RandomKernel(rng, kBinary, kBinary, 1, 1.0);
    EXPECT_LE(
        ExponentTheorem1(InducedOutputLaws(model, k), TestTarget::kUtility)
            .value,
        source_rate + 1e-12);
  }
}

TEST(PolicyKernelTest, StorageCap) {
  const Alphabet big = Alphabet::Create({0, 1, 2, 3, 4, 5, 6, 7});
  EXPECT_EQ(CodeOf([&] { IdentityPolicy(big, big, 4, 8.0); }),
            ErrorCode::kSizeCap);
}

}  // namespace
}  // namespace hyptrade
