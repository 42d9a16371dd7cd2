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

#ifndef HYPTRADE_MODEL_H_
#define HYPTRADE_MODEL_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyptrade/pmf.h"

namespace hyptrade {

// Tolerance on the averaged supply constraint and on symbol lookups.
inline constexpr double kValueTolerance = 1e-9;
// A policy row must sum to one within this.
inline constexpr double kRowSumTolerance = 1e-9;
// Induced laws must sum to one within this.
inline constexpr double kLawSumTolerance = 1e-10;
// Dense kernels hold |X|^k * |Z|^k * |X|^k weights; refuse beyond this.
inline constexpr std::size_t kMaxKernelEntries = std::size_t{1} << 22;
// Largest block length the policy search accepts by default.
inline constexpr int kDefaultBlockCap = 3;

// Strictly increasing list of resource values (e.g. energy per slot).
class Alphabet {
 public:
  static Alphabet Create(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  std::optional<std::size_t> IndexOf(double value) const;
  std::size_t IndexOrThrow(double value) const;
  std::vector<std::string> Labels() const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  explicit Alphabet(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

// Blocks of k symbols are indexed in mixed radix, first symbol most
// significant, so a block of k*l symbols is the concatenation of l k-blocks.
std::size_t BlockCount(std::size_t alphabet_size, int k);

// Weights in a dense kernel over these alphabets; throws kSizeCap above
// kMaxKernelEntries.
std::size_t KernelWeightCount(std::size_t x_size, std::size_t z_size, int k);
std::vector<std::size_t> DecodeBlock(std::size_t index,
                                     std::size_t alphabet_size, int k);
std::size_t EncodeBlock(std::span<const std::size_t> symbols,
                        std::size_t alphabet_size);
std::vector<double> BlockValues(const Alphabet& alphabet, std::size_t index,
                                int k);
// Comma-separated symbol values, e.g. "1,0".
std::string BlockLabel(const Alphabet& alphabet, std::size_t index, int k);
std::size_t ParseBlockLabel(const Alphabet& alphabet, const std::string& label,
                            int k);

// Index of the hypothesis pair (u, p) in every four-element table.
constexpr std::size_t LawIndex(int u, int p) {
  return static_cast<std::size_t>(2 * u + p);
}

// Joint prior of the utility hypothesis U and privacy hypothesis P.
class Prior {
 public:
  // Order (0,0), (0,1), (1,0), (1,1).
  static Prior Create(const std::array<double, 4>& joint);
  static Prior Uniform();

  double at(int u, int p) const { return joint_[LawIndex(u, p)]; }
  const std::array<double, 4>& joint() const { return joint_; }
  double pmax() const;

  friend bool operator==(const Prior&, const Prior&) = default;

 private:
  explicit Prior(const std::array<double, 4>& joint) : joint_(joint) {}
  std::array<double, 4> joint_;
};

// Hypotheses, i.i.d. source laws p_{X|u,p}, and the noise law p_Z.
class SourceModel {
 public:
  // The four source laws must be full-support pmfs on `x_alphabet`.
  static SourceModel Create(Alphabet x_alphabet, Alphabet z_alphabet,
                            Prior prior,
                            std::array<std::vector<double>, 4> source,
                            std::vector<double> noise);

  const Alphabet& x_alphabet() const { return x_alphabet_; }
  const Alphabet& z_alphabet() const { return z_alphabet_; }
  const Prior& prior() const { return prior_; }
  std::span<const double> source(int u, int p) const {
    return source_[LawIndex(u, p)];
  }
  std::span<const double> noise() const { return noise_; }

  friend bool operator==(const SourceModel&, const SourceModel&) = default;

 private:
  SourceModel(Alphabet x, Alphabet z, Prior prior,
              std::array<std::vector<double>, 4> source,
              std::vector<double> noise)
      : x_alphabet_(std::move(x)),
        z_alphabet_(std::move(z)),
        prior_(prior),
        source_(std::move(source)),
        noise_(std::move(noise)) {}

  Alphabet x_alphabet_;
  Alphabet z_alphabet_;
  Prior prior_;
  std::array<std::vector<double>, 4> source_;
  std::vector<double> noise_;
};

// Binary example: X = Z = {0, 1}, uniform prior,
// p_{X|u,p}(0) = 0.1, 0.25, 0.8, 0.9 and p_Z(0) = 0.2.
SourceModel ExampleModel();

// Randomized k-slot management map q(y^k | x^k, z^k).
//
// Rows are dense over all |X|^k output blocks and are stored row-major with
// row index x_block * |Z|^k + z_block. Construction checks shapes only; use
// ValidatePolicy for the constraint and normalization invariants.
class PolicyKernel {
 public:
  PolicyKernel(Alphabet x_alphabet, Alphabet z_alphabet, int k, double s,
               std::vector<double> weights);

  int k() const { return k_; }
  double s() const { return s_; }
  const Alphabet& x_alphabet() const { return x_alphabet_; }
  const Alphabet& z_alphabet() const { return z_alphabet_; }
  std::size_t x_blocks() const { return x_blocks_; }
  std::size_t z_blocks() const { return z_blocks_; }
  std::size_t rows() const { return x_blocks_ * z_blocks_; }

  std::span<const double> row(std::size_t x_block, std::size_t z_block) const;
  std::span<double> mutable_row(std::size_t x_block, std::size_t z_block);
  std::span<const double> weights() const { return weights_; }

  // Same rows, reinterpreted under a different supply slack.
  PolicyKernel WithSlack(double s) const;

  friend bool operator==(const PolicyKernel&, const PolicyKernel&) = default;

 private:
  Alphabet x_alphabet_;
  Alphabet z_alphabet_;
  int k_;
  double s_;
  std::size_t x_blocks_;
  std::size_t z_blocks_;
  std::vector<double> weights_;
};

// 0 <= (1/k) sum_i (y_i + z_i - x_i) <= s.
bool SatisfiesSupplyConstraint(std::span<const double> x_block,
                               std::span<const double> z_block,
                               std::span<const double> y_block, double s);

// Indices (over x_alphabet^k) of all output blocks admissible for the pair.
std::vector<std::size_t> FeasibleOutputs(const Alphabet& x_alphabet,
                                         std::span<const double> x_block,
                                         std::span<const double> z_block,
                                         double s);

// FeasibleOutputs for every row of a kernel with these dimensions, in row
// order.
std::vector<std::vector<std::size_t>> FeasibleOutputTable(
    const Alphabet& x_alphabet, const Alphabet& z_alphabet, int k, double s);

// Throws Error(kInfeasible) naming the first input pair that has no
// admissible output.
void CheckFeasibleGeometry(const Alphabet& x_alphabet,
                           const Alphabet& z_alphabet, int k, double s);

struct PolicyViolation {
  enum class Kind { kInvalidWeight, kInfeasibleOutput, kNormalization };
  Kind kind;
  std::vector<double> x_block;
  std::vector<double> z_block;
  std::vector<double> y_block;  // empty for normalization violations
  double value;                 // offending weight or row sum

  std::string Describe() const;
};

struct PolicyReport {
  std::vector<PolicyViolation> violations;
  bool ok() const { return violations.empty(); }
};

PolicyReport ValidatePolicy(const PolicyKernel& policy);

// Throws Error(kInvalidInput) describing the first violation, if any.
void RequireValidPolicy(const PolicyKernel& policy);

// y^k = x^k. Throws Error(kInfeasible) unless every noise block keeps the
// identity inside the constraint.
PolicyKernel IdentityPolicy(const Alphabet& x_alphabet,
                            const Alphabet& z_alphabet, int k, double s);

// Every input pair is mapped to `y_block` (an index over x_alphabet^k).
PolicyKernel ConstantPolicy(const Alphabet& x_alphabet,
                            const Alphabet& z_alphabet, int k, double s,
                            std::size_t y_block);

// tau * a + (1 - tau) * b, row by row.
PolicyKernel MixPolicies(const PolicyKernel& a, const PolicyKernel& b,
                         double tau);

// The (k*l)-slot kernel that applies `policy` independently to each of the l
// consecutive k-slot sub-blocks.
PolicyKernel BlockwiseExtend(const PolicyKernel& policy, int l);

// The four laws p_{Y^k|u,p} over x_alphabet^k.
struct OutputLaws {
  int k = 1;
  Alphabet x_alphabet = Alphabet::Create({0.0});
  std::array<std::vector<double>, 4> laws;

  std::size_t blocks() const { return laws[0].size(); }
  std::span<const double> law(int u, int p) const {
    return laws[LawIndex(u, p)];
  }
  std::span<const double> law(std::size_t index) const { return laws[index]; }
  Pmf LawPmf(int u, int p) const;
  bool full_support() const;
};

OutputLaws InducedOutputLaws(const SourceModel& model,
                             const PolicyKernel& policy);

// The k=1 laws of the unprocessed source, i.e. what the identity policy
// induces when it is feasible.
OutputLaws SourceLaws(const SourceModel& model);

// l-fold i.i.d. product of each law, as laws over blocks of k*l symbols.
OutputLaws ProductLaws(const OutputLaws& laws, int l);

}  // namespace hyptrade

#endif  // HYPTRADE_MODEL_H_
