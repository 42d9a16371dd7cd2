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

#include "hyptrade/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hyptrade/error.h"
#include "hyptrade/numeric.h"

namespace hyptrade {
namespace {

std::string FormatBlock(std::span<const double> block) {
  std::string out = "(";
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (i > 0) out += ",";
    out += FormatDouble(block[i]);
  }
  return out + ")";
}

void CheckBlockLength(int k) {
  if (k < 1) {
    throw Error(ErrorCode::kInvalidInput,
                "block length must be positive, got " + std::to_string(k));
  }
}

Pmf ValidatedPmf(const Alphabet& alphabet, std::vector<double> probs,
                 const std::string& what) {
  try {
    return Pmf::Create(alphabet.Labels(), std::move(probs));
  } catch (const Error& e) {
    throw Error(e.code(), what + ": " + e.what());
  }
}

}  // namespace

Alphabet Alphabet::Create(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidInput, "empty alphabet");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kInvalidInput, "alphabet value is not finite");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw Error(ErrorCode::kInvalidInput,
                  "alphabet values must be strictly increasing");
    }
  }
  return Alphabet(std::move(values));
}

std::optional<std::size_t> Alphabet::IndexOf(double value) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (std::abs(values_[i] - value) <= kValueTolerance) return i;
  }
  return std::nullopt;
}

std::size_t Alphabet::IndexOrThrow(double value) const {
  if (auto index = IndexOf(value)) return *index;
  throw Error(ErrorCode::kInvalidInput,
              "symbol " + FormatDouble(value) + " is not in the alphabet");
}

std::vector<std::string> Alphabet::Labels() const {
  std::vector<std::string> labels;
  labels.reserve(values_.size());
  for (double v : values_) labels.push_back(FormatDouble(v));
  return labels;
}

std::size_t BlockCount(std::size_t alphabet_size, int k) {
  CheckBlockLength(k);
  std::size_t count = 1;
  for (int i = 0; i < k; ++i) {
    if (count > std::numeric_limits<std::size_t>::max() / alphabet_size) {
      throw Error(ErrorCode::kSizeCap, "block alphabet size overflows");
    }
    count *= alphabet_size;
  }
  return count;
}

std::size_t KernelWeightCount(std::size_t x_size, std::size_t z_size, int k) {
  const double xb = static_cast<double>(BlockCount(x_size, k));
  const double zb = static_cast<double>(BlockCount(z_size, k));
  if (xb * zb * xb > static_cast<double>(kMaxKernelEntries)) {
    throw Error(ErrorCode::kSizeCap,
                "kernel with block length " + std::to_string(k) +
                    " needs more than " + std::to_string(kMaxKernelEntries) +
                    " weights");
  }
  return static_cast<std::size_t>(xb * zb * xb);
}

std::vector<std::size_t> DecodeBlock(std::size_t index,
                                     std::size_t alphabet_size, int k) {
  std::vector<std::size_t> symbols(k);
  for (int i = k - 1; i >= 0; --i) {
    symbols[i] = index % alphabet_size;
    index /= alphabet_size;
  }
  return symbols;
}

std::size_t EncodeBlock(std::span<const std::size_t> symbols,
                        std::size_t alphabet_size) {
  std::size_t index = 0;
  for (std::size_t s : symbols) index = index * alphabet_size + s;
  return index;
}

std::vector<double> BlockValues(const Alphabet& alphabet, std::size_t index,
                                int k) {
  std::vector<double> values;
  values.reserve(k);
  for (std::size_t s : DecodeBlock(index, alphabet.size(), k)) {
    values.push_back(alphabet[s]);
  }
  return values;
}

std::string BlockLabel(const Alphabet& alphabet, std::size_t index, int k) {
  std::string out;
  for (std::size_t s : DecodeBlock(index, alphabet.size(), k)) {
    if (!out.empty()) out += ",";
    out += FormatDouble(alphabet[s]);
  }
  return out;
}

std::size_t ParseBlockLabel(const Alphabet& alphabet, const std::string& label,
                            int k) {
  std::vector<std::size_t> symbols;
  std::stringstream stream(label);
  std::string item;
  while (std::getline(stream, item, ',')) {
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidInput,
                  "cannot parse block label '" + label + "'");
    }
    symbols.push_back(alphabet.IndexOrThrow(value));
  }
  if (static_cast<int>(symbols.size()) != k) {
    throw Error(ErrorCode::kInvalidInput,
                "block label '" + label + "' does not have " +
                    std::to_string(k) + " symbols");
  }
  return EncodeBlock(symbols, alphabet.size());
}

Prior Prior::Create(const std::array<double, 4>& joint) {
  double sum = 0.0;
  for (double p : joint) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "prior entries must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kPmfSumTolerance) {
    throw Error(ErrorCode::kInvalidInput,
                "prior entries sum to " + FormatDouble(sum) + ", not 1");
  }
  Prior prior(joint);
  if (prior.pmax() < 0.25 - kPmfSumTolerance) {
    throw Error(ErrorCode::kNumerical, "largest prior entry is below 1/4");
  }
  return prior;
}

Prior Prior::Uniform() { return Prior({0.25, 0.25, 0.25, 0.25}); }

double Prior::pmax() const {
  return *std::max_element(joint_.begin(), joint_.end());
}

SourceModel SourceModel::Create(Alphabet x_alphabet, Alphabet z_alphabet,
                                Prior prior,
                                std::array<std::vector<double>, 4> source,
                                std::vector<double> noise) {
  for (int u = 0; u < 2; ++u) {
    for (int p = 0; p < 2; ++p) {
      const std::string what = "source law (u=" + std::to_string(u) +
                               ", p=" + std::to_string(p) + ")";
      Pmf pmf = ValidatedPmf(x_alphabet, source[LawIndex(u, p)], what);
      if (!pmf.full_support()) {
        throw Error(ErrorCode::kSupport,
                    what + " must have full support on the input alphabet");
      }
    }
  }
  ValidatedPmf(z_alphabet, noise, "noise law");
  return SourceModel(std::move(x_alphabet), std::move(z_alphabet), prior,
                     std::move(source), std::move(noise));
}

SourceModel ExampleModel() {
  const Alphabet binary = Alphabet::Create({0.0, 1.0});
  return SourceModel::Create(
      binary, binary, Prior::Uniform(),
      {{{0.1, 0.9}, {0.25, 0.75}, {0.8, 0.2}, {0.9, 0.1}}}, {0.2, 0.8});
}

PolicyKernel::PolicyKernel(Alphabet x_alphabet, Alphabet z_alphabet, int k,
                           double s, std::vector<double> weights)
    : x_alphabet_(std::move(x_alphabet)),
      z_alphabet_(std::move(z_alphabet)),
      k_(k),
      s_(s),
      weights_(std::move(weights)) {
  CheckBlockLength(k);
  if (!std::isfinite(s) || s < 0.0) {
    throw Error(ErrorCode::kInvalidInput,
                "supply slack must be finite and non-negative");
  }
  x_blocks_ = BlockCount(x_alphabet_.size(), k);
  z_blocks_ = BlockCount(z_alphabet_.size(), k);
  KernelWeightCount(x_alphabet_.size(), z_alphabet_.size(), k);
  if (weights_.size() != x_blocks_ * z_blocks_ * x_blocks_) {
    throw Error(ErrorCode::kInvalidInput,
                "kernel has " + std::to_string(weights_.size()) +
                    " weights, expected " +
                    std::to_string(x_blocks_ * z_blocks_ * x_blocks_));
  }
}

std::span<const double> PolicyKernel::row(std::size_t x_block,
                                          std::size_t z_block) const {
  return std::span<const double>(weights_).subspan(
      (x_block * z_blocks_ + z_block) * x_blocks_, x_blocks_);
}

std::span<double> PolicyKernel::mutable_row(std::size_t x_block,
                                            std::size_t z_block) {
  return std::span<double>(weights_).subspan(
      (x_block * z_blocks_ + z_block) * x_blocks_, x_blocks_);
}

PolicyKernel PolicyKernel::WithSlack(double s) const {
  return PolicyKernel(x_alphabet_, z_alphabet_, k_, s, weights_);
}

bool SatisfiesSupplyConstraint(std::span<const double> x_block,
                               std::span<const double> z_block,
                               std::span<const double> y_block, double s) {
  if (x_block.size() != z_block.size() || x_block.size() != y_block.size()) {
    throw Error(ErrorCode::kInvalidInput, "blocks have different lengths");
  }
  double surplus = 0.0;
  for (std::size_t i = 0; i < x_block.size(); ++i) {
    surplus += y_block[i] + z_block[i] - x_block[i];
  }
  const double average = surplus / static_cast<double>(x_block.size());
  return average >= -kValueTolerance && average <= s + kValueTolerance;
}

std::vector<std::size_t> FeasibleOutputs(const Alphabet& x_alphabet,
                                         std::span<const double> x_block,
                                         std::span<const double> z_block,
                                         double s) {
  if (x_block.size() != z_block.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "input and noise blocks have different lengths");
  }
  if (x_block.empty()) throw Error(ErrorCode::kInvalidInput, "empty block");
  const int k = static_cast<int>(x_block.size());
  std::vector<std::size_t> out;
  const std::size_t count = BlockCount(x_alphabet.size(), k);
  for (std::size_t y = 0; y < count; ++y) {
    if (SatisfiesSupplyConstraint(x_block, z_block,
                                  BlockValues(x_alphabet, y, k), s)) {
      out.push_back(y);
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> FeasibleOutputTable(
    const Alphabet& x_alphabet, const Alphabet& z_alphabet, int k, double s) {
  KernelWeightCount(x_alphabet.size(), z_alphabet.size(), k);
  const std::size_t xb = BlockCount(x_alphabet.size(), k);
  const std::size_t zb = BlockCount(z_alphabet.size(), k);
  std::vector<std::vector<std::size_t>> table;
  table.reserve(xb * zb);
  for (std::size_t x = 0; x < xb; ++x) {
    const std::vector<double> xv = BlockValues(x_alphabet, x, k);
    for (std::size_t z = 0; z < zb; ++z) {
      table.push_back(
          FeasibleOutputs(x_alphabet, xv, BlockValues(z_alphabet, z, k), s));
    }
  }
  return table;
}

void CheckFeasibleGeometry(const Alphabet& x_alphabet,
                           const Alphabet& z_alphabet, int k, double s) {
  const auto table = FeasibleOutputTable(x_alphabet, z_alphabet, k, s);
  const std::size_t zb = BlockCount(z_alphabet.size(), k);
  for (std::size_t r = 0; r < table.size(); ++r) {
    if (table[r].empty()) {
      throw Error(ErrorCode::kInfeasible,
                  "no output block satisfies the supply constraint for input " +
                      FormatBlock(BlockValues(x_alphabet, r / zb, k)) +
                      " with noise " +
                      FormatBlock(BlockValues(z_alphabet, r % zb, k)) +
                      " at s=" + FormatDouble(s));
    }
  }
}

std::string PolicyViolation::Describe() const {
  std::string where =
      "input " + FormatBlock(x_block) + ", noise " + FormatBlock(z_block);
  switch (kind) {
    case Kind::kInvalidWeight:
      return where + ": output " + FormatBlock(y_block) +
             " has invalid weight " + FormatDouble(value);
    case Kind::kInfeasibleOutput:
      return where + ": mass " + FormatDouble(value) + " on output " +
             FormatBlock(y_block) + " violates the supply constraint";
    case Kind::kNormalization:
      return where + ": row sums to " + FormatDouble(value);
  }
  return where;
}

PolicyReport ValidatePolicy(const PolicyKernel& policy) {
  PolicyReport report;
  const int k = policy.k();
  const Alphabet& xa = policy.x_alphabet();
  for (std::size_t x = 0; x < policy.x_blocks(); ++x) {
    const std::vector<double> xv = BlockValues(xa, x, k);
    for (std::size_t z = 0; z < policy.z_blocks(); ++z) {
      const std::vector<double> zv = BlockValues(policy.z_alphabet(), z, k);
      const auto row = policy.row(x, z);
      double sum = 0.0;
      for (std::size_t y = 0; y < row.size(); ++y) {
        const double w = row[y];
        if (!std::isfinite(w) || w < 0.0) {
          report.violations.push_back({PolicyViolation::Kind::kInvalidWeight,
                                       xv, zv, BlockValues(xa, y, k), w});
          continue;
        }
        sum += w;
        if (w > 0.0) {
          std::vector<double> yv = BlockValues(xa, y, k);
          if (!SatisfiesSupplyConstraint(xv, zv, yv, policy.s())) {
            report.violations.push_back(
                {PolicyViolation::Kind::kInfeasibleOutput, xv, zv,
                 std::move(yv), w});
          }
        }
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        report.violations.push_back(
            {PolicyViolation::Kind::kNormalization, xv, zv, {}, sum});
      }
    }
  }
  return report;
}

void RequireValidPolicy(const PolicyKernel& policy) {
  const PolicyReport report = ValidatePolicy(policy);
  if (!report.ok()) {
    std::string message = "invalid policy: " +
                          report.violations.front().Describe();
    if (report.violations.size() > 1) {
      message += " (and " + std::to_string(report.violations.size() - 1) +
                 " more)";
    }
    throw Error(ErrorCode::kInvalidInput, message);
  }
}

PolicyKernel IdentityPolicy(const Alphabet& x_alphabet,
                            const Alphabet& z_alphabet, int k, double s) {
  const std::size_t xb = BlockCount(x_alphabet.size(), k);
  const std::size_t zb = BlockCount(z_alphabet.size(), k);
  std::vector<double> weights(
      KernelWeightCount(x_alphabet.size(), z_alphabet.size(), k), 0.0);
  for (std::size_t x = 0; x < xb; ++x) {
    for (std::size_t z = 0; z < zb; ++z) weights[(x * zb + z) * xb + x] = 1.0;
  }
  PolicyKernel policy(x_alphabet, z_alphabet, k, s, std::move(weights));
  const PolicyReport report = ValidatePolicy(policy);
  if (!report.ok()) {
    throw Error(ErrorCode::kInfeasible, "identity policy is infeasible: " +
                                            report.violations[0].Describe());
  }
  return policy;
}

PolicyKernel ConstantPolicy(const Alphabet& x_alphabet,
                            const Alphabet& z_alphabet, int k, double s,
                            std::size_t y_block) {
  const std::size_t xb = BlockCount(x_alphabet.size(), k);
  const std::size_t zb = BlockCount(z_alphabet.size(), k);
  if (y_block >= xb) {
    throw Error(ErrorCode::kInvalidInput, "constant output block out of range");
  }
  std::vector<double> weights(
      KernelWeightCount(x_alphabet.size(), z_alphabet.size(), k), 0.0);
  for (std::size_t r = 0; r < xb * zb; ++r) weights[r * xb + y_block] = 1.0;
  PolicyKernel policy(x_alphabet, z_alphabet, k, s, std::move(weights));
  const PolicyReport report = ValidatePolicy(policy);
  if (!report.ok()) {
    throw Error(ErrorCode::kInfeasible, "constant policy is infeasible: " +
                                            report.violations[0].Describe());
  }
  return policy;
}

PolicyKernel MixPolicies(const PolicyKernel& a, const PolicyKernel& b,
                         double tau) {
  if (a.k() != b.k() || !(a.x_alphabet() == b.x_alphabet()) ||
      !(a.z_alphabet() == b.z_alphabet())) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "kernels have different block shapes");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "mixing weight must lie in [0, 1]");
  }
  std::vector<double> weights(a.weights().size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] = tau * a.weights()[i] + (1.0 - tau) * b.weights()[i];
  }
  return PolicyKernel(a.x_alphabet(), a.z_alphabet(), a.k(),
                      std::max(a.s(), b.s()), std::move(weights));
}

PolicyKernel BlockwiseExtend(const PolicyKernel& policy, int l) {
  CheckBlockLength(l);
  const int k = policy.k();
  const std::size_t sub_x = policy.x_blocks();
  const std::size_t sub_z = policy.z_blocks();
  const std::size_t big_x = BlockCount(sub_x, l);
  const std::size_t big_z = BlockCount(sub_z, l);
  if (static_cast<double>(big_x) * big_z * big_x >
      static_cast<double>(kMaxKernelEntries)) {
    throw Error(ErrorCode::kSizeCap,
                "extended kernel with block length " + std::to_string(k * l) +
                    " exceeds the storage cap");
  }
  std::vector<double> weights(big_x * big_z * big_x, 0.0);
  std::vector<double> product;
  std::vector<double> next;
  for (std::size_t x = 0; x < big_x; ++x) {
    const auto x_parts = DecodeBlock(x, sub_x, l);
    for (std::size_t z = 0; z < big_z; ++z) {
      const auto z_parts = DecodeBlock(z, sub_z, l);
      product.assign(1, 1.0);
      for (int j = 0; j < l; ++j) {
        const auto sub = policy.row(x_parts[j], z_parts[j]);
        next.assign(product.size() * sub_x, 0.0);
        for (std::size_t a = 0; a < product.size(); ++a) {
          if (product[a] == 0.0) continue;
          for (std::size_t b = 0; b < sub_x; ++b) {
            next[a * sub_x + b] = product[a] * sub[b];
          }
        }
        product.swap(next);
      }
      std::copy(product.begin(), product.end(),
                weights.begin() + (x * big_z + z) * big_x);
    }
  }
  return PolicyKernel(policy.x_alphabet(), policy.z_alphabet(), k * l,
                      policy.s(), std::move(weights));
}

Pmf OutputLaws::LawPmf(int u, int p) const {
  std::vector<std::string> labels;
  labels.reserve(blocks());
  for (std::size_t y = 0; y < blocks(); ++y) {
    labels.push_back(BlockLabel(x_alphabet, y, k));
  }
  const auto w = law(u, p);
  return Pmf::Create(std::move(labels), std::vector<double>(w.begin(), w.end()),
                     kLawSumTolerance);
}

bool OutputLaws::full_support() const {
  for (const auto& law : laws) {
    for (double w : law) {
      if (!(w > 0.0)) return false;
    }
  }
  return true;
}

namespace {

// Probability of every block of length k under an i.i.d. law.
std::vector<double> BlockProbabilities(std::span<const double> law, int k) {
  const std::size_t count = BlockCount(law.size(), k);
  std::vector<double> out(count);
  for (std::size_t b = 0; b < count; ++b) {
    double p = 1.0;
    for (std::size_t s : DecodeBlock(b, law.size(), k)) p *= law[s];
    out[b] = p;
  }
  return out;
}

void CheckLawSums(const OutputLaws& laws) {
  for (std::size_t j = 0; j < 4; ++j) {
    double sum = 0.0;
    for (double w : laws.laws[j]) sum += w;
    if (std::abs(sum - 1.0) > kLawSumTolerance) {
      throw Error(ErrorCode::kNumerical,
                  "induced law " + std::to_string(j) + " sums to " +
                      FormatDouble(sum));
    }
  }
}

}  // namespace

OutputLaws InducedOutputLaws(const SourceModel& model,
                             const PolicyKernel& policy) {
  if (!(model.x_alphabet() == policy.x_alphabet()) ||
      !(model.z_alphabet() == policy.z_alphabet())) {
    throw Error(ErrorCode::kAlphabetMismatch,
                "policy alphabets differ from the model alphabets");
  }
  RequireValidPolicy(policy);
  const int k = policy.k();
  const std::vector<double> noise_blocks =
      BlockProbabilities(model.noise(), k);
  OutputLaws out{k, model.x_alphabet(), {}};
  for (int u = 0; u < 2; ++u) {
    for (int p = 0; p < 2; ++p) {
      const std::vector<double> input_blocks =
          BlockProbabilities(model.source(u, p), k);
      std::vector<double>& law = out.laws[LawIndex(u, p)];
      law.assign(policy.x_blocks(), 0.0);
      for (std::size_t x = 0; x < policy.x_blocks(); ++x) {
        for (std::size_t z = 0; z < policy.z_blocks(); ++z) {
          const double w = input_blocks[x] * noise_blocks[z];
          if (w == 0.0) continue;
          const auto row = policy.row(x, z);
          for (std::size_t y = 0; y < row.size(); ++y) law[y] += w * row[y];
        }
      }
    }
  }
  CheckLawSums(out);
  return out;
}

OutputLaws SourceLaws(const SourceModel& model) {
  OutputLaws out{1, model.x_alphabet(), {}};
  for (int u = 0; u < 2; ++u) {
    for (int p = 0; p < 2; ++p) {
      const auto src = model.source(u, p);
      out.laws[LawIndex(u, p)].assign(src.begin(), src.end());
    }
  }
  return out;
}

OutputLaws ProductLaws(const OutputLaws& laws, int l) {
  CheckBlockLength(l);
  const std::size_t sub = laws.blocks();
  const std::size_t count = BlockCount(sub, l);
  if (count > kMaxKernelEntries) {
    throw Error(ErrorCode::kSizeCap, "product law exceeds the storage cap");
  }
  OutputLaws out{laws.k * l, laws.x_alphabet, {}};
  for (std::size_t j = 0; j < 4; ++j) {
    out.laws[j] = BlockProbabilities(laws.laws[j], l);
  }
  return out;
}

}  // namespace hyptrade
