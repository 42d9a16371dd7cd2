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

#include "hyptrade/sampling.h"

#include <cmath>

#include "hyptrade/error.h"

namespace hyptrade {

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double UniformIn(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * Uniform01(rng);
}

std::vector<double> RandomSimplexPoint(std::mt19937_64& rng,
                                       std::size_t size) {
  if (size == 0) throw Error(ErrorCode::kInvalidInput, "empty simplex");
  std::vector<double> point(size);
  double sum = 0.0;
  for (double& v : point) {
    v = -std::log1p(-Uniform01(rng));
    sum += v;
  }
  if (sum == 0.0) {
    point.assign(size, 1.0 / size);
    return point;
  }
  for (double& v : point) v /= sum;
  return point;
}

std::vector<double> RandomPmf(std::mt19937_64& rng, std::size_t size,
                              double floor) {
  if (!(floor >= 0.0) || floor * size >= 1.0) {
    throw Error(ErrorCode::kInvalidInput, "pmf floor leaves no free mass");
  }
  std::vector<double> pmf = RandomSimplexPoint(rng, size);
  const double free_mass = 1.0 - floor * size;
  for (double& v : pmf) v = floor + free_mass * v;
  return pmf;
}

std::vector<double> RandomBernoulli(std::mt19937_64& rng, double lo,
                                    double hi) {
  const double theta = UniformIn(rng, lo, hi);
  return {theta, 1.0 - theta};
}

SourceModel RandomModel(std::mt19937_64& rng, std::size_t x_size) {
  std::vector<double> values(x_size);
  for (std::size_t i = 0; i < x_size; ++i) values[i] = static_cast<double>(i);
  std::array<std::vector<double>, 4> source;
  for (auto& law : source) {
    law = x_size == 2 ? RandomBernoulli(rng) : RandomPmf(rng, x_size);
  }
  return SourceModel::Create(Alphabet::Create(values),
                             Alphabet::Create({0.0, 1.0}), Prior::Uniform(),
                             std::move(source), RandomBernoulli(rng));
}

PolicyKernel RandomKernel(std::mt19937_64& rng, const Alphabet& x_alphabet,
                          const Alphabet& z_alphabet, int k, double s) {
  CheckFeasibleGeometry(x_alphabet, z_alphabet, k, s);
  const auto table = FeasibleOutputTable(x_alphabet, z_alphabet, k, s);
  const std::size_t xb = BlockCount(x_alphabet.size(), k);
  std::vector<double> weights(table.size() * xb, 0.0);
  for (std::size_t r = 0; r < table.size(); ++r) {
    const std::vector<double> draw = RandomSimplexPoint(rng, table[r].size());
    for (std::size_t i = 0; i < draw.size(); ++i) {
      weights[r * xb + table[r][i]] = draw[i];
    }
  }
  return PolicyKernel(x_alphabet, z_alphabet, k, s, std::move(weights));
}

}  // namespace hyptrade
