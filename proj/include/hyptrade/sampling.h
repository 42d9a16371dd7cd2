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

#ifndef HYPTRADE_SAMPLING_H_
#define HYPTRADE_SAMPLING_H_

#include <cstddef>
#include <random>
#include <vector>

#include "hyptrade/model.h"

namespace hyptrade {

// Seeded draws used by the search and the verification suites. Every draw is
// built from raw mt19937_64 output, so sequences are identical across
// standard library implementations.

// Uniform in [0, 1).
double Uniform01(std::mt19937_64& rng);
double UniformIn(std::mt19937_64& rng, double lo, double hi);

// Flat Dirichlet draw on the simplex of `size` entries.
std::vector<double> RandomSimplexPoint(std::mt19937_64& rng, std::size_t size);

// Full-support pmf with every entry at least `floor`: a flat Dirichlet draw
// shrunk toward the floor. Requires size * floor < 1.
std::vector<double> RandomPmf(std::mt19937_64& rng, std::size_t size,
                              double floor = 0.01);

// Binary pmf with mass theta ~ U(lo, hi) on the first symbol.
std::vector<double> RandomBernoulli(std::mt19937_64& rng, double lo = 0.05,
                                    double hi = 0.95);

// X = {0, .., x_size - 1}, Z = {0, 1}, uniform prior, source laws from
// RandomPmf and noise from RandomBernoulli.
SourceModel RandomModel(std::mt19937_64& rng, std::size_t x_size);

// Every row is a flat Dirichlet draw over its admissible outputs.
PolicyKernel RandomKernel(std::mt19937_64& rng, const Alphabet& x_alphabet,
                          const Alphabet& z_alphabet, int k, double s);

}  // namespace hyptrade

#endif  // HYPTRADE_SAMPLING_H_
