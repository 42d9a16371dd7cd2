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

#ifndef HYPTRADE_MODEL_IO_H_
#define HYPTRADE_MODEL_IO_H_

#include <string>

#include "json.hpp"

#include "hyptrade/model.h"
#include "hyptrade/pmf.h"

namespace hyptrade {

// Throws Error(kIo) if the file cannot be read and Error(kInvalidInput) if it
// is not JSON.
nlohmann::json ReadJsonFile(const std::string& path);
// Throws Error(kIo) on any write failure.
void WriteTextFile(const std::string& path, const std::string& content);

// {"x_alphabet": [..], "z_alphabet": [..],
//  "prior": [[p00, p01], [p10, p11]] or [p00, p01, p10, p11],
//  "cond": [law00, law01, law10, law11], "noise": [..]}
SourceModel ParseModel(const nlohmann::json& doc);
SourceModel LoadModel(const std::string& path);
nlohmann::json ModelToJson(const SourceModel& model);

// Either a bare weight array or {"labels": [..], "probs": [..]}.
Pmf ParsePmf(const nlohmann::json& doc);

// {"k": k, "s": s, "rows": [{"input": [x_block, z_block],
//                            "output_probs": {"y,..": prob, ..}}, ..]}
// Blocks are value arrays or comma-separated labels. Rows left out are all
// zero and therefore fail validation.
PolicyKernel ParsePolicy(const nlohmann::json& doc, const Alphabet& x_alphabet,
                         const Alphabet& z_alphabet);
PolicyKernel LoadPolicy(const std::string& path, const Alphabet& x_alphabet,
                        const Alphabet& z_alphabet);
// Lists only the positive output probabilities.
nlohmann::json PolicyToJson(const PolicyKernel& policy);

}  // namespace hyptrade

#endif  // HYPTRADE_MODEL_IO_H_
