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

#include "hyptrade/model_io.h"

#include <fstream>
#include <sstream>

#include "hyptrade/error.h"
#include "hyptrade/numeric.h"

namespace hyptrade {
namespace {

using nlohmann::json;

const json& Field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("missing field '") + name + "'");
  }
  return doc.at(name);
}

std::vector<double> NumberArray(const json& value, const std::string& what) {
  if (!value.is_array()) {
    throw Error(ErrorCode::kInvalidInput, what + " must be an array");
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (const json& item : value) {
    if (!item.is_number()) {
      throw Error(ErrorCode::kInvalidInput, what + " must hold numbers");
    }
    out.push_back(item.get<double>());
  }
  return out;
}

std::size_t ParseBlock(const json& value, const Alphabet& alphabet, int k) {
  if (value.is_string()) {
    return ParseBlockLabel(alphabet, value.get<std::string>(), k);
  }
  const std::vector<double> values =
      value.is_number() ? std::vector<double>{value.get<double>()}
                        : NumberArray(value, "block");
  if (static_cast<int>(values.size()) != k) {
    throw Error(ErrorCode::kInvalidInput,
                "block has " + std::to_string(values.size()) +
                    " symbols, expected " + std::to_string(k));
  }
  std::vector<std::size_t> symbols;
  for (double v : values) symbols.push_back(alphabet.IndexOrThrow(v));
  return EncodeBlock(symbols, alphabet.size());
}

}  // namespace

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidInput,
                "'" + path + "' is not valid JSON: " + e.what());
  }
}

void WriteTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

SourceModel ParseModel(const json& doc) {
  try {
    const Alphabet x =
        Alphabet::Create(NumberArray(Field(doc, "x_alphabet"), "x_alphabet"));
    const Alphabet z =
        Alphabet::Create(NumberArray(Field(doc, "z_alphabet"), "z_alphabet"));

    const json& prior_doc = Field(doc, "prior");
    std::vector<double> flat;
    if (prior_doc.is_array() && prior_doc.size() == 2 &&
        prior_doc[0].is_array()) {
      for (const json& row : prior_doc) {
        const std::vector<double> r = NumberArray(row, "prior row");
        if (r.size() != 2) {
          throw Error(ErrorCode::kInvalidInput, "prior rows must have 2 entries");
        }
        flat.insert(flat.end(), r.begin(), r.end());
      }
    } else {
      flat = NumberArray(prior_doc, "prior");
    }
    if (flat.size() != 4) {
      throw Error(ErrorCode::kInvalidInput, "prior must have 4 entries");
    }
    const Prior prior = Prior::Create({flat[0], flat[1], flat[2], flat[3]});

    const json& cond = Field(doc, "cond");
    if (!cond.is_array() || cond.size() != 4) {
      throw Error(ErrorCode::kInvalidInput, "cond must hold four laws");
    }
    std::array<std::vector<double>, 4> source;
    for (std::size_t i = 0; i < 4; ++i) {
      source[i] = NumberArray(cond[i], "cond law");
    }
    return SourceModel::Create(x, z, prior, std::move(source),
                               NumberArray(Field(doc, "noise"), "noise"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("malformed model: ") + e.what());
  }
}

SourceModel LoadModel(const std::string& path) {
  return ParseModel(ReadJsonFile(path));
}

json ModelToJson(const SourceModel& model) {
  const auto& joint = model.prior().joint();
  json cond = json::array();
  for (int u = 0; u < 2; ++u) {
    for (int p = 0; p < 2; ++p) {
      const auto law = model.source(u, p);
      cond.push_back(std::vector<double>(law.begin(), law.end()));
    }
  }
  const auto x = model.x_alphabet().values();
  const auto z = model.z_alphabet().values();
  const auto noise = model.noise();
  return json{{"x_alphabet", std::vector<double>(x.begin(), x.end())},
              {"z_alphabet", std::vector<double>(z.begin(), z.end())},
              {"prior", {{joint[0], joint[1]}, {joint[2], joint[3]}}},
              {"cond", cond},
              {"noise", std::vector<double>(noise.begin(), noise.end())}};
}

Pmf ParsePmf(const json& doc) {
  if (doc.is_array()) return Pmf::FromWeights(NumberArray(doc, "pmf"));
  const std::vector<double> probs = NumberArray(Field(doc, "probs"), "probs");
  if (!doc.contains("labels")) return Pmf::FromWeights(probs);
  const json& labels_doc = doc.at("labels");
  if (!labels_doc.is_array()) {
    throw Error(ErrorCode::kInvalidInput, "labels must be an array");
  }
  std::vector<std::string> labels;
  for (const json& l : labels_doc) {
    if (l.is_string()) {
      labels.push_back(l.get<std::string>());
    } else if (l.is_number()) {
      labels.push_back(FormatDouble(l.get<double>()));
    } else {
      throw Error(ErrorCode::kInvalidInput, "labels must be strings or numbers");
    }
  }
  if (labels.size() != probs.size()) {
    throw Error(ErrorCode::kInvalidInput, "labels and probs differ in length");
  }
  return Pmf::Create(std::move(labels), probs);
}

PolicyKernel ParsePolicy(const json& doc, const Alphabet& x_alphabet,
                         const Alphabet& z_alphabet) {
  try {
    const json& k_doc = Field(doc, "k");
    if (!k_doc.is_number_integer() || k_doc.get<int>() < 1) {
      throw Error(ErrorCode::kInvalidInput, "k must be a positive integer");
    }
    const int k = k_doc.get<int>();
    if (k > kDefaultBlockCap) {
      throw Error(ErrorCode::kSizeCap,
                  "policy block length exceeds the cap of " +
                      std::to_string(kDefaultBlockCap));
    }
    const json& s_doc = Field(doc, "s");
    if (!s_doc.is_number()) {
      throw Error(ErrorCode::kInvalidInput, "s must be a number");
    }
    const std::size_t xb = BlockCount(x_alphabet.size(), k);
    const std::size_t zb = BlockCount(z_alphabet.size(), k);
    PolicyKernel kernel(x_alphabet, z_alphabet, k, s_doc.get<double>(),
                        std::vector<double>(
            KernelWeightCount(x_alphabet.size(), z_alphabet.size(), k), 0.0));
    std::vector<bool> seen(xb * zb, false);
    const json& rows = Field(doc, "rows");
    if (!rows.is_array()) {
      throw Error(ErrorCode::kInvalidInput, "rows must be an array");
    }
    for (const json& row : rows) {
      const json& input = Field(row, "input");
      if (!input.is_array() || input.size() != 2) {
        throw Error(ErrorCode::kInvalidInput,
                    "row input must be [x_block, z_block]");
      }
      const std::size_t x = ParseBlock(input[0], x_alphabet, k);
      const std::size_t z = ParseBlock(input[1], z_alphabet, k);
      if (seen[x * zb + z]) {
        throw Error(ErrorCode::kInvalidInput,
                    "duplicate row for input " + input.dump());
      }
      seen[x * zb + z] = true;
      const json& outputs = Field(row, "output_probs");
      if (!outputs.is_object()) {
        throw Error(ErrorCode::kInvalidInput, "output_probs must be an object");
      }
      auto target = kernel.mutable_row(x, z);
      for (const auto& [label, prob] : outputs.items()) {
        if (!prob.is_number()) {
          throw Error(ErrorCode::kInvalidInput,
                      "output probability for '" + label + "' is not a number");
        }
        target[ParseBlockLabel(x_alphabet, label, k)] = prob.get<double>();
      }
    }
    return kernel;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidInput,
                std::string("malformed policy: ") + e.what());
  }
}

PolicyKernel LoadPolicy(const std::string& path, const Alphabet& x_alphabet,
                        const Alphabet& z_alphabet) {
  return ParsePolicy(ReadJsonFile(path), x_alphabet, z_alphabet);
}

json PolicyToJson(const PolicyKernel& policy) {
  const int k = policy.k();
  json rows = json::array();
  for (std::size_t x = 0; x < policy.x_blocks(); ++x) {
    for (std::size_t z = 0; z < policy.z_blocks(); ++z) {
      json outputs = json::object();
      const auto row = policy.row(x, z);
      for (std::size_t y = 0; y < row.size(); ++y) {
        if (row[y] > 0.0) {
          outputs[BlockLabel(policy.x_alphabet(), y, k)] = row[y];
        }
      }
      rows.push_back({{"input",
                       {BlockLabel(policy.x_alphabet(), x, k),
                        BlockLabel(policy.z_alphabet(), z, k)}},
                      {"output_probs", outputs}});
    }
  }
  return json{{"k", k}, {"s", policy.s()}, {"rows", rows}};
}

}  // namespace hyptrade
