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

#ifndef HYPTRADE_REPORT_H_
#define HYPTRADE_REPORT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hyptrade/optimizer.h"

namespace hyptrade {

inline constexpr char kToolVersion[] = "1.0.0";

// Quotes a field when it holds a comma, quote, CR or LF (RFC 4180).
std::string CsvField(std::string_view field);

// Header lambda,s,k,privacy_rate,utility_rate,feasible,kernel_params and one
// line per point, CRLF-free, numbers in shortest round-trip form.
std::string TradeoffCsv(std::span<const TradeoffPoint> points);

// SVG 1.1 line plot of privacy rate against lambda with one polyline per
// slack value. Infeasible points are left out. The output depends only on
// the points.
std::string TradeoffSvg(std::span<const TradeoffPoint> points);

// 64-bit FNV-1a as 16 lowercase hex digits.
std::string Fnv1aHex(std::string_view bytes);
// Throws Error(kIo) if the file cannot be read.
std::string FileDigest(const std::string& path);

// Current UTC time as YYYY-MM-DDThh:mm:ssZ.
std::string UtcTimestamp();

struct RunManifest {
  std::string command;
  std::vector<std::string> input_paths;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;

  // Digests every input and the artifact at `artifact_path`.
  nlohmann::json ToJson(const std::string& artifact_path) const;
};

// Writes `<artifact_path>.manifest.json`. Returns its path.
std::string WriteManifest(const RunManifest& manifest,
                          const std::string& artifact_path);

}  // namespace hyptrade

#endif  // HYPTRADE_REPORT_H_
