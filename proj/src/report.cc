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

#include "hyptrade/report.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "hyptrade/error.h"
#include "hyptrade/model_io.h"
#include "hyptrade/numeric.h"

namespace hyptrade {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 55.0;
constexpr int kTicks = 4;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

std::string Fixed(double value, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

// Tick label with enough digits to tell neighbouring ticks apart.
std::string TickLabel(double value, double spacing) {
  int digits = 0;
  while (digits < 8 && spacing * std::pow(10.0, digits) < 0.999) ++digits;
  return Fixed(value, digits);
}

}  // namespace

std::string CsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string TradeoffCsv(std::span<const TradeoffPoint> points) {
  std::string out =
      "lambda,s,k,privacy_rate,utility_rate,feasible,kernel_params\n";
  for (const TradeoffPoint& p : points) {
    const std::string fields[] = {FormatDouble(p.lambda),
                                  FormatDouble(p.s),
                                  std::to_string(p.k),
                                  FormatDouble(p.privacy_rate),
                                  FormatDouble(p.utility_rate),
                                  p.feasible ? "true" : "false",
                                  KernelParameterization::Format(p.params)};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i > 0) out += ',';
      out += CsvField(fields[i]);
    }
    out += '\n';
  }
  return out;
}

std::string TradeoffSvg(std::span<const TradeoffPoint> points) {
  std::map<double, std::vector<const TradeoffPoint*>> curves;
  double x_lo = kInf;
  double x_hi = -kInf;
  double y_hi = 0.0;
  for (const TradeoffPoint& p : points) {
    x_lo = std::min(x_lo, p.lambda);
    x_hi = std::max(x_hi, p.lambda);
    curves[p.s];
    if (p.feasible && std::isfinite(p.privacy_rate)) {
      curves[p.s].push_back(&p);
      y_hi = std::max(y_hi, p.privacy_rate);
    }
  }
  if (!(x_lo < x_hi)) {
    x_lo = points.empty() ? 0.0 : x_lo - 0.5;
    x_hi = x_lo + 1.0;
  }
  if (!(y_hi > 0.0)) y_hi = 1.0;
  y_hi *= 1.1;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double y) { return kTop + plot_h - y / y_hi * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << Fixed(kWidth, 0) << "\" height=\"" << Fixed(kHeight, 0)
      << "\" viewBox=\"0 0 " << Fixed(kWidth, 0) << ' ' << Fixed(kHeight, 0)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << Fixed(kLeft) << "\" y1=\"" << Fixed(kTop + plot_h)
      << "\" x2=\"" << Fixed(kLeft + plot_w) << "\" y2=\""
      << Fixed(kTop + plot_h) << "\"/>\n"
      << "<line x1=\"" << Fixed(kLeft) << "\" y1=\"" << Fixed(kTop)
      << "\" x2=\"" << Fixed(kLeft) << "\" y2=\"" << Fixed(kTop + plot_h)
      << "\"/>\n</g>\n";

  const double x_step = (x_hi - x_lo) / kTicks;
  const double y_step = y_hi / kTicks;
  for (int i = 0; i <= kTicks; ++i) {
    const double x = x_lo + i * x_step;
    svg << "<text x=\"" << Fixed(sx(x)) << "\" y=\""
        << Fixed(kTop + plot_h + 18) << "\" text-anchor=\"middle\">"
        << TickLabel(x, x_step) << "</text>\n";
    const double y = i * y_step;
    svg << "<text x=\"" << Fixed(kLeft - 6) << "\" y=\"" << Fixed(sy(y) + 4)
        << "\" text-anchor=\"end\">" << TickLabel(y, y_step) << "</text>\n";
  }
  svg << "<text x=\"" << Fixed(kLeft + plot_w / 2) << "\" y=\""
      << Fixed(kHeight - 12)
      << "\" text-anchor=\"middle\">utility guarantee lambda (nats/slot)</text>\n"
      << "<text x=\"16\" y=\"" << Fixed(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << Fixed(kTop + plot_h / 2)
      << ")\">privacy rate (nats/slot)</text>\n";

  std::size_t index = 0;
  for (const auto& [s, curve] : curves) {
    const char* color = kPalette[index % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (i > 0) svg << ' ';
      svg << Fixed(sx(curve[i]->lambda)) << ','
          << Fixed(sy(curve[i]->privacy_rate));
    }
    svg << "\"/>\n";
    const double ly = kTop + 20.0 * (index + 1);
    svg << "<line x1=\"" << Fixed(kLeft + plot_w + 15) << "\" y1=\""
        << Fixed(ly) << "\" x2=\"" << Fixed(kLeft + plot_w + 40) << "\" y2=\""
        << Fixed(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << Fixed(kLeft + plot_w + 46) << "\" y=\""
        << Fixed(ly + 4) << "\">s = " << FormatDouble(s) << "</text>\n";
    ++index;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string Fnv1aHex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::string FileDigest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return Fnv1aHex(bytes);
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

nlohmann::json RunManifest::ToJson(const std::string& artifact_path) const {
  nlohmann::json inputs = nlohmann::json::array();
  for (const std::string& path : input_paths) {
    inputs.push_back({{"path", path}, {"fnv1a64", FileDigest(path)}});
  }
  return {{"command", command},
          {"tool_version", kToolVersion},
          {"inputs", inputs},
          {"parameters", parameters},
          {"seed", seed},
          {"artifact",
           {{"path", artifact_path}, {"fnv1a64", FileDigest(artifact_path)}}},
          {"started_at", started_at},
          {"finished_at", finished_at}};
}

std::string WriteManifest(const RunManifest& manifest,
                          const std::string& artifact_path) {
  const std::string path = artifact_path + ".manifest.json";
  WriteTextFile(path, manifest.ToJson(artifact_path).dump(2) + "\n");
  return path;
}

}  // namespace hyptrade
