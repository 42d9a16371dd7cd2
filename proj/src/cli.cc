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

#include "hyptrade/cli.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "hyptrade/bayes.h"
#include "hyptrade/divergence.h"
#include "hyptrade/model.h"
#include "hyptrade/model_io.h"
#include "hyptrade/numeric.h"
#include "hyptrade/optimizer.h"
#include "hyptrade/report.h"
#include "hyptrade/verify.h"

namespace hyptrade {
namespace {

constexpr double kCrossCheckTolerance = 2e-3;
constexpr char kBuiltinModel[] = "example";
constexpr char kBuiltinIdentity[] = "identity";

double ParseNumber(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw Error(ErrorCode::kInvalidInput, "not a number: '" + text + "'");
  }
  return value;
}

// Keeps grid values such as 0.07 at the nearest double of their decimal form.
double SnapDecimal(double value) { return std::round(value * 1e12) / 1e12; }

struct Common {
  std::string model = kBuiltinModel;
  std::string policy = kBuiltinIdentity;
  std::string target = "utility";
};

SourceModel LoadModelArg(const std::string& arg) {
  return arg == kBuiltinModel ? ExampleModel() : LoadModel(arg);
}

// The identity runs at the smallest slack that admits it.
PolicyKernel LoadPolicyArg(const std::string& arg, const SourceModel& model) {
  if (arg == kBuiltinIdentity) {
    const double s = std::max(0.0, model.z_alphabet().values().back());
    return IdentityPolicy(model.x_alphabet(), model.z_alphabet(), 1, s);
  }
  PolicyKernel policy =
      LoadPolicy(arg, model.x_alphabet(), model.z_alphabet());
  RequireValidPolicy(policy);
  return policy;
}

std::vector<std::string> InputFiles(const Common& c, bool with_policy) {
  std::vector<std::string> files;
  if (c.model != kBuiltinModel) files.push_back(c.model);
  if (with_policy && c.policy != kBuiltinIdentity) files.push_back(c.policy);
  return files;
}

std::string PairLabel(const std::array<std::size_t, 2>& pair) {
  auto name = [](std::size_t j) {
    return "(" + std::to_string(j / 2) + "," + std::to_string(j % 2) + ")";
  };
  return name(pair[0]) + " vs " + name(pair[1]);
}

struct DivergenceArgs {
  std::vector<std::string> pmfs;
  bool kl = false;
  bool chernoff = false;
  bool t = false;
  bool allow_zeros = false;
};

int RunDivergence(const DivergenceArgs& a, std::ostream& out) {
  std::vector<Pmf> pmfs;
  for (const std::string& arg : a.pmfs) pmfs.push_back(ParsePmfArgument(arg));
  const bool all = !a.kl && !a.chernoff && !a.t;
  const ZeroPolicy zeros =
      a.allow_zeros ? ZeroPolicy::kAllowZeros : ZeroPolicy::kRequireFullSupport;
  if (pmfs.size() < 2 || pmfs.size() > 3) {
    throw Error(ErrorCode::kInvalidInput, "expected two or three pmfs");
  }
  if (a.t && pmfs.size() != 3) {
    throw Error(ErrorCode::kInvalidInput, "--t needs three pmfs");
  }
  if (a.kl || all) {
    out << "kl = " << FormatDouble(KlDivergence(pmfs[0], pmfs[1], zeros))
        << "\n";
  }
  if (a.chernoff || all) {
    const ChernoffResult c = Chernoff(pmfs[0], pmfs[1], zeros);
    out << "chernoff = " << FormatDouble(c.value)
        << " mu = " << FormatDouble(c.mu) << "\n";
  }
  if (a.t || (all && pmfs.size() == 3)) {
    const TDivergenceResult t = TDivergence(pmfs[0], pmfs[1], pmfs[2]);
    out << "t = " << FormatDouble(t.value)
        << " mu = " << FormatDouble(t.argmax.mu)
        << " nu = " << FormatDouble(t.argmax.nu) << "\n";
  }
  return kExitOk;
}

struct ExponentArgs {
  Common common;
  bool cross_check = false;
  double grid_step = 1e-3;
};

int RunExponent(const ExponentArgs& a, std::ostream& out) {
  const SourceModel model = LoadModelArg(a.common.model);
  const PolicyKernel policy = LoadPolicyArg(a.common.policy, model);
  const OutputLaws laws = InducedOutputLaws(model, policy);
  const TestTarget target = ParseTarget(a.common.target);
  const ExponentReport c = ExponentTheorem1(laws, target);
  out << "target = " << TargetName(target) << "\n"
      << "chernoff_form = " << FormatDouble(c.value)
      << " argmin = " << PairLabel(c.argmin_pair) << "\n";
  if (!a.cross_check) return kExitOk;
  const ExponentReport t = ExponentT(laws, target);
  const ExponentReport s = ExponentSanov(laws, target, a.grid_step);
  const double dt = std::abs(t.value - c.value);
  const double ds = std::abs(s.value - c.value);
  out << "t_form = " << FormatDouble(t.value)
      << " delta = " << FormatDouble(dt) << "\n"
      << "sanov_form = " << FormatDouble(s.value)
      << " delta = " << FormatDouble(ds)
      << " grid_step = " << FormatDouble(a.grid_step) << "\n";
  const bool agree =
      dt <= kCrossCheckTolerance && ds <= kCrossCheckTolerance;
  out << "cross_check = " << (agree ? "PASS" : "FAIL") << "\n";
  return agree ? kExitOk : kExitCrossCheck;
}

struct ExactErrorArgs {
  Common common;
  int n = 1;
  std::string method = "types";
};

int RunExactError(const ExactErrorArgs& a, std::ostream& out) {
  const SourceModel model = LoadModelArg(a.common.model);
  const PolicyKernel policy = LoadPolicyArg(a.common.policy, model);
  const OutputLaws laws = InducedOutputLaws(model, policy);
  const TestTarget target = ParseTarget(a.common.target);
  if (a.n < 1 || a.n % laws.k != 0) {
    throw Error(ErrorCode::kInvalidInput,
                "--n must be a positive multiple of the block length " +
                    std::to_string(laws.k));
  }
  const int n_blocks = a.n / laws.k;
  ErrorProbability alpha;
  if (a.method == "enumerate") {
    alpha = ExactMinError(laws, model.prior(), target, n_blocks);
  } else if (a.method == "types") {
    if (laws.k != 1) {
      throw Error(ErrorCode::kInvalidInput,
                  "the types method needs a single-slot policy");
    }
    alpha = ExactMinErrorIid(laws, model.prior(), target, a.n);
  } else {
    throw Error(ErrorCode::kInvalidInput,
                "unknown method '" + a.method + "'");
  }
  const double exponent = alpha.ExponentPerSlot(a.n);
  const double bound =
      ExponentLowerBound(laws, model.prior(), target, n_blocks);
  out << "target = " << TargetName(target) << "\n"
      << "n = " << a.n << "\n"
      << "alpha = " << FormatDouble(alpha.value) << "\n"
      << "log_alpha = " << FormatDouble(alpha.log_value) << "\n"
      << "exponent_estimate = " << FormatDouble(exponent) << "\n"
      << "lower_bound = " << FormatDouble(bound) << "\n"
      << "bound_check = " << (exponent >= bound ? "PASS" : "FAIL") << "\n";
  return kExitOk;
}

struct TradeoffArgs {
  Common common;
  std::string lambda_grid = "0:0.01:0.16";
  std::string s_values = "1,2";
  int k = 1;
  std::string correction = "off";
  std::uint64_t seed = SearchConfig{}.seed;
  int grid_points = SearchConfig{}.grid_points_per_parameter;
  int restarts = SearchConfig{}.restarts;
  int workers = 1;
  std::string out_csv;
  std::string out_svg;
};

int RunTradeoff(const TradeoffArgs& a, std::ostream& out) {
  RunManifest manifest;
  manifest.command = "tradeoff";
  manifest.started_at = UtcTimestamp();
  const SourceModel model = LoadModelArg(a.common.model);
  if (a.correction != "on" && a.correction != "off") {
    throw Error(ErrorCode::kInvalidInput, "--correction must be on or off");
  }
  const std::vector<double> lambdas = ParseNumberList(a.lambda_grid);
  const std::vector<double> s_values = ParseNumberList(a.s_values);
  SearchConfig search;
  search.seed = a.seed;
  search.grid_points_per_parameter = a.grid_points;
  search.restarts = a.restarts;
  search.workers = a.workers;
  ValidateSearchConfig(search);
  GuaranteeConfig config;
  config.k = a.k;
  config.include_correction = a.correction == "on";

  const std::vector<TradeoffPoint> points =
      TradeoffSweep(model, lambdas, s_values, config, search);
  const std::string csv = TradeoffCsv(points);
  manifest.finished_at = UtcTimestamp();
  manifest.input_paths = InputFiles(a.common, false);
  manifest.seed = a.seed;
  manifest.parameters = {{"model", a.common.model},
                         {"lambda_grid", a.lambda_grid},
                         {"lambdas", lambdas},
                         {"s", s_values},
                         {"k", a.k},
                         {"correction", a.correction},
                         {"grid_points_per_parameter", a.grid_points},
                         {"restarts", a.restarts},
                         {"local_step_tolerance", search.local_step_tolerance},
                         {"workers", a.workers}};
  if (a.out_csv.empty()) {
    out << csv;
  } else {
    WriteTextFile(a.out_csv, csv);
    WriteManifest(manifest, a.out_csv);
    out << "wrote " << a.out_csv << "\n";
  }
  if (!a.out_svg.empty()) {
    WriteTextFile(a.out_svg, TradeoffSvg(points));
    WriteManifest(manifest, a.out_svg);
    out << "wrote " << a.out_svg << "\n";
  }
  const auto infeasible = std::count_if(
      points.begin(), points.end(),
      [](const TradeoffPoint& p) { return !p.feasible; });
  if (infeasible > 0) {
    out << infeasible << " of " << points.size()
        << " points have no kernel meeting the guarantee\n";
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 2018;
  int trials = 0;
  std::string model;
};

int RunVerifyCommand(const VerifyArgs& a, std::ostream& out) {
  VerifyOptions options;
  options.seed = a.seed;
  options.trials = a.trials;
  if (!a.model.empty()) options.model = LoadModelArg(a.model);
  bool ok = true;
  for (const SuiteResult& r : RunVerify(a.suite, options)) {
    out << r.Summary() << "\n";
    ok = ok && r.passed();
  }
  out << "verify: " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitVerifyFailed;
}

void AddCommon(CLI::App* cmd, Common& c, bool policy) {
  cmd->add_option("--model", c.model,
                  "model JSON file, or 'example' for the bundled model")
      ->capture_default_str();
  if (policy) {
    cmd->add_option("--policy", c.policy,
                    "policy JSON file, or 'identity'")
        ->capture_default_str();
    cmd->add_option("--target", c.target, "utility or privacy")
        ->check(CLI::IsMember({"utility", "privacy"}))
        ->capture_default_str();
  }
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
    case ErrorCode::kAlphabetMismatch:
    case ErrorCode::kInfeasible:
      return kExitMalformed;
    case ErrorCode::kSupport:
      return kExitSupport;
    case ErrorCode::kSizeCap:
      return kExitSizeCap;
    case ErrorCode::kIo:
      return kExitIo;
    case ErrorCode::kNumerical:
      return kExitVerifyFailed;
  }
  return kExitVerifyFailed;
}

Pmf ParsePmfArgument(const std::string& arg) {
  constexpr std::string_view kBern = "bern:";
  if (arg.rfind(kBern, 0) == 0) {
    const double theta = ParseNumber(arg.substr(kBern.size()));
    if (!(theta >= 0.0 && theta <= 1.0)) {
      throw Error(ErrorCode::kInvalidInput,
                  "Bernoulli parameter must lie in [0, 1]");
    }
    return Pmf::Bernoulli(theta);
  }
  return ParsePmf(ReadJsonFile(arg));
}

std::vector<double> ParseNumberList(const std::string& text) {
  std::vector<std::string> parts;
  const char separator = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, separator)) parts.push_back(item);
  std::vector<double> values;
  if (separator == ',') {
    for (const std::string& p : parts) values.push_back(ParseNumber(p));
    if (values.empty()) {
      throw Error(ErrorCode::kInvalidInput, "empty list");
    }
    return values;
  }
  if (parts.size() != 3) {
    throw Error(ErrorCode::kInvalidInput,
                "range must be start:step:stop, got '" + text + "'");
  }
  const double start = ParseNumber(parts[0]);
  const double step = ParseNumber(parts[1]);
  const double stop = ParseNumber(parts[2]);
  if (!(step > 0.0) || stop < start) {
    throw Error(ErrorCode::kInvalidInput, "range '" + text + "' is empty");
  }
  const double count = std::floor((stop - start) / step + 1e-9) + 1.0;
  if (count > 1e6) {
    throw Error(ErrorCode::kSizeCap, "range '" + text + "' is too long");
  }
  for (int i = 0; i < static_cast<int>(count); ++i) {
    values.push_back(SnapDecimal(start + i * step));
  }
  return values;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Privacy-utility trade-off of composite Bayesian tests"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  DivergenceArgs div;
  CLI::App* div_cmd =
      app.add_subcommand("divergence", "KL, Chernoff and T divergences");
  div_cmd->add_option("pmfs", div.pmfs, "pmfs as bern:THETA or JSON files")
      ->required()
      ->expected(2, 3);
  div_cmd->add_flag("--kl", div.kl, "KL divergence of the first two");
  div_cmd->add_flag("--chernoff", div.chernoff,
                    "Chernoff information of the first two");
  div_cmd->add_flag("--t", div.t, "T divergence of all three");
  div_cmd->add_flag("--allow-zeros", div.allow_zeros,
                    "allow zero mass in the first argument");

  ExponentArgs exp;
  CLI::App* exp_cmd =
      app.add_subcommand("exponent", "error exponent of a composite test");
  AddCommon(exp_cmd, exp.common, true);
  exp_cmd->add_flag("--cross-check", exp.cross_check,
                    "also compute the T and Sanov forms");
  exp_cmd->add_option("--grid-step", exp.grid_step, "Sanov grid step")
      ->capture_default_str();

  ExactErrorArgs exact;
  CLI::App* exact_cmd = app.add_subcommand(
      "exact-error", "exact minimal error probability after n slots");
  AddCommon(exact_cmd, exact.common, true);
  exact_cmd->add_option("--n", exact.n, "number of slots")->required();
  exact_cmd->add_option("--method", exact.method)
      ->check(CLI::IsMember({"enumerate", "types"}))
      ->capture_default_str();

  TradeoffArgs trade;
  CLI::App* trade_cmd =
      app.add_subcommand("tradeoff", "privacy-utility trade-off sweep");
  AddCommon(trade_cmd, trade.common, false);
  trade_cmd->add_option("--lambda-grid", trade.lambda_grid,
                        "start:step:stop or a comma list")
      ->capture_default_str();
  trade_cmd->add_option("--s", trade.s_values, "comma list of slack values")
      ->capture_default_str();
  trade_cmd->add_option("--k", trade.k, "block length")->capture_default_str();
  trade_cmd->add_option("--correction", trade.correction,
                        "add ln(8 p_max)/k to the guarantee")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  trade_cmd->add_option("--seed", trade.seed)->capture_default_str();
  trade_cmd->add_option("--grid-points", trade.grid_points,
                        "grid points per kernel parameter")
      ->capture_default_str();
  trade_cmd->add_option("--restarts", trade.restarts)->capture_default_str();
  trade_cmd->add_option("--workers", trade.workers)->capture_default_str();
  trade_cmd->add_option("--out-csv", trade.out_csv);
  trade_cmd->add_option("--out-svg", trade.out_svg);

  VerifyArgs ver;
  CLI::App* ver_cmd =
      app.add_subcommand("verify", "run the verification suites");
  ver_cmd->add_option("--suite", ver.suite)->capture_default_str();
  ver_cmd->add_option("--seed", ver.seed)->capture_default_str();
  ver_cmd->add_option("--trials", ver.trials,
                      "random cases per suite, 0 for the defaults");
  ver_cmd->add_option("--model", ver.model, "replaces the bundled model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitMalformed;
  }

  try {
    if (*div_cmd) return RunDivergence(div, out);
    if (*exp_cmd) return RunExponent(exp, out);
    if (*exact_cmd) return RunExactError(exact, out);
    if (*trade_cmd) return RunTradeoff(trade, out);
    if (*ver_cmd) return RunVerifyCommand(ver, out);
  } catch (const Error& e) {
    err << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return ExitCodeFor(e.code());
  }
  return kExitMalformed;
}

}  // namespace hyptrade
