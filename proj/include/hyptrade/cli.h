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

#ifndef HYPTRADE_CLI_H_
#define HYPTRADE_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "hyptrade/error.h"
#include "hyptrade/pmf.h"

namespace hyptrade {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitMalformed = 2,
  kExitSupport = 3,
  kExitCrossCheck = 4,
  kExitSizeCap = 5,
  kExitIo = 6,
};

int ExitCodeFor(ErrorCode code);

// "bern:theta" or a path to a JSON pmf.
Pmf ParsePmfArgument(const std::string& arg);

// "start:step:stop" (inclusive) or a comma-separated list.
std::vector<double> ParseNumberList(const std::string& text);

// Runs the hyptrade command line and returns its exit code.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace hyptrade

#endif  // HYPTRADE_CLI_H_
