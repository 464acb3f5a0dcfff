// Copyright 2026 The rbflp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The rbflp command line: generate, solve, compare and sweep.

#ifndef RBFLP_TOOLS_CLI_H_
#define RBFLP_TOOLS_CLI_H_

#include <iosfwd>

namespace rbflp::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidInstance = 1,
  kExitGapNotReached = 2,  // bounds are still written
  kExitIo = 3,
};

// Argument errors return CLI11's own codes after printing usage to `err`.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace rbflp::cli

#endif  // RBFLP_TOOLS_CLI_H_
