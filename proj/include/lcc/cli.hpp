// Copyright 2026 The lcc Authors.
//
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lcc::cli {

// Stable exit-code contract for scripting.
enum ExitCode : int {
    kOk = 0,
    kUsage = 2,        // bad arguments or parameter values
    kData = 3,         // unreadable, malformed or mismatched inputs
    kComputation = 4,  // training or numerical failure
};

// Runs one subcommand; `args` excludes the program name, e.g. {"train", "--input", "a.csv", ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lcc::cli
