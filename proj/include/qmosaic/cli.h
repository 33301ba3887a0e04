// Copyright 2026 The QMosaic Authors
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

#pragma once

#include <string>
#include <vector>

namespace qmosaic {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,     // I/O or internal failure
    kExitBadRequest = 2,  // usage or invalid request
    kExitMismatch = 3,    // replay did not reproduce the recorded hash
};

/// Runs the `qmosaic` command line; `args` excludes the program name.
int run_cli(const std::vector<std::string> &args);

}  // namespace qmosaic
