// Copyright 2026 The budgetlab Authors.
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

#ifndef BUDGETLAB_TOOLS_CLI_H_
#define BUDGETLAB_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace budgetlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs the command line `args` (args[0] is the program name). Regular output
// goes to `out`, diagnostics and usage text to `err`. Returns the process
// exit code: 0 on success, 2 for usage errors, 1 for any other error or
// failed check.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace budgetlab::cli

#endif  // BUDGETLAB_TOOLS_CLI_H_
