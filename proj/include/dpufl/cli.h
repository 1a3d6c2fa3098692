// Copyright 2026 The dpufl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPUFL_CLI_H_
#define DPUFL_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace dpufl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand (embed, solve, solve-tree, opt, audit, lowerbound,
// bench). args excludes the program name. Documents go to --out or `out`;
// diagnostics to `err`.
int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

// Threads used by bench: DPUFL_THREADS if set, else hardware concurrency.
int ThreadBudget();

}  // namespace dpufl::cli

#endif  // DPUFL_CLI_H_
