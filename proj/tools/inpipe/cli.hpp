// Copyright 2026 The InPipe Authors
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

#ifndef INPIPE_TOOLS_CLI_HPP_
#define INPIPE_TOOLS_CLI_HPP_

#include <ostream>

namespace inpipe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Entry point of the `inpipe` tool with injectable streams. `out` receives
// CSV written to `--out -`; `err` receives diagnostics.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace inpipe::cli

#endif  // INPIPE_TOOLS_CLI_HPP_
