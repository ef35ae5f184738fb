// Copyright 2026 The pipedebug Authors
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


#ifndef PIPEDEBUG_TOOLS_CLI_H_
#define PIPEDEBUG_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace pipedebug::cli {

// Exit codes beyond the debugger's own (0, 2, 3).
inline constexpr int kExitMalformedInput = 64;
inline constexpr int kExitExecutorUnavailable = 69;
inline constexpr int kExitInternal = 70;

// Runs the command line `args` (args[0] is the program name).
int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err);

}  // namespace pipedebug::cli

#endif  // PIPEDEBUG_TOOLS_CLI_H_
