// Copyright 2026 The Tabschema Authors
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

#ifndef TABSCHEMA_TOOLS_CLI_H_
#define TABSCHEMA_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace tabschema::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kTransportError = 2;
inline constexpr int kReplayMiss = 3;

// Entry point behind the `tabschema` binary: infer | eval | export | cache.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tabschema::cli

#endif  // TABSCHEMA_TOOLS_CLI_H_
