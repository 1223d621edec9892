// Copyright 2026 The bfbench Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bfbench::cli {

/// Exit codes: 0 success, 1 internal error, 2 usage, 3 validation, 4 resource guard.
enum ExitCode : int { ok = 0, internal = 1, usage = 2, validation = 3, resource = 4 };

/// Runs the command line `args` (program name excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// SHA-256 of a file as lowercase hex.
std::string sha256_file(const std::string& path);

}  // namespace bfbench::cli
